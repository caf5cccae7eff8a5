"""JSON wire formats: dgalg-v1, artin-v1, dgmod-v1, dginst-v1 and the reports.

Scalars are integers or ``"a/b"`` strings.  Linear combinations are
lists of ``[label, coefficient]`` pairs.  A ``--field`` override
reinterprets the same integer data over another field and re-validates.
"""
import json
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

from .artinian import validate_artinian
from .dg import AlgebraMap, DGAlgebra, DGModule, ModuleMap, validate_dg_algebra, validate_module
from .errors import SchemaError
from .fields import Field
from .graded import GradedSpace
from .linalg import ExactMatrix

SCHEMAS = ("dgalg-v1", "artin-v1", "dgmod-v1", "dginst-v1", "mcrep-v1", "defrep-v1")


@lru_cache(maxsize=None)
def _schema(name):
    return json.loads(resources.files("dgdeform").joinpath("schemas", f"{name}.json").read_text())


@lru_cache(maxsize=None)
def _registry():
    return Registry().with_resources(
        (n, Resource.from_contents(_schema(n))) for n in SCHEMAS)


def check_schema(doc, name=None):
    """Validate ``doc`` against its declared (or the given) schema."""
    if not isinstance(doc, dict):
        raise SchemaError("top-level JSON value must be an object")
    name = name or doc.get("schema")
    if name not in SCHEMAS:
        raise SchemaError(f"unknown schema {name!r}; expected one of {list(SCHEMAS)}")
    v = jsonschema.Draft202012Validator(_schema(name), registry=_registry())
    errs = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errs:
        e = errs[0]
        where = "/".join(str(p) for p in e.absolute_path) or "(root)"
        raise SchemaError(f"{name}: {where}: {e.message}")
    return name


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SchemaError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ------------------------------------------------------------- decoding

def _field(doc, override):
    return override if override is not None else Field.from_name(doc["field"])


def _space(doc, F):
    basis = doc["basis"]
    by_deg = sorted((int(k), v) for k, v in basis.items())
    deg_of = {}
    for d, labs in by_deg:
        for s in labs:
            if s in deg_of:
                raise SchemaError(f"basis label {s!r} listed twice")
            deg_of[s] = d
    order = doc.get("order") or [s for _, labs in by_deg for s in labs]
    if sorted(order) != sorted(deg_of):
        raise SchemaError("'order' must list every basis label exactly once")
    window = doc.get("window")
    valid = doc.get("valid")
    opened = set(doc.get("open", ()))
    return GradedSpace(F, [deg_of[s] for s in order], order, window, valid,
                       "lo" in opened, "hi" in opened)


def _terms(sp, F, terms, what):
    out = {}
    for lab, c in terms:
        if lab not in sp.index:
            raise SchemaError(f"{what}: unknown basis label {lab!r}")
        k = sp.index[lab]
        out[k] = F.red(out.get(k, F.zero) + F(c))
    return {k: x for k, x in out.items() if x}


def _index(sp, lab, what):
    if lab not in sp.index:
        raise SchemaError(f"{what}: unknown basis label {lab!r}")
    return sp.index[lab]


def vector(sp, terms, what="vector"):
    F = sp.field
    v = sp.zero()
    for k, x in _terms(sp, F, terms, what).items():
        v[k] = x
    return v


def _diff(doc, sp, F):
    out = {}
    for lab, terms in doc.get("diff", ()):
        a = _index(sp, lab, "diff")
        if a in out:
            raise SchemaError(f"diff: label {lab!r} listed twice")
        out[a] = _terms(sp, F, terms, f"d({lab})")
    return out


def _violation_error(kind, bad):
    v = bad[0]
    return SchemaError(f"{kind} violates {v.kind} at {list(v.items)}: {v.detail}")


def load_algebra(doc, field=None, validate=True):
    check_schema(doc)
    if doc["schema"] not in ("dgalg-v1", "artin-v1"):
        raise SchemaError(f"expected an algebra, got {doc['schema']}")
    F = _field(doc, field)
    sp = _space(doc, F)
    mult = {}
    for a, b, terms in doc["mult"]:
        key = (_index(sp, a, "mult"), _index(sp, b, "mult"))
        if key in mult:
            raise SchemaError(f"mult: pair ({a}, {b}) listed twice")
        mult[key] = _terms(sp, F, terms, f"{a}*{b}")
    unit = doc.get("unit")
    if unit is None:
        if "1" not in sp.index:
            raise SchemaError("no 'unit' given and no basis element labelled '1'")
        unit = [["1", 1]]
    elif isinstance(unit, str):
        unit = [[unit, 1]]
    B = DGAlgebra(sp, vector(sp, unit, "unit"), mult, _diff(doc, sp, F), name=doc.get("name", ""))
    if validate:
        bad = validate_dg_algebra(B)
        if bad:
            raise _violation_error("algebra", bad)
    if doc["schema"] == "artin-v1":
        aug = doc["augmentation"]
        if aug and isinstance(aug[0], list):
            aug = vector(sp, aug, "augmentation")
        elif len(aug) != sp.dim:
            raise SchemaError("augmentation vector has the wrong length")
        B = validate_artinian(B, aug)
    return B


def load_module(doc, field=None, validate=True):
    check_schema(doc, "dgmod-v1")
    F = _field(doc, field)
    sp = _space(doc, F)
    side = doc["side"]
    right = left = None
    ract, lact = {}, {}
    if side in ("right", "bi"):
        if "algebra" not in doc:
            raise SchemaError("a right module needs 'algebra'")
        right = load_algebra(doc["algebra"], F)
        for m, a, terms in doc.get("action", ()):
            ract[(_index(sp, m, "action"), _index(right.space, a, "action"))] = \
                _terms(sp, F, terms, f"{m}.{a}")
    if side == "left":
        if "algebra" not in doc:
            raise SchemaError("a left module needs 'algebra'")
        left = load_algebra(doc["algebra"], F)
        for a, m, terms in doc.get("action", ()):
            lact[(_index(left.space, a, "action"), _index(sp, m, "action"))] = \
                _terms(sp, F, terms, f"{a}.{m}")
    if side == "bi":
        left = load_algebra(doc["left_algebra"], F) if "left_algebra" in doc else right
        for a, m, terms in doc.get("left_action", ()):
            lact[(_index(left.space, a, "left_action"), _index(sp, m, "left_action"))] = \
                _terms(sp, F, terms, f"{a}.{m}")
    M = DGModule(sp, _diff(doc, sp, F), right, ract, left, lact, name=doc.get("name", ""))
    if validate:
        bad = validate_module(M)
        if bad:
            raise _violation_error("module", bad)
    return M


def load_algebra_map(doc, src, tgt):
    F = src.field
    cols = []
    seen = {}
    for lab, terms in doc["images"]:
        seen[_index(src.space, lab, "phi")] = vector(tgt.space, terms, f"phi({lab})")
    for i in range(src.dim):
        cols.append(seen.get(i, tgt.space.zero()))
    phi = AlgebraMap(src, tgt, ExactMatrix.from_columns(F, tgt.dim, cols), name=doc.get("name", "phi"))
    bad = phi.violations()
    if bad:
        raise _violation_error("algebra map", bad)
    return phi


def load_module_map(doc, field=None):
    src = load_module(doc["src"], field)
    tgt = load_module(doc["tgt"], field)
    F = src.field
    seen = {_index(src.space, lab, "g"): vector(tgt.space, terms, f"g({lab})")
            for lab, terms in doc["images"]}
    cols = [seen.get(i, tgt.space.zero()) for i in range(src.dim)]
    return ModuleMap(src, tgt, ExactMatrix.from_columns(F, tgt.dim, cols),
                     doc.get("degree", 0), name=doc.get("name", "g"))


class Instance:
    """A decoded dginst-v1 bundle; missing parts are None."""

    def __init__(self, doc, field=None):
        check_schema(doc, "dginst-v1")
        self.doc = doc
        self.name = doc["name"]
        self.field = _field(doc, field)
        F = self.field
        self.B = load_algebra(doc["B"], F) if "B" in doc else None
        self.R = load_algebra(doc["R"], F) if "R" in doc else None
        if self.R is not None and doc["R"]["schema"] != "artin-v1":
            raise SchemaError("R must be an artin-v1 algebra")
        self.E = load_module(doc["E"], F) if "E" in doc else None
        self.C = load_algebra(doc["C"], F) if "C" in doc else None
        self.phi = load_algebra_map(doc["phi"], self.C, self.B) if "phi" in doc and self.C else None
        self.N = load_module(doc["N"], F) if "N" in doc else None
        self.g = load_module_map(doc["g"], F) if "g" in doc else None
        self.alpha = doc.get("alpha")
        self.beta = doc.get("beta")
        self.tags = list(doc.get("tags", ()))

    def need(self, *parts):
        missing = [p for p in parts if getattr(self, p) is None]
        if missing:
            raise SchemaError(f"instance {self.name!r} has no {', '.join(missing)}")


def load_any(doc, field=None):
    name = check_schema(doc)
    if name in ("dgalg-v1", "artin-v1"):
        return load_algebra(doc, field)
    if name == "dgmod-v1":
        return load_module(doc, field)
    if name == "dginst-v1":
        return Instance(doc, field)
    raise SchemaError(f"{name} is a report format, not an input")


# ------------------------------------------------------------- encoding

def _enc_terms(sp, terms):
    F = sp.field
    return [[sp.labels[c], F.to_json(x)] for c, x in sorted(terms.items()) if x]


def _enc_space(sp):
    basis = {}
    for i, (d, s) in enumerate(zip(sp.degrees, sp.labels)):
        basis.setdefault(str(d), []).append(s)
    out = {"field": sp.field.name, "window": list(sp.window), "basis": basis,
           "order": list(sp.labels)}
    if tuple(sp.valid) != tuple(sp.window):
        out["valid"] = list(sp.valid)
    opened = [e for e, f in (("lo", sp.open_lo), ("hi", sp.open_hi)) if f]
    if opened:
        out["open"] = opened
    return out


def _enc_diff(sp, diff):
    return [[sp.labels[a], _enc_terms(sp, t)] for a, t in sorted(diff.items())]


def dump_algebra(B, artinian=None):
    sp = B.space
    if artinian is None:
        artinian = hasattr(B, "starts")
    doc = _enc_space(sp)
    doc.update(schema="artin-v1" if artinian else "dgalg-v1", name=B.name,
               unit=[[sp.labels[i], sp.field.to_json(x)] for i, x in enumerate(B.unit) if x],
               mult=[[sp.labels[a], sp.labels[b], _enc_terms(sp, t)]
                     for (a, b), t in sorted(B.mult.items())],
               diff=_enc_diff(sp, B.diff))
    if artinian:
        doc["augmentation"] = [[sp.labels[0], 1]]
    return doc


def dump_module(M):
    sp = M.space
    doc = _enc_space(sp)
    doc.update(schema="dgmod-v1", name=M.name, side=M.side, diff=_enc_diff(sp, M.diff))
    if M.right is not None:
        A = M.right
        doc["algebra"] = dump_algebra(A)
        doc["action"] = [[sp.labels[m], A.space.labels[a], _enc_terms(sp, t)]
                         for (m, a), t in sorted(M.ract.items())]
    if M.left is not None:
        L = M.left
        pairs = [[L.space.labels[a], sp.labels[m], _enc_terms(sp, t)]
                 for (a, m), t in sorted(M.lact.items())]
        if M.right is None:
            doc["algebra"] = dump_algebra(L)
            doc["action"] = pairs
        else:
            if not L.same_as(M.right):
                doc["left_algebra"] = dump_algebra(L)
            doc["left_action"] = pairs
    return doc


def dump_algebra_map(phi):
    src, tgt = phi.src.space, phi.tgt.space
    cols = phi.matrix.columns()
    return {"name": phi.name or "phi",
            "images": [[src.labels[i], [[tgt.labels[c], tgt.field.to_json(x)]
                                        for c, x in enumerate(col) if x]]
                       for i, col in enumerate(cols)]}


def dump_module_map(f):
    tgt = f.tgt.space
    return {"name": f.name or "g", "degree": f.degree,
            "src": dump_module(f.src), "tgt": dump_module(f.tgt),
            "images": [[f.src.space.labels[i], [[tgt.labels[c], tgt.field.to_json(x)]
                                                for c, x in enumerate(col) if x]]
                       for i, col in enumerate(f.matrix.columns())]}


def dump_instance(name, F, description="", provenance="", B=None, R=None, E=None, C=None,
                  phi=None, N=None, g=None, alpha=None, beta=None, tags=()):
    doc = {"schema": "dginst-v1", "name": name, "field": F.name}
    if description:
        doc["description"] = description
    if provenance:
        doc["provenance"] = provenance
    if B is not None:
        doc["B"] = dump_algebra(B, artinian=False)
    if R is not None:
        doc["R"] = dump_algebra(R, artinian=True)
    if E is not None:
        doc["E"] = dump_module(E)
    if C is not None:
        doc["C"] = dump_algebra(C, artinian=False)
    if phi is not None:
        doc["phi"] = dump_algebra_map(phi)
    if N is not None:
        doc["N"] = dump_module(N)
    if g is not None:
        doc["g"] = dump_module_map(g)
    if alpha is not None:
        doc["alpha"] = [[k, v] for k, v in sorted(alpha.items())]
    if beta is not None:
        doc["beta"] = [[k, v] for k, v in sorted(beta.items())]
    if tags:
        doc["tags"] = sorted(tags)
    check_schema(doc)
    return doc


def report(kind, command, instance, field, windows, body):
    """A report envelope; ``windows`` maps claim names to [lo, hi]."""
    doc = {"schema": kind, "command": command, "instance": instance, "field": field.name,
           "windows": {k: list(w) for k, w in sorted(windows.items())}}
    doc.update(body)
    check_schema(doc)
    return doc
