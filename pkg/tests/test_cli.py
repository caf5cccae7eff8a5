import json
import subprocess
import sys

import pytest
from test_io import _broken_leibniz

from dgdeform.cli import corpus_list, run


def cli(*argv):
    return run([*argv, "--out", "/dev/null"])


def test_mc_worked_example():
    status, doc = cli("mc", "kx_r2_f2")
    assert status == 0
    assert doc["n_objects"] == 2 and doc["n_orbits"] == 2
    assert doc["schema"] == "mcrep-v1" and doc["windows"]["B⊗R"] == [0, 5]


def test_obstruct_example():
    status, doc = cli("obstruct", "kx_r3_f2", "--alpha", "x⊗e=1")
    assert status == 0
    o2 = doc["o2"]
    assert not o2["zero"] and o2["ambient_dim"] == 1 and o2["coords"] == [1]


def test_validate_broken_leibniz(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(_broken_leibniz()))
    status, _ = cli("validate", str(p))
    assert status == 2
    proc = subprocess.run([sys.executable, "-m", "dgdeform.cli", "validate", str(p)],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "['s', 's']" in proc.stderr


def test_manifest_sorted_and_valid():
    man = corpus_list()
    names = [e["name"] for e in man["instances"]]
    assert names == sorted(names) and len(names) == 14
    for prefix in ("kx_r2_", "kx_r3_", "keller_pair_"):
        assert any(n.startswith(prefix) for n in names)
    assert all(e["provenance"] for e in man["instances"])
    for n in names:
        status, doc = cli("validate", n)
        assert status == 0 and doc["valid"]
    assert run(["corpus", "--out", "/dev/null"])[1] == man


@pytest.mark.parametrize("argv", [
    ("cohomology", "kres_f2"),
    ("lift", "kx_nc_f2"),
    ("lift", "kx_r3_f2", "--field", "q"),
    ("deform", "kx_r2_f3", "--alpha", "x⊗e=1"),
    ("codeform", "kx_rtheta_f3"),
    ("restrict", "kx_r2_f5", "--alpha", "x⊗e=3"),
    ("resolve", "kres_f2"),
    ("truncate", "kres_odd_f3", "--at", "0"),
    ("finite-model", "kres_f2"),
    ("keller", "keller_pair_r2_f3"),
    ("zigzag", "contr_r2_f2", "--mode", "P-to-I"),
    ("compare", "keller_pair_r3_f2"),
    ("oracle", "kx_rdiff_f2"),
])
def test_commands_succeed(argv):
    status, doc = cli(*argv)
    assert status == 0
    assert doc["windows"] and all(lo <= hi for lo, hi in doc["windows"].values())


def test_command_results():
    _, d = cli("deform", "kx_r2_f3", "--alpha", "x⊗e=1")
    assert d["certificate"]["ok"] and d["cohomology"]["dims"] == {str(n): int(n == 0) for n in range(6)}
    fam = {json.dumps(f["alpha"], sort_keys=True): f["cohomology"] for f in d["family"]}
    assert fam["{}"] == {str(n): 2 for n in range(6)}
    _, c = cli("codeform", "kx_rtheta_f3")
    assert c["certificate"]["ok"] and all(c["round_trips"][k] for k in
                                          ("unit_iso", "counit_iso", "comparison_iso"))
    _, r = cli("restrict", "kx_r2_f5", "--alpha", "x⊗e=3")
    assert r["comparison_iso"]
    _, k = cli("keller", "keller_pair_r2_f3")
    assert k["matches_bundled"] and k["inclusion_valid"] and all(k["quasi_iso"].values())
    _, f = cli("finite-model", "kres_f2")
    assert f["cohomology_matches"] and f["model_dim"] == 31
    _, o = cli("oracle", "kx_rdiff_f2")
    assert o["equal"] and o["torsor"]["ok"]
    _, z = cli("zigzag", "contr_r2_f2")
    assert all(z["certificates"].values())


def test_precondition_refusals():
    assert cli("deform", "kx_r3_f2", "--alpha", "x⊗e=1")[0] == 3       # not MC
    assert cli("mc", "kx_r2_f2", "--window=-3:2")[0] == 3                # outside inner window
    assert cli("cohomology", "kx_r2_f2", "--window", "1:2")[0] == 0
    assert cli("mc", "kx_r2_f2", "--field", "q")[0] == 3                 # no exhaustive scan over Q
    assert cli("keller", "kres_odd_f3")[0] == 3
    assert cli("mc", "kx_nc_f2", "--bound", "1")[0] == 3


def test_schema_refusals(tmp_path):
    assert cli("mc", "no_such_instance")[0] == 2
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert cli("validate", str(p))[0] == 2
    assert cli("zigzag", "kx_r2_f2")[0] == 2                             # no g in bundle
    assert cli("obstruct", "kx_r2_f2", "--alpha", "q⊗e=1")[0] == 2


def test_byte_identical_reports(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        proc = subprocess.run([sys.executable, "-m", "dgdeform.cli", "obstruct", "kx_nc_f2",
                               "--beta", "x⊗a=1", "--seed", "7", "--out", str(out)],
                              capture_output=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    # the seed only drives a redundant check
    assert cli("obstruct", "kx_r3_f2", "--alpha", "x⊗e=1", "--seed", "3")[1] == \
        cli("obstruct", "kx_r3_f2", "--alpha", "x⊗e=1", "--seed", "11")[1]
