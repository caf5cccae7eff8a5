"""Pure-Python versions of the hot loops (same signatures as ``_kernels``)."""


def rref_modp(rows, ncols, p):
    """Reduced row echelon form over F_p with first-nonzero pivoting.

    Returns ``(nonzero_rows, pivot_columns)``.
    """
    a = [[x % p for x in row] for row in rows]
    nrows = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        row = a[r]
        inv = pow(row[c], p - 2, p)
        if inv != 1:
            for j in range(c, ncols):
                row[j] = row[j] * inv % p
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    other = a[i]
                    for j in range(c, ncols):
                        if row[j]:
                            other[j] = (other[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def mc_scan(p, n, m, offset, lin, quad):
    """Codes of all x in F_p^n with offset + lin(x) + quad(x, x) = 0.

    ``lin`` holds (out, a, coef) and ``quad`` holds (out, a, b, coef);
    code = sum x_i p^i.
    """
    hits = []
    total = p ** n
    x = [0] * n
    for code in range(total):
        if code:
            i = 0
            while True:
                x[i] += 1
                if x[i] < p:
                    break
                x[i] = 0
                i += 1
        out = list(offset)
        for c, a, coef in lin:
            xa = x[a]
            if xa:
                out[c] += coef * xa
        for c, a, b, coef in quad:
            xa = x[a]
            if xa:
                xb = x[b]
                if xb:
                    out[c] += coef * xa * xb
        for v in out:
            if v % p:
                break
        else:
            hits.append(code)
    return hits
