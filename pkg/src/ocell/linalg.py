"""Exact dense linear algebra over any field whose elements support
+, -, *, /, == and truthiness (Fraction, cyclotomic scalars, ...).

Matrices are tuples of tuples (rows).  Row/column counts are carried by
the caller where a matrix can be empty.
"""

from __future__ import annotations

from fractions import Fraction


def mat(rows):
    return tuple(tuple(r) for r in rows)


def zeros(r, c, zero=Fraction(0)):
    return tuple((zero,) * c for _ in range(r))


def identity(n, zero=Fraction(0), one=Fraction(1)):
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a, s):
    return tuple(tuple(x * s for x in r) for r in a)


def matmul(a, b):
    # a: r x k, b: k x c
    if not a:
        return ()
    bt = tuple(zip(*b)) if b else ()
    out = []
    for ra in a:
        if bt:
            out.append(tuple(_dot(ra, cb) for cb in bt))
        else:
            out.append(())
    return tuple(out)


def _dot(u, v):
    it = iter(zip(u, v))
    try:
        x, y = next(it)
    except StopIteration:
        raise ValueError("dot of empty vectors needs explicit zero")
    acc = x * y
    for x, y in it:
        acc = acc + x * y
    return acc


def matvec(a, v):
    return tuple(_dot(r, v) for r in a)


def transpose(a, cols=None):
    if not a:
        return () if cols is None else tuple(() for _ in range(cols))
    return tuple(zip(*a))


def rref(a):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    rows = [list(r) for r in a]
    if not rows:
        return (), ()
    ncol = len(rows[0])
    pivots = []
    pr = 0
    for pc in range(ncol):
        target = None
        for i in range(pr, len(rows)):
            if rows[i][pc]:
                target = i
                break
        if target is None:
            continue
        rows[pr], rows[target] = rows[target], rows[pr]
        inv = rows[pr][pc] ** -1
        rows[pr] = [x * inv for x in rows[pr]]
        for i in range(len(rows)):
            if i != pr and rows[i][pc]:
                f = rows[i][pc]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[pr])]
        pivots.append(pc)
        pr += 1
        if pr == len(rows):
            break
    return tuple(tuple(r) for r in rows[:pr]), tuple(pivots)


def rank(a):
    return len(rref(a)[0])


def nullspace(a, ncols, zero=Fraction(0), one=Fraction(1)):
    """Basis of the right kernel of `a` (rows are equations in ncols unknowns)."""
    red, pivots = rref(a)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for j in free:
        v = [zero] * ncols
        v[j] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][j]
        basis.append(tuple(v))
    return basis


def sparse_nullspace(rows, ncols, zero=Fraction(0), one=Fraction(1)):
    """Right kernel for rows given as {column: coeff} dicts."""
    work = []
    for r in rows:
        clean = {k: v for k, v in r.items() if v}
        if clean:
            work.append(clean)
    pivots = {}  # column -> reduced row (dict)
    for row in work:
        cur = dict(row)
        while cur:
            col = min(cur)
            if col in pivots:
                piv = pivots[col]
                f = cur[col]
                for c2, v2 in piv.items():
                    nv = cur.get(c2, zero) - f * v2
                    if nv:
                        cur[c2] = nv
                    elif c2 in cur:
                        del cur[c2]
            else:
                inv = cur[col] ** -1
                pivots[col] = {c2: v2 * inv for c2, v2 in cur.items()}
                break
    # back-substitute pivot rows to reduced form
    for col in sorted(pivots, reverse=True):
        row = pivots[col]
        for c2 in [c for c in row if c != col and c in pivots]:
            f = row[c2]
            for c3, v3 in pivots[c2].items():
                nv = row.get(c3, zero) - f * v3
                if nv:
                    row[c3] = nv
                elif c3 in row:
                    del row[c3]
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        vec = [zero] * ncols
        vec[j] = one
        for pc, row in pivots.items():
            if j in row:
                vec[pc] = -row[j]
        basis.append(tuple(vec))
    return basis


def sparse_rank(rows, zero=Fraction(0)):
    """Rank of rows given as {column: coeff} dicts."""
    pivots = {}
    for r in rows:
        cur = {k: v for k, v in r.items() if v}
        while cur:
            col = min(cur)
            if col in pivots:
                piv = pivots[col]
                f = cur[col]
                for c2, v2 in piv.items():
                    nv = cur.get(c2, zero) - f * v2
                    if nv:
                        cur[c2] = nv
                    elif c2 in cur:
                        del cur[c2]
            else:
                inv = cur[col] ** -1
                pivots[col] = {c2: v2 * inv for c2, v2 in cur.items()}
                break
    return len(pivots)


def solve(a, b, ncols):
    """One solution x of a x = b, or None.  b is a flat vector."""
    aug = tuple(tuple(r) + (bv,) for r, bv in zip(a, b))
    red, pivots = rref(aug)
    for i, pc in enumerate(pivots):
        if pc == ncols:
            return None
    x = [None] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    if any(v is None for v in x):
        # free variables: set them to zero of the field
        zero = None
        for r in a:
            for e in r:
                zero = e - e
                break
            if zero is not None:
                break
        if zero is None:
            for bv in b:
                zero = bv - bv
                break
        x = [zero if v is None else v for v in x]
    return tuple(x)


def row_space_basis(vectors):
    """Deterministic basis (RREF rows) of the span of the given row vectors."""
    vs = [v for v in vectors if any(v)]
    if not vs:
        return []
    red, _ = rref(vs)
    return [r for r in red if any(r)]


def span_dim(vectors):
    vs = [v for v in vectors if any(v)]
    if not vs:
        return 0
    return rank(vs)


def in_span(v, basis_rows):
    if not any(v):
        return True
    if not basis_rows:
        return False
    return span_dim(list(basis_rows) + [v]) == span_dim(list(basis_rows))


def subspace_equal(us, vs):
    du, dv = span_dim(us), span_dim(vs)
    if du != dv:
        return False
    return span_dim(list(us) + list(vs)) == du


def intersect_rowspaces(us, vs, ncols, zero=Fraction(0), one=Fraction(1)):
    """Basis of the intersection of two row spans inside F^ncols."""
    us = row_space_basis(us)
    vs = row_space_basis(vs)
    if not us or not vs:
        return []
    # x in both spans: x = a.U = b.V; solve a.U - b.V = 0.
    rows = []
    n_u, n_v = len(us), len(vs)
    for j in range(ncols):
        rows.append(tuple(us[i][j] for i in range(n_u)) + tuple(-vs[i][j] for i in range(n_v)))
    ker = nullspace(rows, n_u + n_v, zero, one)
    out = []
    for k in ker:
        vec = [zero] * ncols
        for i in range(n_u):
            if k[i]:
                for j in range(ncols):
                    vec[j] = vec[j] + k[i] * us[i][j]
        out.append(tuple(vec))
    return row_space_basis(out)
