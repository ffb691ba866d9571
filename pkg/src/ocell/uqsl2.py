"""The rank-one small quantum group at a primitive odd root of unity:
exact cyclotomic arithmetic, simple and projective modules, block
orbits, endomorphism algebras of block projective generators, and the
dual-algebra block dimension bookkeeping.

All scalars live in the cyclotomic field Q(q) with q a primitive l-th
root of unity; the arithmetic is exact polynomial arithmetic modulo the
l-th cyclotomic polynomial (irreducible over the rationals, so the ring
is a field and kernel ranks are exact).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg


# -- cyclotomic scalars -----------------------------------------------------------


def _poly_divmod(num, den):
    num = list(num)
    out = [Fraction(0)] * (max(len(num) - len(den) + 1, 0))
    while len(num) >= len(den) and any(num):
        if not num[-1]:
            num.pop()
            continue
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        out[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] -= factor * c
        num.pop()
    while num and not num[-1]:
        num.pop()
    return out, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]  # x^n - 1
    den = [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            phi_d = cyclotomic_polynomial(d)
            den = _poly_mul(den, phi_d)
    q, r = _poly_divmod(num, den)
    assert not r, "cyclotomic division must be exact"
    return tuple(q)


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


class Cyc:
    """Element of Q(q), q a primitive ell-th root of unity; coefficients
    are stored in the power basis modulo the cyclotomic polynomial."""

    __slots__ = ("ell", "coeffs")

    def __init__(self, ell, coeffs=None):
        self.ell = ell
        deg = len(cyclotomic_polynomial(ell)) - 1
        cs = [Fraction(0)] * deg
        if coeffs is not None:
            for i, c in enumerate(coeffs):
                cs[i] = Fraction(c)
        self.coeffs = tuple(cs)

    @staticmethod
    def of(ell, rational):
        return Cyc(ell, [Fraction(rational)])

    @staticmethod
    def q_power(ell, k):
        """q^k reduced into the power basis."""
        k %= ell
        deg = len(cyclotomic_polynomial(ell)) - 1
        if k < deg:
            return Cyc(ell, [0] * k + [1])
        # reduce x^k mod the cyclotomic polynomial
        poly = [Fraction(0)] * k + [Fraction(1)]
        _, rem = _poly_divmod(poly, list(cyclotomic_polynomial(ell)))
        return Cyc(ell, rem)

    def _check(self, other):
        if isinstance(other, Cyc):
            assert other.ell == self.ell
            return other
        return Cyc.of(self.ell, other)

    def __add__(self, other):
        other = self._check(other)
        return Cyc(self.ell, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.ell, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        prod = _poly_mul(list(self.coeffs), list(other.coeffs))
        _, rem = _poly_divmod(prod, list(cyclotomic_polynomial(self.ell)))
        return Cyc(self.ell, rem)

    __rmul__ = __mul__

    def inverse(self):
        """Extended Euclid against the (irreducible) cyclotomic modulus."""
        if not any(self.coeffs):
            raise ZeroDivisionError("cyclotomic zero has no inverse")
        a = list(cyclotomic_polynomial(self.ell))
        b = [c for c in self.coeffs]
        # invariants: r0 = s0*phi + t0*b-ish; track only the b-cofactor
        r0, r1 = a, list(b)
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while any(r1):
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
        # r0 = gcd (a constant, since the modulus is irreducible)
        assert len(r0) == 1 and r0[0], "modulus must be irreducible"
        inv_const = 1 / r0[0]
        res = [c * inv_const for c in t0]
        _, rem = _poly_divmod(res, a)
        return Cyc(self.ell, rem)

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, n):
        if n == -1:
            return self.inverse()
        out = Cyc.of(self.ell, 1)
        base = self
        if n < 0:
            base = self.inverse()
            n = -n
        for _ in range(n):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.of(self.ell, other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.ell == other.ell and self.coeffs == other.coeffs

    def __bool__(self):
        return any(self.coeffs)

    def __hash__(self):
        return hash((self.ell, self.coeffs))

    def __repr__(self):
        bits = []
        for i, c in enumerate(self.coeffs):
            if c:
                bits.append(f"{c}" if i == 0 else (f"{c}q^{i}" if i > 1 else f"{c}q"))
        return "+".join(bits) if bits else "0"


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    while out and not out[-1]:
        out.pop()
    return out


def q_integer(ell, n):
    """[n] = (q^n - q^{-n}) / (q - q^{-1})."""
    q = Cyc.q_power(ell, 1)
    qi = Cyc.q_power(ell, ell - 1)
    num = Cyc.q_power(ell, n % ell) - Cyc.q_power(ell, (-n) % ell)
    den = q - qi
    return num / den


# -- the small quantum group and its modules -----------------------------------------


@dataclass
class UqModule:
    """Module with exact K/E/F matrices over the cyclotomic field.

    Basis vectors are graded by K-eigenvalue exponents: weight j means
    the K-eigenvalue is q^j (exponents live modulo ell; we keep integer
    labels for bookkeeping and reduce when comparing eigenvalues)."""

    ell: int
    dim: int
    weights: tuple          # integer exponent label per basis vector
    e_mat: tuple
    f_mat: tuple
    tag: str = ""

    def k_eigen(self, idx):
        return Cyc.q_power(self.ell, self.weights[idx])

    def k_matrix(self):
        z = Cyc.of(self.ell, 0)
        return tuple(tuple(self.k_eigen(i) if i == j else z for j in range(self.dim))
                     for i in range(self.dim))


def _zeros(ell, r, c):
    z = Cyc.of(ell, 0)
    return [[z for _ in range(c)] for _ in range(r)]


def verify_uq_relations(m: UqModule):
    """K E K^-1 = q^2 E, K F K^-1 = q^-2 F, [E, F] = (K - K^-1)/(q - q^-1),
    E^ell = F^ell = 0 and K^ell = 1."""
    ell = m.ell
    q2 = Cyc.q_power(ell, 2)
    qm2 = Cyc.q_power(ell, ell - 2)
    for i in range(m.dim):
        for j in range(m.dim):
            ke = m.k_eigen(i) * m.e_mat[i][j] / m.k_eigen(j)
            if ke != q2 * m.e_mat[i][j]:
                raise AssertionError("K E K^-1 != q^2 E")
            kf = m.k_eigen(i) * m.f_mat[i][j] / m.k_eigen(j)
            if kf != qm2 * m.f_mat[i][j]:
                raise AssertionError("K F K^-1 != q^-2 F")
    q = Cyc.q_power(ell, 1)
    qi = Cyc.q_power(ell, ell - 1)
    den = q - qi
    ef = _mat_mul(m.e_mat, m.f_mat)
    fe = _mat_mul(m.f_mat, m.e_mat)
    for i in range(m.dim):
        for j in range(m.dim):
            lhs = ef[i][j] - fe[i][j]
            rhs = ((m.k_eigen(i) - m.k_eigen(i).inverse()) / den) if i == j else Cyc.of(ell, 0)
            if lhs != rhs:
                raise AssertionError("[E, F] relation fails")
    epow = m.e_mat
    fpow = m.f_mat
    for _ in range(ell - 1):
        epow = _mat_mul(epow, m.e_mat)
        fpow = _mat_mul(fpow, m.f_mat)
    if any(any(x for x in row) for row in epow) or any(any(x for x in row) for row in fpow):
        raise AssertionError("E^ell or F^ell nonzero")
    for j in m.weights:
        pass  # K^ell = q^{ell j} = 1 automatically
    return True


def _mat_mul(a, b):
    n = len(a)
    k = len(b)
    c = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(c):
            acc = None
            for t in range(k):
                term = a[i][t] * b[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def simple_uq(mu: int, ell: int) -> UqModule:
    """The simple module of highest weight mu (0 <= mu <= ell-1),
    dimension mu + 1."""
    assert ell >= 3 and ell % 2 == 1
    assert 0 <= mu < ell
    dim = mu + 1
    weights = tuple(mu - 2 * k for k in range(dim))
    e = _zeros(ell, dim, dim)
    f = _zeros(ell, dim, dim)
    for k in range(dim - 1):
        f[k + 1][k] = Cyc.of(ell, 1)
    for k in range(1, dim):
        e[k - 1][k] = q_integer(ell, k) * q_integer(ell, mu - k + 1)
    m = UqModule(ell, dim, weights, tuple(tuple(r) for r in e), tuple(tuple(r) for r in f),
                 tag=f"L({mu};{ell})")
    verify_uq_relations(m)
    return m


def baby_verma_uq(mu: int, ell: int) -> UqModule:
    """Induced module from the Borel, dimension ell, highest weight mu."""
    dim = ell
    weights = tuple(mu - 2 * k for k in range(dim))
    e = _zeros(ell, dim, dim)
    f = _zeros(ell, dim, dim)
    for k in range(dim - 1):
        f[k + 1][k] = Cyc.of(ell, 1)
    for k in range(1, dim):
        e[k - 1][k] = q_integer(ell, k) * q_integer(ell, mu - k + 1)
    m = UqModule(ell, dim, weights, tuple(tuple(r) for r in e), tuple(tuple(r) for r in f),
                 tag=f"Z({mu};{ell})")
    verify_uq_relations(m)
    return m


def dual_uq(m: UqModule) -> UqModule:
    """Costandard twist: exchange the E and F actions on the dual basis
    (weights preserved)."""
    e = tuple(tuple(m.f_mat[j][i] for j in range(m.dim)) for i in range(m.dim))
    f = tuple(tuple(m.e_mat[j][i] for j in range(m.dim)) for i in range(m.dim))
    out = UqModule(m.ell, m.dim, m.weights, e, f, tag=f"dual({m.tag})")
    verify_uq_relations(out)
    return out


def tensor_uq(a: UqModule, b: UqModule) -> UqModule:
    """Tensor product with the coproduct  E -> E (x) 1 + K (x) E,
    F -> F (x) K^{-1} + 1 (x) F, K -> K (x) K."""
    ell = a.ell
    dim = a.dim * b.dim
    weights = []
    for i in range(a.dim):
        for j in range(b.dim):
            weights.append(a.weights[i] + b.weights[j])
    z = Cyc.of(ell, 0)
    e = [[z] * dim for _ in range(dim)]
    f = [[z] * dim for _ in range(dim)]

    def idx(i, j):
        return i * b.dim + j

    for i in range(a.dim):
        for j in range(b.dim):
            col = idx(i, j)
            for i2 in range(a.dim):
                if a.e_mat[i2][i]:
                    e[idx(i2, j)][col] = e[idx(i2, j)][col] + a.e_mat[i2][i]
                if a.f_mat[i2][i]:
                    f[idx(i2, j)][col] = f[idx(i2, j)][col] + \
                        a.f_mat[i2][i] * Cyc.q_power(ell, -b.weights[j] % ell)
            for j2 in range(b.dim):
                if b.e_mat[j2][j]:
                    e[idx(i, j2)][col] = e[idx(i, j2)][col] + \
                        Cyc.q_power(ell, a.weights[i] % ell) * b.e_mat[j2][j]
                if b.f_mat[j2][j]:
                    f[idx(i, j2)][col] = f[idx(i, j2)][col] + b.f_mat[j2][j]
    m = UqModule(ell, dim, tuple(weights), tuple(tuple(r) for r in e), tuple(tuple(r) for r in f),
                 tag=f"{a.tag}(x){b.tag}")
    verify_uq_relations(m)
    return m


def casimir_matrix(m: UqModule):
    """C = F E + (q K + q^{-1} K^{-1}) / (q - q^{-1})^2."""
    ell = m.ell
    q = Cyc.q_power(ell, 1)
    qi = Cyc.q_power(ell, ell - 1)
    den = (q - qi) * (q - qi)
    fe = _mat_mul(m.f_mat, m.e_mat)
    out = []
    for i in range(m.dim):
        row = list(fe[i])
        row[i] = row[i] + (q * m.k_eigen(i) + qi * m.k_eigen(i).inverse()) / den
        out.append(tuple(row))
    return tuple(out)


def casimir_eigenvalue(ell, mu):
    """Value of the Casimir on a highest weight vector of weight mu."""
    q = Cyc.q_power(ell, 1)
    qi = Cyc.q_power(ell, ell - 1)
    den = (q - qi) * (q - qi)
    return (Cyc.q_power(ell, mu + 1) + Cyc.q_power(ell, -(mu + 1) % ell)) / den


def submodule_from_vectors(m: UqModule, seeds):
    """Closure of seed vectors under E, F (exact row-space growth)."""
    basis = []
    frontier = []
    zero = Cyc.of(m.ell, 0)
    one = Cyc.of(m.ell, 1)
    for v in seeds:
        if any(v) and not linalg.in_span(v, basis):
            basis = linalg.row_space_basis(basis + [tuple(v)])
            frontier.append(tuple(v))
    while frontier:
        v = frontier.pop()
        for mat in (m.e_mat, m.f_mat):
            img = tuple(sum((mat[i][j] * v[j] for j in range(m.dim) if v[j]), zero)
                        for i in range(m.dim))
            if any(img) and not linalg.in_span(img, basis):
                basis = linalg.row_space_basis(basis + [img])
                frontier.append(img)
    return basis


def generalized_casimir_component(m: UqModule, chi, nilp=4) -> UqModule:
    """Submodule where (C - chi)^nilp vanishes, as a UqModule with an
    adapted weight-homogeneous basis.  The Casimir preserves the raw
    weight labels, so the computation runs per label block."""
    ell = m.ell
    c = casimir_matrix(m)
    zero = Cyc.of(ell, 0)
    one = Cyc.of(ell, 1)
    by_label = {}
    for i, w in enumerate(m.weights):
        by_label.setdefault(w, []).append(i)
    basis = []
    weights = []
    for w in sorted(by_label, reverse=True):
        idxs = by_label[w]
        n = len(idxs)
        blk = [[c[idxs[i]][idxs[j]] - (chi if i == j else zero) for j in range(n)]
               for i in range(n)]
        for i in range(n):
            for j in range(n):
                if m.weights[idxs[i]] != m.weights[idxs[j]] and c[idxs[i]][idxs[j]]:
                    raise AssertionError("Casimir mixed weight labels")
        power = linalg.mat(blk)
        base = linalg.mat(blk)
        for _ in range(nilp - 1):
            power = _mat_mul(power, base)
        for vec in linalg.nullspace(power, n, zero=zero, one=one):
            full = [zero] * m.dim
            for t, comp in zip(idxs, vec):
                full[t] = comp
            basis.append(tuple(full))
            weights.append(w)
    return _restrict(m, basis, weights, tag=f"block({m.tag})")


def _restrict(m: UqModule, basis, weights, tag=""):
    ell = m.ell
    n = len(basis)
    cols = [tuple(b[i] for b in basis) for i in range(m.dim)]

    def coords(vec):
        sol = linalg.solve(cols, vec, n)
        assert sol is not None, "vector outside the subspace"
        return sol

    e = []
    f = []
    for b in basis:
        img_e = tuple(sum((m.e_mat[i][j] * b[j] for j in range(m.dim) if b[j]), Cyc.of(ell, 0))
                      for i in range(m.dim))
        img_f = tuple(sum((m.f_mat[i][j] * b[j] for j in range(m.dim) if b[j]), Cyc.of(ell, 0))
                      for i in range(m.dim))
        e.append(coords(img_e))
        f.append(coords(img_f))
    e_mat = tuple(tuple(e[j][i] for j in range(n)) for i in range(n))
    f_mat = tuple(tuple(f[j][i] for j in range(n)) for i in range(n))
    out = UqModule(ell, n, tuple(weights), e_mat, f_mat, tag=tag)
    verify_uq_relations(out)
    return out


@lru_cache(maxsize=None)
def projective_uq(mu: int, ell: int) -> UqModule:
    """Indecomposable projective cover of the simple of weight mu, built
    as the Casimir block component of (Steinberg) (x) (simple), certified
    by the lifting test against the baby Verma surjections."""
    assert 0 <= mu < ell
    if mu == ell - 1:
        return simple_uq(mu, ell)
    st = simple_uq(ell - 1, ell)
    aux = simple_uq(mu + 1, ell)
    t = tensor_uq(st, aux)
    chi = casimir_eigenvalue(ell, mu)
    p = generalized_casimir_component(t, chi)
    assert p.dim == 2 * ell, f"projective cover dimension {p.dim} != {2 * ell}"
    assert _lifting_certificate(p, mu, ell)
    return p


def _lifting_certificate(p: UqModule, mu: int, ell: int):
    """Projectivity test: maps to the simple top lift through the baby
    Verma surjection, for both weights of the block."""
    mu2 = ell - mu - 2
    for nu in (mu, mu2):
        z = baby_verma_uq(nu, ell)
        l = simple_uq(nu, ell)
        hom_pl = uq_hom(p, l)
        hom_pz = uq_hom(p, z)
        # the projection Z -> L identifies Hom(P, Z) with a subspace of
        # Hom(P, L); surjectivity of the lift is a dimension count here
        proj = _baby_to_simple(z, l)
        lifted = []
        for t in hom_pz:
            comp = _mat_mul(proj, t)
            lifted.append(tuple(x for row in comp for x in row))
        want = [tuple(x for row in t for x in row) for t in hom_pl]
        span = linalg.row_space_basis(lifted)
        for w in want:
            if not linalg.in_span(w, span):
                return False
    return True


def _baby_to_simple(z: UqModule, l: UqModule):
    out = _zeros(z.ell, l.dim, z.dim)
    for k in range(l.dim):
        out[k][k] = Cyc.of(z.ell, 1)
    return tuple(tuple(r) for r in out)


def uq_hom(a: UqModule, b: UqModule):
    """Basis of module maps a -> b (intertwining E, F and the K-grading)."""
    ell = a.ell
    zero = Cyc.of(ell, 0)
    one = Cyc.of(ell, 1)
    nvar = a.dim * b.dim
    rows = []
    # K-grading: entries between different K-eigenvalues vanish
    for i in range(b.dim):
        for j in range(a.dim):
            if (b.weights[i] - a.weights[j]) % ell != 0:
                rows.append({i * a.dim + j: one})
    for mat_a, mat_b in ((a.e_mat, b.e_mat), (a.f_mat, b.f_mat)):
        # T A - B T = 0
        for i in range(b.dim):
            for j in range(a.dim):
                row = {}
                for k in range(a.dim):
                    if mat_a[k][j]:
                        row[i * a.dim + k] = row.get(i * a.dim + k, zero) + mat_a[k][j]
                for k in range(b.dim):
                    if mat_b[i][k]:
                        row[k * a.dim + j]= row.get(k * a.dim + j, zero) - mat_b[i][k]
                if row:
                    rows.append(row)
    ker = linalg.sparse_nullspace(rows, nvar, zero=zero, one=one)
    out = []
    for vec in ker:
        out.append(tuple(tuple(vec[i * a.dim + j] for j in range(a.dim)) for i in range(b.dim)))
    return out


def block_orbits(ell: int):
    """Regular linkage orbits {mu, ell-mu-2} and the Steinberg singleton."""
    assert ell >= 3 and ell % 2 == 1
    orbits = []
    for mu in range((ell - 1) // 2):
        orbits.append((mu, ell - mu - 2))
    orbits.append((ell - 1,))
    return orbits


def radical_filtration_uq(m: UqModule):
    """Descending radical chain via kernels of maps to the simples."""
    ell = m.ell
    chain = [[tuple(one_hot(m.ell, m.dim, i)) for i in range(m.dim)]]
    current = m
    basis_stack = [chain[0]]
    while current.dim:
        maps = []
        for mu in range(ell):
            for t in uq_hom(current, simple_uq(mu, ell)):
                maps.append(t)
        rows = []
        for t in maps:
            rows.extend(t)
        ker = linalg.nullspace(rows, current.dim, zero=Cyc.of(ell, 0), one=Cyc.of(ell, 1)) \
            if rows else [tuple(one_hot(ell, current.dim, i)) for i in range(current.dim)]
        if not ker:
            chain.append([])
            break
        # express kernel vectors in the ambient coordinates
        amb = []
        prev = basis_stack[-1]
        for vec in ker:
            acc = [Cyc.of(ell, 0)] * m.dim
            for c, bvec in zip(vec, prev):
                if c:
                    acc = [x + c * y for x, y in zip(acc, bvec)]
            amb.append(tuple(acc))
        amb = linalg.row_space_basis(amb)
        chain.append(amb)
        weights = _weights_for(m, amb)
        current = _restrict(m, amb, weights, tag="rad")
        basis_stack.append(amb)
    if chain[-1]:
        chain.append([])
    return chain


def one_hot(ell, n, i):
    return tuple(Cyc.of(ell, 1 if j == i else 0) for j in range(n))


def _weights_for(m, basis):
    weights = []
    for vec in basis:
        ws = {m.weights[i] for i in range(m.dim) if vec[i]}
        assert len(ws) == 1, "basis vector is not weight homogeneous"
        weights.append(next(iter(ws)))
    return weights


def loewy_layers_uq(m: UqModule):
    """Simple multiplicities of the radical layers, top first."""
    ell = m.ell
    chain = radical_filtration_uq(m)
    layers = []
    for k in range(len(chain) - 1):
        upper = chain[k]
        lower = chain[k + 1]
        layer_dim_by_weight = {}
        for w in sorted(set(m.weights), reverse=True):
            du = len([v for v in _weight_component(m, upper, w)])
            dl = len([v for v in _weight_component(m, lower, w)])
            if du - dl:
                layer_dim_by_weight[w] = du - dl
        layers.append(_decompose_weights(ell, layer_dim_by_weight))
    return [l for l in layers if l]


def _weight_component(m, basis, w):
    comps = []
    for vec in basis:
        comp = tuple(vec[i] if m.weights[i] == w else Cyc.of(m.ell, 0) for i in range(m.dim))
        if any(comp):
            comps.append(comp)
    return linalg.row_space_basis(comps)


def _decompose_weights(ell, dims):
    """Greedy decomposition of a weight-dimension table into simple
    characters (weights are integer labels, top down)."""
    remaining = dict(dims)
    out = {}
    while any(remaining.values()):
        top = max(w for w, d in remaining.items() if d)
        assert 0 <= top <= ell - 1, f"unexpected top weight {top}"
        mult = remaining[top]
        assert mult > 0
        out[top] = out.get(top, 0) + mult
        for k in range(top + 1):
            w = top - 2 * k
            remaining[w] = remaining.get(w, 0) - mult
    return tuple(sorted(out.items(), reverse=True))


def endo_algebra_uq(mu: int, ell: int):
    """Graded endomorphism algebra of the block projective generator."""
    orbit = next(o for o in block_orbits(ell) if mu in o)
    if len(orbit) == 1:
        return {"dimension": 1, "graded_dims": (1,), "block": orbit, "pass": True}
    mu1, mu2 = orbit
    p1 = projective_uq(mu1, ell)
    p2 = projective_uq(mu2, ell)
    homs = {}
    summands = {mu1: p1, mu2: p2}
    for x, px in summands.items():
        for y, py in summands.items():
            homs[(x, y)] = uq_hom(px, py)
    dim = sum(len(v) for v in homs.values())
    rad_chains = {y: radical_filtration_uq(py) for y, py in summands.items()}
    graded = {}
    for (x, y), maps in homs.items():
        for t in maps:
            deg = _uq_map_degree(t, rad_chains[y], summands[y])
            graded[deg] = graded.get(deg, 0) + 1
    graded_dims = tuple(graded.get(k, 0) for k in range(max(graded) + 1)) if graded else ()
    return {"dimension": dim, "graded_dims": graded_dims, "block": orbit,
            "pass": dim == 8 and graded_dims == (2, 4, 2)}


def _uq_map_degree(t, rad_chain, target):
    deg = 0
    for k in range(1, len(rad_chain)):
        fam = rad_chain[k]
        inside = True
        for j in range(len(t[0]) if t else 0):
            vec = tuple(t[i][j] for i in range(target.dim))
            if any(vec) and not linalg.in_span(vec, fam):
                inside = False
                break
        if inside:
            deg = k
        else:
            break
    return deg


# -- the dual algebra blocks --------------------------------------------------------


def uq_pbw_monomials(ell):
    return [(a, b, c) for a in range(ell) for b in range(ell) for c in range(ell)]


def matrix_element_rep_uq(m: UqModule, covec_idx, vec_idx):
    """Exponential representation of the matrix element functional: a
    dict (a, w, c) -> Cyc meaning the value on F^a K^b E^c is
    q^{b w} times the stored scalar (w = K-exponent of the E^c image,
    reduced mod ell).  Distinct K-eigenvalues are linearly independent
    against the powers of K, so equality of representations is equality
    of value tables."""
    ell = m.ell
    out = {}
    base = one_hot(ell, m.dim, vec_idx)
    e_chain = [base]
    vec = base
    for _ in range(ell - 1):
        vec = tuple(sum((m.e_mat[i][j] * vec[j] for j in range(m.dim) if vec[j]), Cyc.of(ell, 0))
                    for i in range(m.dim))
        e_chain.append(vec)
    for c, vec_c in enumerate(e_chain):
        if not any(vec_c):
            continue
        w = _vec_weight(m, vec_c) % ell
        f_chain_vec = vec_c
        for a in range(ell):
            if a > 0:
                f_chain_vec = tuple(
                    sum((m.f_mat[i][j] * f_chain_vec[j] for j in range(m.dim) if f_chain_vec[j]),
                        Cyc.of(ell, 0)) for i in range(m.dim))
            if not any(f_chain_vec):
                break
            comp = f_chain_vec[covec_idx]
            if comp:
                out[(a, w, c)] = out.get((a, w, c), Cyc.of(ell, 0)) + comp
    return {k: v for k, v in out.items() if v}


def matrix_element_value_uq(rep, ell, a, b, c):
    """Value on the monomial F^a K^b E^c from the exponential rep."""
    total = Cyc.of(ell, 0)
    for (ka, w, kc), coeff in rep.items():
        if ka == a and kc == c:
            total = total + Cyc.q_power(ell, (b * w) % ell) * coeff
    return total


def _vec_weight(m, vec):
    ws = {m.weights[i] for i in range(m.dim) if vec[i]}
    assert len(ws) == 1
    return next(iter(ws))


def block_dual_dims(ell: int):
    """Dimension bookkeeping of the dual-algebra blocks: regular blocks
    2 ell^2 with layers (a^2+b^2, 4ab, a^2+b^2), Steinberg ell^2, total
    ell^3; the per-block dimensions are computed from the kernel of the
    matrix-element pairing on P* (x) P over the block generator."""
    report = {"ell": ell, "blocks": [], "pass": True}
    total = 0
    for orbit in block_orbits(ell):
        if len(orbit) == 1:
            dim_l = ell
            entry = {"orbit": orbit, "dual_dim": dim_l * dim_l, "layers": ((dim_l * dim_l),)}
            total += dim_l * dim_l
            report["blocks"].append(entry)
            continue
        mu1, mu2 = orbit
        a = mu1 + 1
        b = mu2 + 1
        span_dim, layer_dims = _block_dual_span_dims(ell, orbit)
        entry = {
            "orbit": orbit,
            "dual_dim": span_dim,
            "expected": 2 * ell * ell,
            "layers": layer_dims,
            "expected_layers": (a * a + b * b, 4 * a * b, a * a + b * b),
        }
        if span_dim != 2 * ell * ell or tuple(layer_dims) != entry["expected_layers"]:
            report["pass"] = False
        total += span_dim
        report["blocks"].append(entry)
    report["total"] = total
    if total != ell ** 3:
        report["pass"] = False
    return report


def _block_dual_span_dims(ell, orbit):
    """Span dimension of the matrix elements of the block projective
    generator, and the increasing filtration by Loewy length of the
    spanning module."""
    mu1, mu2 = orbit
    mods_by_ll = {
        1: [simple_uq(mu1, ell), simple_uq(mu2, ell)],
        2: [baby_verma_uq(mu1, ell), baby_verma_uq(mu2, ell),
            dual_uq(baby_verma_uq(mu1, ell)), dual_uq(baby_verma_uq(mu2, ell))],
        3: [projective_uq(mu1, ell), projective_uq(mu2, ell)],
    }
    layer_dims = []
    prev = 0
    span_rows = []
    key_index = {}
    for k in (1, 2, 3):
        for m in mods_by_ll[k]:
            for i in range(m.dim):
                for j in range(m.dim):
                    rep = matrix_element_rep_uq(m, i, j)
                    if not rep:
                        continue
                    row = {}
                    for key, val in rep.items():
                        if key not in key_index:
                            key_index[key] = len(key_index)
                        row[key_index[key]] = val
                    span_rows.append(row)
        cur = linalg.sparse_rank(span_rows, zero=Cyc.of(ell, 0))
        layer_dims.append(cur - prev)
        prev = cur
    return prev, tuple(layer_dims)


def kernel_vs_relations_uq(ell: int, orbit):
    """Root-of-unity kernel identification: on P* (x) P over the block
    generator, the kernel of the matrix-element pairing equals the span
    of the endomorphism twists, per K-weight pair."""
    mu1, mu2 = orbit
    summands = [projective_uq(mu1, ell), projective_uq(mu2, ell)]
    homs = {}
    for xi, x in enumerate(summands):
        for yi, y in enumerate(summands):
            homs[(xi, yi)] = uq_hom(x, y)
    keys = uq_pbw_monomials(ell)
    kindex = {k: i for i, k in enumerate(keys)}
    report = {"orbit": orbit, "pass": True, "bidegree": {}}
    # group tensor coordinates by (covector weight, vector weight)
    slots = {}
    for xi, x in enumerate(summands):
        for yi, y in enumerate(summands):
            for i in range(x.dim):
                for j in range(y.dim):
                    bd = (x.weights[i] % (2 * ell), y.weights[j] % (2 * ell))
                    slots.setdefault(bd, []).append((xi, yi, i, j))
    for bd, coords in sorted(slots.items()):
        rows = []
        for (xi, yi, i, j) in coords:
            if xi != yi:
                rows.append(None)  # cross terms pair to zero identically
                continue
            tbl = matrix_element_table_uq(summands[xi], i, j)
            row = [Cyc.of(ell, 0)] * len(keys)
            for key, val in tbl.items():
                row[kindex[key]] = val
            rows.append(tuple(row))
        nvar = len(coords)
        eq_rows = []
        for t in range(len(keys)):
            row = {}
            for s, r in enumerate(rows):
                if r is not None and r[t]:
                    row[s] = r[t]
            if row:
                eq_rows.append(row)
        ker = linalg.sparse_nullspace(eq_rows, nvar, zero=Cyc.of(ell, 0), one=Cyc.of(ell, 1))
        twists = _twist_span(ell, summands, homs, coords)
        eq = linalg.subspace_equal(ker, twists)
        report["bidegree"][bd] = {
            "slice_dim": nvar,
            "kernel_dim": linalg.span_dim(ker),
            "twist_dim": linalg.span_dim(twists),
            "equal": eq,
        }
        if not eq:
            report["pass"] = False
    return report


def _twist_span(ell, summands, homs, coords):
    pos = {c: t for t, c in enumerate(coords)}
    zero = Cyc.of(ell, 0)
    out = []
    for (xi, yi), maps in homs.items():
        x, y = summands[xi], summands[yi]
        for t in maps:
            # phi: X -> Y; relations (phi* eta) (x) v - eta (x) phi v over
            # covectors eta on Y and vectors v in any summand
            for zi, z in enumerate(summands):
                for ei in range(y.dim):
                    for vj in range(z.dim):
                        vec = [zero] * len(coords)
                        hit = False
                        if zi == xi:
                            for k in range(y.dim):
                                if t[k][vj] and (yi, yi, ei, k) in pos:
                                    vec[pos[(yi, yi, ei, k)]] = vec[pos[(yi, yi, ei, k)]] - t[k][vj]
                                    hit = True
                        for k in range(x.dim):
                            if t[ei][k] and (xi, zi, k, vj) in pos:
                                vec[pos[(xi, zi, k, vj)]] = vec[pos[(xi, zi, k, vj)]] + t[ei][k]
                                hit = True
                        if hit and any(vec):
                            out.append(tuple(vec))
    return out
