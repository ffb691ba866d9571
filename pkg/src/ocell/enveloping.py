"""Chevalley-basis structure constants, PBW normal-form rewriting for
the enveloping algebra, and the rank-one Casimir with its central
character.

Sign rule.  The constants N_{a,b} with [x_a, x_b] = N_{a,b} x_{a+b} are
fixed by the extraspecial-pair convention: positive roots are ordered by
(height, lex); for each non-simple positive root g the extraspecial pair
is the decomposition g = a + b with a minimal in the ordering; for those
pairs N_{a,b} = p + 1 > 0 where p is the largest integer with
b - p a a root.  Every other constant follows from antisymmetry, the
opposition rule N_{-a,-b} = -N_{a,b}, and the two Jacobi-type relations

    a+b+c = 0        =>  N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b),
    a+b+c+d = 0      =>  sum of N N / (pair length)^2 over the three
                         pairings vanishes (no two of a,b,c,d opposite).

This is deterministic, and the test suite certifies the outcome by an
exhaustive Jacobi check on all basis triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .rootsys import RootSystem, Weight

# generator tags: ('f', k) / ('e', k) index positive roots, ('h', i) simple coroots


class StructureConstants:
    """Bracket tables for a Chevalley basis of the given root system."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        m = rs.num_positive
        self._roots = {}
        for k in range(m):
            self._roots[rs.positive_roots[k]] = k
        self._signed = {}
        for k in range(m):
            g = rs.positive_roots[k]
            self._signed[g] = (1, k)
            self._signed[tuple(-c for c in g)] = (-1, k)
        self.N = {}
        self._build_positive_constants()
        self.coroot_expansion = tuple(self._coroot(k) for k in range(m))

    # -- construction ---------------------------------------------------------

    def _is_root(self, g):
        return g in self._signed

    def _norm(self, g):
        return Fraction(self.rs.bilinear(g, g))

    def _pmax(self, a, b):
        """Largest p with b - p a a root (a, b roots, b != +-a)."""
        p = 0
        cur = b
        while True:
            nxt = tuple(x - y for x, y in zip(cur, a))
            if not self._is_root(nxt):
                break
            cur = nxt
            p += 1
        return p

    def _build_positive_constants(self):
        rs = self.rs
        pos = rs.positive_roots
        for k, gamma in enumerate(pos):
            if rs.height(k) == 1:
                continue
            pairs = []
            for i, a in enumerate(pos):
                b = tuple(x - y for x, y in zip(gamma, a))
                if b in self._roots and self._roots[b] > i:
                    pairs.append((i, self._roots[b]))
            pairs.sort()
            i0, j0 = pairs[0]
            a0, b0 = pos[i0], pos[j0]
            self.N[(a0, b0)] = self._pmax(a0, b0) + 1
            for (i, j) in pairs[1:]:
                a, b = pos[i], pos[j]
                self.N[(a, b)] = self._derive_special(a0, b0, a, b, gamma)

    def _derive_special(self, a0, b0, a, b, gamma):
        # four roots a0 + b0 - a - b = 0, no two opposite
        neg = lambda g: tuple(-c for c in g)
        gg = self._norm(gamma)
        total = Fraction(0)
        d1 = tuple(x - y for x, y in zip(b0, a))      # b0 + (-a)
        if self._is_root(d1):
            total += self._mixed(b0, a) * self._mixed_pair(a0, b) / self._norm(d1)
        d2 = tuple(x - y for x, y in zip(a0, a))      # (-a) + a0
        if self._is_root(d2):
            total += (-self._mixed(a, a0)) * self._mixed(b0, b) / self._norm(d2)
        val = gg / Fraction(self.N[(a0, b0)]) * total
        assert val.denominator == 1, "extraspecial propagation left a denominator"
        return int(val)

    def _mixed_pair(self, x, y):
        # N_{x, -y} for positive roots x, y (wrapper used during construction)
        return self._mixed(x, y)

    def _mixed(self, xi, nu):
        """N_{xi, -nu} for positive roots xi != nu with xi - nu a root."""
        diff = tuple(x - y for x, y in zip(xi, nu))
        if not self._is_root(diff):
            return 0
        if all(c >= 0 for c in diff):
            sigma = diff
            n = self.N[(nu, sigma)] if (nu, sigma) in self.N else -self.N[(sigma, nu)]
            return -n * self._norm(sigma) / self._norm(xi)
        sigma = tuple(-c for c in diff)
        n = self.N[(sigma, xi)] if (sigma, xi) in self.N else -self.N[(xi, sigma)]
        return n * self._norm(sigma) / self._norm(nu)

    def _coroot(self, k):
        """beta_k^vee in the basis of simple coroots (integer tuple)."""
        rs = self.rs
        g = rs.positive_roots[k]
        nn = self._norm(g)
        out = []
        for i in range(rs.rank):
            v = Fraction(2 * g[i] * rs.symmetrizer[i]) / nn
            assert v.denominator == 1
            out.append(int(v))
        return tuple(out)

    # -- bracket of basis elements ---------------------------------------------

    def n_constant(self, sa, ka, sb, kb):
        """N for [x_a, x_b] with a = sa * beta_ka, b = sb * beta_kb (a+b a root)."""
        pos = self.rs.positive_roots
        a = pos[ka] if sa > 0 else tuple(-c for c in pos[ka])
        b = pos[kb] if sb > 0 else tuple(-c for c in pos[kb])
        if sa > 0 and sb > 0:
            if (pos[ka], pos[kb]) in self.N:
                return self.N[(pos[ka], pos[kb])]
            return -self.N[(pos[kb], pos[ka])]
        if sa < 0 and sb < 0:
            return -self.n_constant(1, ka, 1, kb)
        if sa > 0:   # [e, f'] with ka != kb
            val = self._mixed(pos[ka], pos[kb])
        else:        # [f, e']
            val = -self._mixed(pos[kb], pos[ka])
        assert val == int(val)
        return int(val)

    def bracket(self, u, v):
        """[u, v] of two generator tags, as a dict tag -> integer."""
        rs = self.rs
        tu, tv = u[0], v[0]
        if tu == 'h' and tv == 'h':
            return {}
        if tu == 'h':
            sign = 1 if tv == 'e' else -1
            beta = rs.positive_roots[v[1]]
            c = sign * rs.root_pairing_with_coroot(beta, u[1])
            return {v: c} if c else {}
        if tv == 'h':
            out = self.bracket(v, u)
            return {k: -c for k, c in out.items()}
        sa = 1 if tu == 'e' else -1
        sb = 1 if tv == 'e' else -1
        ka, kb = u[1], v[1]
        pos = rs.positive_roots
        a = pos[ka] if sa > 0 else tuple(-c for c in pos[ka])
        b = pos[kb] if sb > 0 else tuple(-c for c in pos[kb])
        total = tuple(x + y for x, y in zip(a, b))
        if not any(total):
            if sa > 0:   # [e_k, f_k] = h_k^vee
                return {('h', i): c for i, c in enumerate(self.coroot_expansion[ka]) if c}
            return {('h', i): -c for i, c in enumerate(self.coroot_expansion[ka]) if c}
        if total in self._signed:
            s, k = self._signed[total]
            n = self.n_constant(sa, ka, sb, kb)
            tag = ('e', k) if s > 0 else ('f', k)
            return {tag: n} if n else {}
        return {}


@lru_cache(maxsize=None)
def chevalley_basis(type_label: str) -> StructureConstants:
    from .rootsys import from_label
    return StructureConstants(from_label(type_label))


def verify_jacobi(sc: StructureConstants) -> None:
    """Exhaustive Jacobi check over all basis triples; raises on failure."""
    rs = sc.rs
    basis = [('e', k) for k in range(rs.num_positive)] + \
            [('f', k) for k in range(rs.num_positive)] + \
            [('h', i) for i in range(rs.rank)]

    def brk_elem(combo_u, combo_v):
        out = {}
        for tu, cu in combo_u.items():
            for tv, cv in combo_v.items():
                for t, c in sc.bracket(tu, tv).items():
                    out[t] = out.get(t, 0) + cu * cv * c
        return {t: c for t, c in out.items() if c}

    for x in basis:
        for y in basis:
            for z in basis:
                acc = {}
                for t, c in brk_elem({x: 1}, sc.bracket(y, z)).items():
                    acc[t] = acc.get(t, 0) + c
                for t, c in brk_elem({y: 1}, sc.bracket(z, x)).items():
                    acc[t] = acc.get(t, 0) + c
                for t, c in brk_elem({z: 1}, sc.bracket(x, y)).items():
                    acc[t] = acc.get(t, 0) + c
                bad = {t: c for t, c in acc.items() if c}
                if bad:
                    raise AssertionError(f"Jacobi fails on {x}, {y}, {z}: {bad}")


# -- PBW normal form --------------------------------------------------------------


@dataclass(frozen=True)
class PBWElement:
    """Exact linear combination of normal-ordered monomials F^a H^b E^c.

    Keys are (a, b, c): a and c are exponent tuples over the positive
    roots in height order, b over the simple coroots.
    """

    type_label: str
    terms: tuple  # sorted tuple of ((a, b, c), Fraction)

    @staticmethod
    def make(type_label, term_map):
        items = tuple(sorted((k, Fraction(v)) for k, v in term_map.items() if v))
        return PBWElement(type_label, items)

    def term_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        out = self.term_dict()
        for k, v in other.terms:
            out[k] = out.get(k, 0) + v
        return PBWElement.make(self.type_label, out)

    def scaled(self, s):
        return PBWElement.make(self.type_label, {k: v * Fraction(s) for k, v in self.terms})

    def is_zero(self):
        return not self.terms

    def left_weight(self, rs):
        """Weights -sum a_b beta + sum c_b beta of the monomials; None if mixed."""
        wts = set()
        for (a, b, c), _ in self.terms:
            acc = tuple(Fraction(0) for _ in range(rs.rank))
            for k, e in enumerate(a):
                if e:
                    acc = tuple(x - e * y for x, y in zip(acc, rs.root_weight(k).coords))
            for k, e in enumerate(c):
                if e:
                    acc = tuple(x + e * y for x, y in zip(acc, rs.root_weight(k).coords))
            wts.add(acc)
        if len(wts) == 1:
            return Weight(next(iter(wts)))
        return None


class PBW:
    """PBW rewriting engine: straightens words in the Chevalley
    generators to the fixed F < H < E normal order (blocks internally by
    height order of the roots)."""

    def __init__(self, sc: StructureConstants):
        self.sc = sc
        self.rs = sc.rs
        self.m = self.rs.num_positive
        self.r = self.rs.rank

    def _rank_of(self, tag):
        t, k = tag
        if t == 'f':
            return k
        if t == 'h':
            return self.m + k
        return self.m + self.r + k

    def monomial_word(self, key):
        a, b, c = key
        word = []
        for k, e in enumerate(a):
            word += [('f', k)] * e
        for i, e in enumerate(b):
            word += [('h', i)] * e
        for k, e in enumerate(c):
            word += [('e', k)] * e
        return tuple(word)

    def _word_to_key(self, word):
        a = [0] * self.m
        b = [0] * self.r
        c = [0] * self.m
        for t, k in word:
            if t == 'f':
                a[k] += 1
            elif t == 'h':
                b[k] += 1
            else:
                c[k] += 1
        return (tuple(a), tuple(b), tuple(c))

    def normal_form_word(self, word, coeff=Fraction(1)):
        """Straighten one word; returns key -> coeff dict."""
        out = {}
        stack = [(tuple(word), Fraction(coeff))]
        while stack:
            w, cf = stack.pop()
            pos = self._first_inversion(w)
            if pos is None:
                key = self._word_to_key(w)
                out[key] = out.get(key, 0) + cf
                if not out[key]:
                    del out[key]
                continue
            x, y = w[pos], w[pos + 1]
            swapped = w[:pos] + (y, x) + w[pos + 2:]
            stack.append((swapped, cf))
            for tag, c in self.sc.bracket(x, y).items():
                stack.append((w[:pos] + (tag,) + w[pos + 2:], cf * c))
        return out

    def _first_inversion(self, word):
        for i in range(len(word) - 1):
            if self._rank_of(word[i]) > self._rank_of(word[i + 1]):
                return i
        return None

    def normal_form(self, words) -> PBWElement:
        """words: iterable of (word, coeff)."""
        total = {}
        for word, coeff in words:
            for k, v in self.normal_form_word(word, coeff).items():
                total[k] = total.get(k, 0) + v
        return PBWElement.make(self.rs.type_label, total)

    def from_generator(self, tag) -> PBWElement:
        return self.normal_form([((tag,), 1)])

    def one(self) -> PBWElement:
        zero_key = ((0,) * self.m, (0,) * self.r, (0,) * self.m)
        return PBWElement.make(self.rs.type_label, {zero_key: 1})

    def multiply(self, x: PBWElement, y: PBWElement) -> PBWElement:
        total = {}
        for kx, cx in x.terms:
            wx = self.monomial_word(kx)
            for ky, cy in y.terms:
                wy = self.monomial_word(ky)
                for k, v in self.normal_form_word(wx + wy, cx * cy).items():
                    total[k] = total.get(k, 0) + v
        return PBWElement.make(self.rs.type_label, total)

    def commutator(self, x: PBWElement, y: PBWElement) -> PBWElement:
        return self.multiply(x, y) + self.multiply(y, x).scaled(-1)

    def ad_power(self, x: PBWElement, n: int, y: PBWElement) -> PBWElement:
        cur = y
        for _ in range(n):
            cur = self.commutator(x, cur)
        return cur


@lru_cache(maxsize=None)
def pbw_engine(type_label: str) -> PBW:
    return PBW(chevalley_basis(type_label))


# -- rank-one Casimir ---------------------------------------------------------------


def casimir_sl2() -> PBWElement:
    """Omega = 2 F E + H + H^2 / 2 for the rank-one system."""
    eng = pbw_engine("A1")
    return PBWElement.make("A1", {
        ((1,), (0,), (1,)): Fraction(2),
        ((0,), (1,), (0,)): Fraction(1),
        ((0,), (2,), (0,)): Fraction(1, 2),
    })


def central_char_sl2(lam: Weight) -> Fraction:
    """chi_lam(Omega) = (lam^2 + 2 lam)/2; invariant under lam -> -lam-2."""
    x = lam.coords[0]
    return (x * x + 2 * x) / 2


def quadratic_casimir(type_label: str) -> PBWElement:
    """A quadratic central element, found by solving [Omega, e_i] =
    [Omega, f_i] = 0 over the span of F_b E_b, H_i H_j and H_i.

    The solution space is one-dimensional (constants excluded); the
    result is normalized so the coefficient of F_theta E_theta is 1 for
    the highest root theta.
    """
    eng = pbw_engine(type_label)
    rs = eng.rs
    m, r = eng.m, eng.r
    basis_keys = []
    for k in range(m):
        a = tuple(1 if j == k else 0 for j in range(m))
        basis_keys.append((a, (0,) * r, a))
    for i in range(r):
        for j in range(i, r):
            b = tuple((1 if t == i else 0) + (1 if t == j else 0) for t in range(r))
            basis_keys.append(((0,) * m, b, (0,) * m))
    for i in range(r):
        b = tuple(1 if t == i else 0 for t in range(r))
        basis_keys.append(((0,) * m, b, (0,) * m))

    candidates = [PBWElement.make(type_label, {k: 1}) for k in basis_keys]
    gens = [eng.from_generator(('e', rs.simple_indices[i])) for i in range(r)] + \
           [eng.from_generator(('f', rs.simple_indices[i])) for i in range(r)]
    # linear system: commutators with all simple generators vanish
    rows_keys = set()
    cols = []
    for cand in candidates:
        col = {}
        for gi, g in enumerate(gens):
            br = eng.commutator(cand, g)
            for k, v in br.terms:
                col[(gi, k)] = v
                rows_keys.add((gi, k))
        cols.append(col)
    rows_keys = sorted(rows_keys)
    matrix = [tuple(col.get(rk, Fraction(0)) for col in cols) for rk in rows_keys]
    from .linalg import nullspace
    ker = nullspace(matrix, len(cols))
    assert len(ker) == 1, f"expected a one-dimensional quadratic center, got {len(ker)}"
    vec = ker[0]
    omega = PBWElement.make(type_label, {})
    for c, cand in zip(vec, candidates):
        if c:
            omega = omega + cand.scaled(c)
    # normalize on the highest root term
    theta = m - 1
    a = tuple(1 if j == theta else 0 for j in range(m))
    lead = omega.term_dict()[(a, (0,) * r, a)]
    return omega.scaled(1 / lead)


def central_char_on_highest_weight(type_label: str, omega: PBWElement, lam: Weight) -> Fraction:
    """Scalar by which a weight-zero PBW element acts on a highest weight
    vector of weight lam (only the pure-H monomials contribute)."""
    total = Fraction(0)
    for (a, b, c), coeff in omega.terms:
        if any(c):
            continue
        if any(a):
            continue
        val = coeff
        for i, e in enumerate(b):
            val *= lam.coords[i] ** e
        total += val
    return total
