"""Root systems of rank <= 3 (A1, A2, A3, B2, G2), their Weyl groups,
the dot action, orbit/stabilizer/coset combinatorics and Bruhat order.

Conventions
-----------
* Weights are stored in fundamental-weight coordinates: the i-th
  coordinate of an integral weight lam is the pairing <lam, h_i> with the
  i-th simple coroot.
* cartan[i][j] = <alpha_j, h_i>, so the j-th simple root has
  fundamental-weight coordinates equal to the j-th *column* of the Cartan
  matrix.
* Positive roots are listed by ascending height, ties broken by
  lexicographic order of their simple-root coordinates.  All modules of
  the package index root-vector data by position in this list.
* Weyl group elements are canonicalized by their matrix action on the
  weight lattice; reduced words are recomputed greedily (smallest left
  descent first), which yields the lexicographically smallest reduced
  word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

_CARTAN = {
    ("A", 1): ((2,),),
    ("A", 2): ((2, -1), (-1, 2)),
    ("A", 3): ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    ("B", 2): ((2, -1), (-2, 2)),
    ("G", 2): ((2, -3), (-1, 2)),
}

# Symmetrizers d_i with d_i a_ij = d_j a_ji; (alpha_i, alpha_i) = 2 d_i.
_SYMMETRIZER = {
    ("A", 1): (1,),
    ("A", 2): (1, 1),
    ("A", 3): (1, 1, 1),
    ("B", 2): (2, 1),
    ("G", 2): (1, 3),
}


@dataclass(frozen=True)
class Weight:
    """Weight in fundamental-weight coordinates (exact rationals)."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def rank(self):
        return len(self.coords)

    def __add__(self, other):
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coords))

    def scaled(self, s):
        return Weight(tuple(Fraction(s) * a for a in self.coords))

    def pairing(self, i):
        """<self, h_i>: the i-th fundamental coordinate."""
        return self.coords[i]

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def is_dominant(self):
        return all(c >= 0 for c in self.coords)

    def is_strictly_dominant(self):
        return all(c > 0 for c in self.coords)

    def is_antidominant(self):
        return all(c <= 0 for c in self.coords)

    def is_strictly_antidominant(self):
        return all(c < 0 for c in self.coords)

    def as_ints(self):
        if not self.is_integral():
            raise ValueError(f"weight {self.coords} is not integral")
        return tuple(int(c) for c in self.coords)

    def __repr__(self):
        body = ",".join(str(int(c)) if c.denominator == 1 else str(c) for c in self.coords)
        return f"wt({body})"


@dataclass(frozen=True)
class WeylElement:
    """Weyl group element, canonical by its weight-lattice matrix."""

    matrix: tuple          # rows of the action matrix on fundamental coords
    reduced_word: tuple    # lexicographically smallest reduced word
    length: int

    def __eq__(self, other):
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def apply(self, lam: Weight) -> Weight:
        """Linear (non-dot) action on a weight."""
        return Weight(tuple(sum(row[j] * lam.coords[j] for j in range(len(row)))
                            for row in self.matrix))

    def word_str(self):
        return "e" if not self.reduced_word else "".join(f"s{i + 1}" for i in self.reduced_word)

    def __repr__(self):
        return f"W[{self.word_str()}]"


class RootSystem:
    """Immutable root-system container; see the module docstring for the
    ordering and coordinate conventions."""

    def __init__(self, family: str, rank: int):
        key = (family, rank)
        if key not in _CARTAN:
            supported = ", ".join(f"{f}{r}" for f, r in sorted(_CARTAN))
            raise ValueError(f"unsupported root system {family}{rank}; supported: {supported}")
        self.family = family
        self.rank = rank
        self.type_label = f"{family}{rank}"
        self.cartan_matrix = _CARTAN[key]
        self.symmetrizer = _SYMMETRIZER[key]
        # positive roots in simple-root coordinates, by (height, lex)
        self.positive_roots = self._enumerate_positive_roots()
        self.num_positive = len(self.positive_roots)
        self.simple_indices = tuple(self.positive_roots.index(tuple(1 if j == i else 0 for j in range(rank)))
                                    for i in range(rank))
        self.rho = Weight((1,) * rank)
        inv = self._invert_cartan()
        # columns express fundamental weights in simple-root coordinates
        self.fundamental_weight_basis_change = inv
        self._kl_cache = {}
        self._elements = None

    # -- construction helpers -------------------------------------------------

    def _enumerate_positive_roots(self):
        n = self.rank
        simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        roots = set(simple)
        # grow height by height via root strings through simple roots
        changed = True
        while changed:
            changed = False
            for gamma in sorted(roots):
                for i in range(n):
                    cand = tuple(c + (1 if j == i else 0) for j, c in enumerate(gamma))
                    if cand in roots:
                        continue
                    p = 0
                    cur = gamma
                    while True:
                        lower = tuple(c - (1 if j == i else 0) for j, c in enumerate(cur))
                        if min(lower) < 0 or (lower not in roots and any(lower)):
                            break
                        if not any(lower):
                            break
                        cur = lower
                        p += 1
                    pair = self.root_pairing_with_coroot(gamma, i)
                    if p - pair > 0:
                        roots.add(cand)
                        changed = True
        return tuple(sorted(roots, key=lambda g: (sum(g), g)))

    def _invert_cartan(self):
        n = self.rank
        a = [[Fraction(self.cartan_matrix[i][j]) for j in range(n)] + [Fraction(1 if k == i else 0) for k in range(n)]
             for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if a[r][col])
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return tuple(tuple(row[n:]) for row in a)

    # -- root bookkeeping ------------------------------------------------------

    def root_pairing_with_coroot(self, gamma, i):
        """<gamma, h_i> for gamma in simple-root coordinates."""
        return sum(gamma[j] * self.cartan_matrix[i][j] for j in range(self.rank))

    def root_weight(self, k: int) -> Weight:
        """The k-th positive root as a Weight (fundamental coordinates)."""
        g = self.positive_roots[k]
        return Weight(tuple(self.root_pairing_with_coroot(g, i) for i in range(self.rank)))

    def height(self, k: int) -> int:
        return sum(self.positive_roots[k])

    def bilinear(self, gamma, delta):
        """Invariant form on the root lattice, (alpha_i, alpha_i) = 2 d_i."""
        n = self.rank
        return sum(gamma[i] * delta[j] * self.symmetrizer[i] * self.cartan_matrix[i][j]
                   for i in range(n) for j in range(n))

    def weight_root_pairing(self, lam: Weight, k: int):
        """<lam, beta_k^vee> = 2 (lam, beta_k) / (beta_k, beta_k)."""
        g = self.positive_roots[k]
        num = 2 * sum(g[j] * self.symmetrizer[j] * lam.coords[j] for j in range(self.rank))
        return num / Fraction(self.bilinear(g, g))

    def to_root_coords(self, nu: Weight):
        """Express a root-lattice element in simple-root coordinates; None outside the lattice."""
        inv = self.fundamental_weight_basis_change
        c = tuple(sum(inv[i][j] * nu.coords[j] for j in range(self.rank)) for i in range(self.rank))
        if any(x.denominator != 1 for x in c):
            return None
        return tuple(int(x) for x in c)

    def weight_height(self, nu: Weight):
        """Total height of a root-lattice element; None outside the lattice."""
        c = self.to_root_coords(nu)
        return None if c is None else sum(c)

    def in_positive_cone(self, nu: Weight):
        c = self.to_root_coords(nu)
        return c is not None and all(x >= 0 for x in c)

    # -- Weyl group ------------------------------------------------------------

    def simple_reflection_matrix(self, i):
        n = self.rank
        return tuple(tuple((1 if k == j else 0) - (self.cartan_matrix[k][i] if j == i else 0)
                           for j in range(n)) for k in range(n))

    def weyl_elements(self):
        """All Weyl group elements, cached; sorted by (length, word)."""
        if self._elements is None:
            ident = tuple(tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank))
            seen = {ident: ()}
            frontier = [ident]
            while frontier:
                nxt = []
                for m in frontier:
                    for i in range(self.rank):
                        m2 = self._mat_mul(m, self.simple_reflection_matrix(i))
                        if m2 not in seen:
                            seen[m2] = None
                            nxt.append(m2)
                frontier = nxt
            out = []
            for m in seen:
                word = self._canonical_word(m)
                out.append(WeylElement(m, word, len(word)))
            out.sort(key=lambda w: (w.length, w.reduced_word))
            self._elements = tuple(out)
        return self._elements

    def _mat_mul(self, a, b):
        n = self.rank
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))

    def _root_image_negative(self, m, i):
        """True iff the matrix m sends alpha_i to a negative root."""
        alpha = self.root_weight(self.simple_indices[i])
        img = Weight(tuple(sum(m[r][c] * alpha.coords[c] for c in range(self.rank)) for r in range(self.rank)))
        rc = self.to_root_coords(img)
        return all(x <= 0 for x in rc) and any(rc)

    def _canonical_word(self, m):
        """Lex-smallest reduced word: repeatedly strip the smallest left descent."""
        word = []
        cur = m
        ident = tuple(tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank))
        while cur != ident:
            for i in range(self.rank):
                # i is a left descent of w iff w^{-1}(alpha_i) < 0, i.e.
                # alpha_i is negated by w acting from the left; with matrices
                # acting on column vectors this reads: row test on inverse.
                # Equivalent test: s_i * w shorter, checked via root image of w^T.
                if self._is_left_descent(cur, i):
                    word.append(i)
                    cur = self._mat_mul(self.simple_reflection_matrix(i), cur)
                    break
            else:
                raise AssertionError("no descent found for a non-identity element")
        return tuple(word)

    def _is_left_descent(self, m, i):
        # l(s_i w) < l(w) iff w^{-1}(alpha_i) is a negative root.
        minv = self._mat_inverse(m)
        return self._root_image_negative(minv, i)

    def _mat_inverse(self, m):
        n = self.rank
        a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(1 if k == i else 0) for k in range(n)]
             for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if a[r][col])
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return tuple(tuple(int(x) for x in row[n:]) for row in a)

    def identity_element(self):
        return self.element_from_word(())

    def element_from_word(self, word):
        ident = tuple(tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank))
        m = ident
        for i in word:
            m = self._mat_mul(m, self.simple_reflection_matrix(i))
        canon = self._canonical_word(m)
        return WeylElement(m, canon, len(canon))

    def multiply(self, x: WeylElement, y: WeylElement) -> WeylElement:
        m = self._mat_mul(x.matrix, y.matrix)
        word = self._canonical_word(m)
        return WeylElement(m, word, len(word))

    def inverse(self, x: WeylElement) -> WeylElement:
        m = self._mat_inverse(x.matrix)
        word = self._canonical_word(m)
        return WeylElement(m, word, len(word))

    def longest_element(self) -> WeylElement:
        return max(self.weyl_elements(), key=lambda w: w.length)


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    """Construct (and cache) a supported root system."""
    return RootSystem(family, rank)


def from_label(label: str) -> RootSystem:
    label = label.strip().upper()
    if len(label) != 2 or not label[1].isdigit():
        raise ValueError(f"bad root system label {label!r}; expected e.g. 'A2'")
    return build_root_system(label[0], int(label[1]))


# -- dot action and orbit combinatorics ---------------------------------------


def dot_action(rs: RootSystem, w: WeylElement, lam: Weight) -> Weight:
    """w . lam applied along the reduced word of w:
    s_i . lam = lam - <lam + rho, h_i> alpha_i."""
    cur = lam
    for i in reversed(w.reduced_word):
        coeff = cur.pairing(i) + 1
        alpha = rs.root_weight(rs.simple_indices[i])
        cur = cur - alpha.scaled(coeff)
    return cur


def dot_action_matrix(rs: RootSystem, w: WeylElement, lam: Weight) -> Weight:
    """w . lam = w(lam + rho) - rho via the canonical matrix."""
    return w.apply(lam + rs.rho) - rs.rho


def orbit_data(rs: RootSystem, lam: Weight):
    """Dot orbit of an integral weight, its stabilizer, and the
    minimal-length coset representatives (ties by lex-smallest word)."""
    if not lam.is_integral():
        raise ValueError("orbit_data requires an integral weight")
    orbit_map = {}
    stabilizer = []
    for w in rs.weyl_elements():
        mu = dot_action_matrix(rs, w, lam)
        if mu == lam:
            stabilizer.append(w)
        key = mu.coords
        if key not in orbit_map:
            orbit_map[key] = w
        else:
            best = orbit_map[key]
            if (w.length, w.reduced_word) < (best.length, best.reduced_word):
                orbit_map[key] = w
    orbit = [Weight(k) for k in orbit_map]
    reps = [orbit_map[k] for k in orbit_map]
    order = sorted(range(len(orbit)), key=lambda t: (reps[t].length, reps[t].reduced_word))
    orbit = [orbit[t] for t in order]
    reps = [reps[t] for t in order]
    assert len(orbit) * len(stabilizer) == len(rs.weyl_elements())
    return orbit, stabilizer, reps


def l_lambda(rs: RootSystem, lam: Weight) -> int:
    """Smallest length of w with w . lam = w_circ . lam."""
    target = dot_action_matrix(rs, rs.longest_element(), lam).coords
    return min(w.length for w in rs.weyl_elements()
               if dot_action_matrix(rs, w, lam).coords == target)


def is_dot_antidominant(rs: RootSystem, lam: Weight) -> bool:
    """<lam + rho, h_i> <= 0 for all i: lam is the orbit minimum."""
    return all(lam.pairing(i) + 1 <= 0 for i in range(rs.rank))


def is_dot_regular(rs: RootSystem, lam: Weight) -> bool:
    return len(orbit_data(rs, lam)[1]) == 1


# -- Bruhat order --------------------------------------------------------------


def bruhat_leq(rs: RootSystem, x: WeylElement, w: WeylElement) -> bool:
    """Subword-property Bruhat order, computed by descent recursion."""
    return _bruhat(rs, x.matrix, w.matrix, x.length, w.length)


def _bruhat(rs, xm, wm, lx, lw):
    if lx > lw:
        return False
    if xm == wm:
        return True
    if lw == 0:
        return False
    i = next(j for j in range(rs.rank) if rs._is_left_descent(wm, j))
    si = rs.simple_reflection_matrix(i)
    wm2 = rs._mat_mul(si, wm)
    if rs._is_left_descent(xm, i):
        xm2 = rs._mat_mul(si, xm)
        return _bruhat(rs, xm2, wm2, lx - 1, lw - 1)
    return _bruhat(rs, xm, wm2, lx, lw - 1)
