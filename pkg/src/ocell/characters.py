"""Formal characters (closed form and depth-truncated), the Verma /
Weyl / big-projective character formulas, Kazhdan-Lusztig polynomials,
composition and Verma-flag multiplicities, and block Cartan matrices.

A closed-form character is a finite numerator over an optional single
power of the Weyl denominator prod_{beta > 0} (1 - e^{-beta}); equality
is decided exactly by cross-multiplication in the group ring of the
weight lattice.  Truncation to a finite depth box is a separate view and
never feeds back into identities.

Composition multiplicities use the convention, fixed here once and
checked by the character-identity oracle in the test suite:

    [M_{y.lam} : L_{x.lam}] = P_{w0 y, w0 x}(1)   if x <= y, else 0,

for lam integral, dot-antidominant and dot-regular (x, y minimal-length
coset representatives).  Singular lam is handled through the orbit map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .rootsys import (
    RootSystem,
    Weight,
    WeylElement,
    bruhat_leq,
    dot_action_matrix,
    is_dot_antidominant,
    l_lambda,
    orbit_data,
)


# -- group ring helpers ---------------------------------------------------------


def _ring_mul(a, b):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            key = tuple(x + y for x, y in zip(wa, wb))
            v = out.get(key, 0) + ca * cb
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return out


def weyl_denominator(rs: RootSystem):
    """prod_{beta>0} (1 - e^{-beta}) as a finite weight->coeff map."""
    out = {(0,) * rs.rank: 1}
    for k in range(rs.num_positive):
        beta = rs.root_weight(k)
        factor = {(0,) * rs.rank: 1, tuple(-c for c in beta.coords): -1}
        out = _ring_mul(out, factor)
    return out


@dataclass(frozen=True)
class FormalCharacter:
    """numerator / (Weyl denominator)^denominator_power, exact."""

    rs: RootSystem
    numerator: tuple          # sorted tuple of (coords, coeff)
    denominator_power: int    # 0 or 1

    @staticmethod
    def make(rs, num_map, denominator_power=0):
        items = tuple(sorted((k, v) for k, v in num_map.items() if v))
        return FormalCharacter(rs, items, denominator_power)

    def num_dict(self):
        return dict(self.numerator)

    def __add__(self, other):
        if self.denominator_power != other.denominator_power:
            raise ValueError("character addition requires equal denominator powers")
        out = self.num_dict()
        for k, v in other.numerator:
            out[k] = out.get(k, 0) + v
        return FormalCharacter.make(self.rs, out, self.denominator_power)

    def scaled(self, s):
        return FormalCharacter.make(self.rs, {k: v * s for k, v in self.numerator}, self.denominator_power)

    def mul_finite(self, other):
        """Multiply by a finite character (denominator power 0)."""
        if other.denominator_power != 0:
            raise ValueError("can only multiply by a denominator-free character")
        return FormalCharacter.make(self.rs, _ring_mul(self.num_dict(), other.num_dict()),
                                    self.denominator_power)

    def equals(self, other):
        """Exact equality by cross-multiplication."""
        if self.rs is not other.rs and self.rs.type_label != other.rs.type_label:
            return False
        a, b = self, other
        den = weyl_denominator(self.rs)
        na = a.num_dict()
        nb = b.num_dict()
        for _ in range(b.denominator_power - a.denominator_power if b.denominator_power > a.denominator_power else 0):
            na = _ring_mul(na, den)
        for _ in range(a.denominator_power - b.denominator_power if a.denominator_power > b.denominator_power else 0):
            nb = _ring_mul(nb, den)
        return na == nb

    def truncate(self, base_weights, depth):
        """Depth-truncated view below the given base weights."""
        mult = {}
        boxes = _depth_box(self.rs, base_weights, depth)
        for mu in boxes:
            m = self.multiplicity(Weight(mu))
            if m:
                mult[mu] = m
        return TruncatedCharacter(self.rs, tuple(Weight(b) if not isinstance(b, Weight) else b
                                                 for b in base_weights), depth, mult)

    def multiplicity(self, mu: Weight):
        """Exact coefficient of e^mu (uses the Kostant partition function
        when a denominator is present)."""
        total = 0
        for nu, c in self.numerator:
            if self.denominator_power == 0:
                if nu == mu.coords:
                    total += c
            else:
                diff = Weight(nu) - mu
                rc = self.rs.to_root_coords(diff)
                if rc is not None and all(x >= 0 for x in rc):
                    total += c * kostant_partition(self.rs, rc)
        return total


def _depth_box(rs, base_weights, depth):
    """All weights base - sum c_i alpha_i with c_i >= 0 and sum c_i <= depth."""
    out = set()
    simples = [rs.root_weight(rs.simple_indices[i]) for i in range(rs.rank)]

    def rec(cur, start_height):
        key = cur.coords
        if key in out:
            return
        out.add(key)
        if start_height >= depth:
            return
        for a in simples:
            rec(cur - a, start_height + 1)

    for b in base_weights:
        w = b if isinstance(b, Weight) else Weight(b)
        rec(w, 0)
    return sorted(out)


@dataclass(frozen=True)
class TruncatedCharacter:
    rs: RootSystem
    base_weights: tuple
    depth: int
    multiplicities: dict

    def dim_at(self, mu: Weight):
        return self.multiplicities.get(mu.coords, 0)

    def total(self):
        return sum(self.multiplicities.values())

    def as_sorted_items(self):
        return sorted(self.multiplicities.items())


@lru_cache(maxsize=None)
def _kostant_cached(type_label, rc):
    from .rootsys import from_label
    rs = from_label(type_label)
    roots = rs.positive_roots

    def count(idx, remaining):
        if not any(remaining):
            return 1
        if idx < 0:
            return 0
        beta = roots[idx]
        best = None
        for j in range(len(remaining)):
            if beta[j]:
                q = remaining[j] // beta[j]
                best = q if best is None else min(best, q)
        total = 0
        for k in range((best or 0) + 1):
            rem = tuple(remaining[j] - k * beta[j] for j in range(len(remaining)))
            if all(r >= 0 for r in rem):
                total += count(idx - 1, rem)
        return total

    return count(len(roots) - 1, rc)


def kostant_partition(rs: RootSystem, root_coords):
    """Number of ways to write the root-lattice element as a sum of
    positive roots."""
    if any(c < 0 for c in root_coords):
        return 0
    return _kostant_cached(rs.type_label, tuple(root_coords))


# -- character formulas -----------------------------------------------------------


def verma_char(rs: RootSystem, lam: Weight) -> FormalCharacter:
    """e^lam over the Weyl denominator."""
    return FormalCharacter.make(rs, {lam.coords: 1}, denominator_power=1)


def weyl_char(rs: RootSystem, lam: Weight) -> FormalCharacter:
    """Alternating orbit sum of Verma characters, for dominant integral lam."""
    if not (lam.is_integral() and lam.is_dominant()):
        raise ValueError(f"weyl_char requires a dominant integral weight, got {lam}")
    num = {}
    for w in rs.weyl_elements():
        mu = dot_action_matrix(rs, w, lam).coords
        num[mu] = num.get(mu, 0) + (-1) ** w.length
    return FormalCharacter.make(rs, num, denominator_power=1)


def weyl_char_finite(rs: RootSystem, lam: Weight) -> FormalCharacter:
    """The same character expanded to its finite support (denominator-free)."""
    ch = weyl_char(rs, lam)
    w0lam = dot_action_matrix(rs, rs.longest_element(), lam)
    depth = rs.weight_height(lam - w0lam)
    tc = ch.truncate([lam], depth)
    return FormalCharacter.make(rs, dict(tc.multiplicities), denominator_power=0)


def big_proj_char(rs: RootSystem, lam: Weight) -> FormalCharacter:
    """Orbit sum of Verma characters; lam must be the dot-antidominant
    orbit point (the label of the big projective)."""
    if not lam.is_integral() or not is_dot_antidominant(rs, lam):
        raise ValueError(f"big_proj_char requires a dot-antidominant integral weight, got {lam}")
    _, _, reps = orbit_data(rs, lam)
    num = {}
    for w in reps:
        mu = dot_action_matrix(rs, w, lam).coords
        num[mu] = num.get(mu, 0) + 1
    return FormalCharacter.make(rs, num, denominator_power=1)


# -- Kazhdan-Lusztig polynomials ----------------------------------------------------


@dataclass(frozen=True)
class KLPolynomial:
    coefficients: tuple  # ascending powers of q

    def degree(self):
        return len(self.coefficients) - 1 if self.coefficients else None

    def at_one(self):
        return sum(self.coefficients)

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mon = "q" if k == 1 else f"q^{k}"
                parts.append(mon if c == 1 else f"{c}{mon}")
        return "+".join(parts) if parts else "0"


def kl_poly(rs: RootSystem, x: WeylElement, w: WeylElement) -> KLPolynomial:
    """P_{x,w} by the standard descent recursion with mu-corrections.

    The memo table is per root system and is only ever appended to, so
    concurrent readers are safe under the interpreter lock; writers race
    benignly (both compute the same value).
    """
    return KLPolynomial(_kl(rs, x, w))


def _kl(rs, x, w):
    key = (x.matrix, w.matrix)
    cache = rs._kl_cache
    if key in cache:
        return cache[key]
    if x.matrix == w.matrix:
        res = (1,)
    elif not bruhat_leq(rs, x, w):
        res = ()
    else:
        i = w.reduced_word[0]
        s = rs.element_from_word((i,))
        wp = rs.multiply(s, w)          # s w < w
        sx = rs.multiply(s, x)
        if sx.length < x.length:
            term1 = _kl(rs, sx, wp)     # P_{sx, w'}
            term2 = _shift(_kl(rs, x, wp), 1)
        else:
            term1 = _shift(_kl(rs, sx, wp), 1)
            term2 = _kl(rs, x, wp)
        acc = _poly_add(term1, term2)
        for z in rs.weyl_elements():
            if z.length >= wp.length and z.matrix != wp.matrix:
                continue
            sz = rs.multiply(s, z)
            if sz.length > z.length:
                continue
            if not (bruhat_leq(rs, x, z) and bruhat_leq(rs, z, wp)):
                continue
            pzw = _kl(rs, z, wp)
            gap = wp.length - z.length
            if gap % 2 == 0:
                continue
            mu = pzw[(gap - 1) // 2] if len(pzw) > (gap - 1) // 2 else 0
            if mu == 0:
                continue
            shift = (w.length - z.length)
            assert shift % 2 == 0
            corr = _shift(_kl(rs, x, z), shift // 2)
            acc = _poly_sub(acc, tuple(mu * c for c in corr))
        res = acc
    # degree bound and positivity are structural; enforce them here so a
    # convention bug cannot silently propagate
    if res and x.matrix != w.matrix:
        assert res[0] == 1 or res[0] > 0
        assert 2 * (len(res) - 1) <= w.length - x.length - 1, (x, w, res)
    assert all(c >= 0 for c in res)
    cache[key] = res
    return res


def _shift(p, k):
    return ((0,) * k + p) if p else ()


def _poly_add(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_sub(a, b):
    return _poly_add(a, tuple(-c for c in b))


# -- multiplicities and block Cartan matrices ------------------------------------------


def mult_verma_simple(rs: RootSystem, lam: Weight, x: WeylElement, y: WeylElement) -> int:
    """[M_{y.lam} : L_{x.lam}] for integral dot-antidominant lam and
    x, y in the minimal coset representatives W^lam."""
    if not lam.is_integral() or not is_dot_antidominant(rs, lam):
        raise ValueError("mult_verma_simple requires an integral dot-antidominant weight")
    if not bruhat_leq(rs, x, y):
        return 0
    w0 = rs.longest_element()
    return kl_poly(rs, rs.multiply(w0, y), rs.multiply(w0, x)).at_one()


def block_coset_reps(rs: RootSystem, lam: Weight):
    return orbit_data(rs, lam)[2]


def verma_flag_mult(rs: RootSystem, lam: Weight, x: WeylElement, y: WeylElement) -> int:
    """(P_{x.lam} : M_{y.lam}) via reciprocity."""
    return mult_verma_simple(rs, lam, x, y)


def cartan_matrix_block(rs: RootSystem, lam: Weight):
    """[P_{x.lam} : L_{y.lam}] over the block of lam, rows/cols ordered by
    the coset representatives (antidominant point first)."""
    reps = block_coset_reps(rs, lam)
    n = len(reps)
    rows = []
    for x in reps:
        row = []
        for y in reps:
            val = sum(mult_verma_simple(rs, lam, x, w) * mult_verma_simple(rs, lam, y, w)
                      for w in reps)
            row.append(val)
        rows.append(tuple(row))
    return tuple(rows)


def simple_char_in_block(rs: RootSystem, lam: Weight, x: WeylElement) -> FormalCharacter:
    """ch L_{x.lam} by multiplicity inversion inside the block."""
    reps = block_coset_reps(rs, lam)
    # unitriangular system: ch M_{y.lam} = sum_x [M_y : L_x] ch L_{x.lam}
    order = sorted(reps, key=lambda w: (w.length, w.reduced_word))
    chars = {}
    for y in order:
        acc = verma_char(rs, dot_action_matrix(rs, y, lam))
        for z in order:
            if z.matrix == y.matrix:
                continue
            m = mult_verma_simple(rs, lam, z, y)
            if m and z.matrix in chars:
                acc = acc + chars[z.matrix].scaled(-m)
        chars[y.matrix] = acc
    return chars[x.matrix]


def loewy_length_bound(rs: RootSystem, lam: Weight) -> int:
    """2 l_lambda + 1, the block's Loewy length ceiling."""
    return 2 * l_lambda(rs, lam) + 1
