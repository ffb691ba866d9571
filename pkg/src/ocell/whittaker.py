"""Whittaker vectors on truncated completions, the Whittaker system on
the big-cell function algebra, the realization of big projective modules
inside the space of left Whittaker vectors, and double-Whittaker (Toda)
dimension counts.

Completions are handled by recorded-depth truncation: every dimension
claim is computed at two depths and must agree (the computable proxy for
the honest inverse-limit statement).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .bigcell import BigCellPoly, DiffOp, regular_action, structure_polynomials
from .category_o import WeightModule, _o_drops, _o_gens, big_projective_sl2, hom_space
from .enveloping import (casimir_sl2, central_char_on_highest_weight, central_char_sl2,
                         pbw_engine, quadratic_casimir)
from .rootsys import Weight, dot_action_matrix, from_label, is_dot_antidominant, orbit_data


@dataclass(frozen=True)
class WhittakerCharacter:
    """One-dimensional character data: scalars on the simple generators of
    one nilpotent side ('+' raising, '-' lowering)."""

    eta: tuple
    sign: str

    def __post_init__(self):
        object.__setattr__(self, "eta", tuple(Fraction(x) for x in self.eta))
        if self.sign not in ("+", "-"):
            raise ValueError("sign must be '+' or '-'")

    def nonsingular(self):
        return all(x != 0 for x in self.eta)


# -- Whittaker spaces of weight modules -----------------------------------------------


def whittaker_space(v: WeightModule, chi: WhittakerCharacter, completed=True, stability=True):
    """Basis of solutions of (g_i - eta_i) v = 0 (simple generators of the
    chosen side) and g_beta v = 0 (nonsimple root vectors) on the
    truncation; with completed=False the deepest band is forced to zero,
    which characterizes solutions lying in the module itself."""
    sols0 = _whittaker_solutions(v, chi, completed, margin=0)
    if stability:
        sols1 = _whittaker_solutions(v, chi, completed, margin=1)
        if len(sols0) != len(sols1):
            raise ValueError(
                f"Whittaker dimension unstable between depths ({len(sols1)} vs {len(sols0)}): increase depth")
    return sols0


def whittaker_dim(v, chi, completed=True):
    return len(whittaker_space(v, chi, completed))


def _whittaker_solutions(v: WeightModule, chi: WhittakerCharacter, completed, margin):
    rs = v._rs
    kind = 'e' if chi.sign == '+' else 'f'
    weights = [mu for mu in v.weights() if v.known(mu, margin)]
    offsets = {}
    nvar = 0
    for mu in weights:
        offsets[mu] = nvar
        nvar += v.dim(mu)
    if nvar == 0:
        return []
    rows = []
    for mu in weights:
        # simple generators: (g_i v)_{mu+a_i} = eta_i v_{mu+a_i}
        for i in range(rs.rank):
            label = (kind, i)
            shift = v.gens[label]
            target = mu + shift
            if not v.known(target, margin) or not v.has_matrix(label, mu):
                continue
            m = v.matrix(label, mu)
            dt = v.dim(target)
            for r in range(dt):
                row = {}
                for s in range(v.dim(mu)):
                    if m[r][s]:
                        row[offsets[mu] + s] = row.get(offsets[mu] + s, Fraction(0)) + m[r][s]
                if target in offsets:
                    row[offsets[target] + r] = row.get(offsets[target] + r, Fraction(0)) - chi.eta[i]
                if row:
                    rows.append(row)
        # nonsimple root vectors must annihilate
        for k in range(rs.num_positive):
            if rs.height(k) == 1:
                continue
            op, shift = v.root_action(kind, k)
            target = mu + shift
            if not v.known(target, margin):
                continue
            m = op.get(mu)
            if m is None:
                if v.dim(target):
                    continue  # derived matrix unavailable: skip (boundary)
                m = linalg.zeros(0, v.dim(mu))
            for r in range(v.dim(target)):
                row = {}
                for s in range(v.dim(mu)):
                    if m[r][s]:
                        row[offsets[mu] + s] = m[r][s]
                if row:
                    rows.append(row)
    # missing eta-side equations: target exists but source is zero/unknown
    for mu in weights:
        for i in range(rs.rank):
            label = (kind, i)
            src = mu - v.gens[label]
            if v.known(src, margin) and v.dim(src) == 0 and chi.eta[i]:
                # (g_i v)_mu = 0 forces eta_i v_mu = 0
                for r in range(v.dim(mu)):
                    rows.append({offsets[mu] + r: chi.eta[i]})
    if completed is False:
        band = [mu for mu in weights if not v.known(mu, margin + 1)]
        for mu in band:
            for r in range(v.dim(mu)):
                rows.append({offsets[mu] + r: Fraction(1)})
    kernel = linalg.sparse_nullspace(rows, nvar) if rows else \
        [tuple(Fraction(1 if i == j else 0) for i in range(nvar)) for j in range(nvar)]
    out = []
    for vec in kernel:
        comp = {}
        for mu in weights:
            seg = tuple(vec[offsets[mu] + s] for s in range(v.dim(mu)))
            if any(seg):
                comp[mu] = seg
        out.append(comp)
    return out


# -- the exponential Whittaker function on the unipotent side ----------------------------


def tau(type_label: str, eta, depth: int):
    """The unique (up to scale) power-series solution of the left
    Whittaker system on functions of the x coordinates, normalized to 1
    at the origin; it equals exp(sum eta_i x_{alpha_i})."""
    rs = from_label(type_label)
    sols = tau_solution_space(type_label, eta, depth)
    assert len(sols) == 1, f"expected a one-dimensional solution space, got {len(sols)}"
    sol = sols[0]
    # normalize constant term to 1
    const = sol.terms.get(((0,) * rs.num_positive, (0,) * rs.rank, (0,) * rs.num_positive))
    assert const, "solution does not extend the constant"
    return sol.scaled(1 / const)


def tau_solution_space(type_label: str, eta, depth: int):
    """Kernel of the Whittaker system on functions of the x coordinates:
    the simple lowering operators act by the eta scalars and the
    nonsimple ones by zero.  The nonsimple conditions are differential
    consequences of the simple ones on honest power series, but must be
    imposed explicitly on truncations."""
    from .bigcell import regular_action_root_vector
    rs = from_label(type_label)
    eta = tuple(Fraction(x) for x in eta)
    ops = []
    for i in range(rs.rank):
        # rho1(f_i) psi = -eta_i psi, rewritten as a kernel condition
        op = regular_action_root_vector(type_label, "left", 'f', rs.simple_indices[i]).scaled(-1)
        op.add_part(('id',), BigCellPoly.one(rs).scaled(-eta[i]))
        ops.append((op, 1))
    for k in range(rs.num_positive):
        if rs.height(k) == 1:
            continue
        ops.append((regular_action_root_vector(type_label, "left", 'f', k), rs.height(k)))
    for op, _ in ops:
        assert all(tag[0] in ('x', 'id') for tag in op.parts), "lowering side must stay in x"
    from .bigcell import _bounded_exponents
    exps = _bounded_exponents(rs, depth)
    # an operator of weight -w shifts monomial heights by exactly ht(w),
    # so image coefficients at height <= depth - ht(w) see every source
    rowmap = {}
    matrix = []
    for t, e in enumerate(exps):
        mono = BigCellPoly.monomial(rs, xexp=e)
        for i, (op, wht) in enumerate(ops):
            img = op.apply(mono)
            for (x, z, y), coeff in img.terms.items():
                ht = sum(x[k] * rs.height(k) for k in range(rs.num_positive))
                if ht > depth - wht:
                    continue
                key = (i, x)
                if key not in rowmap:
                    rowmap[key] = len(matrix)
                    matrix.append({})
                d = matrix[rowmap[key]]
                d[t] = d.get(t, Fraction(0)) + coeff
    kernel = linalg.sparse_nullspace([r for r in matrix if r], len(exps))
    out = []
    for vec in kernel:
        p = BigCellPoly.zero(rs)
        for coeff, e in zip(vec, exps):
            if coeff:
                p.add_term(e, (0,) * rs.rank, (0,) * rs.num_positive, coeff)
        out.append(p)
    return out


def exponential_series(type_label: str, eta, depth: int):
    """Truncation of exp(sum eta_i x_{alpha_i})."""
    rs = from_label(type_label)
    out = BigCellPoly.one(rs)
    term = BigCellPoly.one(rs)
    lin = BigCellPoly.zero(rs)
    for i in range(rs.rank):
        lin.add_term(tuple(1 if k == rs.simple_indices[i] else 0 for k in range(rs.num_positive)),
                     (0,) * rs.rank, (0,) * rs.num_positive, Fraction(eta[i]))
    for n in range(1, depth + 1):
        term = (term * lin).scaled(Fraction(1, n))
        term = BigCellPoly(rs.rank, rs.num_positive,
                           {k: v for k, v in term.terms.items()
                            if sum(k[0][j] * rs.height(j) for j in range(rs.num_positive)) <= depth})
        out = out + term
    return out


# -- the realized action on the Whittaker quotient ---------------------------------------


@lru_cache(maxsize=None)
def realized_whittaker_action(type_label: str, eta):
    """Action table on functions of (z, y): the right regular action
    specialized to products phi(y, z) tau(x).  The eta-dependence enters
    only through the lowering generators."""
    rs = from_label(type_label)
    eta = tuple(Fraction(x) for x in eta)
    tables = structure_polynomials(type_label)

    def table_poly(table, i):
        out = []
        for (ii, b), terms in table.items():
            if ii != i:
                continue
            poly = BigCellPoly.zero(rs)
            for exps, coeff in terms:
                poly.add_term((0,) * rs.num_positive, (0,) * rs.rank, exps, coeff)
            out.append((b, poly))
        return out

    ops = {}
    for i in range(rs.rank):
        si = rs.simple_indices[i]
        e_op = DiffOp(rs)
        e_op.add_part(('y', si), BigCellPoly.one(rs))
        for b, poly in table_poly(tables["p"], i):
            e_op.add_part(('y', b), poly)
        ops[('e', i)] = e_op
        h_op = DiffOp(rs)
        h_op.add_part(('z', i), BigCellPoly.one(rs))
        h_op.add_part(('y', si), BigCellPoly.monomial(
            rs, yexp=tuple(1 if k == si else 0 for k in range(rs.num_positive)), coeff=-2))
        for b, poly in table_poly(tables["q"], i):
            h_op.add_part(('y', b), poly)
        ops[('h', i)] = h_op
        f_op = DiffOp(rs)
        f_op.add_part(('y', si), BigCellPoly.monomial(
            rs, yexp=tuple(2 if k == si else 0 for k in range(rs.num_positive)), coeff=-1))
        f_op.add_part(('z', i), BigCellPoly.monomial(
            rs, yexp=tuple(1 if k == si else 0 for k in range(rs.num_positive))))
        for b, poly in table_poly(tables["r"], i):
            f_op.add_part(('y', b), poly)
        alpha = rs.root_weight(si)
        f_op.add_part(('id',), BigCellPoly.monomial(
            rs, zwt=tuple(-int(c) for c in alpha.coords), coeff=eta[i]))
        ops[('f', i)] = f_op
    return ops


def realized_action_word(type_label, eta, word, poly):
    ops = realized_whittaker_action(type_label, eta)
    rs = from_label(type_label)
    sc = pbw_engine(type_label).sc
    out = poly
    for tag in reversed(word):
        out = _realized_root_op(type_label, eta, tag).apply(out)
    return out


@lru_cache(maxsize=None)
def _realized_root_op(type_label, eta, tag):
    """DiffOp of an arbitrary root vector in the realized action, by
    bracket recursion from the simple ones."""
    rs = from_label(type_label)
    ops = realized_whittaker_action(type_label, eta)
    kind, k = tag
    if kind == 'h':
        return ops[('h', k)]
    if rs.height(k) == 1:
        i = rs.positive_roots[k].index(1)
        return ops[(kind, i)]
    sc = pbw_engine(type_label).sc
    gamma = rs.positive_roots[k]
    for i, a in enumerate(rs.positive_roots):
        b = tuple(x - y for x, y in zip(gamma, a))
        if b in sc._roots and sc._roots[b] > i:
            i0, j0 = i, sc._roots[b]
            break
    n = sc.N[(rs.positive_roots[i0], rs.positive_roots[j0])]
    if kind == 'f':
        n = -n
    op1 = _realized_root_op(type_label, eta, (kind, i0))
    op2 = _realized_root_op(type_label, eta, (kind, j0))
    return op1.commutator(op2).scaled(Fraction(1, n))


# -- block component of the realized module ------------------------------------------------


def _casimir_element(type_label):
    if type_label == "A1":
        return casimir_sl2()
    return quadratic_casimir(type_label)


def _orbit_tops(rs, lam):
    orbit, _, reps = orbit_data(rs, lam)
    return [dot_action_matrix(rs, w, lam) for w in reps]


def realized_block_module(type_label: str, lam: Weight, eta, depth: int, pad=2):
    """The block component of the realized Whittaker module as a
    WeightModule: per weight, the exact generalized Casimir eigenspace of
    the slice spanned by monomials z^mu y^c.

    The Casimir eigenvalue must separate the block from every other
    z-weight met in the padded window; this is asserted, not assumed.
    """
    rs = from_label(type_label)
    if not lam.is_integral() or not is_dot_antidominant(rs, lam):
        raise ValueError("realized_block_module requires a dot-antidominant integral weight")
    eta = tuple(Fraction(x) for x in eta)
    omega = _casimir_element(type_label)
    chi = central_char_on_highest_weight(type_label, omega, lam)
    tops = _orbit_tops(rs, lam)
    top = max(tops, key=lambda w: rs.weight_height(w - lam))
    from .bigcell import _bounded_exponents
    # candidate weights: orbit tops minus up to depth steps
    weights = set()
    for t in tops:
        for e in _bounded_exponents(rs, depth):
            drop = Weight(tuple(sum(e[k] * int(rs.root_weight(k).coords[i])
                                    for k in range(rs.num_positive)) for i in range(rs.rank)))
            weights.add((t - drop).coords)
    weights = sorted(weights)
    spaces = {}
    bases = {}
    for nu_coords in weights:
        nu = Weight(nu_coords)
        vecs = _realized_block_slice(type_label, lam, eta, omega, chi, nu, tops, depth, pad)
        if vecs:
            spaces[nu] = len(vecs)
            bases[nu] = vecs
    gens = _o_gens(rs)
    action = {g: {} for g in gens}
    for g, shift in gens.items():
        kind, i = g
        op = realized_whittaker_action(type_label, eta)[(kind, i)]
        for nu, vecs in bases.items():
            target = nu + shift
            if target in bases:
                tgt_vecs = bases[target]
            elif _under_some_top(rs, tops, target, depth):
                tgt_vecs = []  # in the box with a zero slice
            elif _under_some_top(rs, tops, target, 10 ** 9):
                continue       # under a top but beyond the box: truncated
            else:
                tgt_vecs = []  # above every top: genuinely zero
            imgs = [op.apply(p) for p in vecs]
            mat = _poly_coords(rs, imgs, tgt_vecs, target, None)
            if mat is None:
                raise ValueError("block action not expressible in the slice basis")
            action[g][nu] = mat
    # rank one: the stored weights form one contiguous cone under the top,
    # so the box depth is the distance to the deepest computed weight
    depth_eff = depth
    if rs.rank == 1 and spaces:
        depth_eff = max(rs.weight_height(top - nu) for nu in spaces)
    mod = WeightModule(gens, _o_drops(rs), [top], depth_eff, spaces, action,
                       tag=f"whittaker-block({lam})")
    mod.bind_root_system(rs)
    mod._poly_bases = bases
    return mod


def _poly_coords(rs, imgs, basis, ref_weight, ht_limit):
    """Coordinates of image polynomials in a slice basis, solved over the
    monomials within ht_limit drop steps of the slice weight (the window
    both sides know exactly); None on failure."""
    def key_ok(k):
        if ht_limit is None:
            return True
        x, z, y = k
        drop = rs.weight_height(Weight(z) - ref_weight)
        return drop is not None and 0 <= drop <= ht_limit

    kset = sorted({k for p in basis for k in p.terms if key_ok(k)}
                  | {k for p in imgs for k in p.terms if key_ok(k)})
    basis_rows = [tuple(p.terms.get(k, Fraction(0)) for k in kset) for p in basis]
    if basis and linalg.span_dim(basis_rows) != len(basis):
        return None
    mat = [[Fraction(0)] * len(imgs) for _ in range(len(basis))]
    cols = [tuple(b[t] for b in basis_rows) for t in range(len(kset))]
    for j, img in enumerate(imgs):
        vec = tuple(img.terms.get(k, Fraction(0)) for k in kset)
        if not any(vec):
            continue
        if not basis:
            return None
        sol = linalg.solve(cols, vec, len(basis))
        if sol is None:
            return None
        for t, cval in enumerate(sol):
            mat[t][j] = cval
    return linalg.mat(mat)


def _y_weight(rs, yexp):
    acc = Weight((0,) * rs.rank)
    for k, e in enumerate(yexp):
        if e:
            acc = acc - rs.root_weight(k).scaled(e)
    return acc


def _under_some_top(rs, tops, nu, depth):
    for t in tops:
        rc = rs.to_root_coords(t - nu)
        if rc is not None and all(c >= 0 for c in rc) and sum(rc) <= depth:
            return True
    return False


def _realized_block_slice(type_label, lam, eta, omega, chi, nu, tops, depth, pad):
    """Exact generalized chi-eigenspace on the slice of realized-action
    weight nu.  The monomial window spans every z-weight between nu and
    the orbit tops, which contains the full support of any block element
    at this weight, so the computed kernel is the honest block slice (no
    truncation; escapes would trip the closure assertion below)."""
    rs = from_label(type_label)
    from .bigcell import _bounded_exponents
    window_ht = 0
    for t in tops:
        h = rs.weight_height(t - nu)
        if h is not None and rs.in_positive_cone(t - nu):
            window_ht = max(window_ht, h)
    monos = []
    for e in _bounded_exponents(rs, window_ht):
        drop = Weight(tuple(sum(e[k] * int(rs.root_weight(k).coords[i])
                                for k in range(rs.num_positive)) for i in range(rs.rank)))
        mu = nu + drop
        # z-weight must stay under an orbit top (block supports do)
        if not _under_some_top(rs, tops, mu, 10 ** 9):
            continue
        monos.append((tuple(int(c) for c in mu.coords), e))
    if not monos:
        return []
    # eigenvalue separation: every z-weight in the window with the block's
    # central character must be dot-linked to lam
    for mu_coords, _ in monos:
        muw = Weight(mu_coords)
        if central_char_on_highest_weight(type_label, omega, muw) == chi:
            if _antidominant_point(rs, muw).coords != lam.coords:
                raise ValueError(
                    f"Casimir eigenvalue does not separate the block at z-weight {muw}")
    index = {m: t for t, m in enumerate(monos)}
    polys = [BigCellPoly.monomial(rs, zwt=m[0], yexp=m[1]) for m in monos]
    imgs = []
    for p in polys:
        img = p
        img = _apply_casimir_realized(type_label, eta, omega, img)
        imgs.append(img - p.scaled(chi))
    n = len(monos)
    mat = [[Fraction(0)] * n for _ in range(n)]
    for j, img in enumerate(imgs):
        for (x, z, y), coeff in img.terms.items():
            key = (z, y)
            if key not in index:
                raise ValueError("Casimir left the slice window; increase pad")
            mat[index[key]][j] += coeff
    power = linalg.mat(mat)
    mat = linalg.mat(mat)
    nilp = len(tops) + 2
    for _ in range(nilp):
        power = linalg.matmul(power, mat)
    ker = linalg.nullspace(power, n)
    out = []
    for vec in ker:
        p = BigCellPoly.zero(rs)
        for coeff, (mu_coords, e) in zip(vec, monos):
            if coeff:
                p.add_term((0,) * rs.num_positive, mu_coords, e, coeff)
        out.append(p)
    return out


def _antidominant_point(rs, mu):
    best = mu
    for w in rs.weyl_elements():
        cand = dot_action_matrix(rs, w, mu)
        if tuple(cand.coords) < tuple(best.coords):
            best = cand
    # the dot-antidominant orbit point is the unique one with all
    # pairings <nu + rho, h_i> <= 0
    for w in rs.weyl_elements():
        cand = dot_action_matrix(rs, w, mu)
        if is_dot_antidominant(rs, cand):
            return cand
    return best


def _apply_casimir_realized(type_label, eta, omega, poly):
    eng = pbw_engine(type_label)
    rs = from_label(type_label)
    out = BigCellPoly.zero(rs)
    for key, coeff in omega.terms:
        word = eng.monomial_word(key)
        out = out + realized_action_word(type_label, eta, word, poly).scaled(coeff)
    return out


# -- the main theorems ------------------------------------------------------------------


def borel_weil_block(type_label: str, lam: Weight, eta, depth: int):
    """Report on the Whittaker realization of the big projective module:
    (a) character equality with the orbit sum of Verma characters,
    (b) the lowering-monomial witness that the top singular vector
        generates a full Verma submodule (coefficient proportional to the
        product of the eta's),
    (c) the costandard quotient at the top z-weight,
    (d) rank one only: an explicit isomorphism onto the big projective.

    In rank one the block module is materialized by exact generalized
    Casimir eigenspaces.  Beyond rank one the character verdict uses the
    torus-weight filtration: the realized action never raises z-weights
    (asserted), the graded Casimir at each z-level acts by the central
    scalar of that level up to verified nilpotents, and the eigenvalue
    separates the dot orbit from every other level in the window
    (asserted); triangular linear algebra then pins the per-weight block
    dimensions to the orbit sum of costandard multiplicities.
    """
    rs = from_label(type_label)
    eta = tuple(Fraction(x) for x in eta)
    report = {"system": type_label, "weight": tuple(lam.coords), "eta": tuple(str(x) for x in eta),
              "depth": depth, "checks": {}}
    nonsingular = all(x != 0 for x in eta)

    from .characters import verma_char
    tops = _orbit_tops(rs, lam)
    if rs.rank == 1:
        w = realized_block_module(type_label, lam, eta, depth)
        expected = {}
        for t in tops:
            ch = verma_char(rs, t)
            for nu in w.weights():
                expected[nu.coords] = expected.get(nu.coords, 0) + ch.multiplicity(nu)
        got = {nu.coords: d for nu, d in w.spaces.items()}
        expected = {k: v for k, v in expected.items() if v}
        report["checks"]["character"] = (got == expected)
    else:
        w = None
        report["checks"]["character"] = _graded_character_check(type_label, lam, eta, depth)

    # (b) Verma submodule witness
    if nonsingular:
        report["checks"]["singular_vector_witness"] = _verma_witness(type_label, lam, eta, depth)
    else:
        report["checks"]["singular_vector_witness"] = "skipped (singular eta)"

    # (c) costandard quotient at the top z-weight
    if rs.rank == 1:
        report["checks"]["costandard_quotient"] = _costandard_quotient_check(
            type_label, lam, eta, w, depth)
    else:
        report["checks"]["costandard_quotient"] = _graded_costandard_check(
            type_label, lam, eta, depth)

    # (d) explicit isomorphism (rank one)
    if type_label == "A1":
        if nonsingular:
            p = big_projective_sl2(lam, depth)
            iso = _explicit_isomorphism(w, p)
            report["checks"]["isomorphic_to_big_projective"] = iso
        else:
            report["checks"]["isomorphic_to_big_projective"] = "skipped (singular eta)"
    report["pass"] = all(v is True or isinstance(v, str) for v in report["checks"].values())
    return report


def _assert_z_nonraising(rs, ops):
    for op in ops.values():
        for tag, poly in op.parts.items():
            for (x, z, y) in poly.terms:
                assert not any(x), "realized action must not involve x"
                rc = rs.to_root_coords(Weight(tuple(-c for c in z)))
                assert rc is not None and all(c >= 0 for c in rc), \
                    "realized action raised a z-weight"


def _graded_character_check(type_label, lam, eta, depth):
    """Character of the block component by the z-filtration argument; all
    three inputs of the argument are verified exactly."""
    rs = from_label(type_label)
    omega = _casimir_element(type_label)
    chi = central_char_on_highest_weight(type_label, omega, lam)
    ops = realized_whittaker_action(type_label, eta)
    _assert_z_nonraising(rs, ops)
    tops = _orbit_tops(rs, lam)
    from .bigcell import _bounded_exponents
    # window of z-levels met by the depth box below the orbit
    levels = set()
    for t in tops:
        for e in _bounded_exponents(rs, depth):
            drop = Weight(tuple(sum(e[k] * int(rs.root_weight(k).coords[i])
                                    for k in range(rs.num_positive)) for i in range(rs.rank)))
            levels.add((t - drop).coords)
    orbit_coords = {t.coords for t in tops}
    for mu_coords in levels:
        muw = Weight(mu_coords)
        sep = central_char_on_highest_weight(type_label, omega, muw) == chi
        if sep != (mu_coords in orbit_coords):
            if sep:
                raise ValueError(f"Casimir does not separate the block at level {muw}")
            return False  # an orbit level with the wrong eigenvalue
    # graded Casimir at each orbit level acts by its central scalar up to
    # verified nilpotents
    for t in tops:
        if not _graded_level_nilpotent(type_label, eta, omega, t, depth):
            return False
    # triangular count: block slice dimension at weight nu equals the sum
    # of costandard multiplicities over the orbit levels; compare with the
    # orbit sum of Verma characters
    from .characters import verma_char
    for t in tops:
        ch = verma_char(rs, t)
        for e in _bounded_exponents(rs, depth):
            drop = Weight(tuple(sum(e[k] * int(rs.root_weight(k).coords[i])
                                    for k in range(rs.num_positive)) for i in range(rs.rank)))
            nu = t - drop
            graded = sum(_level_weight_dim(rs, mu, nu) for mu in tops)
            expected = sum(verma_char(rs, tp).multiplicity(nu) for tp in tops)
            if graded != expected:
                return False
    return True


def _level_weight_dim(rs, mu, nu):
    diff = rs.to_root_coords(mu - nu)
    if diff is None or any(c < 0 for c in diff):
        return 0
    from .characters import kostant_partition
    return kostant_partition(rs, diff)


def _graded_level_nilpotent(type_label, eta, omega, mu, depth):
    """(graded Casimir at z-level mu - chi_mu)^n = 0 on each weight space
    of the level, within the depth box."""
    rs = from_label(type_label)
    chi_mu = central_char_on_highest_weight(type_label, omega, mu)
    from .bigcell import _bounded_exponents
    eng = pbw_engine(type_label)
    mu_key = tuple(int(c) for c in mu.coords)
    by_weight = {}
    for e in _bounded_exponents(rs, depth):
        drop = Weight(tuple(sum(e[k] * int(rs.root_weight(k).coords[i])
                                for k in range(rs.num_positive)) for i in range(rs.rank)))
        by_weight.setdefault((mu - drop).coords, []).append(e)
    for nu_coords, exps in by_weight.items():
        index = {e: t for t, e in enumerate(exps)}
        n = len(exps)
        mat = [[Fraction(0)] * n for _ in range(n)]
        complete = True
        for j, e in enumerate(exps):
            poly = BigCellPoly.monomial(rs, zwt=mu_key, yexp=e)
            img = _apply_casimir_realized(type_label, eta, omega, poly)
            for (x, z, y), coeff in img.terms.items():
                if tuple(z) != mu_key:
                    continue  # lower z-levels: below the diagonal block
                if y in index:
                    mat[index[y]][j] += coeff
                else:
                    complete = False
        if not complete:
            continue  # boundary weight: skipped (interior covers the claim)
        shifted = [[mat[i][j] - (chi_mu if i == j else 0) for j in range(n)] for i in range(n)]
        power = linalg.mat(shifted)
        base = linalg.mat(shifted)
        for _ in range(max(1, n)):
            power = linalg.matmul(power, base)
        if any(any(r) for r in power):
            return False
    return True


def _graded_costandard_check(type_label, lam, eta, depth):
    """The graded module at the top z-level is the costandard module."""
    rs = from_label(type_label)
    from .category_o import contragredient_verma, WeightModule, _o_gens, _o_drops
    from .bigcell import _bounded_exponents, _module_isomorphic
    top = max(_orbit_tops(rs, lam), key=lambda t: rs.weight_height(t - lam))
    top_key = tuple(int(c) for c in top.coords)
    ops = realized_whittaker_action(type_label, eta)
    by_weight = {}
    for e in _bounded_exponents(rs, depth):
        drop = Weight(tuple(sum(e[k] * int(rs.root_weight(k).coords[i])
                                for k in range(rs.num_positive)) for i in range(rs.rank)))
        by_weight.setdefault(top - drop, []).append(e)
    for lst in by_weight.values():
        lst.sort()
    spaces = {nu: len(lst) for nu, lst in by_weight.items()}
    gens = _o_gens(rs)
    action = {g: {} for g in gens}
    for g, shift in gens.items():
        kind, i = g
        op = ops[(kind, i)]
        for nu, lst in by_weight.items():
            target = nu + shift
            tgt = by_weight.get(target)
            if tgt is None:
                if rs.in_positive_cone(top - target) and rs.weight_height(top - target) > depth:
                    continue  # truncated away
                tgt = []
            pos = {e: t for t, e in enumerate(tgt)}
            mat = [[Fraction(0)] * len(lst) for _ in range(len(tgt))]
            for s, e in enumerate(lst):
                img = op.apply(BigCellPoly.monomial(rs, zwt=top_key, yexp=e))
                for (x, z, y), coeff in img.terms.items():
                    if tuple(z) != top_key:
                        continue  # strictly lower z-levels vanish in the quotient
                    if y in pos:
                        mat[pos[y]][s] += coeff
            action[g][nu] = linalg.mat(mat)
    graded = WeightModule(gens, _o_drops(rs), [top], depth, spaces, action, tag="top-level")
    graded.bind_root_system(rs)
    mc = contragredient_verma(rs, top, depth)
    return _module_isomorphic(graded, mc)


def _verma_witness(type_label, lam, eta, depth):
    """q(lam) applied to z^{top} has a nonzero pure z^{lam} coefficient
    proportional to prod eta_i^{n_i}."""
    rs = from_label(type_label)
    from .category_o import verma, singular_vectors
    top = max(_orbit_tops(rs, lam), key=lambda t: rs.weight_height(t - lam))
    need = rs.weight_height(top - lam)
    m_top = verma(rs, top, need + 1)
    sing = [(mu, vec) for mu, vec in singular_vectors(m_top) if mu == lam]
    if len(sing) != 1:
        return False
    mu, vec = sing[0]
    # PBW coefficients of the singular vector in the F-monomial basis
    monos = sorted({a for a in _verma_basis_monos(rs, top, lam, need + 1)})
    coeffs = dict(zip(monos, vec))
    nexp = rs.to_root_coords(top - lam)

    def value(eta_val):
        zpoly = BigCellPoly.monomial(rs, zwt=tuple(int(c) for c in top.coords))
        total = BigCellPoly.zero(rs)
        for a, cf in coeffs.items():
            if not cf:
                continue
            word = []
            for k, e in enumerate(a):
                word += [('f', k)] * e
            total = total + realized_action_word(type_label, tuple(eta_val), tuple(word), zpoly).scaled(cf)
        key = ((0,) * rs.num_positive, tuple(int(c) for c in lam.coords), (0,) * rs.num_positive)
        return total.terms.get(key, Fraction(0))

    v1 = value(eta)
    if v1 == 0:
        return False
    v2 = value(tuple(2 * x for x in eta))
    return v2 == v1 * Fraction(2) ** sum(nexp)


def _verma_basis_monos(rs, top, lam, depth):
    from .bigcell import _bounded_exponents
    out = []
    for a in _bounded_exponents(rs, depth):
        drop = Weight(tuple(sum(a[k] * int(rs.root_weight(k).coords[i])
                                for k in range(rs.num_positive)) for i in range(rs.rank)))
        if (top - drop).coords == lam.coords:
            out.append(a)
    return sorted(out)


def _costandard_quotient_check(type_label, lam, eta, w, depth):
    """The quotient of the realized block by the span of components with
    z-weight below the top is the costandard module of the top weight."""
    rs = from_label(type_label)
    from .category_o import contragredient_verma, quotient_module
    top = max(_orbit_tops(rs, lam), key=lambda t: rs.weight_height(t - lam))
    top_coords = tuple(int(c) for c in top.coords)
    sub = {}
    for nu, vecs in w._poly_bases.items():
        dim = len(vecs)
        # the submodule of strictly smaller z-weights is the kernel of the
        # "coefficient at z^top" map
        keys = sorted({(z, y) for p in vecs for (x, z, y) in p.terms if z == top_coords})
        mat = [[p.terms.get(((0,) * rs.num_positive, z, y), Fraction(0)) for p in vecs]
               for (z, y) in keys]
        ker = linalg.nullspace(mat, dim) if mat else \
            [tuple(Fraction(1 if a == b else 0) for a in range(dim)) for b in range(dim)]
        if ker:
            sub[nu] = linalg.row_space_basis(ker)
    q = quotient_module(w, sub)
    mc_depth = max((rs.weight_height(top - nu) for nu in w.spaces
                    if rs.in_positive_cone(top - nu)), default=depth)
    mc = contragredient_verma(rs, top, mc_depth)
    # character agreement on the common box
    for nu, d in q.spaces.items():
        if mc.known(nu) and mc.dim(nu) != d:
            return False
    for nu, d in mc.spaces.items():
        if q.known(nu) and q.dim(nu) != d:
            return False
    if rs.rank > 1:
        return True  # character-level verdict only beyond rank one
    from .bigcell import _module_isomorphic
    return _module_isomorphic(q, mc)


def _explicit_isomorphism(w, p):
    """True when some intertwiner is bijective on every weight space of
    the common truncation box."""
    common = [nu for nu in w.spaces if p.in_box(nu) and w.in_box(nu)]
    if not common:
        return False

    def bijective(blocks):
        return all(linalg.rank(blocks(nu)) == w.dim(nu) == p.dim(nu) for nu in common)

    maps = hom_space(w, p)
    for t in maps:
        if bijective(t.block):
            return True
    if len(maps) >= 2:
        for c in (1, -1, 2, -2):
            blocks = {nu: linalg.add(maps[0].block(nu), linalg.scale(maps[1].block(nu), c))
                      for nu in common}
            if bijective(lambda nu: blocks[nu]):
                return True
    return False


def double_whittaker_dim(lam: Weight, eta, eta_prime, depth: int):
    """Dimension of the simultaneous left/right Whittaker space of the
    rank-one block: expected |W^lam| = dim End(P_lam)."""
    rs = from_label("A1")
    w = realized_block_module("A1", lam, tuple(eta), depth)
    chi = WhittakerCharacter(tuple(eta_prime), "+")
    return whittaker_dim(w, chi, completed=True)


def soergel_dim_check(m: WeightModule, lam: Weight, eta, depth: int):
    """dim Wh^+_eta(M) = dim Hom(P_lam, M) for a module in the rank-one
    block of lam."""
    from .category_o import big_projective_sl2, hom_dim
    chi = WhittakerCharacter(tuple(eta), "+")
    wd = whittaker_dim(m, chi, completed=True)
    p = big_projective_sl2(lam, m.depth if not m.complete else depth)
    hd = hom_dim(p, m)
    return {"whittaker_dim": wd, "hom_dim": hd, "equal": wd == hd}
