"""Depth-truncated weight modules with exact action matrices: Vermas,
contragredient Vermas, restricted duals, rank-one simples and big
projectives, morphism spaces, singular vectors, submodule/quotient
calculus and Loewy series.

Truncation semantics: a module knows its base weights, the directions in
which it extends ("drops"), and a depth D.  Weights reachable from a
base by at most D drop steps are inside the box; action matrices whose
target leaves the box are dropped, and every consumer only asserts
identities whose source and target are inside the box.  Dimension
claims carry two-depth stability checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .enveloping import PBWElement, pbw_engine
from .rootsys import RootSystem, Weight, dot_action_matrix, from_label, is_dot_antidominant


class WeightModule:
    """Weight-graded module with exact matrices for a finite generator set.

    gens: dict label -> Weight shift.  For category O modules the labels
    are ('e', i) and ('f', i) over the simple roots; bimodules double
    them.  `drops` spans the cone of weights below/above the bases.
    """

    def __init__(self, gens, drops, base_weights, depth, spaces, action, complete=False, tag="",
                 box_groups=None):
        self.gens = dict(gens)
        self.drops = tuple(drops)
        self.base_weights = tuple(base_weights)
        self.depth = depth
        self.spaces = {w: d for w, d in spaces.items() if d}
        self.action = action
        self.complete = complete
        self.tag = tag
        # box_groups: list of (drop index tuple, step limit or None); the
        # default is one group over all drops bounded by `depth`
        self.box_groups = box_groups
        self._drop_inverse = self._build_drop_inverse()
        self._derived = {}

    # -- box geometry ----------------------------------------------------------

    def _build_drop_inverse(self):
        n = len(self.drops[0].coords)
        cols = [d.coords for d in self.drops]
        assert len(cols) == n, "drop directions must form a basis"
        m = [[Fraction(cols[j][i]) for j in range(n)] + [Fraction(1 if k == i else 0) for k in range(n)]
             for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if m[r][col])
            m[col], m[piv] = m[piv], m[col]
            inv = 1 / m[col][col]
            m[col] = [x * inv for x in m[col]]
            for r in range(n):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return tuple(tuple(row[n:]) for row in m)

    def drop_coords(self, mu: Weight):
        """Steps (c_1, ..., c_n) with mu = base + sum c_k drop_k, minimized
        over bases; None if mu is under no base cone."""
        best = None
        for b in self.base_weights:
            diff = (mu - b).coords
            c = tuple(sum(self._drop_inverse[i][j] * diff[j] for j in range(len(diff)))
                      for i in range(len(diff)))
            if any(x.denominator != 1 or x < 0 for x in c):
                continue
            tot = sum(c)
            if best is None or tot < best[0]:
                best = (tot, c)
        return best

    def _base_step_vectors(self, mu: Weight):
        """All valid decompositions mu = base + sum c_k drop_k, c >= 0."""
        out = []
        for b in self.base_weights:
            diff = (mu - b).coords
            c = tuple(sum(self._drop_inverse[i][j] * diff[j] for j in range(len(diff)))
                      for i in range(len(diff)))
            if all(x.denominator == 1 and x >= 0 for x in c):
                out.append(c)
        return out

    def _box_ok(self, mu: Weight, margin):
        if self.complete:
            return bool(self._base_step_vectors(mu))
        for c in self._base_step_vectors(mu):
            if self.box_groups is None:
                if sum(c) <= self.depth - margin:
                    return True
            else:
                if all(limit is None or sum(c[i] for i in idx) <= limit - margin
                       for idx, limit in self.box_groups):
                    return True
        return False

    def in_box(self, mu: Weight, margin=0):
        if not self._base_step_vectors(mu):
            return False
        return self._box_ok(mu, margin)

    def known(self, mu: Weight, margin=0):
        """True if the dimension at mu is trustworthy (in box, or not
        under any base cone so genuinely zero)."""
        if not self._base_step_vectors(mu):
            return True
        return self._box_ok(mu, margin)

    def dim(self, mu: Weight):
        return self.spaces.get(mu, 0)

    def weights(self):
        return sorted(self.spaces, key=lambda w: tuple(w.coords))

    def total_dim(self):
        return sum(self.spaces.values())

    def matrix(self, label, mu: Weight):
        """Action matrix V[mu] -> V[mu + shift]; zero matrix if absent."""
        entry = self.action.get(label, {}).get(mu)
        if entry is not None:
            return entry
        target = mu + self.gens[label]
        return linalg.zeros(self.dim(target), self.dim(mu))

    def has_matrix(self, label, mu: Weight):
        """True when the action entry is genuinely available: stored, or
        forced zero by a zero-dimensional source or known-zero target."""
        if mu in self.action.get(label, {}):
            return True
        if self.dim(mu) == 0:
            return True
        target = mu + self.gens[label]
        return self.known(target) and self.dim(target) == 0

    def truncated_character(self):
        return {mu: d for mu, d in self.spaces.items()}

    # -- derived root-vector actions (category O modules only) -------------------

    def bind_root_system(self, rs: RootSystem):
        self._rs = rs
        return self

    def root_action(self, kind, k):
        """Operator dict mu -> matrix for the root vector e_{beta_k} or
        f_{beta_k}, derived from simple actions by bracket recursion."""
        key = (kind, k)
        if key in self._derived:
            return self._derived[key]
        rs = self._rs
        sc = pbw_engine(rs.type_label).sc
        if rs.height(k) == 1:
            i = rs.positive_roots[k].index(1)
            op = {mu: self.matrix((kind, i), mu) for mu in self.spaces}
            shift = rs.root_weight(k) if kind == 'e' else -rs.root_weight(k)
        else:
            gamma = rs.positive_roots[k]
            i0 = None
            for i, a in enumerate(rs.positive_roots):
                b = tuple(x - y for x, y in zip(gamma, a))
                if b in sc._roots and sc._roots[b] > i:
                    i0, j0 = i, sc._roots[b]
                    break
            n = sc.N[(rs.positive_roots[i0], rs.positive_roots[j0])]
            if kind == 'f':
                # [f_a, f_b] = -N_{a,b} f_{a+b}
                n = -n
            op1, _ = self.root_action(kind, i0)
            op2, _ = self.root_action(kind, j0)
            s1 = rs.root_weight(i0) if kind == 'e' else -rs.root_weight(i0)
            s2 = rs.root_weight(j0) if kind == 'e' else -rs.root_weight(j0)
            shift = s1 + s2
            op = {}
            inv = Fraction(1, n)
            for mu in self.spaces:
                a = self._compose_step(op1, s1, op2, s2, mu)
                b = self._compose_step(op2, s2, op1, s1, mu)
                if a is None or b is None:
                    continue
                op[mu] = linalg.scale(linalg.sub(a, b), inv)
        self._derived[key] = (op, shift)
        return self._derived[key]

    def _compose_step(self, op1, s1, op2, s2, mu):
        """op1 after op2 at source weight mu; None if the intermediate
        weight is not known."""
        mid = mu + s2
        if not self.known(mid):
            return None
        if self.dim(mid) == 0:
            return linalg.zeros(self.dim(mid + s1), self.dim(mu))
        m2 = op2.get(mu)
        if m2 is None:
            m2 = linalg.zeros(self.dim(mid), self.dim(mu))
        m1 = op1.get(mid)
        if m1 is None:
            m1 = linalg.zeros(self.dim(mid + s1), self.dim(mid))
        return linalg.matmul(m1, m2)

    def apply_pbw(self, elt: PBWElement, mu: Weight):
        """Matrix of a PBW element on the weight space at mu (None if any
        intermediate weight is truncated away)."""
        rs = self._rs
        total = None
        dim_mu = self.dim(mu)
        wt0 = elt.left_weight(rs) or Weight((0,) * rs.rank)
        final = mu + wt0
        for (a, b, c), coeff in elt.terms:
            cur = linalg.identity(dim_mu)
            src = mu
            dead = False
            ok = True
            for k in reversed(range(len(c))):
                for _ in range(c[k]):
                    op, shift = self.root_action('e', k)
                    nxt = src + shift
                    if not self.known(nxt):
                        ok = False
                        break
                    if self.dim(nxt) == 0 or dead:
                        dead = True
                        src = nxt
                        continue
                    m = op.get(src, linalg.zeros(self.dim(nxt), self.dim(src)))
                    cur = linalg.matmul(m, cur)
                    src = nxt
                if not ok:
                    break
            if not ok:
                return None
            hval = Fraction(1)
            for i, e in enumerate(b):
                hval *= src.coords[i] ** e
            if not dead:
                cur = linalg.scale(cur, coeff * hval)
            for k in reversed(range(len(a))):
                for _ in range(a[k]):
                    op, shift = self.root_action('f', k)
                    nxt = src + shift
                    if not self.known(nxt):
                        ok = False
                        break
                    if self.dim(nxt) == 0 or dead:
                        dead = True
                        src = nxt
                        continue
                    m = op.get(src, linalg.zeros(self.dim(nxt), self.dim(src)))
                    cur = linalg.matmul(m, cur)
                    src = nxt
                if not ok:
                    break
            if not ok:
                return None
            if src != final:
                raise ValueError("apply_pbw needs a weight-homogeneous element")
            if dead:
                cur = linalg.zeros(self.dim(final), dim_mu)
            total = cur if total is None else linalg.add(total, cur)
        if total is None:
            total = linalg.zeros(self.dim(final), dim_mu)
        return total


# -- category O constructors -----------------------------------------------------


def _o_gens(rs: RootSystem):
    gens = {}
    for i in range(rs.rank):
        alpha = rs.root_weight(rs.simple_indices[i])
        gens[('e', i)] = alpha
        gens[('f', i)] = -alpha
    return gens


def _o_drops(rs: RootSystem):
    return tuple(-rs.root_weight(rs.simple_indices[i]) for i in range(rs.rank))


def _ostar_drops(rs: RootSystem):
    return tuple(rs.root_weight(rs.simple_indices[i]) for i in range(rs.rank))


def verma(rs: RootSystem, lam: Weight, depth: int) -> WeightModule:
    """Truncated Verma module; basis per weight given by normal-ordered
    F-monomials in height order."""
    eng = pbw_engine(rs.type_label)
    m = rs.num_positive
    basis_index = {}
    for a in _f_monomials(rs, depth):
        mu = lam - _f_weight(rs, a)
        basis_index.setdefault(mu, []).append(a)
    for lst in basis_index.values():
        lst.sort()
    spaces = {mu: len(lst) for mu, lst in basis_index.items()}
    gens = _o_gens(rs)
    action = {g: {} for g in gens}
    for mu, lst in basis_index.items():
        for label, shift in gens.items():
            t, i = label
            target = mu + shift
            if target not in basis_index and _in_verma_box(rs, lam, target, depth):
                tgt_list = []
            elif target in basis_index:
                tgt_list = basis_index[target]
            else:
                continue  # above the highest weight (known zero) or truncated away
            if target not in basis_index and not _in_verma_box(rs, lam, target, depth):
                continue
            mat = [[Fraction(0)] * len(lst) for _ in range(len(tgt_list))]
            pos = {a: idx for idx, a in enumerate(tgt_list)}
            for s, a in enumerate(lst):
                word = ((t, rs.simple_indices[i]),) + eng.monomial_word((a, (0,) * rs.rank, (0,) * m))
                for (a2, b2, c2), coeff in eng.normal_form_word(word).items():
                    if any(c2):
                        continue
                    val = coeff
                    for ii, ee in enumerate(b2):
                        val *= lam.coords[ii] ** ee
                    if val and a2 in pos:
                        mat[pos[a2]][s] += val
            action[label][mu] = linalg.mat(mat)
    mod = WeightModule(gens, _o_drops(rs), [lam], depth, spaces, action, tag=f"M({lam})")
    return mod.bind_root_system(rs)


def _in_verma_box(rs, lam, mu, depth):
    diff = lam - mu
    rc = rs.to_root_coords(diff)
    return rc is not None and all(x >= 0 for x in rc) and sum(rc) <= depth


def _f_weight(rs, a):
    acc = Weight((0,) * rs.rank)
    for k, e in enumerate(a):
        if e:
            acc = acc + rs.root_weight(k).scaled(e)
    return acc


def _f_monomials(rs, depth):
    """Exponent tuples a with total height of sum a_k beta_k at most depth."""
    out = []
    heights = [rs.height(k) for k in range(rs.num_positive)]

    def rec(idx, remaining, cur):
        if idx == rs.num_positive:
            out.append(tuple(cur))
            return
        for e in range(remaining // heights[idx] + 1):
            cur.append(e)
            rec(idx + 1, remaining - e * heights[idx], cur)
            cur.pop()

    rec(0, depth, [])
    return out


def restricted_dual(v: WeightModule) -> WeightModule:
    """Graded dual with the action twisted by x -> -x; highest-weight
    boxes become lowest-weight boxes of the mirror category."""
    gens = {}
    for label, shift in v.gens.items():
        gens[label] = shift  # shifts are preserved: x raises on V* iff it raises on V
    spaces = {-mu: d for mu, d in v.spaces.items()}
    action = {label: {} for label in gens}
    for label, shift in v.gens.items():
        for mu in v.spaces:
            src_dual = -(mu + shift)
            m = v.matrix(label, mu)
            if not v.known(mu + shift):
                continue
            action[label][src_dual] = linalg.scale(linalg.transpose(m, cols=v.dim(mu)), Fraction(-1))
    out = WeightModule(gens, tuple(-d for d in v.drops), [-b for b in v.base_weights],
                       v.depth, spaces, action, complete=v.complete, tag=f"dual({v.tag})",
                       box_groups=v.box_groups)
    if hasattr(v, "_rs"):
        out.bind_root_system(v._rs)
    return out


def contragredient_verma(rs: RootSystem, lam: Weight, depth: int) -> WeightModule:
    """Costandard module: dual of the Verma twisted by the transpose
    antiautomorphism (e_i <-> f_i), so weights are preserved."""
    v = verma(rs, lam, depth)
    gens = _o_gens(rs)
    spaces = dict(v.spaces)
    action = {label: {} for label in gens}
    swap = {('e', i): ('f', i) for i in range(rs.rank)}
    swap.update({('f', i): ('e', i) for i in range(rs.rank)})
    for label in gens:
        other = swap[label]
        shift = gens[label]
        for mu in v.spaces:
            target = mu + shift
            if not v.known(target):
                continue
            m = v.matrix(other, target)  # V[target] -> V[mu]
            action[label][mu] = linalg.transpose(m, cols=v.dim(target))
    out = WeightModule(gens, _o_drops(rs), [lam], depth, spaces, action, tag=f"Mc({lam})")
    return out.bind_root_system(rs)


def simple_sl2_finite(lam_int: int) -> WeightModule:
    """The (lam+1)-dimensional simple module for the rank-one system."""
    assert lam_int >= 0
    rs = from_label("A1")
    gens = _o_gens(rs)
    spaces = {}
    for k in range(lam_int + 1):
        spaces[Weight((lam_int - 2 * k,))] = 1
    action = {('e', 0): {}, ('f', 0): {}}
    for k in range(lam_int + 1):
        mu = Weight((lam_int - 2 * k,))
        # f . v_k = v_{k+1} (k < lam), e . v_k = k (lam - k + 1) v_{k-1}
        if k < lam_int:
            action[('f', 0)][mu] = linalg.mat([[Fraction(1)]])
        else:
            action[('f', 0)][mu] = linalg.mat([])
        if k > 0:
            action[('e', 0)][mu] = linalg.mat([[Fraction(k * (lam_int - k + 1))]])
        else:
            action[('e', 0)][mu] = linalg.mat([])
    mod = WeightModule(gens, _o_drops(rs), [Weight((lam_int,))], lam_int, spaces, action,
                       complete=True, tag=f"L({lam_int})")
    return mod.bind_root_system(rs)


def simple_in_block_sl2(rs, lam: Weight, x, depth):
    """Model of L_{x.lam} for the rank-one block of dot-antidominant lam."""
    mu = dot_action_matrix(rs, x, lam)
    val = int(mu.coords[0])
    if val >= 0:
        return simple_sl2_finite(val)
    return verma(rs, mu, depth)


def tensor(v: WeightModule, w: WeightModule, depth=None) -> WeightModule:
    """Tensor product of two category O modules over the same root system
    (generator acts as x (x) 1 + 1 (x) x)."""
    rs = v._rs
    gens = _o_gens(rs)
    pairs = {}
    for mu1, d1 in v.spaces.items():
        for mu2, d2 in w.spaces.items():
            tot = mu1 + mu2
            pairs.setdefault(tot, []).append((mu1, mu2, d1, d2))
    for lst in pairs.values():
        lst.sort(key=lambda t: (t[0].coords, t[1].coords))
    spaces = {tot: sum(d1 * d2 for _, _, d1, d2 in lst) for tot, lst in pairs.items()}
    bases = sorted({(b1 + b2).coords for b1 in v.base_weights for b2 in w.base_weights})
    base_weights = [Weight(b) for b in bases]
    if depth is None:
        spread = 0
        if w.complete:
            tops = [rs.weight_height(b - mu) for b in w.base_weights for mu in w.spaces
                    if rs.weight_height(b - mu) is not None]
            spread = max(tops) if tops else 0
            depth = v.depth - spread
        else:
            depth = min(v.depth, w.depth)
    offs = {}
    for tot, lst in pairs.items():
        off = 0
        for mu1, mu2, d1, d2 in lst:
            offs[(tot, mu1, mu2)] = off
            off += d1 * d2
    action = {g: {} for g in gens}
    for g, shift in gens.items():
        for tot, lst in pairs.items():
            target = tot + shift
            # build only when all contributions are known in both factors
            okall = all(v.known(mu1 + shift) and w.known(mu2 + shift) for mu1, mu2, _, _ in lst)
            if not okall:
                continue
            rows = spaces.get(target, 0)
            cols = spaces[tot]
            mat = [[Fraction(0)] * cols for _ in range(rows)]
            for mu1, mu2, d1, d2 in lst:
                src_off = offs[(tot, mu1, mu2)]
                # x on the first factor
                m1 = v.matrix(g, mu1)
                t1 = mu1 + shift
                if (target, t1, mu2) in offs:
                    toff = offs[(target, t1, mu2)]
                    for i in range(v.dim(t1)):
                        for j in range(d1):
                            if m1[i][j]:
                                for k in range(d2):
                                    mat[toff + i * d2 + k][src_off + j * d2 + k] += m1[i][j]
                # x on the second factor
                m2 = w.matrix(g, mu2)
                t2 = mu2 + shift
                if (target, mu1, t2) in offs:
                    toff = offs[(target, mu1, t2)]
                    for i in range(d1):
                        for j in range(w.dim(t2)):
                            for k in range(d2):
                                if m2[j][k]:
                                    mat[toff + i * w.dim(t2) + j][src_off + i * d2 + k] += m2[j][k]
            action[g][tot] = linalg.mat(mat)
    out = WeightModule(gens, _o_drops(rs), base_weights, depth, spaces, action,
                       tag=f"{v.tag}(x){w.tag}")
    out.bind_root_system(rs)
    # prune weights outside the stated box so dims stay trustworthy
    keep = {mu: d for mu, d in out.spaces.items() if out.in_box(mu)}
    out.spaces = keep
    out.action = {g: {mu: m for mu, m in table.items() if mu in keep} for g, table in out.action.items()}
    return out


# -- morphisms -----------------------------------------------------------------


@dataclass
class ModuleMap:
    source: WeightModule
    target: WeightModule
    blocks: dict  # Weight -> matrix (dim target[mu] x dim source[mu])

    def block(self, mu):
        m = self.blocks.get(mu)
        if m is not None:
            return m
        return linalg.zeros(self.target.dim(mu), self.source.dim(mu))

    def apply(self, mu, vec):
        return linalg.matvec(self.block(mu), vec)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        blocks = {}
        for mu in other.source.spaces:
            m = linalg.matmul(self.block(mu), other.block(mu))
            if any(any(r) for r in m):
                blocks[mu] = m
        return ModuleMap(other.source, self.target, blocks)

    def is_zero(self):
        return all(not any(any(r) for r in m) for m in self.blocks.values())


def hom_space(v: WeightModule, w: WeightModule, require_stable=True):
    """Basis of intertwiners on truncations.  Dimensions are computed at
    the full box and at the box shrunk by one drop step; a mismatch
    raises (increase depth)."""
    sols0 = _hom_solutions(v, w, margin=0)
    if require_stable:
        sols1 = _hom_solutions(v, w, margin=1)
        if len(sols0) != len(sols1):
            raise ValueError(
                f"hom dimension unstable between depths ({len(sols1)} vs {len(sols0)}): increase depth")
    return sols0


def hom_dim(v, w, require_stable=True):
    return len(hom_space(v, w, require_stable))


def _hom_solutions(v, w, margin):
    weights = [mu for mu in v.spaces
               if w.dim(mu) and v.known(mu, margin) and w.known(mu, margin)]
    weights.sort(key=lambda x: x.coords)
    offsets = {}
    nvar = 0
    for mu in weights:
        offsets[mu] = nvar
        nvar += v.dim(mu) * w.dim(mu)
    if nvar == 0:
        return []
    rows = []
    for g, shift in v.gens.items():
        for mu in v.spaces:
            target = mu + shift
            if not (v.known(target, margin) and w.known(target, margin)):
                continue
            if not (v.known(mu, margin) and w.known(mu, margin)):
                continue
            if not (v.has_matrix(g, mu) and w.has_matrix(g, mu)):
                continue
            av = v.matrix(g, mu)
            aw = w.matrix(g, mu)
            dv_s, dv_t = v.dim(mu), v.dim(target)
            dw_s, dw_t = w.dim(mu), w.dim(target)
            # T_target . av - aw . T_mu = 0 : rows indexed by (i in dw_t, j in dv_s)
            for i in range(dw_t):
                for j in range(dv_s):
                    row = {}
                    if target in offsets:
                        base = offsets[target]
                        for k in range(dv_t):
                            if av[k][j]:
                                row[base + i * dv_t + k] = row.get(base + i * dv_t + k, 0) + av[k][j]
                    if mu in offsets:
                        base = offsets[mu]
                        for k in range(dw_s):
                            if aw[i][k]:
                                row[base + k * dv_s + j] = row.get(base + k * dv_s + j, 0) - aw[i][k]
                    if row:
                        rows.append(row)
    kernel = linalg.sparse_nullspace(rows, nvar) if rows else \
        [tuple(Fraction(1 if i == j else 0) for i in range(nvar)) for j in range(nvar)]
    maps = []
    for vec in kernel:
        blocks = {}
        for mu in weights:
            dv, dw = v.dim(mu), w.dim(mu)
            base = offsets[mu]
            m = [[vec[base + i * dv + j] for j in range(dv)] for i in range(dw)]
            if any(any(r) for r in m):
                blocks[mu] = linalg.mat(m)
        maps.append(ModuleMap(v, w, blocks))
    return maps


def singular_vectors(v: WeightModule):
    """Per-weight kernels of all raising generators, at weights where
    every raising target is known."""
    rs = v._rs
    out = []
    for mu in v.weights():
        ok = True
        rows = []
        for i in range(rs.rank):
            label = ('e', i)
            target = mu + v.gens[label]
            if not v.known(target):
                ok = False
                break
            rows.extend(v.matrix(label, mu))
        if not ok:
            continue
        dim = v.dim(mu)
        ker = linalg.nullspace(rows, dim) if rows else [tuple(Fraction(1 if a == b else 0) for a in range(dim)) for b in range(dim)]
        for vec in ker:
            out.append((mu, vec))
    return out


# -- submodules, quotients, series ------------------------------------------------


def generated_submodule(v: WeightModule, seeds):
    """Closure of seed vectors under all generators, inside the box.
    seeds: iterable of (Weight, vector)."""
    spaces = {}
    frontier = []
    for mu, vec in seeds:
        if any(vec):
            spaces.setdefault(mu, [])
            if not linalg.in_span(vec, spaces[mu]):
                spaces[mu] = linalg.row_space_basis(spaces[mu] + [vec])
                frontier.append((mu, vec))
    while frontier:
        mu, vec = frontier.pop()
        for g, shift in v.gens.items():
            target = mu + shift
            if not v.in_box(target) or not v.dim(target):
                continue
            img = linalg.matvec(v.matrix(g, mu), vec)
            if not any(img):
                continue
            cur = spaces.setdefault(target, [])
            if not linalg.in_span(img, cur):
                spaces[target] = linalg.row_space_basis(cur + [img])
                frontier.append((target, img))
    return {mu: basis for mu, basis in spaces.items() if basis}


def sub_module(v: WeightModule, subspaces) -> WeightModule:
    """Sub-WeightModule on the given invariant subspaces."""
    spaces = {mu: len(basis) for mu, basis in subspaces.items()}
    action = {g: {} for g in v.gens}
    for g, shift in v.gens.items():
        for mu, basis in subspaces.items():
            target = mu + shift
            tb = subspaces.get(target)
            if not v.known(target):
                continue
            if tb is None:
                # either genuinely zero there, or the subspace family was
                # not computed that deep; verify the former when possible
                imgs = [linalg.matvec(v.matrix(g, mu), vec) for vec in basis]
                if any(any(img) for img in imgs):
                    if target in subspaces or not v.dim(target):
                        raise ValueError("subspaces are not invariant under the action")
                    # image lands in a weight space where the family was
                    # truncated; drop per truncation semantics
                    continue
                tb = []
            mat = []
            for vec in basis:
                img = linalg.matvec(v.matrix(g, mu), vec)
                coords = _coords_in_basis(img, tb)
                if coords is None:
                    raise ValueError("subspaces are not invariant under the action")
                mat.append(coords)
            # rows currently indexed by source; transpose to target x source
            m = [[mat[s][t] for s in range(len(basis))] for t in range(len(tb))]
            action[g][mu] = linalg.mat(m)
    out = WeightModule(v.gens, v.drops, v.base_weights, v.depth, spaces, action,
                       complete=v.complete, tag=f"sub({v.tag})", box_groups=v.box_groups)
    if hasattr(v, "_rs"):
        out.bind_root_system(v._rs)
    return out


def _coords_in_basis(vec, basis):
    if not any(vec):
        return [Fraction(0)] * len(basis)
    if not basis:
        return None
    cols = [tuple(b[i] for b in basis) for i in range(len(vec))]
    return None if (sol := linalg.solve(cols, vec, len(basis))) is None else list(sol)


def quotient_module(v: WeightModule, subspaces) -> WeightModule:
    """Quotient of v by an invariant family of subspaces."""
    reps = {}
    spaces = {}
    for mu in v.spaces:
        basis = subspaces.get(mu, [])
        dim = v.dim(mu)
        red = linalg.row_space_basis(basis)
        pivots = set()
        if red:
            _, piv = linalg.rref(red)
            pivots = set(piv)
        free = [j for j in range(dim) if j not in pivots]
        reps[mu] = (red, free)
        if free:
            spaces[mu] = len(free)
    action = {g: {} for g in v.gens}
    for g, shift in v.gens.items():
        for mu in v.spaces:
            target = mu + shift
            if not v.known(target):
                continue
            red_t, free_t = reps.get(target, ([], []))
            red_s, free_s = reps[mu]
            mat = [[Fraction(0)] * len(free_s) for _ in range(len(free_t))]
            m = v.matrix(g, mu)
            for sidx, j in enumerate(free_s):
                vec = tuple(m[i][j] for i in range(v.dim(target)))
                q = _reduce_mod(vec, red_t)
                for tidx, jj in enumerate(free_t):
                    mat[tidx][sidx] = q[jj]
            action[g][mu] = linalg.mat(mat)
    out = WeightModule(v.gens, v.drops, v.base_weights, v.depth, spaces, action,
                       complete=v.complete, tag=f"quot({v.tag})", box_groups=v.box_groups)
    if hasattr(v, "_rs"):
        out.bind_root_system(v._rs)
    return out


def _reduce_mod(vec, red_basis):
    out = list(vec)
    for b in red_basis:
        piv = next(i for i, x in enumerate(b) if x)
        if out[piv]:
            f = out[piv] / b[piv]
            out = [x - f * y for x, y in zip(out, b)]
    return out


def decompose_character(v_char, simple_models, box_filter=None):
    """Greedy unitriangular decomposition of a truncated character into the
    given simple characters; returns a dict label -> multiplicity.

    A weight is processed once it is extremal: not strictly inside the
    drop-cone of any other remaining weight.  Extremal weights must be
    base weights of simple models."""
    remaining = {mu: d for mu, d in v_char.items() if d and (box_filter is None or box_filter(mu))}
    any_model = next(iter(simple_models.values()))
    tops = {}
    for label, model in simple_models.items():
        (b,) = model.base_weights
        tops[b] = label

    def strictly_inside(mu, nu):
        # mu in nu + positive drop cone, mu != nu
        if mu == nu:
            return False
        dc = _cone_coords(any_model, mu - nu)
        return dc is not None

    mult = {}
    guard = 0
    while any(remaining.values()):
        guard += 1
        if guard > 10000:
            raise RuntimeError("character decomposition did not terminate")
        live = [mu for mu, d in remaining.items() if d]
        extremal = [mu for mu in live if not any(strictly_inside(mu, nu) for nu in live)]
        extremal.sort(key=lambda m: m.coords)
        top = extremal[0]
        if top not in tops:
            raise ValueError(f"character has unexpected top weight {top}")
        label = tops[top]
        m = remaining[top]
        assert m > 0, "negative multiplicity during decomposition"
        mult[label] = mult.get(label, 0) + m
        for mu, d in simple_models[label].spaces.items():
            if box_filter is not None and not box_filter(mu):
                continue
            remaining[mu] = remaining.get(mu, 0) - m * d
    return mult


def _cone_coords(model, delta: Weight):
    inv = model._drop_inverse
    n = len(delta.coords)
    c = tuple(sum(inv[i][j] * delta.coords[j] for j in range(n)) for i in range(n))
    if any(x.denominator != 1 or x < 0 for x in c):
        return None
    return c


def radical_subspaces(v: WeightModule, simple_models):
    """Intersection of kernels of all maps to the simple models."""
    maps = []
    for model in simple_models.values():
        maps.extend(hom_space(v, model))
    spaces = {}
    for mu in v.spaces:
        rows = []
        for t in maps:
            rows.extend(t.block(mu))
        dim = v.dim(mu)
        if rows:
            ker = linalg.nullspace(rows, dim)
        else:
            ker = [tuple(Fraction(1 if a == b else 0) for a in range(dim)) for b in range(dim)]
        if ker:
            spaces[mu] = linalg.row_space_basis(ker)
    return {mu: b for mu, b in spaces.items() if b}


def socle_subspaces(v: WeightModule, simple_models):
    """Sum of images of all maps from the simple models."""
    spaces = {}
    for model in simple_models.values():
        for t in hom_space(model, v):
            for mu in model.spaces:
                blk = t.block(mu)
                for j in range(model.dim(mu)):
                    vec = tuple(blk[i][j] for i in range(v.dim(mu)))
                    if any(vec):
                        cur = spaces.setdefault(mu, [])
                        if not linalg.in_span(vec, cur):
                            spaces[mu] = linalg.row_space_basis(cur + [vec])
    return spaces


def radical_filtration(v: WeightModule, simple_models, max_len=10):
    """Descending chain of subspace families [V, rad V, rad^2 V, ...] in
    the coordinates of v, ending with the zero family."""
    full = {mu: [tuple(Fraction(1 if i == j else 0) for i in range(v.dim(mu)))
                 for j in range(v.dim(mu))] for mu in v.spaces}
    chain = [full]
    cur_family = full
    for _ in range(max_len):
        if not any(cur_family.values()):
            break
        cur_mod = sub_module(v, cur_family) if cur_family is not full else v
        rad = radical_subspaces(cur_mod, simple_models)
        # convert to v coordinates
        if cur_family is full:
            rad_v = rad
        else:
            rad_v = {}
            for mu, vecs in rad.items():
                basis = cur_family.get(mu, [])
                conv = []
                for vec in vecs:
                    out = [Fraction(0)] * v.dim(mu)
                    for c, b in zip(vec, basis):
                        if c:
                            out = [o + c * x for o, x in zip(out, b)]
                    conv.append(tuple(out))
                if conv:
                    rad_v[mu] = linalg.row_space_basis(conv)
        rad_v = {mu: b for mu, b in rad_v.items() if b}
        chain.append(rad_v)
        if not rad_v:
            break
        cur_family = rad_v
    if any(chain[-1].values()):
        raise ValueError("radical filtration did not reach zero; increase depth")
    return chain


def socle_filtration(v: WeightModule, simple_models, max_len=10):
    """Ascending chain of subspace families [0, soc V, soc^2 V, ...] in the
    coordinates of v, ending with the full family."""
    chain = [{}]
    acc = {}
    for _ in range(max_len):
        q = quotient_module(v, acc) if acc else v
        soc_q = socle_subspaces(q, simple_models)
        if acc:
            # sections: quotient coordinates are the free (non-pivot) indices
            reps = _quotient_reps(v, acc)
            new = {mu: list(vecs) for mu, vecs in acc.items()}
            for mu, vecs in soc_q.items():
                red, free = reps[mu]
                for vec in vecs:
                    out = [Fraction(0)] * v.dim(mu)
                    for val, idx in zip(vec, free):
                        out[idx] = val
                    new.setdefault(mu, []).append(tuple(out))
            acc = {mu: linalg.row_space_basis(vs) for mu, vs in new.items()}
        else:
            acc = {mu: linalg.row_space_basis(vs) for mu, vs in soc_q.items()}
        acc = {mu: b for mu, b in acc.items() if b}
        chain.append(acc)
        if all(len(acc.get(mu, [])) == v.dim(mu) for mu in v.spaces):
            return chain
    raise ValueError("socle filtration did not exhaust the module; increase depth")


def _quotient_reps(v, subspaces):
    reps = {}
    for mu in v.spaces:
        basis = subspaces.get(mu, [])
        red = linalg.row_space_basis(basis)
        pivots = set()
        if red:
            _, piv = linalg.rref(red)
            pivots = set(piv)
        free = [j for j in range(v.dim(mu)) if j not in pivots]
        reps[mu] = (red, free)
    return reps


def radical_series(v: WeightModule, simple_models, max_len=10, box_filter=None):
    """Layer label multisets of the radical series, top layer first."""
    layers = []
    cur = v
    for _ in range(max_len):
        if not cur.spaces:
            break
        rad = radical_subspaces(cur, simple_models)
        quot_char = dict(cur.truncated_character())
        for mu, basis in rad.items():
            quot_char[mu] = quot_char.get(mu, 0) - len(basis)
        quot_char = {mu: d for mu, d in quot_char.items() if d}
        mult = decompose_character(quot_char, simple_models, box_filter)
        layers.append(tuple(sorted(mult.items())))
        if not rad:
            cur = None
            break
        cur = sub_module(cur, rad)
    if cur is not None and cur.spaces:
        raise ValueError("radical series did not terminate; increase depth")
    return layers


def socle_series(v: WeightModule, simple_models, max_len=10, box_filter=None):
    """Layer label multisets of the socle series, socle first."""
    layers = []
    cur = v
    for _ in range(max_len):
        if not cur.spaces:
            break
        soc = socle_subspaces(cur, simple_models)
        mult = decompose_character({mu: len(b) for mu, b in soc.items()}, simple_models, box_filter)
        layers.append(tuple(sorted(mult.items())))
        if all(len(soc.get(mu, [])) == cur.dim(mu) for mu in cur.spaces):
            cur = None
            break
        cur = quotient_module(cur, soc)
    if cur is not None and cur.spaces:
        raise ValueError("socle series did not terminate; increase depth")
    return layers


# -- rank-one block machinery ------------------------------------------------------


def sl2_block_simples(lam: Weight, depth: int):
    """Simple models {label: module} for the rank-one block of lam."""
    rs = from_label("A1")
    if not is_dot_antidominant(rs, lam):
        raise ValueError("expected a dot-antidominant weight")
    out = {}
    from .rootsys import orbit_data
    orbit, _, reps = orbit_data(rs, lam)
    for w in reps:
        mu = dot_action_matrix(rs, w, lam)
        label = f"L({int(mu.coords[0])})"
        out[label] = simple_in_block_sl2(rs, lam, w, depth)
    return out


def big_projective_sl2(lam: Weight, depth: int) -> WeightModule:
    """P_lam for dot-antidominant integral lam, built as the Casimir block
    component of M(-1) tensor the finite simple of highest weight
    -lam-1."""
    rs = from_label("A1")
    if not lam.is_integral() or not is_dot_antidominant(rs, lam):
        raise ValueError(f"big_projective_sl2 requires a dot-antidominant integral weight, got {lam}")
    lam_int = int(lam.coords[0])
    if lam_int == -1:
        return verma(rs, lam, depth)
    d = -lam_int - 1
    m_minus1 = verma(rs, Weight((-1,)), depth + 2 * d + 2)
    fin = simple_sl2_finite(d)
    t = tensor(m_minus1, fin)
    from .enveloping import casimir_sl2, central_char_sl2
    omega = casimir_sl2()
    chi = central_char_sl2(lam)
    top = Weight((-lam_int - 2,))
    keep = {}
    for k in range(depth + 1):
        mu = Weight((top.coords[0] - 2 * k,))
        if mu not in t.spaces:
            continue
        mat = t.apply_pbw(omega, mu)
        if mat is None:
            continue
        dim = t.dim(mu)
        shifted = linalg.sub(mat, linalg.scale(linalg.identity(dim), chi))
        power = shifted
        for _ in range(dim):
            power = linalg.matmul(power, shifted)
        ker = linalg.nullspace(power, dim)
        if ker:
            keep[mu] = linalg.row_space_basis(ker)
    sub = sub_module(t, keep)
    sub.base_weights = (top,)
    sub.depth = depth
    sub.tag = f"P({lam_int})"
    return sub


def loewy_series_sl2(v: WeightModule, lam: Weight, depth_margin=2):
    """Socle and radical layer multisets for a module in the rank-one
    block of lam; raises if the two disagree in length."""
    rs = from_label("A1")
    simples = sl2_block_simples(lam, v.depth + 4)

    def box_filter(mu):
        return v.in_box(mu, depth_margin)

    rad = radical_series(v, simples, box_filter=box_filter)
    soc = socle_series(v, simples, box_filter=box_filter)
    if len(rad) != len(soc):
        raise ValueError("socle and radical series lengths disagree: increase depth")
    return {"radical_top_down": rad, "socle_bottom_up": soc,
            "loewy_length": len(rad),
            "rigid": rad == list(reversed(soc))}
