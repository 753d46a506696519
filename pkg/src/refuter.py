"""
Generación de la refutación polinomial en R(quad) de Υ.

Estructura por tupla s:
    paso 1: ⋁_j (P_{j0s}+P_{j1s}+P_{j2s} ∈ {0,2}), refutando las k hipótesis
            "suma impar" contra la paridad total (familias 5 y 6) y
            levantando esa refutación con los disyuntos laterales
    paso 2: de lo anterior, algún clause de la tupla no se satisface como 3XOR:
            W_s = Σ_{j,r} (y − y·u) ∈ {1..km}
Cierre (conteo por clause): Σ_r (1−u_r)·c_r ≤ d(⌈t/d⌉−1) < t ≤ Σ_s W_s.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

from src.encoder import Instance, InstanceParams, VarLayout, encode, row
from src.exceptions import PreconditionError, ProofCheckError
from src.proof_builder import ProductHandle, ProofBuilder
from src.proofsys import Disjunction, Equation, LinCombination, Proof, ProofLine, monomial

logger = logging.getLogger(__name__)


class DerivedSums:
    """Linear forms Q, P, T, S and U over a layout."""

    def __init__(self, layout: VarLayout):
        self.lay = layout
        self.n = layout.p.n

    def q(self, s: int, i: int, j: int, h: int) -> LinCombination:
        """Q^{(s)}_{ijh}, i ∈ [2n]."""
        return self.lay.q_form(s, j, h, i)

    def p(self, s: int, j: int, h: int) -> LinCombination:
        return self.lay.literal_value(s, j, h)

    def truth_count(self, s: int, j: int) -> LinCombination:
        return self.lay.truth_count(s, j)

    def t(self, s: int, i: int) -> LinCombination:
        """T_i = Σ_{j,h} Q_{ijh}, i ∈ [2n]."""
        k = self.lay.p.k
        return sum((self.q(s, i, j, h) for j in range(1, k + 1) for h in range(3)), LinCombination())

    def s(self, s: int, i: int) -> LinCombination:
        """S_i = Σ_{j,h} Q_{ijh}·z_i + Q_{(i+n)jh}·(1 − z_i), i ∈ [n]."""
        return self.parity_gap(s, i) + self.t(s, i + self.n)

    def parity_gap(self, s: int, i: int) -> LinCombination:
        """S_i − T_{i+n}: Σ p·z_i − Σ q·z_i over the positive/negative products."""
        lay, k, m = self.lay, self.lay.p.k, self.lay.p.m
        zi = lay.z(i)
        out = {}
        for j in range(1, k + 1):
            for h in range(3):
                for r in range(1, m + 1):
                    out[monomial(lay.prod_yx(s, j, r, h, i), zi)] = 1
                    out[monomial(lay.prod_yx(s, j, r, h, i + self.n), zi)] = -1
        return LinCombination(out)

    def u(self, r: int) -> LinCombination:
        return self.lay.clause_value(r)

    def slot(self, s: int, j: int, r: int) -> LinCombination:
        return self.lay.slot_value(s, j, r)

    def unsatisfied_slots(self, s: int, j: int) -> LinCombination:
        """Σ_r y_{jr}·(1 − u_r)."""
        lay = self.lay
        out = LinCombination()
        for r in range(1, lay.p.m + 1):
            y = lay.y(s, j, r)
            out = out + LinCombination.var(y) - LinCombination.prod(y, lay.u(r))
        return out


@dataclass
class ProofFragment:
    """Lines appended to a host proof plus the ids of its conclusions."""
    lines: Tuple[ProofLine, ...]
    exports: Dict[str, int] = field(default_factory=dict)

    def size(self) -> int:
        return sum(line.disj.size() for line in self.lines)


def fragment(b: ProofBuilder, start: int, **exports: int) -> ProofFragment:
    """Lines emitted since `start` (a line count) as a fragment."""
    return ProofFragment(tuple(b.lines[start:]), dict(exports))


def accumulate(b: ProofBuilder, items: Sequence[Tuple[int, Equation, int]]) -> Tuple[int, Equation]:
    """Σ coef·eq over lines sharing the same side disjuncts."""
    if not items:
        raise PreconditionError("nothing to accumulate")
    lid, eq, coef = items[0]
    if coef != 1:
        lid, eq = b.scale_at(lid, eq, coef)
    for other, other_eq, other_coef in items[1:]:
        lid, eq = b.combine(lid, eq, other, other_eq, other_coef)
    return lid, eq


# ========================================
# MACROS CON NOMBRE
# ========================================

def macro_negate(b: ProofBuilder, lid: int, eq: Equation) -> ProofFragment:
    start = len(b)
    return fragment(b, start, out=b.negate_at(lid, eq))


def macro_add(b: ProofBuilder, id1: int, eq1: Equation, id2: int, eq2: Equation) -> ProofFragment:
    start = len(b)
    return fragment(b, start, out=b.add(id1, eq1, id2, eq2)[0])


def macro_scale(b: ProofBuilder, lid: int, eq: Equation, coef: int) -> ProofFragment:
    start = len(b)
    return fragment(b, start, out=b.scale_at(lid, eq, coef)[0])


def macro_case_bool(b: ProofBuilder, v: int, if_zero: int, if_one: int) -> ProofFragment:
    """Discharge a split on v: if_zero holds G0 ∨ (v = 1), if_one holds G1 ∨ (v = 0)."""
    start = len(b)
    return fragment(b, start, out=b.case_split(v, if_zero, if_one))


def macro_fix_product(b: ProofBuilder, handle: ProductHandle, bit: int) -> ProofFragment:
    start = len(b)
    return fragment(b, start, out=b.fix_product(handle, bit))


def lift_refutation(host: ProofBuilder, ref: Proof, lifted: Mapping[int, int],  # pylint: disable=too-many-locals
                    side: Disjunction, plain: Optional[Mapping[int, int]] = None) -> int:
    """
    Re-emit a refutation of A_1..A_l with every dependent line OR-ed with `side`.

    Args:
        host: builder receiving the lines
        ref: refutation whose inputs are A_1..A_l plus optional plain premises
        lifted: input index of A_i → host line holding A_i ∨ B_i
        side: B = B_1 ∨ … ∨ B_l
        plain: input index → host line holding that premise verbatim

    Returns:
        host id of the line `side`
    """
    if not ref.is_refutation_shaped():
        raise PreconditionError("lift needs a refutation")
    plain = plain or {}
    mapped: Dict[int, Tuple[int, bool]] = {}
    for line in ref.lines:
        just = line.just
        tainted = False
        if just.rule == "input":
            k = just.args[0]
            if k in plain:
                hid = plain[k]
            elif k in lifted:
                hid = host.weaken_to(lifted[k], [e for e in line.disj.union(side) if e not in host.disj(lifted[k])])
                tainted = True
            else:
                raise PreconditionError(f"input {k} of the refutation has no host line")
        elif just.rule == "bool":
            hid = host.bool(*just.args)
        elif just.rule in ("proda", "prodb", "prodc"):
            hid = getattr(host, f"prod_{just.rule[-1]}")(*just.args)
        elif just.rule == "res":
            id1, pos1, id2, pos2 = just.args
            (h1, t1), (h2, t2) = mapped[id1], mapped[id2]
            eq1 = ref.lines[id1 - 1].disj.eqs[pos1]
            eq2 = ref.lines[id2 - 1].disj.eqs[pos2]
            tainted = t1 or t2
            if tainted and (eq1 in side or eq2 in side):
                raise ProofCheckError("resolved equation collides with the side disjunction", line.id)
            hid = host.resolve(h1, eq1, h2, eq2)
        elif just.rule == "weaken":
            h1, tainted = mapped[just.args[0]]
            hid = host.weaken(h1, just.eq)
        else:
            h1, tainted = mapped[just.args[0]]
            hid = host.simp(h1, ref.lines[just.args[0] - 1].disj.eqs[just.args[1]])
        expected = line.disj.union(side) if tainted else line.disj
        if host.disj(hid) != expected:
            raise ProofCheckError(f"lifted line {line.id} differs from its expected form", hid)
        mapped[line.id] = (hid, tainted)
    return mapped[ref.lines[-1].id][0]


def _times_value(b: ProofBuilder, xi: int, y_id: int, y_form: LinCombination, a: int) -> Tuple[int, Equation]:
    """(L ∈ S∖{a}) ∨ (x_i·L − a·x_i = 0), by cases on x_i."""
    xv = LinCombination.var(xi)
    others = [y_form.eq(v) for v in b.values(b.disj(y_id), y_form) if v != a]
    terms = y_form.terms()

    zero_items = [(b.fix_product(b.monomial(yk, xi), 0), LinCombination.prod(xi, yk).eq(0), ck)
                  for (yk,), ck in terms]
    z0, e0 = accumulate(b, zero_items)
    if a:
        z0, e0 = b.combine(z0, e0, b.bool(xi), xv.eq(0), -a)
    z0 = b.weaken_to(z0, others)

    one_items = [(b.fix_product(b.monomial(yk, xi), 1),
                  (LinCombination.prod(xi, yk) - LinCombination.var(yk)).eq(0), ck)
                 for (yk,), ck in terms]
    o1, e1 = accumulate(b, one_items)
    o1, e1 = b.combine(o1, e1, y_id, y_form.eq(a), 1)
    if a:
        o1, e1 = b.combine(o1, e1, b.bool(xi), xv.eq(1), -a)
    return b.case_split(xi, z0, o1), e1


def product_of_sums(b: ProofBuilder, x_id: int, x_form: LinCombination,  # pylint: disable=too-many-locals
                    y_id: int, y_form: LinCombination,
                    gamma: int = 1, alpha: int = 0, beta: int = 0) -> Tuple[int, LinCombination]:
    """
    From (X ∈ S_X) and (L ∈ S_Y) derive Φ = γ·X·L + α·L + β·X ∈ {(γa+β)x + αa}.

    X = Σ b_i x_i over Boolean variables and L are linear forms on disjoint
    variables. With the defaults this is (X·L ∈ {a·x}).

    Returns:
        (line id, Φ)
    """
    if b.rest(x_id, x_form) or b.rest(y_id, y_form):
        raise PreconditionError("product of sums needs pure range lines")
    if x_form.degree != 1 or y_form.degree != 1 or x_form.variables() & y_form.variables():
        raise PreconditionError("product of sums needs linear forms over disjoint variables")
    product_form = LinCombination(
        (monomial(xi, yk), bi * ck) for (xi,), bi in x_form.terms() for (yk,), ck in y_form.terms())
    phi = product_form * gamma + y_form * alpha + x_form * beta
    s_y = b.values(b.disj(y_id), y_form)

    branches = []
    for a in s_y:
        items = []
        for (xi,), bi in x_form.terms():
            lid, eq = _times_value(b, xi, y_id, y_form, a)
            items.append((lid, eq, bi))
        fa, eq = accumulate(b, items)
        if gamma != 1:
            fa, eq = b.scale_at(fa, eq, gamma)
        if alpha:
            fa, eq = b.combine(fa, eq, y_id, y_form.eq(a), alpha)
        c = gamma * a + beta
        if c:
            scaled = b.scale_range(x_id, x_form, c)
            fa = b.sum_ranges(fa, LinCombination(eq.terms), scaled, x_form * c)
        branches.append(fa)

    out = branches[0]
    for other in branches[1:]:
        out = b.restrict(out, other, y_form)
    if b.rest(out, phi):
        raise ProofCheckError("product of sums left stray disjuncts", out)
    return out, phi


# ========================================
# REFUTADOR
# ========================================

class Refuter:  # pylint: disable=too-many-public-methods
    """Emits the refutation of one encoded instance into a ProofBuilder."""

    def __init__(self, inst: Instance, builder: Optional[ProofBuilder] = None):
        self.inst = inst
        self.p = inst.params
        self.lay = inst.layout
        self.sums = DerivedSums(inst.layout)
        self.b = builder or ProofBuilder(inst.inputs, inst.layout.total)
        self._memo: Dict[Tuple, object] = {}
        self.logger = logging.getLogger(self.__class__.__name__)

    def _once(self, key: Tuple, make):
        if key not in self._memo:
            self._memo[key] = make()
        return self._memo[key]

    def _axiom(self, *key) -> int:
        return self.b.input(self.inst.input_id(*key))

    # ---- product handles ----

    def yx(self, s: int, j: int, r: int, h: int, col: int) -> ProductHandle:
        """⟦y·x⟧ with condition variable y."""
        lay = self.lay
        p = lay.prod_yx(s, j, r, h, col)
        return ProductHandle(lay.x(row(r, h), col), lay.y(s, j, r), LinCombination.var(p),
                             self._axiom(4, "sum", s, j, r, h, col), self._axiom(4, "x", s, j, r, h, col),
                             self._axiom(4, "y", s, j, r, h, col), self.b.bool(p))

    def xz(self, l: int, col: int) -> ProductHandle:
        """⟦x·z⟧ with condition variable z."""
        lay = self.lay
        w = lay.prod_xz(l, col)
        return ProductHandle(lay.x(l, col), lay.z(lay.partner(col)), LinCombination.var(w),
                             self._axiom(8, "sum", l, col), self._axiom(8, "x", l, col),
                             self._axiom(8, "z", l, col), self.b.bool(w))

    # ---- ranges of the counting forms ----

    def q_range(self, s: int, j: int, h: int, col: int) -> int:
        """(Q ∈ {0,1}) from Σ_r (y − p) ∈ {0..m}, the row sum and Σ_r p ≥ 0."""
        def make():
            b, lay = self.b, self.lay
            clauses = range(1, self.p.m + 1)
            gaps = [(self._axiom(4, "y", s, j, r, h, col),
                     LinCombination.var(lay.y(s, j, r)) - LinCombination.var(lay.prod_yx(s, j, r, h, col)))
                    for r in clauses]
            up, gap_form = b.sum_chain(gaps)
            up = b.negate_range(up, gap_form)
            up = b.sum_ranges(up, -gap_form, self._axiom(2, s, j), lay.row_sum(s, j))
            low, q_form = b.sum_chain([(b.bool(lay.prod_yx(s, j, r, h, col)),
                                        LinCombination.var(lay.prod_yx(s, j, r, h, col))) for r in clauses])
            return b.restrict(up, low, q_form)
        return self._once(("q", s, j, h, col), make)

    def negatives_range(self, s: int, i: int) -> int:
        """(T_{i+n} ∈ {0..3k})."""
        def make():
            items = [(self.q_range(s, j, h, i + self.p.n), self.lay.q_form(s, j, h, i + self.p.n))
                     for j in range(1, self.p.k + 1) for h in range(3)]
            return self.b.sum_chain(items)[0]
        return self._once(("t", s, i), make)

    def parity_link(self, s: int, i: int) -> Tuple[int, LinCombination]:
        """(S_i − T_{i+n} ∈ even values), by cases on z_i."""
        def make():
            b, lay, n = self.b, self.lay, self.p.n
            zi = lay.z(i)
            gap = self.sums.parity_gap(s, i)
            pairs = [(lay.prod_yx(s, j, r, h, i), lay.prod_yx(s, j, r, h, i + n))
                     for j in range(1, self.p.k + 1) for h in range(3) for r in range(1, self.p.m + 1)]

            zero_items, one_items = [], []
            for pos, neg in pairs:
                for var, sign in ((pos, 1), (neg, -1)):
                    handle = b.monomial(var, zi)
                    zero_items.append((b.fix_product(handle, 0), LinCombination.prod(var, zi).eq(0), sign))
                    one_items.append((b.fix_product(handle, 1),
                                      (LinCombination.prod(var, zi) - LinCombination.var(var)).eq(0), sign))
            br0, _ = accumulate(b, zero_items)
            br1, eq1 = accumulate(b, one_items)

            negatives = lay.negatives(s, i)
            doubled = b.scale_range(self.negatives_range(s, i), negatives, -2)
            diff = b.sum_ranges(self._axiom(5, s, i), lay.occurrences(s, i), doubled, negatives * -2)
            diff_form = lay.occurrences(s, i) - negatives * 2
            br1 = b.sum_ranges(br1, LinCombination(eq1.terms), diff, diff_form)
            br0 = b.weaken_to(br0, [gap.eq(v) for v in b.values(b.disj(diff), diff_form)])
            return b.case_split(zi, br0, br1), gap
        return self._once(("link", s, i), make)

    def odd_total(self, s: int) -> int:
        """(Σ_j P-sums ∈ odd values) from the parity links and family 6."""
        def make():
            b = self.b
            chain, form = b.sum_chain([self.parity_link(s, i) for i in range(1, self.p.n + 1)])
            return b.sum_ranges(chain, form, self._axiom(6, s), self.lay.negatives(s))
        return self._once(("odd", s), make)

    # ---- slot lemmas ----

    def slot_zero(self, s: int, j: int, r: int) -> int:
        """(y_{jr} = 1) ∨ (V_{jr} = 0)."""
        def make():
            b, lay, n = self.b, self.lay, self.p.n
            items = []
            for h in range(3):
                for i in range(1, n + 1):
                    zi = lay.z(i)
                    for col, sign in ((i, 1), (i + n, -1)):
                        handle = self.yx(s, j, r, h, col)
                        var = lay.prod_yx(s, j, r, h, col)
                        zero = b.fix_product(handle, 0)
                        mono = b.implied_zero(zero, LinCombination.var(var).eq(0), b.monomial(zi, var))
                        items.append((mono, LinCombination.prod(var, zi).eq(0), sign))
                        if sign < 0:
                            items.append((zero, LinCombination.var(var).eq(0), 1))
            return accumulate(b, items)[0]
        return self._once(("zero", s, j, r), make)

    def _product_link(self, s: int, j: int, r: int, h: int, col: int) -> Tuple[int, Equation]:
        """(y = 0) ∨ (p·z − ⟦x·z⟧ = 0): inside y = 1 both products are x·z."""
        b, lay = self.b, self.lay
        l = row(r, h)
        zi = lay.z(lay.partner(col))
        var = lay.prod_yx(s, j, r, h, col)
        p, w, x = LinCombination.var(var), LinCombination.var(lay.prod_xz(l, col)), LinCombination.var(lay.x(l, col))
        pz = LinCombination.prod(var, zi)
        mono, hxz = b.monomial(var, zi), self.xz(l, col)

        br0, _ = b.combine(b.fix_product(mono, 0), pz.eq(0), b.fix_product(hxz, 0), w.eq(0), -1)
        br1, eq = b.combine(b.fix_product(mono, 1), (pz - p).eq(0),
                            b.fix_product(self.yx(s, j, r, h, col), 1), (p - x).eq(0), 1)
        br1, eq = b.combine(br1, eq, b.fix_product(hxz, 1), (w - x).eq(0), -1)
        return b.case_split(zi, br0, br1), eq

    def slot_link(self, s: int, j: int, r: int) -> int:
        """(y_{jr} = 0) ∨ (V_{jr} − U_r = 0)."""
        def make():
            b, lay, n = self.b, self.lay, self.p.n
            items = []
            for h in range(3):
                l = row(r, h)
                for i in range(1, n + 1):
                    items.append((*self._product_link(s, j, r, h, i), 1))
                    q = LinCombination.var(lay.prod_yx(s, j, r, h, i + n))
                    x = LinCombination.var(lay.x(l, i + n))
                    items.append((b.fix_product(self.yx(s, j, r, h, i + n), 1), (q - x).eq(0), 1))
                    items.append((*self._product_link(s, j, r, h, i + n), -1))
            return accumulate(b, items)[0]
        return self._once(("link_slot", s, j, r), make)

    def clause_parity(self, r: int) -> int:
        """(U_r − u_r ∈ {0,2}) from family 9, by cases on u_r."""
        def make():
            b, lay = self.b, self.lay
            value, u = lay.clause_value(r), LinCombination.var(lay.u(r))
            bool_u = b.bool(lay.u(r))
            br0 = b.combine_part(self._axiom(9, "even", r), value, bool_u, u.eq(0), -1)
            br1 = b.combine_part(self._axiom(9, "odd", r), value, bool_u, u.eq(1), -1)
            return b.case_split(lay.u(r), br0, br1)
        return self._once(("par", r), make)

    def clause_range(self, r: int) -> int:
        """(U_r ∈ {0..3})."""
        def make():
            lay = self.lay
            u = LinCombination.var(lay.u(r))
            return self.b.sum_ranges(self.clause_parity(r), lay.clause_value(r) - u, self.b.bool(lay.u(r)), u)
        return self._once(("urange", r), make)

    def slot_ranges(self, s: int, j: int, r: int) -> Tuple[int, int]:
        """(V ∈ {0..3}) and (V − 3y ∈ {−3..0})."""
        def make():
            b, lay = self.b, self.lay
            value, y_var = self.sums.slot(s, j, r), lay.y(s, j, r)
            y = LinCombination.var(y_var)
            bool_y = b.bool(y_var)
            bound_form = value - y * 3

            zero = self.slot_zero(s, j, r)
            rng0 = b.weaken_to(zero, [value.eq(v) for v in (1, 2, 3)])
            bnd0, _ = b.combine(zero, value.eq(0), bool_y, y.eq(0), -3)
            bnd0 = b.weaken_to(bnd0, [bound_form.eq(v) for v in (-3, -2, -1)])

            rng1 = b.sum_ranges(self.slot_link(s, j, r), value - lay.clause_value(r),
                                self.clause_range(r), lay.clause_value(r))
            bnd1 = b.combine_part(rng1, value, bool_y, y.eq(1), -3)
            return b.case_split(y_var, rng0, rng1), b.case_split(y_var, bnd0, bnd1)
        return self._once(("vrange", s, j, r), make)

    def truth_range(self, s: int, j: int) -> int:
        """(P_{j0s}+P_{j1s}+P_{j2s} ∈ {0..3})."""
        def make():
            b, lay = self.b, self.lay
            ranges = [self.slot_ranges(s, j, r) for r in range(1, self.p.m + 1)]
            forms = [self.sums.slot(s, j, r) for r in range(1, self.p.m + 1)]
            y = [LinCombination.var(lay.y(s, j, r)) for r in range(1, self.p.m + 1)]
            low, total = b.sum_chain([(rng, f) for (rng, _), f in zip(ranges, forms)])
            up, up_form = b.sum_chain([(bnd, f - yv * 3) for (_, bnd), f, yv in zip(ranges, forms, y)])
            row_sum = lay.row_sum(s, j)
            tripled = b.scale_range(self._axiom(2, s, j), row_sum, 3)
            up = b.sum_ranges(up, up_form, tripled, row_sum * 3)
            return b.restrict(up, low, total)
        return self._once(("prange", s, j), make)

    # ---- steps ----

    def step1(self, s: int) -> int:
        """⋁_j (P_{j0s}+P_{j1s}+P_{j2s} ∈ {0,2})."""
        b, k = self.b, self.p.k
        with b.phase("step1"):
            odd = self.odd_total(s)
            ranges = [self.truth_range(s, j) for j in range(1, k + 1)]
            sums = [self.sums.truth_count(s, j) for j in range(1, k + 1)]
            hypotheses = [f.in_set((1, 3)) for f in sums]
            sub = ProofBuilder(hypotheses + [b.disj(odd)], self.lay.total, b.flavor)
            chain, total = sub.sum_chain([(sub.input(j + 1), sums[j]) for j in range(k)])
            sub.restrict(chain, sub.input(k + 1), total)
            side = Disjunction.of(e for f in sums for e in f.in_set((0, 2)))
            out = lift_refutation(b, sub.to_proof(), {j + 1: ranges[j] for j in range(k)}, side,
                                  plain={k + 1: odd})
        self.logger.debug("Step 1 for tuple %d ends at line %d", s, out)
        return out

    def slot_parity(self, s: int, j: int, r: int) -> int:
        """(V_{jr} − y_{jr}·u_r ∈ {0,2})."""
        b, lay = self.b, self.lay
        value = self.sums.slot(s, j, r)
        y_var, u_var = lay.y(s, j, r), lay.u(r)
        u = LinCombination.var(u_var)
        yu = LinCombination.prod(y_var, u_var)
        handle = b.monomial(u_var, y_var)

        br0, _ = b.combine(self.slot_zero(s, j, r), value.eq(0), b.fix_product(handle, 0), yu.eq(0), -1)
        br0 = b.weaken(br0, (value - yu).eq(2))
        gap = b.sum_ranges(self.slot_link(s, j, r), value - lay.clause_value(r),
                           self.clause_parity(r), lay.clause_value(r) - u)
        br1 = b.combine_part(gap, value - u, b.fix_product(handle, 1), (yu - u).eq(0), -1)
        return b.case_split(y_var, br0, br1)

    def step2(self, s: int, step1_id: int) -> Tuple[int, LinCombination]:
        """From the step 1 line derive (W_s ∈ ⊆{1..km}), W_s the unsatisfied slots of tuple s."""
        b, lay, k, m = self.b, self.lay, self.p.k, self.p.m
        with b.phase("step2"):
            line = step1_id
            counted = []
            for j in range(1, k + 1):
                parity, parity_form = b.sum_chain([(self.slot_parity(s, j, r),
                                                    self.sums.slot(s, j, r) - LinCombination.prod(lay.y(s, j, r), lay.u(r)))
                                                   for r in range(1, m + 1)])
                unsat, unsat_form = b.sum_chain([(b.prod_b(lay.y(s, j, r), lay.u(r)),
                                                  LinCombination.var(lay.y(s, j, r)) - LinCombination.prod(lay.y(s, j, r), lay.u(r)))
                                                 for r in range(1, m + 1)])
                truth = self.sums.truth_count(s, j)
                line = b.negate_range(line, truth)
                line = b.sum_ranges(line, -truth, parity, parity_form)
                line = b.sum_ranges(line, parity_form - truth, self._axiom(2, s, j), lay.row_sum(s, j))
                line = b.restrict(line, unsat, unsat_form)
                counted.append((unsat, unsat_form))

            for j, (_, form) in enumerate(counted):
                others, others_form = b.sum_chain([c for jj, c in enumerate(counted) if jj != j])
                line = b.sum_ranges(line, form, others, others_form)
            total = sum((form for _, form in counted), LinCombination())
        return line, total

    def upper_bound(self) -> Tuple[int, LinCombination]:
        """Σ_r (1 − u_r)·c_r ∈ {−dm .. d(⌈t/d⌉−1)} from families 7 and 10."""
        b, lay, p = self.b, self.lay, self.p
        with b.phase("count"):
            items = []
            for r in range(1, p.m + 1):
                u = LinCombination.var(lay.u(r))
                items.append(product_of_sums(b, b.bool(lay.u(r)), u, self._axiom(7, r), lay.usage(r),
                                             gamma=-1, alpha=1, beta=p.d))
            chain, form = b.sum_chain(items)
            total_u = LinCombination.total(lay.u(r) for r in range(1, p.m + 1))
            scaled = b.scale_range(self._axiom(10), total_u, -p.d)
            return b.sum_ranges(chain, form, scaled, total_u * -p.d), form + total_u * -p.d

    def unsatisfied_count(self) -> int:
        """Family 10 read as Σ(1 − u_r) ∈ {0..⌈t/d⌉−1}."""
        total_u = LinCombination.total(self.lay.u(r) for r in range(1, self.p.m + 1))
        return self.b.negate_range(self._axiom(10), total_u)

    def run(self) -> int:
        b = self.b
        lower = []
        for s in range(1, self.p.t + 1):
            lower.append(self.step2(s, self.step1(s)))
        with b.phase("count"):
            low, low_form = b.sum_chain(lower)
        up, up_form = self.upper_bound()
        if up_form != low_form:
            raise ProofCheckError("lower and upper counting forms differ")
        with b.phase("count"):
            final = b.restrict(low, up, low_form)
        if not b.disj(final).is_empty():
            raise ProofCheckError(f"final line is not FALSE: {b.disj(final)}", final)
        return final


@dataclass
class RefutationResult:
    params: InstanceParams
    proof: Proof
    phases: Dict[str, int]

    @property
    def size(self) -> int:
        return self.proof.size()

    @property
    def line_count(self) -> int:
        return len(self.proof.lines)


def generate_refutation(p: InstanceParams, verify: bool = True, workers: int = 1,
                        comments: Sequence[str] = ()) -> RefutationResult:
    """
    Encode p and emit its R(quad) refutation.

    Raises:
        ProofCheckError: the emitted proof fails the checker (never expected)
    """
    inst = encode(p)
    refuter = Refuter(inst)
    refuter.run()
    if verify:
        refuter.b.verify(workers)
    header = [f"refutation of xor3 params {p.n} {p.m} {p.k} {p.t} {p.d}"] + list(comments)
    proof = refuter.b.to_proof(header)
    logger.info("Refutation for %s: %d lines, size %d", p, len(proof.lines), proof.size())
    return RefutationResult(p, proof, dict(refuter.b.phases))
