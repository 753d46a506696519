"""
Codificación de la fórmula Υ del principio 3XOR.

Variables (1-based, en bloques fijos):
    x(ℓ, col)        tabla 3m × 2n; la fila ℓ = 3(r−1)+h+1 es el literal h del clause r
    y(s, j, r)       una tabla k × m por tupla s
    z(i)             asignación candidata
    u(r)             clause r satisfecho como 3XOR
    prodYX(s,j,r,h,col) = ⟦y(s,j,r)·x(row(r,h),col)⟧
    prodXZ(ℓ, col)      = ⟦x(ℓ,col)·z(col mod n)⟧

Las columnas col ≤ n son x_col positivos; col = i+n es ¬x_i.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import partial
from itertools import permutations, product
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from src.exceptions import BudgetExceeded, FormatError, PreconditionError
from src.proofsys import Disjunction, LinCombination, parse_disjunction

logger = logging.getLogger(__name__)

PART_A_FAMILIES = (1, 2, 3, 4, 5, 6, 7)
PART_B_FAMILIES = (1, 8, 9, 10)
PARITIES = ("odd", "even")


@dataclass(frozen=True)
class InstanceParams:
    """n variables, m clauses, t tuples of k clauses, multiplicity d."""
    n: int
    m: int
    k: int
    t: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.t < 1 or self.d < 1:
            raise PreconditionError("n, m, t, d must be >= 1")
        if self.k < 2 or self.k % 2:
            raise PreconditionError(f"k must be even and >= 2, got {self.k}")

    @property
    def q(self) -> int:
        """⌈t/d⌉: the number of unsatisfied clauses the principle forces."""
        return -(-self.t // self.d)

    def decision_space(self) -> int:
        return (2 * self.n) ** (3 * self.m) * (self.m ** self.k) ** self.t * 2 ** self.n

    def __str__(self) -> str:
        return f"n={self.n} m={self.m} k={self.k} t={self.t} d={self.d}"


def row(r: int, h: int) -> int:
    """X row holding literal h ∈ {0,1,2} of clause r."""
    return 3 * (r - 1) + h + 1


class VarLayout:
    """Index maps for every block plus the linear forms built on them."""

    def __init__(self, p: InstanceParams):
        self.p = p
        n, m, k, t = p.n, p.m, p.k, p.t
        self.width = 2 * n
        self.x_base = 0
        self.y_base = self.x_base + 3 * m * self.width
        self.z_base = self.y_base + t * k * m
        self.u_base = self.z_base + n
        self.pyx_base = self.u_base + m
        self.pxz_base = self.pyx_base + t * k * m * 3 * self.width
        self.total = self.pxz_base + 3 * m * self.width

    # ---- index maps ----

    def x(self, l: int, col: int) -> int:
        return self.x_base + (l - 1) * self.width + col

    def y(self, s: int, j: int, r: int) -> int:
        return self.y_base + ((s - 1) * self.p.k + (j - 1)) * self.p.m + r

    def z(self, i: int) -> int:
        return self.z_base + i

    def u(self, r: int) -> int:
        return self.u_base + r

    def prod_yx(self, s: int, j: int, r: int, h: int, col: int) -> int:
        p = self.p
        block = (((s - 1) * p.k + (j - 1)) * p.m + (r - 1)) * 3 + h
        return self.pyx_base + block * self.width + col

    def prod_xz(self, l: int, col: int) -> int:
        return self.pxz_base + (l - 1) * self.width + col

    def partner(self, col: int) -> int:
        """Variable index i of the z partner of a column."""
        return col if col <= self.p.n else col - self.p.n

    def describe(self, v: int) -> str:
        """Human-readable name of variable v (inverse of the maps)."""
        p, w = self.p, self.width
        if not 1 <= v <= self.total:
            raise PreconditionError(f"variable {v} outside 1..{self.total}")
        if v <= self.y_base:
            l, col = divmod(v - 1, w)
            return f"x[{l + 1},{col + 1}]"
        if v <= self.z_base:
            sj, r = divmod(v - self.y_base - 1, p.m)
            s, j = divmod(sj, p.k)
            return f"y[{s + 1}][{j + 1},{r + 1}]"
        if v <= self.u_base:
            return f"z[{v - self.z_base}]"
        if v <= self.pyx_base:
            return f"u[{v - self.u_base}]"
        if v <= self.pxz_base:
            block, col = divmod(v - self.pyx_base - 1, w)
            block, h = divmod(block, 3)
            block, r = divmod(block, p.m)
            s, j = divmod(block, p.k)
            return f"yx[{s + 1},{j + 1},{r + 1},{h},{col + 1}]"
        l, col = divmod(v - self.pxz_base - 1, w)
        return f"xz[{l + 1},{col + 1}]"

    def summary(self) -> str:
        return (f"layout x={self.x_base + 1} y={self.y_base + 1} z={self.z_base + 1} "
                f"u={self.u_base + 1} yx={self.pyx_base + 1} xz={self.pxz_base + 1} "
                f"total={self.total}")

    # ---- linear forms ----

    def q_form(self, s: int, j: int, h: int, col: int) -> LinCombination:
        """Q: 1 iff literal h of the j-th clause of tuple s sits in column col."""
        return LinCombination.total(self.prod_yx(s, j, r, h, col) for r in range(1, self.p.m + 1))

    def occurrences(self, s: int, i: int) -> LinCombination:
        """Occurrences of x_i (either sign) in tuple s."""
        return sum((self.q_form(s, j, h, col)
                    for j in range(1, self.p.k + 1) for h in range(3)
                    for col in (i, i + self.p.n)), LinCombination())

    def negatives(self, s: int, i: Optional[int] = None) -> LinCombination:
        """Negative occurrences of x_i in tuple s, or of all variables."""
        indices = range(1, self.p.n + 1) if i is None else (i,)
        return sum((self.q_form(s, j, h, ii + self.p.n)
                    for ii in indices for j in range(1, self.p.k + 1) for h in range(3)),
                   LinCombination())

    def clause_value(self, r: int) -> LinCombination:
        """U_r: number of literals of clause r true under z."""
        n = self.p.n
        out = LinCombination()
        for h in range(3):
            l = row(r, h)
            for i in range(1, n + 1):
                out = (out + LinCombination.var(self.prod_xz(l, i))
                       + LinCombination.var(self.x(l, i + n))
                       - LinCombination.var(self.prod_xz(l, i + n)))
        return out

    def slot_value(self, s: int, j: int, r: int) -> LinCombination:
        """Contribution of clause r to the truth count of the j-th clause of tuple s."""
        n = self.p.n
        out = {}
        for h in range(3):
            for i in range(1, n + 1):
                pos = self.prod_yx(s, j, r, h, i)
                neg = self.prod_yx(s, j, r, h, i + n)
                zi = self.z(i)
                out[tuple(sorted((pos, zi)))] = 1
                out[(neg,)] = 1
                out[tuple(sorted((neg, zi)))] = -1
        return LinCombination(out)

    def literal_value(self, s: int, j: int, h: int) -> LinCombination:
        """P: Σ_i Q_{i,j,h}·z_i + Σ_i Q_{i+n,j,h}·(1−z_i)."""
        n = self.p.n
        out = {}
        for r in range(1, self.p.m + 1):
            for i in range(1, n + 1):
                pos = self.prod_yx(s, j, r, h, i)
                neg = self.prod_yx(s, j, r, h, i + n)
                zi = self.z(i)
                out[tuple(sorted((pos, zi)))] = 1
                out[(neg,)] = 1
                out[tuple(sorted((neg, zi)))] = -1
        return LinCombination(out)

    def truth_count(self, s: int, j: int) -> LinCombination:
        """P_{j0s} + P_{j1s} + P_{j2s}."""
        return sum((self.literal_value(s, j, h) for h in range(3)), LinCombination())

    def row_sum(self, s: int, j: int) -> LinCombination:
        return LinCombination.total(self.y(s, j, r) for r in range(1, self.p.m + 1))

    def usage(self, r: int) -> LinCombination:
        """c_r: number of (s, j) slots holding clause r."""
        return LinCombination.total(self.y(s, j, r)
                                    for s in range(1, self.p.t + 1) for j in range(1, self.p.k + 1))


# ========================================
# INSTANCIA
# ========================================

@dataclass(frozen=True)
class TaggedAxiom:
    family: int
    part: str
    disj: Disjunction
    key: Tuple = field(default=(), compare=False)


@dataclass
class Instance:
    """Axiom list of Υ with family/part tags and a key → input index map."""
    params: InstanceParams
    layout: VarLayout
    axioms: List[TaggedAxiom]
    family6_parity: str = "odd"
    relax_family10: bool = False
    index: Dict[Tuple, int] = field(default_factory=dict, repr=False)
    comments: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.index:
            self.index = {ax.key: i for i, ax in enumerate(self.axioms, 1) if ax.key}

    @property
    def inputs(self) -> List[Disjunction]:
        return [ax.disj for ax in self.axioms]

    def input_id(self, *key) -> int:
        """1-based input index of the axiom with this key."""
        try:
            return self.index[tuple(key)]
        except KeyError as e:
            raise PreconditionError(f"no axiom with key {key}") from e

    def family_counts(self) -> Dict[int, int]:
        counts = {f: 0 for f in range(1, 11)}
        for ax in self.axioms:
            counts[ax.family] += 1
        return counts


def _product_triple(a: int, b: int, p: int) -> Tuple[Disjunction, Disjunction, Disjunction]:
    """(a + b − p), (a − p), (b − p), each in {0,1}."""
    va, vb, vp = LinCombination.var(a), LinCombination.var(b), LinCombination.var(p)
    return ((va + vb - vp).in_set((0, 1)), (va - vp).in_set((0, 1)), (vb - vp).in_set((0, 1)))


def _emit(p: InstanceParams, lay: VarLayout, family6_parity: str,  # pylint: disable=too-many-locals
          relax_family10: bool) -> Iterator[TaggedAxiom]:
    n, m, k, t, d = p.n, p.m, p.k, p.t, p.d
    clauses = range(1, m + 1)
    tuples = range(1, t + 1)
    slots = range(1, k + 1)
    cols = range(1, 2 * n + 1)

    for l in range(1, 3 * m + 1):
        yield TaggedAxiom(1, "A", LinCombination.total(lay.x(l, c) for c in cols).in_set((1,)), (1, l))
    for s in tuples:
        for j in slots:
            yield TaggedAxiom(2, "A", lay.row_sum(s, j).in_set((1,)), (2, s, j))
    for s in tuples:
        for r in clauses:
            column = LinCombination.total(lay.y(s, j, r) for j in slots)
            yield TaggedAxiom(3, "A", column.in_set((0, 1)), (3, s, r))
    for s, j, r in product(tuples, slots, clauses):
        for h in range(3):
            for c in cols:
                ax_a, ax_x, ax_y = _product_triple(lay.x(row(r, h), c), lay.y(s, j, r),
                                                   lay.prod_yx(s, j, r, h, c))
                yield TaggedAxiom(4, "A", ax_a, (4, "sum", s, j, r, h, c))
                yield TaggedAxiom(4, "A", ax_x, (4, "x", s, j, r, h, c))
                yield TaggedAxiom(4, "A", ax_y, (4, "y", s, j, r, h, c))
    for s in tuples:
        for i in range(1, n + 1):
            yield TaggedAxiom(5, "A", lay.occurrences(s, i).in_set(range(0, k + 1, 2)), (5, s, i))
    odd_values = range(1, k, 2) if family6_parity == "odd" else range(0, k + 1, 2)
    for s in tuples:
        yield TaggedAxiom(6, "A", lay.negatives(s).in_set(odd_values), (6, s))
    for r in clauses:
        yield TaggedAxiom(7, "A", lay.usage(r).in_set(range(d + 1)), (7, r))
    for l in range(1, 3 * m + 1):
        for c in cols:
            ax_a, ax_x, ax_z = _product_triple(lay.x(l, c), lay.z(lay.partner(c)), lay.prod_xz(l, c))
            yield TaggedAxiom(8, "B", ax_a, (8, "sum", l, c))
            yield TaggedAxiom(8, "B", ax_x, (8, "x", l, c))
            yield TaggedAxiom(8, "B", ax_z, (8, "z", l, c))
    for r in clauses:
        value = lay.clause_value(r)
        u_r = LinCombination.var(lay.u(r))
        yield TaggedAxiom(9, "B", value.in_set((0, 2)).union(u_r.in_set((1,))), (9, "even", r))
        yield TaggedAxiom(9, "B", value.in_set((1, 3)).union(u_r.in_set((0,))), (9, "odd", r))
    low = 0 if relax_family10 else m - p.q + 1
    total_u = LinCombination.total(lay.u(r) for r in clauses)
    yield TaggedAxiom(10, "B", total_u.in_set(range(low, m + 1)), (10,))


def encode(p: InstanceParams, family6_parity: str = "odd", relax_family10: bool = False) -> Instance:
    """
    Emit every axiom of Υ for the given parameters, in fixed family order.

    Args:
        p: instance parameters
        family6_parity: 'odd' (the principle) or 'even' (satisfiable variant)
        relax_family10: widen family 10 to Σu ∈ {0..m}

    Returns:
        Instance with tagged axioms and the key → input index map
    """
    if family6_parity not in PARITIES:
        raise PreconditionError(f"family6_parity must be one of {PARITIES}")
    layout = VarLayout(p)
    axioms = list(_emit(p, layout, family6_parity, relax_family10))
    logger.debug("Encoded %s: %d axioms over %d variables", p, len(axioms), layout.total)
    return Instance(p, layout, axioms, family6_parity, relax_family10)


def split(inst: Instance) -> Tuple[List[Disjunction], List[Disjunction]]:
    """Part A (X, Y) and part B (X, Z); family 1 goes to both."""
    a_part = [ax.disj for ax in inst.axioms if ax.family in PART_A_FAMILIES]
    b_part = [ax.disj for ax in inst.axioms if ax.family in PART_B_FAMILIES]
    return a_part, b_part


def variables_of(axioms: Sequence[Disjunction]) -> set:
    out = set()
    for d in axioms:
        out |= d.variables()
    return out


# ========================================
# ORÁCULO SEMÁNTICO
# ========================================

@dataclass(frozen=True)
class SemanticPoint:
    """One semantic decision point: a column per X row, a clause per Y row, Z bits."""
    x_cols: Tuple[int, ...]
    y_rows: Tuple[Tuple[int, ...], ...]
    z: Tuple[int, ...]


@dataclass
class OracleResult:
    sat: bool
    model: Optional[SemanticPoint] = None
    explored: int = 0

    def __str__(self) -> str:
        return "SAT" if self.sat else "UNSAT"


def full_assignment(inst: Instance, point: SemanticPoint) -> Dict[int, int]:
    """Extend a decision point to every variable, deriving products and u functionally."""
    p, lay = inst.params, inst.layout
    n = p.n
    values = {v: 0 for v in range(1, lay.total + 1)}
    for l, col in enumerate(point.x_cols, 1):
        values[lay.x(l, col)] = 1
    for s, chosen in enumerate(point.y_rows, 1):
        for j, r in enumerate(chosen, 1):
            values[lay.y(s, j, r)] = 1
    for i, bit in enumerate(point.z, 1):
        values[lay.z(i)] = int(bit)
    for r in range(1, p.m + 1):
        true_lits = 0
        for h in range(3):
            col = point.x_cols[row(r, h) - 1]
            zi = point.z[lay.partner(col) - 1]
            true_lits += zi if col <= n else 1 - zi
        values[lay.u(r)] = true_lits % 2
    for s, j, r in product(range(1, p.t + 1), range(1, p.k + 1), range(1, p.m + 1)):
        for h in range(3):
            for col in range(1, 2 * n + 1):
                values[lay.prod_yx(s, j, r, h, col)] = values[lay.y(s, j, r)] * values[lay.x(row(r, h), col)]
    for l in range(1, 3 * p.m + 1):
        for col in range(1, 2 * n + 1):
            values[lay.prod_xz(l, col)] = values[lay.x(l, col)] * values[lay.z(lay.partner(col))]
    return values


def violated_axioms(inst: Instance, values: Mapping[int, int]) -> List[int]:
    """1-based indices of the axioms the assignment falsifies."""
    return [i for i, ax in enumerate(inst.axioms, 1) if not ax.disj.evaluate(values)]


class _OracleSearch:  # pylint: disable=too-few-public-methods,too-many-instance-attributes
    """Depth-first search over X rows of the clauses used by a fixed Y and Z."""

    def __init__(self, p: InstanceParams, tuples: Sequence[Tuple[int, ...]], z: Tuple[int, ...],  # pylint: disable=too-many-arguments,too-many-positional-arguments
                 neg_values: set, max_unsat: Optional[int],
                 accept: Callable[[Dict[int, int]], bool]):
        self.p = p
        self.tuples = tuples
        self.z = z
        self.neg_values = neg_values
        self.neg_cap = max(neg_values)
        self.max_unsat = max_unsat
        self.accept = accept
        self.used = sorted({r for tup in tuples for r in tup})
        self.members = {r: [s for s, tup in enumerate(tuples) if r in tup] for r in self.used}
        self.occ = [[0] * (p.n + 1) for _ in tuples]
        self.neg = [0] * len(tuples)
        self.cols: Dict[int, int] = {}
        self.explored = 0
        self.rejected = 0

    def run(self) -> Optional[Dict[int, int]]:
        return self._place(0, 0, 0)

    def _place(self, slot: int, parity: int, unsat: int) -> Optional[Dict[int, int]]:
        p = self.p
        if slot == 3 * len(self.used):
            self.explored += 1
            for s in range(len(self.tuples)):
                if self.neg[s] not in self.neg_values or any(c % 2 for c in self.occ[s]):
                    return None
            # the leaf counts only if the encoded axioms hold
            if not self.accept(self.cols):
                self.rejected += 1
                return None
            return dict(self.cols)
        r = self.used[slot // 3]
        h = slot % 3
        for col in range(1, 2 * p.n + 1):
            var = col if col <= p.n else col - p.n
            negative = col > p.n
            truth = self.z[var - 1] if not negative else 1 - self.z[var - 1]
            new_unsat = unsat
            if h == 2 and (parity + truth) % 2 == 0:
                new_unsat += 1
                if self.max_unsat is not None and new_unsat > self.max_unsat:
                    continue
            members = self.members[r]
            if any(self.occ[s][var] >= p.k for s in members):
                continue
            if negative and any(self.neg[s] >= self.neg_cap for s in members):
                continue
            for s in members:
                self.occ[s][var] += 1
                self.neg[s] += negative
            self.cols[row(r, h)] = col
            found = self._place(slot + 1, 0 if h == 2 else parity + truth, new_unsat)
            for s in members:
                self.occ[s][var] -= 1
                self.neg[s] -= negative
            if found is not None:
                return found
            del self.cols[row(r, h)]
        return None


def _tuple_choices(p: InstanceParams) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """Y tables obeying families 2, 3 and 7: injective slot → clause maps per tuple."""
    single = list(permutations(range(1, p.m + 1), p.k))
    for choice in product(single, repeat=p.t):
        usage: Dict[int, int] = {}
        for tup in choice:
            for r in tup:
                usage[r] = usage.get(r, 0) + 1
        if all(c <= p.d for c in usage.values()):
            yield choice


def _free_row_columns(p: InstanceParams, z: Tuple[int, ...]) -> Tuple[int, int, int]:
    """Columns for an unused clause that make it 3XOR-satisfied under z."""
    return (1, 1, 1) if z[0] else (1, 1, p.n + 1)


def _complete_point(p: InstanceParams, cols: Mapping[int, int], tuples: Tuple[Tuple[int, ...], ...],
                    z: Tuple[int, ...]) -> SemanticPoint:
    """Fill the rows of unused clauses and pack the decision point."""
    free = _free_row_columns(p, z)
    x_cols = [cols.get(row(r, h), free[h]) for r in range(1, p.m + 1) for h in range(3)]
    return SemanticPoint(tuple(x_cols), tuples, z)


def _satisfies_axioms(inst: Instance, tuples: Tuple[Tuple[int, ...], ...], z: Tuple[int, ...],
                      cols: Mapping[int, int]) -> bool:
    values = full_assignment(inst, _complete_point(inst.params, cols, tuples, z))
    # from family 10 backwards
    return all(ax.disj.evaluate(values) for ax in reversed(inst.axioms))


def semantic_oracle(p: InstanceParams, budget: int = 10 ** 10, family6_parity: str = "odd",
                    relax_family10: bool = False, instance: Optional[Instance] = None) -> OracleResult:
    """
    Decide satisfiability of Υ over its semantic decision variables.

    Y tables are enumerated first, then Z, then the X rows of the clauses the
    tuples use (unused clauses are always completed to 3XOR-satisfied rows).
    Every complete point is extended to all variables (products and u values
    derived functionally) and accepted only if no axiom of the instance is
    violated; the slot, occurrence and family-10 checks only prune.

    Args:
        p: instance parameters
        budget: largest decision space accepted
        family6_parity, relax_family10: encoding variant, used when no instance is given
        instance: an already encoded Υ whose axiom list decides each point

    Raises:
        BudgetExceeded: decision space larger than budget
    """
    if instance is not None:
        p = instance.params
    space = p.decision_space()
    if space > budget:
        raise BudgetExceeded(f"decision space {space} exceeds budget {budget}")
    inst = instance if instance is not None else encode(p, family6_parity, relax_family10)
    neg_values = set(range(1, p.k, 2)) if inst.family6_parity == "odd" else set(range(0, p.k + 1, 2))
    max_unsat = None if inst.relax_family10 else p.q - 1
    explored = rejected = 0
    for tuples in _tuple_choices(p):
        for z in product((0, 1), repeat=p.n):
            accept = partial(_satisfies_axioms, inst, tuples, z)
            search = _OracleSearch(p, tuples, z, neg_values, max_unsat, accept)
            cols = search.run()
            explored += search.explored
            rejected += search.rejected
            if cols is None:
                continue
            model = _complete_point(p, cols, tuples, z)
            logger.debug("Oracle found a model for %s after %d leaves", p, explored)
            return OracleResult(True, model, explored)
    if rejected:
        logger.debug("Oracle: %d leaves passed the pruning but violated an axiom", rejected)
    return OracleResult(False, None, explored)


# ========================================
# ARCHIVO DE INSTANCIA
# ========================================

def write_instance(inst: Instance) -> str:
    p = inst.params
    lines = ["xor3 1"] + [f"c {c}" for c in inst.comments] + [
        f"params {p.n} {p.m} {p.k} {p.t} {p.d}",
        f"variant family6={inst.family6_parity} family10={'relaxed' if inst.relax_family10 else 'strict'}",
        inst.layout.summary(),
    ]
    lines.extend(f"axiom {ax.family} {ax.part} {ax.disj}" for ax in inst.axioms)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    """
    Parse an instance file; the axiom list must match the one its params encode.

    Raises:
        FormatError: bad header, params, layout or axiom lines
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != "xor3 1":
        raise FormatError("missing 'xor3 1' header", 1)
    comments = []
    while len(lines) > 1 and lines[1].startswith("c "):
        comments.append(lines.pop(1)[2:])
    offset = len(comments)
    if len(lines) < 4:
        raise FormatError("truncated instance header")
    head = lines[1].split()
    if len(head) != 6 or head[0] != "params":
        raise FormatError("expected 'params n m k t d'", 2 + offset)
    try:
        params = InstanceParams(*(int(v) for v in head[1:]))
    except (ValueError, PreconditionError) as e:
        raise FormatError(f"bad params: {e}", 2 + offset) from e
    variant = dict(tok.split("=", 1) for tok in lines[2].split()[1:] if "=" in tok)
    if not lines[2].startswith("variant") or variant.get("family6") not in PARITIES:
        raise FormatError("bad variant line", 3 + offset)
    expected = encode(params, variant["family6"], variant.get("family10") == "relaxed")
    if lines[3].strip() != expected.layout.summary():
        raise FormatError("layout line does not match params", 4 + offset)

    axioms = []
    for line_no, raw in enumerate(lines[4:], 5 + offset):
        if not raw.strip():
            continue
        parts = raw.split(" ", 3)
        if len(parts) != 4 or parts[0] != "axiom" or parts[2] not in ("A", "B"):
            raise FormatError("expected 'axiom <family> <A|B> <disjunction>'", line_no)
        try:
            family = int(parts[1])
        except ValueError as e:
            raise FormatError(f"bad family {parts[1]!r}", line_no) from e
        axioms.append((line_no, family, parts[2], parse_disjunction(parts[3], line_no)))

    if len(axioms) != len(expected.axioms):
        raise FormatError(f"expected {len(expected.axioms)} axioms, found {len(axioms)}")
    for (line_no, family, part, disj), ref in zip(axioms, expected.axioms):
        if (family, part, disj) != (ref.family, ref.part, ref.disj):
            raise FormatError("axiom differs from the encoding of the params", line_no)
    expected.comments = tuple(comments)
    return expected
