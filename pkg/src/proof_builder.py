"""
Constructor incremental de pruebas R(quad)/R(lin) y capa de macros.

Cada macro emite solo reglas primitivas (input, axiomas, res, weaken, simp);
los resultados se comprueban contra la forma esperada para detectar a tiempo
colisiones de ecuaciones dentro de una disyunción.
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.exceptions import PreconditionError, ProofCheckError
from src.proofsys import (
    QUAD,
    Disjunction,
    Equation,
    Justification,
    LinCombination,
    Proof,
    ProofLine,
    bool_axiom,
    canonicalize,
    check_proof,
    prod_axiom_a,
    prod_axiom_b,
    prod_axiom_c,
    resolve,
    simplify,
    weaken,
)

ZERO = Equation((), 0)


@dataclass(frozen=True)
class ProductHandle:
    """
    A product p = v·w with its defining lines.

    Attributes:
        v, w: factor variables
        prod: linear form of the product (monomial or extension variable)
        sum_id: line (v + w − p ∈ {0,1})
        v_id: line (v − p ∈ {0,1})
        w_id: line (w − p ∈ {0,1})
        bool_id: line (p ∈ {0,1})
    """
    v: int
    w: int
    prod: LinCombination
    sum_id: int
    v_id: int
    w_id: int
    bool_id: int

    def flipped(self) -> "ProductHandle":
        return ProductHandle(self.w, self.v, self.prod, self.sum_id, self.w_id, self.v_id, self.bool_id)


class ProofBuilder:  # pylint: disable=too-many-public-methods
    """Append-only proof under construction over a fixed input list."""

    def __init__(self, inputs: Sequence[Disjunction], var_count: int, flavor: str = QUAD):
        self.inputs = list(inputs)
        self.var_count = var_count
        self.flavor = flavor
        self.lines: List[ProofLine] = []
        self.phases: Dict[str, int] = {}
        self._cache: Dict[Tuple, int] = {}
        self._phase: Optional[str] = None
        self.logger = logging.getLogger(self.__class__.__name__)

    def __len__(self) -> int:
        return len(self.lines)

    def disj(self, lid: int) -> Disjunction:
        return self.lines[lid - 1].disj

    def _append(self, disj: Disjunction, just: Justification) -> int:
        lid = len(self.lines) + 1
        self.lines.append(ProofLine(lid, disj, just))
        if self._phase is not None:
            self.phases[self._phase] = self.phases.get(self._phase, 0) + disj.size()
        return lid

    @contextmanager
    def phase(self, name: str):
        """Attribute the size of every line emitted inside the block to `name`."""
        previous, self._phase = self._phase, name
        try:
            yield
        finally:
            self._phase = previous

    def _cached(self, key: Tuple, make) -> int:
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    # ---- primitive rules ----

    def input(self, k: int) -> int:
        if not 1 <= k <= len(self.inputs):
            raise PreconditionError(f"input {k} outside 1..{len(self.inputs)}")
        return self._cached(("input", k), lambda: self._append(
            Disjunction.of(canonicalize(e) for e in self.inputs[k - 1]), Justification("input", (k,))))

    def bool(self, v: int) -> int:
        return self._cached(("bool", v), lambda: self._append(bool_axiom(v), Justification("bool", (v,))))

    def prod_a(self, i: int, j: int) -> int:
        return self._cached(("proda", i, j), lambda: self._append(prod_axiom_a(i, j), Justification("proda", (i, j))))

    def prod_b(self, i: int, j: int) -> int:
        return self._cached(("prodb", i, j), lambda: self._append(prod_axiom_b(i, j), Justification("prodb", (i, j))))

    def prod_c(self, i: int, j: int) -> int:
        return self._cached(("prodc", i, j), lambda: self._append(prod_axiom_c(i, j), Justification("prodc", (i, j))))

    def resolve(self, id1: int, eq1: Equation, id2: int, eq2: Equation) -> int:
        d1, d2 = self.disj(id1), self.disj(id2)
        pos1, pos2 = d1.index(eq1), d2.index(eq2)
        return self._append(resolve(d1, pos1, d2, pos2), Justification("res", (id1, pos1, id2, pos2)))

    def weaken(self, lid: int, eq: Equation) -> int:
        eq = canonicalize(eq)
        if eq in self.disj(lid):
            return lid
        return self._append(weaken(self.disj(lid), eq), Justification("weaken", (lid,), eq))

    def weaken_to(self, lid: int, target: Iterable[Equation]) -> int:
        for eq in target:
            lid = self.weaken(lid, eq)
        return lid

    def simp(self, lid: int, eq: Optional[Equation] = None) -> int:
        """Drop one 0 = k disjunct (the given one, or every one present)."""
        targets = [eq] if eq is not None else [e for e in self.disj(lid) if e.is_contradiction()]
        for target in targets:
            pos = self.disj(lid).index(target)
            lid = self._append(simplify(self.disj(lid), pos), Justification("simp", (lid, pos)))
        return lid

    # ---- bookkeeping ----

    def _expect(self, lid: int, expected: Disjunction, what: str) -> int:
        if self.disj(lid) != expected:
            raise ProofCheckError(f"{what} produced {self.disj(lid)}, expected {expected}", lid)
        return lid

    @staticmethod
    def part(disj: Disjunction, form: LinCombination) -> List[Equation]:
        terms = form.terms()
        return [e for e in disj if e.terms == terms]

    @staticmethod
    def values(disj: Disjunction, form: LinCombination) -> List[int]:
        return disj.part(form)

    def rest(self, lid: int, form: LinCombination) -> List[Equation]:
        terms = form.terms()
        return [e for e in self.disj(lid) if e.terms != terms]

    def to_proof(self, comments: Sequence[str] = ()) -> Proof:
        return Proof(self.flavor, self.var_count, tuple(self.lines), tuple(comments))

    def verify(self, workers: int = 1) -> None:
        """Run the checker over everything emitted so far."""
        verdict = check_proof(self.to_proof(), self.inputs, workers)
        if not verdict.valid:
            raise ProofCheckError(str(verdict), verdict.failed_id)

    # ========================================
    # MACROS
    # ========================================

    def negate_at(self, lid: int, eq: Equation) -> int:
        """A ∨ (L = a)  ⟶  A ∨ (−L = −a), two resolutions."""
        if eq.negated() == eq:
            return lid
        zero = self.resolve(lid, eq, lid, eq)
        out = self.resolve(zero, ZERO, lid, eq)
        rest = [e for e in self.disj(lid) if e != eq]
        return self._expect(out, Disjunction.of(rest + [eq.negated()]), "negate")

    def negate_range(self, lid: int, form: LinCombination) -> int:
        """A ∨ (L ∈ S)  ⟶  A ∨ (−L ∈ −S)."""
        for eq in self.part(self.disj(lid), form):
            lid = self.negate_at(lid, eq)
        return lid

    def combine(self, id1: int, eq1: Equation, id2: int, eq2: Equation, coef: int) -> Tuple[int, Equation]:
        """
        (A ∨ e1), (B ∨ e2)  ⟶  A ∨ B ∨ (e1 + coef·e2).

        Returns:
            (line id, the new equation)
        """
        if coef == 0:
            raise PreconditionError("combine with coefficient 0")
        rest = [e for e in self.disj(id1) if e != eq1] + [e for e in self.disj(id2) if e != eq2]
        if coef > 0:
            other, step = self.negate_at(id2, eq2), eq2.negated()
        else:
            other, step = id2, eq2
        cur, cur_eq = id1, eq1
        for _ in range(abs(coef)):
            cur = self.resolve(cur, cur_eq, other, step)
            cur_eq = cur_eq - step
        return self._expect(cur, Disjunction.of(rest + [cur_eq]), "combine"), cur_eq

    def add(self, id1: int, eq1: Equation, id2: int, eq2: Equation) -> Tuple[int, Equation]:
        return self.combine(id1, eq1, id2, eq2, 1)

    def combine_part(self, lid: int, form: LinCombination, id2: int, eq2: Equation, coef: int) -> int:
        """Add coef·e2 to every equation on `form`: L ∈ S becomes L + coef·L2 ∈ S + coef·a2."""
        for eq in self.part(self.disj(lid), form):
            lid, _ = self.combine(lid, eq, id2, eq2, coef)
        return lid

    def scale_at(self, lid: int, eq: Equation, coef: int) -> Tuple[int, Equation]:
        """A ∨ (L = a)  ⟶  A ∨ (coef·L = coef·a)."""
        if coef == 0:
            raise PreconditionError("scaling by 0")
        if coef < 0:
            lid, eq, coef = self.negate_at(lid, eq), eq.negated(), -coef
        if coef == 1:
            return lid, eq
        neg = self.negate_at(lid, eq)
        cur, cur_eq = lid, eq
        for _ in range(coef - 1):
            cur = self.resolve(cur, cur_eq, neg, eq.negated())
            cur_eq = cur_eq + eq
        return cur, cur_eq

    def scale_range(self, lid: int, form: LinCombination, coef: int) -> int:
        """A ∨ (L ∈ S)  ⟶  A ∨ (coef·L ∈ coef·S)."""
        for eq in self.part(self.disj(lid), form):
            lid, _ = self.scale_at(lid, eq, coef)
        return lid

    def sum_ranges(self, id1: int, form1: LinCombination, id2: int, form2: LinCombination) -> int:
        """
        A ∨ (L1 ∈ S1), B ∨ (L2 ∈ S2)  ⟶  A ∨ B ∨ (L1 + L2 ∈ S1 + S2).

        Costs |S1|·|S2| resolutions plus the negation of the second range.
        """
        eqs1 = self.part(self.disj(id1), form1)
        eqs2 = self.part(self.disj(id2), form2)
        if not eqs1 or not eqs2:
            raise PreconditionError("sum of ranges needs a nonempty part on each side")
        total = form1 + form2
        expected = Disjunction.of(self.rest(id1, form1) + self.rest(id2, form2) + [
            total.eq(a + b) for a in self.values(self.disj(id1), form1)
            for b in self.values(self.disj(id2), form2)])
        neg = self.negate_range(id2, form2)
        negated = [e.negated() for e in eqs2]
        cur = id1
        for eq1 in eqs1:
            x = neg
            for eq2 in negated:
                x = self.resolve(cur, eq1, x, eq2)
            cur = x
        return self._expect(cur, expected, "sum")

    def sum_chain(self, items: Sequence[Tuple[int, LinCombination]]) -> Tuple[int, LinCombination]:
        """Fold sum_ranges over a list of (line, form) pairs."""
        if not items:
            raise PreconditionError("empty sum")
        lid, form = items[0]
        for other, other_form in items[1:]:
            lid = self.sum_ranges(lid, form, other, other_form)
            form = form + other_form
        return lid, form

    def restrict(self, id1: int, id2: int, form: LinCombination) -> int:
        """G1 ∨ (L ∈ S1), G2 ∨ (L ∈ S2)  ⟶  G1 ∨ G2 ∨ (L ∈ S1 ∩ S2)."""
        s1 = self.values(self.disj(id1), form)
        s2 = self.values(self.disj(id2), form)
        keep = [v for v in s1 if v in set(s2)]
        expected = Disjunction.of(self.rest(id1, form) + self.rest(id2, form) + [form.eq(v) for v in keep])
        if not s2:
            expected = self.disj(id2)
        cur = id1
        for a in s1:
            if a in s2:
                continue
            drop = form.eq(a)
            t = id2
            for b in s2:
                t = self.resolve(cur, drop, t, form.eq(b))
                t = self.simp(t, Equation((), a - b))
            cur = t
        if cur == id1 and s2:
            cur = self.weaken_to(cur, self.rest(id2, form))
        return self._expect(cur, expected, "restrict")

    def case_split(self, v: int, if_zero: int, if_one: int) -> int:
        """
        Merge G0 ∨ (v = 1) (derived for v = 0) and G1 ∨ (v = 0) into G0 ∨ G1.
        """
        one = LinCombination.var(v).eq(1)
        zero = LinCombination.var(v).eq(0)
        g0 = [e for e in self.disj(if_zero) if e != one]
        g1 = [e for e in self.disj(if_one) if e != zero]
        if_zero = self.weaken_to(if_zero, [e for e in g1 if e not in set(g0)])
        if_one = self.weaken_to(if_one, [e for e in g0 if e not in set(g1)])
        out = self.resolve(if_zero, one, if_one, zero)
        out = self.simp(out, Equation((), 1))
        return self._expect(out, Disjunction.of(g0 + g1), "case split")

    def fix_product(self, h: ProductHandle, bit: int) -> int:
        """
        bit 0: (w = 1) ∨ (p = 0).   bit 1: (w = 0) ∨ (p − v = 0).
        """
        return self._cached(("fix", h, bit), lambda: self._fix_product(h, bit))

    def _fix_product(self, h: ProductHandle, bit: int) -> int:
        w = LinCombination.var(h.w)
        v = LinCombination.var(h.v)
        bool_w = self.bool(h.w)
        if bit == 0:
            x = self.resolve(h.w_id, (w - h.prod).eq(0), bool_w, w.eq(0))
            y = self.resolve(x, (w - h.prod).eq(1), bool_w, w.eq(0))
            y = self.negate_range(y, -h.prod)
            out = self.restrict(y, h.bool_id, h.prod)
            return self._expect(out, Disjunction.of([w.eq(1), h.prod.eq(0)]), "fix product")
        x1 = self.resolve(h.sum_id, (v + w - h.prod).eq(0), bool_w, w.eq(1))
        x2 = self.resolve(x1, (v + w - h.prod).eq(1), bool_w, w.eq(1))
        x3 = self.restrict(x2, h.v_id, v - h.prod)
        out = self.negate_at(x3, (v - h.prod).eq(0))
        return self._expect(out, Disjunction.of([w.eq(0), (h.prod - v).eq(0)]), "fix product")

    def monomial(self, v: int, w: int) -> ProductHandle:
        """Handle for the quadratic monomial v·w from the product axioms."""
        return ProductHandle(v, w, LinCombination.prod(v, w), self.prod_a(v, w),
                             self.prod_b(v, w), self.prod_b(w, v), self.prod_c(v, w))

    def implied_zero(self, cond_id: int, cond: Equation, h: ProductHandle) -> int:
        """
        From G ∨ (w = 0) and the product w·v derive G ∨ (p = 0).
        """
        w = LinCombination.var(h.w)
        fixed = self.fix_product(h, 0)
        out = self.resolve(cond_id, cond, fixed, w.eq(1))
        return self.simp(out, Equation((), -1))
