"""
Traducción R(quad) → R(lin): cada monomio cuadrático usado recibe una
variable nueva y tres axiomas lineales que la fuerzan a valer el producto.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from src.exceptions import FormatError, PreconditionError
from src.proofsys import (
    LIN,
    QUAD,
    QUAD_ONLY,
    Disjunction,
    Equation,
    Justification,
    LinCombination,
    Monomial,
    Proof,
    ProofLine,
)

logger = logging.getLogger(__name__)

# Offsets of the three definition axioms of a named monomial
SUM_AXIOM, LEFT_AXIOM, RIGHT_AXIOM = 0, 1, 2


@dataclass
class LinearizationMap:
    """
    Bijection between the quadratic monomials in use and fresh variables.

    Attributes:
        base: variable count of the original universe
        names: monomial (i, j) → fresh variable, numbered base+1.. in sorted order
        axiom_offset: number of original axioms; the definition axioms follow them
    """
    base: int
    names: Dict[Monomial, int] = field(default_factory=dict)
    axiom_offset: int = 0
    comments: Tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def build(cls, monomials: Iterable[Monomial], base: int, axiom_offset: int = 0) -> "LinearizationMap":
        ordered = sorted(set(monomials))
        return cls(base, {mono: base + k for k, mono in enumerate(ordered, 1)}, axiom_offset)

    @property
    def var_count(self) -> int:
        return self.base + len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def name(self, mono: Monomial) -> int:
        try:
            return self.names[mono]
        except KeyError as e:
            raise PreconditionError(f"monomial x{mono[0]}*x{mono[1]} has no linear name") from e

    def equation(self, eq: Equation) -> Equation:
        terms = [((self.name(m),) if len(m) == 2 else m, c) for m, c in eq.terms]
        return Equation.of(LinCombination(terms), eq.rhs)

    def disjunction(self, d: Disjunction) -> Disjunction:
        return Disjunction.of(self.equation(e) for e in d)

    def definitions(self) -> List[Disjunction]:
        """For each name p of x_i·x_j: x_i + x_j − p, x_i − p, x_j − p, each in {0,1}."""
        out = []
        for (i, j), p in self.names.items():
            xi, xj, pv = LinCombination.var(i), LinCombination.var(j), LinCombination.var(p)
            out.append((xi + xj - pv).in_set((0, 1)))
            out.append((xi - pv).in_set((0, 1)))
            out.append((xj - pv).in_set((0, 1)))
        return out

    def definition_input(self, mono: Monomial, which: int) -> int:
        """1-based input index of one definition axiom of a monomial."""
        position = list(self.names).index(mono)
        return self.axiom_offset + 3 * position + which + 1

    def extend(self, values: Mapping[int, int]) -> Dict[int, int]:
        """Assignment over the original variables extended with every product."""
        out = dict(values)
        for (i, j), p in self.names.items():
            out[p] = values[i] * values[j]
        return out


def _monomials_of(disjunctions: Iterable[Disjunction]) -> set:
    return {m for d in disjunctions for e in d for m, _ in e.terms if len(m) == 2}


def proof_monomials(proof: Proof) -> set:
    """Quadratic monomials written in a proof or introduced by its axioms."""
    found = _monomials_of(line.disj for line in proof.lines)
    for line in proof.lines:
        just = line.just
        if just.rule in QUAD_ONLY:
            found.add(tuple(sorted(just.args)))
        if just.eq is not None:
            found |= {m for m, _ in just.eq.terms if len(m) == 2}
    return found


def linearize_instance(axioms: Sequence[Disjunction], proof: Proof) -> Tuple[List[Disjunction], LinearizationMap]:
    """
    Name every quadratic monomial of the axioms and the proof.

    Args:
        axioms: quad inputs of the proof
        proof: R(quad) proof over those inputs

    Returns:
        (original axioms substituted + the definition axioms, the map)

    Raises:
        PreconditionError: proof is not R(quad)
    """
    if proof.flavor != QUAD:
        raise PreconditionError("linearization needs an R(quad) proof")
    monomials = _monomials_of(axioms) | proof_monomials(proof)
    lmap = LinearizationMap.build(monomials, proof.var_count, len(axioms))
    lin_axioms = [lmap.disjunction(d) for d in axioms] + lmap.definitions()
    logger.info("Named %d monomials after variable %d", len(lmap), lmap.base)
    return lin_axioms, lmap


def _axiom_line(lmap: LinearizationMap, line: ProofLine) -> Justification:
    rule, args = line.just.rule, line.just.args
    mono = tuple(sorted(args))
    if rule == "proda":
        return Justification("input", (lmap.definition_input(mono, SUM_AXIOM),))
    if rule == "prodb":
        # prodb i j reads x_i − x_ix_j, so the role order picks the axiom
        which = LEFT_AXIOM if args[0] == mono[0] else RIGHT_AXIOM
        return Justification("input", (lmap.definition_input(mono, which),))
    return Justification("bool", (lmap.name(mono),))


def _position(source: Disjunction, pos: int, target: Disjunction, lmap: LinearizationMap) -> int:
    if not 0 <= pos < len(source):
        raise PreconditionError(f"position {pos} out of range")
    return target.index(lmap.equation(source.eqs[pos]))


def linearize_proof(proof: Proof, lmap: LinearizationMap) -> Proof:
    """
    Rewrite a quad proof line by line; ids and rule structure are kept.

    Product axioms become input lines of the definition axioms (or bool
    lines for x_i·x_j ∈ {0,1}); resolution and simplification positions are
    recomputed against the substituted premises.
    """
    if proof.flavor != QUAD:
        raise PreconditionError("linearization needs an R(quad) proof")
    by_id: Dict[int, ProofLine] = {line.id: line for line in proof.lines}
    converted: Dict[int, Disjunction] = {}
    lines = []
    for line in proof.lines:
        disj = lmap.disjunction(line.disj)
        just = line.just
        if just.rule in QUAD_ONLY:
            just = _axiom_line(lmap, line)
        elif just.rule == "res":
            id1, pos1, id2, pos2 = just.args
            just = Justification("res", (id1, _position(by_id[id1].disj, pos1, converted[id1], lmap),
                                         id2, _position(by_id[id2].disj, pos2, converted[id2], lmap)))
        elif just.rule == "simp":
            id1, pos = just.args
            just = Justification("simp", (id1, _position(by_id[id1].disj, pos, converted[id1], lmap)))
        elif just.rule == "weaken":
            just = replace(just, eq=lmap.equation(just.eq))
        converted[line.id] = disj
        lines.append(ProofLine(line.id, disj, just))
    comments = proof.comments + (f"linearized: {len(lmap)} product variables after x{lmap.base}",)
    return Proof(LIN, lmap.var_count, tuple(lines), comments)


# ========================================
# ARCHIVO PRODMAP
# ========================================

def write_prodmap(lmap: LinearizationMap) -> str:
    out = ["prodmap 1"] + [f"c {c}" for c in lmap.comments]
    out.append(f"base {lmap.base} axioms {lmap.axiom_offset}")
    out += [f"{i} {j} {p}" for (i, j), p in lmap.names.items()]
    return "\n".join(out) + "\n"


def parse_prodmap(text: str) -> LinearizationMap:
    lines = [(no, raw) for no, raw in enumerate(text.splitlines(), 1) if raw.strip()]
    if not lines or lines[0][1].strip() != "prodmap 1":
        raise FormatError("missing 'prodmap 1' header", 1)
    comments = []
    pos = 1
    while pos < len(lines) and lines[pos][1].startswith("c "):
        comments.append(lines[pos][1][2:])
        pos += 1
    head_no, head_raw = lines[pos] if pos < len(lines) else (pos + 1, "")
    head = head_raw.split()
    if len(head) != 4 or head[0] != "base" or head[2] != "axioms":
        raise FormatError("expected 'base <n> axioms <k>'", head_no)
    try:
        lmap = LinearizationMap(int(head[1]), {}, int(head[3]), tuple(comments))
    except ValueError as e:
        raise FormatError("non-integer base or axiom count", head_no) from e
    for line_no, raw in lines[pos + 1:]:
        try:
            i, j, p = (int(v) for v in raw.split())
        except ValueError as e:
            raise FormatError(f"bad prodmap entry {raw!r}", line_no) from e
        if not 1 <= i <= j:
            raise FormatError(f"monomial ({i},{j}) is not canonical", line_no)
        lmap.names[(i, j)] = p
    if list(lmap.names.values()) != list(range(lmap.base + 1, lmap.var_count + 1)):
        raise FormatError("product variables must be numbered consecutively after the base")
    return lmap
