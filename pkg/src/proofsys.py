"""
Sistemas de prueba R(lin) y R(quad).

Ecuaciones enteras canónicas (constantes plegadas al lado derecho, monomios
ordenados), disyunciones como conjuntos ordenados sin duplicados, las reglas
Resolución / Debilitamiento / Simplificación, los axiomas booleanos y de
producto, el verificador independiente y el formato de archivo de pruebas.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.exceptions import FormatError, PreconditionError

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Term = Tuple[Monomial, int]

LIN = "lin"
QUAD = "quad"
FLAVORS = (LIN, QUAD)
RULES = ("input", "bool", "proda", "prodb", "prodc", "res", "weaken", "simp")
QUAD_ONLY = ("proda", "prodb", "prodc")


def monomial(*variables: int) -> Monomial:
    """Canonical monomial: one variable, or a pair with the smaller id first."""
    if not 1 <= len(variables) <= 2:
        raise PreconditionError(f"monomial degree {len(variables)} not in 1..2")
    if any(v < 1 for v in variables):
        raise PreconditionError("variable ids start at 1")
    return tuple(sorted(variables))


# ========================================
# COMBINACIONES LINEALES Y ECUACIONES
# ========================================

class LinCombination:
    """
    Immutable integer combination of monomials plus a constant offset.

    The offset never reaches an Equation: `eq(rhs)` folds it into the rhs.
    """

    __slots__ = ("_terms", "const", "_hash")

    def __init__(self, terms: Union[Mapping[Monomial, int], Iterable[Term]] = (), const: int = 0):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[Monomial, int] = {}
        for mono, coef in items:
            if coef:
                acc[mono] = acc.get(mono, 0) + coef
        self._terms = {m: c for m, c in acc.items() if c}
        self.const = int(const)
        self._hash = None

    @classmethod
    def var(cls, v: int, coef: int = 1) -> "LinCombination":
        return cls({(v,): coef})

    @classmethod
    def prod(cls, v: int, w: int, coef: int = 1) -> "LinCombination":
        return cls({monomial(v, w): coef})

    @classmethod
    def total(cls, variables: Iterable[int], coef: int = 1) -> "LinCombination":
        return cls(((v,), coef) for v in variables)

    def terms(self) -> Tuple[Term, ...]:
        return tuple(sorted(self._terms.items()))

    def coefficient(self, mono: Monomial) -> int:
        return self._terms.get(mono, 0)

    def variables(self) -> set:
        return {v for mono in self._terms for v in mono}

    @property
    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms and self.const == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _combine(self, other: "LinCombination", sign: int) -> "LinCombination":
        acc = dict(self._terms)
        for mono, coef in other._terms.items():  # pylint: disable=protected-access
            acc[mono] = acc.get(mono, 0) + sign * coef
        return LinCombination(acc, self.const + sign * other.const)

    def __add__(self, other):
        if isinstance(other, int):
            return LinCombination(self._terms, self.const + other)
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return LinCombination(self._terms, self.const - other)
        return self._combine(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, k: int):
        return LinCombination({m: c * k for m, c in self._terms.items()}, self.const * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LinCombination):
            return NotImplemented
        return self._terms == other._terms and self.const == other.const  # pylint: disable=protected-access

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._terms.items()), self.const))
        return self._hash

    def eq(self, rhs: int) -> "Equation":
        return Equation.of(self, rhs)

    def in_set(self, values: Iterable[int]) -> "Disjunction":
        """Generalized equation L ∈ S expanded to its disjunction."""
        return Disjunction.of(self.eq(v) for v in values)

    def __repr__(self):
        return f"LinCombination({self.terms()}, const={self.const})"


@dataclass(frozen=True, order=True)
class Equation:
    """Canonical equation: sorted nonzero terms on the left, integer rhs."""
    terms: Tuple[Term, ...]
    rhs: int

    @classmethod
    def of(cls, lhs: LinCombination, rhs: int) -> "Equation":
        return cls(lhs.terms(), int(rhs) - lhs.const)

    @classmethod
    def build(cls, terms: Iterable[Tuple[Sequence[int], int]], rhs: int, const: int = 0) -> "Equation":
        """canonicalize: fold constants, drop zeros, order monomials."""
        lc = LinCombination(((monomial(*m), c) for m, c in terms), const)
        return cls.of(lc, rhs)

    @property
    def lhs(self) -> LinCombination:
        return LinCombination(self.terms)

    def canonical(self) -> "Equation":
        return Equation.of(LinCombination(self.terms), self.rhs)

    def negated(self) -> "Equation":
        return Equation(tuple((m, -c) for m, c in self.terms), -self.rhs)

    def scaled(self, k: int) -> "Equation":
        if k == 0:
            raise PreconditionError("scaling by 0")
        return Equation(tuple((m, c * k) for m, c in self.terms), self.rhs * k)

    def __sub__(self, other: "Equation") -> "Equation":
        acc: Dict[Monomial, int] = dict(self.terms)
        for mono, coef in other.terms:
            acc[mono] = acc.get(mono, 0) - coef
        return Equation(tuple(sorted((m, c) for m, c in acc.items() if c)), self.rhs - other.rhs)

    def __add__(self, other: "Equation") -> "Equation":
        return self - other.negated()

    @property
    def degree(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    def variables(self) -> set:
        return {v for m, _ in self.terms for v in m}

    def size(self) -> int:
        return sum(abs(c) for _, c in self.terms) + abs(self.rhs)

    def is_constant(self) -> bool:
        return not self.terms

    def is_contradiction(self) -> bool:
        """0 = k with k != 0."""
        return not self.terms and self.rhs != 0

    def value(self, assignment: Mapping[int, int]) -> int:
        total = 0
        for mono, coef in self.terms:
            prod = coef
            for v in mono:
                prod *= assignment[v]
            total += prod
        return total

    def evaluate(self, assignment: Mapping[int, int]) -> bool:
        return self.value(assignment) == self.rhs

    def __str__(self) -> str:
        return f"{format_lhs(self.terms)} = {self.rhs}"


def format_lhs(terms: Sequence[Term]) -> str:
    if not terms:
        return "0"
    return " + ".join(f"{c}*" + "*".join(f"x{v}" for v in mono) for mono, c in terms)


def canonicalize(eq: Equation) -> Equation:
    """Normal form of a raw equation (idempotent)."""
    return Equation.build(eq.terms, eq.rhs)


@dataclass(frozen=True)
class Disjunction:
    """Sorted, duplicate-free set of equations; empty means FALSE."""
    eqs: Tuple[Equation, ...] = ()

    @classmethod
    def of(cls, eqs: Iterable[Equation]) -> "Disjunction":
        return cls(tuple(sorted(set(eqs))))

    @cached_property
    def _positions(self) -> Dict[Equation, int]:
        return {e: i for i, e in enumerate(self.eqs)}

    def __len__(self) -> int:
        return len(self.eqs)

    def __iter__(self) -> Iterator[Equation]:
        return iter(self.eqs)

    def __contains__(self, eq: Equation) -> bool:
        return eq in self._positions

    def is_empty(self) -> bool:
        return not self.eqs

    def index(self, eq: Equation) -> int:
        try:
            return self._positions[eq]
        except KeyError as e:
            raise PreconditionError(f"equation {eq} not in disjunction") from e

    def without(self, pos: int) -> "Disjunction":
        if not 0 <= pos < len(self.eqs):
            raise PreconditionError(f"position {pos} out of range 0..{len(self.eqs) - 1}")
        return Disjunction(self.eqs[:pos] + self.eqs[pos + 1:])

    def union(self, *others: Union["Disjunction", Iterable[Equation]]) -> "Disjunction":
        eqs = set(self.eqs)
        for other in others:
            eqs.update(other)
        return Disjunction(tuple(sorted(eqs)))

    def part(self, form: LinCombination) -> List[int]:
        """Right-hand sides of the equations whose lhs is exactly `form`."""
        terms = form.terms()
        return sorted(e.rhs + form.const for e in self.eqs if e.terms == terms)

    def size(self) -> int:
        return sum(e.size() for e in self.eqs)

    def variables(self) -> set:
        out = set()
        for e in self.eqs:
            out |= e.variables()
        return out

    @property
    def degree(self) -> int:
        return max((e.degree for e in self.eqs), default=0)

    def evaluate(self, assignment: Mapping[int, int]) -> bool:
        return any(e.evaluate(assignment) for e in self.eqs)

    def __str__(self) -> str:
        return " | ".join(str(e) for e in self.eqs) if self.eqs else "FALSE"


def size_of(obj: Union["Proof", Disjunction, Equation]) -> int:
    """Unary size: |coefficients| + |rhs|, summed over equations and lines."""
    if isinstance(obj, Proof):
        return sum(line.disj.size() for line in obj.lines)
    return obj.size()


# ========================================
# AXIOMAS Y REGLAS
# ========================================

def bool_axiom(v: int) -> Disjunction:
    """(x_v = 0) ∨ (x_v = 1)."""
    return LinCombination.var(v).in_set((0, 1))


def prod_axiom_a(i: int, j: int) -> Disjunction:
    """x_i + x_j − x_ix_j ∈ {0,1}."""
    return (LinCombination.var(i) + LinCombination.var(j) - LinCombination.prod(i, j)).in_set((0, 1))


def prod_axiom_b(i: int, j: int) -> Disjunction:
    """x_i − x_ix_j ∈ {0,1}, i in role order."""
    return (LinCombination.var(i) - LinCombination.prod(i, j)).in_set((0, 1))


def prod_axiom_c(i: int, j: int) -> Disjunction:
    """x_ix_j ∈ {0,1}."""
    return LinCombination.prod(i, j).in_set((0, 1))


AXIOMS = {
    "proda": prod_axiom_a,
    "prodb": prod_axiom_b,
    "prodc": prod_axiom_c,
}


def resolve(d1: Disjunction, pos1: int, d2: Disjunction, pos2: int) -> Disjunction:
    """From A ∨ L1 and B ∨ L2 derive A ∨ B ∨ (L1 − L2)."""
    e1 = d1.eqs[pos1] if 0 <= pos1 < len(d1) else None
    e2 = d2.eqs[pos2] if 0 <= pos2 < len(d2) else None
    if e1 is None or e2 is None:
        raise PreconditionError("resolution position out of range")
    return d1.without(pos1).union(d2.without(pos2), (e1 - e2,))


def weaken(d: Disjunction, eq: Equation) -> Disjunction:
    return d.union((canonicalize(eq),))


def simplify(d: Disjunction, pos: int) -> Disjunction:
    if not 0 <= pos < len(d) or not d.eqs[pos].is_contradiction():
        raise PreconditionError("simplification needs a 0 = k disjunct with k != 0")
    return d.without(pos)


# ========================================
# PRUEBAS
# ========================================

@dataclass(frozen=True)
class Justification:
    """Rule name, integer arguments and the weakening equation if any."""
    rule: str
    args: Tuple[int, ...] = ()
    eq: Optional[Equation] = None

    def __str__(self) -> str:
        text = " ".join([self.rule] + [str(a) for a in self.args])
        if self.rule == "weaken":
            text += f" ; {self.eq}"
        return text

    def premises(self) -> Tuple[int, ...]:
        if self.rule == "res":
            return (self.args[0], self.args[2])
        if self.rule in ("weaken", "simp"):
            return (self.args[0],)
        return ()


@dataclass(frozen=True)
class ProofLine:
    id: int
    disj: Disjunction
    just: Justification

    def __str__(self) -> str:
        return f"{self.id} {self.just} : {self.disj}"


@dataclass(frozen=True)
class Proof:
    """A sequence of justified lines over variables 1..var_count."""
    flavor: str
    var_count: int
    lines: Tuple[ProofLine, ...] = ()
    comments: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'lines', tuple(self.lines))
        object.__setattr__(self, 'comments', tuple(self.comments))
        if self.flavor not in FLAVORS:
            raise PreconditionError(f"unknown flavor {self.flavor!r}")

    def size(self) -> int:
        return size_of(self)

    @property
    def last(self) -> Optional[ProofLine]:
        return self.lines[-1] if self.lines else None

    def is_refutation_shaped(self) -> bool:
        return bool(self.lines) and self.lines[-1].disj.is_empty()


@dataclass
class ProofVerdict:
    """Result of check_proof."""
    status: str
    failed_id: Optional[int] = None
    message: str = ""
    expected: Optional[Disjunction] = None

    @property
    def valid(self) -> bool:
        return self.status != "invalid"

    @property
    def is_refutation(self) -> bool:
        return self.status == "refutation"

    def __str__(self) -> str:
        if self.valid:
            return f"valid {self.status}"
        text = f"invalid at line {self.failed_id}: {self.message}"
        if self.expected is not None:
            text += f" (expected: {self.expected})"
        return text


class LineError(Exception):
    """Internal: one line failed; carries the expected disjunction when known."""

    def __init__(self, message: str, expected: Optional[Disjunction] = None):
        super().__init__(message)
        self.expected = expected


def _require_var(v: int, var_count: int) -> None:
    if not 1 <= v <= var_count:
        raise LineError(f"variable x{v} outside 1..{var_count}")


def expected_disjunction(proof: Proof, inputs: Sequence[Disjunction], line: ProofLine,  # pylint: disable=too-many-branches
                         by_id: Mapping[int, ProofLine]) -> Disjunction:
    """Recompute what a line must contain from its justification alone."""
    just = line.just
    args = just.args
    for ref in just.premises():
        if ref >= line.id or ref not in by_id:
            raise LineError(f"premise {ref} is not an earlier line")
    if just.rule in QUAD_ONLY and proof.flavor != QUAD:
        raise LineError(f"{just.rule} is only available in R(quad)")

    if just.rule == "input":
        if len(args) != 1 or not 1 <= args[0] <= len(inputs):
            raise LineError(f"input index outside 1..{len(inputs)}")
        return Disjunction.of(canonicalize(e) for e in inputs[args[0] - 1])
    if just.rule == "bool":
        if len(args) != 1:
            raise LineError("bool takes one variable")
        _require_var(args[0], proof.var_count)
        return bool_axiom(args[0])
    if just.rule in AXIOMS:
        if len(args) != 2:
            raise LineError(f"{just.rule} takes two variables")
        _require_var(args[0], proof.var_count)
        _require_var(args[1], proof.var_count)
        return AXIOMS[just.rule](args[0], args[1])
    if just.rule == "res":
        if len(args) != 4:
            raise LineError("res takes id1 pos1 id2 pos2")
        try:
            return resolve(by_id[args[0]].disj, args[1], by_id[args[2]].disj, args[3])
        except PreconditionError as e:
            raise LineError(str(e)) from e
    if just.rule == "weaken":
        if len(args) != 1 or just.eq is None:
            raise LineError("weaken takes id1 ; equation")
        for v in just.eq.variables():
            _require_var(v, proof.var_count)
        return weaken(by_id[args[0]].disj, just.eq)
    if just.rule == "simp":
        if len(args) != 2:
            raise LineError("simp takes id1 pos")
        try:
            return simplify(by_id[args[0]].disj, args[1])
        except PreconditionError as e:
            raise LineError(str(e)) from e
    raise LineError(f"unknown rule {just.rule!r}")


def _check_one(proof: Proof, inputs: Sequence[Disjunction], line: ProofLine,
               by_id: Mapping[int, ProofLine]) -> Optional[LineError]:
    max_degree = 1 if proof.flavor == LIN else 2
    try:
        if line.disj.degree > max_degree:
            raise LineError(f"degree {line.disj.degree} exceeds {max_degree} in R({proof.flavor})")
        for v in line.disj.variables():
            _require_var(v, proof.var_count)
        expected = expected_disjunction(proof, inputs, line, by_id)
        if expected.degree > max_degree:
            raise LineError(f"derived degree {expected.degree} exceeds {max_degree}")
        if expected != line.disj:
            raise LineError("line does not match its justification", expected)
    except LineError as e:
        return e
    return None


def check_line(proof: Proof, inputs: Sequence[Disjunction], line_id: int) -> Optional[str]:
    """None if the line checks, otherwise a message (with the expected disjunction)."""
    by_id = {line.id: line for line in proof.lines}
    if line_id not in by_id:
        return f"no line {line_id}"
    error = _check_one(proof, inputs, by_id[line_id], by_id)
    if error is None:
        return None
    return f"{error} (expected: {error.expected})" if error.expected is not None else str(error)


def check_proof(proof: Proof, inputs: Sequence[Disjunction], workers: int = 1) -> ProofVerdict:
    """
    Check every line; report the smallest failing id.

    Returns:
        'refutation' if all lines check and the last is FALSE,
        'derivation' if all lines check, otherwise 'invalid'
    """
    by_id: Dict[int, ProofLine] = {}
    previous = 0
    for line in proof.lines:
        if line.id <= previous:
            return ProofVerdict("invalid", line.id, "line ids must be strictly increasing")
        previous = line.id
        by_id[line.id] = line

    if workers > 1 and len(proof.lines) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda ln: _check_one(proof, inputs, ln, by_id), proof.lines))
    else:
        results = []
        for line in proof.lines:
            error = _check_one(proof, inputs, line, by_id)
            results.append(error)
            if error is not None:
                break

    for line, error in zip(proof.lines, results):
        if error is not None:
            logger.debug("Line %d rejected: %s", line.id, error)
            return ProofVerdict("invalid", line.id, str(error), error.expected)
    status = "refutation" if proof.is_refutation_shaped() else "derivation"
    return ProofVerdict(status)


# ========================================
# FORMATO DE ARCHIVO
# ========================================

def parse_equation(text: str, line_no: Optional[int] = None) -> Equation:
    """Parse `k*x<i> + k*x<i>*x<j> + c = rhs`; bare integers are folded."""
    lhs, sep, rhs = text.partition('=')
    if not sep or '=' in rhs:
        raise FormatError(f"equation needs exactly one '=': {text!r}", line_no)
    terms = []
    const = 0
    for token in lhs.split('+'):
        token = token.strip()
        if not token:
            raise FormatError(f"empty term in {text!r}", line_no)
        parts = token.split('*')
        try:
            if len(parts) == 1:
                const += int(parts[0])
                continue
            coef = int(parts[0])
            if len(parts) > 3 or any(not p.startswith('x') for p in parts[1:]):
                raise ValueError(token)
            variables = [int(p[1:]) for p in parts[1:]]
        except ValueError as e:
            raise FormatError(f"bad term {token!r}", line_no) from e
        if any(v < 1 for v in variables):
            raise FormatError(f"bad variable in {token!r}", line_no)
        terms.append((variables, coef))
    try:
        rhs_value = int(rhs.strip())
    except ValueError as e:
        raise FormatError(f"bad right-hand side {rhs.strip()!r}", line_no) from e
    return Equation.build(terms, rhs_value, const)


def parse_disjunction(text: str, line_no: Optional[int] = None) -> Disjunction:
    text = text.strip()
    if text == "FALSE":
        return Disjunction()
    return Disjunction.of(parse_equation(part, line_no) for part in text.split(' | '))


def format_disjunction(d: Disjunction) -> str:
    return str(d)


def _parse_line(raw: str, line_no: int) -> ProofLine:
    head, sep, body = raw.partition(' : ')
    if not sep:
        raise FormatError("missing ' : ' separator", line_no)
    weaken_eq = None
    if ' ; ' in head:
        head, _, eq_text = head.partition(' ; ')
        weaken_eq = parse_equation(eq_text, line_no)
    parts = head.split()
    if len(parts) < 2 or parts[1] not in RULES:
        raise FormatError(f"unknown rule in {head!r}", line_no)
    try:
        line_id = int(parts[0])
        args = tuple(int(a) for a in parts[2:])
    except ValueError as e:
        raise FormatError(f"non-integer argument in {head!r}", line_no) from e
    if (parts[1] == "weaken") != (weaken_eq is not None):
        raise FormatError("only weaken lines carry ' ; <equation>'", line_no)
    return ProofLine(line_id, parse_disjunction(body, line_no), Justification(parts[1], args, weaken_eq))


def parse_proof(text: str) -> Proof:
    """Parse a proof file; FormatError on syntax problems, never on invalid steps."""
    raw_lines = text.splitlines()
    if not raw_lines:
        raise FormatError("empty proof file")
    header = raw_lines[0].split()
    if len(header) != 3 or header[0] not in ("rlin", "rquad") or header[1] != "1":
        raise FormatError(f"bad header {raw_lines[0]!r}", 1)
    try:
        var_count = int(header[2])
    except ValueError as e:
        raise FormatError(f"bad variable count {header[2]!r}", 1) from e
    flavor = LIN if header[0] == "rlin" else QUAD
    comments = []
    lines = []
    for line_no, raw in enumerate(raw_lines[1:], 2):
        if not raw.strip():
            continue
        if raw.startswith("c ") or raw == "c":
            if lines:
                raise FormatError("comments must precede the proof lines", line_no)
            comments.append(raw[2:])
            continue
        lines.append(_parse_line(raw, line_no))
    return Proof(flavor, var_count, tuple(lines), tuple(comments))


def write_proof(proof: Proof) -> str:
    header = f"{'rlin' if proof.flavor == LIN else 'rquad'} 1 {proof.var_count}"
    out = [header] + [f"c {c}" for c in proof.comments] + [str(line) for line in proof.lines]
    return "\n".join(out) + "\n"


# ========================================
# MUTACIONES
# ========================================

MUTATIONS = ("coefficient", "rhs", "drop", "premise")


def _mutate_equation(d: Disjunction, rng: np.random.Generator, kind: str) -> Optional[Disjunction]:
    candidates = [e for e in d.eqs if e.terms] if kind == "coefficient" else list(d.eqs)
    if not candidates:
        return None
    eq = candidates[int(rng.integers(len(candidates)))]
    delta = 1 if rng.integers(2) else -1
    rest = [e for e in d.eqs if e != eq]
    if kind == "drop":
        return Disjunction.of(rest)
    if kind == "rhs":
        return Disjunction.of(rest + [Equation(eq.terms, eq.rhs + delta)])
    pos = int(rng.integers(len(eq.terms)))
    terms = [(m, c + delta if i == pos else c) for i, (m, c) in enumerate(eq.terms)]
    return Disjunction.of(rest + [Equation.build(terms, eq.rhs)])


def _mutate_premise(proof: Proof, inputs, line: ProofLine, by_id, rng) -> Optional[Justification]:
    just = line.just
    if just.rule == "res":
        a, p, b, q = just.args
        new = Justification("res", (b, q, a, p))
    elif just.rule in ("weaken", "simp"):
        earlier = [i for i in by_id if i < line.id and i != just.args[0]]
        if not earlier:
            return None
        new = Justification(just.rule, (earlier[int(rng.integers(len(earlier)))],) + just.args[1:], just.eq)
    else:
        return None
    try:
        if expected_disjunction(proof, inputs, replace(line, just=new), by_id) == line.disj:
            return None
    except LineError:
        pass
    return new


def mutate_proof(proof: Proof, inputs: Sequence[Disjunction], rng: np.random.Generator,
                 attempts: int = 200) -> Tuple[Proof, int, str]:
    """
    Apply one single-line mutation that the checker must reject at that line.

    Returns:
        (mutated proof, mutated line id, mutation kind)
    """
    by_id = {line.id: line for line in proof.lines}
    for _ in range(attempts):
        idx = int(rng.integers(len(proof.lines)))
        line = proof.lines[idx]
        kind = MUTATIONS[int(rng.integers(len(MUTATIONS)))]
        if kind == "premise":
            new_just = _mutate_premise(proof, inputs, line, by_id, rng)
            if new_just is None:
                continue
            new_line = replace(line, just=new_just)
        else:
            new_disj = _mutate_equation(line.disj, rng, kind)
            if new_disj is None or new_disj == line.disj:
                continue
            new_line = replace(line, disj=new_disj)
        lines = list(proof.lines)
        lines[idx] = new_line
        return replace(proof, lines=tuple(lines)), line.id, kind
    raise PreconditionError("no applicable mutation found")
