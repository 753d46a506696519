"""
Fórmulas 3CNF: representación, DIMACS, muestreo aleatorio y semántica por
fuerza bruta (incluida la evaluación como 3XOR y el desbalance I(K)).

Las enumeraciones de 2^n asignaciones se hacen por bloques con numpy; cada
bloque es una matriz booleana (filas = asignaciones, columnas = variables).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import BudgetExceeded, FormatError, PreconditionError

logger = logging.getLogger(__name__)

DEFAULT_CAP = 24
_CHUNK_BITS = 16


@dataclass(frozen=True, order=True)
class Literal:
    """Literal x_var (positive=True) o ¬x_var."""
    var: int
    positive: bool = True

    def __post_init__(self):
        if self.var < 1:
            raise PreconditionError(f"variable index must be >= 1, got {self.var}")

    @classmethod
    def from_int(cls, value: int) -> "Literal":
        if value == 0:
            raise PreconditionError("0 is not a literal")
        return cls(abs(value), value > 0)

    def to_int(self) -> int:
        return self.var if self.positive else -self.var

    def value(self, bits: Sequence[bool]) -> bool:
        """Valor de verdad bajo una asignación (bits[0] es x1)."""
        return bool(bits[self.var - 1]) == self.positive

    def __str__(self) -> str:
        return f"x{self.var}" if self.positive else f"¬x{self.var}"


@dataclass(frozen=True)
class Clause3:
    """Tres literales sobre variables distintas dos a dos."""
    lits: Tuple[Literal, Literal, Literal]

    def __post_init__(self):
        object.__setattr__(self, 'lits', tuple(self.lits))
        if len(self.lits) != 3:
            raise PreconditionError(f"clause width must be 3, got {len(self.lits)}")
        if len({lit.var for lit in self.lits}) != 3:
            raise PreconditionError("clause repeats a variable")

    @classmethod
    def from_ints(cls, values: Sequence[int]) -> "Clause3":
        return cls(tuple(Literal.from_int(v) for v in values))

    @property
    def variables(self) -> Tuple[int, int, int]:
        return tuple(lit.var for lit in self.lits)

    def negatives(self) -> int:
        return sum(1 for lit in self.lits if not lit.positive)

    def __str__(self) -> str:
        return "(" + " ∨ ".join(str(lit) for lit in self.lits) + ")"


@dataclass(frozen=True)
class Cnf3:
    """3CNF sobre n variables; los comentarios solo se guardan para el round-trip."""
    n: int
    clauses: Tuple[Clause3, ...] = ()
    comments: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'clauses', tuple(self.clauses))
        object.__setattr__(self, 'comments', tuple(self.comments))
        if self.n < 0:
            raise PreconditionError("n must be non-negative")
        for clause in self.clauses:
            for lit in clause.lits:
                if lit.var > self.n:
                    raise PreconditionError(f"variable x{lit.var} out of range 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @classmethod
    def from_ints(cls, n: int, clauses: Sequence[Sequence[int]]) -> "Cnf3":
        return cls(n, tuple(Clause3.from_ints(c) for c in clauses))

    def to_ints(self) -> List[List[int]]:
        return [[lit.to_int() for lit in c.lits] for c in self.clauses]


@dataclass(frozen=True)
class Assignment:
    """Asignación booleana; bits[i-1] es el valor de x_i."""
    bits: Tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, 'bits', tuple(bool(b) for b in self.bits))

    @property
    def n(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)


# ========================================
# DIMACS
# ========================================

def parse_dimacs(text: str) -> Cnf3:
    """
    Parsea texto DIMACS CNF donde toda cláusula tiene ancho exactamente 3.

    Args:
        text: Contenido DIMACS

    Returns:
        Cnf3 con las cláusulas en el orden del archivo

    Raises:
        FormatError: cabecera mal formada, ancho incorrecto, variable fuera de
            rango o variable repetida dentro de una cláusula
    """
    comments: List[str] = []
    header: Optional[Tuple[int, int]] = None
    pending: List[int] = []
    raw_clauses: List[Tuple[int, List[int]]] = []

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('c'):
            if header is None:
                comments.append(line[1:].strip())
            continue
        if line.startswith('p'):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != 'cnf':
                raise FormatError(f"Invalid problem line: {line}", line_no)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as e:
                raise FormatError(f"Invalid problem line: {line}", line_no) from e
            if header[0] < 0 or header[1] < 0:
                raise FormatError(f"Invalid problem line: {line}", line_no)
            continue
        if header is None:
            raise FormatError("clause before problem line", line_no)
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError as e:
            raise FormatError(f"non-integer token in: {line}", line_no) from e
        for value in values:
            if value == 0:
                raw_clauses.append((line_no, pending))
                pending = []
            else:
                pending.append(value)

    if header is None:
        raise FormatError("missing problem line")
    if pending:
        raise FormatError("last clause is not terminated by 0")

    n, m = header
    if len(raw_clauses) != m:
        raise FormatError(f"header announces {m} clauses, found {len(raw_clauses)}")

    clauses = []
    for line_no, values in raw_clauses:
        if len(values) != 3:
            raise FormatError(f"clause width {len(values)} != 3", line_no)
        if any(abs(v) > n for v in values):
            raise FormatError(f"variable out of range 1..{n}", line_no)
        if len({abs(v) for v in values}) != 3:
            raise FormatError("duplicate variable in clause", line_no)
        clauses.append(Clause3.from_ints(values))

    return Cnf3(n, tuple(clauses), tuple(comments))


def write_dimacs(f: Cnf3) -> str:
    """Serializa a texto DIMACS; parse_dimacs lo invierte sobre su propia salida."""
    lines = [f"c {c}" if c else "c" for c in f.comments]
    lines.append(f"p cnf {f.n} {f.m}")
    for clause in f.clauses:
        lines.append(" ".join(str(lit.to_int()) for lit in clause.lits) + " 0")
    return "\n".join(lines) + "\n"


# ========================================
# MUESTREO
# ========================================

def clause_universe_size(n: int) -> int:
    """Número de cláusulas del universo de muestreo: 2^3 * C(n,3)."""
    return 8 * (n * (n - 1) * (n - 2) // 6) if n >= 3 else 0


def sample_random(n: int, m: int, seed: int) -> Cnf3:
    """
    Extrae m cláusulas i.i.d. uniformes del universo de 2^3*C(n,3) cláusulas.

    El generador es PCG64 de numpy (`numpy.random.default_rng(seed)`): la
    terna de variables es un 3-subconjunto uniforme (orden ascendente) y los
    tres signos son bits equiprobables independientes.

    Raises:
        PreconditionError: n < 3
    """
    if n < 3:
        raise PreconditionError(f"sampling needs n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    clauses = []
    for _ in range(m):
        triple = np.sort(rng.choice(n, size=3, replace=False)) + 1
        signs = rng.integers(0, 2, size=3)
        clauses.append(Clause3(tuple(
            Literal(int(v), bool(s)) for v, s in zip(triple, signs)
        )))
    return Cnf3(n, tuple(clauses), (f"random 3cnf n={n} m={m} seed={seed}",))


# ========================================
# SEMÁNTICA
# ========================================

def eval_as_3xor(c: Clause3, a: Assignment) -> bool:
    """True si y solo si el XOR de los tres literales vale 1 bajo a."""
    return sum(lit.value(a.bits) for lit in c.lits) % 2 == 1


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise BudgetExceeded(f"n={n} exceeds brute-force cap {cap}")


def assignment_blocks(n: int) -> Iterator[np.ndarray]:
    """Genera matrices booleanas que cubren las 2^n asignaciones en orden de conteo."""
    total = 1 << n
    step = 1 << min(n, _CHUNK_BITS)
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, total, step):
        idx = np.arange(start, start + step, dtype=np.int64)
        yield ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)


def _literal_columns(f: Cnf3, block: np.ndarray) -> np.ndarray:
    """Array (filas, m, 3) con el valor de verdad de cada literal."""
    if f.m == 0:
        return np.zeros((block.shape[0], 0, 3), dtype=bool)
    vars_idx = np.array([[lit.var - 1 for lit in c.lits] for c in f.clauses])
    pos = np.array([[lit.positive for lit in c.lits] for c in f.clauses])
    return block[:, vars_idx] == pos[None, :, :]


def xor_satisfied_counts(f: Cnf3, block: np.ndarray) -> np.ndarray:
    """Cláusulas satisfechas como 3XOR por cada fila del bloque."""
    lits = _literal_columns(f, block)
    return (lits.sum(axis=2) % 2 == 1).sum(axis=1)


def max_3xor_satisfied(f: Cnf3, cap: int = DEFAULT_CAP) -> int:
    """
    Máximo número de cláusulas satisfechas a la vez como 3XOR.

    Raises:
        BudgetExceeded: n > cap
    """
    _check_cap(f.n, cap)
    if f.m == 0:
        return 0
    best = 0
    for block in assignment_blocks(f.n):
        best = max(best, int(xor_satisfied_counts(f, block).max()))
        if best == f.m:
            break
    return best


def is_satisfiable_bruteforce(f: Cnf3, cap: int = DEFAULT_CAP) -> Tuple[bool, Optional[Assignment]]:
    """
    Comprobación SAT exhaustiva.

    Returns:
        (True, asignación que satisface) o (False, None)

    Raises:
        BudgetExceeded: n > cap
    """
    _check_cap(f.n, cap)
    for block in assignment_blocks(f.n):
        if f.m == 0:
            return True, Assignment(tuple(block[0]))
        sat = _literal_columns(f, block).any(axis=2).all(axis=1)
        hits = np.flatnonzero(sat)
        if hits.size:
            return True, Assignment(tuple(block[hits[0]]))
    return False, None


def occurrence_counts(f: Cnf3) -> Tuple[List[int], List[int]]:
    """Apariciones positivas y negativas por variable (el índice 0 es x1)."""
    pos = [0] * f.n
    neg = [0] * f.n
    for clause in f.clauses:
        for lit in clause.lits:
            if lit.positive:
                pos[lit.var - 1] += 1
            else:
                neg[lit.var - 1] += 1
    return pos, neg


def imbalance(f: Cnf3) -> int:
    """I(K) = suma sobre las variables de |#positivas - #negativas|."""
    pos, neg = occurrence_counts(f)
    return sum(abs(p - q) for p, q in zip(pos, neg))


def all_clauses(n: int) -> List[Clause3]:
    """Universo completo de cláusulas: variables ascendentes, signos en orden binario."""
    out = []
    for triple in combinations(range(1, n + 1), 3):
        for mask in range(8):
            out.append(Clause3(tuple(
                Literal(v, not (mask >> (2 - i)) & 1) for i, v in enumerate(triple)
            )))
    return out


# ========================================
# SIMETRÍAS: PERMUTACIÓN Y CAMBIO DE SIGNO
# ========================================

def _relabel(c: Clause3, perm: Tuple[int, ...], flips: int) -> Clause3:
    return Clause3(tuple(sorted(
        Literal(perm[lit.var - 1], lit.positive != bool((flips >> (lit.var - 1)) & 1))
        for lit in c.lits
    )))


def _clause_images(universe: Sequence[Clause3], n: int) -> List[Tuple[int, ...]]:
    index = {c: i for i, c in enumerate(universe)}
    return [
        tuple(index[_relabel(c, perm, flips)] for c in universe)
        for perm in permutations(range(1, n + 1))
        for flips in range(1 << n)
    ]


def _is_canonical(key: Tuple[int, ...], images: Sequence[Tuple[int, ...]]) -> bool:
    return all(tuple(sorted(img[i] for i in key)) >= key for img in images)


def canonical_formulas(n: int, max_m: int) -> Iterator[Cnf3]:
    """
    Un representante por clase de fórmulas con 1..max_m cláusulas (multiconjuntos
    de all_clauses(n)) bajo permutación de variables y cambio de signo de una
    variable en todas sus apariciones.

    El representante es el multiconjunto de índices mínimo en orden
    lexicográfico. Quitar el índice mayor de un representante deja otro
    representante, así que cada nivel se genera extendiendo el anterior.
    Las fórmulas salen por número de cláusulas ascendente.
    """
    universe = all_clauses(n)
    images = _clause_images(universe, n)
    level: List[Tuple[int, ...]] = [()]
    for m in range(1, max_m + 1):
        level = [
            key + (i,)
            for key in level
            for i in range(key[-1] if key else 0, len(universe))
            if _is_canonical(key + (i,), images)
        ]
        logger.debug("n=%d m=%d: %d clases", n, m, len(level))
        for key in level:
            yield Cnf3(n, tuple(universe[i] for i in key))
