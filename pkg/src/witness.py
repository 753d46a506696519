"""
Testigos FKO de insatisfacibilidad: k-tuplas pares inconsistentes, colecciones
con multiplicidad acotada, la matriz M(K) con su certificado espectral y la
desigualdad t > d(I + λn)/2 + b/n^c.

Todo veredicto se calcula con aritmética racional exacta (`fractions.Fraction`);
numpy solo aporta el punto de partida de la iteración de potencia.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.cnf3 import Cnf3, assignment_blocks, imbalance, xor_satisfied_counts
from src.exceptions import BudgetExceeded, ConvergenceError, FormatError, PreconditionError

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


# ========================================
# TIPOS
# ========================================

@dataclass(frozen=True)
class EvenKTuple:
    """k índices de cláusula (desde 1) dentro de una Cnf3."""
    clause_ids: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'clause_ids', tuple(int(i) for i in self.clause_ids))

    @property
    def k(self) -> int:
        return len(self.clause_ids)


@dataclass(frozen=True)
class TupleCollection:
    """t tuplas de ancho k donde cada cláusula se usa como mucho d veces."""
    k: int
    d: int
    tuples: Tuple[EvenKTuple, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'tuples', tuple(self.tuples))

    @property
    def t(self) -> int:
        return len(self.tuples)

    def multiplicities(self) -> Counter:
        counts: Counter = Counter()
        for tup in self.tuples:
            counts.update(tup.clause_ids)
        return counts


@dataclass(frozen=True)
class ConstantsConfig:
    """Constantes b, c (holgura b/n^c) y c0, c1 (cotas de los parámetros)."""
    b: int = 1
    c: int = 1
    c0: Fraction = Fraction(2)
    c1: Fraction = Fraction(2)

    def __post_init__(self):
        object.__setattr__(self, 'c0', Fraction(self.c0))
        object.__setattr__(self, 'c1', Fraction(self.c1))
        if self.c < 1:
            raise PreconditionError("constant c must be >= 1")
        if self.b < 0:
            raise PreconditionError("constant b must be non-negative")
        if self.c0 <= 0 or self.c1 <= 0:
            raise PreconditionError("constants c0 and c1 must be positive")

    def slack(self, n: int) -> Fraction:
        return Fraction(self.b, n ** self.c)

    def tolerance(self, n: int) -> Fraction:
        """Error aditivo permitido para λ: 1/n^c."""
        return Fraction(1, n ** self.c)


@dataclass(frozen=True)
class SpectralCert:
    """λ con un autovector v, ‖v‖∞ = 1, certificado por ‖Mv − λv‖∞ ≤ tol."""
    matrix: Tuple[Tuple[Fraction, ...], ...]
    lam: Fraction
    eigvec: Tuple[Fraction, ...]
    tol: Fraction
    iterations: int = field(default=0, compare=False)

    def residual(self) -> Fraction:
        return residual_norm(self.matrix, self.lam, self.eigvec)

    def is_top(self) -> bool:
        """Ningún autovalor de la matriz supera λ + tol."""
        return spectrum_bounded_by(self.matrix, self.lam + self.tol)

    def is_valid(self) -> bool:
        if not self.eigvec:
            return len(self.matrix) == 0
        return max(abs(x) for x in self.eigvec) == 1 and self.residual() <= self.tol and self.is_top()


@dataclass(frozen=True)
class FkoWitness:  # pylint: disable=too-many-instance-attributes
    """Contenido del archivo de testigo; M no se guarda, el verificador la reconstruye."""
    n: int
    m: int
    imbalance: int
    lam: Fraction
    eigvec: Tuple[Fraction, ...]
    collection: TupleCollection
    constants: ConstantsConfig = ConstantsConfig()
    comments: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'eigvec', tuple(Fraction(x) for x in self.eigvec))
        object.__setattr__(self, 'lam', Fraction(self.lam))
        object.__setattr__(self, 'comments', tuple(self.comments))


@dataclass
class VerdictReport:
    """Lista ordenada de violaciones; vacía significa OK."""
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> Optional[str]:
        return self.violations[0] if self.violations else None

    def add(self, message: str) -> None:
        self.violations.append(message)

    def __str__(self) -> str:
        return "OK" if self.ok else "; ".join(self.violations)


@dataclass(frozen=True)
class SearchFailure:
    """Búsqueda de tuplas que no alcanzó su objetivo."""
    reason: str
    found: int
    explored: int


# ========================================
# TUPLAS (Def. k-tupla par inconsistente)
# ========================================

def _clauses_of(f: Cnf3, tup: EvenKTuple):
    for idx in tup.clause_ids:
        if not 1 <= idx <= f.m:
            raise PreconditionError(f"clause index {idx} out of range 1..{f.m}")
    return [f.clauses[idx - 1] for idx in tup.clause_ids]


def is_even_tuple(f: Cnf3, tup: EvenKTuple) -> bool:
    """True si cada variable aparece un número par de veces en la tupla."""
    counts: Counter = Counter()
    for clause in _clauses_of(f, tup):
        counts.update(clause.variables)
    return all(c % 2 == 0 for c in counts.values())


def is_inconsistent(f: Cnf3, tup: EvenKTuple) -> bool:
    """
    True si el número de literales negativos de la tupla es impar.

    Raises:
        PreconditionError: la tupla no es par
    """
    if not is_even_tuple(f, tup):
        raise PreconditionError(f"tuple {tup.clause_ids} is not even")
    return sum(c.negatives() for c in _clauses_of(f, tup)) % 2 == 1


def check_prop_3_2(f: Cnf3, tup: EvenKTuple, cap: int = 24) -> bool:
    """
    Confirma exhaustivamente que toda asignación deja alguna cláusula de una
    tupla par inconsistente sin satisfacer como 3XOR.

    Raises:
        PreconditionError: la tupla no es par e inconsistente
        BudgetExceeded: n > cap
    """
    if not is_inconsistent(f, tup):
        raise PreconditionError(f"tuple {tup.clause_ids} is consistent")
    if f.n > cap:
        raise BudgetExceeded(f"n={f.n} exceeds brute-force cap {cap}")
    sub = Cnf3(f.n, tuple(_clauses_of(f, tup)))
    for block in assignment_blocks(f.n):
        if (xor_satisfied_counts(sub, block) == sub.m).any():
            return False
    return True


def check_collection(f: Cnf3, coll: TupleCollection, allow_multiset: bool = False) -> VerdictReport:
    """Comprueba cada tupla, la cota de multiplicidad d y t < n^2."""
    report = VerdictReport()
    if coll.k % 2 or coll.k < 2:
        report.add(f"k={coll.k} is not an even number >= 2")
    for pos, tup in enumerate(coll.tuples, 1):
        if tup.k != coll.k:
            report.add(f"tuple {pos}: width {tup.k} != k={coll.k}")
            continue
        if not allow_multiset and len(set(tup.clause_ids)) != tup.k:
            report.add(f"tuple {pos}: repeated clause index")
            continue
        try:
            if not is_even_tuple(f, tup):
                report.add(f"tuple {pos}: not even")
            elif not is_inconsistent(f, tup):
                report.add(f"tuple {pos}: consistent (even number of negative literals)")
        except PreconditionError as e:
            report.add(f"tuple {pos}: {e}")
    for clause_id, count in sorted(coll.multiplicities().items()):
        if count > coll.d:
            report.add(f"clause {clause_id} used {count} times > d={coll.d}")
            break
    if coll.t >= f.n * f.n:
        report.add(f"t={coll.t} is not below n^2={f.n * f.n}")
    return report


# ========================================
# MATRIZ Y CERTIFICADO ESPECTRAL
# ========================================

def build_matrix(f: Cnf3, convention: str = "formula") -> Matrix:
    """
    M(K) con M_ij = (d - s)/2, donde d cuenta las cláusulas con x_i y x_j de
    signo distinto y s las de igual signo. La diagonal es 0.
    La convención 'prose' niega todas las entradas.
    """
    if convention not in ("formula", "prose"):
        raise PreconditionError(f"unknown matrix convention {convention!r}")
    half = Fraction(1, 2) if convention == "formula" else Fraction(-1, 2)
    M = [[Fraction(0)] * f.n for _ in range(f.n)]
    for clause in f.clauses:
        for a, b in combinations(clause.lits, 2):
            delta = -half if a.positive == b.positive else half
            M[a.var - 1][b.var - 1] += delta
            M[b.var - 1][a.var - 1] += delta
    return M


def _matvec(M: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> List[Fraction]:
    return [sum((a * x for a, x in zip(row, v) if a), Fraction(0)) for row in M]


def residual_norm(M: Sequence[Sequence[Fraction]], lam: Fraction, v: Sequence[Fraction]) -> Fraction:
    """‖Mv − λv‖∞ en aritmética exacta."""
    if not v:
        return Fraction(0)
    Mv = _matvec(M, v)
    return max(abs(a - lam * x) for a, x in zip(Mv, v))


def _round_to_grid(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(round(x * scale), scale)


def _normalize(v: Sequence[Fraction], bits: int) -> List[Fraction]:
    """Escala para que la entrada de mayor módulo sea exactamente +1 y redondea."""
    pivot = max(range(len(v)), key=lambda i: abs(v[i]))
    scale = v[pivot]
    return [Fraction(1) if i == pivot else _round_to_grid(x / scale, bits)
            for i, x in enumerate(v)]


def _rayleigh(M, v) -> Fraction:
    Mv = _matvec(M, v)
    return sum((a * x for a, x in zip(Mv, v)), Fraction(0)) / sum((x * x for x in v), Fraction(0))


def approx_top_eigenvalue(M: Sequence[Sequence[Fraction]], tol: Fraction, max_iter: int = 10000,
                          precision_bits: int = 64) -> SpectralCert:
    """
    Aproximación certificada del mayor autovalor de una matriz simétrica.

    El autovector en float del mayor autovalor (numpy.linalg.eigh) arranca
    una iteración de potencia sobre M + σI, con σ la mayor suma absoluta de
    fila, en racionales exactos redondeados a una rejilla de 2^-precision_bits
    entre pasos. λ es el cociente de Rayleigh del vector actual; el bucle para
    en cuanto el residuo exacto ‖Mv − λv‖∞ es como mucho tol y ningún
    autovalor de M supera λ + tol.

    Raises:
        PreconditionError: M no es simétrica
        ConvergenceError: max_iter pasos sin alcanzar tol
    """
    n = len(M)
    frozen = tuple(tuple(Fraction(x) for x in row) for row in M)
    for i in range(n):
        for j in range(i):
            if frozen[i][j] != frozen[j][i]:
                raise PreconditionError("matrix is not symmetric")
    tol = Fraction(tol)
    if n == 0:
        return SpectralCert(frozen, Fraction(0), (), tol)
    if all(x == 0 for row in frozen for x in row):
        vec = tuple(Fraction(int(i == 0)) for i in range(n))
        return SpectralCert(frozen, Fraction(0), vec, tol)

    sigma = max(sum(abs(x) for x in row) for row in frozen)
    _, vectors = np.linalg.eigh(np.array([[float(x) for x in row] for row in frozen]))
    v = _normalize([Fraction(float(x)) for x in vectors[:, -1]], precision_bits)

    for iteration in range(1, max_iter + 1):
        lam = _rayleigh(frozen, v)
        if residual_norm(frozen, lam, v) <= tol and spectrum_bounded_by(frozen, lam + tol):
            logger.debug("Spectral certificate after %d iterations (lambda=%.6f)", iteration, float(lam))
            return SpectralCert(frozen, lam, tuple(v), tol, iteration)
        w = [a + sigma * x for a, x in zip(_matvec(frozen, v), v)]
        v = _normalize(w, precision_bits)

    raise ConvergenceError(f"power iteration did not reach tol={tol} in {max_iter} steps",
                           explored=max_iter)


# ---- independent check of λ: characteristic polynomial + Sturm bisection ----

def characteristic_polynomial(M: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """det(xI − M), coeficientes desde x^n hacia abajo (Faddeev–LeVerrier, exacto)."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        prev = coeffs[-1]
        Mk = [[sum((A[i][l] * Mk[l][j] for l in range(n)), Fraction(0)) + (prev if i == j else 0)
               for j in range(n)] for i in range(n)]
        trace = sum(sum(A[i][l] * Mk[l][i] for l in range(n)) for i in range(n))
        coeffs.append(-Fraction(trace) / k)
    return coeffs


def _poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _poly_rem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[0] / b[0]
        for i, c in enumerate(b):
            a[i] -= q * c
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _sturm_chain(p: List[Fraction]) -> List[List[Fraction]]:
    n = len(p) - 1
    chain = [p, [c * (n - i) for i, c in enumerate(p[:-1])]]
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return chain


def spectrum_bounded_by(M: Sequence[Sequence[Fraction]], bound: Fraction) -> bool:
    """
    True si todo autovalor de la matriz simétrica M es como mucho `bound`.

    Eliminación simétrica exacta sobre bound·I − M: es semidefinida positiva
    si y solo si ningún pivote es negativo y cada pivote nulo tiene la fila nula.
    """
    n = len(M)
    A = [[(Fraction(bound) if i == j else Fraction(0)) - Fraction(M[i][j]) for j in range(n)]
         for i in range(n)]
    for k in range(n):
        pivot = A[k][k]
        if pivot < 0:
            return False
        if pivot == 0:
            if any(A[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            factor = A[i][k] / pivot
            if factor:
                for j in range(k + 1, n):
                    A[i][j] -= factor * A[k][j]
    return True


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def top_root_bisection(M: Sequence[Sequence[Fraction]], tol: Fraction) -> Fraction:
    """Mayor raíz real de det(xI − M), localizada por bisección con error tol/2."""
    n = len(M)
    if n == 0:
        return Fraction(0)
    chain = _sturm_chain(characteristic_polynomial(M))
    at_infinity = _sign_changes(c[0] for c in chain)
    radius = max(sum(abs(Fraction(x)) for x in row) for row in M) + 1
    lo, hi = -radius, radius
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _poly_eval(chain[0], mid) == 0 or _sign_changes(_poly_eval(c, mid) for c in chain) > at_infinity:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def spectral_certificate(f: Cnf3, consts: ConstantsConfig, convention: str = "formula",
                         max_iter: int = 10000, precision_bits: int = 64) -> SpectralCert:
    """Certificado para M(f) con tolerancia 1/n^c."""
    M = build_matrix(f, convention)
    return approx_top_eigenvalue(M, consts.tolerance(max(f.n, 1)), max_iter, precision_bits)


# ========================================
# DESIGUALDAD Y VERIFICACIÓN
# ========================================

def inequality_rhs(d: int, I: int, lam: Fraction, n: int, consts: ConstantsConfig) -> Fraction:
    return Fraction(d) * (I + Fraction(lam) * n) / 2 + consts.slack(n)


def check_inequality(t: int, d: int, I: int, lam: Fraction, n: int, consts: ConstantsConfig) -> bool:  # pylint: disable=too-many-arguments,too-many-positional-arguments
    """Evaluación exacta de t > d(I + λn)/2 + b/n^c."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    return Fraction(t) > inequality_rhs(d, I, lam, n, consts)


def verify_witness(f: Cnf3, w: FkoWitness, convention: str = "formula") -> VerdictReport:
    """Recalcula todo lo que afirma un testigo e informa de cada discrepancia."""
    report = VerdictReport()
    if (w.n, w.m) != (f.n, f.m):
        report.add(f"witness is for n={w.n}, m={w.m}; formula has n={f.n}, m={f.m}")
        return report

    actual = imbalance(f)
    if actual != w.imbalance:
        report.add(f"imbalance {w.imbalance} != recomputed {actual}")

    M = build_matrix(f, convention)
    if len(w.eigvec) != f.n:
        report.add(f"eigvec has {len(w.eigvec)} entries, expected {f.n}")
    elif f.n:
        cert = SpectralCert(tuple(tuple(r) for r in M), w.lam, w.eigvec, w.constants.tolerance(f.n))
        if max(abs(x) for x in w.eigvec) != 1:
            report.add("eigvec is not normalized to max-norm 1")
        elif cert.residual() > cert.tol:
            report.add(f"spectral residual {cert.residual()} exceeds {cert.tol}")
        elif not cert.is_top():
            report.add(f"M(f) has an eigenvalue above lambda + {cert.tol}; lambda is not the top eigenvalue")

    report.violations.extend(check_collection(f, w.collection).violations)

    if f.n >= 1 and not check_inequality(w.collection.t, w.collection.d, actual, w.lam, f.n, w.constants):
        rhs = inequality_rhs(w.collection.d, actual, w.lam, f.n, w.constants)
        report.add(f"inequality fails: t={w.collection.t} <= {rhs}")
    return report


def build_witness(f: Cnf3, coll: TupleCollection, consts: ConstantsConfig,  # pylint: disable=too-many-arguments,too-many-positional-arguments
                  convention: str = "formula", max_iter: int = 10000,
                  precision_bits: int = 64) -> FkoWitness:
    """Monta un testigo para f alrededor de una colección de tuplas."""
    cert = spectral_certificate(f, consts, convention, max_iter, precision_bits)
    return FkoWitness(f.n, f.m, imbalance(f), cert.lam, cert.eigvec, coll, consts)


# ========================================
# BÚSQUEDA POR FUERZA BRUTA
# ========================================

def _candidates(f: Cnf3, k: int, allow_multiset: bool) -> Iterator[EvenKTuple]:
    pick = combinations_with_replacement if allow_multiset else combinations
    for ids in pick(range(1, f.m + 1), k):
        yield EvenKTuple(ids)


def _is_good(f: Cnf3, tup: EvenKTuple) -> bool:
    return is_even_tuple(f, tup) and is_inconsistent(f, tup)


def find_tuples_bruteforce(f: Cnf3, k: int, t_goal: int, d: int, budget: int,  # pylint: disable=too-many-arguments,too-many-positional-arguments
                           allow_multiset: bool = False) -> Union[TupleCollection, SearchFailure]:
    """
    Búsqueda voraz sobre k-subconjuntos en orden lexicográfico.

    Returns:
        una colección de t_goal tuplas que pasa check_collection, o un
        SearchFailure con el recuento parcial
    """
    if k % 2 or k < 2:
        raise PreconditionError(f"k must be an even number >= 2, got {k}")
    chosen: List[EvenKTuple] = []
    used: Counter = Counter()
    explored = 0
    for tup in _candidates(f, k, allow_multiset):
        if len(chosen) >= t_goal:
            break
        if explored >= budget:
            logger.info("Tuple search budget %d exhausted with %d/%d tuples", budget, len(chosen), t_goal)
            return SearchFailure("budget exhausted", len(chosen), explored)
        explored += 1
        if any(used[i] + cnt > d for i, cnt in Counter(tup.clause_ids).items()):
            continue
        if _is_good(f, tup):
            chosen.append(tup)
            used.update(tup.clause_ids)
    if len(chosen) < t_goal:
        return SearchFailure("not enough tuples", len(chosen), explored)
    return TupleCollection(k, d, tuple(chosen))


def inconsistent_tuples(f: Cnf3, k: int, allow_multiset: bool = False) -> List[EvenKTuple]:
    """Todas las k-tuplas pares inconsistentes de f en orden lexicográfico."""
    return [tup for tup in _candidates(f, k, allow_multiset) if _is_good(f, tup)]


def exists_collection(f: Cnf3, k: int, t: int, d: int, budget: int) -> Optional[TupleCollection]:  # pylint: disable=too-many-arguments,too-many-positional-arguments
    """
    Búsqueda completa: backtracking sobre tuplas inconsistentes distintas hasta
    reunir t de ellas con multiplicidad d.

    Raises:
        BudgetExceeded: más de `budget` nodos de búsqueda
    """
    pool = inconsistent_tuples(f, k)
    used: Counter = Counter()
    chosen: List[EvenKTuple] = []
    nodes = 0

    def backtrack(start: int) -> bool:
        nonlocal nodes
        if len(chosen) == t:
            return True
        if len(pool) - start < t - len(chosen):
            return False
        for pos in range(start, len(pool)):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"collection search exceeded {budget} nodes", explored=nodes)
            tup = pool[pos]
            if any(used[i] + 1 > d for i in tup.clause_ids):
                continue
            chosen.append(tup)
            used.update(tup.clause_ids)
            if backtrack(pos + 1):
                return True
            used.subtract(tup.clause_ids)
            chosen.pop()
        return False

    if t <= 0:
        return TupleCollection(k, d, ())
    return TupleCollection(k, d, tuple(chosen)) if backtrack(0) else None


# ========================================
# ARCHIVO DE TESTIGO
# ========================================

def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(token: str, line_no: int) -> Fraction:
    num, sep, den = token.partition('/')
    try:
        if not sep or int(den) <= 0:
            raise ValueError(token)
        value = Fraction(int(num), int(den))
    except ValueError as e:
        raise FormatError(f"expected p/q rational, got {token!r}", line_no) from e
    if _frac(value) != token:
        raise FormatError(f"rational {token!r} is not in lowest terms", line_no)
    return value


def write_witness(w: FkoWitness) -> str:
    """Serializa un testigo a su formato de texto por líneas."""
    lines = ["fko 1"]
    lines += [f"c {c}" for c in w.comments]
    coll = w.collection
    lines += [
        f"n {w.n}", f"m {w.m}", f"k {coll.k}", f"t {coll.t}", f"d {coll.d}",
        f"imbalance {w.imbalance}",
        f"lambda {_frac(w.lam)}",
        "eigvec" + "".join(f" {_frac(x)}" for x in w.eigvec),
        f"consts {w.constants.b} {w.constants.c} {_frac(w.constants.c0)} {_frac(w.constants.c1)}",
    ]
    lines += ["tuple " + " ".join(str(i) for i in tup.clause_ids) for tup in coll.tuples]
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> FkoWitness:
    """Parsea el formato de texto del testigo; lanza FormatError ante cualquier desviación."""
    rows = [(no, line) for no, line in enumerate(text.splitlines(), 1) if line.strip()]
    if not rows or rows[0][1].strip() != "fko 1":
        raise FormatError("missing 'fko 1' header", rows[0][0] if rows else None)
    comments = []
    pos = 1
    while pos < len(rows) and rows[pos][1].startswith("c "):
        comments.append(rows[pos][1][2:])
        pos += 1

    def take(key: str) -> Tuple[int, List[str]]:
        nonlocal pos
        if pos >= len(rows):
            raise FormatError(f"missing '{key}' line")
        no, line = rows[pos]
        parts = line.split()
        if parts[0] != key:
            raise FormatError(f"expected '{key}', got {parts[0]!r}", no)
        pos += 1
        return no, parts[1:]

    def take_int(key: str) -> int:
        no, args = take(key)
        if len(args) != 1:
            raise FormatError(f"'{key}' takes one integer", no)
        try:
            return int(args[0])
        except ValueError as e:
            raise FormatError(f"'{key}' takes one integer", no) from e

    n, m, k, t, d = (take_int(key) for key in ("n", "m", "k", "t", "d"))
    imb = take_int("imbalance")
    no, args = take("lambda")
    if len(args) != 1:
        raise FormatError("'lambda' takes one rational", no)
    lam = _parse_frac(args[0], no)
    no, args = take("eigvec")
    eigvec = tuple(_parse_frac(a, no) for a in args)
    no, args = take("consts")
    if len(args) != 4:
        raise FormatError("'consts' takes b c c0 c1", no)
    try:
        consts = ConstantsConfig(int(args[0]), int(args[1]), _parse_frac(args[2], no), _parse_frac(args[3], no))
    except (ValueError, PreconditionError) as e:
        raise FormatError(f"invalid constants: {e}", no) from e

    tuples = []
    while pos < len(rows):
        no, args = take("tuple")
        try:
            tuples.append(EvenKTuple(tuple(int(a) for a in args)))
        except ValueError as e:
            raise FormatError("tuple indices must be integers", no) from e
    if len(tuples) != t:
        raise FormatError(f"header announces t={t}, found {len(tuples)} tuples")
    return FkoWitness(n, m, imb, lam, eigvec, TupleCollection(k, d, tuple(tuples)), consts, tuple(comments))


def principle_holds(f: Cnf3, coll: TupleCollection, cap: int = 24) -> bool:
    """
    Comprobación exhaustiva del principio 3XOR para una colección verificada:
    toda asignación deja al menos ceil(t/d) cláusulas sin satisfacer como XOR.
    """
    if f.n > cap:
        raise BudgetExceeded(f"n={f.n} exceeds brute-force cap {cap}")
    need = -(-coll.t // coll.d)
    for block in assignment_blocks(f.n):
        if (f.m - xor_satisfied_counts(f, block) < need).any():
            return False
    return True


def tuples_from_ids(groups: Iterable[Sequence[int]]) -> Tuple[EvenKTuple, ...]:
    return tuple(EvenKTuple(tuple(g)) for g in groups)
