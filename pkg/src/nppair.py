"""
Par NP disjunto (L, N) y algoritmo de refutación determinista con oráculo separador.

L: existen t k-tuplas pares inconsistentes con multiplicidad ≤ d.
N: alguna asignación satisface más de m − ⌈t/d⌉ cláusulas como 3XOR
   (la misma cota que la familia 10 de Υ).
Por el principio 3XOR, L ∩ N = ∅.
"""

from __future__ import annotations

import logging
import shlex
import subprocess
import tempfile
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, wraps
from pathlib import Path
from typing import Callable, Iterator, List, Optional, Protocol, Tuple

from src.cnf3 import DEFAULT_CAP, Cnf3, imbalance, max_3xor_satisfied, write_dimacs
from src.exceptions import OracleError, PreconditionError
from src.witness import (
    ConstantsConfig,
    FkoWitness,
    SearchFailure,
    check_inequality,
    exists_collection,
    find_tuples_bruteforce,
    spectral_certificate,
    verify_witness,
)

logger = logging.getLogger(__name__)

UNSATISFIABLE = "unsatisfiable"
DONT_KNOW = "don't know"


def retry_with_backoff(
    max_retries: int = 3,
    initial_delay: float = 1.0,
    backoff_factor: float = 2.0,
    exceptions: tuple = (Exception,)
):
    """
    Decorador para reintentar funciones con backoff exponencial.

    El número de reintentos se lee de `self.retries` cuando existe, de modo
    que cada separador externo usa el valor configurado.

    Args:
        max_retries: Número máximo de reintentos por defecto
        initial_delay: Delay inicial en segundos
        backoff_factor: Factor de multiplicación del delay
        exceptions: Tupla de excepciones a capturar

    Returns:
        Función decorada con retry
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            owner = args[0] if args else None
            retries = getattr(owner, 'retries', max_retries)
            delay = getattr(owner, 'initial_delay', initial_delay)
            last_exception = None

            for attempt in range(retries + 1):
                try:
                    return func(*args, **kwargs)
                except exceptions as e:
                    last_exception = e
                    if attempt < retries:
                        if hasattr(owner, 'logger'):
                            owner.logger.warning(
                                "Error en %s (intento %d/%d): %s. Reintentando en %.1fs...",
                                func.__name__, attempt + 1, retries + 1, e, delay
                            )
                        time.sleep(delay)
                        delay *= backoff_factor
                    elif hasattr(owner, 'logger'):
                        owner.logger.error(
                            "Error en %s después de %d intentos: %s",
                            func.__name__, retries + 1, e
                        )

            raise last_exception

        return wrapper
    return decorator


# ========================================
# LÍMITES DE PARÁMETROS
# ========================================

def root5_floor(c: Fraction, n: int) -> int:
    """⌊c·n^{1/5}⌋ exacto: el mayor x ≥ 0 con x^5 ≤ c^5·n."""
    if n < 0 or c < 0:
        raise PreconditionError("fifth-root bound needs c >= 0 and n >= 0")
    target = Fraction(c) ** 5 * n
    lo, hi = 0, 1
    while Fraction(hi) ** 5 <= target:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if Fraction(mid) ** 5 <= target:
            lo = mid
        else:
            hi = mid
    return lo


def parameter_bounds(n: int, consts: ConstantsConfig) -> Tuple[int, int, int]:
    """(k máx, t máx, d máx) permitidos para una fórmula sobre n variables."""
    return root5_floor(consts.c0, n), n * n - 1, root5_floor(consts.c1, n)


def parameter_triples(n: int, consts: ConstantsConfig) -> Iterator[Tuple[int, int, int]]:
    """Todas las ternas (k, t, d) admisibles: d ascendente, luego k (par), luego t."""
    k_max, t_max, d_max = parameter_bounds(n, consts)
    for d in range(1, d_max + 1):
        for k in range(2, k_max + 1, 2):
            for t in range(1, t_max + 1):
                yield k, t, d


@dataclass(frozen=True)
class PairQuery:
    """⟨f, k, t, d⟩ con las cotas de los parámetros comprobadas al construirla."""
    f: Cnf3
    k: int
    t: int
    d: int
    constants: ConstantsConfig = ConstantsConfig()

    def __post_init__(self):
        k_max, t_max, d_max = parameter_bounds(self.f.n, self.constants)
        if self.k < 2 or self.k % 2:
            raise PreconditionError(f"k must be even and >= 2, got {self.k}")
        if self.k > k_max:
            raise PreconditionError(f"k={self.k} exceeds c0*n^0.2 bound {k_max}")
        if not 1 <= self.t <= t_max:
            raise PreconditionError(f"t={self.t} outside 1..n^2-1 ({t_max})")
        if not 1 <= self.d <= d_max:
            raise PreconditionError(f"d={self.d} outside 1..c1*n^0.2 ({d_max})")

    @property
    def threshold(self) -> int:
        """m − ⌈t/d⌉ + 1: una asignación de N satisface más de m − ⌈t/d⌉ cláusulas como 3XOR."""
        return self.f.m - (-(-self.t // self.d)) + 1


@dataclass(frozen=True)
class SeparatorVerdict:
    """Salida de un separador (L, N): 1 significa fuera de L, 0 fuera de N."""
    bit: int

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise OracleError(f"separator verdict must be 0 or 1, got {self.bit!r}")


class Separator(Protocol):  # pylint: disable=too-few-public-methods
    def __call__(self, q: PairQuery) -> SeparatorVerdict: ...


# ========================================
# MEMBRESÍA
# ========================================

def in_L(q: PairQuery, budget: int) -> bool:  # pylint: disable=invalid-name
    """
    Pertenencia exacta a L por backtracking completo sobre tuplas inconsistentes.

    Raises:
        BudgetExceeded: más de `budget` nodos de búsqueda
    """
    return exists_collection(q.f, q.k, q.t, q.d, budget) is not None


@lru_cache(maxsize=256)
def _max_satisfied(f: Cnf3, cap: int) -> int:
    return max_3xor_satisfied(f, cap)


def in_N(q: PairQuery, cap: int = DEFAULT_CAP) -> bool:  # pylint: disable=invalid-name
    """
    Pertenencia exacta a N por enumeración de las 2^n asignaciones.

    Raises:
        BudgetExceeded: n > cap
    """
    return _max_satisfied(q.f, cap) >= q.threshold


def bruteforce_separator(q: PairQuery, cap: int = DEFAULT_CAP) -> SeparatorVerdict:
    return SeparatorVerdict(1 if in_N(q, cap) else 0)


@dataclass
class CountingOracle:
    """Envuelve un separador y cuenta llamadas y veredictos."""
    oracle: Callable[[PairQuery], SeparatorVerdict]
    calls: int = 0
    verdicts: Counter = field(default_factory=Counter)

    def __call__(self, q: PairQuery) -> SeparatorVerdict:
        verdict = self.oracle(q)
        self.calls += 1
        self.verdicts[verdict.bit] += 1
        return verdict


class ExternalSeparator:
    """
    Separador respaldado por un comando externo.

    Protocolo: el DIMACS va a un archivo temporal, la línea
    `n m k t d <path>` va por stdin y la respuesta es `0` o `1` por stdout.
    """

    def __init__(self, command: str, retries: int = 3, timeout: float = 60.0, initial_delay: float = 1.0):
        if not command.strip():
            raise PreconditionError("external separator needs a command")
        self.command = shlex.split(command)
        self.retries = retries
        self.timeout = timeout
        self.initial_delay = initial_delay
        self.logger = logging.getLogger(self.__class__.__name__)

    def __call__(self, q: PairQuery) -> SeparatorVerdict:
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "query.cnf"
            path.write_text(write_dimacs(q.f), encoding="utf-8")
            return self._ask(f"{q.f.n} {q.f.m} {q.k} {q.t} {q.d} {path}\n")

    @retry_with_backoff(exceptions=(OracleError, OSError, subprocess.SubprocessError))
    def _ask(self, request: str) -> SeparatorVerdict:
        result = subprocess.run(self.command, input=request, capture_output=True, text=True,
                                timeout=self.timeout, check=False)
        if result.returncode != 0:
            raise OracleError(f"separator exited with {result.returncode}: {result.stderr.strip()}")
        reply = result.stdout.strip()
        if reply not in ("0", "1"):
            raise OracleError(f"malformed separator reply {reply!r}")
        return SeparatorVerdict(int(reply))


# ========================================
# ALGORITMOS DE REFUTACIÓN
# ========================================

@dataclass
class RefuteResult:
    """Veredicto, la terna que lo decidió y el registro por terna."""
    verdict: str
    triple: Optional[Tuple[int, int, int]] = None
    witness: Optional[FkoWitness] = None
    log: List[Tuple[int, int, int, int]] = field(default_factory=list)

    def __str__(self) -> str:
        return self.verdict


def deterministic_refute(f: Cnf3, oracle: Separator,  # pylint: disable=too-many-arguments,too-many-positional-arguments
                         consts: ConstantsConfig, convention: str = "formula",
                         max_iter: int = 10000, precision_bits: int = 64) -> RefuteResult:
    """
    Ejecuta el separador sobre cada (k, t, d) admisible.

    Con veredicto 0 (f ∉ N) se comprueba la desigualdad del testigo
    t > d(I + λn)/2 + b/n^c con I y λ recalculados desde f; el primer éxito
    responde 'unsatisfiable'.
    """
    result = RefuteResult(DONT_KNOW)
    if f.n < 1 or f.m == 0:
        return result
    I = imbalance(f)  # pylint: disable=invalid-name
    lam = spectral_certificate(f, consts, convention, max_iter, precision_bits).lam
    for k, t, d in parameter_triples(f.n, consts):
        verdict = oracle(PairQuery(f, k, t, d, consts))
        result.log.append((k, t, d, verdict.bit))
        logger.info("Triple k=%d t=%d d=%d: separator says %d", k, t, d, verdict.bit)
        if verdict.bit == 0 and check_inequality(t, d, I, lam, f.n, consts):
            result.verdict, result.triple = UNSATISFIABLE, (k, t, d)
            return result
    return result


def nondet_refute(f: Cnf3, consts: ConstantsConfig, budget: int = 10 ** 6,  # pylint: disable=too-many-arguments,too-many-positional-arguments
                  convention: str = "formula", max_iter: int = 10000,
                  precision_bits: int = 64) -> RefuteResult:
    """
    Adivina un testigo por fuerza bruta: 'unsatisfiable' si y solo si alguno verifica.

    La búsqueda voraz de tuplas es monótona por prefijos en t, así que una sola
    búsqueda por (d, k) con objetivo n^2 − 1 da la mayor colección alcanzable.
    """
    result = RefuteResult(DONT_KNOW)
    if f.n < 1 or f.m == 0:
        return result
    I = imbalance(f)  # pylint: disable=invalid-name
    cert = spectral_certificate(f, consts, convention, max_iter, precision_bits)
    k_max, t_max, d_max = parameter_bounds(f.n, consts)
    for d in range(1, d_max + 1):
        for k in range(2, k_max + 1, 2):
            widest = find_tuples_bruteforce(f, k, t_max, d, budget)
            t = widest.found if isinstance(widest, SearchFailure) else widest.t
            usable = t > 0 and check_inequality(t, d, I, cert.lam, f.n, consts)
            result.log.append((k, t, d, int(usable)))
            if not usable:
                continue
            found = find_tuples_bruteforce(f, k, t, d, budget) if isinstance(widest, SearchFailure) else widest
            if isinstance(found, SearchFailure):
                continue
            witness = FkoWitness(f.n, f.m, I, cert.lam, cert.eigvec, found, consts)
            if verify_witness(f, witness, convention).ok:
                result.verdict, result.triple, result.witness = UNSATISFIABLE, (k, t, d), witness
                logger.info("Verified witness with k=%d t=%d d=%d", k, t, d)
                return result
    return result
