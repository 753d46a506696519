"""
Tablas de escalado, frecuencia de testigos y suites de autocomprobación.

Cada suite devuelve un SuiteResult; `run_selftest` las ejecuta en orden y el
CLI decide el código de salida a partir de `passed`.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from src.cnf3 import Cnf3, all_clauses, canonical_formulas, is_satisfiable_bruteforce, sample_random
from src.config import ConfigSchema
from src.encoder import Instance, InstanceParams, encode, semantic_oracle
from src.exceptions import BudgetExceeded, ConvergenceError, PreconditionError
from src.linearize import linearize_instance, linearize_proof
from src.nppair import (
    UNSATISFIABLE,
    CountingOracle,
    PairQuery,
    bruteforce_separator,
    deterministic_refute,
    in_L,
    in_N,
    nondet_refute,
    parameter_triples,
)
from src.proofsys import Proof, check_proof, mutate_proof
from src.refuter import generate_refutation
from src.witness import (
    EvenKTuple,
    SearchFailure,
    approx_top_eigenvalue,
    build_matrix,
    check_collection,
    check_prop_3_2,
    find_tuples_bruteforce,
    is_even_tuple,
    is_inconsistent,
    principle_holds,
    top_root_bisection,
)

logger = logging.getLogger(__name__)

SUITES = ("refutations", "mutations", "oracle", "principle", "prop32", "disjoint",
          "linearize", "spectral", "soundness", "scaling")

DEFAULT_SCALING_NS = tuple(range(2, 9))
QUICK_SCALING_NS = (2, 3, 4)
MAX_SCALING_RESIDUAL = 0.2
MAX_LINEAR_RATIO = 3


# ========================================
# ESCALADO DEL TAMAÑO DE PRUEBA
# ========================================

@dataclass
class ScalingRow:
    n: int
    lines: int
    size: int
    phases: Dict[str, int] = field(default_factory=dict)


@dataclass
class ScalingTable:
    """Proof sizes per n and the least-squares fit size ≈ C·n^e."""
    rows: List[ScalingRow]
    coefficient: float
    exponent: float
    max_residual: float

    def predicted(self, n: int) -> float:
        return self.coefficient * n ** self.exponent

    def as_markdown(self) -> str:
        phases = sorted({name for row in self.rows for name in row.phases})
        head = "| n | lines | size | " + " | ".join(phases) + " |"
        out = [head, "|" + "---|" * (3 + len(phases))]
        for row in self.rows:
            cells = [str(row.n), str(row.lines), str(row.size)] + [str(row.phases.get(p, 0)) for p in phases]
            out.append("| " + " | ".join(cells) + " |")
        out.append("")
        out.append(f"fit: size = {self.coefficient:.3f} * n^{self.exponent:.3f}, "
                   f"max relative residual {self.max_residual:.3f}")
        return "\n".join(out)


def fit_power_law(ns: Sequence[int], sizes: Sequence[int]) -> Tuple[float, float, float]:
    """
    Least squares on log size = log C + e·log n.

    Returns:
        (C, e, max relative residual |C·n^e − size| / size)

    Raises:
        PreconditionError: fewer than two distinct n
    """
    if len(set(ns)) < 2:
        raise PreconditionError("a power-law fit needs at least two distinct n")
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(sizes, dtype=float))
    exponent, log_c = np.polyfit(x, y, 1)
    coefficient = float(np.exp(log_c))
    predicted = coefficient * np.asarray(ns, dtype=float) ** exponent
    actual = np.asarray(sizes, dtype=float)
    residual = float(np.max(np.abs(predicted - actual) / actual))
    return coefficient, float(exponent), residual


def size_scaling(ns: Iterable[int], k: int = 2, t: int = 2, d: int = 2,  # pylint: disable=too-many-arguments,too-many-positional-arguments
                 verify: bool = True, workers: int = 1,
                 show_progress: bool = False) -> ScalingTable:
    """Generate the refutation for (n, m=n, k, t, d) over each n and fit the sizes."""
    rows = []
    for n in tqdm(list(ns), desc="scaling", disable=not show_progress):
        result = generate_refutation(InstanceParams(n, n, k, t, d), verify=verify, workers=workers)
        rows.append(ScalingRow(n, result.line_count, result.size, dict(result.phases)))
        logger.info("n=%d: %d lines, size %d", n, result.line_count, result.size)
    coefficient, exponent, residual = fit_power_law([r.n for r in rows], [r.size for r in rows])
    return ScalingTable(rows, coefficient, exponent, residual)


# ========================================
# FRECUENCIA DE TESTIGOS
# ========================================

@dataclass
class FrequencyRow:
    n: int
    density: int
    trials: int
    found: int

    @property
    def fraction(self) -> float:
        return self.found / self.trials if self.trials else 0.0


def _seeds(seed: int) -> Iterator[int]:
    rng = np.random.default_rng(seed)
    while True:
        yield int(rng.integers(0, 2 ** 31 - 1))


def witness_frequency(n_values: Iterable[int], densities: Iterable[int], trials: int,  # pylint: disable=too-many-arguments,too-many-positional-arguments
                      seed: int, cfg: Optional[ConfigSchema] = None,
                      show_progress: bool = False) -> List[FrequencyRow]:
    """Fraction of random 3CNFs (m = density·n) on which nondet_refute verifies a witness."""
    cfg = cfg or ConfigSchema()
    consts = cfg.constants()
    seeds = _seeds(seed)
    table = []
    grid = [(n, rho) for n in n_values for rho in densities]
    for n, rho in tqdm(grid, desc="witness frequency", disable=not show_progress):
        row = FrequencyRow(n, rho, trials, 0)
        for _ in range(trials):
            f = sample_random(n, rho * n, next(seeds))
            result = nondet_refute(f, consts, cfg.search_budget, cfg.matrix_convention,
                                   cfg.max_iter, cfg.precision_bits)
            row.found += result.verdict == UNSATISFIABLE
        table.append(row)
        logger.info("n=%d m/n=%d: witness in %d/%d formulas", n, rho, row.found, trials)
    return table


def frequency_markdown(table: Sequence[FrequencyRow]) -> str:
    out = ["| n | m/n | trials | witnesses | fraction |", "|---|---|---|---|---|"]
    out += [f"| {r.n} | {r.density} | {r.trials} | {r.found} | {r.fraction:.2f} |" for r in table]
    return "\n".join(out)


# ========================================
# SUITES
# ========================================

@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0

    def fail(self, message: str) -> None:
        self.failures.append(message)
        logger.error("[%s] %s", self.name, message)

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{self.name}: {status} ({self.checked} checks, {self.seconds:.1f}s)"
        if self.failures:
            text += f" first failure: {self.failures[0]}"
        return text


def micro_grid(quick: bool = False) -> List[InstanceParams]:
    """n, m ∈ {2,3}, k = 2, t, d ∈ {1,2}; the quick grid keeps n = m = 2."""
    sizes = (2,) if quick else (2, 3)
    return [InstanceParams(n, m, 2, t, d) for n in sizes for m in sizes for t in (1, 2) for d in (1, 2)]


class SelftestContext:
    """Shared state across suites: configuration, rng and generated proofs."""

    def __init__(self, cfg: ConfigSchema, quick: bool = False, show_progress: bool = False,
                 scaling_ns: Optional[Sequence[int]] = None):
        self.cfg = cfg
        self.quick = quick
        self.show_progress = show_progress
        self.scaling_ns = tuple(scaling_ns) if scaling_ns else (QUICK_SCALING_NS if quick else DEFAULT_SCALING_NS)
        self.rng = np.random.default_rng(cfg.seed)
        self.logger = logging.getLogger(self.__class__.__name__)
        self._proofs: Dict[InstanceParams, Tuple[Instance, Proof]] = {}
        self.scaling: Optional[ScalingTable] = None
        self.frequency: List[FrequencyRow] = []

    def pick(self, quick_value, full_value):
        return quick_value if self.quick else full_value

    def progress(self, items, desc: str):
        return tqdm(items, desc=desc, disable=not self.show_progress)

    def refutation(self, p: InstanceParams) -> Tuple[Instance, Proof]:
        if p not in self._proofs:
            result = generate_refutation(p, verify=False, workers=self.cfg.workers)
            self._proofs[p] = (encode(p), result.proof)
        return self._proofs[p]

    def next_seed(self) -> int:
        return int(self.rng.integers(0, 2 ** 31 - 1))


def suite_refutations(ctx: SelftestContext, res: SuiteResult) -> None:
    for p in ctx.progress(micro_grid(ctx.quick), "refutations"):
        inst, proof = ctx.refutation(p)
        verdict = check_proof(proof, inst.inputs, ctx.cfg.workers)
        res.checked += 1
        res.details[str(p)] = {"lines": len(proof.lines), "size": proof.size()}
        if not verdict.is_refutation:
            res.fail(f"{p}: {verdict}")


def suite_mutations(ctx: SelftestContext, res: SuiteResult) -> None:
    per_proof = ctx.pick(10, 100)
    for p in ctx.progress(micro_grid(ctx.quick), "mutations"):
        inst, proof = ctx.refutation(p)
        for _ in range(per_proof):
            mutated, line_id, kind = mutate_proof(proof, inst.inputs, ctx.rng)
            verdict = check_proof(mutated, inst.inputs)
            res.checked += 1
            if verdict.valid or verdict.failed_id != line_id:
                res.fail(f"{p}: {kind} mutation at line {line_id} gave '{verdict}'")


def suite_oracle(ctx: SelftestContext, res: SuiteResult) -> None:
    for p in ctx.progress(micro_grid(ctx.quick), "oracle"):
        try:
            answer = semantic_oracle(p, ctx.cfg.oracle_budget)
        except BudgetExceeded as e:
            res.fail(f"{p}: {e}")
            continue
        res.checked += 1
        res.details[str(p)] = answer.explored
        if answer.sat:
            res.fail(f"{p}: oracle found a model")


def suite_principle(ctx: SelftestContext, res: SuiteResult) -> None:
    target = ctx.pick(50, 1000)
    attempts = 0
    per_k = {2: 0, 4: 0}
    with tqdm(total=target, desc="principle", disable=not ctx.show_progress) as bar:
        while res.checked < target and attempts < 40 * target:
            attempts += 1
            # odd draws use 4-tuples, which random formulas only carry at small n
            k = 4 if attempts % 2 else 2
            n = int(ctx.rng.integers(4, 7 if k == 4 else 11))
            f = sample_random(n, 4 * n, ctx.next_seed())
            d = int(ctx.rng.integers(1, 3))
            found = find_tuples_bruteforce(f, k, int(ctx.rng.integers(1, 4)), d, ctx.cfg.search_budget)
            if isinstance(found, SearchFailure) or not check_collection(f, found).ok:
                continue
            res.checked += 1
            per_k[k] += 1
            bar.update(1)
            if not principle_holds(f, found, ctx.cfg.brute_force_cap):
                res.fail(f"n={n} k={k} t={found.t} d={d}: an assignment beats ceil(t/d)")
    res.details["attempts"] = attempts
    res.details.update({f"k={k}": count for k, count in per_k.items()})
    if not per_k[4]:
        res.fail("no verified collection of 4-tuples")
    if res.checked < target:
        res.fail(f"only {res.checked}/{target} verified collections in {attempts} draws")


def _inconsistent_tuples(n: int, k: int) -> Iterator[Cnf3]:
    for clauses in combinations(all_clauses(n), k):
        f = Cnf3(n, clauses)
        tup = EvenKTuple(tuple(range(1, k + 1)))
        if is_even_tuple(f, tup) and is_inconsistent(f, tup):
            yield f


def suite_prop32(ctx: SelftestContext, res: SuiteResult) -> None:
    for n in ctx.pick((3,), (3, 4)):
        for k in (2, 4):
            count = 0
            for f in _inconsistent_tuples(n, k):
                count += 1
                if not check_prop_3_2(f, EvenKTuple(tuple(range(1, k + 1))), ctx.cfg.brute_force_cap):
                    res.fail(f"n={n} k={k}: {f.to_ints()} is XOR-satisfiable")
            res.checked += count
            res.details[f"n={n} k={k}"] = count


def _disjoint_formulas(ctx: SelftestContext) -> Iterator[Cnf3]:
    # one formula per class under variable permutation and sign flips;
    # L and N membership are both invariant under these maps
    for n, max_m in ctx.pick(((3, 4), (4, 3)), ((3, 4), (4, 4), (5, 4))):
        yield from canonical_formulas(n, max_m)


def suite_disjoint(ctx: SelftestContext, res: SuiteResult) -> None:
    consts = ctx.cfg.constants()
    for f in ctx.progress(_disjoint_formulas(ctx), "disjoint"):
        for k, t, d in parameter_triples(f.n, consts):
            if t > f.m * d:
                continue
            q = PairQuery(f, k, t, d, consts)
            res.checked += 1
            if in_N(q, ctx.cfg.brute_force_cap) and in_L(q, ctx.cfg.search_budget):
                res.fail(f"{f.to_ints()} k={k} t={t} d={d} lies in L and N")


def suite_linearize(ctx: SelftestContext, res: SuiteResult) -> None:
    worst = 0.0
    for p in ctx.progress(micro_grid(ctx.quick), "linearize"):
        inst, proof = ctx.refutation(p)
        lin_axioms, lmap = linearize_instance(inst.inputs, proof)
        lin = linearize_proof(proof, lmap)
        verdict = check_proof(lin, lin_axioms, ctx.cfg.workers)
        ratio = lin.size() / proof.size()
        worst = max(worst, ratio)
        res.checked += 1
        if not verdict.is_refutation:
            res.fail(f"{p}: linearized proof {verdict}")
        elif ratio > MAX_LINEAR_RATIO:
            res.fail(f"{p}: size ratio {ratio:.2f} > {MAX_LINEAR_RATIO}")
    res.details["worst_ratio"] = round(worst, 3)


def suite_spectral(ctx: SelftestContext, res: SuiteResult) -> None:
    count = ctx.pick(5, 50)
    for i in ctx.progress(range(count), "spectral"):
        # the first draws stay small enough for the characteristic polynomial check
        n = 3 + i % 4 if i < 10 else int(ctx.rng.integers(7, ctx.pick(13, 51)))
        f = sample_random(n, 4 * n, ctx.next_seed())
        M = build_matrix(f, ctx.cfg.matrix_convention)
        tol = Fraction(1, n)
        try:
            cert = approx_top_eigenvalue(M, tol, ctx.cfg.max_iter, ctx.cfg.precision_bits)
        except ConvergenceError as e:
            res.fail(f"n={n}: {e}")
            continue
        res.checked += 1
        if cert.residual() > tol:
            res.fail(f"n={n}: residual {cert.residual()} > 1/{n}")
        if n <= 6:
            grid = Fraction(1, 10 * n)
            root = top_root_bisection(M, grid)
            if abs(cert.lam - root) > tol + grid:
                res.fail(f"n={n}: lambda {float(cert.lam):.6f} vs top root {float(root):.6f}")


def suite_soundness(ctx: SelftestContext, res: SuiteResult) -> None:
    consts = ctx.cfg.constants()
    count = ctx.pick(30, 1000)
    top = ctx.pick(10, 16)
    oracle = CountingOracle(lambda q: bruteforce_separator(q, ctx.cfg.brute_force_cap))
    answered = 0
    for _ in ctx.progress(range(count), "soundness"):
        n = int(ctx.rng.integers(3, top + 1))
        rho = int(ctx.rng.choice((4, 6, 8)))
        f = sample_random(n, rho * n, ctx.next_seed())
        try:
            result = deterministic_refute(f, oracle, consts, ctx.cfg.matrix_convention,
                                          ctx.cfg.max_iter, ctx.cfg.precision_bits)
        except ConvergenceError as e:
            res.fail(f"n={n} m={f.m}: {e}")
            continue
        res.checked += 1
        if result.verdict == UNSATISFIABLE:
            answered += 1
            satisfiable, _ = is_satisfiable_bruteforce(f, ctx.cfg.brute_force_cap)
            if satisfiable:
                res.fail(f"n={n} m={f.m}: satisfiable formula refuted at {result.triple}")
    res.details.update({"unsatisfiable_answers": answered, "oracle_calls": oracle.calls,
                        "verdicts": dict(oracle.verdicts)})
    ctx.frequency = witness_frequency(ctx.pick((8,), (8, 10, 12)), (4, 6, 8), ctx.pick(2, 5),
                                      ctx.next_seed(), ctx.cfg, ctx.show_progress)
    res.details["witness_frequency"] = frequency_markdown(ctx.frequency)


def suite_scaling(ctx: SelftestContext, res: SuiteResult) -> None:
    table = size_scaling(ctx.scaling_ns, verify=False, workers=ctx.cfg.workers,
                         show_progress=ctx.show_progress)
    ctx.scaling = table
    res.checked = len(table.rows)
    res.details.update({"coefficient": table.coefficient, "exponent": table.exponent,
                        "max_residual": table.max_residual, "table": table.as_markdown()})
    if table.max_residual > MAX_SCALING_RESIDUAL:
        res.fail(f"fit residual {table.max_residual:.3f} > {MAX_SCALING_RESIDUAL}")


SUITE_RUNNERS: Dict[str, Callable[[SelftestContext, SuiteResult], None]] = {
    "refutations": suite_refutations,
    "mutations": suite_mutations,
    "oracle": suite_oracle,
    "principle": suite_principle,
    "prop32": suite_prop32,
    "disjoint": suite_disjoint,
    "linearize": suite_linearize,
    "spectral": suite_spectral,
    "soundness": suite_soundness,
    "scaling": suite_scaling,
}


def run_selftest(suites: Optional[Sequence[str]] = None, quick: bool = False,  # pylint: disable=too-many-arguments,too-many-positional-arguments
                 cfg: Optional[ConfigSchema] = None, show_progress: bool = False,
                 scaling_ns: Optional[Sequence[int]] = None,
                 context: Optional[SelftestContext] = None) -> List[SuiteResult]:
    """
    Run the named suites (all of them by default) in their canonical order.

    Raises:
        PreconditionError: unknown suite name
    """
    wanted = list(suites) if suites else list(SUITES)
    unknown = [name for name in wanted if name not in SUITE_RUNNERS]
    if unknown:
        raise PreconditionError(f"unknown selftest suite(s): {', '.join(unknown)}")
    ctx = context or SelftestContext(cfg or ConfigSchema(), quick, show_progress, scaling_ns)
    results = []
    for name in SUITES:
        if name not in wanted:
            continue
        res = SuiteResult(name)
        start = time.perf_counter()
        logger.info("Running suite %s%s", name, " (quick)" if quick else "")
        SUITE_RUNNERS[name](ctx, res)
        res.seconds = time.perf_counter() - start
        logger.info("%s", res)
        results.append(res)
    return results
