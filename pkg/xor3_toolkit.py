"""
Toolkit del principio 3XOR
Generación de 3CNF, testigos FKO, refutaciones R(quad)/R(lin) y par NP (L, N)
"""

import argparse
import hashlib
import logging
import os
import sys
import tempfile
from dataclasses import replace
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Sequence

from src.cache_manager import ArtifactCache
from src.cnf3 import Cnf3, imbalance, parse_dimacs, sample_random, write_dimacs
from src.config import Config, ConfigSchema
from src.encoder import InstanceParams, encode, parse_instance, write_instance
from src.exceptions import BudgetExceeded, ConfigError, FormatError, OracleError, PreconditionError, Xor3Error
from src.linearize import linearize_instance, linearize_proof, parse_prodmap, write_prodmap
from src.nppair import (
    CountingOracle,
    ExternalSeparator,
    PairQuery,
    SeparatorVerdict,
    bruteforce_separator,
    deterministic_refute,
    nondet_refute,
)
from src.proofsys import LIN, check_proof, parse_proof, write_proof
from src.refuter import generate_refutation
from src.reporting import SUITES, SelftestContext, frequency_markdown, run_selftest
from src.witness import (
    SearchFailure,
    build_matrix,
    build_witness,
    find_tuples_bruteforce,
    parse_witness,
    spectral_certificate,
    verify_witness,
    write_witness,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


# ========================================
# UTILIDADES DE ARCHIVOS
# ========================================

def read_text(path: str) -> str:
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def write_artifact(text: str, path: Optional[str]) -> None:
    """Escribe un artefacto de forma atómica, o en stdout si no hay ruta."""
    if not path:
        sys.stdout.write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile('w', encoding='utf-8', dir=target.parent,
                                     prefix=f".{target.name}.", delete=False) as tmp:
        tmp.write(text)
    os.replace(tmp.name, target)


def formula_fingerprint(f: Cnf3) -> str:
    """sha256 of the formula without its comments."""
    return hashlib.sha256(write_dimacs(Cnf3(f.n, f.clauses)).encode('utf-8')).hexdigest()


# ========================================
# ORQUESTADOR PRINCIPAL
# ========================================

class Xor3Toolkit:
    """Orquestador de los subcomandos del toolkit."""

    def __init__(self, config: ConfigSchema):
        """
        Args:
            config: Configuración ya validada
        """
        self.config = config
        self.logger = self._setup_logging()
        self.cache = ArtifactCache(ttl_hours=config.cache_ttl_hours) if config.use_cache else None

    def _setup_logging(self) -> logging.Logger:
        """Configura el sistema de logging; stdout queda libre para los artefactos."""
        level = getattr(logging, self.config.log_level)
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)

        file_handler = logging.FileHandler(Config.LOG_FILE, encoding='utf-8')
        file_handler.setLevel(level)

        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        console_handler.setFormatter(formatter)
        file_handler.setFormatter(formatter)

        logging.basicConfig(level=level, handlers=[console_handler, file_handler], force=True)
        return logging.getLogger(self.__class__.__name__)

    @property
    def echo(self) -> str:
        return self.config.echo()

    # ---- 3CNF y testigos ----

    def gen(self, args) -> int:
        f = sample_random(args.n, args.m, self.config.seed)
        f = Cnf3(f.n, f.clauses, f.comments + (self.echo,))
        write_artifact(write_dimacs(f), args.output)
        self.logger.info("Fórmula aleatoria generada: n=%d m=%d seed=%d", f.n, f.m, self.config.seed)
        return EXIT_OK

    def stats(self, args) -> int:
        f = parse_dimacs(read_text(args.formula))
        cert = spectral_certificate(f, self.config.constants(), self.config.matrix_convention,
                                    self.config.max_iter, self.config.precision_bits)
        print(f"n          {f.n}")
        print(f"m          {f.m}")
        print(f"imbalance  {imbalance(f)}")
        print(f"lambda     {cert.lam} (~{float(cert.lam):.6f})")
        print(f"residual   {float(cert.residual()):.3e} <= {cert.tol}")
        if args.matrix:
            for row in build_matrix(f, self.config.matrix_convention):
                print(" ".join(f"{x!s:>6}" for x in row))
        return EXIT_OK

    def witness_find(self, args) -> int:
        f = parse_dimacs(read_text(args.formula))
        found = find_tuples_bruteforce(f, args.k, args.t, args.d, self.config.search_budget)
        if isinstance(found, SearchFailure):
            self.logger.error("Búsqueda fallida: %s (%d/%d tuplas)", found.reason, found.found, args.t)
            return EXIT_BUDGET if found.reason == "budget exhausted" else EXIT_INVALID
        witness = build_witness(f, found, self.config.constants(), self.config.matrix_convention,
                                self.config.max_iter, self.config.precision_bits)
        report = verify_witness(f, witness, self.config.matrix_convention)
        if not report.ok:
            self.logger.warning("Testigo construido pero no verificado: %s", report)
        witness = replace(witness, comments=(self.echo,))
        write_artifact(write_witness(witness), args.output)
        return EXIT_OK if report.ok else EXIT_INVALID

    def witness_verify(self, args) -> int:
        f = parse_dimacs(read_text(args.formula))
        witness = parse_witness(read_text(args.witness))
        report = verify_witness(f, witness, self.config.matrix_convention)
        print(report)
        return EXIT_OK if report.ok else EXIT_INVALID

    # ---- codificación y pruebas ----

    def _params(self, args) -> InstanceParams:
        if getattr(args, 'instance', None):
            inst = parse_instance(read_text(args.instance))
            if inst.family6_parity != "odd" or inst.relax_family10:
                raise PreconditionError("refutations exist only for the standard encoding")
            return inst.params
        missing = [name for name in ('n', 'm', 'k', 't', 'd') if getattr(args, name) is None]
        if missing:
            raise PreconditionError(f"missing --{', --'.join(missing)} (or --instance)")
        return InstanceParams(args.n, args.m, args.k, args.t, args.d)

    def encode(self, args) -> int:
        inst = encode(self._params(args), args.family6, args.relax_family10)
        inst.comments = (self.echo,)
        write_artifact(write_instance(inst), args.output)
        self.logger.info("Instancia %s: %d axiomas, %d variables",
                         inst.params, len(inst.axioms), inst.layout.total)
        return EXIT_OK

    def prove(self, args) -> int:
        p = self._params(args)
        cached = self.cache.get_proof(p) if self.cache else None
        if cached is not None:
            write_artifact(cached["proof"], args.output)
            return EXIT_OK
        result = generate_refutation(p, verify=True, workers=self.config.workers, comments=(self.echo,))
        text = write_proof(result.proof)
        if self.cache:
            self.cache.set_proof(p, text, result.phases)
        for phase, size in result.phases.items():
            self.logger.info("Fase %s: tamaño %d", phase, size)
        write_artifact(text, args.output)
        return EXIT_OK

    def check(self, args) -> int:
        proof = parse_proof(read_text(args.proof))
        inputs = parse_instance(read_text(args.instance)).inputs
        if proof.flavor == LIN:
            if not args.prodmap:
                raise PreconditionError("an R(lin) proof needs --prodmap")
            lmap = parse_prodmap(read_text(args.prodmap))
            inputs = [lmap.disjunction(d) for d in inputs] + lmap.definitions()
        verdict = check_proof(proof, inputs, self.config.workers)
        print(verdict)
        return EXIT_OK if verdict.valid else EXIT_INVALID

    def linearize(self, args) -> int:
        proof = parse_proof(read_text(args.proof))
        inst = parse_instance(read_text(args.instance))
        _, lmap = linearize_instance(inst.inputs, proof)
        lmap.comments = (self.echo,)
        lin = linearize_proof(proof, lmap)
        write_artifact(write_proof(lin), args.output)
        write_artifact(write_prodmap(lmap), args.prodmap)
        self.logger.info("Linealizada: tamaño %d -> %d (%d productos)", proof.size(), lin.size(), len(lmap))
        return EXIT_OK

    # ---- algoritmos de refutación ----

    def _separator(self, f: Cnf3):
        if self.config.separator_command:
            base = ExternalSeparator(self.config.separator_command, self.config.oracle_retries)
        else:
            def base(q: PairQuery) -> SeparatorVerdict:
                return bruteforce_separator(q, self.config.brute_force_cap)
        if not self.cache:
            return base
        fingerprint = formula_fingerprint(f)

        def cached(q: PairQuery) -> SeparatorVerdict:
            bit = self.cache.get_verdict(fingerprint, q.k, q.t, q.d)
            if bit is None:
                bit = base(q).bit
                self.cache.set_verdict(fingerprint, q.k, q.t, q.d, bit)
            return SeparatorVerdict(bit)
        return cached

    def refute_det(self, args) -> int:
        f = parse_dimacs(read_text(args.formula))
        oracle = CountingOracle(self._separator(f))
        result = deterministic_refute(f, oracle, self.config.constants(), self.config.matrix_convention,
                                      self.config.max_iter, self.config.precision_bits)
        self.logger.info("Consultas al separador: %d, veredictos %s", oracle.calls, dict(oracle.verdicts))
        print(result if result.triple is None else f"{result} k={result.triple[0]} t={result.triple[1]} d={result.triple[2]}")
        return EXIT_OK

    def refute_nondet(self, args) -> int:
        f = parse_dimacs(read_text(args.formula))
        result = nondet_refute(f, self.config.constants(), self.config.search_budget,
                               self.config.matrix_convention, self.config.max_iter, self.config.precision_bits)
        print(result)
        if result.witness is not None and args.output:
            witness = replace(result.witness, comments=(self.echo,))
            write_artifact(write_witness(witness), args.output)
        return EXIT_OK

    # ---- autocomprobación ----

    def selftest(self, args) -> int:
        scaling_ns = range(2, args.scaling_max_n + 1) if args.scaling_max_n else None
        ctx = SelftestContext(self.config, args.quick, show_progress=sys.stderr.isatty(), scaling_ns=scaling_ns)
        results = run_selftest(args.suite, args.quick, context=ctx)

        print("=" * 60)
        for res in results:
            print(res)
        if ctx.scaling is not None:
            print()
            print(ctx.scaling.as_markdown())
        if ctx.frequency:
            print()
            print(frequency_markdown(ctx.frequency))
        print("=" * 60)

        if args.report:
            self._write_report(results, ctx)
        return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID

    def _write_report(self, results, ctx: SelftestContext) -> None:
        from src.html_reporter import SelftestReporter  # pylint: disable=import-outside-toplevel
        from src.visualizations import ScalingVisualizer  # pylint: disable=import-outside-toplevel

        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        charts = ScalingVisualizer(self.config.output_dir).generate_all_charts(ctx.scaling, ctx.frequency, timestamp)
        html_path = SelftestReporter(self.config.output_dir).generate_report(
            results, ctx.scaling, ctx.frequency, charts, self.echo, timestamp)
        self.logger.info("Reporte HTML: %s", html_path)


# ========================================
# PUNTO DE ENTRADA
# ========================================

def _add_params(parser: argparse.ArgumentParser, required: bool) -> None:
    for name, help_text in (('n', 'número de variables'), ('m', 'número de cláusulas'),
                            ('k', 'ancho de las tuplas (par)'), ('t', 'número de tuplas'),
                            ('d', 'multiplicidad máxima')):
        parser.add_argument(f'--{name}', type=int, required=required, help=help_text)


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parsea argumentos de línea de comandos."""
    parser = argparse.ArgumentParser(
        prog='xor3_toolkit.py',
        description='Toolkit del principio 3XOR: testigos, refutaciones y par NP disjunto',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Ejemplos de uso:
  %(prog)s gen --n 10 --m 40 --seed 7 -o f.cnf
  %(prog)s witness find f.cnf --k 2 --t 3 --d 1 -o f.fko
  %(prog)s encode --n 2 --m 2 --k 2 --t 1 --d 1 -o micro.xor3
  %(prog)s prove --instance micro.xor3 -o micro.rquad
  %(prog)s check micro.rquad --instance micro.xor3
  %(prog)s selftest --quick --report

Códigos de salida:
  0 válido, 1 inválido, 2 error de uso, 3 presupuesto agotado

Notas:
  - Los argumentos CLI tienen prioridad sobre las variables XOR3_*
  - XOR3_CONFIG indica el archivo .env por defecto
        """
    )

    parser.add_argument('--env-file', type=str, help='Archivo .env (default: variable XOR3_CONFIG)')
    parser.add_argument('--debug', action='store_true', help='Habilitar logs detallados')
    parser.add_argument('--cap', type=int, help='Máximo n para enumeraciones 2^n')
    parser.add_argument('--budget', type=int, help='Presupuesto de búsqueda de tuplas')
    parser.add_argument('--seed', type=int, help='Semilla de toda la aleatoriedad')
    parser.add_argument('--workers', type=int, help='Hilos del verificador de pruebas')
    parser.add_argument('--output-dir', type=str, help='Directorio de reportes')
    parser.add_argument('--no-cache', action='store_true', help='Deshabilitar caché de artefactos')
    parser.add_argument('--clear-cache', action='store_true', help='Limpiar caché antes de ejecutar')
    parser.add_argument('--version', action='version', version='%(prog)s 1.0.0')

    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help='3CNF aleatoria en DIMACS')
    gen.add_argument('--n', type=int, required=True)
    gen.add_argument('--m', type=int, required=True)
    gen.add_argument('-o', '--output')

    stats = sub.add_parser('stats', help='desbalance, matriz y λ')
    stats.add_argument('formula')
    stats.add_argument('--matrix', action='store_true', help='imprimir M(f)')

    witness = sub.add_parser('witness', help='buscar o verificar testigos FKO')
    witness_sub = witness.add_subparsers(dest='action', required=True)
    find = witness_sub.add_parser('find')
    find.add_argument('formula')
    find.add_argument('--k', type=int, default=2)
    find.add_argument('--t', type=int, required=True)
    find.add_argument('--d', type=int, default=1)
    find.add_argument('-o', '--output')
    verify = witness_sub.add_parser('verify')
    verify.add_argument('formula')
    verify.add_argument('witness')

    enc = sub.add_parser('encode', help='codificar Υ')
    _add_params(enc, required=True)
    enc.add_argument('--family6', choices=['odd', 'even'], default='odd')
    enc.add_argument('--relax-family10', action='store_true')
    enc.add_argument('-o', '--output')

    prove = sub.add_parser('prove', help='generar la refutación R(quad)')
    prove.add_argument('--instance')
    _add_params(prove, required=False)
    prove.add_argument('-o', '--output')

    check = sub.add_parser('check', help='verificar una prueba')
    check.add_argument('proof')
    check.add_argument('--instance', required=True)
    check.add_argument('--prodmap', help='mapa de productos para pruebas R(lin)')

    lin = sub.add_parser('linearize', help='traducir R(quad) a R(lin)')
    lin.add_argument('proof')
    lin.add_argument('--instance', required=True)
    lin.add_argument('-o', '--output', required=True)
    lin.add_argument('--prodmap', required=True)

    refute = sub.add_parser('refute', help='algoritmos de refutación')
    refute_sub = refute.add_subparsers(dest='mode', required=True)
    det = refute_sub.add_parser('det', help='con separador (L, N)')
    det.add_argument('formula')
    det.add_argument('--separator', help='comando del separador externo')
    nondet = refute_sub.add_parser('nondet', help='adivinando un testigo')
    nondet.add_argument('formula')
    nondet.add_argument('-o', '--output', help='guardar el testigo encontrado')

    selftest = sub.add_parser('selftest', help='suites de autocomprobación')
    selftest.add_argument('--quick', action='store_true', help='rejillas reducidas')
    selftest.add_argument('--report', action='store_true', help='reporte HTML con gráficos')
    selftest.add_argument('--suite', action='append', choices=SUITES, help='ejecutar solo esta suite')
    selftest.add_argument('--scaling-max-n', type=int, help='mayor n del reporte de escalado')

    return parser.parse_args(argv)


def merge_config_with_args(args: argparse.Namespace) -> ConfigSchema:
    """
    Combina argumentos CLI con variables de entorno.
    Los argumentos CLI tienen prioridad.
    """
    env_file = args.env_file or os.getenv('XOR3_CONFIG')
    overrides = {
        'BRUTE_FORCE_CAP': args.cap,
        'SEARCH_BUDGET': args.budget,
        'SEED': args.seed,
        'WORKERS': args.workers,
        'OUTPUT_DIR': args.output_dir,
        'SEPARATOR_COMMAND': getattr(args, 'separator', None),
    }
    if args.debug:
        overrides['LOG_LEVEL'] = 'DEBUG'
    if args.no_cache:
        overrides['USE_CACHE'] = 'false'
    cfg = Config.load(env_file, overrides)
    cfg.ensure_valid()
    return cfg


COMMANDS = {
    'gen': 'gen',
    'stats': 'stats',
    ('witness', 'find'): 'witness_find',
    ('witness', 'verify'): 'witness_verify',
    'encode': 'encode',
    'prove': 'prove',
    'check': 'check',
    'linearize': 'linearize',
    ('refute', 'det'): 'refute_det',
    ('refute', 'nondet'): 'refute_nondet',
    'selftest': 'selftest',
}


def _handler_name(args: argparse.Namespace) -> str:
    if args.command == 'witness':
        return COMMANDS[('witness', args.action)]
    if args.command == 'refute':
        return COMMANDS[('refute', args.mode)]
    return COMMANDS[args.command]


def main(argv: Optional[List[str]] = None) -> int:
    """Función principal del programa."""
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        config = merge_config_with_args(args)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.clear_cache:
        ArtifactCache(ttl_hours=config.cache_ttl_hours).clear_all()
        print("✓ Caché limpiado exitosamente", file=sys.stderr)

    toolkit = Xor3Toolkit(config)
    try:
        return getattr(toolkit, _handler_name(args))(args)
    except BudgetExceeded as e:
        toolkit.logger.error("Presupuesto agotado: %s", e)
        return EXIT_BUDGET
    except FormatError as e:
        toolkit.logger.error("Artefacto mal formado: %s", e)
        return EXIT_INVALID
    except OracleError as e:
        toolkit.logger.error("Fallo del separador: %s", e)
        return EXIT_INVALID
    except (PreconditionError, OSError) as e:
        toolkit.logger.error("Error de uso: %s", e)
        return EXIT_USAGE
    except Xor3Error as e:
        toolkit.logger.error("Error: %s", e)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
