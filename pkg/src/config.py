"""Configuracion centralizada del toolkit con validación y carga controlada.

`ConfigSchema` agrupa los límites de fuerza bruta, las constantes del testigo
FKO y las rutas de salida. `Config` actúa como fachada: `Config.load()` lee
variables de entorno (prefijo XOR3_) o un archivo `.env` explícito y
sincroniza los atributos de clase para el código que los consulta directamente.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv

from src.exceptions import ConfigError

MATRIX_CONVENTIONS = ("formula", "prose")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _parse_bool(value: str | bool | None, default: bool = False) -> bool:
    if isinstance(value, bool):
        return value
    if value is None:
        return default
    return str(value).lower() in ("1", "true", "yes", "on")


@dataclass
class ConfigSchema:  # pylint: disable=too-many-instance-attributes
    """Configuration schema with validation for every toolkit setting.

    Attributes:
        brute_force_cap: largest n accepted by 2^n enumerations
        oracle_budget: largest semantic decision space for the encoder oracle
        search_budget: number of candidate tuples a witness search may inspect
        seed: root seed for every random draw
        constant_b, constant_c: the b/n^c slack in the witness inequality
        constant_c0, constant_c1: bounds k <= c0*n^0.2 and d <= c1*n^0.2
        matrix_convention: 'formula' (M_ij = (d-s)/2) or 'prose' (negated)
        precision_bits: rounding grid 2^-p used by the power iteration
        max_iter: power iteration limit
        separator_command: shell command of the external (L,N) separator
        oracle_retries: retries of a failing external separator call
        workers: thread count for parallel checks
        output_dir: directory for reports and charts
        use_cache: whether generated proofs are cached
        cache_ttl_hours: cache time-to-live in hours
        log_level: logging level name
    """
    brute_force_cap: int = 24
    oracle_budget: int = 10 ** 10
    search_budget: int = 10 ** 6
    seed: int = 0

    # Witness constants
    constant_b: int = 1
    constant_c: int = 1
    constant_c0: Fraction = Fraction(2)
    constant_c1: Fraction = Fraction(2)
    matrix_convention: str = "formula"

    # External separator
    separator_command: str = ""
    oracle_retries: int = 3

    # Spectral
    precision_bits: int = 64
    max_iter: int = 10000

    workers: int = 1
    output_dir: str = "xor3_reports"

    # Cache
    use_cache: bool = True
    cache_ttl_hours: int = 24

    log_level: str = "INFO"

    def __post_init__(self):
        self.constant_c0 = Fraction(self.constant_c0)
        self.constant_c1 = Fraction(self.constant_c1)
        self.matrix_convention = (self.matrix_convention or "formula").lower()
        self.log_level = (self.log_level or "INFO").upper()

        for name in ("brute_force_cap", "oracle_budget", "search_budget",
                     "precision_bits", "max_iter", "workers"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name.upper()} must be positive")
        if self.oracle_retries < 0:
            raise ValueError("ORACLE_RETRIES must be non-negative")
        if self.seed < 0:
            raise ValueError("SEED must be non-negative")
        if self.constant_b < 0:
            raise ValueError("CONSTANT_B must be non-negative")
        if self.constant_c < 1:
            raise ValueError("CONSTANT_C must be >= 1")
        if self.constant_c0 <= 0 or self.constant_c1 <= 0:
            raise ValueError("CONSTANT_C0 and CONSTANT_C1 must be positive")
        if self.matrix_convention not in MATRIX_CONVENTIONS:
            raise ValueError(f"MATRIX_CONVENTION must be one of {MATRIX_CONVENTIONS}")
        if self.log_level not in LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of {LOG_LEVELS}")

    def ensure_valid(self) -> None:
        """Raise ConfigError if this schema is unusable for the cli."""
        errors = []
        if self.brute_force_cap > 40:
            errors.append('BRUTE_FORCE_CAP: above 40 would never finish')
        if self.cache_ttl_hours < 0:
            errors.append('CACHE_TTL_HOURS: negative')
        if not self.output_dir:
            errors.append('OUTPUT_DIR: missing')
        if errors:
            raise ConfigError('Configuration invalid: ' + '; '.join(errors))

    def constants(self):
        """Return the witness ConstantsConfig built from this schema."""
        from src.witness import ConstantsConfig  # pylint: disable=import-outside-toplevel
        return ConstantsConfig(
            b=self.constant_b, c=self.constant_c,
            c0=self.constant_c0, c1=self.constant_c1,
        )

    def echo(self) -> str:
        """Every setting on one line; artifact writers emit it as a comment."""
        parts = []
        for f in fields(self):
            if f.name in ("output_dir", "log_level", "separator_command"):
                continue
            parts.append(f"{f.name}={getattr(self, f.name)}")
        return "config " + " ".join(parts)


class Config:
    """Facade over the loaded configuration.

    Use `Config.load()` to create and validate a configuration instance; the
    UPPERCASE class attributes mirror the last loaded instance.
    """

    BRUTE_FORCE_CAP: int = 24
    ORACLE_BUDGET: int = 10 ** 10
    SEARCH_BUDGET: int = 10 ** 6
    SEED: int = 0
    MATRIX_CONVENTION: str = "formula"
    WORKERS: int = 1

    BASE_DIR: Path = Path(__file__).parent
    OUTPUT_DIR: str = 'xor3_reports'

    LOG_LEVEL: str = 'INFO'
    LOG_FILE: str = 'xor3_toolkit.log'

    _instance: Optional[ConfigSchema] = None

    @classmethod
    def load(cls, env_file: Optional[str] = None, cli_args: Optional[dict] = None) -> ConfigSchema:
        """Carga la configuración desde entorno o un archivo `.env`.

        Args:
            env_file: ruta opcional a un archivo .env
            cli_args: dict de overrides desde CLI (opcional)

        Returns:
            ConfigSchema: instancia cargada y validada
        """
        # Only an explicitly given .env file is read.
        if env_file:
            load_dotenv(env_file, override=True)

        def _get(key: str, default=None):
            if cli_args and key in cli_args and cli_args[key] is not None:
                return cli_args[key]
            return os.getenv(f"XOR3_{key}", default)

        instance = ConfigSchema(
            brute_force_cap=int(_get('BRUTE_FORCE_CAP', 24)),
            oracle_budget=int(_get('ORACLE_BUDGET', 10 ** 10)),
            search_budget=int(_get('SEARCH_BUDGET', 10 ** 6)),
            seed=int(_get('SEED', 0)),
            constant_b=int(_get('CONSTANT_B', 1)),
            constant_c=int(_get('CONSTANT_C', 1)),
            constant_c0=Fraction(str(_get('CONSTANT_C0', 2))),
            constant_c1=Fraction(str(_get('CONSTANT_C1', 2))),
            matrix_convention=_get('MATRIX_CONVENTION', 'formula'),
            separator_command=_get('SEPARATOR_COMMAND', ''),
            oracle_retries=int(_get('ORACLE_RETRIES', 3)),
            precision_bits=int(_get('PRECISION_BITS', 64)),
            max_iter=int(_get('MAX_ITER', 10000)),
            workers=int(_get('WORKERS', 1)),
            output_dir=_get('OUTPUT_DIR', 'xor3_reports'),
            use_cache=_parse_bool(_get('USE_CACHE', str(True))),
            cache_ttl_hours=int(_get('CACHE_TTL_HOURS', 24)),
            log_level=_get('LOG_LEVEL', 'INFO'),
        )

        cls._instance = instance
        cls._sync_class_attrs(instance)
        return instance

    @classmethod
    def _sync_class_attrs(cls, instance: ConfigSchema) -> None:
        """Update class attributes from the loaded instance."""
        cls.BRUTE_FORCE_CAP = instance.brute_force_cap
        cls.ORACLE_BUDGET = instance.oracle_budget
        cls.SEARCH_BUDGET = instance.search_budget
        cls.SEED = instance.seed
        cls.MATRIX_CONVENTION = instance.matrix_convention
        cls.WORKERS = instance.workers
        cls.OUTPUT_DIR = instance.output_dir
        cls.LOG_LEVEL = instance.log_level

    @classmethod
    def get(cls) -> ConfigSchema:
        """Return the loaded instance, loading from the environment if needed."""
        return cls._instance or cls.load()

    @classmethod
    def validate(cls) -> Tuple[bool, list[str]]:
        """Validate the current configuration.

        Returns:
            Tuple[bool, list[str]]: validity flag and the list of problems
        """
        instance = cls.get()
        try:
            instance.ensure_valid()
        except ConfigError as e:
            return False, str(e).split(': ', 1)[1].split('; ')
        return True, []

    @classmethod
    def ensure_valid(cls) -> None:
        """Raise ConfigError when validation fails."""
        ok, errors = cls.validate()
        if not ok:
            raise ConfigError("Configuration invalid: " + "; ".join(errors))


# Initialize from the environment at import time; never raise on import.
try:
    Config.load()
except Exception:  # pylint: disable=broad-exception-caught
    pass


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO)
    cfg = Config.load()
    ok, errs = Config.validate()
    if ok:
        logging.info('Config valid: %s', cfg.echo())
    else:
        logging.error('Config invalid: %s', errs)
