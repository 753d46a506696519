"""
Configuración de pytest y fixtures comunes para los tests.
"""

import pytest

from src.cnf3 import Cnf3, all_clauses
from src.encoder import InstanceParams, encode
from src.witness import ConstantsConfig


XOR3_ENV_KEYS = (
    'BRUTE_FORCE_CAP', 'ORACLE_BUDGET', 'SEARCH_BUDGET', 'SEED', 'CONSTANT_B', 'CONSTANT_C',
    'CONSTANT_C0', 'CONSTANT_C1', 'MATRIX_CONVENTION', 'SEPARATOR_COMMAND', 'ORACLE_RETRIES',
    'PRECISION_BITS', 'MAX_ITER', 'WORKERS', 'OUTPUT_DIR', 'USE_CACHE', 'CACHE_TTL_HOURS',
    'LOG_LEVEL', 'CONFIG',
)


@pytest.fixture
def clean_env(monkeypatch):
    """Elimina todas las variables XOR3_* del entorno."""
    for key in XOR3_ENV_KEYS:
        monkeypatch.delenv(f'XOR3_{key}', raising=False)
    return monkeypatch


@pytest.fixture
def mock_env_vars(clean_env):
    """Fixture que establece variables de entorno de prueba."""
    env_vars = {
        'XOR3_BRUTE_FORCE_CAP': '16',
        'XOR3_SEARCH_BUDGET': '5000',
        'XOR3_SEED': '7',
        'XOR3_CONSTANT_C0': '5/2',
        'XOR3_MATRIX_CONVENTION': 'prose',
        'XOR3_WORKERS': '2',
        'XOR3_OUTPUT_DIR': 'test_reports',
        'XOR3_LOG_LEVEL': 'INFO',
    }
    for key, value in env_vars.items():
        clean_env.setenv(key, value)
    return env_vars


@pytest.fixture
def consts():
    """Constantes por defecto: b = c = 1, c0 = c1 = 2."""
    return ConstantsConfig()


@pytest.fixture
def contradictory_pair():
    """Dos cláusulas sobre las mismas variables con un número impar de negaciones."""
    return Cnf3.from_ints(3, [[1, 2, 3], [-1, 2, 3]])


@pytest.fixture
def small_formula():
    """3CNF de 5 variables; sus 2-tuplas inconsistentes son (1,2), (3,5) y (4,5)."""
    return Cnf3.from_ints(5, [
        [1, 2, 3], [-1, 2, 3],
        [2, 4, 5], [2, -4, -5], [-2, -4, -5],
        [1, -3, 5],
    ])


@pytest.fixture
def universe3():
    """Las 8 cláusulas sobre x1, x2, x3: I = 0, M = 0 e insatisfacible."""
    return Cnf3(3, tuple(all_clauses(3)))


@pytest.fixture
def micro_params():
    """La instancia más pequeña: n = m = k = 2, t = d = 1."""
    return InstanceParams(2, 2, 2, 1, 1)


@pytest.fixture
def micro_instance(micro_params):
    return encode(micro_params)
