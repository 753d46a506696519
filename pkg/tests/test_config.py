"""
Tests para el módulo de configuración (src/config.py).
"""
# pylint: disable=unused-argument

from fractions import Fraction

import pytest

from src.config import Config, ConfigSchema
from src.exceptions import ConfigError


class TestConfig:
    """Tests para la clase Config."""

    def test_config_loads_from_env(self, mock_env_vars):
        """Test que Config carga correctamente desde variables XOR3_*."""
        cfg = Config.load()

        assert cfg.brute_force_cap == 16
        assert cfg.search_budget == 5000
        assert cfg.seed == 7
        assert cfg.constant_c0 == Fraction(5, 2)
        assert cfg.matrix_convention == 'prose'
        assert cfg.workers == 2
        assert Config.BRUTE_FORCE_CAP == 16
        assert Config.OUTPUT_DIR == 'test_reports'

    def test_cli_overrides_win(self, mock_env_vars):
        """Test que los overrides de CLI tienen prioridad sobre el entorno."""
        cfg = Config.load(cli_args={'SEED': 99, 'WORKERS': None})

        assert cfg.seed == 99
        assert cfg.workers == 2

    def test_default_values(self, clean_env):
        """Test que Config tiene valores por defecto apropiados."""
        cfg = Config.load()

        assert cfg.brute_force_cap == 24
        assert cfg.constant_b == 1 and cfg.constant_c == 1
        assert cfg.constant_c0 == cfg.constant_c1 == 2
        assert cfg.matrix_convention == 'formula'
        assert cfg.use_cache is True
        assert cfg.cache_ttl_hours == 24

    def test_load_config_from_env_file(self, clean_env, tmp_path):
        """Test que un archivo .env explícito se carga."""
        # Arrange: register the keys so the monkeypatch restores them afterwards
        for key in ('XOR3_SEED', 'XOR3_USE_CACHE', 'XOR3_CONSTANT_C1'):
            clean_env.setenv(key, '')
        env = tmp_path / ".env"
        env.write_text("XOR3_SEED=3\nXOR3_USE_CACHE=false\nXOR3_CONSTANT_C1=3/2\n")

        # Act
        cfg = Config.load(env_file=str(env))

        # Assert
        assert cfg.seed == 3
        assert cfg.use_cache is False
        assert cfg.constant_c1 == Fraction(3, 2)

    @pytest.mark.parametrize("key, value", [
        ('XOR3_WORKERS', '0'),
        ('XOR3_MATRIX_CONVENTION', 'other'),
        ('XOR3_CONSTANT_C', '0'),
        ('XOR3_LOG_LEVEL', 'LOUD'),
        ('XOR3_SEED', 'abc'),
    ])
    def test_invalid_values_raise_value_error(self, clean_env, key, value):
        """Test que valores inválidos fallan al cargar."""
        clean_env.setenv(key, value)

        with pytest.raises(ValueError):
            Config.load()

    def test_validate_success(self, mock_env_vars):
        """Test que validate retorna True con configuración válida."""
        Config.load()

        is_valid, errors = Config.validate()

        assert is_valid is True
        assert len(errors) == 0

    def test_validate_reports_problems(self, monkeypatch):
        """Test que validate lista cada problema encontrado."""
        monkeypatch.setattr(Config, '_instance', ConfigSchema(brute_force_cap=41, cache_ttl_hours=-1))

        is_valid, errors = Config.validate()

        assert is_valid is False
        assert any('BRUTE_FORCE_CAP' in error for error in errors)
        assert any('CACHE_TTL_HOURS' in error for error in errors)
        with pytest.raises(ConfigError):
            Config.ensure_valid()


class TestConfigSchema:
    """Tests para el esquema y el eco de configuración."""

    def test_echo_is_a_single_line(self):
        echo = ConfigSchema().echo()

        assert echo.startswith('config brute_force_cap=24 ')
        assert '\n' not in echo
        assert 'constant_c0=2' in echo
        assert 'output_dir' not in echo

    def test_echo_reflects_overrides(self):
        assert 'seed=5' in ConfigSchema(seed=5).echo()

    def test_constants(self):
        consts = ConfigSchema(constant_b=2, constant_c0=Fraction(5, 2)).constants()

        assert consts.b == 2
        assert consts.c0 == Fraction(5, 2)

    def test_empty_output_dir(self):
        with pytest.raises(ConfigError, match='OUTPUT_DIR'):
            ConfigSchema(output_dir='').ensure_valid()
