"""
Tests de extremo a extremo del CLI (xor3_toolkit.main) y sus códigos de salida.
"""

import numpy as np
import pytest

from src.cnf3 import write_dimacs
from src.encoder import parse_instance
from src.proofsys import mutate_proof, parse_proof, write_proof
from xor3_toolkit import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def workdir(tmp_path, clean_env):
    """Directorio de trabajo aislado: el log y la caché quedan en tmp_path."""
    clean_env.chdir(tmp_path)
    return tmp_path


def run(*argv):
    return main(['--no-cache', *argv])


class TestGen:
    """Subcomando gen."""

    def test_same_seed_same_formula(self, workdir):
        # Act
        assert run('--seed', '7', 'gen', '--n', '6', '--m', '12', '-o', 'a.cnf') == EXIT_OK
        assert run('--seed', '7', 'gen', '--n', '6', '--m', '12', '-o', 'b.cnf') == EXIT_OK

        # Assert
        a = (workdir / 'a.cnf').read_text(encoding='utf-8')
        assert a == (workdir / 'b.cnf').read_text(encoding='utf-8')
        assert 'p cnf 6 12' in a
        assert 'c config ' in a

    def test_gen_to_stdout(self, workdir, capsys):
        assert run('gen', '--n', '3', '--m', '2') == EXIT_OK
        assert 'p cnf 3 2' in capsys.readouterr().out


class TestProofPipeline:
    """encode → prove → check → linearize."""

    @pytest.fixture
    def micro(self, workdir):
        assert run('encode', '--n', '2', '--m', '2', '--k', '2', '--t', '1', '--d', '1',
                   '-o', 'micro.xor3') == EXIT_OK
        assert run('prove', '--instance', 'micro.xor3', '-o', 'micro.rquad') == EXIT_OK
        return workdir

    def test_generated_proof_checks(self, micro, capsys):
        assert run('check', 'micro.rquad', '--instance', 'micro.xor3') == EXIT_OK
        assert 'refutation' in capsys.readouterr().out.lower()

    def test_prove_from_parameters(self, micro):
        assert run('prove', '--n', '2', '--m', '2', '--k', '2', '--t', '1', '--d', '1',
                   '-o', 'again.rquad') == EXIT_OK
        assert parse_proof((micro / 'again.rquad').read_text(encoding='utf-8')).lines

    def test_mutated_proof_is_rejected(self, micro):
        # Arrange
        proof = parse_proof((micro / 'micro.rquad').read_text(encoding='utf-8'))
        inputs = parse_instance((micro / 'micro.xor3').read_text(encoding='utf-8')).inputs
        mutated, _, _ = mutate_proof(proof, inputs, np.random.default_rng(1))
        (micro / 'bad.rquad').write_text(write_proof(mutated), encoding='utf-8')

        # Act / Assert
        assert run('check', 'bad.rquad', '--instance', 'micro.xor3') == EXIT_INVALID

    def test_malformed_proof(self, micro):
        (micro / 'junk.rquad').write_text('not a proof\n', encoding='utf-8')
        assert run('check', 'junk.rquad', '--instance', 'micro.xor3') == EXIT_INVALID

    def test_linearized_proof_checks_with_prodmap(self, micro):
        assert run('linearize', 'micro.rquad', '--instance', 'micro.xor3',
                   '-o', 'micro.rlin', '--prodmap', 'micro.prodmap') == EXIT_OK
        assert run('check', 'micro.rlin', '--instance', 'micro.xor3',
                   '--prodmap', 'micro.prodmap') == EXIT_OK

    def test_lin_proof_without_prodmap(self, micro):
        run('linearize', 'micro.rquad', '--instance', 'micro.xor3',
            '-o', 'micro.rlin', '--prodmap', 'micro.prodmap')
        assert run('check', 'micro.rlin', '--instance', 'micro.xor3') == EXIT_USAGE


class TestRefute:
    """Subcomandos refute y witness sobre las 8 cláusulas de 3 variables."""

    @pytest.fixture
    def universe_file(self, workdir, universe3):
        path = workdir / 'u3.cnf'
        path.write_text(write_dimacs(universe3), encoding='utf-8')
        return path

    def test_det(self, universe_file, capsys):
        assert run('refute', 'det', str(universe_file)) == EXIT_OK
        assert 'unsatisfiable k=2 t=1 d=1' in capsys.readouterr().out

    def test_nondet_writes_witness(self, universe_file, workdir, capsys):
        assert run('refute', 'nondet', str(universe_file), '-o', 'u3.fko') == EXIT_OK
        assert 'unsatisfiable' in capsys.readouterr().out
        assert run('witness', 'verify', str(universe_file), 'u3.fko') == EXIT_OK
        assert (workdir / 'u3.fko').exists()

    def test_witness_search_budget(self, universe_file):
        assert run('--budget', '1', 'witness', 'find', str(universe_file),
                   '--t', '4') == EXIT_BUDGET


class TestUsageErrors:
    """Errores de uso: código 2."""

    def test_missing_subcommand_arguments(self, workdir):
        assert main(['gen']) == EXIT_USAGE

    def test_invalid_config_value(self, workdir):
        assert run('--workers', '0', 'gen', '--n', '3', '--m', '3') == EXIT_USAGE

    def test_prove_without_parameters(self, workdir):
        assert run('prove', '--n', '2') == EXIT_USAGE

    def test_missing_file(self, workdir):
        assert run('stats', 'missing.cnf') == EXIT_USAGE

    def test_help_exits_ok(self, workdir):
        assert main(['--help']) == EXIT_OK
