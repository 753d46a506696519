"""
Tests para la refutación R(quad) generada (src/refuter.py).
"""
# pylint: disable=redefined-outer-name

import pytest

from src.encoder import InstanceParams, encode
from src.exceptions import PreconditionError
from src.proof_builder import ProofBuilder
from src.proofsys import LIN, Disjunction, LinCombination, check_proof, parse_proof, write_proof
from src.refuter import accumulate, generate_refutation, lift_refutation, macro_negate


@pytest.fixture(scope="module")
def micro_refutation():
    return generate_refutation(InstanceParams(2, 2, 2, 1, 1), verify=False)


class TestGeneratedRefutation:
    """La refutación emitida pasa el verificador independiente."""

    def test_micro_refutation_checks(self, micro_refutation):
        # Act
        verdict = check_proof(micro_refutation.proof, encode(micro_refutation.params).inputs)

        # Assert
        assert verdict.is_refutation, str(verdict)

    @pytest.mark.parametrize("params", [(2, 2, 2, 2, 1), (2, 3, 2, 2, 2), (3, 2, 2, 1, 1)])
    def test_small_grid(self, params):
        p = InstanceParams(*params)
        result = generate_refutation(p, verify=False)
        assert check_proof(result.proof, encode(p).inputs, workers=2).is_refutation

    def test_phases_cover_all_lines(self, micro_refutation):
        assert set(micro_refutation.phases) == {"step1", "step2", "count"}
        assert sum(micro_refutation.phases.values()) <= micro_refutation.size

    def test_header_comment(self, micro_refutation):
        assert micro_refutation.proof.comments[0] == "refutation of xor3 params 2 2 2 1 1"
        assert micro_refutation.line_count == len(micro_refutation.proof.lines)

    def test_proof_file_round_trip(self, micro_refutation):
        text = write_proof(micro_refutation.proof)
        assert write_proof(parse_proof(text)) == text

    def test_generation_is_deterministic(self, micro_refutation):
        again = generate_refutation(micro_refutation.params, verify=False)
        assert write_proof(again.proof) == write_proof(micro_refutation.proof)


class TestLifting:
    """Levantamiento de refutaciones con disyuntos laterales."""

    def test_lift_adds_side_disjunct(self):
        # Arrange: refutation of x1 = 0, x1 = 1 lifted with side (x2 = 1)
        x1, x2 = LinCombination.var(1), LinCombination.var(2)
        inner = ProofBuilder([x1.in_set((0,)), x1.in_set((1,))], 2, LIN)
        inner.simp(inner.resolve(inner.input(1), x1.eq(0), inner.input(2), x1.eq(1)))
        side = x2.in_set((1,))
        host = ProofBuilder([x1.in_set((0,)), Disjunction.of([x1.eq(1), x2.eq(1)])], 2, LIN)

        # Act
        out = lift_refutation(host, inner.to_proof(), {2: host.input(2)}, side, plain={1: host.input(1)})

        # Assert
        assert host.disj(out) == side
        host.verify()

    def test_lift_needs_refutation(self):
        b = ProofBuilder([], 1, LIN)
        b.bool(1)
        with pytest.raises(PreconditionError):
            lift_refutation(b, b.to_proof(), {}, Disjunction())


class TestNamedMacros:
    """Macros con nombre que devuelven fragmentos."""

    def test_negate_fragment(self):
        b = ProofBuilder([], 1, LIN)
        lid = b.bool(1)
        frag = macro_negate(b, lid, LinCombination.var(1).eq(1))
        assert len(frag.lines) == 2
        assert frag.exports["out"] == len(b)
        assert frag.size() == sum(line.disj.size() for line in b.lines[1:])

    def test_accumulate(self):
        # Arrange: x1 ∈ {0,1} and x2 ∈ {0,1} summed at their "= 1" branches
        b = ProofBuilder([], 2, LIN)
        x1, x2 = LinCombination.var(1), LinCombination.var(2)

        # Act
        lid, eq = accumulate(b, [(b.bool(1), x1.eq(1), 1), (b.bool(2), x2.eq(1), 2)])

        # Assert
        assert eq == (x1 + x2 * 2).eq(3)
        assert eq in b.disj(lid)
        b.verify()

    def test_accumulate_empty(self):
        with pytest.raises(PreconditionError):
            accumulate(ProofBuilder([], 1, LIN), [])
