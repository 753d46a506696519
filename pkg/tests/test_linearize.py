"""
Tests para la traducción R(quad) → R(lin) y el archivo prodmap.
"""
# pylint: disable=redefined-outer-name

import pytest

from src.encoder import InstanceParams, encode
from src.exceptions import FormatError, PreconditionError
from src.linearize import (
    LinearizationMap,
    linearize_instance,
    linearize_proof,
    parse_prodmap,
    proof_monomials,
    write_prodmap,
)
from src.proof_builder import ProofBuilder
from src.proofsys import LIN, QUAD, LinCombination, Proof, check_proof
from src.refuter import generate_refutation


@pytest.fixture
def product_proof():
    """Derivación R(quad) de (x2 = 1) ∨ (x1·x2 = 0) y (x2 = 0) ∨ (x1·x2 − x1 = 0)."""
    b = ProofBuilder([], 2, QUAD)
    h = b.monomial(1, 2)
    b.fix_product(h, 0)
    b.fix_product(h, 1)
    return b.to_proof()


class TestLinearizationMap:
    """Nombres de monomios y axiomas de definición."""

    def test_names_follow_sorted_monomials(self):
        lmap = LinearizationMap.build([(2, 3), (1, 2), (2, 3)], base=3, axiom_offset=4)
        assert lmap.names == {(1, 2): 4, (2, 3): 5}
        assert lmap.var_count == 5
        assert lmap.definition_input((2, 3), 1) == 4 + 3 + 2

    def test_equation_substitution(self):
        lmap = LinearizationMap.build([(1, 2)], base=2)
        eq = (LinCombination.prod(1, 2) - LinCombination.var(1)).eq(0)
        assert lmap.equation(eq) == (LinCombination.var(3) - LinCombination.var(1)).eq(0)

    def test_unnamed_monomial(self):
        with pytest.raises(PreconditionError, match="no linear name"):
            LinearizationMap(2).name((1, 2))

    def test_extend_assignment(self):
        lmap = LinearizationMap.build([(1, 2)], base=2)
        assert lmap.extend({1: 1, 2: 0}) == {1: 1, 2: 0, 3: 0}

    def test_definitions_hold_for_products(self):
        lmap = LinearizationMap.build([(1, 2)], base=2)
        for a in (0, 1):
            for b in (0, 1):
                values = lmap.extend({1: a, 2: b})
                assert all(d.evaluate(values) for d in lmap.definitions())


class TestLinearizeProof:
    """Traducción línea a línea."""

    def test_product_derivation(self, product_proof):
        # Act
        axioms, lmap = linearize_instance([], product_proof)
        lin = linearize_proof(product_proof, lmap)

        # Assert
        assert proof_monomials(product_proof) == {(1, 2)}
        assert lin.flavor == LIN
        assert lin.var_count == 3
        assert check_proof(lin, axioms).status == "derivation"
        assert [line.id for line in lin.lines] == [line.id for line in product_proof.lines]

    def test_micro_refutation_stays_a_refutation(self):
        # Arrange
        p = InstanceParams(2, 2, 2, 1, 1)
        quad = generate_refutation(p, verify=False).proof

        # Act
        axioms, lmap = linearize_instance(encode(p).inputs, quad)
        lin = linearize_proof(quad, lmap)

        # Assert
        assert check_proof(lin, axioms).is_refutation
        assert lin.size() <= 3 * quad.size()
        assert lin.comments[-1].startswith("linearized:")

    def test_lin_proof_is_rejected(self):
        with pytest.raises(PreconditionError):
            linearize_instance([], Proof(LIN, 1))
        with pytest.raises(PreconditionError):
            linearize_proof(Proof(LIN, 1), LinearizationMap(1))


class TestProdmapFile:
    """Formato del archivo prodmap."""

    def test_round_trip_keeps_comments(self):
        lmap = LinearizationMap.build([(1, 2), (1, 3)], base=3, axiom_offset=7)
        lmap.comments = ("config seed=0",)
        text = write_prodmap(lmap)
        parsed = parse_prodmap(text)
        assert parsed == lmap
        assert parsed.comments == ("config seed=0",)
        assert write_prodmap(parsed) == text

    @pytest.mark.parametrize("text, message", [
        ("base 2 axioms 0\n", "prodmap 1"),
        ("prodmap 1\nbase two axioms 0\n", "non-integer"),
        ("prodmap 1\nbase 2\n", "base <n> axioms <k>"),
        ("prodmap 1\nbase 2 axioms 0\n2 1 3\n", "not canonical"),
        ("prodmap 1\nbase 2 axioms 0\n1 2 5\n", "consecutively"),
        ("prodmap 1\nbase 2 axioms 0\n1 2\n", "bad prodmap entry"),
    ])
    def test_format_errors(self, text, message):
        with pytest.raises(FormatError, match=message):
            parse_prodmap(text)
