"""
Tests para la codificación Υ, su archivo de instancia y el oráculo semántico.
"""

from dataclasses import replace

import pytest

from src.encoder import (
    InstanceParams,
    encode,
    full_assignment,
    parse_instance,
    semantic_oracle,
    split,
    variables_of,
    violated_axioms,
    write_instance,
)
from src.exceptions import BudgetExceeded, FormatError, PreconditionError
from src.proofsys import Disjunction


class TestParams:
    """Validación de parámetros."""

    def test_k_must_be_even(self):
        with pytest.raises(PreconditionError):
            InstanceParams(3, 3, 3, 1, 1)

    def test_positive_values(self):
        with pytest.raises(PreconditionError):
            InstanceParams(3, 0, 2, 1, 1)

    def test_q_is_ceiling(self):
        assert InstanceParams(2, 4, 2, 3, 2).q == 2
        assert InstanceParams(2, 4, 2, 4, 2).q == 2


class TestLayout:
    """Bloques de variables de la instancia mínima."""

    def test_block_bases(self, micro_instance):
        lay = micro_instance.layout
        assert (lay.y_base, lay.z_base, lay.u_base) == (24, 28, 30)
        assert (lay.pyx_base, lay.pxz_base, lay.total) == (32, 80, 104)

    def test_describe_inverts_maps(self, micro_instance):
        lay = micro_instance.layout
        assert lay.describe(1) == "x[1,1]"
        assert lay.describe(lay.y(1, 2, 1)) == "y[1][2,1]"
        assert lay.describe(lay.z(2)) == "z[2]"
        assert lay.describe(lay.u(1)) == "u[1]"
        assert lay.describe(lay.prod_yx(1, 2, 2, 1, 3)) == "yx[1,2,2,1,3]"
        assert lay.describe(lay.prod_xz(6, 4)) == "xz[6,4]"

    def test_describe_out_of_range(self, micro_instance):
        with pytest.raises(PreconditionError):
            micro_instance.layout.describe(105)


class TestEncoding:
    """Familias de axiomas y partición A/B."""

    def test_family_counts(self, micro_instance):
        assert micro_instance.family_counts() == {
            1: 6, 2: 2, 3: 2, 4: 144, 5: 2, 6: 1, 7: 2, 8: 72, 9: 4, 10: 1,
        }
        assert len(micro_instance.axioms) == 236

    def test_input_ids(self, micro_instance):
        assert micro_instance.input_id(1, 1) == 1
        assert micro_instance.input_id(10) == 236
        with pytest.raises(PreconditionError):
            micro_instance.input_id(99)

    def test_split_shares_only_x(self, micro_instance):
        # Arrange
        a_part, b_part = split(micro_instance)

        # Act
        shared = variables_of(a_part) & variables_of(b_part)

        # Assert
        assert (len(a_part), len(b_part)) == (159, 83)
        assert shared and max(shared) <= micro_instance.layout.y_base

    def test_encoding_is_deterministic(self, micro_params):
        assert write_instance(encode(micro_params)) == write_instance(encode(micro_params))

    def test_even_variant_changes_family_6_only(self, micro_params):
        odd, even = encode(micro_params), encode(micro_params, "even")
        changed = {a.family for a, b in zip(odd.axioms, even.axioms) if a.disj != b.disj}
        assert changed == {6}

    def test_unknown_parity(self, micro_params):
        with pytest.raises(PreconditionError):
            encode(micro_params, "both")


class TestInstanceFile:
    """Formato de archivo de instancia."""

    def test_round_trip_keeps_comments(self, micro_instance):
        # Arrange
        micro_instance.comments = ("config seed=0",)
        text = write_instance(micro_instance)

        # Act
        parsed = parse_instance(text)

        # Assert
        assert parsed.comments == ("config seed=0",)
        assert write_instance(parsed) == text
        assert parsed.params == micro_instance.params

    def test_missing_header(self):
        with pytest.raises(FormatError, match="xor3 1"):
            parse_instance("params 2 2 2 1 1\n")

    def test_truncated(self):
        with pytest.raises(FormatError, match="truncated"):
            parse_instance("xor3 1\nparams 2 2 2 1 1\n")

    def test_bad_params_line_counts_comments(self, micro_instance):
        text = write_instance(micro_instance).replace("params 2 2 2 1 1", "params 2 2 3 1 1")
        with pytest.raises(FormatError) as exc:
            parse_instance("xor3 1\nc one\n" + text.split("\n", 1)[1])
        assert exc.value.line_no == 3

    def test_tampered_axiom(self, micro_instance):
        lines = write_instance(micro_instance).splitlines()
        lines[-1] = lines[-1].rsplit(" = ", 1)[0] + " = 0"
        with pytest.raises(FormatError, match="differs"):
            parse_instance("\n".join(lines) + "\n")

    def test_missing_axiom(self, micro_instance):
        text = "\n".join(write_instance(micro_instance).splitlines()[:-1]) + "\n"
        with pytest.raises(FormatError, match="expected 236 axioms"):
            parse_instance(text)


class TestSemanticOracle:
    """Oráculo semántico sobre los puntos de decisión."""

    def test_micro_instance_is_unsat(self, micro_params):
        result = semantic_oracle(micro_params)
        assert not result.sat
        assert str(result) == "UNSAT"

    def test_budget(self, micro_params):
        with pytest.raises(BudgetExceeded):
            semantic_oracle(micro_params, budget=10)

    @pytest.mark.parametrize("variant", [{"family6_parity": "even"}, {"relax_family10": True}])
    def test_variants_have_models(self, variant):
        # Arrange
        p = InstanceParams(3, 2, 2, 1, 1)

        # Act
        result = semantic_oracle(p, **variant)

        # Assert: the model satisfies every axiom of the variant encoding
        assert result.sat
        inst = encode(p, variant.get("family6_parity", "odd"), variant.get("relax_family10", False))
        assert violated_axioms(inst, full_assignment(inst, result.model)) == []

    def test_principle_instance_is_unsat(self):
        assert not semantic_oracle(InstanceParams(3, 2, 2, 1, 1)).sat

    def test_verdict_follows_the_axioms(self):
        # Arrange: relaxed encoding with its family-10 axiom swapped for the strict one
        p = InstanceParams(3, 2, 2, 1, 1)
        relaxed = encode(p, relax_family10=True)
        strict = encode(p)
        strict_axiom = strict.axioms[strict.input_id(10) - 1]
        pos = relaxed.input_id(10) - 1
        relaxed.axioms[pos] = replace(relaxed.axioms[pos], disj=strict_axiom.disj)

        # Act
        result = semantic_oracle(p, instance=relaxed)

        # Assert
        assert semantic_oracle(p, instance=encode(p, relax_family10=True)).sat
        assert not result.sat

    def test_unsatisfiable_axiom_rejects_every_point(self):
        # Arrange: one family-6 axiom replaced by an empty disjunction (FALSE)
        p = InstanceParams(3, 2, 2, 1, 1)
        inst = encode(p, family6_parity="even")
        pos = inst.input_id(6, 1) - 1
        inst.axioms[pos] = replace(inst.axioms[pos], disj=Disjunction(()))

        # Act / Assert
        assert not semantic_oracle(p, instance=inst).sat
