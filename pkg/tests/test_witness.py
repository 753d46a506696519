"""
Tests para tuplas inconsistentes, certificado espectral y testigos FKO (src/witness.py).
"""
# pylint: disable=redefined-outer-name

from dataclasses import replace
from fractions import Fraction

import pytest

from src.exceptions import BudgetExceeded, ConvergenceError, FormatError, PreconditionError
from src.witness import (
    ConstantsConfig,
    EvenKTuple,
    FkoWitness,
    SearchFailure,
    TupleCollection,
    approx_top_eigenvalue,
    build_matrix,
    build_witness,
    characteristic_polynomial,
    check_collection,
    check_inequality,
    check_prop_3_2,
    exists_collection,
    find_tuples_bruteforce,
    inconsistent_tuples,
    is_even_tuple,
    is_inconsistent,
    parse_witness,
    principle_holds,
    residual_norm,
    spectral_certificate,
    spectrum_bounded_by,
    top_root_bisection,
    tuples_from_ids,
    verify_witness,
    write_witness,
)


@pytest.fixture
def universe_witness(universe3, consts):
    coll = find_tuples_bruteforce(universe3, 2, 4, 1, budget=1000)
    return build_witness(universe3, coll, consts)


def F(x):  # pylint: disable=invalid-name
    return Fraction(x)


class TestTuples:
    """k-tuplas pares e inconsistentes."""

    def test_even_and_inconsistent(self, small_formula):
        tup = EvenKTuple((1, 2))
        assert is_even_tuple(small_formula, tup)
        assert is_inconsistent(small_formula, tup)

    def test_even_but_consistent(self, small_formula):
        assert not is_inconsistent(small_formula, EvenKTuple((3, 4)))

    def test_inconsistency_needs_even_tuple(self, small_formula):
        with pytest.raises(PreconditionError, match="not even"):
            is_inconsistent(small_formula, EvenKTuple((1, 3)))

    def test_index_out_of_range(self, small_formula):
        with pytest.raises(PreconditionError, match="out of range"):
            is_even_tuple(small_formula, EvenKTuple((1, 9)))

    def test_inconsistent_pairs_in_order(self, small_formula):
        assert [t.clause_ids for t in inconsistent_tuples(small_formula, 2)] == [(1, 2), (3, 5), (4, 5)]

    def test_prop_3_2_on_contradictory_pair(self, contradictory_pair):
        assert check_prop_3_2(contradictory_pair, EvenKTuple((1, 2)))

    def test_prop_3_2_rejects_consistent_tuple(self, small_formula):
        with pytest.raises(PreconditionError, match="consistent"):
            check_prop_3_2(small_formula, EvenKTuple((3, 4)))


class TestCollections:
    """Búsqueda y verificación de colecciones de tuplas."""

    def test_greedy_respects_multiplicity(self, small_formula):
        # Act
        coll = find_tuples_bruteforce(small_formula, 2, 2, 1, budget=100)

        # Assert
        assert coll.tuples == tuples_from_ids([(1, 2), (3, 5)])
        assert check_collection(small_formula, coll).ok

    def test_greedy_reports_partial_count(self, small_formula):
        result = find_tuples_bruteforce(small_formula, 2, 3, 1, budget=100)
        assert isinstance(result, SearchFailure)
        assert result.reason == "not enough tuples"
        assert result.found == 2

    def test_greedy_budget(self, small_formula):
        result = find_tuples_bruteforce(small_formula, 2, 3, 1, budget=2)
        assert isinstance(result, SearchFailure)
        assert result.reason == "budget exhausted"

    def test_higher_multiplicity_admits_third_tuple(self, small_formula):
        coll = find_tuples_bruteforce(small_formula, 2, 3, 2, budget=100)
        assert coll.t == 3
        assert coll.multiplicities()[5] == 2

    def test_odd_k_is_rejected(self, small_formula):
        with pytest.raises(PreconditionError):
            find_tuples_bruteforce(small_formula, 3, 1, 1, budget=10)

    def test_exists_collection_is_complete(self, small_formula):
        assert exists_collection(small_formula, 2, 3, 1, budget=1000) is None
        assert exists_collection(small_formula, 2, 3, 2, budget=1000).t == 3

    def test_exists_collection_budget(self, universe3):
        with pytest.raises(BudgetExceeded):
            exists_collection(universe3, 2, 5, 1, budget=3)

    def test_check_collection_lists_violations(self, small_formula):
        # Arrange
        coll = TupleCollection(2, 1, tuples_from_ids([(1, 2), (3, 4), (1, 2)]))

        # Act
        report = check_collection(small_formula, coll)

        # Assert
        assert not report.ok
        assert "tuple 2: consistent" in report.first_violation
        assert any("used 2 times > d=1" in v for v in report.violations)

    def test_principle_holds_for_verified_collection(self, small_formula, universe3):
        coll = find_tuples_bruteforce(small_formula, 2, 2, 1, budget=100)
        assert principle_holds(small_formula, coll)
        assert principle_holds(universe3, find_tuples_bruteforce(universe3, 2, 4, 1, budget=100))


class TestSpectral:
    """Matriz M(f), certificado espectral y oráculo por bisección."""

    def test_matrix_entries(self, contradictory_pair):
        M = build_matrix(contradictory_pair)
        assert M[1][2] == M[2][1] == -1
        assert M[0][1] == M[0][2] == 0
        assert all(M[i][i] == 0 for i in range(3))

    def test_prose_convention_negates(self, contradictory_pair):
        assert build_matrix(contradictory_pair, "prose")[1][2] == 1

    def test_unknown_convention(self, contradictory_pair):
        with pytest.raises(PreconditionError):
            build_matrix(contradictory_pair, "other")

    def test_certificate_residual_is_exact(self, contradictory_pair):
        # Arrange
        M = build_matrix(contradictory_pair)
        tol = F("1/1000")

        # Act
        cert = approx_top_eigenvalue(M, tol)

        # Assert
        assert cert.is_valid()
        assert residual_norm(M, cert.lam, cert.eigvec) <= tol
        assert abs(cert.lam - 1) <= tol
        assert max(abs(x) for x in cert.eigvec) == 1

    def test_zero_matrix(self, universe3):
        cert = spectral_certificate(universe3, ConstantsConfig())
        assert cert.lam == 0
        assert cert.is_valid()

    def test_non_symmetric_matrix(self):
        with pytest.raises(PreconditionError, match="symmetric"):
            approx_top_eigenvalue([[F(0), F(1)], [F(0), F(0)]], F(1))

    def test_iteration_limit(self, mocker):
        mocker.patch("src.witness.residual_norm", return_value=F(1))
        with pytest.raises(ConvergenceError):
            approx_top_eigenvalue([[F(0), F(1)], [F(1), F(0)]], F("1/2"), max_iter=3)

    def test_characteristic_polynomial(self):
        assert characteristic_polynomial([[F(2), F(1)], [F(1), F(2)]]) == [1, -4, 3]

    def test_bisection_matches_certificate(self):
        # Arrange: eigenvalues 3 and 1
        M = [[F(2), F(1)], [F(1), F(2)]]

        # Act
        root = top_root_bisection(M, F("1/64"))
        cert = approx_top_eigenvalue(M, F("1/64"))

        # Assert
        assert abs(root - 3) <= F("1/64")
        assert abs(cert.lam - root) <= F("1/32")

    @pytest.mark.parametrize("bound, expected", [
        (F(3), True), (F("29/10"), False), (F(1), False), (F(4), True),
    ])
    def test_spectrum_bound(self, bound, expected):
        # eigenvalues 3 and 1
        assert spectrum_bounded_by([[F(2), F(1)], [F(1), F(2)]], bound) is expected

    def test_spectrum_bound_with_zero_pivot(self):
        assert spectrum_bounded_by([[F(0)] * 2 for _ in range(2)], F(0))
        # eigenvalues ±1: bound 0 leaves a zero pivot over a non-zero row
        assert not spectrum_bounded_by([[F(0), F(1)], [F(1), F(0)]], F(0))

    def test_bisection_on_repeated_root(self):
        root = top_root_bisection([[F(0)] * 3 for _ in range(3)], F("1/100"))
        assert abs(root) <= F("1/100")


class TestInequalityAndWitness:
    """Desigualdad t > d(I + λn)/2 + b/n^c y verificación de testigos."""

    def test_inequality_exact(self, consts):
        assert check_inequality(3, 1, 0, F(0), 4, consts)
        assert not check_inequality(1, 2, 1, F(0), 2, consts)
        # boundary: rhs exactly t is not enough
        assert not check_inequality(1, 1, 1, F(0), 2, ConstantsConfig(b=1, c=1))

    def test_inequality_needs_variables(self, consts):
        with pytest.raises(PreconditionError):
            check_inequality(1, 1, 0, F(0), 0, consts)

    def test_constants_validation(self):
        with pytest.raises(PreconditionError):
            ConstantsConfig(c=0)
        with pytest.raises(PreconditionError):
            ConstantsConfig(b=-1)

    def test_universe_witness_verifies(self, universe3, universe_witness):
        report = verify_witness(universe3, universe_witness)
        assert report.ok, str(report)
        assert universe_witness.collection.t == 4

    def test_small_formula_fails_inequality(self, small_formula, consts):
        coll = find_tuples_bruteforce(small_formula, 2, 2, 1, budget=100)
        report = verify_witness(small_formula, build_witness(small_formula, coll, consts))
        assert report.violations and all("inequality fails" in v for v in report.violations)

    def test_tampered_fields_are_reported(self, universe3, universe_witness):
        # Arrange
        tampered = replace(universe_witness, imbalance=2, lam=F(5))

        # Act
        report = verify_witness(universe3, tampered)

        # Assert
        assert "imbalance 2 != recomputed 0" in report.violations[0]
        assert any("spectral residual" in v for v in report.violations)

    def test_lower_eigenpair_is_rejected(self, contradictory_pair, consts):
        # Arrange: M has eigenvalues 1, 0, -1; (-1, (0, 1, 1)) has zero residual
        # but lowers the right-hand side enough to pass the inequality
        coll = TupleCollection(2, 1, tuples_from_ids([(1, 2)]))
        witness = FkoWitness(3, 2, 4, F(-1), (F(0), F(1), F(1)), coll, consts)
        assert residual_norm(build_matrix(contradictory_pair), witness.lam, witness.eigvec) == 0
        assert check_inequality(1, 1, 4, F(-1), 3, consts)

        # Act
        report = verify_witness(contradictory_pair, witness)

        # Assert
        assert not report.ok
        assert any("not the top eigenvalue" in v for v in report.violations)

    def test_certificate_is_top(self, contradictory_pair, consts):
        cert = spectral_certificate(contradictory_pair, consts)
        assert cert.is_top()
        assert not replace(cert, lam=F(-1), eigvec=(F(0), F(1), F(1))).is_valid()

    def test_wrong_formula_size(self, small_formula, universe_witness):
        report = verify_witness(small_formula, universe_witness)
        assert "witness is for n=3" in report.first_violation


class TestWitnessFile:
    """Formato de archivo del testigo."""

    def test_round_trip(self, universe_witness):
        text = write_witness(replace(universe_witness, comments=("config seed=0",)))
        parsed = parse_witness(text)
        assert parsed == universe_witness
        assert parsed.comments == ("config seed=0",)
        assert write_witness(parsed) == text

    def test_rationals_must_be_reduced(self, universe_witness):
        text = write_witness(universe_witness).replace("lambda 0/1", "lambda 0/2")
        with pytest.raises(FormatError, match="lowest terms"):
            parse_witness(text)

    def test_tuple_count_must_match_header(self, universe_witness):
        text = write_witness(universe_witness).replace("t 4", "t 5")
        with pytest.raises(FormatError, match="t=5"):
            parse_witness(text)

    def test_missing_header(self):
        with pytest.raises(FormatError, match="fko 1"):
            parse_witness("n 3\n")
