"""
Tests para el módulo de fórmulas 3CNF (src/cnf3.py).
"""

import pytest

from src.cnf3 import (
    Assignment,
    Clause3,
    Cnf3,
    Literal,
    all_clauses,
    canonical_formulas,
    clause_universe_size,
    eval_as_3xor,
    imbalance,
    is_satisfiable_bruteforce,
    max_3xor_satisfied,
    occurrence_counts,
    parse_dimacs,
    sample_random,
    write_dimacs,
)
from src.exceptions import BudgetExceeded, FormatError, PreconditionError


class TestTypes:
    """Invariantes de Literal, Clause3 y Cnf3."""

    def test_literal_from_int_keeps_sign(self):
        assert Literal.from_int(-4) == Literal(4, False)
        assert Literal.from_int(4).to_int() == 4

    def test_zero_is_not_a_literal(self):
        with pytest.raises(PreconditionError):
            Literal.from_int(0)

    def test_clause_rejects_repeated_variable(self):
        with pytest.raises(PreconditionError):
            Clause3.from_ints([1, -1, 2])

    def test_clause_rejects_wrong_width(self):
        with pytest.raises(PreconditionError):
            Clause3.from_ints([1, 2])

    def test_formula_rejects_variable_out_of_range(self):
        with pytest.raises(PreconditionError):
            Cnf3.from_ints(3, [[1, 2, 4]])

    def test_comments_do_not_affect_equality(self):
        a = Cnf3.from_ints(3, [[1, 2, 3]])
        b = Cnf3(3, a.clauses, ("otro comentario",))
        assert a == b
        assert hash(a) == hash(b)


class TestDimacs:
    """Tests de lectura y escritura DIMACS."""

    def test_round_trip_is_byte_exact(self):
        # Arrange
        text = "c random 3cnf\np cnf 4 2\n1 -2 3 0\n-1 2 4 0\n"

        # Act
        f = parse_dimacs(text)

        # Assert
        assert f.to_ints() == [[1, -2, 3], [-1, 2, 4]]
        assert write_dimacs(f) == text

    def test_clause_may_span_lines(self):
        f = parse_dimacs("p cnf 3 1\n1 2\n-3 0\n")
        assert f.to_ints() == [[1, 2, -3]]

    def test_width_two_clause_reports_line(self):
        with pytest.raises(FormatError) as exc:
            parse_dimacs("p cnf 3 2\n1 2 3 0\n1 2 0\n")
        assert exc.value.line_no == 3

    def test_clause_count_mismatch(self):
        with pytest.raises(FormatError, match="announces 3 clauses"):
            parse_dimacs("p cnf 3 3\n1 2 3 0\n")

    def test_missing_header(self):
        with pytest.raises(FormatError, match="problem line"):
            parse_dimacs("1 2 3 0\n")

    def test_duplicate_variable_is_rejected(self):
        with pytest.raises(FormatError, match="duplicate"):
            parse_dimacs("p cnf 3 1\n1 -1 2 0\n")

    def test_unterminated_clause(self):
        with pytest.raises(FormatError, match="terminated"):
            parse_dimacs("p cnf 3 1\n1 2 3\n")


class TestSampling:
    """Tests del muestreo aleatorio."""

    def test_same_seed_same_formula(self):
        assert write_dimacs(sample_random(6, 20, 7)) == write_dimacs(sample_random(6, 20, 7))

    def test_different_seed_differs(self):
        assert sample_random(8, 30, 1) != sample_random(8, 30, 2)

    def test_clauses_have_sorted_distinct_variables(self):
        f = sample_random(5, 50, 3)
        for clause in f.clauses:
            assert list(clause.variables) == sorted(set(clause.variables))

    def test_comment_records_parameters(self):
        assert sample_random(4, 3, 11).comments == ("random 3cnf n=4 m=3 seed=11",)

    def test_needs_three_variables(self):
        with pytest.raises(PreconditionError):
            sample_random(2, 1, 0)

    def test_universe_size(self):
        assert clause_universe_size(4) == 32
        assert len(all_clauses(4)) == 32
        assert len(set(all_clauses(5))) == clause_universe_size(5)


class TestSymmetry:
    """Representantes bajo permutación de variables y cambio de signo."""

    @pytest.mark.parametrize("n, expected", [(3, [1, 4]), (4, [1, 7])])
    def test_class_counts(self, n, expected):
        # m = 2, n = 3: the second clause has 0..3 negations relative to the first
        # m = 2, n = 4: those four plus three with two shared variables
        counts = [0, 0]
        for f in canonical_formulas(n, 2):
            counts[f.m - 1] += 1
        assert counts == expected

    def test_formulas_are_distinct_and_ordered(self):
        formulas = list(canonical_formulas(4, 3))
        assert len({f.clauses for f in formulas}) == len(formulas)
        assert [f.m for f in formulas] == sorted(f.m for f in formulas)

    def test_first_clause_is_all_positive(self):
        assert all(f.clauses[0] == Clause3.from_ints([1, 2, 3]) for f in canonical_formulas(4, 3))

    def test_representatives_cover_every_xor_optimum(self):
        # Arrange: every two-clause multiset over x1, x2, x3
        universe = all_clauses(3)
        raw = {max_3xor_satisfied(Cnf3(3, (a, b))) for i, a in enumerate(universe) for b in universe[i:]}

        # Act
        reps = {max_3xor_satisfied(f) for f in canonical_formulas(3, 2) if f.m == 2}

        # Assert
        assert reps == raw == {1, 2}

    def test_no_clauses_below_three_variables(self):
        assert list(canonical_formulas(2, 3)) == []


class TestSemantics:
    """Evaluación como 3XOR, satisfacibilidad y desbalance."""

    def test_eval_as_3xor(self):
        clause = Clause3.from_ints([1, -2, 3])
        # x1=1, x2=1, x3=0: literals 1, 0, 0 -> XOR 1
        assert eval_as_3xor(clause, Assignment((True, True, False)))
        assert not eval_as_3xor(clause, Assignment((True, False, False)))

    def test_contradictory_pair_satisfies_one_xor(self, contradictory_pair):
        assert max_3xor_satisfied(contradictory_pair) == 1

    def test_full_universe_is_unsatisfiable(self):
        f = Cnf3(3, tuple(all_clauses(3)))
        assert is_satisfiable_bruteforce(f) == (False, None)
        # exactly the clauses with the right negation parity are XOR-satisfied
        assert max_3xor_satisfied(f) == 4

    def test_satisfying_assignment_is_returned(self, contradictory_pair):
        sat, model = is_satisfiable_bruteforce(contradictory_pair)
        assert sat
        assert all(any(lit.value(model.bits) for lit in c.lits) for c in contradictory_pair.clauses)

    def test_enumeration_respects_cap(self):
        f = sample_random(12, 4, 0)
        with pytest.raises(BudgetExceeded):
            max_3xor_satisfied(f, cap=10)
        with pytest.raises(BudgetExceeded):
            is_satisfiable_bruteforce(f, cap=10)

    def test_empty_formula(self):
        assert max_3xor_satisfied(Cnf3(3)) == 0
        assert is_satisfiable_bruteforce(Cnf3(3))[0]

    def test_occurrences_and_imbalance(self, small_formula):
        pos, neg = occurrence_counts(small_formula)
        assert pos == [2, 4, 2, 1, 2]
        assert neg == [1, 1, 1, 2, 2]
        assert imbalance(small_formula) == 6
