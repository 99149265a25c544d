import json
from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest

from votemanip.errors import CapExceededError
from votemanip.scf import (
    OneCoordinate,
    Plurality,
    TableSCF,
    TopHDictator,
    random_table_scf,
)
from votemanip.verify import (
    RHO_PREFERENCE_PAIRS,
    BoundParams,
    bound_value,
    preference_correlation_check,
    sweep_one_voter,
    sweep_random_tables,
    verify_lemma_influences,
    verify_main_theorems,
    verify_reverse_hypercontractivity,
    verify_thm_1_5,
    write_counterexample,
    VerificationReport,
)


def test_bound_value_pins():
    assert bound_value("1.4", BoundParams(k=3, epsilon=Fraction(1))) == Fraction(1, 4304672100000)
    assert bound_value("2.1", BoundParams(n=2, k=3, epsilon=Fraction(1, 2))) == Fraction(1, 36)
    assert bound_value("1.2", BoundParams(n=5, k=4, epsilon=Fraction(0))) == 0
    eps = Fraction(1, 3)
    assert bound_value("3.1", BoundParams(n=2, k=3, epsilon=eps)) == \
        eps ** 5 / (4 * 2 ** 7 * 3 ** 12 * factorial(3) ** 4)
    assert bound_value("7.1", BoundParams(n=2, k=3, epsilon=eps)) == \
        eps ** 5 / (10 ** 9 * 2 ** 7 * 3 ** 46)
    assert bound_value("gamma-coarse", BoundParams(n=2, k=3, epsilon=eps)) == \
        eps ** 3 / (4 * 8 * 3 ** 9)
    assert bound_value("gamma-refined", BoundParams(n=2, k=3, epsilon=eps)) == \
        eps ** 3 / (1000 * 8 * 3 ** 24)
    assert bound_value("1.5", BoundParams(n=2, k=3, alpha=Fraction(1, 36))) == \
        Fraction(10 ** 6 * 2 ** 12 * 3 ** 24, 36)


def test_bound_value_validation():
    with pytest.raises(ValueError):
        bound_value("1.4", BoundParams(k=3))
    with pytest.raises(ValueError):
        bound_value("1.4", BoundParams(k=2, epsilon=Fraction(1, 2)))
    with pytest.raises(ValueError):
        bound_value("nope", BoundParams())
    with pytest.raises(ValueError):
        bound_value("1.2", BoundParams(n=2, k=3, epsilon=Fraction(3, 2)))


def test_bound_monotonicity_grid():
    eps_grid = [Fraction(i, 10) for i in range(11)]
    for statement in ("1.2", "1.4", "3.1", "7.1", "2.1"):
        previous = None
        for eps in eps_grid:
            params = BoundParams(n=2, k=3, epsilon=eps)
            value = bound_value(statement, params)
            assert value >= 0
            if previous is not None:
                assert value >= previous
            previous = value
    for statement in ("1.2", "3.1", "7.1", "2.1"):
        small = bound_value(statement, BoundParams(n=2, k=3, epsilon=Fraction(1, 2)))
        assert bound_value(statement, BoundParams(n=3, k=3, epsilon=Fraction(1, 2))) <= small
        assert bound_value(statement, BoundParams(n=2, k=4, epsilon=Fraction(1, 2))) <= small


def test_main_theorems_on_members_and_random():
    member = TopHDictator(2, 3, 0, range(3))
    for report in verify_main_theorems(member, ("1.2", "3.1", "7.1")):
        assert report.holds
        assert report.rhs == 0  # epsilon is 0
    f = random_table_scf(2, 3, 2024)
    for report in verify_main_theorems(f, ("1.2", "3.1", "7.1")):
        assert report.holds


def test_main_theorem_one_voter():
    anti = TableSCF(1, 3, [o[-1] for o in permutations(range(3))])
    (report,) = verify_main_theorems(anti, ("1.4",))
    assert report.holds
    assert report.lhs > 0
    with pytest.raises(ValueError):
        verify_main_theorems(Plurality(2, 3), ("1.4",))
    with pytest.raises(ValueError):
        verify_main_theorems(anti, ("3.1",))


def test_lemma_influences_vacuous_on_members():
    report = verify_lemma_influences(TopHDictator(2, 3, 0, range(3)), statement="2.1")
    assert report.holds
    assert any("precondition-not-met" in note for note in report.notes)


def test_lemma_influences_witnesses_random():
    f = random_table_scf(2, 3, 4242)
    for statement in ("2.1", "5.3"):
        report = verify_lemma_influences(f, statement=statement)
        assert report.holds
        if "witness" in report.witnesses:
            first = report.witnesses["witness"]["first"]
            second = report.witnesses["witness"]["second"]
            assert first["coordinate"] != second["coordinate"]
            assert second["pair"][0] not in first["pair"]


def test_lemma_influences_one_voter():
    anti = TableSCF(1, 3, [o[-1] for o in permutations(range(3))])
    report = verify_lemma_influences(anti, statement="6.1")
    assert report.holds
    with pytest.raises(ValueError):
        verify_lemma_influences(anti, statement="2.1")
    with pytest.raises(ValueError):
        verify_lemma_influences(Plurality(2, 3), statement="6.1")


def test_lemma_influences_precondition_violation():
    f = Plurality(2, 3)
    with pytest.raises(ValueError):
        verify_lemma_influences(f, epsilon=Fraction(99, 100), statement="2.1")


def test_thm_1_5_branches():
    # A nonmanipulable member satisfies the distance branch for any alpha > 0.
    member = TopHDictator(2, 3, 0, range(3))
    report = verify_thm_1_5(member, alpha=Fraction(1, 100))
    assert report.holds and report.witnesses["distance_branch"]

    # One-coordinate but manipulable: alpha measures 0, the manipulation
    # branch holds trivially and the report flags the degeneracy.
    anti_orders = [o[-1] for o in permutations(range(3))]
    one_coord = OneCoordinate(2, 3, 0, anti_orders)
    report = verify_thm_1_5(one_coord)
    assert report.holds
    assert report.witnesses["alpha"] == "0/1"
    assert any("degenerate" in note for note in report.notes)

    # Perturbing a dictator at one profile: alpha = 1/36.
    table = TopHDictator(2, 3, 0, range(3)).table()
    table = list(table)
    table[7] = (table[7] + 1) % 3
    bumped = TableSCF(2, 3, table)
    report = verify_thm_1_5(bumped)
    assert report.holds

    with pytest.raises(ValueError):
        verify_thm_1_5(bumped, alpha=Fraction(0))


def test_reverse_hypercontractivity_cases():
    full = list(range(8))
    report = verify_reverse_hypercontractivity(3, Fraction(1, 3), full, full)
    assert report.holds and report.lhs == 1

    # rho = 0: joint factorizes, and P1 P2 >= min^2.
    report = verify_reverse_hypercontractivity(2, Fraction(0), [0, 1], [2])
    assert report.lhs == Fraction(2, 4) * Fraction(1, 4)
    assert report.holds

    # Integer exponent 3 at rho = 1/3.
    report = verify_reverse_hypercontractivity(2, Fraction(1, 3), [0], [3])
    assert report.rhs == Fraction(1, 64)
    assert report.holds

    # Fractional exponent goes through the cross-powered comparison.
    report = verify_reverse_hypercontractivity(2, Fraction(1, 5), [0], [3])
    assert report.rhs is None
    assert report.holds
    assert any("fractional exponent" in note for note in report.notes)

    with pytest.raises(ValueError):
        verify_reverse_hypercontractivity(2, Fraction(1), [0], [1])
    with pytest.raises(CapExceededError):
        verify_reverse_hypercontractivity(64, Fraction(1, 3), [0], [1])


def test_reverse_hypercontractivity_exact_joint():
    # n = 1, rho = 1/3, B1 = B2 = {+1}: joint is the single atom (1+rho)/4 = 1/3.
    report = verify_reverse_hypercontractivity(1, Fraction(1, 3), [1], [1])
    assert report.lhs == Fraction(1, 3)
    assert report.rhs == Fraction(1, 8)
    assert report.holds


def test_preference_correlation_preset():
    assert RHO_PREFERENCE_PAIRS == Fraction(1, 3)
    assert preference_correlation_check()


def test_sweep_one_voter_k3():
    report = sweep_one_voter(3)
    assert report.total == 729
    assert report.holds
    assert report.stats["nonmanipulable_functions"] == 7
    with pytest.raises(CapExceededError):
        sweep_one_voter(4)


def test_sweep_random_tables_small():
    report = sweep_random_tables(2, 3, 25, seed=99)
    assert report.total == 25
    assert report.holds


def test_report_lines_format():
    from votemanip.verify import report_lines

    f = random_table_scf(2, 3, 7)
    text = report_lines(verify_main_theorems(f, ("1.2", "7.1")))
    lines = text.strip().split("\n")
    assert len(lines) == 2
    rows = [json.loads(line) for line in lines]
    assert [row["statement"] for row in rows] == ["1.2", "7.1"]
    assert all(row["holds"] for row in rows)


def test_write_counterexample(tmp_path):
    f = random_table_scf(2, 3, 1)
    report = VerificationReport("demo", Fraction(0), Fraction(1), False)
    path = write_counterexample(report, f, str(tmp_path / "bundle"))
    doc = json.loads(open(path).read())
    assert doc["report"]["statement"] == "demo"
    assert doc["shape"] == {"n": 2, "k": 3}
    assert (tmp_path / "bundle" / "scf_table.json").exists()
