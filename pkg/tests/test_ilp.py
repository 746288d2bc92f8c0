import random

import pytest

from zlq import Family, build_model, counting_summary, export_lp, verify, witness_set
from zlq.board import candidate_family, classify, make_edge
from zlq.fixtures import reference_family
from zlq.ilp import (
    SolutionFormatError,
    evaluate,
    family_to_assignment,
    import_solution,
    parse_solution_file,
)

from conftest import random_family


def test_witness_counts():
    assert len(witness_set(make_edge((0, 1, 2), (0, 3, 1)), 3)) == 8  # (6-2)(4-2)
    assert len(witness_set(make_edge((0, 1, 2), (0, 1, 3)), 3)) == 10  # (6-1)(4-2)
    assert len(witness_set(make_edge((0, 1, 2), (0, 2, 1)), 2)) == 1


def test_witness_set_matches_enumeration():
    for e in candidate_family(3, "full")[::7]:
        got = witness_set(e, 3)
        (i1, j1, c1), (i2, j2, c2) = e
        expected = [
            ((i, j), y)
            for (i, j) in [(a, b) for a in range(4) for b in range(a + 1, 4)]
            if (i, j) not in ((i1, j1), (i2, j2))
            for y in range(4)
            if y not in (c1, c2)
        ]
        assert got == expected


@pytest.mark.parametrize("q", [2, 3, 4])
def test_constraint_counts_match_closed_formulas(q):
    model = build_model(q, "full")
    summary = counting_summary(q)
    counts = model.counts()
    assert model.num_vars == summary.full + summary.available
    assert counts["S"] == summary.available
    assert counts["C2"] == summary.nondeg
    assert counts["C3"] == sum(len(witness_set(e, q)) for e in model.candidates)


def test_q3_variable_breakdown():
    model = build_model(3, "full")
    assert model.num_vars == 78  # 66 + 12
    assert model.counts()["S"] == 12
    assert build_model(2, "full").num_vars - 3 == 3  # 3 o-variables at q=2
    assert build_model(4, "full").num_x == 435


def test_static_constant_substitution():
    model = build_model(3, "full")
    k = model.candidates.index(((0, 1, 2), (2, 3, 0)))
    row = next(r for r in model.rows if r.name == f"c2_{k}")
    assert row.terms == ((1, k),) and row.rhs == 0  # reduces to x_k <= 0
    pruned = build_model(3, "full", prune_static=True)
    assert k in pruned.fixed_zero
    assert len(pruned.fixed_zero) == 36
    assert not any(r.name == f"c2_{k}" for r in pruned.rows)


def test_degenerate_c3_rows_keep_multiplicity():
    model = build_model(3, "full")
    # a row-degenerate candidate doubles its (row, y) occupancy term
    k = next(
        i for i, e in enumerate(model.candidates) if classify(e) == "row-degenerate"
    )
    rows = [r for r in model.rows if r.name.startswith(f"c3_{k}_")]
    assert rows
    assert any(any(coef == 2 for coef, _ in r.terms) or r.rhs < 5 for r in rows)
    for r in rows:
        weight = sum(coef for coef, var in r.terms if var >= model.num_x)
        assert weight + (5 - r.rhs) == 5  # five occupancy slots with multiplicity


def test_export_lp_deterministic_and_reparsable():
    model = build_model(3, "full")
    text = export_lp(model)
    assert text == export_lp(build_model(3, "full"))
    # structural re-parse: section row counts survive the round trip
    lines = text.splitlines()
    assert lines[1] == "Maximize"
    names = [ln.split(":")[0].strip() for ln in lines if ":" in ln and not ln.startswith("\\")]
    s_rows = sum(1 for n in names if n.startswith("s_"))
    c2_rows = sum(1 for n in names if n.startswith("c2_"))
    c3_rows = sum(1 for n in names if n.startswith("c3_"))
    counts = model.counts()
    assert (s_rows, c2_rows, c3_rows) == (counts["S"], counts["C2"], counts["C3"])
    binary_at = lines.index("Binary")
    assert lines[-1] == "End"
    assert len(lines) - binary_at - 2 == model.num_vars


def test_reference_assignment_imports_cleanly():
    model = build_model(3, "full")
    values = family_to_assignment(model, reference_family(3))
    imported = import_solution(model, values)
    assert imported.objective == 2
    assert imported.ilp_feasible and imported.verifier.ok and imported.consistent


def test_all_zero_assignment_is_the_empty_family():
    model = build_model(3, "full")
    imported = import_solution(model, [0] * model.num_vars)
    assert imported.objective == 0
    assert imported.family == Family.from_edges(3, [])
    assert imported.ilp_feasible and imported.verifier.ok


def test_s_equation_violation_is_flagged():
    model = build_model(3, "full")
    values = family_to_assignment(model, reference_family(3))
    # claim an occupied cell is empty: S equation breaks, family still verifies
    used = next(i for i in range(model.num_x, model.num_vars) if values[i] == 1)
    values[used] = 0
    imported = import_solution(model, values)
    assert not imported.ilp_feasible
    assert any(name.startswith("s_") for name in imported.violated_rows)
    assert imported.verifier.ok
    assert not imported.consistent


@pytest.mark.parametrize("q", [2, 3])
def test_feasibility_matches_verifier_on_random_subsets(q):
    model = build_model(q, "full")
    rng = random.Random(100 + q)
    admissible = inadmissible = 0
    for _ in range(200):
        fam = random_family(rng, q, 4)
        values = family_to_assignment(model, fam)
        feasible = not evaluate(model, values)
        ok = verify(fam).ok
        assert feasible == ok
        admissible += ok
        inadmissible += not ok
    assert admissible and inadmissible  # both sides of the oracle exercised


def test_parse_solution_file_tolerances_and_errors():
    model = build_model(2, "full")
    good = "# meta\n" + "\n".join(f"{n} {v}" for n, v in zip(model.var_names, ["0", "1.0000002", "0", "0.0", "0", "1"]))
    values = parse_solution_file(good, model)
    assert values == [0, 1, 0, 0, 0, 1]
    with pytest.raises(SolutionFormatError, match="incomplete"):
        parse_solution_file("x_0 1\n", model)
    with pytest.raises(SolutionFormatError, match="unknown"):
        parse_solution_file("y_9 1\n", model)
    with pytest.raises(SolutionFormatError, match="not binary"):
        parse_solution_file("x_0 0.4\n", model)
    with pytest.raises(SolutionFormatError, match="duplicate"):
        parse_solution_file("x_0 1\nx_0 1\n", model)
    with pytest.raises(SolutionFormatError, match="name value"):
        parse_solution_file("x_0 1 2\n", model)
