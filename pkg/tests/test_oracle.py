import random

import pytest

from alcqisat import (
    AtLeast,
    AtMost,
    Atom,
    Interpretation,
    NoneFound,
    OracleLimitError,
    Role,
    TOP,
    build_problem,
    conj,
    evaluate,
    find_model,
    parse_concept,
    to_nnf,
)
from conftest import random_interpretation, random_raw_concept

A = Atom("A")
R = Role("R")


def interp(n, concepts=None, roles=None):
    return Interpretation(
        domain_size=n,
        concept_extensions={k: frozenset(v) for k, v in (concepts or {}).items()},
        role_extensions={k: frozenset(v) for k, v in (roles or {}).items()},
    )


def test_top_everywhere():
    i = interp(2)
    assert evaluate(i, TOP, 0) and evaluate(i, TOP, 1)


def test_atleast_without_edges():
    i = interp(1, concepts={"C": {0}})
    assert not evaluate(i, AtLeast(1, R, Atom("C")), 0)


def test_inverse_counts_back_edges():
    # (x, y) in R makes x an R-inverse neighbor of y
    i = interp(2, concepts={"A": {0}}, roles={"R": {(0, 1)}})
    assert not evaluate(i, AtMost(0, Role("R", True), A), 1)
    assert evaluate(i, AtMost(0, Role("R", True), A), 0)


def test_unknown_name_is_empty():
    i = interp(1)
    assert not evaluate(i, Atom("Mystery"), 0)


def test_find_model_singleton():
    result = find_model(A)
    assert isinstance(result, Interpretation)
    assert result.domain_size == 1
    assert result.concept_extensions["A"] == frozenset({0})


def test_find_model_contradictory_counts():
    goal = to_nnf(parse_concept("(and (atleast 2 R C) (atmost 1 R top))"))
    result = find_model(goal)
    assert result == NoneFound(searched_max_domain=3)


def test_find_model_shared_successors():
    goal = to_nnf(parse_concept("(and (atleast 2 R A) (atleast 2 R B) (atmost 2 R top))"))
    result = find_model(goal)
    assert isinstance(result, Interpretation)
    # two successors in both A and B; self loops allowed, so two elements do
    assert result.domain_size == 2
    assert any(evaluate(result, goal, x) for x in range(result.domain_size))


def test_find_model_respects_axiom():
    result = find_model(A, to_nnf(parse_concept("(not A)")))
    assert isinstance(result, NoneFound)


def test_find_model_deterministic():
    goal = to_nnf(parse_concept("(or (atleast 1 R B) A)"))
    assert find_model(goal) == find_model(goal)


def test_signature_guard():
    goal = conj(Atom(f"N{i}") for i in range(4))
    with pytest.raises(OracleLimitError):
        find_model(goal)
    with pytest.raises(OracleLimitError):
        find_model(A, max_domain=4)


def test_budget_reports_searched_sizes():
    goal = to_nnf(parse_concept("(and (atleast 3 R (and A B)) (atmost 2 R top) (atleast 1 S C))"))
    result = find_model(goal, budget=10)
    assert isinstance(result, NoneFound)
    assert result.searched_max_domain == 0
    result = find_model(goal, budget=100)
    assert isinstance(result, NoneFound)
    assert result.searched_max_domain == 1


def test_models_satisfy_every_cut_formula():
    # cut formulas are valid, so any model extends to them without change
    rng = random.Random(23)
    checked = 0
    for _ in range(40):
        problem = build_problem(random_raw_concept(rng, rng.randint(0, 2), atoms=("A", "B"), roles=("R",)))
        result = find_model(problem.goal, problem.axiom)
        if not isinstance(result, Interpretation):
            continue
        checked += 1
        for cf in problem.cut_concepts:
            for x in range(result.domain_size):
                assert evaluate(result, cf, x)
    assert checked > 5


def test_evaluate_respects_de_morgan():
    rng = random.Random(29)
    for _ in range(150):
        c = random_raw_concept(rng, 2)
        d = random_raw_concept(rng, 2)
        i = random_interpretation(rng)
        for x in range(i.domain_size):
            both = evaluate(i, conj([c, d]), x)
            assert both == (evaluate(i, c, x) and evaluate(i, d, x))
