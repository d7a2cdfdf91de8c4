import random

import pytest

from alcqisat import (
    AtLeast,
    AtMost,
    Atom,
    BOTTOM,
    ConceptSyntaxError,
    NegAtom,
    Not,
    Role,
    TOP,
    build_problem,
    concept_to_text,
    conj,
    cut_formulae,
    cut_table,
    disj,
    evaluate,
    internalize,
    modal_subformulae,
    negate,
    parse_concept,
    to_nnf,
)
from conftest import random_interpretation, random_raw_concept

A, B, C = Atom("A"), Atom("B"), Atom("C")
R = Role("R")


def test_parse_atleast():
    assert parse_concept("(atleast 2 R C)") == AtLeast(2, R, C)


def test_parse_not_echoes_structure():
    c = parse_concept("(not (and A B))")
    assert isinstance(c, Not)
    assert c.sub == conj([A, B])


def test_parse_inverse_role():
    assert parse_concept("(atmost 0 (inv R) top)") == AtMost(0, Role("R", True), TOP)


def test_parse_double_inverse_normalizes():
    assert parse_concept("(atleast 1 (inv (inv R)) A)") == AtLeast(1, R, A)


def test_parse_top_bottom_names():
    assert parse_concept("top") == TOP
    assert parse_concept("bottom") == BOTTOM
    assert parse_concept("myConcept_1") == Atom("myConcept_1")


@pytest.mark.parametrize(
    "text",
    [
        "(atleast -1 R C)",
        "(and A)",
        "(foo A B)",
        "(atleast x R C)",
        "(and A B",
        "A B",
        "()",
        "(not)",
        "(atmost 1 2 C)",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(ConceptSyntaxError):
        parse_concept(text)


def test_parse_error_carries_position():
    with pytest.raises(ConceptSyntaxError) as err:
        parse_concept("(and A (atleast -3 R B))")
    assert err.value.position == 16


def test_role_inverse_involution():
    assert R.inverse().inverse() == R
    assert R.inverse() == Role("R", True)


def test_and_or_children_are_canonical():
    assert parse_concept("(and B A)") == parse_concept("(and A B)")
    assert parse_concept("(or B (or A C))") == disj([A, B, C])
    assert parse_concept("(and A A)") == A


def test_nnf_double_negation():
    assert to_nnf(Not(Not(C))) == C


def test_nnf_bound_shifts():
    assert to_nnf(Not(AtLeast(3, R, C))) == AtMost(2, R, C)
    assert to_nnf(Not(AtMost(3, R, C))) == AtLeast(4, R, C)


def test_nnf_atleast_zero_negation_is_bottom():
    # at-least 0 holds everywhere, so its negation collapses instead of
    # producing a negative bound
    assert to_nnf(Not(AtLeast(0, R, C))) == BOTTOM
    assert to_nnf(AtLeast(0, R, C)) == TOP


def test_nnf_keeps_literals():
    assert to_nnf(A) == A
    assert to_nnf(NegAtom("A")) == NegAtom("A")


def test_nnf_de_morgan():
    assert to_nnf(Not(conj([A, B]))) == disj([NegAtom("A"), NegAtom("B")])
    assert to_nnf(Not(disj([A, B]))) == conj([NegAtom("A"), NegAtom("B")])


def test_negate_examples():
    assert negate(conj([A, B])) == disj([NegAtom("A"), NegAtom("B")])
    assert negate(AtMost(3, R, C)) == AtLeast(4, R, C)
    assert negate(TOP) == BOTTOM


def test_nnf_idempotent():
    rng = random.Random(7)
    for _ in range(300):
        c = random_raw_concept(rng, rng.randint(0, 4))
        n = to_nnf(c)
        assert to_nnf(n) == n


def test_negate_is_involution_on_nnf():
    rng = random.Random(11)
    for _ in range(300):
        c = to_nnf(random_raw_concept(rng, rng.randint(0, 4)))
        assert negate(negate(c)) == c
        assert to_nnf(negate(negate(c))) == c


def test_nnf_and_negate_agree_with_semantics():
    rng = random.Random(13)
    for _ in range(200):
        c = random_raw_concept(rng, rng.randint(0, 3))
        interp = random_interpretation(rng)
        n = to_nnf(c)
        for x in range(interp.domain_size):
            assert evaluate(interp, c, x) == evaluate(interp, n, x)
            assert evaluate(interp, negate(n), x) == (not evaluate(interp, n, x))


def test_internalize_empty():
    assert internalize([]) == TOP


def test_internalize_top_lhs_drops_disjunct():
    assert internalize([(TOP, C)]) == to_nnf(C)


def test_internalize_two_axioms():
    g = internalize([(A, B), (B, C)])
    assert g == conj([disj([NegAtom("A"), B]), disj([NegAtom("B"), C])])


def test_modal_subformulae_nested():
    s = Role("S")
    inner = AtMost(0, s, A)
    e = AtLeast(1, R, inner)
    found = modal_subformulae(e, TOP)
    assert found == frozenset({(R, inner, "atleast", 1), (s, A, "atmost", 0)})


def test_modal_subformulae_empty():
    assert modal_subformulae(A) == frozenset()


def test_modal_subformulae_shared_pair():
    e = conj([AtLeast(2, R, C), AtMost(1, R, C)])
    found = modal_subformulae(e)
    assert len(found) == 2
    assert {(r, f) for r, f, _, _ in found} == {(R, C)}


def test_cut_formula_shape():
    e = AtLeast(2, R, C)
    cuts = cut_formulae(e, TOP)
    assert cuts == {disj([AtMost(0, Role("R", True), TOP), C, NegAtom("C")])}


def test_cut_formulae_vacuous():
    assert cut_formulae(A, TOP) == frozenset()


def test_cut_formula_guard_uses_inverse_of_inverse():
    s_inv = Role("S", True)
    e = AtMost(1, s_inv, Atom("D"))
    (cf,) = cut_table(e, TOP)
    assert cf.guard == AtMost(0, Role("S"), TOP)
    assert cf.role == s_inv
    assert cf.formula == disj([AtMost(0, Role("S"), TOP), Atom("D"), NegAtom("D")])


def test_cut_count_bounded_by_distinct_pairs():
    rng = random.Random(17)
    for _ in range(100):
        e = to_nnf(random_raw_concept(rng, 3))
        g = to_nnf(random_raw_concept(rng, 2))
        pairs = {(r, f) for r, f, _, _ in modal_subformulae(e, g)}
        assert len(cut_formulae(e, g)) <= len(pairs)


def test_round_trip_printing():
    rng = random.Random(19)
    for _ in range(200):
        c = to_nnf(random_raw_concept(rng, rng.randint(0, 4)))
        assert parse_concept(concept_to_text(c)) == c


def test_build_problem_signature():
    p = build_problem(parse_concept("(and A (atleast 1 R (not B)))"))
    assert p.atom_names == {"A", "B"}
    assert p.role_names == {"R"}
