import pytest

from alcqisat import (
    AtLeast,
    AtMost,
    Atom,
    CorpusProfile,
    ProblemFile,
    ProblemFileError,
    Role,
    TOP,
    generate_corpus,
    parse_problem_text,
    parse_tbox_text,
)
from alcqisat.syntax import walk_concepts

A, B = Atom("A"), Atom("B")


def test_parse_full_file():
    text = """\
# regression instance
gci A (atleast 1 R B)

axiom (or (not B) A)   # trailing comment
sat (and A B)
"""
    pf = parse_problem_text(text)
    assert pf.tbox == (
        (A, AtLeast(1, Role("R"), B)),
        (TOP, parse_problem_text("sat (or (not B) A)").query),
    )
    assert pf.query == parse_problem_text("sat (and A B)").query


def test_round_trip():
    pf = parse_problem_text("gci A B\nsat (atmost 2 (inv R) (or A B))\n")
    assert parse_problem_text(pf.to_text()) == pf


def test_missing_sat_line():
    with pytest.raises(ProblemFileError):
        parse_problem_text("gci A B\n")


def test_two_sat_lines():
    with pytest.raises(ProblemFileError) as err:
        parse_problem_text("sat A\nsat B\n")
    assert err.value.line == 2


def test_gci_arity_checked():
    with pytest.raises(ProblemFileError):
        parse_problem_text("gci A\nsat B\n")
    with pytest.raises(ProblemFileError):
        parse_problem_text("gci A B C\nsat B\n")


def test_error_location():
    with pytest.raises(ProblemFileError) as err:
        parse_problem_text("sat A\ngci (and A) B\n")
    assert err.value.line == 2
    assert err.value.column == 6


def test_unknown_directive():
    with pytest.raises(ProblemFileError):
        parse_problem_text("check A\nsat B\n")


def test_tbox_file_rejects_sat():
    assert parse_tbox_text("gci A B\n") == ((A, B),)
    with pytest.raises(ProblemFileError):
        parse_tbox_text("sat A\n")


def test_corpus_deterministic():
    one = generate_corpus(seed=1, count=5)
    two = generate_corpus(seed=1, count=5)
    assert one == two
    assert generate_corpus(seed=2, count=5) != one


def test_corpus_single_instance_is_stable():
    (pf,) = generate_corpus(seed=1, count=1)
    assert parse_problem_text(pf.to_text()) == pf


def test_corpus_empty():
    assert generate_corpus(seed=1, count=0) == []


def test_corpus_depth_zero_is_propositional():
    for pf in generate_corpus(seed=4, count=30, profile=CorpusProfile(max_depth=0)):
        for lhs, rhs in pf.tbox + ((TOP, pf.query),):
            for node in list(walk_concepts(lhs)) + list(walk_concepts(rhs)):
                assert not isinstance(node, (AtLeast, AtMost))


def test_corpus_respects_profile_bounds():
    profile = CorpusProfile(max_depth=3, max_bound=3, max_roles=2, max_atoms=3)
    for pf in generate_corpus(seed=6, count=50, profile=profile):
        names = set()
        roles = set()
        for lhs, rhs in pf.tbox + ((TOP, pf.query),):
            for node in list(walk_concepts(lhs)) + list(walk_concepts(rhs)):
                if isinstance(node, Atom):
                    names.add(node.name)
                if isinstance(node, (AtLeast, AtMost)):
                    roles.add(node.role.base)
                    assert node.bound <= 3
        assert len(names) <= 3
        assert len(roles) <= 2


def test_problem_file_to_text_shape():
    pf = ProblemFile(tbox=((A, B),), query=A)
    assert pf.to_text() == "gci A B\nsat A\n"
