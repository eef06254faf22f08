import pytest
from hypothesis import given, settings, strategies as st

from relrep.dsl import StructureParseError, parse_structure, serialize_structure
from relrep.family import gen_sn
from relrep.relcore import Rel, generate_concrete
from relrep.algebra import abstract_proper
from relrep.signature import DRS

from structures import ONE_TEXT, partial_function_algebra


def parse_error(text):
    with pytest.raises(StructureParseError) as info:
        parse_structure(text)
    return info.value


def test_one_element():
    s = parse_structure(ONE_TEXT)
    assert s.name == "one" and s.elements == ("e",)
    assert s.mul(0, 0) == 0 and s.D(0) == 0 and s.R(0) == 0


def test_comments_and_default():
    text = """# a comment
structure z   # trailing comment
signature compose=angelic
elements a b
default compose = b
compose a a = a
end
"""
    s = parse_structure(text)
    assert [[s.elements[s.mul(x, y)] for y in range(2)] for x in range(2)] == [["a", "b"],
                                                                             ["b", "b"]]


def test_unknown_element_position():
    text = ONE_TEXT.replace("compose e e = e", "compose e e = c")
    err = parse_error(text)
    assert "unknown element" in err.message
    assert (err.line, err.column) == (6, 15)


def test_conflicting_duplicate():
    text = """structure t
signature compose=angelic
elements a b
compose a a = a
compose a a = b
default compose = a
end
"""
    err = parse_error(text)
    assert "conflicting duplicate" in err.message and err.line == 5
    # an identical duplicate is fine
    parse_structure(text.replace("compose a a = b", "compose a a = a"))


def test_missing_entries_reported_at_end():
    err = parse_error(ONE_TEXT.replace("compose e e = e\n", ""))
    assert "missing compose" in err.message and err.line == 6
    err = parse_error(ONE_TEXT.replace("range e = e\n", ""))
    assert "missing range" in err.message


def test_operation_outside_signature():
    text = ONE_TEXT.replace("range e = e", "converse e = e")
    assert "conv is not in the signature" in parse_error(text).message


@pytest.mark.parametrize("text, fragment", [
    ("structure x\nsignature compose=demonic D R\nelements e\n", "missing 'end'"),
    ("elements e\n", "structure <name>"),
    ("structure x\nsignature compose=sideways\nelements e\nend\n", "composition"),
    ("structure x\nsignature compose=demonic R\nelements e\nend\n", "D"),
    ("structure x\nsignature compose=none wobble\nelements e\nend\n", "unknown signature flag"),
    ("structure x\nsignature compose=none\nelements e e\nend\n", "duplicate element"),
    ("structure x\nsignature compose=none\nelements e\nfrobnicate\nend\n", "unknown directive"),
    ("structure x\nsignature compose=none\nelements e\nend\nend\n", "after 'end'"),
    ("structure x\nsignature compose=none id\nelements e\nend\n", "missing const id"),
])
def test_syntax_errors(text, fragment):
    assert fragment in parse_error(text).message


def test_sn_round_trip():
    s = gen_sn(1)
    text = serialize_structure(s)
    assert parse_structure(text) == s
    assert "default compose = 0" in text


def test_partial_function_round_trip():
    s, _ = partial_function_algebra()
    assert parse_structure(serialize_structure(s)) == s


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sets(st.tuples(st.integers(0, 1), st.integers(0, 1))), min_size=1, max_size=3))
def test_round_trip_property(gens):
    rels = generate_concrete(2, [Rel.from_pairs(2, g) for g in gens], DRS)
    s, _ = abstract_proper(rels, DRS)
    text = serialize_structure(s)
    assert parse_structure(text) == s
    assert serialize_structure(parse_structure(text)) == text
