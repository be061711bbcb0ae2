import pytest

from efftop.ceers import CeerPresentation, saturate
from efftop.ideals import (
    IdealObligations,
    RelationPresentation,
    ceer_to_ideal_space,
    format_relation,
    parse_relation,
    validate_ideal_prefix,
)


def chain(n):
    """The linear order 0 << 1 << ... << n-1 with all transitive pairs."""
    return RelationPresentation(
        pairs=[(i, j) for j in range(n) for i in range(j + 1)])


# ---------------------------------------------------------------------------
# Prefix validation


def test_clean_downward_closed_directed_prefix():
    rel = chain(4)
    ob = validate_ideal_prefix(rel, [0, 1, 2], fuel=100)
    assert ob.clean


def test_downward_closure_violation():
    rel = chain(4)
    ob = validate_ideal_prefix(rel, [0, 2], fuel=100)
    assert (1, 2) in ob.pending_down
    assert not ob.clean


def test_directedness_violation():
    # antichain {a, b} below nothing shared
    rel = RelationPresentation(pairs=[(0, 0), (1, 1)])
    ob = validate_ideal_prefix(rel, [0, 1], fuel=100)
    assert (0, 1) in ob.pending_directed


def test_directedness_resolved_by_upper_bound():
    rel = RelationPresentation(pairs=[(0, 0), (1, 1), (2, 2), (0, 2), (1, 2)])
    ob = validate_ideal_prefix(rel, [0, 1, 2], fuel=100)
    assert not ob.pending_directed


def test_obligations_shrink_with_growing_prefix():
    rel = chain(5)
    dirty = validate_ideal_prefix(rel, [0, 3], fuel=100)
    clean = validate_ideal_prefix(rel, [0, 1, 2, 3], fuel=100)
    assert dirty.pending_down and clean.clean


def test_low_fuel_sees_fewer_obligations():
    rel = chain(4)
    # with no relation pairs visible, nothing can be refuted downward and
    # directedness fails only for lack of witnessed upper bounds
    ob = validate_ideal_prefix(rel, [0, 2], fuel=0)
    assert not ob.pending_down


def test_repetition_padding_is_harmless():
    rel = chain(3)
    assert validate_ideal_prefix(rel, [0, 0, 1, 1, 0], fuel=100).clean


# ---------------------------------------------------------------------------
# Transitivity gap reporting


def test_transitivity_gaps():
    rel = RelationPresentation(pairs=[(0, 1), (1, 2)])
    assert (0, 1, 2) in rel.transitivity_gaps(10)
    assert chain(4).transitivity_gaps(100) == []


# ---------------------------------------------------------------------------
# Ceer correspondence


def test_ceer_induced_ideals_are_classes():
    pres = CeerPresentation(pairs=[(0, 1), (2, 3)])
    rel = ceer_to_ideal_space(pres)
    fuel = 2000
    # a full class validates cleanly
    assert validate_ideal_prefix(rel, [0, 1], fuel).clean
    assert validate_ideal_prefix(rel, [2, 3], fuel).clean
    # a strict subset of a class fails downward closure
    ob = validate_ideal_prefix(rel, [1], fuel)
    assert (0, 1) in ob.pending_down
    # a union of two classes fails directedness
    ob2 = validate_ideal_prefix(rel, [0, 1, 2, 3], fuel)
    assert ob2.pending_directed


def test_ceer_induced_singleton_class():
    pres = CeerPresentation(pairs=[])
    rel = ceer_to_ideal_space(pres)
    assert validate_ideal_prefix(rel, [4], 2000).clean


# ---------------------------------------------------------------------------
# File format


def test_relation_roundtrip():
    rel = RelationPresentation(pairs=[(0, 1), (3, 3)])
    text = format_relation(rel)
    assert text == "rel v1\n0 1\n3 3\n"
    assert parse_relation(text).pairs == [(0, 1), (3, 3)]


def test_relation_parse_errors():
    with pytest.raises(ValueError):
        parse_relation("bogus\n0 1\n")
    with pytest.raises(ValueError):
        format_relation(RelationPresentation(pair_fn=lambda f: []))
    with pytest.raises(ValueError):
        RelationPresentation()
