from fractions import Fraction

import pytest

from efftop.kernel import (
    NOT_YET,
    Confirmed,
    Halt,
    Inc,
    Name,
    ToyProgram,
    encode_word,
    pair,
    parse_program,
)
from efftop.spaces import (
    BallRegion,
    ClosedSetCode,
    DimensionMismatch,
    DyadicBall,
    DyadicPoint,
    OpenSetCode,
    adjoin_bottom,
    adjoin_bottom_embed,
    adjoin_bottom_name_of_bottom,
    audit_disjoint_on_grid,
    baire_basis,
    baire_cylinder,
    check_hausdorff_witness_sequence,
    dyadic,
    embed_into_opens_of_nat,
    extend_open,
    format_open_code,
    gamma_decode,
    gamma_encode,
    nat_discreteness,
    nat_hausdorff,
    nat_name,
    nat_point,
    nat_singleton_basis,
    nat_space,
    open_code_from_program,
    open_member,
    parse_open_code,
    product_space,
    reg_from_discrete_hausdorff,
    separate_by_balls,
    henorm_to_normsub,
    normsub_to_henorm,
    sierp_bottom_name,
    sierp_top_name,
    singleton_witness_sequence_for_nat,
)
from efftop.kernel import decode_word, unpair


# ---------------------------------------------------------------------------
# Open membership


def test_open_member_everything_nothing():
    x = nat_point(3)
    assert open_member(OpenSetCode.everything(), x, 10) == Confirmed(0)
    assert open_member(OpenSetCode.nothing(), x, 10**4) is NOT_YET


def test_open_member_first_symbol():
    u = OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] == 3)
    assert open_member(u, nat_point(3), 100) == Confirmed(1)
    assert open_member(u, nat_point(4), 10**3) is NOT_YET


def test_union_intersection():
    u = OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] == 3)
    v = OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] == 4)
    assert (u.union(v)).member(nat_name(4)).confirmed_at(10)
    assert not (u.intersection(v)).member(nat_name(4)).confirmed_at(100)


# ---------------------------------------------------------------------------
# Witnesses on N


def test_nat_witness_verdicts():
    d, h = nat_discreteness(), nat_hausdorff()
    for n in range(8):
        for m in range(8):
            dv = d.check(nat_name(n), nat_name(m)).confirmed_at(50)
            hv = h.check(nat_name(n), nat_name(m)).confirmed_at(50)
            assert dv == (n == m)
            assert hv == (n != m)


def test_product_space_meta_equality():
    from efftop.kernel import interleave

    prod = product_space(nat_space(), nat_space())
    a = interleave(nat_name(1), nat_name(2))
    b = interleave(nat_name(1), nat_name(2))
    c = interleave(nat_name(1), nat_name(3))
    assert prod.equal(a, b, 10)
    assert not prod.equal(a, c, 10)


# ---------------------------------------------------------------------------
# Adjoined bottom


def test_adjoin_bottom_names():
    space = adjoin_bottom(nat_space())
    bottom = adjoin_bottom_name_of_bottom()
    embedded = adjoin_bottom_embed(nat_name(4))
    other = adjoin_bottom_embed(nat_name(4))
    assert space.equal(bottom, adjoin_bottom_name_of_bottom(), 10)
    assert space.equal(embedded, other, 10)
    assert not space.equal(bottom, embedded, 10)
    # trivial open contains bottom
    assert OpenSetCode.everything().member(bottom).confirmed_at(1)


# ---------------------------------------------------------------------------
# Gamma coding and cylinders


def test_gamma_decode_example():
    p = Name.from_word((1, 0, 3), tail=0)
    assert gamma_decode(p, 100) == frozenset({0, 2})
    assert gamma_decode(Name.constant(0), 100) == frozenset()


def test_gamma_roundtrip():
    assert gamma_decode(gamma_encode({1, 4, 9}), 100) == frozenset({1, 4, 9})


def test_baire_basis_cylinder():
    empty_index = encode_word(())
    assert baire_basis(empty_index).member(Name.constant(7)).confirmed_at(1)
    idx = encode_word((3, 1))
    assert baire_basis(idx).member(Name.from_word((3, 1, 7), tail=0)).confirmed_at(10)
    assert not baire_basis(idx).member(Name.from_word((3, 2), tail=0)).confirmed_at(10**4)


# ---------------------------------------------------------------------------
# Effective basis and the embedding into O(N)


def test_embed_into_opens_of_nat():
    basis = nat_singleton_basis()
    code5 = embed_into_opens_of_nat(basis, nat_point(5))
    code6 = embed_into_opens_of_nat(basis, nat_point(6))
    assert gamma_decode(code5, 2000) == frozenset({5})
    assert gamma_decode(code5, 2000) != gamma_decode(code6, 2000)


def test_basis_decompose_reproduces_open():
    basis = nat_singleton_basis()
    u = OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] in (2, 4))
    decomposed = gamma_decode(basis.decompose(u), 5000)
    assert decomposed == frozenset({2, 4})


# ---------------------------------------------------------------------------
# Open-set extension through fibre-overtness


def test_extend_open_on_two_point_space():
    from efftop.zoo import first_symbol_fibre_overt

    rep = first_symbol_fibre_overt(2)
    v = baire_cylinder((1,))
    u = extend_open(rep, v)
    assert u.member(Name.from_word((1, 9), tail=9)).confirmed_at(100)
    assert not u.member(Name.from_word((0, 9), tail=9)).confirmed_at(10**3)
    empty = extend_open(rep, OpenSetCode.nothing())
    assert not empty.member(Name.constant(1)).confirmed_at(10**3)
    whole = extend_open(rep, OpenSetCode.everything())
    assert whole.member(Name.constant(0)).confirmed_at(100)


# ---------------------------------------------------------------------------
# Separation-property conversions


def test_reg_from_discrete_hausdorff():
    d, h = nat_discreteness(), nat_hausdorff()
    singleton, complement = reg_from_discrete_hausdorff(d, h, nat_point(4))
    assert singleton.member(nat_name(4)).confirmed_at(50)
    assert not complement.member(nat_name(4)).confirmed_at(10**4)
    assert complement.member(nat_name(9)).confirmed_at(50)
    # pointwise disjoint on samples
    for n in range(10):
        both = singleton.member(nat_name(n)).confirmed_at(100) \
            and complement.member(nat_name(n)).confirmed_at(100)
        assert not both


def _nat_singleton_closed(n):
    return ClosedSetCode(complement_open=OpenSetCode.from_prefix_predicate(
        lambda w: len(w) >= 1 and w[0] != n))


def test_henorm_normsub_conversions():
    def henorm(a, b):
        # reference hereditary-normality realizer for the singleton closed
        # sets used below: answer with the disjoint singleton opens
        u = OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] == 2)
        v = OpenSetCode.from_prefix_predicate(lambda w: len(w) >= 1 and w[0] == 5)
        return u, v

    ns = henorm_to_normsub(henorm)
    a, b = _nat_singleton_closed(2), _nat_singleton_closed(5)
    u, v = ns(OpenSetCode.everything(), a, b)
    assert u.member(nat_name(2)).confirmed_at(100)
    assert v.member(nat_name(5)).confirmed_at(100)
    u2, v2 = normsub_to_henorm(ns, a, b)
    assert u2.member(nat_name(2)).confirmed_at(100)
    assert v2.member(nat_name(5)).confirmed_at(100)
    for n in range(10):
        assert not (u2.member(nat_name(n)).confirmed_at(100)
                    and v2.member(nat_name(n)).confirmed_at(100))


# ---------------------------------------------------------------------------
# Dyadic balls and separation


def test_dyadic_validation():
    assert dyadic(3, 2) == Fraction(3, 4)
    with pytest.raises(ValueError):
        DyadicPoint.of(Fraction(1, 3))
    with pytest.raises(ValueError):
        DyadicPoint.of(Fraction(5, 4))


def test_ball_containment_exact():
    ball = DyadicBall.of((Fraction(1, 2),), Fraction(1, 4))
    assert ball.open_contains(DyadicPoint.of(Fraction(1, 2)))
    boundary = DyadicPoint.of(Fraction(3, 4))
    assert not ball.open_contains(boundary)
    assert ball.closed_contains(boundary)


def test_ball_dimension_mismatch():
    ball = DyadicBall.of((Fraction(1, 2),), Fraction(1, 4))
    with pytest.raises(DimensionMismatch):
        ball.open_contains(DyadicPoint.of(Fraction(0), Fraction(0)))


def test_separate_by_balls_empty():
    u, v = separate_by_balls(1, [], [], 10)
    p = DyadicPoint.of(Fraction(1, 2))
    assert not u.contains(p) and not v.contains(p)


def test_separate_by_balls_d1():
    # A = {0}, B = {1} in [0,1]
    missing_a = [DyadicBall.of((Fraction(1),), Fraction(1, 2))]
    missing_b = [DyadicBall.of((Fraction(0),), Fraction(1, 2))]
    u, v = separate_by_balls(1, missing_a, missing_b, 10)
    assert u.contains(DyadicPoint.of(Fraction(0)))
    assert v.contains(DyadicPoint.of(Fraction(1)))
    assert audit_disjoint_on_grid(u, v, 1, 8) == 0


def test_separate_by_balls_shared_ball_stays_disjoint():
    shared = DyadicBall.of((Fraction(1, 2),), Fraction(1, 4))
    missing_a = [shared, DyadicBall.of((Fraction(1),), Fraction(1, 4))]
    missing_b = [shared, DyadicBall.of((Fraction(0),), Fraction(1, 4))]
    u, v = separate_by_balls(1, missing_a, missing_b, 10)
    assert audit_disjoint_on_grid(u, v, 1, 8) == 0


def test_separate_by_balls_dimension_check():
    with pytest.raises(DimensionMismatch):
        separate_by_balls(2, [DyadicBall.of((Fraction(0),), Fraction(1, 4))], [], 10)


# ---------------------------------------------------------------------------
# Hausdorff witness sequences


def test_nat_witness_sequence_covers():
    ws = singleton_witness_sequence_for_nat()
    samples = [(nat_name(n), nat_name(m), n == m)
               for n in range(6) for m in range(6)]
    report = check_hausdorff_witness_sequence(ws, samples, 10**4)
    assert report.ok
    assert len(report.covered) == 30


def test_nat_witness_sequence_no_violation_on_diagonal():
    ws = singleton_witness_sequence_for_nat()
    report = check_hausdorff_witness_sequence(
        ws, [(nat_name(3), nat_name(3), True)], 10**4)
    assert report.violations == [] and report.failures == []


# ---------------------------------------------------------------------------
# Serialized open codes


def test_open_code_program_roundtrip():
    # program: output 1 iff r0 is nonzero is too clever for the toy set;
    # use: always halt with output r0 + 1 (nonzero), i.e. accept everything
    prog = ToyProgram([Inc(0), Halt()])
    text = format_open_code(prog, (4, 2))
    code, prog2, param = parse_open_code(text)
    assert prog2 == prog and param == (4, 2)
    assert code.member(nat_name(0)).confirmed_at(100)


def test_open_code_selective_program():
    # DECJZ r0 1 ; HALT / HALT: jumps to HALT when r0 == 0 -> output 0;
    # nonzero inputs decrement and halt with the remainder in r0
    prog = parse_program("DECJZ r0 1\nHALT\n")
    code = open_code_from_program(prog, ())
    # encode_word of a prefix is 0 only for the empty prefix; the name
    # 0^w has prefixes coding to small numbers; acceptance depends on the
    # program output being nonzero for some prefix code
    obs = code.member(Name.constant(3))
    assert obs.confirmed_at(200)
