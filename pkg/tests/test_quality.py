"""Rank conditions, T profiles, and brute-force net verification."""

import random
from fractions import Fraction

import pytest

from badicnets import engine, genmatrix, quality
from badicnets.engine import BijectionFamily, DigitalPoint
from badicnets.errors import InvalidT, SizeMismatch, TooLarge
from badicnets.field import make_field
from badicnets.genmatrix import (GeneratingMatrix, MatrixSet,
                                 identity_matrix, identity_matrix_set,
                                 pairs_matrix, stirling_matrix_set)
from badicnets.inputseq import (NaturalSequence, NegativeShiftedSequence,
                                QuadraticSequence, SubsequenceView,
                                AlternatingSequence)
from badicnets.quality import (TProfile, check_condition1, check_condition2,
                               compositions, interval_deviation, rank_gf,
                               t_profile, verify_T_sequence, verify_net)

F2 = make_field(2)
F5 = make_field(5)
BIJ2 = BijectionFamily.identity(2)


def test_rank_examples():
    assert rank_gf([(1,), (0, 1), (0, 0, 1)], 3, F2) == 3
    assert rank_gf([(1, 1), (0, 0, 1, 1)], 2, F2) == 1
    assert rank_gf([(0, 0), (0, 0)], 2, F2) == 0
    assert rank_gf([(1, 2), (2, 4)], 2, F5) == 1
    assert rank_gf([(1, 2), (2, 3)], 2, F5) == 2


def test_rank_against_gf4_table_arithmetic():
    f4 = make_field(2, 2)
    # rows (x, 1), (x+1, ?): independent unless second = scalar multiple
    assert rank_gf([(2, 1), (3, f4.mul(3, f4.inv(2)))], 2, f4) == 1
    assert rank_gf([(2, 1), (3, 1)], 2, f4) == 2


def test_condition1_examples():
    iset = identity_matrix_set(F2, 1, 8)
    ok, wit = check_condition1(iset, 5, 5)
    assert ok and wit is None
    pairs = MatrixSet(F2, [pairs_matrix(8)])
    ok, wit = check_condition1(pairs, 2, 2)
    assert not ok and wit == (2,)
    ok, _ = check_condition1(pairs, 2, 1)
    assert ok


def test_condition1_monotone_in_k():
    rng = random.Random(3)
    for _ in range(30):
        field = make_field(rng.choice((2, 3, 5)))
        s = rng.randrange(1, 3)
        mats = [GeneratingMatrix(field,
                                 [[rng.randrange(field.q)
                                   for _ in range(rng.randrange(1, 9))]
                                  for _ in range(6)])
                for _ in range(s)]
        mset = MatrixSet(field, mats)
        m = rng.randrange(1, 7)
        passing = [k for k in range(1, m + 1) if check_condition1(mset, m, k)[0]]
        # if layer k passes, every smaller layer passes
        assert passing == list(range(1, len(passing) + 1))


def test_t_profile_identity_pairs_stirling():
    assert t_profile(identity_matrix_set(F2, 1, 8), 8).values == [0] * 9
    pairs = MatrixSet(F2, [pairs_matrix(8)])
    prof = t_profile(pairs, 8)
    assert prof.values == [m // 2 for m in range(9)]
    # certificates reproduce: the witness composition must fail the rank check
    for m in range(1, 9):
        cert = prof.certificates[m]
        if prof.values[m] > 0:
            assert cert is not None
            assert not check_condition1(pairs, m, sum(cert))[0]
    assert t_profile(stirling_matrix_set(F5, 2, 6), 6).values == [0] * 7


def test_t_profile_all_zero_rows():
    zset = MatrixSet(F2, [GeneratingMatrix(F2, [[0], [0], [0]])])
    prof = t_profile(zset, 3)
    assert prof.values == [0, 1, 2, 3]  # T(m) = m when even k=1 fails
    assert prof.t == 3


def test_condition2_examples():
    assert check_condition2(identity_matrix_set(F2, 1, 10), [10])
    assert check_condition2(MatrixSet(F2, [pairs_matrix(10)]), [10])
    dup = MatrixSet(F2, [identity_matrix(F2, 5), identity_matrix(F2, 5)])
    assert not check_condition2(dup, [3, 3])


def test_verify_net_examples():
    iset = identity_matrix_set(F2, 1, 8)
    block = engine.generate_block(iset, BIJ2, NaturalSequence(2), 0, 8, 3)
    assert verify_net(block, 0, 3).passed
    origin = [DigitalPoint(2, ((0, 0, 0),))] * 8
    rep = verify_net(origin, 0, 3)
    assert not rep.passed
    assert rep.first_failure == {"d": [3], "a": [0], "count": 8, "expected": 1}
    assert verify_net(origin, 3, 3).passed  # single interval of volume 1


def test_verify_net_permutation_invariant():
    iset = identity_matrix_set(F2, 1, 8)
    block = engine.generate_block(iset, BIJ2, NaturalSequence(2), 0, 16, 4)
    pts = list(block)
    rng = random.Random(11)
    for _ in range(3):
        rng.shuffle(pts)
        assert verify_net(pts, 0, 4).passed


def test_verify_net_guards():
    iset = identity_matrix_set(F2, 1, 8)
    block = engine.generate_block(iset, BIJ2, NaturalSequence(2), 0, 8, 3)
    with pytest.raises(SizeMismatch):
        verify_net(list(block)[:-1], 0, 3)
    with pytest.raises(InvalidT):
        verify_net(block, 4, 3)
    with pytest.raises(TooLarge):
        verify_net(block, 0, 25)


def test_verify_t_sequence_examples():
    iset = identity_matrix_set(F2, 1, 8)
    for seq in (NaturalSequence(2), NegativeShiftedSequence(2)):
        reports = verify_T_sequence(iset, BIJ2, seq, 4, range(4), t=0)
        assert all(r.passed and not r.vacuous for r in reports)
        assert [r.block_index for r in reports] == [0, 1, 2, 3]
    even = SubsequenceView(AlternatingSequence(2), 2, 0)
    reports = verify_T_sequence(iset, BIJ2, even, 4, range(4), t=0)
    assert all(r.passed for r in reports)


def test_verify_t_sequence_vacuous_flag():
    zset = MatrixSet(F2, [GeneratingMatrix(F2, [[0], [0], [0]])])
    profile = t_profile(zset, 3)
    reports = verify_T_sequence(zset, BIJ2, NaturalSequence(2), 3, range(2),
                                profile=profile)
    assert all(r.vacuous and r.passed for r in reports)


def test_profile_oracle_agreement_small():
    # rank-based T(m) equals the brute-force minimal t on blocks 0 and 1
    pairs = MatrixSet(F2, [pairs_matrix(8)])
    profile = t_profile(pairs, 6)
    for m in range(1, 7):
        best = None
        for t in range(m + 1):
            good = all(verify_net(
                engine.generate_block(pairs, BIJ2, NaturalSequence(2),
                                      k * 2**m, 2**m, m), t, m).passed
                for k in (0, 1))
            if good:
                best = t
                break
        assert best == profile.values[m]


def test_interval_deviation_converges_for_ud_inputs():
    # frequencies approach uniformity as N grows (fixed depth)
    iset = identity_matrix_set(F2, 1, 8)
    for seq in (NaturalSequence(2), NegativeShiftedSequence(2)):
        small = interval_deviation(
            engine.generate_block(iset, BIJ2, seq, 0, 40, 2), (2,))
        large = interval_deviation(
            engine.generate_block(iset, BIJ2, seq, 0, 4000, 2), (2,))
        assert large < small


def test_squares_leave_intervals_empty():
    # depth-3 output intervals for squares input: only 3 of 8 are ever hit
    iset = identity_matrix_set(F2, 1, 8)
    seq = QuadraticSequence(2, 1, 0, 0)
    block = engine.generate_block(iset, BIJ2, seq, 0, 8000, 3)
    from badicnets import _backend

    counts = _backend.composition_counts(block.digit_buffer(), len(block),
                                         1, 3, (3,), 2)
    empty = {a for a, c in enumerate(counts) if c == 0}
    assert empty == {2, 3, 5, 6, 7}
    dev = interval_deviation(block, (3,))
    assert dev >= Fraction(1, 8)


def test_compositions_enumeration():
    comps = list(compositions(3, 2))
    assert comps == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert list(compositions(0, 3)) == [(0, 0, 0)]


def test_profile_constant_and_json():
    prof = TProfile.constant(2, 5)
    assert prof.values == [0, 1, 2, 2, 2, 2]
    obj = prof.to_json_obj()
    assert obj["T"] == [0, 1, 2, 2, 2, 2]
    rep = verify_net([DigitalPoint(2, ((0,),)), DigitalPoint(2, ((1,),))], 0, 1)
    assert rep.to_json_obj()["pass"] is True
