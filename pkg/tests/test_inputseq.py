"""Index sequences: exact digits, bulk truncations, u.d. verdicts, grammar."""

import random
from fractions import Fraction

import pytest

from badicnets import badic
from badicnets.errors import (NotBAdicInteger, PrecisionExhausted,
                              SpecGrammarError, TooLarge)
from badicnets.inputseq import (AffineSequence, AlternatingSequence,
                                BeattySequence, CustomSequence, NaturalSequence,
                                NegativeShiftedSequence, QuadraticSequence,
                                RationalAffineSequence, SubsequenceView,
                                UDVerdict, empirical_ud_test, is_ud_expected,
                                parse_sequence_spec)

ALL_KINDS = [
    NaturalSequence(2),
    NegativeShiftedSequence(2),
    AlternatingSequence(3),
    AffineSequence(2, Fraction(1, 3), Fraction(2, 5)),
    AffineSequence(5, 3, 1),
    RationalAffineSequence(3, 2, Fraction(1, 2)),
    QuadraticSequence(2, 1, 0, 0),
    QuadraticSequence(5, Fraction(5), Fraction(2, 3), 7),
    BeattySequence(2, 1393, 985, 10**6),  # convergent of sqrt(2)
]


def test_eval_examples():
    assert NaturalSequence(2).eval(5).digits(4) == (1, 0, 1, 0)
    assert NegativeShiftedSequence(2).eval(0).digits(5) == (1, 1, 1, 1, 1)
    alt = AlternatingSequence(3)
    assert alt.eval(0).digits(3) == (0, 0, 0)
    assert alt.eval(1).digits(3) == (2, 2, 2)      # -1
    assert alt.eval(2).digits(3) == (1, 0, 0)      # +1
    assert alt.eval(3).digits(3) == (1, 2, 2)      # -2


def test_alternating_splits_into_natural_and_negative_shift():
    for b in (2, 5):
        alt = AlternatingSequence(b)
        nat = NaturalSequence(b)
        neg = NegativeShiftedSequence(b)
        for n in range(40):
            assert alt.eval(2 * n).digits(20) == nat.eval(n).digits(20)
            assert alt.eval(2 * n + 1).digits(20) == neg.eval(n).digits(20)


def test_rational_affine_subsequence_split():
    # s_{vn+j} must equal n + (j/v + alpha)
    v, b, alpha = 3, 2, Fraction(1, 5)
    seq = RationalAffineSequence(b, v, alpha)
    for j in range(v):
        shifted = AffineSequence(b, 1, Fraction(j, v) + alpha)
        view = SubsequenceView(seq, v, j)
        for n in range(25):
            assert view.eval(n).digits(24) == shifted.eval(n).digits(24)


@pytest.mark.parametrize("seq", ALL_KINDS, ids=lambda s: s.spec_string())
def test_bulk_truncations_match_eval(seq):
    for k in (1, 3, 7):
        bulk = seq.truncations(5, 40, k)
        single = [seq.eval(n).truncate(k) for n in range(5, 45)]
        assert bulk == single


def test_eval_deterministic():
    for seq in ALL_KINDS:
        assert seq.eval(7).digits(16) == seq.eval(7).digits(16)


def test_beatty_floor_values_and_guard():
    seq = BeattySequence(10, 22, 7, 50)  # 22/7 as a pi surrogate
    for n in range(20):
        expected = (22 * n) // 7
        assert seq.eval(n).as_rational() == expected
    with pytest.raises(PrecisionExhausted):
        seq.eval(51)
    with pytest.raises(PrecisionExhausted):
        seq.truncations(40, 20, 2)


def test_custom_sequence_memoizes():
    calls = []

    def fn(n):
        calls.append(n)
        return badic.integer_digits(n * n, 3)

    seq = CustomSequence(3, fn)
    a = seq.eval(4)
    b = seq.eval(4)
    assert a is b and calls == [4]


def test_ud_verdicts():
    assert is_ud_expected(NaturalSequence(7)) is UDVerdict.UD
    assert is_ud_expected(NegativeShiftedSequence(4)) is UDVerdict.UD
    assert is_ud_expected(RationalAffineSequence(3, 2, 0)) is UDVerdict.UD
    assert is_ud_expected(AffineSequence(2, 3, 0)) is UDVerdict.UD
    assert is_ud_expected(AffineSequence(2, 2, 1)) is UDVerdict.NOT_UD
    assert is_ud_expected(QuadraticSequence(2, 1, 0, 0)) is UDVerdict.NOT_UD
    # |a|_b < 1 with unit c: u.d. by the quadratic criterion
    assert is_ud_expected(QuadraticSequence(5, 5, 1, 3)) is UDVerdict.UD
    assert is_ud_expected(QuadraticSequence(5, 1, 1, 0)) is UDVerdict.UNKNOWN
    assert is_ud_expected(AlternatingSequence(2)) is UDVerdict.UNKNOWN
    assert is_ud_expected(BeattySequence(2, 1393, 985, 100)) is UDVerdict.UNKNOWN
    assert is_ud_expected(CustomSequence(2, lambda n: badic.integer_digits(n, 2))) \
        is UDVerdict.UNKNOWN


def test_empirical_ud_examples():
    rep = empirical_ud_test(NaturalSequence(2), 3, 8)
    assert rep.deviation == 0
    rep = empirical_ud_test(QuadraticSequence(2, 1, 0, 0), 3, 8000)
    assert rep.deviation >= Fraction(1, 8)
    rep = empirical_ud_test(NegativeShiftedSequence(3), 2, 9000)
    assert rep.deviation <= Fraction(2, 9000)


def test_empirical_ud_guards():
    with pytest.raises(TooLarge):
        empirical_ud_test(NaturalSequence(10), 7, 10**7)
    with pytest.raises(ValueError):
        empirical_ud_test(NaturalSequence(2), 3, 4)


def test_ud_deviation_decreases_for_ud_sequences():
    # u.d. verdict sequences: empirical deviation small and shrinking
    for b, k in ((2, 3), (5, 3), (3, 2)):
        for seq in (NaturalSequence(b), NegativeShiftedSequence(b),
                    AffineSequence(b, 1, Fraction(1, b + 1)),
                    RationalAffineSequence(b, b + 1, 0)):
            assert is_ud_expected(seq) is UDVerdict.UD
            cells = b**k
            small = empirical_ud_test(seq, k, 100 * cells).deviation
            large = empirical_ud_test(seq, k, 1000 * cells).deviation
            assert small <= Fraction(5, cells)
            assert large <= small


def test_grammar_round_trip():
    cases = ["natural", "neg", "alt", "affine:a=1/3,c=2/5", "rat:v=2,alpha=1/2",
             "quad:a=5,c=2/3,d=7", "beatty:p=1393,q=985,nmax=1000"]
    for text in cases:
        seq = parse_sequence_spec(text, 7)
        again = parse_sequence_spec(seq.spec_string(), 7)
        assert again.spec_string() == seq.spec_string()
        assert [s.truncate(3) for s in map(seq.eval, range(10))] == \
               [s.truncate(3) for s in map(again.eval, range(10))]


def test_grammar_errors():
    with pytest.raises(SpecGrammarError):
        parse_sequence_spec("vdc", 2)
    with pytest.raises(SpecGrammarError):
        parse_sequence_spec("affine:a=1/3", 2)  # missing c
    with pytest.raises(SpecGrammarError):
        parse_sequence_spec("beatty:p=x,q=1,nmax=5", 2)
    with pytest.raises(NotBAdicInteger):
        parse_sequence_spec("rat:v=5,alpha=0", 5)  # gcd(v, b) != 1
    with pytest.raises(NotBAdicInteger):
        parse_sequence_spec("affine:a=1/2,c=0", 2)  # a outside Z_2


def test_non_lowest_terms_are_canonicalized():
    seq = parse_sequence_spec("affine:a=2/6,c=0", 5)
    assert seq.spec_string() == "affine:a=1/3,c=0"


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        NaturalSequence(2).eval(-1)
