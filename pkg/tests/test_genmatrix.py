"""Generating matrices: builders, row lengths, convention gate, file I/O."""

import json

import pytest

from badicnets import genmatrix, quality
from badicnets.errors import (ConventionRejected, DepthExceeded,
                              EntryOutOfRange, SchemaError)
from badicnets.field import make_field
from badicnets.genmatrix import (GeneratingMatrix, MatrixSet,
                                 has_optimal_row_lengths, identity_matrix,
                                 identity_matrix_set, load_matrix_set,
                                 pairs_matrix, save_matrix_set, stirling1,
                                 stirling_matrix, stirling_matrix_set)


def test_identity_matrix():
    m = identity_matrix(make_field(2), 3)
    assert m.rows == ((1,), (0, 1), (0, 0, 1))
    assert m.row_length(2) == 2
    m5 = identity_matrix(make_field(5), 6)
    assert m5.row_length(5) == 5
    with pytest.raises(DepthExceeded):
        m.row(4)


def test_identity_has_optimal_row_lengths():
    mset = identity_matrix_set(make_field(3), 1, 10)
    assert has_optimal_row_lengths(mset, 10)


def test_pairs_matrix_rows():
    m = pairs_matrix(4)
    assert m.row(1) == (1, 1)
    assert m.row(3) == (0, 0, 0, 0, 1, 1)
    for j in range(1, 5):
        assert m.row_length(j) == 2 * j
    mset = MatrixSet(make_field(2), [m])
    assert not has_optimal_row_lengths(mset, 4)  # 2j > j for s = 1
    # the necessity bound for u.d. constructions still holds
    assert all(max(mat.row_length(j) for mat in mset.matrices) >= mset.s * j
               for j in range(1, 5))


def test_stirling_spot_value_against_recurrence_oracle():
    # independent recurrence: rows built bottom-up in plain integers
    table = {(0, 0): 1}
    for n in range(1, 10):
        for k in range(0, n + 1):
            table[(n, k)] = (table.get((n - 1, k - 1), 0)
                             + (n - 1) * table.get((n - 1, k), 0))
    assert table[(3, 2)] == 3
    for n in range(10):
        for k in range(n + 1):
            assert stirling1(n, k, 10**9) == table[(n, k)]
    assert stirling1(3, 2, 5) == 3


def test_stirling_base5_gate_and_row_lengths():
    field = make_field(5)
    sset = stirling_matrix_set(field, 2, 10)
    assert sset.convention == "hasse-falling-factorial"
    assert has_optimal_row_lengths(sset, 10)
    # necessity: some coordinate reaches s*j exactly
    for j in range(1, 11):
        lengths = [mat.row_length(j) for mat in sset.matrices]
        assert max(lengths) == 2 * j
    profile = quality.t_profile(sset, 8)
    assert profile.values == [0] * 9


def test_stirling_single_matrix_matches_set():
    field = make_field(5)
    sset = stirling_matrix_set(field, 2, 6)
    for i in (1, 2):
        single = stirling_matrix(field, i, 2, 6)
        assert single.rows == sset.matrices[i - 1].rows


def test_stirling_s1_is_identity_like():
    field = make_field(5)
    mset = stirling_matrix_set(field, 1, 6)
    # for s = 1 the first passing convention reduces to the identity
    assert mset.matrices[0].rows == identity_matrix(field, 6).rows


def test_stirling_base3_also_passes():
    sset = stirling_matrix_set(make_field(3), 2, 7)
    assert quality.t_profile(sset, 7).values == [0] * 8


def test_stirling_rejects_impossible_dimension():
    with pytest.raises(ConventionRejected):
        stirling_matrix_set(make_field(2), 3, 4)  # needs s <= q anchors


def test_stirling_requires_prime_field():
    with pytest.raises(ValueError):
        stirling_matrix(make_field(2, 2), 1, 1, 4)


def test_save_load_round_trip(tmp_path):
    field = make_field(5)
    sset = stirling_matrix_set(field, 2, 5)
    path = tmp_path / "stirling.json"
    save_matrix_set(sset, path)
    loaded = load_matrix_set(path)
    assert loaded.convention == sset.convention
    assert [m.rows for m in loaded.matrices] == [m.rows for m in sset.matrices]
    # byte-stable: saving the loaded set reproduces the file exactly
    path2 = tmp_path / "again.json"
    save_matrix_set(loaded, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_save_load_identity_and_pairs(tmp_path):
    for mset in (identity_matrix_set(make_field(3), 2, 4),
                 MatrixSet(make_field(2), [pairs_matrix(5)], convention="pairs")):
        path = tmp_path / "set.json"
        save_matrix_set(mset, path)
        loaded = load_matrix_set(path)
        assert [m.rows for m in loaded.matrices] == [m.rows for m in mset.matrices]


def test_load_rejects_out_of_range_entry(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "q": 5, "p": 5, "e": 1, "s": 1, "convention": None,
        "matrices": [[[1, 7]]],
    }))
    with pytest.raises(EntryOutOfRange):
        load_matrix_set(path)


def test_load_schema_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load_matrix_set(path)
    path.write_text(json.dumps({"q": 4, "p": 2, "e": 1, "s": 1, "matrices": [[[1]]]}))
    with pytest.raises(SchemaError):
        load_matrix_set(path)  # q != p^e
    path.write_text(json.dumps({"q": 2, "p": 2, "e": 1, "s": 2, "matrices": [[[1]]]}))
    with pytest.raises(SchemaError):
        load_matrix_set(path)  # wrong matrix count
    path.write_text(json.dumps({"p": 2, "e": 1, "s": 1, "matrices": [[[1]]]}))
    with pytest.raises(SchemaError):
        load_matrix_set(path)  # missing q


def test_trailing_zeros_trimmed_and_row_lengths():
    m = GeneratingMatrix(make_field(2), [[1, 0, 1, 0, 0], [0, 0, 0]])
    assert m.rows == ((1, 0, 1), ())
    assert m.row_length(1) == 3
    assert m.row_length(2) == 0


def test_entry_validation():
    with pytest.raises(EntryOutOfRange):
        GeneratingMatrix(make_field(3), [[0, 3]])
