"""Parity between the compiled kernels and the pure-Python fallback."""

import random
from array import array

import pytest

from badicnets import _backend, engine, genmatrix, quality
from badicnets.engine import BijectionFamily
from badicnets.field import make_field
from badicnets.genmatrix import identity_matrix_set, stirling_matrix_set
from badicnets.inputseq import NaturalSequence, NegativeShiftedSequence

BACKENDS = sorted(_backend.available_backends())

needs_both = pytest.mark.skipif(len(BACKENDS) < 2,
                                reason="compiled extension not built")


def _random_kernel_case(rng):
    q = rng.choice((2, 3, 4, 5, 7))
    field = make_field(*((2, 2) if q == 4 else (q, 1)))
    s = rng.randrange(1, 4)
    m = rng.randrange(1, 6)
    ndig = rng.randrange(1, 9)
    count = rng.randrange(1, 60)
    row_vals = bytearray()
    row_off = array("i", [0])
    for _ in range(s * m):
        for _ in range(rng.randrange(0, ndig + 1)):
            row_vals.append(rng.randrange(q))
        row_off.append(len(row_vals))
    psi = bytes(v for _ in range(ndig) for v in _perm(rng, q))
    lam = bytes(v for _ in range(s * m) for v in _perm(rng, q))
    truncs = array("Q", [rng.randrange(q**ndig) for _ in range(count)])
    return (truncs, q, ndig, s, m, bytes(row_vals), row_off, psi, lam,
            field.add_table_flat(), field.mul_table_flat(), q)


def _perm(rng, q):
    p = list(range(q))
    rng.shuffle(p)
    return p


@needs_both
def test_gen_block_digits_parity():
    rng = random.Random(99)
    mods = _backend.available_backends()
    for _ in range(40):
        case = _random_kernel_case(rng)
        results = {name: mod.gen_block_digits(*case) for name, mod in mods.items()}
        assert results["python"] == results["compiled"]


@needs_both
def test_composition_counts_parity():
    rng = random.Random(7)
    mods = _backend.available_backends()
    for _ in range(40):
        b = rng.choice((2, 3, 5))
        s = rng.randrange(1, 4)
        m = rng.randrange(1, 5)
        count = rng.randrange(1, 80)
        digits = bytes(rng.randrange(b) for _ in range(count * s * m))
        d = tuple(rng.randrange(0, m + 1) for _ in range(s))
        results = {name: mod.composition_counts(digits, count, s, m, d, b)
                   for name, mod in mods.items()}
        assert list(results["python"]) == list(results["compiled"])
        assert sum(results["python"]) == count


@needs_both
def test_end_to_end_parity_across_backends():
    configs = [
        (identity_matrix_set(make_field(2), 1, 10), NaturalSequence(2), 10),
        (identity_matrix_set(make_field(5), 1, 4), NegativeShiftedSequence(5), 4),
        (stirling_matrix_set(make_field(5), 2, 4), NaturalSequence(5), 4),
    ]
    for mset, seq, m in configs:
        b = mset.field.q
        bij = BijectionFamily.identity(b)
        buffers = {}
        profiles = {}
        for name in BACKENDS:
            with _backend.use_backend(name):
                block = engine.generate_block(mset, bij, seq, 0, b**m, m)
                buffers[name] = block.digit_buffer()
                profiles[name] = quality.verify_net(block, 0, m).passed
        assert buffers["python"] == buffers["compiled"]
        assert profiles["python"] == profiles["compiled"]


def test_backend_name_reported():
    assert _backend.backend_name() in ("python", "compiled")
    with _backend.use_backend("python"):
        assert _backend.backend_name() == "python"
