"""The digital construction: index n -> point x_n as a base-b digit matrix.

Coordinate i of x_n is built by multiplying the digit vector of s_n (mapped
into GF(q) column-wise by the input bijections psi_r) with the finite rows of
the i-th generating matrix, then mapping each result back to a digit via the
output bijections lambda_(i,j).  Because the rows are finite the engine only
ever queries the minimal digit prefix of s_n that determines the output, and
nothing is ever rounded: points are digit matrices, never floats.

The classical construction (index digits = base-b expansion of n) is exposed
separately; on natural-number input both paths produce identical digits.
"""

from __future__ import annotations

import json
from array import array
from collections.abc import Sequence as SequenceABC
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _backend
from .badic import BAdicStream, PeriodicStream
from .errors import DepthExceeded, SchemaError
from .inputseq import IndexSequence, NaturalSequence

KERNEL_TRUNC_LIMIT = 1 << 62  # truncations must fit the kernels' uint64


class BijectionFamily:
    """Per-column input bijections psi_r and per-(i, j) output bijections.

    All bijections are permutations of the element indices 0..q-1, given as
    tables; anything not explicitly provided is the identity (which in
    particular fixes 0, so psi_r(0) = 0 for all sufficiently large r).
    """

    def __init__(self, q: int, psi: Sequence[Sequence[int]] | None = None,
                 lam: Sequence[Sequence[Sequence[int]]] | None = None):
        self.q = q
        self._identity = tuple(range(q))
        self._psi = tuple(self._check_perm(p) for p in (psi or ()))
        self._lam = tuple(tuple(self._check_perm(p) for p in row)
                          for row in (lam or ()))

    @classmethod
    def identity(cls, q: int) -> "BijectionFamily":
        return cls(q)

    def _check_perm(self, perm: Sequence[int]) -> tuple[int, ...]:
        perm = tuple(perm)
        if sorted(perm) != list(range(self.q)):
            raise ValueError(f"not a permutation of 0..{self.q - 1}: {perm}")
        return perm

    @property
    def is_default(self) -> bool:
        return not self._psi and not self._lam

    def psi(self, r: int) -> tuple[int, ...]:
        return self._psi[r] if r < len(self._psi) else self._identity

    def lam(self, i: int, j: int) -> tuple[int, ...]:
        """Output bijection for coordinate i and digit j (both 1-indexed)."""
        if i - 1 < len(self._lam) and j - 1 < len(self._lam[i - 1]):
            return self._lam[i - 1][j - 1]
        return self._identity

    @classmethod
    def from_json(cls, path, q: int) -> "BijectionFamily":
        from pathlib import Path

        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise SchemaError("bijection file must be a JSON object")
        try:
            return cls(q, psi=obj.get("psi"), lam=obj.get("lambda"))
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"bad bijection file: {exc}") from exc


@dataclass(frozen=True)
class DigitalPoint:
    """One output point: s rows of m base-b digits, most significant first.

    digits[i][j] is output digit j+1 of coordinate i+1, i.e. the coefficient
    of b^-(j+1); the represented value is the m-digit truncation and tails of
    (b-1)s survive exactly.
    """

    base: int
    digits: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.digits)

    @property
    def m(self) -> int:
        return len(self.digits[0])

    def coordinate_rational(self, i: int) -> Fraction:
        """Exact value a / b^m of coordinate i (1-indexed)."""
        num = 0
        for d in self.digits[i - 1]:
            num = num * self.base + d
        return Fraction(num, self.base**self.m)

    def coordinate_float(self, i: int) -> float:
        return float(self.coordinate_rational(i))

    def rationals(self) -> tuple[Fraction, ...]:
        return tuple(self.coordinate_rational(i) for i in range(1, self.s + 1))


def point_to_rational(point: DigitalPoint, i: int) -> Fraction:
    return point.coordinate_rational(i)


def point_to_float(point: DigitalPoint, i: int) -> float:
    return point.coordinate_float(i)


class DigitBlock(SequenceABC):
    """A contiguous block of points stored as one packed digit buffer.

    Behaves as a sequence of DigitalPoint; the raw buffer (point-major,
    coordinate-major, digit j=0 most significant) feeds the counting kernels
    without materializing point objects.
    """

    def __init__(self, base: int, s: int, m: int, n_start: int, buffer: bytes):
        if len(buffer) != 0 and len(buffer) % (s * m):
            raise ValueError("buffer length is not a multiple of s*m")
        self.base = base
        self.s = s
        self.m = m
        self.n_start = n_start
        self._buf = bytes(buffer)

    def __len__(self) -> int:
        return len(self._buf) // (self.s * self.m) if self.s * self.m else 0

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            raise TypeError("slicing not supported; index points directly")
        n = len(self)
        if idx < 0:
            idx += n
        if not 0 <= idx < n:
            raise IndexError(idx)
        sm = self.s * self.m
        o = idx * sm
        digits = tuple(tuple(self._buf[o + i * self.m: o + (i + 1) * self.m])
                       for i in range(self.s))
        return DigitalPoint(self.base, digits)

    def digit_buffer(self) -> bytes:
        return self._buf

    def index_of(self, position: int) -> int:
        """Sequence index n of the point at buffer position."""
        return self.n_start + position

    def __repr__(self) -> str:
        return (f"DigitBlock(base={self.base}, s={self.s}, m={self.m}, "
                f"n_start={self.n_start}, count={len(self)})")


def _required_digits(mset, m: int) -> int:
    """Minimal digit prefix of s_n determining output digits 1..m."""
    need = 0
    for mat in mset.matrices:
        if mat.declared_depth < m:
            raise DepthExceeded(
                f"precision m={m} needs rows beyond declared depth {mat.declared_depth}")
        for j in range(1, m + 1):
            need = max(need, mat.row_length(j))
    return need


def generate_point(mset, bij: BijectionFamily, seq: IndexSequence,
                   n: int, m: int) -> DigitalPoint:
    """Digit matrix of x_n at precision m (the reference per-point path)."""
    if m < 1:
        raise ValueError("precision m must be >= 1")
    ndig = _required_digits(mset, m)
    stream = seq.eval(n)
    return _point_from_digits(mset, bij, stream.digits(ndig), m)


def generate_point_classical(mset, bij: BijectionFamily, n: int, m: int) -> DigitalPoint:
    """Classical path: index digits come from the base-b expansion of n."""
    if m < 1:
        raise ValueError("precision m must be >= 1")
    if n < 0:
        raise ValueError("classical construction needs n >= 0")
    b = mset.field.q
    ndig = _required_digits(mset, m)
    a = []
    v = n
    for _ in range(ndig):
        v, d = divmod(v, b)
        a.append(d)
    return _point_from_digits(mset, bij, a, m)


def _point_from_digits(mset, bij: BijectionFamily, a, m: int) -> DigitalPoint:
    field = mset.field
    psi_digits = [bij.psi(r)[d] for r, d in enumerate(a)]
    coords = []
    for i, mat in enumerate(mset.matrices, start=1):
        row_digits = []
        for j in range(1, m + 1):
            acc = 0
            for r, c in enumerate(mat.row(j)):
                if c:
                    acc = field.add(acc, field.mul(c, psi_digits[r]))
            row_digits.append(bij.lam(i, j)[acc])
        coords.append(tuple(row_digits))
    return DigitalPoint(field.q, tuple(coords))


def _kernel_inputs(mset, bij: BijectionFamily, m: int, ndig: int):
    field = mset.field
    q = field.q
    row_vals = bytearray()
    row_off = array("i", [0])
    for mat in mset.matrices:
        for j in range(1, m + 1):
            row_vals.extend(mat.row(j))
            row_off.append(len(row_vals))
    psi_flat = bytes(v for r in range(ndig) for v in bij.psi(r))
    lam_flat = bytes(v for i in range(1, mset.s + 1)
                     for j in range(1, m + 1) for v in bij.lam(i, j))
    return (bytes(row_vals), row_off, psi_flat, lam_flat,
            field.add_table_flat(), field.mul_table_flat(), q)


def generate_block(mset, bij: BijectionFamily, seq: IndexSequence,
                   n_start: int, count: int, m: int, threads: int = 1):
    """Points x_n for n_start <= n < n_start + count, order-stable by n.

    Uses the packed kernel when the field tables fit in bytes and the needed
    truncations fit in 64 bits; otherwise falls back to per-point generation.
    The result does not depend on the thread count.
    """
    if m < 1:
        raise ValueError("precision m must be >= 1")
    if count < 0:
        raise ValueError("count must be >= 0")
    b = mset.field.q
    ndig = _required_digits(mset, m)
    if b > 255 or (ndig > 0 and b**ndig >= KERNEL_TRUNC_LIMIT):
        # digits do not fit the packed byte layout; plain point list
        return [generate_point(mset, bij, seq, n, m)
                for n in range(n_start, n_start + count)]
    ndig_eff = max(ndig, 1)
    kb = _kernel_inputs(mset, bij, m, ndig_eff)

    def run_chunk(lo: int, n_chunk: int) -> bytes:
        truncs = array("Q", seq.truncations(lo, n_chunk, ndig_eff))
        return _backend.gen_block_digits(truncs, b, ndig_eff, mset.s, m, *kb)

    if threads <= 1 or count < 4096:
        buf = run_chunk(n_start, count)
    else:
        chunk = (count + threads - 1) // threads
        ranges = [(n_start + i * chunk, min(chunk, count - i * chunk))
                  for i in range(threads) if i * chunk < count]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda lc: run_chunk(*lc), ranges))
        buf = b"".join(parts)
    return DigitBlock(b, mset.s, m, n_start, buf)


def natural_block(mset, bij: BijectionFamily, n_start: int, count: int,
                  m: int, threads: int = 1) -> DigitBlock:
    return generate_block(mset, bij, NaturalSequence(mset.field.q),
                          n_start, count, m, threads)


def stream_unit_value(stream: PeriodicStream) -> Fraction:
    """Exact value sum_r a_r b^-(r+1) in [0, 1] of a periodic digit stream.

    This is the full-precision coordinate produced by an identity generating
    matrix with default bijections (digit reflection about the radix point).
    A tail of all (b-1)s yields exactly 1.
    """
    if not isinstance(stream, PeriodicStream):
        raise TypeError("exact unit-interval value needs a periodic stream")
    b = stream.base
    pre_val = Fraction(0)
    scale = Fraction(1, b)
    for d in stream.preperiod:
        pre_val += d * scale
        scale /= b
    per_val = Fraction(0)
    pscale = Fraction(1, b)
    for d in stream.period:
        per_val += d * pscale
        pscale /= b
    tail = per_val / (1 - Fraction(1, b**len(stream.period)))
    return pre_val + Fraction(1, b**len(stream.preperiod)) * tail


# -- export -------------------------------------------------------------------

def write_points_csv(points: Iterable[DigitalPoint] | DigitBlock, fileobj,
                     mode: str = "exact", n_start: int | None = None) -> None:
    """CSV with header: index n, then one column per coordinate.

    mode="exact" writes a/b^m strings; mode="float" writes nearest doubles
    (for plotting/export only).
    """
    import csv

    if mode not in ("exact", "float"):
        raise ValueError("mode must be 'exact' or 'float'")
    if n_start is None:
        n_start = points.n_start if isinstance(points, DigitBlock) else 0
    writer = csv.writer(fileobj, lineterminator="\n")
    first = True
    for pos, pt in enumerate(points):
        if first:
            writer.writerow(["n"] + [f"x{i}" for i in range(1, pt.s + 1)])
            first = False
        row: list[str] = [str(n_start + pos)]
        for i in range(1, pt.s + 1):
            if mode == "exact":
                num = 0
                for d in pt.digits[i - 1]:
                    num = num * pt.base + d
                row.append(f"{num}/{pt.base**pt.m}")
            else:
                row.append(repr(pt.coordinate_float(i)))
        writer.writerow(row)


def write_points_json(points: Iterable[DigitalPoint] | DigitBlock, fileobj,
                      n_start: int | None = None) -> None:
    """Digit-matrix export used for test fixtures."""
    if n_start is None:
        n_start = points.n_start if isinstance(points, DigitBlock) else 0
    items = []
    base = s = m = None
    for pos, pt in enumerate(points):
        base, s, m = pt.base, pt.s, pt.m
        items.append({"n": n_start + pos, "digits": [list(r) for r in pt.digits]})
    json.dump({"base": base, "s": s, "m": m, "points": items},
              fileobj, sort_keys=True, indent=2)
    fileobj.write("\n")
