"""Rank-based quality analysis and brute-force net verification.

The rank side checks the independence conditions on stacked generating-matrix
rows (giving the quality function T and the uniform-distribution condition);
the counting side verifies the net property of generated blocks exhaustively
by bucketing digit prefixes with exact integer keys, so interval membership
never touches floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

from . import _backend, engine
from .engine import BijectionFamily, DigitalPoint, DigitBlock
from .errors import InvalidT, ProfileTooShort, SizeMismatch, TooLarge

NET_POINT_CAP = 10**6
COMPOSITION_CAP = 200_000


def rank_gf(rows: Sequence[Sequence[int]], columns: int, field) -> int:
    """Rank over GF(q) of the rows truncated/padded to the given columns."""
    mat = [list(r[:columns]) + [0] * max(0, columns - len(r)) for r in rows]
    rank = 0
    col = 0
    nrows = len(mat)
    while rank < nrows and col < columns:
        pivot = next((r for r in range(rank, nrows) if mat[r][col]), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = field.inv(mat[rank][col])
        mat[rank] = [field.mul(v, inv) for v in mat[rank]]
        for r in range(nrows):
            if r != rank and mat[r][col]:
                f = mat[r][col]
                mat[r] = [field.sub(a, field.mul(f, b))
                          for a, b in zip(mat[r], mat[rank])]
        rank += 1
        col += 1
    return rank


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All (d_1..d_parts) >= 0 with sum = total, lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _stack(mset, comp: Sequence[int]) -> list[Sequence[int]]:
    rows: list[Sequence[int]] = []
    for mat, d in zip(mset.matrices, comp):
        for j in range(1, d + 1):
            rows.append(mat.row(j))
    return rows


def check_condition1(mset, m: int, k: int) -> tuple[bool, tuple[int, ...] | None]:
    """Rank condition at layer k: every stack with sum d_i = k has rank k.

    Checking the top layer suffices for smaller layers (any subfamily of an
    independent family is independent).  Returns (ok, witness composition).
    """
    if k > m:
        raise InvalidT(f"layer k={k} cannot exceed m={m}")
    for comp in compositions(k, mset.s):
        if rank_gf(_stack(mset, comp), m, mset.field) != k:
            return False, comp
    return True, None


@dataclass
class TProfile:
    """T(m) values for 0 <= m <= m_max with failure certificates.

    certificate[m] is the composition that blocked a smaller T(m), or None
    when T(m) = 0.
    """

    m_max: int
    values: list[int]
    certificates: list[tuple[int, ...] | None]

    @property
    def t(self) -> int:
        """Minimal constant t over the inspected range."""
        return max(self.values)

    @classmethod
    def constant(cls, t: int, m_max: int) -> "TProfile":
        return cls(m_max, [min(t, m) for m in range(m_max + 1)],
                   [None] * (m_max + 1))

    def value_at(self, m: int) -> int:
        if m > self.m_max:
            raise ProfileTooShort(f"profile covers m <= {self.m_max}, asked for {m}")
        return self.values[m]

    def to_json_obj(self) -> dict:
        return {"m_max": self.m_max, "T": list(self.values),
                "witness": [list(c) if c else None for c in self.certificates]}


def t_profile(mset, m_max: int) -> TProfile:
    """T(m) = m - max{k <= m : condition-1 layer k holds} for each m."""
    values = [0]
    certificates: list[tuple[int, ...] | None] = [None]
    for m in range(1, m_max + 1):
        blocked: tuple[int, ...] | None = None
        t_m = m  # until some layer passes: even k=1 failing means T(m) = m
        for k in range(m, 0, -1):
            ok, witness = check_condition1(mset, m, k)
            if ok:
                t_m = m - k
                break
            blocked = witness
        values.append(t_m)
        certificates.append(blocked if t_m > 0 else None)
    return TProfile(m_max, values, certificates)


def check_condition2(mset, d_bounds: Sequence[int]) -> bool:
    """Independence of rows j <= d_i over the union of their supports.

    A single check at d_i = d_bounds is equivalent to all smaller choices.
    """
    rows = _stack(mset, d_bounds)
    if not rows:
        return True
    width = max((len(r) for r in rows), default=0)
    return rank_gf(rows, max(width, 1), mset.field) == len(rows)


@dataclass
class NetReport:
    """Verdict of one brute-force net check.

    pass_ is True iff every elementary interval of volume b^(t-m) holds
    exactly b^t points; first_failure names the lexicographically first
    failing interval.  vacuous marks block checks skipped because t = m.
    """

    t: int
    m: int
    s: int
    base: int
    passed: bool
    block_index: int | None = None
    vacuous: bool = False
    first_failure: dict | None = None

    def to_json_obj(self) -> dict:
        obj = {"t": self.t, "m": self.m, "s": self.s, "base": self.base,
               "k": self.block_index, "pass": self.passed, "vacuous": self.vacuous}
        if self.first_failure is not None:
            obj["failure"] = self.first_failure
        return obj


def _as_block(points) -> DigitBlock:
    if isinstance(points, DigitBlock):
        return points
    pts = list(points)
    if not pts:
        raise SizeMismatch("empty point set")
    base, s, m = pts[0].base, pts[0].s, pts[0].m
    buf = bytearray()
    for pt in pts:
        if (pt.base, pt.s) != (base, s):
            raise SizeMismatch("mixed point shapes")
        if pt.m < m:
            raise SizeMismatch("points with differing precision")
        for row in pt.digits:
            buf.extend(row[:m])
    return DigitBlock(base, s, m, 0, bytes(buf))


def _decode_key(key: int, comp: Sequence[int], base: int) -> list[int]:
    parts = [0] * len(comp)
    for i in range(len(comp) - 1, -1, -1):
        parts[i] = key % base ** comp[i]
        key //= base ** comp[i]
    return parts


def verify_net(points, t: int, m: int, block_index: int | None = None) -> NetReport:
    """Exhaustive (t, m, s)-net check of b^m points at precision >= m."""
    block = _as_block(points)
    b, s = block.base, block.s
    if not 0 <= t <= m:
        raise InvalidT(f"need 0 <= t <= m, got t={t}, m={m}")
    if block.m < m:
        raise SizeMismatch(f"points carry {block.m} digits, need {m}")
    if b**m > NET_POINT_CAP:
        raise TooLarge(f"b^m = {b**m} exceeds cap {NET_POINT_CAP}")
    if comb(m - t + s - 1, s - 1) > COMPOSITION_CAP:
        raise TooLarge("too many interval shapes at this (t, m, s)")
    if len(block) != b**m:
        raise SizeMismatch(f"need exactly b^m = {b**m} points, got {len(block)}")
    expected = b**t
    buf = block.digit_buffer()
    for comp in compositions(m - t, s):
        counts = _backend.composition_counts(buf, len(block), s, block.m, comp, b)
        for key, count in enumerate(counts):
            if count != expected:
                return NetReport(t, m, s, b, False, block_index=block_index,
                                 first_failure={
                                     "d": list(comp),
                                     "a": _decode_key(key, comp, b),
                                     "count": count,
                                     "expected": expected,
                                 })
    return NetReport(t, m, s, b, True, block_index=block_index)


def verify_T_sequence(mset, bij: BijectionFamily, seq, m: int,
                      k_range, profile: TProfile | None = None,
                      t: int | None = None, threads: int = 1) -> list[NetReport]:
    """Check the truncated blocks k*b^m <= n < (k+1)*b^m against T(m).

    t can be given directly, read from a profile, or computed from the rank
    condition.  For m with T(m) = m no check applies; such blocks are
    reported vacuous-pass.
    """
    if t is None:
        t = (profile or t_profile(mset, m)).value_at(m)
    b = mset.field.q
    reports = []
    for k in k_range:
        if t >= m:
            reports.append(NetReport(t, m, mset.s, b, True, block_index=k,
                                     vacuous=True))
            continue
        block = engine.generate_block(mset, bij, seq, k * b**m, b**m, m,
                                      threads=threads)
        reports.append(verify_net(block, t, m, block_index=k))
    return reports


def interval_deviation(points, depths: Sequence[int]) -> Fraction:
    """Max over elementary intervals at fixed depths of |count/N - vol|."""
    block = _as_block(points)
    b = block.base
    n = len(block)
    counts = _backend.composition_counts(block.digit_buffer(), n, block.s,
                                         block.m, tuple(depths), b)
    target = Fraction(1, b ** sum(depths))
    return max(abs(Fraction(c, n) - target) for c in counts)


def reports_to_json(reports: list[NetReport], fileobj) -> None:
    json.dump([r.to_json_obj() for r in reports], fileobj, sort_keys=True, indent=2)
    fileobj.write("\n")
