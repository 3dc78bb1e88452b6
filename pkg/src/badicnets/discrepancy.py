"""Exact star discrepancy at desk scale and the closed-form net bounds.

All values are exact rationals.  The supremum over anchored boxes is attained
by evaluating both the closed count (points <= corner) and the open count
(points < corner) on the grid of critical corners built from the point
coordinates and 1 - the standard two-sided trick, so no epsilon limits are
needed.  Internally each axis is scaled by the least common denominator so
the whole search runs on integers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Iterable, Sequence

from .badic import BAdicStream
from .errors import (BoundViolation, ExactValueUnavailable, InvalidT,
                     OutOfRange, ProfileTooShort, TooLarge, UnsupportedBase)

SIZE_CAPS = {2: 500, 3: 120}  # runtime guards for the corner enumeration


@dataclass
class DiscrepancyResult:
    """Exact D*_N with the maximizing anchored box corner."""

    n_points: int
    value: Fraction
    witness_corner: tuple[Fraction, ...]
    witness_side: str  # "closed": box [0, corner]; "open": box [0, corner)

    @property
    def value_float(self) -> float:
        return float(self.value)

    def to_json_obj(self) -> dict:
        return {"N": self.n_points, "value": str(self.value),
                "value_float": self.value_float,
                "witness_corner": [str(c) for c in self.witness_corner],
                "witness_side": self.witness_side}


def _check_unit_range(values: Iterable[Fraction]) -> None:
    for v in values:
        if not 0 <= v <= 1:
            raise OutOfRange(f"point coordinate {v} outside [0, 1]")


def deviation_at(points: Sequence[Sequence[Fraction]], corner: Sequence[Fraction],
                 side: str) -> Fraction:
    """Recount |A(box)/N - vol(box)| for the given anchored box (oracle)."""
    n = len(points)
    if side == "closed":
        count = sum(all(x <= c for x, c in zip(pt, corner)) for pt in points)
    elif side == "open":
        count = sum(all(x < c for x, c in zip(pt, corner)) for pt in points)
    else:
        raise ValueError("side must be 'closed' or 'open'")
    vol = Fraction(1)
    for c in corner:
        vol *= c
    return abs(Fraction(count, n) - vol)


def star_discrepancy_1d(points: Sequence[Fraction | int]) -> DiscrepancyResult:
    """Exact D*_N from the sorted-order formula, witness by corner recount."""
    values = [Fraction(p) for p in points]
    if not values:
        raise ValueError("need at least one point")
    _check_unit_range(values)
    n = len(values)
    denom = lcm(*(v.denominator for v in values)) if values else 1
    ys = sorted(v.numerator * (denom // v.denominator) for v in values)
    # best * (n * denom) = max_i max(i*D - n*y_i, n*y_i - (i-1)*D), 1-indexed
    best = 0
    for i, y in enumerate(ys, start=1):
        best = max(best, i * denom - n * y, n * y - (i - 1) * denom)
    # witness: scan distinct corner values (and 1) with prefix counts
    w_corner, w_side = _witness_1d(ys, n, denom, best)
    return DiscrepancyResult(n, Fraction(best, n * denom),
                             (w_corner,), w_side)


def _witness_1d(ys: list[int], n: int, denom: int, best: int) -> tuple[Fraction, str]:
    distinct = sorted(set(ys)) + [denom]
    leq = 0
    pos = 0
    for v in distinct:
        lt = leq
        while pos < len(ys) and ys[pos] == v:
            pos += 1
        leq = pos
        if leq * denom - n * v == best:
            return Fraction(v, denom), "closed"
        if n * v - lt * denom == best:
            return Fraction(v, denom), "open"
    raise AssertionError("witness scan must reproduce the maximum")


def star_discrepancy_exact(points: Sequence[Sequence[Fraction | int]]) -> DiscrepancyResult:
    """Exact D*_N for s <= 3 by two-sided corner-grid enumeration.

    Ties are broken toward the lexicographically smallest corner, closed side
    first, so the witness is deterministic.
    """
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    s = len(pts[0])
    if any(len(p) != s for p in pts):
        raise ValueError("points with mixed dimension")
    if s > 3:
        raise TooLarge("exact corner enumeration is limited to s <= 3")
    n = len(pts)
    cap = SIZE_CAPS.get(s)
    if cap is not None and n > cap:
        raise TooLarge(f"s={s} guard allows at most {cap} points, got {n}")
    for p in pts:
        _check_unit_range(p)

    denoms = [lcm(*(p[k].denominator for p in pts)) for k in range(s)]
    scaled = [tuple(p[k].numerator * (denoms[k] // p[k].denominator)
                    for k in range(s)) for p in pts]
    grids = []
    ranks = []
    for k in range(s):
        grid = sorted({y[k] for y in scaled} | {denoms[k]})
        grids.append(grid)
        ranks.append({v: i for i, v in enumerate(grid)})

    sizes = [len(g) for g in grids]
    strides = [0] * s
    acc = 1
    for k in range(s - 1, -1, -1):
        strides[k] = acc
        acc *= sizes[k]
    total = acc
    closed = [0] * total
    for y in scaled:
        closed[sum(ranks[k][y[k]] * strides[k] for k in range(s))] += 1
    # prefix sums along each axis turn the histogram into closed counts
    for k in range(s):
        stride = strides[k]
        size = sizes[k]
        for base_idx in range(total):
            if (base_idx // stride) % size:
                closed[base_idx] += closed[base_idx - stride]

    d_all = 1
    for d in denoms:
        d_all *= d
    best = -1
    best_corner: tuple[int, ...] | None = None
    best_side = "closed"
    idx = [0] * s
    for flat in range(total):
        rem = flat
        vol_num = 1
        for k in range(s):
            idx[k] = rem // strides[k] % sizes[k]
            vol_num *= grids[k][idx[k]]
        c_cnt = closed[flat]
        o_flat = flat
        o_cnt = None
        for k in range(s):
            if idx[k] == 0:
                o_cnt = 0
                break
            o_flat -= strides[k]
        if o_cnt is None:
            o_cnt = closed[o_flat]
        score_c = c_cnt * d_all - n * vol_num
        score_o = n * vol_num - o_cnt * d_all
        if score_c > best:
            best = score_c
            best_corner = tuple(idx)
            best_side = "closed"
        if score_o > best:
            best = score_o
            best_corner = tuple(idx)
            best_side = "open"
    corner = tuple(Fraction(grids[k][best_corner[k]], denoms[k]) for k in range(s))
    return DiscrepancyResult(n, Fraction(best, n * d_all), corner, best_side)


def delta_bound(b: int, t: int, m: int, s: int) -> int:
    """Closed-form bound on b^m * D* for any (t, m, s)-net in base b > 2."""
    if b <= 2:
        raise UnsupportedBase("the closed-form bound is quoted for b > 2 only")
    if t < 0 or t > m:
        raise InvalidT(f"need 0 <= t <= m, got t={t}, m={m}")
    if s < 1:
        raise ValueError("dimension must be >= 1")
    half = b // 2
    return b**t * sum(comb(s - 1, i) * comb(m - t, i) * half**i for i in range(s))


@dataclass
class BoundBreakdown:
    """Composite discrepancy bound for the shifted-index sequence n + alpha.

    total = first_term + sum(middle_terms) + sum(residual_terms), where the
    residual covers N' = N - q^r + sum_{j<r} a_j q^j points.  The bound is
    interpreted as a bound on the star discrepancy.
    """

    q: int
    s: int
    n_points: int
    r: int
    alpha_digits: list[int]
    n_residual: int
    residual_digits: list[int]
    first_term: int
    middle_terms: list[int]
    residual_terms: list[int]
    note: str = "bound interpreted as star discrepancy"

    @property
    def total(self) -> int:
        return self.first_term + sum(self.middle_terms) + sum(self.residual_terms)

    def to_json_obj(self) -> dict:
        return {"q": self.q, "s": self.s, "N": self.n_points, "r": self.r,
                "alpha_digits": self.alpha_digits, "N_residual": self.n_residual,
                "residual_digits": self.residual_digits,
                "first_term": self.first_term, "middle_terms": self.middle_terms,
                "residual_terms": self.residual_terms, "total": self.total,
                "note": self.note}


def prop2_bound(alpha: BAdicStream, profile, q: int, s: int, n_points: int) -> BoundBreakdown:
    """N * D*_N bound for the sequence s_n = n + alpha at the given T profile.

    r = floor(log_q N) is found by integer comparison; the alpha digits a_0..a_r
    and the base-q digits of the residual N' = N - q^r + sum_{j<r} a_j q^j fill
    the three sums term by term.
    """
    if q <= 2:
        raise UnsupportedBase("needs q > 2 (closed-form bound restriction)")
    if n_points < 1:
        raise ValueError("N must be >= 1")
    if alpha.base != q:
        raise ValueError(f"alpha has base {alpha.base}, expected {q}")
    r = 0
    while q ** (r + 1) <= n_points:
        r += 1
    if getattr(profile, "m_max", r) < r:
        raise ProfileTooShort(f"profile covers m <= {profile.m_max}, need {r}")
    t_at = profile.value_at if hasattr(profile, "value_at") else lambda j: profile[j]
    a = list(alpha.digits(r + 1))
    n_res = n_points - q**r + sum(a[j] * q**j for j in range(r))
    res_digits = []
    v = n_res
    for _ in range(r + 1):
        v, d = divmod(v, q)
        res_digits.append(d)
    first = (q - a[0]) * delta_bound(q, t_at(0), 0, s)
    middle = [(q - 1 - a[j]) * delta_bound(q, t_at(j), j, s) for j in range(1, r)]
    residual = [res_digits[j] * delta_bound(q, t_at(j), j, s) for j in range(r + 1)]
    return BoundBreakdown(q, s, n_points, r, a, n_res, res_digits,
                          first, middle, residual)


@dataclass
class BoundTableRow:
    n_points: int
    nd_star: Fraction
    bound: int
    within: bool

    @property
    def ratio(self) -> float:
        return float(self.nd_star) / self.bound if self.bound else float("inf")


def _is_identity_set(mset) -> bool:
    return all(mat.row(j) == (0,) * (j - 1) + (1,)
               for mat in mset.matrices
               for j in range(1, mat.declared_depth + 1))


def sequence_values_exact(mset, bij, seq, count: int) -> list[tuple[Fraction, ...]]:
    """Full-precision values x_0..x_{count-1}; identity sets only.

    With identity matrices and default bijections the coordinate value is the
    digit reflection of s_n about the radix point, which is an exact rational
    for periodic streams.  Anything else has no closed form here.
    """
    from .engine import stream_unit_value

    if not _is_identity_set(mset) or not bij.is_default:
        raise ExactValueUnavailable(
            "exact full-precision sequence values need identity matrices "
            "with default bijections")
    out = []
    for n in range(count):
        v = stream_unit_value(seq.eval(n))
        out.append((v,) * mset.s)
    return out


def empirical_vs_bound(mset, bij, seq, n_list: Sequence[int],
                       strict: bool = True) -> list[BoundTableRow]:
    """Exact N * D*_N against the composite bound for s_n = n + alpha.

    seq must be the natural sequence (alpha = 0) or affine with unit slope 1.
    Raises on a bound violation unless strict=False (then the row is flagged).
    """
    from . import quality
    from .badic import zero_stream
    from .inputseq import AffineSequence, NaturalSequence

    q = mset.field.q
    if isinstance(seq, NaturalSequence):
        alpha = zero_stream(q)
    elif isinstance(seq, AffineSequence) and seq._a_rat == 1:
        alpha = seq.c
    else:
        raise ValueError("bound table applies to s_n = n + alpha sequences")
    n_max = max(n_list)
    r_max = 0
    while q ** (r_max + 1) <= n_max:
        r_max += 1
    profile = quality.t_profile(mset, r_max)
    values = sequence_values_exact(mset, bij, seq, n_max)
    rows = []
    for n_pts in sorted(n_list):
        prefix = values[:n_pts]
        if mset.s == 1:
            res = star_discrepancy_1d([p[0] for p in prefix])
        else:
            res = star_discrepancy_exact(prefix)
        nd = res.value * n_pts
        bound = prop2_bound(alpha, profile, q, mset.s, n_pts).total
        ok = nd <= bound
        if strict and not ok:
            raise BoundViolation(f"N*D* = {nd} exceeds bound {bound} at N={n_pts}")
        rows.append(BoundTableRow(n_pts, nd, bound, ok))
    return rows


def write_bound_table_csv(rows: Sequence[BoundTableRow], fileobj) -> None:
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(["N", "ND_star_exact", "ND_star_float", "bound", "ratio"])
    for row in rows:
        writer.writerow([row.n_points, str(row.nd_star), float(row.nd_star),
                         row.bound, row.ratio])
