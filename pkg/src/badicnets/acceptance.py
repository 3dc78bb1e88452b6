"""The acceptance suite: one callable per criterion, shared by pytest and
the `badicnets selftest` subcommand.

Each criterion raises on any violated check; run_criteria() turns that into
a pass/fail record and also enforces the per-criterion runtime budget.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import badic, discrepancy, engine, genmatrix, quality
from ._backend import backend_name
from .engine import BijectionFamily
from .field import make_field
from .inputseq import (AffineSequence, AlternatingSequence, NaturalSequence,
                       NegativeShiftedSequence, QuadraticSequence,
                       RationalAffineSequence, SubsequenceView, UDVerdict,
                       empirical_ud_test, is_ud_expected)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    budget: float | None
    detail: str


class CriterionFailure(AssertionError):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise CriterionFailure(msg)


def criterion_01() -> str:
    """Van der Corput baseline: identity, natural input, t = 0 nets."""
    checked = 0
    for b in (2, 3, 5):
        field = make_field(b)
        mset = genmatrix.identity_matrix_set(field, 1, 8)
        bij = BijectionFamily.identity(b)
        seq = NaturalSequence(b)
        for m in range(1, 9):
            reports = quality.verify_T_sequence(mset, bij, seq, m, range(4), t=0)
            _require(all(r.passed for r in reports),
                     f"net check failed at b={b}, m={m}")
            checked += len(reports)
    return f"{checked} blocks pass as (0, m, 1)-nets"


def criterion_02() -> str:
    """Negation digit formula vs the modular oracle, n <= 10^4, k <= 12."""
    for b in (2, 3, 10):
        powers = [b**k for k in range(13)]
        for n in range(1, 10**4 + 1):
            digits = badic.negate(badic.integer_digits(n, b)).digits(12)
            tau = 0
            for k in range(1, 13):
                tau += digits[k - 1] * powers[k - 1]
                pk = powers[k]
                _require((tau + n) % pk == 0, f"tau sum: n={n}, b={b}, k={k}")
                _require(tau == (pk - n % pk) % pk, f"oracle: n={n}, b={b}, k={k}")
    return "3 * 10^4 negations match b^k - (n mod b^k) at every k <= 12"


def _same_profile_checks(seq_factory, m_caps: dict[str, int]) -> int:
    """Shared body of criteria 3 and 4: nets at the natural-input profile."""
    checked = 0
    for b in (2, 3, 5):
        field = make_field(b)
        mset = genmatrix.identity_matrix_set(field, 1, m_caps["s1"])
        bij = BijectionFamily.identity(b)
        profile = quality.t_profile(mset, m_caps["s1"])
        _require(profile.values == [0] * (m_caps["s1"] + 1), "identity profile")
        for seq in seq_factory(b):
            for m in range(1, m_caps["s1"] + 1):
                reports = quality.verify_T_sequence(mset, bij, seq, m, range(4),
                                                    profile=profile)
                _require(all(r.passed for r in reports),
                         f"b={b}, m={m}, seq={seq.spec_string()}")
                checked += len(reports)
    field5 = make_field(5)
    sset = genmatrix.stirling_matrix_set(field5, 2, m_caps["s2"])
    bij5 = BijectionFamily.identity(5)
    profile = quality.t_profile(sset, m_caps["s2"])
    _require(profile.values == [0] * (m_caps["s2"] + 1), "stirling profile")
    for seq in seq_factory(5):
        for m in range(1, m_caps["s2"] + 1):
            reports = quality.verify_T_sequence(sset, bij5, seq, m, range(4),
                                                profile=profile)
            _require(all(r.passed for r in reports),
                     f"stirling m={m}, seq={seq.spec_string()}")
            checked += len(reports)
    return checked


def criterion_03() -> str:
    """Negative-shift input keeps the natural-input T profile."""
    n = _same_profile_checks(lambda b: [NegativeShiftedSequence(b)],
                             {"s1": 6, "s2": 4})
    return f"{n} blocks pass at the natural-input profile"


def criterion_04() -> str:
    """Even/odd subsequences of the alternating input pass the same checks."""

    def factory(b):
        alt = AlternatingSequence(b)
        return [SubsequenceView(alt, 2, 0), SubsequenceView(alt, 2, 1)]

    n = _same_profile_checks(factory, {"s1": 5, "s2": 4})
    return f"{n} subsequence blocks pass at the natural-input profile"


def _brute_force_min_t(mset, m: int) -> int:
    bij = BijectionFamily.identity(mset.field.q)
    seq = NaturalSequence(mset.field.q)
    b = mset.field.q
    for t in range(m + 1):
        ok = True
        for k in (0, 1):
            block = engine.generate_block(mset, bij, seq, k * b**m, b**m, m)
            if not quality.verify_net(block, t, m).passed:
                ok = False
                break
        if ok:
            return t
    return m


def criterion_05() -> str:
    """T profile equals the brute-force minimal t wherever b^m <= 4096."""
    cases = []
    for b in (2, 3, 5):
        mset = genmatrix.identity_matrix_set(make_field(b), 1, 12)
        cases.append(("identity", mset))
    cases.append(("pairs", genmatrix.MatrixSet(make_field(2),
                                               [genmatrix.pairs_matrix(12)])))
    sset = genmatrix.stirling_matrix_set(make_field(5), 2, 6)
    cases.append(("stirling", sset))
    agreements = 0
    for name, mset in cases:
        b = mset.field.q
        m_cap = 0
        while b ** (m_cap + 1) <= 4096 and m_cap + 1 <= mset.declared_depth:
            m_cap += 1
        profile = quality.t_profile(mset, max(m_cap, 6 if name == "stirling" else m_cap))
        for m in range(1, m_cap + 1):
            brute = _brute_force_min_t(mset, m)
            _require(profile.values[m] == brute,
                     f"{name} b={b}: T({m})={profile.values[m]} vs brute {brute}")
            agreements += 1
        if name == "pairs":
            _require(profile.values == [m // 2 for m in range(profile.m_max + 1)],
                     f"pairs profile {profile.values}")
        if name == "stirling":
            _require(profile.values == [0] * 7, f"stirling profile {profile.values}")
    return f"{agreements} (set, m) pairs agree; pairs T = floor(m/2), stirling T = 0"


def criterion_06() -> str:
    """Squares input is detected and measured as non-uniform."""
    seq = QuadraticSequence(2, 1, 0, 0)
    _require(is_ud_expected(seq) is UDVerdict.NOT_UD, "verdict must be NotUD")
    report = empirical_ud_test(seq, 3, 8000)
    _require(report.deviation >= Fraction(1, 8),
             f"deviation {report.deviation} < 1/8")
    empty = {a for a, c in enumerate(report.histogram) if c == 0}
    _require(empty == {2, 3, 5, 6, 7}, f"empty residue classes {sorted(empty)}")
    return f"max deviation {report.deviation} >= 1/8; classes 2,3,5,6,7 empty"


def criterion_07() -> str:
    """Composite bound dominates exact N*D* for alpha in {0, 1/2, -1/4}."""
    field = make_field(3)
    mset = genmatrix.identity_matrix_set(field, 1, 8)
    bij = BijectionFamily.identity(3)
    n_list = list(range(1, 3**6 + 1))
    rows_checked = 0
    for alpha in (Fraction(0), Fraction(1, 2), Fraction(-1, 4)):
        seq = (NaturalSequence(3) if alpha == 0
               else AffineSequence(3, 1, alpha))
        rows = discrepancy.empirical_vs_bound(mset, bij, seq, n_list)
        _require(all(r.within for r in rows), f"bound violated for alpha={alpha}")
        rows_checked += len(rows)
        if alpha == 0:
            spot = next(r for r in rows if r.n_points == 9)
            _require(spot.bound == 5, f"alpha=0, N=9 bound {spot.bound} != 5")
            _require(spot.nd_star <= 5, "N*D* at N=9 exceeds 5")
    return f"{rows_checked} prefixes within bound; alpha=0, N=9 bound = 5"


def criterion_08() -> str:
    """Split sequence n/2 + 1/2: per-subsequence bounds and O(log N) growth."""
    field = make_field(3)
    mset = genmatrix.identity_matrix_set(field, 1, 8)
    bij = BijectionFamily.identity(3)
    full = RationalAffineSequence(3, 2, Fraction(1, 2))
    # the two affine subsequences: s_{2n} = n + 1/2, s_{2n+1} = n + 1
    subs = [AffineSequence(3, 1, Fraction(1, 2)), AffineSequence(3, 1, Fraction(1))]
    for offset, sub in enumerate(subs):
        view = SubsequenceView(full, 2, offset)
        for n in range(12):
            _require(view.eval(n).digits(10) == sub.eval(n).digits(10),
                     f"subsequence {offset} digit mismatch at n={n}")
        rows = discrepancy.empirical_vs_bound(mset, bij, sub, list(range(1, 3**6 + 1)))
        _require(all(r.within for r in rows), f"subsequence {offset} bound violated")
    import math

    values = discrepancy.sequence_values_exact(mset, bij, full, 3**6)
    ratios = []
    for n_pts in (9, 27, 81, 243, 729):
        res = discrepancy.star_discrepancy_1d([v[0] for v in values[:n_pts]])
        ratios.append(float(res.value * n_pts) / math.log(n_pts))
    _require(max(ratios) < 4.0, f"N*D*/log N ratios {ratios} not bounded by 4")
    return f"subsequence bounds hold; max N*D*/log N = {max(ratios):.3f} < 4"


def criterion_09() -> str:
    """b-adic arithmetic against modular oracles, unit inverses, valuations."""
    rng = random.Random(20260811)
    for b in (2, 3, 5, 10):
        done = 0
        while done < 200:
            u = rng.randrange(-999, 1000)
            v = rng.randrange(1, 200)
            if badic.gcd(v, b) != 1:
                continue
            done += 1
            stream = badic.rational_digits(u, v, b)
            f = Fraction(u, v)
            for k in (1, 2, 3, 8, 16, 24):
                mk = b**k
                expect = (f.numerator * pow(f.denominator, -1, mk)) % mk
                _require(stream.truncate(k) == expect,
                         f"truncation {u}/{v} base {b} at k={k}")
    for b in (2, 3, 5, 10):
        for u in range(1, 1000):
            if badic.gcd(u, b) != 1:
                continue
            inv = badic.unit_inverse(badic.integer_digits(u, b))
            for k in (1, 8, 16):
                mk = b**k
                _require((u * inv.truncate(k)) % mk == 1 % mk,
                         f"unit inverse {u} base {b} k={k}")
    _require(badic.pseudo_valuation(6, 1, 24).exponent == Fraction(-1, 3),
             "|6|_24 exponent")
    _require(badic.pseudo_valuation(12, 1, 24).exponent == Fraction(-2, 3),
             "|12|_24 exponent")
    return "rational truncations, unit inverses, and valuations all exact"


def criterion_10() -> str:
    """Closed-form bound: spot values and net-bound consistency."""
    rng = random.Random(7)
    for _ in range(20):
        b = rng.choice((3, 5, 7, 11))
        m = rng.randrange(0, 9)
        t = rng.randrange(0, m + 1)
        _require(discrepancy.delta_bound(b, t, m, 1) == b**t, "s=1 spot value")
    _require(discrepancy.delta_bound(3, 0, 2, 2) == 3, "delta_3(0,2,2)")
    _require(discrepancy.delta_bound(5, 0, 2, 2) == 5, "delta_5(0,2,2)")
    nets = 0
    for b in (3, 5):
        field = make_field(b)
        configs = [(genmatrix.identity_matrix_set(field, 1, 5), range(1, 6))]
        sset = genmatrix.stirling_matrix_set(field, 2, 5)
        caps = {3: 5, 5: 3}  # keep s=2 point counts within the exact-D* guard
        configs.append((sset, range(1, caps[b] + 1)))
        bij = BijectionFamily.identity(b)
        seq = NaturalSequence(b)
        for mset, m_range in configs:
            for m in m_range:
                block = engine.generate_block(mset, bij, seq, 0, b**m, m)
                _require(quality.verify_net(block, 0, m).passed,
                         f"net b={b}, s={mset.s}, m={m}")
                pts = [block[i].rationals() for i in range(len(block))]
                if mset.s == 1:
                    res = discrepancy.star_discrepancy_1d([p[0] for p in pts])
                else:
                    res = discrepancy.star_discrepancy_exact(pts)
                bound = discrepancy.delta_bound(b, 0, m, mset.s)
                _require(res.value * b**m <= bound,
                         f"b^m * D* > bound at b={b}, s={mset.s}, m={m}")
                nets += 1
    return f"20 spot values; {nets} verified nets satisfy b^m * D* <= bound"


def criterion_11() -> str:
    """Classical and stream-driven paths agree digit-for-digit."""
    rng = random.Random(1234)
    for _ in range(1000):
        p, e = rng.choice(((2, 1), (3, 1), (2, 2), (5, 1)))
        field = make_field(p, e)
        b = field.q
        s = rng.randrange(1, 4)
        m = rng.randrange(1, 7)
        mats = []
        for _i in range(s):
            rows = []
            for j in range(1, m + 1):
                length = rng.randrange(1, 2 * j + 1)
                row = [rng.randrange(b) for _ in range(length)]
                rows.append(row)
            mats.append(genmatrix.GeneratingMatrix(field, rows))
        mset = genmatrix.MatrixSet(field, mats)
        n_digits = rng.randrange(2, 6)
        psi = [_random_perm(rng, b) for _ in range(n_digits)]
        lam = [[_random_perm(rng, b) for _ in range(m)] for _ in range(s)]
        bij = BijectionFamily(b, psi=psi, lam=lam)
        n = rng.randrange(0, b**12)
        seq = NaturalSequence(b)
        classical = engine.generate_point_classical(mset, bij, n, m)
        stream = engine.generate_point(mset, bij, seq, n, m)
        _require(classical == stream, f"path mismatch at q={b}, n={n}, m={m}")
    return "10^3 random (matrix, n, m) triples bit-identical on both paths"


def _random_perm(rng: random.Random, q: int) -> list[int]:
    perm = list(range(q))
    rng.shuffle(perm)
    return perm


def criterion_12() -> str:
    """CLI reproducibility: plot output byte-stable across runs and threads."""
    import contextlib
    import io
    import subprocess
    import sys
    import tempfile
    from pathlib import Path

    from .cli import main as cli_main

    with tempfile.TemporaryDirectory() as tmp:
        outputs = []
        for run, threads in enumerate((1, 4, 1)):
            base = str(Path(tmp) / f"panel{run}")
            with contextlib.redirect_stdout(io.StringIO()):
                rc = cli_main(["plot", "--out", base, "--format", "both",
                               "--threads", str(threads)])
            _require(rc == 0, f"plot exited {rc}")
            svg = Path(base + ".svg").read_bytes()
            csvs = [Path(f"{base}-{i}.csv").read_bytes() for i in (1, 2, 3)]
            point_rows = sum(len(c.splitlines()) - 1 for c in csvs)
            _require(point_rows == 3 * 500, f"expected 1500 points, got {point_rows}")
            _require(svg.count(b"<circle") == 3 * 500, "SVG point count")
            outputs.append((svg, csvs))
        _require(all(o == outputs[0] for o in outputs[1:]),
                 "outputs differ across runs/thread counts")
    proc = subprocess.run(
        [sys.executable, "-m", "badicnets.cli", "selftest", "--criteria", "6,9"],
        capture_output=True, text=True, timeout=300)
    _require(proc.returncode == 0, f"selftest subset failed: {proc.stdout}")
    _require("PASS  6" in proc.stdout and "PASS  9" in proc.stdout,
             "selftest output missing pass lines")
    return "plot bytes stable over runs and thread counts; selftest CLI wired"


CRITERIA: list[tuple[int, str, Callable[[], str], float | None]] = [
    (1, "van-der-corput-baseline", criterion_01, 10.0),
    (2, "negation-digit-formula", criterion_02, 5.0),
    (3, "negative-shift-profile", criterion_03, 60.0),
    (4, "alternating-subsequences", criterion_04, 60.0),
    (5, "t-profile-oracle-agreement", criterion_05, 120.0),
    (6, "squares-not-uniform", criterion_06, 5.0),
    (7, "shifted-sequence-bound", criterion_07, 30.0),
    (8, "split-sequence-bound", criterion_08, 30.0),
    (9, "b-adic-arithmetic-suite", criterion_09, 5.0),
    (10, "closed-form-net-bound", criterion_10, 30.0),
    (11, "construction-path-equivalence", criterion_11, 5.0),
    (12, "cli-reproducibility", criterion_12, None),
]


def run_criteria(numbers: list[int] | None = None) -> list[CriterionResult]:
    results = []
    for number, name, fn, budget in CRITERIA:
        if numbers is not None and number not in numbers:
            continue
        start = time.perf_counter()
        try:
            detail = fn()
            elapsed = time.perf_counter() - start
            passed = budget is None or elapsed < budget
            if not passed:
                detail = f"over budget ({elapsed:.2f}s >= {budget:.0f}s): {detail}"
        except Exception as exc:  # report, never crash the runner
            elapsed = time.perf_counter() - start
            passed = False
            detail = f"{type(exc).__name__}: {exc}"
        results.append(CriterionResult(number, name, passed, elapsed, budget, detail))
    return results
