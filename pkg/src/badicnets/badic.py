"""Exact arithmetic on b-adic integers for arbitrary base b >= 2.

A b-adic integer is an infinite digit stream a_0, a_1, ... with digits in
{0..b-1}, read as the formal series sum_r a_r b^r (least significant digit
first; index r is the coefficient of b^r).  Rationals u/v with gcd(v, b) = 1
are carried exactly as eventually periodic streams in canonical form; any
other deterministic digit source is a procedural stream with memoized digits.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import gcd
from typing import Callable

from .errors import BaseMismatch, NotAUnit, NotBAdicInteger


class BAdicStream:
    """Common digit-source interface; digit queries are deterministic."""

    base: int

    def digit(self, r: int) -> int:
        raise NotImplementedError

    def digits(self, k: int) -> tuple[int, ...]:
        """The first k digits a_0..a_{k-1}."""
        return tuple(self.digit(r) for r in range(k))

    def truncate(self, k: int) -> int:
        """tau_k: the integer sum_{r<k} a_r b^r in [0, b^k)."""
        v = 0
        for r in range(k - 1, -1, -1):
            v = v * self.base + self.digit(r)
        return v


class PeriodicStream(BAdicStream):
    """Eventually periodic stream: exactly the rationals u/v with gcd(v,b)=1.

    Canonical form: minimal period length, then minimal preperiod length.
    Immutable and shareable across threads.
    """

    __slots__ = ("base", "preperiod", "period", "_rational")

    def __init__(self, base: int, preperiod, period, _rational: Fraction | None = None):
        if base < 2:
            raise ValueError("base must be >= 2")
        preperiod = list(preperiod)
        period = list(period)
        if not period:
            raise ValueError("period must be nonempty")
        for d in preperiod + period:
            if not 0 <= d < base:
                raise ValueError(f"digit {d} not in 0..{base - 1}")
        preperiod, period = _canonical(preperiod, period)
        self.base = base
        self.preperiod = tuple(preperiod)
        self.period = tuple(period)
        self._rational = _rational

    def digit(self, r: int) -> int:
        pre = self.preperiod
        if r < len(pre):
            return pre[r]
        return self.period[(r - len(pre)) % len(self.period)]

    def digits(self, k: int) -> tuple[int, ...]:
        pre, per = self.preperiod, self.period
        if k <= len(pre):
            return pre[:k]
        reps = (k - len(pre) + len(per) - 1) // len(per)
        return (pre + per * reps)[:k]

    def truncate(self, k: int) -> int:
        v = 0
        for d in reversed(self.digits(k)):
            v = v * self.base + d
        return v

    def as_rational(self) -> Fraction:
        """Reconstruct u/v (lowest terms) from the digit data."""
        if self._rational is None:
            b = self.base
            pre_val = 0
            for d in reversed(self.preperiod):
                pre_val = pre_val * b + d
            per_val = 0
            for d in reversed(self.period):
                per_val = per_val * b + d
            tail = Fraction(per_val, 1 - b ** len(self.period))
            self._rational = pre_val + b ** len(self.preperiod) * tail
        return self._rational

    def is_zero(self) -> bool:
        return not any(self.preperiod) and not any(self.period)

    def __repr__(self) -> str:
        return (f"PeriodicStream(base={self.base}, "
                f"preperiod={list(self.preperiod)}, period={list(self.period)})")

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PeriodicStream)
                and self.base == other.base
                and self.preperiod == other.preperiod
                and self.period == other.period)

    def __hash__(self) -> int:
        return hash((self.base, self.preperiod, self.period))


class ProceduralStream(BAdicStream):
    """Digit stream backed by a callback r -> digit.

    Digits are memoized behind a lock so repeated/concurrent queries always
    agree even for stateful callbacks.
    """

    __slots__ = ("base", "_fn", "_cache", "_lock")

    def __init__(self, base: int, fn: Callable[[int], int]):
        if base < 2:
            raise ValueError("base must be >= 2")
        self.base = base
        self._fn = fn
        self._cache: list[int] = []
        self._lock = threading.Lock()

    def digit(self, r: int) -> int:
        cache = self._cache
        if r < len(cache):
            return cache[r]
        with self._lock:
            while len(self._cache) <= r:
                d = self._fn(len(self._cache))
                if not 0 <= d < self.base:
                    raise ValueError(f"digit {d} not in 0..{self.base - 1}")
                self._cache.append(d)
            return self._cache[r]

    def __repr__(self) -> str:
        return f"ProceduralStream(base={self.base})"


class _SequentialStream(ProceduralStream):
    """Procedural stream whose digits are produced by a carry-style stepper.

    step(r, state) -> (digit, state); digits are always filled in order, so
    the state evolution is deterministic.
    """

    __slots__ = ("_state",)

    def __init__(self, base: int, step, state):
        self._state = state

        def fn(r: int) -> int:
            d, self._state = step(r, self._state)
            return d

        super().__init__(base, fn)


def _canonical(pre: list[int], per: list[int]) -> tuple[list[int], list[int]]:
    """Minimize the period, then absorb a matching preperiod tail into it."""
    n = len(per)
    for d in range(1, n + 1):
        if n % d == 0 and per == per[:d] * (n // d):
            per = per[:d]
            break
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = [per[-1]] + per[:-1]
    return pre, per


def zero_stream(b: int) -> PeriodicStream:
    return PeriodicStream(b, [], [0], Fraction(0))


def integer_digits(n: int, b: int) -> PeriodicStream:
    """Base-b expansion of a nonnegative integer, zero tail."""
    if n < 0:
        raise ValueError("n must be >= 0; use rational_digits or negate")
    if b < 2:
        raise ValueError("base must be >= 2")
    pre = []
    v = n
    while v:
        v, d = divmod(v, b)
        pre.append(d)
    return PeriodicStream(b, pre, [0], Fraction(n))


def rational_digits(u: int, v: int, b: int) -> PeriodicStream:
    """Canonical digit stream of u/v in Z_b, requiring gcd(v, b) = 1.

    Digits are produced by iterated extraction: d = (num * v^-1) mod b, then
    num <- (num - d*v) / b.  The remainder state is bounded, so the stream is
    detected eventually periodic by first state repetition (which also yields
    the minimal period, since the state determines all later digits).
    """
    if v == 0:
        raise ZeroDivisionError("denominator is zero")
    if b < 2:
        raise ValueError("base must be >= 2")
    if v < 0:
        u, v = -u, -v
    g = gcd(abs(u), v) or 1
    u //= g
    v //= g
    if gcd(v, b) != 1:
        raise NotBAdicInteger(f"{u}/{v} is not a b-adic integer for b={b}")
    inv_v = pow(v, -1, b)
    seen: dict[int, int] = {}
    digits: list[int] = []
    num = u
    while num not in seen:
        seen[num] = len(digits)
        d = (num * inv_v) % b
        digits.append(d)
        num = (num - d * v) // b
    start = seen[num]
    return PeriodicStream(b, digits[:start], digits[start:], Fraction(u, v))


def from_rational(x: Fraction | int, b: int) -> PeriodicStream:
    f = Fraction(x)
    return rational_digits(f.numerator, f.denominator, b)


def truncate(x: BAdicStream, k: int) -> int:
    """tau_k(x) = sum_{r<k} a_r b^r; tau_0 = 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return x.truncate(k)


def negate(x: BAdicStream) -> BAdicStream:
    """Digit-complement negation.

    With r the least index of a nonzero digit, the negative has digits
    0 (below r), b - a_r (at r), and b - 1 - a_i (above r); then
    tau_k(x) + tau_k(-x) = b^k for every k > r.  negate(0) = 0.
    """
    b = x.base
    if isinstance(x, PeriodicStream):
        if x.is_zero():
            return x
        digits = list(x.preperiod)
        per = list(x.period)
        # extend the explicit prefix so the first nonzero digit is in it
        while not any(digits):
            digits.extend(per)
        r = next(i for i, d in enumerate(digits) if d)
        out_pre = [0] * r + [b - digits[r]] + [b - 1 - d for d in digits[r + 1:]]
        out_per = [b - 1 - d for d in per]
        return PeriodicStream(b, out_pre, out_per, -x.as_rational())

    def step(r: int, seen_nonzero: bool) -> tuple[int, bool]:
        d = x.digit(r)
        if seen_nonzero:
            return b - 1 - d, True
        if d == 0:
            return 0, False
        return b - d, True

    return _SequentialStream(b, step, False)


def add(x: BAdicStream, y: BAdicStream) -> BAdicStream:
    """Carry-propagating digit sum; exact rational sum for periodic inputs."""
    if x.base != y.base:
        raise BaseMismatch(f"base {x.base} vs {y.base}")
    b = x.base
    if isinstance(x, PeriodicStream) and isinstance(y, PeriodicStream):
        return from_rational(x.as_rational() + y.as_rational(), b)

    def step(r: int, carry: int) -> tuple[int, int]:
        t = x.digit(r) + y.digit(r) + carry
        return t % b, t // b

    return _SequentialStream(b, step, 0)


def mul_small(x: BAdicStream, c: int) -> BAdicStream:
    """x scaled by an ordinary integer c (digit schoolbook with carries)."""
    b = x.base
    if c == 0:
        return zero_stream(b)
    if c < 0:
        return negate(mul_small(x, -c))
    if isinstance(x, PeriodicStream):
        return from_rational(x.as_rational() * c, b)

    def step(r: int, carry: int) -> tuple[int, int]:
        t = x.digit(r) * c + carry
        return t % b, t // b

    return _SequentialStream(b, step, 0)


def is_unit(x: BAdicStream) -> bool:
    """Unit test: the first digit tau_1 must be coprime to the base."""
    return gcd(x.digit(0), x.base) == 1


def unit_inverse(x: BAdicStream) -> PeriodicStream:
    """Inverse of a rational unit; tau_k(x * x^-1) = 1 at every precision."""
    if not is_unit(x):
        raise NotAUnit(f"tau_1 = {x.digit(0)} shares a factor with base {x.base}")
    if not isinstance(x, PeriodicStream):
        raise TypeError("unit_inverse requires an exact rational stream")
    return from_rational(1 / x.as_rational(), x.base)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk scale)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class PseudoValuation:
    """|u/v|_b as the exact exponent kappa with |a|_b = b^kappa (or zero)."""

    __slots__ = ("base", "is_zero", "exponent")

    def __init__(self, base: int, is_zero: bool, exponent: Fraction | None):
        self.base = base
        self.is_zero = is_zero
        self.exponent = exponent

    def __repr__(self) -> str:
        if self.is_zero:
            return f"|0|_{self.base} = 0"
        return f"{self.base}^({self.exponent})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PseudoValuation)
                and (self.base, self.is_zero, self.exponent)
                == (other.base, other.is_zero, other.exponent))


def pseudo_valuation(u: int, v: int, b: int) -> PseudoValuation:
    """|u/v|_b = max over primes p_i | b of b^(-alpha_i/beta_i), exactly.

    alpha_i is the p_i-adic valuation of u/v and beta_i the multiplicity of
    p_i in b.  The result is b^kappa with kappa = -min_i alpha_i/beta_i held
    as an exact Fraction; |0|_b = 0 is flagged separately.
    """
    if v == 0:
        raise ZeroDivisionError("denominator is zero")
    if b < 2:
        raise ValueError("base must be >= 2")
    if u == 0:
        return PseudoValuation(b, True, None)
    ratios = []
    for p, beta in factorize(b).items():
        alpha = 0
        uu = abs(u)
        while uu % p == 0:
            alpha += 1
            uu //= p
        vv = abs(v)
        while vv % p == 0:
            alpha -= 1
            vv //= p
        ratios.append(Fraction(alpha, beta))
    return PseudoValuation(b, False, -min(ratios))


def negative_block_check(k: int, l: int, b: int) -> bool:
    """Digit-block structure of {-n : k*b^l < n <= (k+1)*b^l}.

    True iff all members share their digits from index l on and their first-l
    digit vectors are pairwise distinct (hence exhaust all b^l values).
    Exhaustive; intended as a test oracle.
    """
    if k < 0 or l < 0:
        raise ValueError("k and l must be >= 0")
    hi = (k + 1) * b**l
    # beyond the expansion of any member, digits of -n are constant b-1
    depth = l + max(len(integer_digits(hi, b).preperiod), 1) + 2
    tails = set()
    heads = set()
    for n in range(k * b**l + 1, hi + 1):
        ds = negate(integer_digits(n, b)).digits(depth)
        heads.add(ds[:l])
        tails.add(ds[l:])
    return len(tails) == 1 and len(heads) == b**l
