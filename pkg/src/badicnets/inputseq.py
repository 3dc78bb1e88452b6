"""Index sequences n -> s_n with values in the b-adic integers.

Every sequence exposes eval(n) -> BAdicStream (exact digits, deterministic)
plus a truncations() bulk path computing tau_k(s_n) for a contiguous index
range via modular closed forms where the sequence kind allows it.  Uniform
distribution verdicts are metadata only; the generation engine runs any
sequence regardless.

CLI sequence grammar (digits are least-significant-first everywhere):

    natural                               s_n = n
    neg                                   s_n = -n - 1
    alt                                   s_n = (-1)^n * floor((n+1)/2)
    affine:a=<u>/<v>,c=<u>/<v>            s_n = a*n + c
    rat:v=<int>,alpha=<u>/<v>             s_n = n/v + alpha, gcd(v, b) = 1
    quad:a=<r>,c=<r>,d=<r>                s_n = a*n^2 + c*n + d
    beatty:p=<int>,q=<int>,nmax=<int>     s_n = floor((p/q)*n), valid n <= nmax

Rationals are written u/v (or a plain integer) and are canonicalized to
lowest terms.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Callable

from dataclasses import dataclass

from . import badic
from .badic import BAdicStream, PeriodicStream
from .errors import (NotBAdicInteger, PrecisionExhausted, SpecGrammarError,
                     TooLarge)


class UDVerdict(Enum):
    UD = "ud"
    NOT_UD = "not-ud"
    UNKNOWN = "unknown"


class IndexSequence:
    """Base class: immutable descriptor, pure eval, parallel-safe."""

    base: int
    kind: str = "custom"

    def eval(self, n: int) -> BAdicStream:
        raise NotImplementedError

    def spec_string(self) -> str:
        raise NotImplementedError

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        """tau_k(s_n) for n_start <= n < n_start + count (generic path)."""
        return [self.eval(n).truncate(k) for n in range(n_start, n_start + count)]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(base={self.base}, spec={self.spec_string()!r})"


class NaturalSequence(IndexSequence):
    kind = "natural"

    def __init__(self, base: int):
        self.base = base

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        return badic.integer_digits(n, self.base)

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        m = self.base**k
        t = n_start % m
        out = []
        for _ in range(count):
            out.append(t)
            t += 1
            if t == m:
                t = 0
        return out

    def spec_string(self) -> str:
        return "natural"


class NegativeShiftedSequence(IndexSequence):
    """s_n = -n - 1, via digit-complement negation of n + 1."""

    kind = "neg"

    def __init__(self, base: int):
        self.base = base

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        return badic.negate(badic.integer_digits(n + 1, self.base))

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        m = self.base**k
        return [(-(n + 1)) % m for n in range(n_start, n_start + count)]

    def spec_string(self) -> str:
        return "neg"


class AlternatingSequence(IndexSequence):
    """s_n = (-1)^n * floor((n+1)/2): 0, -1, 1, -2, 2, ..."""

    kind = "alt"

    def __init__(self, base: int):
        self.base = base

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        if n % 2 == 0:
            return badic.integer_digits(n // 2, self.base)
        return badic.negate(badic.integer_digits(n // 2 + 1, self.base))

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        m = self.base**k
        out = []
        for n in range(n_start, n_start + count):
            out.append((n // 2) % m if n % 2 == 0 else (-(n // 2 + 1)) % m)
        return out

    def spec_string(self) -> str:
        return "alt"


def _as_stream(value, base: int) -> BAdicStream:
    if isinstance(value, BAdicStream):
        if value.base != base:
            raise NotBAdicInteger(f"parameter stream has base {value.base}, expected {base}")
        return value
    return badic.from_rational(Fraction(value), base)


def _rational_of(stream: BAdicStream) -> Fraction | None:
    return stream.as_rational() if isinstance(stream, PeriodicStream) else None


class AffineSequence(IndexSequence):
    """s_n = a*n + c for b-adic integers a, c."""

    kind = "affine"

    def __init__(self, base: int, a, c):
        self.base = base
        self.a = _as_stream(a, base)
        self.c = _as_stream(c, base)
        self._a_rat = _rational_of(self.a)
        self._c_rat = _rational_of(self.c)

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        if self._a_rat is not None and self._c_rat is not None:
            return badic.from_rational(self._a_rat * n + self._c_rat, self.base)
        return badic.add(badic.mul_small(self.a, n), self.c)

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        m = self.base**k
        step = self.a.truncate(k)
        t = (self.c.truncate(k) + step * n_start) % m
        out = []
        for _ in range(count):
            out.append(t)
            t = (t + step) % m
        return out

    def spec_string(self) -> str:
        return f"affine:a={_fmt(self._a_rat)},c={_fmt(self._c_rat)}"


class RationalAffineSequence(IndexSequence):
    """s_n = n/v + alpha with gcd(v, b) = 1."""

    kind = "rat"

    def __init__(self, base: int, v: int, alpha):
        if v <= 0:
            raise ValueError("v must be a positive integer")
        if gcd(v, base) != 1:
            raise NotBAdicInteger(f"gcd(v={v}, b={base}) != 1; n/v is not in Z_b")
        self.base = base
        self.v = v
        self.alpha = _as_stream(alpha, base)
        self._alpha_rat = _rational_of(self.alpha)

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        if self._alpha_rat is not None:
            return badic.from_rational(Fraction(n, self.v) + self._alpha_rat, self.base)
        return badic.add(badic.rational_digits(n, self.v, self.base), self.alpha)

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        m = self.base**k
        step = pow(self.v, -1, m)
        t = (self.alpha.truncate(k) + step * n_start) % m
        out = []
        for _ in range(count):
            out.append(t)
            t = (t + step) % m
        return out

    def spec_string(self) -> str:
        return f"rat:v={self.v},alpha={_fmt(self._alpha_rat)}"


class QuadraticSequence(IndexSequence):
    """s_n = a*n^2 + c*n + d."""

    kind = "quad"

    def __init__(self, base: int, a, c, d):
        self.base = base
        self.a = _as_stream(a, base)
        self.c = _as_stream(c, base)
        self.d = _as_stream(d, base)
        self._rats = tuple(_rational_of(s) for s in (self.a, self.c, self.d))

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        ra, rc, rd = self._rats
        if None not in self._rats:
            return badic.from_rational(ra * n * n + rc * n + rd, self.base)
        return badic.add(badic.add(badic.mul_small(self.a, n * n),
                                   badic.mul_small(self.c, n)), self.d)

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        m = self.base**k
        a = self.a.truncate(k)
        c = self.c.truncate(k)
        d = self.d.truncate(k)
        return [(a * n * n + c * n + d) % m for n in range(n_start, n_start + count)]

    def spec_string(self) -> str:
        return (f"quad:a={_fmt(self._rats[0])},c={_fmt(self._rats[1])},"
                f"d={_fmt(self._rats[2])}")


class BeattySequence(IndexSequence):
    """s_n = floor(alpha * n) with alpha held as an exact rational surrogate.

    The surrogate p/q (e.g. a continued-fraction convergent) must be certified
    valid by the caller up to n_max; evaluation beyond raises.
    """

    kind = "beatty"

    def __init__(self, base: int, p: int, q: int, n_max: int):
        if q <= 0 or n_max < 0:
            raise ValueError("need q > 0 and n_max >= 0")
        self.base = base
        self.p = p
        self.q = q
        self.n_max = n_max

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        if n > self.n_max:
            raise PrecisionExhausted(
                f"Beatty surrogate {self.p}/{self.q} certified only up to n={self.n_max}")
        return badic.integer_digits((self.p * n) // self.q, self.base)

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        if n_start + count - 1 > self.n_max:
            raise PrecisionExhausted(
                f"Beatty surrogate {self.p}/{self.q} certified only up to n={self.n_max}")
        m = self.base**k
        return [((self.p * n) // self.q) % m for n in range(n_start, n_start + count)]

    def spec_string(self) -> str:
        return f"beatty:p={self.p},q={self.q},nmax={self.n_max}"


class CustomSequence(IndexSequence):
    """User-supplied n -> BAdicStream callback, memoized for determinism."""

    kind = "custom"

    def __init__(self, base: int, fn: Callable[[int], BAdicStream], name: str = "custom"):
        self.base = base
        self._fn = fn
        self._name = name
        self._memo: dict[int, BAdicStream] = {}

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        if n not in self._memo:
            s = self._fn(n)
            if s.base != self.base:
                raise NotBAdicInteger(f"callback returned base {s.base}, expected {self.base}")
            self._memo[n] = s
        return self._memo[n]

    def spec_string(self) -> str:
        return self._name


class SubsequenceView(IndexSequence):
    """s'_n = parent s_{stride*n + offset}; used for the even/odd splits."""

    kind = "subsequence"

    def __init__(self, parent: IndexSequence, stride: int, offset: int):
        if stride < 1 or offset < 0:
            raise ValueError("need stride >= 1 and offset >= 0")
        self.base = parent.base
        self.parent = parent
        self.stride = stride
        self.offset = offset

    def eval(self, n: int) -> BAdicStream:
        _check_index(n)
        return self.parent.eval(self.stride * n + self.offset)

    def truncations(self, n_start: int, count: int, k: int) -> list[int]:
        lo = self.stride * n_start + self.offset
        hi = self.stride * (n_start + count - 1) + self.offset + 1
        full = self.parent.truncations(lo, hi - lo, k)
        return full[:: self.stride]

    def spec_string(self) -> str:
        return f"sub({self.parent.spec_string()},{self.stride},{self.offset})"


def _check_index(n: int) -> None:
    if n < 0:
        raise ValueError("sequence index must be >= 0")


def _fmt(x: Fraction | None) -> str:
    if x is None:
        return "<stream>"
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_ud_expected(seq: IndexSequence) -> UDVerdict:
    """Uniform-distribution verdict where one is known; metadata only.

    Affine s_n = a*n + c (and its instances -n-1 and n/v + alpha) is u.d.
    exactly when a is a unit.  a*n^2 + c*n + d is u.d. when |a|_b < 1 and c
    is a unit, while plain squares are not.  Everything else is Unknown at
    the level of certainty (empirical testing only).
    """
    b = seq.base
    if isinstance(seq, (NaturalSequence, NegativeShiftedSequence, RationalAffineSequence)):
        return UDVerdict.UD
    if isinstance(seq, AffineSequence):
        return UDVerdict.UD if badic.is_unit(seq.a) else UDVerdict.NOT_UD
    if isinstance(seq, QuadraticSequence):
        ra, rc, rd = seq._rats
        if (ra, rc, rd) == (Fraction(1), Fraction(0), Fraction(0)):
            return UDVerdict.NOT_UD
        if ra is not None and ra != 0:
            pv = badic.pseudo_valuation(ra.numerator, ra.denominator, b)
            if pv.exponent < 0 and badic.is_unit(seq.c):
                return UDVerdict.UD
        if ra is not None and ra == 0 and badic.is_unit(seq.c):
            return UDVerdict.UD  # degenerates to affine with unit slope
        return UDVerdict.UNKNOWN
    return UDVerdict.UNKNOWN


@dataclass
class UDReport:
    """Histogram of tau_k(s_n) classes for n < N, with exact max deviation."""

    base: int
    k: int
    n_samples: int
    histogram: list[int]
    deviation: Fraction

    def worst_class(self) -> int:
        target = Fraction(1, self.base**self.k)
        return max(range(len(self.histogram)),
                   key=lambda a: abs(Fraction(self.histogram[a], self.n_samples) - target))


def empirical_ud_test(seq: IndexSequence, k: int, n_samples: int) -> UDReport:
    """Count residue classes of tau_k(s_n) and report the max deviation."""
    m = seq.base**k
    if m > 10**6:
        raise TooLarge(f"b^k = {m} exceeds the desk-scale cap 10^6")
    if n_samples < m:
        raise ValueError(f"need at least b^k = {m} samples")
    hist = [0] * m
    for t in seq.truncations(0, n_samples, k):
        hist[t] += 1
    dev = max(abs(Fraction(c, n_samples) - Fraction(1, m)) for c in hist)
    return UDReport(seq.base, k, n_samples, hist, dev)


_BUILTINS = {"natural": NaturalSequence, "neg": NegativeShiftedSequence,
             "alt": AlternatingSequence}


def parse_sequence_spec(text: str, base: int) -> IndexSequence:
    """Parse the CLI sequence grammar (see module docstring)."""
    text = text.strip()
    if text in _BUILTINS:
        return _BUILTINS[text](base)
    head, sep, rest = text.partition(":")
    if not sep:
        raise SpecGrammarError(f"unknown sequence spec {text!r}")
    try:
        params = {}
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"expected key=value, got {item!r}")
            params[key.strip()] = value.strip()
        if head == "affine":
            return AffineSequence(base, Fraction(params["a"]), Fraction(params["c"]))
        if head == "rat":
            return RationalAffineSequence(base, int(params["v"]), Fraction(params["alpha"]))
        if head == "quad":
            return QuadraticSequence(base, Fraction(params["a"]),
                                     Fraction(params["c"]), Fraction(params["d"]))
        if head == "beatty":
            return BeattySequence(base, int(params["p"]), int(params["q"]),
                                  int(params["nmax"]))
    except NotBAdicInteger:
        raise
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise SpecGrammarError(f"bad sequence spec {text!r}: {exc}") from exc
    raise SpecGrammarError(f"unknown sequence kind {head!r}")
