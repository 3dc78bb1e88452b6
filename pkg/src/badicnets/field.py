"""Arithmetic in small finite fields GF(p^e) with a fixed integer enumeration.

Element index i corresponds to the coefficient vector of i written in base p,
least significant digit = constant coefficient.  For e = 1 index arithmetic is
plain arithmetic mod p; for e > 1 it is polynomial arithmetic modulo a fixed
monic irreducible reduction polynomial.  The reduction polynomial is chosen
deterministically (smallest base-p value among monic irreducibles of degree e)
so that matrix files referring to (p, e) mean the same elements everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FieldMismatch, NotPrime, TooLarge

ORDER_CAP = 1 << 16
TABLE_CAP = 4096  # dense q x q tables above this would be needlessly large
FLAT_TABLE_CAP = 256  # flat byte tables for the compiled kernels


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul_mod(a: list[int], b: list[int], mod_poly: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_rem(out, mod_poly, p)


def _poly_rem(a: list[int], mod_poly: list[int], p: int) -> list[int]:
    a = list(a)
    deg_m = len(mod_poly) - 1
    lead_inv = pow(mod_poly[-1], -1, p)
    while len(a) > deg_m:
        coef = a[-1]
        if coef:
            f = (coef * lead_inv) % p
            off = len(a) - 1 - deg_m
            for i, c in enumerate(mod_poly):
                a[off + i] = (a[off + i] - f * c) % p
        a.pop()
    return _poly_trim(a)


def _poly_powmod(base: list[int], exp: int, mod_poly: list[int], p: int) -> list[int]:
    result = [1]
    acc = _poly_rem(list(base), mod_poly, p)
    while exp:
        if exp & 1:
            result = _poly_mul_mod(result, acc, mod_poly, p)
        acc = _poly_mul_mod(acc, acc, mod_poly, p)
        exp >>= 1
    return result


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        lead_inv = pow(b[-1], -1, p)
        monic_b = [(c * lead_inv) % p for c in b]
        a, b = b, _poly_trim(_poly_rem(a, monic_b, p))
    return a


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Rabin test: x^(p^e) == x mod f, and gcd(x^(p^(e/l)) - x, f) = 1."""
    e = len(poly) - 1
    x = [0, 1]
    frob = _poly_powmod(x, p**e, poly, p)
    if _poly_sub(frob, x, p):
        return False
    for ell in {d for d in range(2, e + 1) if e % d == 0 and is_prime(d)}:
        g = _poly_powmod(x, p ** (e // ell), poly, p)
        if len(_poly_gcd(_poly_sub(g, x, p), poly, p)) > 1:
            return False
    return True


def _find_reduction_poly(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e over GF(p) with smallest base-p value."""
    for low in range(p**e):
        coeffs = []
        v = low
        for _ in range(e):
            v, d = divmod(v, p)
            coeffs.append(d)
        poly = coeffs + [1]
        if _is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError(f"no irreducible polynomial of degree {e} over GF({p})")


class FieldSpec:
    """A finite field GF(p^e) operating on element indices 0..q-1.

    Immutable after construction; safe for unrestricted concurrent reads
    (lazy table builds are idempotent).
    """

    def __init__(self, p: int, e: int):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if e < 1:
            raise ValueError("exponent must be >= 1")
        q = p**e
        if q > ORDER_CAP:
            raise TooLarge(f"field order {q} exceeds cap {ORDER_CAP}")
        self.p = p
        self.e = e
        self.q = q
        self.reduction_polynomial: tuple[int, ...] | None = (
            _find_reduction_poly(p, e) if e > 1 else None
        )
        self._add_table: list[list[int]] | None = None
        self._mul_table: list[list[int]] | None = None
        self._inv_table: list[int] | None = None
        self._add_flat: bytes | None = None
        self._mul_flat: bytes | None = None

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, e={self.e})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))

    # -- index <-> coefficient vector -------------------------------------

    def to_coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_coeffs(self, coeffs: list[int]) -> int:
        v = 0
        for d in reversed(coeffs[: self.e]):
            v = v * self.p + d
        return v

    # -- arithmetic on indices ---------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        v, mult = 0, 1
        for _ in range(self.e):
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            v += ((da + db) % p) * mult
            mult *= p
        return v

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        v, mult = 0, 1
        for _ in range(self.e):
            a, da = divmod(a, p)
            v += (-da % p) * mult
            mult *= p
        return v

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        prod = _poly_mul_mod(
            _poly_trim(self.to_coeffs(a)),
            _poly_trim(self.to_coeffs(b)),
            list(self.reduction_polynomial),
            self.p,
        )
        return self.from_coeffs(prod + [0] * self.e)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.e == 1:
            return pow(a, -1, self.p)
        if self._inv_table is None:
            # a^(q-2) by repeated squaring through mul()
            self._inv_table = [0] * self.q
        if self._inv_table[a]:
            return self._inv_table[a]
        result, acc, exp = 1, a, self.q - 2
        while exp:
            if exp & 1:
                result = self.mul(result, acc)
            acc = self.mul(acc, acc)
            exp >>= 1
        self._inv_table[a] = result
        return result

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.e == 1:
            return pow(a, k, self.p)
        result, acc = 1, a
        while k:
            if k & 1:
                result = self.mul(result, acc)
            acc = self.mul(acc, acc)
            k >>= 1
        return result

    # -- dense tables --------------------------------------------------------

    @property
    def add_table(self) -> list[list[int]]:
        if self._add_table is None:
            if self.q > TABLE_CAP:
                raise TooLarge(f"dense tables refused for q={self.q} > {TABLE_CAP}")
            self._add_table = [[self.add(a, b) for b in range(self.q)]
                               for a in range(self.q)]
        return self._add_table

    @property
    def mul_table(self) -> list[list[int]]:
        if self._mul_table is None:
            if self.q > TABLE_CAP:
                raise TooLarge(f"dense tables refused for q={self.q} > {TABLE_CAP}")
            q = self.q
            table = [[0] * q for _ in range(q)]
            for a in range(q):
                for b in range(a, q):
                    table[a][b] = table[b][a] = self.mul(a, b)
            self._mul_table = table
        return self._mul_table

    def add_table_flat(self) -> bytes:
        """Row-major q*q byte table, for the compiled kernels (q <= 256)."""
        if self._add_flat is None:
            if self.q > FLAT_TABLE_CAP:
                raise TooLarge(f"flat byte tables need q <= {FLAT_TABLE_CAP}")
            self._add_flat = bytes(v for row in self.add_table for v in row)
        return self._add_flat

    def mul_table_flat(self) -> bytes:
        if self._mul_flat is None:
            if self.q > FLAT_TABLE_CAP:
                raise TooLarge(f"flat byte tables need q <= {FLAT_TABLE_CAP}")
            self._mul_flat = bytes(v for row in self.mul_table for v in row)
        return self._mul_flat

    def element(self, index: int) -> "FqElem":
        return FqElem(self, index)


@dataclass(frozen=True)
class FqElem:
    """A field element as (spec, index); operators check the spec matches."""

    field: FieldSpec
    index: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < self.field.q:
            raise ValueError(f"index {self.index} not in 0..{self.field.q - 1}")

    def _check(self, other: "FqElem") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "FqElem") -> "FqElem":
        self._check(other)
        return FqElem(self.field, self.field.add(self.index, other.index))

    def __mul__(self, other: "FqElem") -> "FqElem":
        self._check(other)
        return FqElem(self.field, self.field.mul(self.index, other.index))

    def __sub__(self, other: "FqElem") -> "FqElem":
        self._check(other)
        return FqElem(self.field, self.field.sub(self.index, other.index))

    def __neg__(self) -> "FqElem":
        return FqElem(self.field, self.field.neg(self.index))

    def inverse(self) -> "FqElem":
        return FqElem(self.field, self.field.inv(self.index))


_FIELD_CACHE: dict[tuple[int, int], FieldSpec] = {}


def make_field(p: int, e: int = 1) -> FieldSpec:
    """Construct (and cache) GF(p^e); NotPrime / TooLarge on bad input."""
    key = (p, e)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldSpec(p, e)
    return _FIELD_CACHE[key]


def add(a: FqElem, b: FqElem) -> FqElem:
    return a + b


def mul(a: FqElem, b: FqElem) -> FqElem:
    return a * b


def neg(a: FqElem) -> FqElem:
    return -a


def inv(a: FqElem) -> FqElem:
    return a.inverse()
