"""Exact arithmetic in the finite field F_q, q a prime power up to 256.

Elements are encoded internally as integer *codes* in ``range(q)``: the
coefficient vector ``(c_0, ..., c_{k-1})`` of a polynomial in ``F_p[x]``
reduced modulo the field modulus is stored as ``sum(c_i * p**i)``.  For
prime fields the code is just the residue.  All heavy lifting elsewhere in
the package (row reduction, flag enumeration) works on codes together with
the precomputed operation tables of :class:`FieldSpec`.

:class:`FieldElement` is the user-facing value type wrapping one code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache, cached_property
from itertools import product
from typing import Union

from .errors import DivisionByZero, NotPrimePower, SpecMismatch, Unsupported

MAX_Q = 256


def _factor_prime_power(q: int) -> tuple[int, int]:
    p = None
    m = q
    d = 2
    while d * d <= m:
        if m % d == 0:
            p = d
            break
        d += 1
    if p is None:
        return q, 1
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, k


# --- polynomials over F_p, coefficient lists low -> high ---------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of ``a`` divided by ``b`` over F_p; ``b`` must be nonzero."""
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, degree: int):
    """Monic polynomials of the given degree, in increasing code order."""
    for low in product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg-1."""
    deg = len(poly) - 1
    for d in range(1, deg):
        for divisor in _monic_polys(p, d):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    # _monic_polys walks c_{k-1} slowest, so the first hit has the smallest
    # code sum(c_i p^i), i.e. it is lexicographically smallest read from the top.
    for poly in _monic_polys(p, k):
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


# --- the field --------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_q with q = p**k.

    ``modulus`` holds the coefficients (low to high, monic) of the irreducible
    polynomial defining F_q over F_p; it is empty for prime fields.
    """

    p: int
    k: int
    modulus: tuple[int, ...] = ()
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p ** self.k)
        if self.k == 1:
            if self.modulus:
                raise ValueError("prime fields take no modulus")
        else:
            if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree k")
            if not is_irreducible(list(self.modulus), self.p):
                raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")

    def __repr__(self):
        return f"GF({self.q})"

    # encoding ----------------------------------------------------------------

    def to_coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"bad coefficient vector {coeffs!r} for {self!r}")
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c
        return code

    def encode(self, value) -> int:
        """Element code from an int (prime field) or coefficient vector."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise SpecMismatch(f"{value.spec!r} element used in {self!r}")
            return value.code
        if isinstance(value, int):
            if self.k == 1:
                return value % self.p
            if 0 <= value < self.q:
                return value
            raise ValueError(f"code {value} out of range for {self!r}")
        return self.from_coeffs(value)

    def decode(self, code: int):
        """JSON-friendly representative: int for prime fields, else coefficients."""
        return code if self.k == 1 else list(self.to_coeffs(code))

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self, self.encode(value))

    # operation tables ----------------------------------------------------------

    @cached_property
    def add_table(self) -> list[list[int]]:
        p, q = self.p, self.q
        if self.k == 1:
            return [[(a + b) % p for b in range(q)] for a in range(q)]
        coeffs = [self.to_coeffs(c) for c in range(q)]
        return [
            [self.from_coeffs((x + y) % p for x, y in zip(coeffs[a], coeffs[b])) for b in range(q)]
            for a in range(q)
        ]

    @cached_property
    def neg_table(self) -> list[int]:
        add = self.add_table
        return [row.index(0) for row in add]

    @cached_property
    def sub_table(self) -> list[list[int]]:
        add, neg = self.add_table, self.neg_table
        return [[add[a][neg[b]] for b in range(self.q)] for a in range(self.q)]

    def _poly_mul_code(self, a: int, b: int) -> int:
        p = self.p
        x, y = self.to_coeffs(a), self.to_coeffs(b)
        prod_ = [0] * (2 * self.k - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod_[i + j] = (prod_[i + j] + xi * yj) % p
        rem = _poly_mod(prod_, list(self.modulus), p)
        return self.from_coeffs(rem + [0] * (self.k - len(rem)))

    @cached_property
    def mul_table(self) -> list[list[int]]:
        q = self.q
        if self.k == 1:
            return [[a * b % q for b in range(q)] for a in range(q)]
        # log/antilog through a primitive element keeps table building O(q^2)
        for g in range(2, q):
            powers = [1]
            x = g
            while x != 1:
                powers.append(x)
                x = self._poly_mul_code(x, g)
            if len(powers) == q - 1:
                break
        log = {c: i for i, c in enumerate(powers)}
        table = [[0] * q for _ in range(q)]
        for a in range(1, q):
            la = log[a]
            row = table[a]
            for b in range(1, q):
                row[b] = powers[(la + log[b]) % (q - 1)]
        return table

    @cached_property
    def inv_table(self) -> list[int]:
        mul = self.mul_table
        inv = [0] * self.q
        for a in range(1, self.q):
            inv[a] = mul[a].index(1)
        return inv


@cache
def field_new(q: int) -> FieldSpec:
    """Construct F_q; the modulus is the smallest monic irreducible of degree k."""
    if not isinstance(q, int) or q < 2:
        raise NotPrimePower(f"{q!r} is not a prime power")
    if q > MAX_Q:
        raise Unsupported(f"q = {q} exceeds the supported maximum {MAX_Q}")
    p, k = _factor_prime_power(q)
    if k == 1:
        return FieldSpec(p, 1)
    return FieldSpec(p, k, _smallest_irreducible(p, k))


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    code: int

    @property
    def rep(self) -> Union[int, tuple[int, ...]]:
        """Canonical representative: residue for k = 1, coefficient tuple otherwise."""
        return self.code if self.spec.k == 1 else self.spec.to_coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise SpecMismatch(f"cannot combine {self.spec!r} and {other.spec!r}")
            return other.code
        if isinstance(other, int):
            return self.spec.encode(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.add_table[self.code][b])

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub_table[self.code][b])

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul_table[self.code][b])

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg_table[self.code])

    def inv(self) -> "FieldElement":
        if self.code == 0:
            raise DivisionByZero(f"inverse of zero in {self.spec!r}")
        return FieldElement(self.spec, self.spec.inv_table[self.code])

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self * FieldElement(self.spec, b).inv()

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"{self.rep!r}@GF({self.spec.q})"


def elem_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.spec != b.spec:
        raise SpecMismatch(f"cannot combine {a.spec!r} and {b.spec!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def elem_inv(a: FieldElement) -> FieldElement:
    return a.inv()


def elem_neg(a: FieldElement) -> FieldElement:
    return -a


def elements(spec: FieldSpec) -> list[FieldElement]:
    """All q elements, zero first, in code order."""
    return [FieldElement(spec, c) for c in range(spec.q)]
