"""Exact arithmetic in the Galois field GF(p^n), polynomial basis over Z_p.

Elements are identified with integer indices 0..Q-1: the element with
coefficient vector (c_0, ..., c_{n-1}) (constant term first) has index
sum(c_i * p^i).  Index order is the canonical element order used for
enumeration, table indexing and serialization; index 0 is zero and
index 1 is one.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .errors import FieldMismatchError

MAX_FIELD_SIZE = 1 << 20

# Beyond this size, operations fall back to digit arithmetic instead of
# precomputed tables (the mul table is Q^2 entries).
_TABLE_MAX_Q = 256

# Reduction polynomials for common small fields, constant term first.
CANONICAL_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),        # t^2 + t + 1
    (2, 3): (1, 1, 0, 1),     # t^3 + t + 1
    (2, 4): (1, 1, 0, 0, 1),  # t^4 + t + 1
    (3, 2): (1, 0, 1),        # t^2 + 1
    (3, 3): (1, 2, 0, 1),     # t^3 + 2t + 1
    (5, 2): (2, 0, 1),        # t^2 + 2
}


def is_prime(p: int) -> bool:
    """Deterministic primality check by trial division (p <= 2^20 here)."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _poly_trim(a: Sequence[int]) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of a modulo a monic polynomial mod, over Z_p."""
    a = list(a)
    dm = len(mod) - 1
    while len(a) > dm:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(mod):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _poly_trim(a)


def _poly_is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree 1..deg/2."""
    n = len(mod) - 1
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            div = lower + (1,)
            if not _poly_mod(mod, div, p):
                return False
    return True


def find_irreducible(p: int, n: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree n in canonical index order."""
    for idx in range(p ** n):
        lower = _decode_digits(idx, p, n)
        mod = lower + (1,)
        if _poly_is_irreducible(mod, p):
            return mod
    raise RuntimeError(f"no irreducible polynomial of degree {n} over Z_{p}")


def _decode_digits(index: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, r = divmod(index, p)
        out.append(r)
    return tuple(out)


def _encode_digits(coeffs: Sequence[int], p: int) -> int:
    index = 0
    for c in reversed(coeffs):
        index = index * p + c
    return index


class FieldSpec:
    """Description of GF(p^n): characteristic, degree and reduction polynomial.

    Immutable after construction; all index-level operations are pure.
    """

    __slots__ = ("p", "n", "q", "modulus", "_add", "_mul", "_neg", "_inv")

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if n < 1:
            raise ValueError(f"extension degree must be >= 1, got {n}")
        q = p ** n
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"field size {q} exceeds cap {MAX_FIELD_SIZE}")
        if modulus is None:
            modulus = CANONICAL_MODULI.get((p, n)) or find_irreducible(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError(
                f"modulus must be monic of degree {n}, got {list(modulus)}")
        if not _poly_is_irreducible(modulus, p):
            witness = _irreducibility_witness(modulus, p)
            raise ValueError(
                f"modulus {list(modulus)} is reducible over Z_{p}"
                f" (divisible by {list(witness)})")
        self.p = p
        self.n = n
        self.q = q
        self.modulus = modulus
        self._add = self._mul = self._neg = self._inv = None

    # -- identity ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldSpec)
                and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus))

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def __repr__(self) -> str:
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n})"

    def describe(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    @classmethod
    def from_description(cls, desc: dict) -> "FieldSpec":
        return cls(desc["p"], desc.get("n", 1), desc.get("modulus"))

    # -- index-level arithmetic ------------------------------------------

    def _ensure_tables(self) -> None:
        if self._mul is not None or self.q > _TABLE_MAX_Q:
            return
        p, n, q, mod = self.p, self.n, self.q, self.modulus
        polys = [_decode_digits(i, p, n) for i in range(q)]
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        for i in range(q):
            ci = polys[i]
            for j in range(i, q):
                cj = polys[j]
                s = _encode_digits([(a + b) % p for a, b in zip(ci, cj)], p)
                add[i][j] = add[j][i] = s
                m = _encode_digits(
                    _poly_mod(_poly_mul(ci, cj, p), mod, p) + (0,) * n, p)
                mul[i][j] = mul[j][i] = m
        self._neg = [_encode_digits([(-c) % p for c in cp], p) for cp in polys]
        self._add = add
        self._mul = mul
        self._inv = [0] * q
        for i in range(1, q):
            self._inv[i] = self._pow_slow(i, q - 2)

    def add(self, i: int, j: int) -> int:
        self._ensure_tables()
        if self._add is not None:
            return self._add[i][j]
        p = self.p
        a = _decode_digits(i, p, self.n)
        b = _decode_digits(j, p, self.n)
        return _encode_digits([(x + y) % p for x, y in zip(a, b)], p)

    def neg(self, i: int) -> int:
        self._ensure_tables()
        if self._neg is not None:
            return self._neg[i]
        p = self.p
        return _encode_digits([(-c) % p for c in _decode_digits(i, p, self.n)], p)

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg(j))

    def mul(self, i: int, j: int) -> int:
        self._ensure_tables()
        if self._mul is not None:
            return self._mul[i][j]
        p, n = self.p, self.n
        a = _decode_digits(i, p, n)
        b = _decode_digits(j, p, n)
        r = _poly_mod(_poly_mul(a, b, p), self.modulus, p)
        return _encode_digits(r + (0,) * n, p)

    def inv(self, i: int) -> int:
        if i == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        self._ensure_tables()
        if self._inv is not None:
            return self._inv[i]
        return self._pow_slow(i, self.q - 2)

    def _pow_slow(self, i: int, k: int) -> int:
        result = 1
        base = i
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def pow(self, i: int, k: int) -> int:
        if k < 0:
            i, k = self.inv(i), -k
        result = 1
        base = i
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    # -- elements ---------------------------------------------------------

    def element(self, index: int) -> "FieldElement":
        return FieldElement(self, index)

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        if len(coeffs) != self.n:
            raise ValueError(f"expected {self.n} coefficients")
        return FieldElement(self, _encode_digits([c % self.p for c in coeffs], self.p))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> list["FieldElement"]:
        """All Q elements in canonical index order (zero first)."""
        return [FieldElement(self, i) for i in range(self.q)]

    def __iter__(self) -> Iterator["FieldElement"]:
        return iter(self.elements())

    def sample(self, rng) -> "FieldElement":
        """Uniform element drawn from a caller-owned random.Random."""
        return FieldElement(self, rng.randrange(self.q))


def _irreducibility_witness(mod: Sequence[int], p: int) -> tuple[int, ...]:
    n = len(mod) - 1
    for d in range(1, n // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            div = lower + (1,)
            if not _poly_mod(mod, div, p):
                return div
    raise RuntimeError("polynomial is irreducible")


class FieldElement:
    """A value of GF(p^n); thin wrapper over a canonical index."""

    __slots__ = ("field", "index")

    def __init__(self, field: FieldSpec, index: int):
        if not 0 <= index < field.q:
            raise ValueError(f"index {index} out of range for {field}")
        self.field = field
        self.index = index

    @property
    def coeffs(self) -> tuple[int, ...]:
        return _decode_digits(self.index, self.field.p, self.field.n)

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if self.field != other.field:
            raise FieldMismatchError(
                f"elements of {self.field} and {other.field} cannot be mixed")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.add(self.index, other.index))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.index, other.index))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.index, other.index))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.index, k))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.index))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __bool__(self) -> bool:
        return self.index != 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldElement)
                and self.field == other.field and self.index == other.index)

    def __hash__(self) -> int:
        return hash((self.field, self.index))

    def __repr__(self) -> str:
        return f"{self.field}[{_poly_str(self.coeffs)}]"


def _poly_str(coeffs: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            base = "t" if i == 1 else f"t^{i}"
            terms.append(base if c == 1 else f"{c}{base}")
    return " + ".join(terms) if terms else "0"
