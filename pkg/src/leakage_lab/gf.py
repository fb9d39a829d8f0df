"""Arithmetic in F_p and F_{p^w}.

Elements have two interchangeable representations:

* :class:`FieldElement` -- a coefficient vector over the power basis
  ``1, t, ..., t^{w-1}`` with scalar operator overloading, and
* canonical integer encodings ``enc(x) = sum(coeffs[i] * p**i)`` in
  ``[0, q)``, which the vectorised code paths use together with the lookup
  tables exposed by :class:`FieldParams`.
"""

from __future__ import annotations

import cmath
import functools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

MAX_PRIME = 1 << 16
MAX_DEGREE = 4
# Dense add/mul tables are q*q; beyond this size only scalar arithmetic is offered.
TABLE_MAX_Q = 1024


class FieldMismatchError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists low-to-high
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim(list(m))
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([c % p for c in a])
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("division by zero")
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        quot[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return _trim(quot), a


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _poly_divmod(a, b, p)
        a, b = b, r
    return a


def _poly_powmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Ben-Or test: a monic f of degree w is irreducible iff
    gcd(f, x^{p^i} - x) = 1 for every 1 <= i <= w/2."""
    f = _trim([c % p for c in poly])
    w = len(f) - 1
    if w < 1 or f[-1] != 1:
        return False
    if w == 1:
        return True
    xp = [0, 1]
    for _ in range(w // 2):
        xp = _poly_powmod(xp, p, f, p)
        g = _poly_gcd(f, _poly_sub(xp, [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, w: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree ``w`` over F_p, ordering the
    lower coefficients by their integer encoding."""
    for low in range(p**w):
        coeffs = [(low // p**i) % p for i in range(w)] + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {w} over F_{p}")


# ---------------------------------------------------------------------------
# field parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldParams:
    """The field F_{p^w} = F_p[t]/(modulus).

    ``modulus`` is monic, low-to-high, of length ``w + 1``.
    """

    p: int
    w: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not (2 <= self.p <= MAX_PRIME) or not is_prime(self.p):
            raise ValueError(f"p={self.p} is not a prime <= 2^16")
        if not (1 <= self.w <= MAX_DEGREE):
            raise ValueError(f"extension degree w={self.w} outside [1, {MAX_DEGREE}]")
        if len(self.modulus) != self.w + 1:
            raise ValueError("modulus degree does not match w")
        if not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {list(self.modulus)} is not monic irreducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.w

    def __str__(self) -> str:
        return f"{self.p}^{self.w}"

    # -- scalar helpers ---------------------------------------------------

    def element(self, value: int | Sequence[int]) -> "FieldElement":
        """Build an element from its encoding or from a coefficient list."""
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.q:
                raise ValueError(f"encoding {value} outside [0, {self.q})")
            coeffs = tuple((value // self.p**i) % self.p for i in range(self.w))
        else:
            coeffs = tuple(int(c) % self.p for c in value)
            if len(coeffs) > self.w:
                raise ValueError("too many coefficients")
            coeffs = coeffs + (0,) * (self.w - len(coeffs))
        return FieldElement(coeffs, self)

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def gen(self) -> "FieldElement":
        """The class of t (equals 0 when w == 1 and modulus is x)."""
        return self.element(_poly_mod([0, 1], self.modulus, self.p))

    def digits(self, a) -> np.ndarray:
        """Coefficient vectors of an array of encodings, shape ``a.shape + (w,)``."""
        a = np.asarray(a, dtype=np.int64)
        powers = self.p ** np.arange(self.w, dtype=np.int64)
        return (a[..., None] // powers) % self.p

    def encode_digits(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.int64)
        powers = self.p ** np.arange(self.w, dtype=np.int64)
        return (d % self.p) @ powers

    # -- lookup tables -----------------------------------------------------

    def _require_tables(self) -> None:
        if self.q > TABLE_MAX_Q:
            raise ValueError(f"vectorised arithmetic needs q <= {TABLE_MAX_Q}, got q={self.q}")

    @cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        d = self.digits(np.arange(self.q))
        return self.encode_digits(d[:, None, :] + d[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        self._require_tables()
        return self.encode_digits(-self.digits(np.arange(self.q)))

    @cached_property
    def _log_exp(self) -> tuple[np.ndarray, np.ndarray]:
        self._require_tables()
        q = self.q
        if q == 2:
            return np.array([0, 0]), np.array([1])
        for cand in range(2, q):
            g = self.element(cand)
            exp = [1]
            x = g
            while x.enc != 1:
                exp.append(x.enc)
                x = x * g
            if len(exp) == q - 1:
                log = np.zeros(q, dtype=np.int64)
                exp_arr = np.array(exp, dtype=np.int64)
                log[exp_arr] = np.arange(q - 1)
                return log, exp_arr
        raise RuntimeError("no primitive element found")  # pragma: no cover

    @cached_property
    def mul_table(self) -> np.ndarray:
        log, exp = self._log_exp
        q = self.q
        s = (log[:, None] + log[None, :]) % (q - 1)
        table = exp[s]
        table[0, :] = 0
        table[:, 0] = 0
        return table

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[0] is a placeholder 0."""
        log, exp = self._log_exp
        q = self.q
        table = exp[(-log) % (q - 1)]
        table[0] = 0
        return table

    @cached_property
    def trace_table(self) -> np.ndarray:
        return np.array([self.element(a).trace() for a in range(self.q)], dtype=np.int64)

    @cached_property
    def phi_table(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64) % self.p

    # -- vectorised operations on encodings --------------------------------

    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def neg(self, a):
        return self.neg_table[a]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("division by zero")
        return self.inv_table[a]

    def power(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        log, exp = self._log_exp
        out = exp[(log[a] * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def trace(self, a):
        return self.trace_table[a]


@functools.lru_cache(maxsize=None)
def get_field(p: int, w: int = 1, modulus: tuple[int, ...] | None = None) -> FieldParams:
    """Cached constructor; the default modulus is :func:`smallest_irreducible`."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if modulus is None:
        modulus = smallest_irreducible(p, w)
    return FieldParams(p, w, tuple(int(c) for c in modulus))


_SPEC_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*(?:[,;]\s*modulus\s*=\s*\[([\d,\s]*)\])?\s*$")


def parse_field(spec: str) -> FieldParams:
    """Parse ``"p^w"`` with an optional ``",modulus=[c0,c1,...]"`` suffix."""
    m = _SPEC_RE.match(spec)
    if not m:
        raise ValueError(f"bad field spec {spec!r}; expected 'p^w' or 'p^w,modulus=[c0,...]'")
    p = int(m.group(1))
    w = int(m.group(2) or 1)
    modulus = None
    if m.group(3) is not None:
        modulus = tuple(int(c) for c in m.group(3).split(",") if c.strip())
    return get_field(p, w, modulus)


def enumerate_field(fp: FieldParams) -> Iterator["FieldElement"]:
    for a in range(fp.q):
        yield fp.element(a)


# ---------------------------------------------------------------------------
# scalar elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    coeffs: tuple[int, ...]
    field: FieldParams

    @property
    def enc(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def __int__(self) -> int:
        return self.enc

    def __index__(self) -> int:
        return self.enc

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)} in F_{self.field})"

    def _check(self, other) -> "FieldElement":
        if isinstance(other, (int, np.integer)):
            return self.field.element(int(other) % self.field.p)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError("field mismatch")
        return other

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(tuple((-a) % p for a in self.coeffs), self.field)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        f = self.field
        prod = _poly_mod(_poly_mul(list(self.coeffs), list(other.coeffs), f.p), f.modulus, f.p)
        return f.element(prod)

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        f = self.field
        # extended Euclid on (a, modulus)
        r0, r1 = _trim(list(f.modulus)), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while len(r1) > 1:
            quot, rem = _poly_divmod(r0, r1, f.p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quot, s1, f.p), f.p)
        c = pow(r1[0], -1, f.p)
        return f.element(_poly_mod([x * c for x in s1], f.modulus, f.p))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def trace(self) -> int:
        """Tr_{F_q/F_p}(x) = sum_{i<w} x^{p^i}, returned as a residue mod p."""
        f = self.field
        acc = f.zero()
        y = self
        for _ in range(f.w):
            acc = acc + y
            y = y ** f.p
        if any(acc.coeffs[1:]):  # pragma: no cover - would mean a broken modulus
            raise ArithmeticError("trace left the prime field")
        return acc.coeffs[0]

    def phi_p(self) -> int:
        return self.coeffs[0]


# functional aliases ---------------------------------------------------------


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def neg(x: FieldElement) -> FieldElement:
    return -x


def inv(x: FieldElement) -> FieldElement:
    return x.inv()


def power(x: FieldElement, e: int) -> FieldElement:
    return x**e


def trace(x: FieldElement) -> int:
    return x.trace()


def phi_p(x: FieldElement) -> int:
    """First coordinate of x in the power basis."""
    return x.phi_p()


def character(alpha: FieldElement, x: FieldElement) -> complex:
    """chi_alpha(x) = exp(2 pi i Tr(alpha x) / p)."""
    if alpha.field != x.field:
        raise FieldMismatchError("field mismatch")
    return cmath.exp(2j * cmath.pi * (alpha * x).trace() / x.field.p)


def character_matrix(fp: FieldParams) -> np.ndarray:
    """``M[alpha, x] = chi_alpha(x)`` over encodings."""
    return _character_matrix(fp)


@functools.lru_cache(maxsize=None)
def _character_matrix(fp: FieldParams) -> np.ndarray:
    tr = fp.trace_table[fp.mul_table]
    m = np.exp(2j * np.pi * tr / fp.p)
    m.setflags(write=False)
    return m
