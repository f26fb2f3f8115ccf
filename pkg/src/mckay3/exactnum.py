"""Exact arithmetic over Q and the cyclotomic fields Q(zeta_N).

Rationals are :class:`fractions.Fraction`.  An element of Q(zeta_N) is stored
as a polynomial of degree < phi(N) in the power basis 1, x, ..., x^(phi-1)
modulo the cyclotomic polynomial Phi_N, with x standing for
zeta_N = exp(2 pi i / N).  Internally the coefficients are kept as a tuple of
Python integers over one positive common denominator.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisionByZero, NotRational

__all__ = [
    "CycNumber",
    "cyclotomic_polynomial",
    "cyc_arith",
    "cyc_inverse",
    "cyc_to_rational",
    "divisors",
    "euler_phi",
    "root_of_unity_sum",
    "reduce_exponent_vector",
]


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first.

    Obtained from x^n - 1 by exact division by Phi_d for every proper
    divisor d of n.
    """
    if n < 1:
        raise ValueError(f"cyclotomic_polynomial needs n >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        poly = _divide_monic(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _divide_monic(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for i, di in enumerate(den):
                num[k - dd + i] -= c * di
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def _phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Sparse rows: x^k mod Phi_n for k = 0..n-1, as (index, coeff) pairs."""
    cyc = cyclotomic_polynomial(n)
    phi = len(cyc) - 1
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple((i, c) for i, c in enumerate(cur) if c))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _dense_power_table(n: int) -> np.ndarray:
    phi = _phi(n)
    table = np.zeros((n, phi), dtype=np.int64)
    for k, row in enumerate(_power_table(n)):
        for i, c in row:
            table[k, i] = c
    return table


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = math.gcd(den, *num)
    if g > 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


def _reduce_poly(coeffs: Sequence[int], n: int) -> list[int]:
    """Reduce an integer polynomial of any degree modulo Phi_n."""
    phi = _phi(n)
    table = _power_table(n)
    out = [0] * phi
    for k, c in enumerate(coeffs):
        if c:
            if k < phi:
                out[k] += c
            else:
                for i, t in table[k % n]:
                    out[i] += c * t
    return out


class CycNumber:
    """An exact element of the cyclotomic field Q(zeta_N).

    ``CycNumber(N, coeffs)`` takes exactly phi(N) rational coefficients in the
    power basis.  Mixed-conductor operations promote both operands to the lcm
    of their conductors.  Plain ints and Fractions are accepted as operands.
    """

    __slots__ = ("N", "_num", "_den", "_hash")

    def __init__(self, N: int, coeffs: Iterable = (0,)):
        if N < 1:
            raise ValueError(f"conductor must be positive, got {N}")
        fr = [Fraction(c) for c in coeffs]
        phi = _phi(N)
        if len(fr) != phi:
            raise ValueError(f"expected {phi} coefficients for conductor {N}, got {len(fr)}")
        den = _lcm(*(c.denominator for c in fr)) if fr else 1
        num = [c.numerator * (den // c.denominator) for c in fr]
        self.N = N
        self._num, self._den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, N: int, num: Sequence[int], den: int = 1) -> "CycNumber":
        obj = cls.__new__(cls)
        obj.N = N
        obj._num, obj._den = _normalize(list(num), den)
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q, N: int = 1) -> "CycNumber":
        q = Fraction(q)
        num = [0] * _phi(N)
        num[0] = q.numerator
        return cls._raw(N, num, q.denominator)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycNumber":
        """zeta_N ** k for any integer k."""
        num = [0] * _phi(N)
        for i, c in _power_table(N)[k % N]:
            num[i] = c
        return cls._raw(N, num, 1)

    @classmethod
    def from_poly(cls, N: int, coeffs: Sequence) -> "CycNumber":
        """Value of sum coeffs[k] * zeta_N**k, for a polynomial of any length."""
        fr = [Fraction(c) for c in coeffs]
        den = _lcm(*(c.denominator for c in fr)) if fr else 1
        ints = [c.numerator * (den // c.denominator) for c in fr]
        return cls._raw(N, _reduce_poly(ints, N), den)

    # -- basic accessors ---------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def raw(self) -> tuple[int, tuple[int, ...], int]:
        """(N, integer numerators, common denominator); unique per conductor."""
        return self.N, self._num, self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- conductor handling ------------------------------------------------

    def promote(self, M: int) -> "CycNumber":
        """The same value written in Q(zeta_M); N must divide M."""
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"cannot promote conductor {self.N} to {M}")
        step = M // self.N
        table = _power_table(M)
        out = [0] * _phi(M)
        for i, c in enumerate(self._num):
            if c:
                for j, t in table[(i * step) % M]:
                    out[j] += c * t
        return CycNumber._raw(M, out, self._den)

    def reduce_conductor(self) -> "CycNumber":
        """The same value at the smallest conductor d | N that contains it."""
        if self.is_rational():
            return CycNumber._raw(1, [self._num[0]], self._den)
        for d in divisors(self.N):
            if d == self.N:
                return self
            sol = self._solve_in_subfield(d)
            if sol is not None:
                return CycNumber(d, sol)
        return self

    def _solve_in_subfield(self, d: int):
        phi_d = _phi(d)
        basis = [CycNumber.zeta(d, j).promote(self.N)._num for j in range(phi_d)]
        target = [Fraction(c, self._den) for c in self._num]
        # columns = basis vectors; solve sum_j c_j basis_j = target
        rows = [[Fraction(basis[j][i]) for j in range(phi_d)] + [target[i]] for i in range(len(target))]
        return _solve_exact(rows, phi_d)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "CycNumber":
        if isinstance(value, CycNumber):
            return value
        if isinstance(value, (int, Rational)):
            return CycNumber.rational(value)
        return NotImplemented

    def _common(self, other: "CycNumber"):
        if self.N == other.N:
            return self, other
        M = _lcm(self.N, other.N)
        return self.promote(M), other.promote(M)

    def __add__(self, other):
        other = CycNumber._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        da, db = a._den, b._den
        num = [x * db + y * da for x, y in zip(a._num, b._num)]
        return CycNumber._raw(a.N, num, da * db)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber._raw(self.N, [-c for c in self._num], self._den)

    def __sub__(self, other):
        other = CycNumber._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = CycNumber._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        N = a.N
        if a.is_zero() or b.is_zero():
            return CycNumber._raw(N, [0] * len(a._num), 1)
        if a.is_rational() or b.is_rational():
            if b.is_rational():
                a, b = b, a
            s = a._num[0]
            return CycNumber._raw(N, [s * c for c in b._num], a._den * b._den)
        phi = len(a._num)
        nz_b = [(j, y) for j, y in enumerate(b._num) if y]
        prod = [0] * (2 * phi - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in nz_b:
                    prod[i + j] += x * y
        out = prod[:phi]
        table = _power_table(N)
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                for i, t in table[k % N]:
                    out[i] += c * t
        return CycNumber._raw(N, out, a._den * b._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNumber":
        return cyc_inverse(self)

    def __truediv__(self, other):
        other = CycNumber._coerce(other)
        if other is NotImplemented:
            return other
        return self * cyc_inverse(other)

    def __rtruediv__(self, other):
        return CycNumber._coerce(other) * cyc_inverse(self)

    def __pow__(self, k: int):
        if k < 0:
            return cyc_inverse(self) ** (-k)
        result = CycNumber.rational(1, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycNumber":
        """Complex conjugate, i.e. the automorphism zeta -> zeta^-1."""
        N = self.N
        coeffs = [0] * N
        for i, c in enumerate(self._num):
            coeffs[(-i) % N] += c
        return CycNumber._raw(N, _reduce_poly(coeffs, N), self._den)

    # -- comparison and conversion ------------------------------------------

    def __eq__(self, other):
        other = CycNumber._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._num[0], self._den))
            else:
                self._hash = hash(self.reduce_conductor().raw)
        return self._hash

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.N)
        return sum(c * z**i for i, c in enumerate(self._num)) / self._den

    def to_rational(self) -> Fraction:
        return cyc_to_rational(self)

    def to_json(self) -> dict:
        return {"N": self.N, "c": [[c.numerator, c.denominator] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycNumber":
        return cls(int(data["N"]), [Fraction(int(p), int(q)) for p, q in data["c"]])

    def __repr__(self):
        return f"CycNumber({self.N}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_rational():
            return str(Fraction(self._num[0], self._den))
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else f"{c}*z{self.N}^{i}")
        return " + ".join(terms)


def _solve_exact(rows: list[list[Fraction]], nvars: int):
    """Solve an augmented rational system; None if inconsistent."""
    rows = [r[:] for r in rows]
    pivots = []
    r = 0
    for col in range(nvars):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    sol = [Fraction(0)] * nvars
    for i, col in enumerate(pivots):
        sol[col] = rows[i][-1]
    return sol


def cyc_arith(a: CycNumber, b: CycNumber, op: str) -> CycNumber:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = a[:]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(v) for v in out])


def cyc_inverse(a: CycNumber) -> CycNumber:
    """Multiplicative inverse via the extended Euclidean algorithm with Phi_N."""
    if a.is_zero():
        raise DivisionByZero("inverse of zero in a cyclotomic field")
    if a.is_rational():
        return CycNumber.rational(1 / Fraction(a._num[0], a._den), a.N)
    # invariant: s * a == r0 (mod Phi), t * a == r1 (mod Phi)
    r0 = _poly_trim([Fraction(c) for c in a._num])
    r1 = [Fraction(c) for c in cyclotomic_polynomial(a.N)]
    s0, s1 = [Fraction(1)], []
    while len(r1) > 0:
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    # r0 is a nonzero constant: gcd of a and the irreducible Phi_N
    if len(r0) != 1:
        raise ArithmeticError("non-unit gcd with cyclotomic polynomial")
    # s0 * a == r0 * den**-1 scaling: a's polynomial is num/den
    scale = Fraction(a._den) / r0[0]
    coeffs = [c * scale for c in s0]
    return CycNumber.from_poly(a.N, coeffs)


def cyc_to_rational(a: CycNumber) -> Fraction:
    if not a.is_rational():
        raise NotRational(f"{a} is not rational")
    return Fraction(a._num[0], a._den)


def root_of_unity_sum(terms: Iterable[tuple[int, CycNumber]], r: int) -> CycNumber:
    """Compute sum of zeta_r**e * v over (e, v) pairs.

    The sum is accumulated in Q[x]/(x^M - 1) with M = lcm(r, conductors),
    where multiplying by a root of unity is a cyclic shift, and reduced
    modulo Phi_M once at the end.
    """
    terms = list(terms)
    M = _lcm(r, *(v.N for _, v in terms))
    den = _lcm(*(v._den for _, v in terms))
    acc = [0] * M
    step_r = M // r
    for e, v in terms:
        step_v = M // v.N
        scale = den // v._den
        base = e * step_r
        for i, c in enumerate(v._num):
            if c:
                acc[(base + i * step_v) % M] += c * scale
    return CycNumber._raw(M, _reduce_poly(acc, M), den)


def reduce_exponent_vector(vectors: np.ndarray, M: int) -> list[CycNumber]:
    """Rows of integer counts indexed by exponent mod M, as elements of Q(zeta_M).

    ``vectors[k, j]`` is the coefficient of zeta_M**j in the k-th value.
    """
    vectors = np.asarray(vectors)
    table = _dense_power_table(M)
    bound = int(np.abs(vectors).max(initial=0)) * int(np.abs(table).max(initial=1)) * M
    if bound < 2**62:
        reduced = vectors.astype(np.int64) @ table
        return [CycNumber._raw(M, [int(c) for c in row], 1) for row in reduced]
    return [CycNumber._raw(M, _reduce_poly([int(c) for c in row], M), 1) for row in vectors]
