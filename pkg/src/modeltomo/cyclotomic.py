"""Exact arithmetic in the cyclotomic field K_n = Q(zeta_n).

Elements are stored over the power basis 1, zeta, ..., zeta^(phi(n)-1) as an
integer numerator vector with one positive common denominator.  Every
operation reduces modulo the n-th cyclotomic polynomial immediately, so two
numbers are equal iff their stored vectors are equal.

zeta_n is fixed to exp(2*pi*i/n) whenever a numeric value is needed.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from mpmath.ctx_iv import MPIntervalContext

__all__ = [
    "CycNum",
    "CycPoly",
    "GaloisMap",
    "StarMap",
    "ComplexInterval",
    "phi",
    "cyclotomic_polynomial",
    "zeta",
    "add",
    "sub",
    "neg",
    "mul",
    "inverse",
    "conjugate",
    "galois_apply",
    "is_real",
    "is_in_On",
    "split_real_imag_basis",
    "embed",
    "sign_exact",
    "set_initial_precision",
    "star",
    "star_coordinates",
    "real_generator",
    "default_star_map",
]

Rational = int | Fraction


def phi(n: int) -> int:
    """Euler's totient, by trial factorisation."""
    if n < 1:
        raise ValueError("phi is defined for n >= 1")
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


# ---------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class CycPoly:
    """Integer polynomial, lowest degree first, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __mul__(self, other: CycPoly) -> CycPoly:
        if not self.coeffs or not other.coeffs:
            return CycPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return CycPoly(tuple(out))

    def divmod_monic(self, divisor: CycPoly) -> tuple[CycPoly, CycPoly]:
        """Exact division by a monic integer polynomial."""
        if not divisor.is_monic():
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        if len(rem) - 1 < d:
            return CycPoly(()), CycPoly(tuple(rem))
        quot = [0] * (len(rem) - d)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c:
                quot[k - d] = c
                for i, b in enumerate(divisor.coeffs):
                    rem[k - d + i] -= c * b
        return CycPoly(tuple(quot)), CycPoly(tuple(rem[:d]))

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str | int]) -> CycPoly:
        return cls(tuple(int(c) for c in data))


_POLY_MEMO: dict[int, CycPoly] = {}
_POLY_LOCK = threading.Lock()


def cyclotomic_polynomial(n: int) -> CycPoly:
    """F_n = (X^n - 1) / prod_{d | n, d < n} F_d, memoised per n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cached = _POLY_MEMO.get(n)
    if cached is not None:
        return cached
    prod = CycPoly((1,))
    for d in range(1, n):
        if n % d == 0:
            prod = prod * cyclotomic_polynomial(d)
    xn1 = CycPoly((-1,) + (0,) * (n - 1) + (1,))
    quot, rem = xn1.divmod_monic(prod)
    assert not rem.coeffs, "X^n - 1 not divisible by lower cyclotomic factors"
    with _POLY_LOCK:
        return _POLY_MEMO.setdefault(n, quot)


# ---------------------------------------------------------------------------
# per-n tables


class _Field:
    __slots__ = ("n", "phi", "poly", "powers", "cos", "sin", "units")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.phi = phi(n)
        self.poly = cyclotomic_polynomial(n)
        m = self.phi
        f = self.poly.coeffs
        # powers[e] = zeta^e over the power basis, for 0 <= e < max(n, 2*phi - 1)
        size = max(n, 2 * m - 1, 1)
        powers: list[tuple[int, ...]] = []
        cur = [1] + [0] * (m - 1)
        for _ in range(size):
            powers.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(m):
                    cur[i] -= top * f[i]
        self.powers = powers
        self.cos = tuple(math.cos(2 * math.pi * k / n) for k in range(m))
        self.sin = tuple(math.sin(2 * math.pi * k / n) for k in range(m))
        self.units = tuple(a for a in range(1, n + 1) if math.gcd(a, n) == 1)


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    return _Field(n)


def _make(n: int, num: Iterable[int], den: int) -> CycNum:
    num = list(num)
    if den < 0:
        den = -den
        num = [-c for c in num]
    g = math.gcd(den, *num)
    if g != 1:
        num = [c // g for c in num]
        den //= g
    obj = CycNum.__new__(CycNum)
    obj.n = n
    obj.num = tuple(num)
    obj.den = den
    obj._key = None
    return obj


def _reduce(n: int, coeffs: Sequence[int]) -> list[int]:
    f = _field(n)
    m = f.phi
    out = list(coeffs[:m]) + [0] * max(0, m - len(coeffs))
    for k in range(m, len(coeffs)):
        c = coeffs[k]
        if c:
            red = f.powers[k] if k < len(f.powers) else f.powers[k % n]
            for i in range(m):
                out[i] += c * red[i]
    return out


class CycNum:
    """An element of Q(zeta_n).

    ``CycNum(n, coeffs)`` accepts any sequence of rationals (ints, Fractions
    or ``"p/q"`` strings) as polynomial coefficients in zeta_n, lowest
    degree first; longer sequences are reduced modulo F_n.
    """

    __slots__ = ("n", "num", "den", "_key")

    n: int
    num: tuple[int, ...]
    den: int

    def __init__(self, n: int, coeffs: Sequence[Rational | str] = ()):
        if n < 1:
            raise ValueError("n must be >= 1")
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for q in fr:
            den = den * q.denominator // math.gcd(den, q.denominator)
        ints = [q.numerator * (den // q.denominator) for q in fr]
        red = _reduce(n, ints)
        other = _make(n, red, den)
        self.n, self.num, self.den, self._key = other.n, other.num, other.den, None

    # -- constructors -----------------------------------------------------

    @classmethod
    def rational(cls, n: int, q: Rational | str) -> CycNum:
        q = Fraction(q)
        m = _field(n).phi
        return _make(n, (q.numerator,) + (0,) * (m - 1), q.denominator)

    @classmethod
    def zero(cls, n: int) -> CycNum:
        return cls.rational(n, 0)

    @classmethod
    def one(cls, n: int) -> CycNum:
        return cls.rational(n, 1)

    # -- views --------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def degree(self) -> int:
        return len(self.num)

    def sort_key(self) -> tuple[Fraction, ...]:
        if self._key is None:
            self._key = self.coeffs
        return self._key

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def magnitude(self) -> float:
        """Sum of absolute coefficient values; bounds |value| (all conjugates)."""
        return sum(abs(c) for c in self.num) / self.den

    def __float__(self) -> float:
        if not self.is_real():
            raise ValueError("float() of a non-real cyclotomic number")
        return self.approx_real()

    def approx_real(self) -> float:
        """Real part at zeta = exp(2 pi i / n), double precision."""
        f = _field(self.n)
        return math.fsum(float(c) * w for c, w in zip(self.num, f.cos)) / self.den

    def approx_imag(self) -> float:
        f = _field(self.n)
        return math.fsum(float(c) * w for c, w in zip(self.num, f.sin)) / self.den

    def __complex__(self) -> complex:
        return complex(self.approx_real(), self.approx_imag())

    # -- ring operations --------------------------------------------------

    def _coerce(self, other: object) -> CycNum | None:
        if isinstance(other, CycNum):
            if other.n != self.n:
                raise ValueError(f"mismatched fields: n={self.n} and n={other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.rational(self.n, other)
        return None

    def __add__(self, other: object) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return _make(self.n, [a + b for a, b in zip(self.num, o.num)], self.den)
        da, db = self.den, o.den
        return _make(self.n, [a * db + b * da for a, b in zip(self.num, o.num)], da * db)

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return _make(self.n, [-a for a in self.num], self.den)

    def __sub__(self, other: object) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> CycNum:
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return _make(self.n, [a * q.numerator for a in self.num], self.den * q.denominator)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = _field(self.n)
        m = f.phi
        prod = [0] * (2 * m - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    if b:
                        prod[i + j] += a * b
        return _make(self.n, _reduce(self.n, prod), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> CycNum:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_n)")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * inverse(o)

    def __rtruediv__(self, other: object) -> CycNum:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * inverse(self)

    def __pow__(self, k: int) -> CycNum:
        if k < 0:
            return inverse(self) ** (-k)
        result = CycNum.one(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison & hashing -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycNum):
            return self.n == other.n and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, self.num, self.den))

    def __lt__(self, other: CycNum) -> bool:
        return self.sort_key() < other.sort_key()

    def __le__(self, other: CycNum) -> bool:
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other: CycNum) -> bool:
        return self.sort_key() > other.sort_key()

    def __ge__(self, other: CycNum) -> bool:
        return self.sort_key() >= other.sort_key()

    def __repr__(self) -> str:
        terms = []
        for k, q in enumerate(self.coeffs):
            if q:
                terms.append(str(q) if k == 0 else f"{q}*z^{k}" if k > 1 else f"{q}*z")
        return f"CycNum({self.n}: {' + '.join(terms) or '0'})"

    # -- convenience methods -----------------------------------------------

    def conjugate(self) -> CycNum:
        return conjugate(self)

    def is_real(self) -> bool:
        return is_real(self)

    def is_integral(self) -> bool:
        return self.den == 1

    def sign(self) -> int:
        return sign_exact(self)

    # -- serialisation ------------------------------------------------------

    def to_list(self) -> list[str]:
        return [str(q) for q in self.coeffs]

    @classmethod
    def from_list(cls, n: int, data: Sequence[str | int]) -> CycNum:
        m = _field(n).phi
        if len(data) != m:
            raise ValueError(f"expected {m} coefficients for n={n}, got {len(data)}")
        return cls(n, [Fraction(str(c)) for c in data])

    def to_json(self) -> dict:
        return {"n": self.n, "coeffs": self.to_list()}

    @classmethod
    def from_json(cls, data: dict) -> CycNum:
        return cls.from_list(int(data["n"]), data["coeffs"])


def zeta(n: int, k: int = 1) -> CycNum:
    """zeta_n ** k."""
    f = _field(n)
    return _make(n, f.powers[k % n], 1)


def real_generator(n: int) -> CycNum:
    """zeta_n + zeta_n^{-1}, generator of the real subring."""
    return zeta(n) + zeta(n, -1)


# ---------------------------------------------------------------------------
# functional interface


def add(x: CycNum, y: CycNum) -> CycNum:
    return x + y


def sub(x: CycNum, y: CycNum) -> CycNum:
    return x - y


def neg(x: CycNum) -> CycNum:
    return -x


def mul(x: CycNum, y: CycNum) -> CycNum:
    return x * y


def _poly_divmod_q(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    while b and b[-1] == 0:
        b = b[:-1]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return q, a


def _poly_sub_mul(a: list[Fraction], q: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, qi in enumerate(q):
        if qi:
            for j, bj in enumerate(b):
                out[i + j] -= qi * bj
    while out and out[-1] == 0:
        out.pop()
    return out


def inverse(x: CycNum) -> CycNum:
    """Multiplicative inverse via the extended Euclidean algorithm over Q."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(zeta_n)")
    if x.is_rational():
        return CycNum.rational(x.n, Fraction(x.den, x.num[0]))
    f = [Fraction(c) for c in _field(x.n).poly.coeffs]
    g = list(x.coeffs)
    while g and g[-1] == 0:
        g.pop()
    # invariant: s * g0 == r  (mod f)
    r0, r1 = f, g
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        q, rem = _poly_divmod_q(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub_mul(s0, q, s1)
    # r1 is a nonzero constant since F_n is irreducible
    c = r1[0]
    return CycNum(x.n, [s / c for s in s1])


def galois_apply(g: GaloisMap, x: CycNum) -> CycNum:
    """Apply zeta -> zeta^a."""
    if g.n != x.n:
        raise ValueError("Galois map and number live in different fields")
    f = _field(x.n)
    m = f.phi
    out = [0] * m
    for k, c in enumerate(x.num):
        if c:
            vec = f.powers[(g.a * k) % x.n]
            for i in range(m):
                out[i] += c * vec[i]
    return _make(x.n, out, x.den)


def conjugate(x: CycNum) -> CycNum:
    return galois_apply(GaloisMap(x.n, x.n - 1 if x.n > 1 else 1), x)


def is_real(x: CycNum) -> bool:
    return conjugate(x) == x


def is_in_On(x: CycNum) -> bool:
    """Membership in Z[zeta_n]: all power-basis coordinates are integers."""
    return x.den == 1


@lru_cache(maxsize=None)
def _inv_zeta_minus_conj(n: int) -> CycNum:
    return inverse(zeta(n) - zeta(n, -1))


def split_real_imag_basis(x: CycNum) -> tuple[CycNum, CycNum]:
    """Unique real a, b with x = a + b * zeta_n."""
    if x.n < 3:
        raise ValueError("{1, zeta_n} is a real basis only for n >= 3")
    xc = conjugate(x)
    b = (x - xc) * _inv_zeta_minus_conj(x.n)
    a = x - b * zeta(x.n)
    return a, b


# ---------------------------------------------------------------------------
# numerics and exact signs


@dataclass(frozen=True)
class ComplexInterval:
    """Rectangle [re] x [im] certified to contain the value."""

    re: object
    im: object

    def contains(self, z: complex) -> bool:
        return z.real in self.re and z.imag in self.im

    @property
    def width(self) -> float:
        return float(max(self.re.delta, self.im.delta))

    def __repr__(self) -> str:
        return f"ComplexInterval(re={self.re}, im={self.im})"


_IV_CONTEXTS: dict[int, MPIntervalContext] = {}
_IV_LOCK = threading.Lock()


def _iv(prec: int) -> MPIntervalContext:
    ctx = _IV_CONTEXTS.get(prec)
    if ctx is None:
        ctx = MPIntervalContext()
        ctx.prec = prec
        with _IV_LOCK:
            ctx = _IV_CONTEXTS.setdefault(prec, ctx)
    return ctx


def embed(x: CycNum, precision: int = 53, real_only: bool = False) -> ComplexInterval:
    """Certified enclosure of x at zeta_n = exp(2 pi i / n)."""
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    iv = _iv(precision)
    two_pi_over_n = 2 * iv.pi / x.n
    re = iv.mpf(0)
    im = iv.mpf(0)
    for k, c in enumerate(x.num):
        if c:
            angle = two_pi_over_n * k
            re += iv.mpf(c) * iv.cos(angle)
            if not real_only:
                im += iv.mpf(c) * iv.sin(angle)
    den = iv.mpf(x.den)
    return ComplexInterval(re / den, im / den)


_FILTER_EPS = 2.0 ** -48
_START_PREC = [64]


def set_initial_precision(bits: int) -> None:
    """First interval precision tried by sign_exact before doubling."""
    if bits < 32:
        raise ValueError("precision must be at least 32 bits")
    _START_PREC[0] = int(bits)


def sign_exact(x: CycNum) -> int:
    """Exact sign of a real cyclotomic number.

    Symbolic zero test, then a double-precision evaluation with a rigorous
    error bound, then interval refinement with doubling precision.
    """
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.num[0] > 0 else -1
    if not is_real(x):
        raise ValueError("sign of a non-real cyclotomic number")
    v = x.approx_real()
    if abs(v) > _FILTER_EPS * x.magnitude():
        return 1 if v > 0 else -1
    prec = _START_PREC[0]
    while True:
        box = embed(x, prec, real_only=True).re
        if box.a > 0:
            return 1
        if box.b < 0:
            return -1
        prec *= 2
        if prec > 1 << 16:
            raise ArithmeticError("sign refinement did not terminate")


# ---------------------------------------------------------------------------
# Galois group and star maps


@dataclass(frozen=True)
class GaloisMap:
    """The automorphism zeta_n -> zeta_n^a."""

    n: int
    a: int

    def __post_init__(self) -> None:
        if math.gcd(self.a, self.n) != 1:
            raise ValueError(f"a={self.a} is not coprime to n={self.n}")
        object.__setattr__(self, "a", self.a % self.n if self.n > 1 else 1)

    def __call__(self, x: CycNum) -> CycNum:
        return galois_apply(self, x)

    def compose(self, other: GaloisMap) -> GaloisMap:
        """self after other."""
        return GaloisMap(self.n, (self.a * other.a) % self.n)


@dataclass(frozen=True)
class StarMap:
    """z -> (sigma_2(z), ..., sigma_{phi(n)/2}(z)).

    ``exponents`` lists one a per chosen automorphism; the identity and
    complex conjugation are excluded and no two chosen maps are conjugate.
    """

    n: int
    exponents: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n = self.n
        if n < 3:
            raise ValueError("star maps need n >= 3")
        exps = tuple(int(a) % n for a in self.exponents)
        object.__setattr__(self, "exponents", exps)
        want = phi(n) // 2 - 1
        if len(exps) != want:
            raise ValueError(f"n={n} needs {want} star exponents, got {len(exps)}")
        seen: set[int] = {1, n - 1}
        for a in exps:
            if math.gcd(a, n) != 1:
                raise ValueError(f"exponent {a} is not coprime to {n}")
            if a in seen:
                raise ValueError(f"exponent {a} repeats or is conjugate to a chosen/excluded map")
            seen.update({a, (n - a) % n})

    @property
    def dim(self) -> int:
        """Real dimension of internal space."""
        return 2 * len(self.exponents)

    @property
    def maps(self) -> tuple[GaloisMap, ...]:
        return tuple(GaloisMap(self.n, a) for a in self.exponents)

    def __call__(self, x: CycNum) -> tuple[CycNum, ...]:
        return star(self, x)


def default_star_map(n: int) -> StarMap:
    """Smallest exponent from each remaining conjugate pair."""
    chosen: list[int] = []
    seen = {1, n - 1}
    for a in range(2, n):
        if math.gcd(a, n) == 1 and a not in seen:
            chosen.append(a)
            seen.update({a, n - a})
    return StarMap(n, tuple(chosen))


def star(s: StarMap, x: CycNum) -> tuple[CycNum, ...]:
    """Galois images of x; the empty tuple is the zero of a trivial internal space."""
    return tuple(galois_apply(g, x) for g in s.maps)


def star_coordinates(s: StarMap, x: CycNum) -> tuple[CycNum, ...]:
    """Real internal coordinates (alpha_1, beta_1, ...), image_k = alpha_k + beta_k zeta."""
    out: list[CycNum] = []
    for y in star(s, x):
        out.extend(split_real_imag_basis(y))
    return tuple(out)
