"""Exact arithmetic in a real number field Q(θ) embedded at one isolated real root."""

import logging
import math
import threading
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath

log = logging.getLogger(__name__)

Rational = Union[int, Fraction]

# Relative size a float Horner value must have before its sign is trusted.
_FILTER = 1e-10


class FieldError(Exception):
    pass


# -- rational polynomial helpers (coefficients low -> high) --------------------

def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    rem = _trim([Fraction(c) for c in a])
    div = _trim([Fraction(c) for c in b])
    if not div:
        raise FieldError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(rem) - len(div) + 1, 1)
    lead = div[-1]
    while len(rem) >= len(div) and rem:
        shift = len(rem) - len(div)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, c in enumerate(div):
            rem[shift + i] -= factor * c
        _trim(rem)
    return _trim(quot), rem


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _horner(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sturm_count(poly: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of `poly` in (lo, hi]."""
    p0 = _trim([Fraction(c) for c in poly])
    p1 = _trim([i * c for i, c in enumerate(p0)][1:])
    chain = [p0, p1]
    while chain[-1] and len(chain[-1]) > 1:
        _, rem = _poly_divmod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])

    def variations(x: Fraction) -> int:
        signs = [_sign(_horner(p, x)) for p in chain if p]
        signs = [s for s in signs if s]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    return variations(lo) - variations(hi)


def _interval_horner(coeffs: Sequence[int], lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(coeffs):
        products = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo = min(products) + c
        acc_hi = max(products) + c
    return acc_lo, acc_hi


# -- the field -----------------------------------------------------------------

class RealField:
    """Q(θ) for θ the unique root of a monic integer polynomial inside an interval.

    `trig_base` N declares θ = 2cos(π/N); it enables exact cos(kπ/N) and
    sin(kπ/N) through the Chebyshev recurrence.
    """

    def __init__(
        self,
        min_poly: Sequence[int],
        root_interval: Tuple[Rational, Rational],
        trig_base: Optional[int] = None,
        name: str = "K",
    ):
        coeffs = tuple(int(c) for c in min_poly)
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise FieldError("minimal polynomial must be monic of degree >= 1")
        lo, hi = Fraction(root_interval[0]), Fraction(root_interval[1])
        if not lo < hi:
            raise FieldError(f"empty root interval ({lo}, {hi})")
        p_lo, p_hi = _horner(coeffs, lo), _horner(coeffs, hi)
        if p_lo == 0 or p_hi == 0 or _sign(p_lo) == _sign(p_hi):
            raise FieldError(f"minimal polynomial does not change sign on ({lo}, {hi})")
        roots = _sturm_count(coeffs, lo, hi)
        if roots != 1:
            raise FieldError(f"root interval ({lo}, {hi}) holds {roots} roots, expected exactly one")

        self.name = name
        self.min_poly = coeffs
        self.degree = len(coeffs) - 1
        self.trig_base = trig_base
        self.constants: Dict[str, "FieldElement"] = {}
        self._lo, self._hi = lo, hi
        self._sign_lo = _sign(p_lo)
        self._lock = threading.Lock()
        self._reduction = self._power_table()
        self._refine(Fraction(1, 2 ** 64))
        self._theta_float = float((self._lo + self._hi) / 2)
        self._theta_mpf: Dict[int, mpmath.mpf] = {}
        self._chebyshev: List["FieldElement"] = []

        if trig_base is not None:
            expected = 2 * math.cos(math.pi / trig_base)
            if abs(self._theta_float - expected) > 1e-12:
                raise FieldError(
                    f"generator θ ≈ {self._theta_float:.15g} is not 2cos(π/{trig_base}) ≈ {expected:.15g}"
                )

    def __repr__(self):
        return f"RealField({self.name}, min_poly={list(self.min_poly)})"

    # construction of elements

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (int, Fraction)):
            return self.rational(value)
        if isinstance(value, (list, tuple)):
            return self.element(value)
        raise FieldError(f"cannot convert {value!r} into {self.name}")

    def rational(self, value: Rational) -> "FieldElement":
        q = Fraction(value)
        return FieldElement._make(self, (q.numerator,) + (0,) * (self.degree - 1), q.denominator)

    def element(self, coeffs: Sequence[Rational]) -> "FieldElement":
        """Element c0 + c1·θ + ... from rational coefficients (shorter lists are zero-padded)."""
        if len(coeffs) > self.degree:
            raise FieldError(f"{len(coeffs)} coefficients given, field degree is {self.degree}")
        fracs = [Fraction(c) for c in coeffs] + [Fraction(0)] * (self.degree - len(coeffs))
        den = 1
        for c in fracs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return FieldElement._make(self, tuple(int(c * den) for c in fracs), den)

    @property
    def zero(self) -> "FieldElement":
        return self.rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.rational(1)

    @property
    def gen(self) -> "FieldElement":
        return self.element([0, 1])

    # trigonometric constants

    def cos_pi(self, r: Rational) -> "FieldElement":
        """cos(r·π), exact when r·N is an integer for the field's trig base N."""
        if self.trig_base is None:
            raise FieldError("field has no trig base; cos/sin constants are unavailable")
        n = self.trig_base
        k = Fraction(r) * n
        if k.denominator != 1:
            raise FieldError(f"cos({Fraction(r)}·π) is not of the form cos(kπ/{n})")
        k = int(k) % (2 * n)
        if k > n:
            k = 2 * n - k
        return self._chebyshev_table()[k] / 2

    def sin_pi(self, r: Rational) -> "FieldElement":
        return self.cos_pi(Fraction(1, 2) - Fraction(r))

    def _chebyshev_table(self) -> List["FieldElement"]:
        # c_k = 2cos(kπ/N): c_0 = 2, c_1 = θ, c_{k+1} = θ·c_k - c_{k-1}
        if not self._chebyshev:
            theta = self.gen
            table = [self.rational(2), theta]
            while len(table) <= self.trig_base:
                table.append(theta * table[-1] - table[-2])
            self._chebyshev = table
        return self._chebyshev

    def constant(self, name: str) -> "FieldElement":
        """A named constant, or a trigonometric expression such as "cos(2*pi/7)"."""
        if name in self.constants:
            return self.constants[name]
        from slopegap.expr import evaluate

        return evaluate(self, name)

    # embedding

    def root_interval(self) -> Tuple[Fraction, Fraction]:
        return self._lo, self._hi

    def _refine(self, width: Fraction):
        with self._lock:
            lo, hi = self._lo, self._hi
            steps = 0
            while hi - lo > width:
                mid = (lo + hi) / 2
                s = _sign(_horner(self.min_poly, mid))
                if s == 0:
                    lo = hi = mid
                    break
                if s == self._sign_lo:
                    lo = mid
                else:
                    hi = mid
                steps += 1
            self._lo, self._hi = lo, hi
        if steps:
            log.debug("refined root of %s to width %.3g after %d bisections", self.name, float(hi - lo), steps)

    def _power_table(self) -> List[Tuple[int, ...]]:
        # θ^k reduced modulo p for k = d .. 2d-2, as integer vectors
        d = self.degree
        top = tuple(-c for c in self.min_poly[:-1])
        table = [top]
        for _ in range(d - 2):
            prev = table[-1]
            shifted = (0,) + prev[:-1]
            carry = prev[-1]
            table.append(tuple(s + carry * t for s, t in zip(shifted, top)))
        return table

    def _reduce(self, conv: List[int]) -> Tuple[int, ...]:
        d = self.degree
        out = list(conv[:d]) + [0] * max(0, d - len(conv))
        for k in range(d, len(conv)):
            c = conv[k]
            if c:
                row = self._reduction[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    def _sign_of(self, num: Tuple[int, ...]) -> int:
        try:
            t = self._theta_float
            at = abs(t)
            value = 0.0
            scale = 0.0
            for c in reversed(num):
                value = value * t + c
                scale = scale * at + abs(c)
            if abs(value) > _FILTER * scale:
                return 1 if value > 0 else -1
        except OverflowError:
            pass
        while True:
            lo, hi = self._lo, self._hi
            v_lo, v_hi = _interval_horner(num, lo, hi)
            if v_lo > 0:
                return 1
            if v_hi < 0:
                return -1
            self._refine((hi - lo) / 1024)

    def theta_mpf(self) -> mpmath.mpf:
        """θ to the current mpmath precision plus guard digits."""
        dps = mpmath.mp.dps + 20
        cached = self._theta_mpf.get(dps)
        if cached is None:
            self._refine(Fraction(1, 10 ** (dps + 5)))
            mid = (self._lo + self._hi) / 2
            with mpmath.workdps(dps):
                cached = mpmath.mpf(mid.numerator) / mid.denominator
            self._theta_mpf[dps] = cached
        return cached


# -- elements --------------------------------------------------------------------

class FieldElement:
    """c0 + c1·θ + ... + c_{d-1}·θ^{d-1} stored as integer numerators over one denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: RealField, num: Tuple[int, ...], den: int = 1):
        if len(num) != field.degree:
            raise FieldError(f"expected {field.degree} coefficients, got {len(num)}")
        if den == 0:
            raise FieldError("zero denominator")
        g = math.gcd(den, *num)
        if den < 0:
            g = -g
        self.field = field
        self.num = tuple(c // g for c in num)
        self.den = den // g

    @classmethod
    def _make(cls, field: RealField, num: Tuple[int, ...], den: int) -> "FieldElement":
        return cls(field, tuple(num), den)

    # coercion

    def _coerce(self, other) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("cannot mix elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return None

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    # arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._make(
            self.field,
            tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._make(self.field, tuple(-a for a in self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FieldElement._make(
                self.field, tuple(a * q.numerator for a in self.num), self.den * q.denominator
            )
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.field.degree
        conv = [0] * (2 * d - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    if b:
                        conv[i + j] += a * b
        return FieldElement._make(self.field, self.field._reduce(conv), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not any(self.num):
            raise FieldError("division by zero")
        if self.is_rational():
            return self.field.rational(Fraction(self.den, self.num[0]))
        # extended Euclid: s·a + t·p = g with g constant since p is irreducible
        r0 = [Fraction(c) for c in self.field.min_poly]
        r1 = _trim(list(self.coeffs))
        s0: List[Fraction] = []
        s1: List[Fraction] = [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if len(r0) != 1:
            raise FieldError(f"minimal polynomial is reducible: common factor of degree {len(r0) - 1}")
        g = r0[0]
        return self.field.element([c / g for c in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise FieldError("division by zero")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = self.field.one
        e = abs(exponent)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # order

    def sign(self) -> int:
        if not any(self.num):
            return 0
        return self.field._sign_of(self.num)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return self.is_rational() and Fraction(self.num[0], self.den) == q
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.num, self.den))

    def _cmp(self, other) -> Optional[int]:
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self):
        return any(self.num)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # numeric views

    def approx(self, eps: Rational = Fraction(1, 10 ** 12)) -> Fraction:
        """A rational within `eps` of the real value."""
        eps = Fraction(eps)
        if eps <= 0:
            raise FieldError("approximation tolerance must be positive")
        if self.is_rational():
            return Fraction(self.num[0], self.den)
        field = self.field
        while True:
            lo, hi = field.root_interval()
            v_lo, v_hi = _interval_horner(self.num, lo, hi)
            spread = (v_hi - v_lo) / self.den
            if spread <= 2 * eps:
                return (v_lo + v_hi) / (2 * self.den)
            shrink = max(2, int(spread / eps) * 4)
            field._refine((hi - lo) / shrink)

    def __float__(self):
        if self.is_rational():
            return self.num[0] / self.den
        try:
            t = self.field._theta_float
            value = 0.0
            scale = 0.0
            for c in reversed(self.num):
                value = value * t + c
                scale = scale * abs(t) + abs(c)
            if abs(value) > 1e-3 * scale:
                return value / self.den
        except OverflowError:
            pass
        return float(self.approx(Fraction(1, 10 ** 20)))

    def to_mpf(self) -> mpmath.mpf:
        """Value at the current mpmath precision."""
        if self.is_rational():
            return mpmath.mpf(self.num[0]) / self.den
        theta = self.field.theta_mpf()
        with mpmath.workdps(mpmath.mp.dps + 20):
            value = _horner([mpmath.mpf(c) for c in self.num], theta) / self.den
        return +value

    def as_strings(self) -> List[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            power = "" if i == 0 else ("θ" if i == 1 else f"θ^{i}")
            terms.append(f"{c}{'·' if power else ''}{power}")
        return f"{self.field.name}({' + '.join(terms) if terms else '0'})"

    def __str__(self):
        return f"{float(self):.12g}"


def constant(field: RealField, name: str) -> FieldElement:
    """Look up a named constant of the field (see RealField.constant)."""
    return field.constant(name)
