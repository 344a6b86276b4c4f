"""Exact normal-ordered differential operators in two real variables.

Elements of the Weyl algebra are stored as ``sum f_ab(x, y) d_x^a d_y^b`` with
all derivatives to the right. Coefficients ``f_ab`` are Laurent polynomials
over the Gaussian rationals, so products, commutators and adjoints are exact
and equality is decidable.

Operators such as ``(q' + i p') / sqrt(2)`` carry irrational scale factors.
Rather than leave the rational field, every element keeps a parity bit
``root2`` and represents ``sqrt(2) ** root2 * body``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "GaussianRational",
    "LaurentPoly",
    "WeylElement",
    "commutator",
]


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # exact binary value; callers wanting decimals should pass strings
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


class GaussianRational:
    """Exact complex number ``re + i im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        return cls(value, 0)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


I = GaussianRational(0, 1)


class LaurentPoly:
    """Finite sum ``sum c_ab x^a y^b`` with ``(a, b)`` in Z^2.

    Instances are immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean: dict[tuple[int, int], GaussianRational] = {}
        for (a, b), c in (terms or {}).items():
            c = GaussianRational.coerce(c)
            if c:
                key = (int(a), int(b))
                clean[key] = clean[key] + c if key in clean else c
                if not clean[key]:
                    del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> "LaurentPoly":
        return cls({(a, b): c})

    @classmethod
    def x(cls) -> "LaurentPoly":
        return cls.monomial(1, 0)

    @classmethod
    def y(cls) -> "LaurentPoly":
        return cls.monomial(0, 1)

    @property
    def terms(self) -> dict[tuple[int, int], GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out[k] + c if k in out else c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = GaussianRational.coerce(other)
            if not c:
                return LaurentPoly()
            return LaurentPoly._raw({k: v * c for k, v in self._terms.items()})
        out: dict[tuple[int, int], GaussianRational] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                s = out[k] + c1 * c2 if k in out else c1 * c2
                if s:
                    out[k] = s
                else:
                    del out[k]
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of a Laurent polynomial are not closed")
        out = LaurentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, dx: int = 0, dy: int = 0) -> "LaurentPoly":
        """Partial derivative ``d_x^dx d_y^dy`` (power rule over Z)."""
        if dx == 0 and dy == 0:
            return self
        out = {}
        for (a, b), c in self._terms.items():
            fa = _falling(a, dx)
            fb = _falling(b, dy)
            if fa and fb:
                out[(a - dx, b - dy)] = c * (fa * fb)
        return LaurentPoly._raw(out)

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: c.conjugate() for k, c in self._terms.items()})

    def evaluate(self, x, y):
        """Numeric evaluation; ``x`` and ``y`` may be numpy arrays."""
        total = 0
        for (a, b), c in self._terms.items():
            total = total + complex(c) * (x**a if a >= 0 else 1.0 / x ** (-a)) * (
                y**b if b >= 0 else 1.0 / y ** (-b)
            )
        return total

    def to_sympy(self, x, y):
        import sympy

        return sympy.Add(
            *[
                (sympy.Rational(c.re.numerator, c.re.denominator)
                 + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator))
                * x**a * y**b
                for (a, b), c in self._terms.items()
            ]
        )

    def to_records(self) -> list[dict]:
        return [
            {"a": a, "b": b, "re": str(c.re), "im": str(c.im)}
            for (a, b), c in sorted(self._terms.items())
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "LaurentPoly":
        terms: dict[tuple[int, int], GaussianRational] = {}
        for rec in records:
            unknown = set(rec) - {"a", "b", "re", "im"}
            if unknown:
                raise ValueError(f"unknown polynomial record keys: {sorted(unknown)}")
            key = (int(rec["a"]), int(rec["b"]))
            c = GaussianRational(str(rec.get("re", "0")), str(rec.get("im", "0")))
            terms[key] = terms[key] + c if key in terms else c
        return cls(terms)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        try:
            return self == _as_poly(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self._terms.items(), reverse=True):
            mono = "".join(
                s for s in (_power("x", a), _power("y", b)) if s
            )
            parts.append(f"{c!r}{'*' + mono if mono else ''}")
        return " + ".join(parts)


def _power(name: str, k: int) -> str:
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def _falling(a: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= a - j
    return out


def _as_poly(value) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    return LaurentPoly.constant(value)


class WeylElement:
    """Differential operator ``sqrt(2)**root2 * sum f_ab d_x^a d_y^b``.

    ``root2`` is 0 or 1; even powers of ``sqrt(2)`` are absorbed into the
    coefficients, so the representation is unique.
    """

    __slots__ = ("_terms", "root2")

    def __init__(self, terms: Mapping[tuple[int, int], LaurentPoly] | None = None,
                 root2: int = 0):
        clean = {}
        for (i, j), f in (terms or {}).items():
            f = _as_poly(f)
            if i < 0 or j < 0:
                raise ValueError("derivative orders must be non-negative")
            if not f.is_zero():
                clean[(int(i), int(j))] = f
        if root2 not in (0, 1):
            raise ValueError("root2 must be 0 or 1")
        self._terms = clean
        self.root2 = root2 if clean else 0

    @classmethod
    def _raw(cls, terms, root2):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.root2 = root2 if terms else 0
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def scalar(cls, c) -> "WeylElement":
        return cls({(0, 0): LaurentPoly.constant(c)})

    @classmethod
    def function(cls, f: LaurentPoly) -> "WeylElement":
        return cls({(0, 0): f})

    @classmethod
    def dx(cls) -> "WeylElement":
        return cls({(1, 0): LaurentPoly.constant(1)})

    @classmethod
    def dy(cls) -> "WeylElement":
        return cls({(0, 1): LaurentPoly.constant(1)})

    @classmethod
    def x(cls) -> "WeylElement":
        return cls.function(LaurentPoly.x())

    @classmethod
    def y(cls) -> "WeylElement":
        return cls.function(LaurentPoly.y())

    @classmethod
    def px(cls) -> "WeylElement":
        """Momentum ``-i d/dx`` (hbar = 1)."""
        return cls({(1, 0): LaurentPoly.constant(-I)})

    @classmethod
    def py(cls) -> "WeylElement":
        return cls({(0, 1): LaurentPoly.constant(-I)})

    # inspection -----------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, int], LaurentPoly]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def term_count(self) -> int:
        return sum(len(f) for f in self._terms.values())

    def order(self) -> int:
        return max((i + j for i, j in self._terms), default=0)

    def is_scalar(self) -> bool:
        return self.root2 == 0 and all(k == (0, 0) for k in self._terms) and all(
            set(f.terms) <= {(0, 0)} for f in self._terms.values()
        )

    # arithmetic -----------------------------------------------------------
    def times_sqrt2(self, power: int) -> "WeylElement":
        """Multiply by ``sqrt(2) ** power`` exactly."""
        total = self.root2 + power
        half, parity = divmod(total, 2)
        factor = Fraction(2) ** half
        return WeylElement._raw(
            {k: f * factor for k, f in self._terms.items()}, parity
        )

    def __add__(self, other):
        other = _as_weyl(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.root2 != other.root2:
            raise ValueError(
                "cannot add elements whose sqrt(2) scales differ by an odd power"
            )
        out = dict(self._terms)
        for k, f in other._terms.items():
            s = out[k] + f if k in out else f
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return WeylElement._raw(out, self.root2)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw({k: -f for k, f in self._terms.items()}, self.root2)

    def __sub__(self, other):
        return self + (-_as_weyl(other))

    def __rsub__(self, other):
        return _as_weyl(other) - self

    def __mul__(self, other):
        if not isinstance(other, WeylElement):
            if isinstance(other, LaurentPoly):
                other = WeylElement.function(other)
            else:
                c = GaussianRational.coerce(other)
                return WeylElement._raw(
                    {k: f * c for k, f in self._terms.items() if c}, self.root2
                )
        return _multiply(self, other)

    def __rmul__(self, other):
        return _as_weyl(other) * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = WeylElement.scalar(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def adjoint(self) -> "WeylElement":
        """Formal L^2 adjoint: ``(f d^a)^+ = (-d)^a f*``."""
        out = WeylElement()
        for (i, j), f in self._terms.items():
            deriv = WeylElement._raw({(i, j): LaurentPoly.constant((-1) ** (i + j))}, 0)
            out = out + deriv * WeylElement.function(f.conjugate())
        return WeylElement._raw(out._terms, self.root2)

    @property
    def dag(self) -> "WeylElement":
        return self.adjoint()

    def apply_sympy(self, expr, x, y):
        """Apply the operator to a sympy expression in ``x`` and ``y``."""
        import sympy

        out = 0
        for (i, j), f in self._terms.items():
            d = expr
            if i:
                d = sympy.diff(d, x, i)
            if j:
                d = sympy.diff(d, y, j)
            out += f.to_sympy(x, y) * d
        return out * sympy.sqrt(2) ** self.root2

    def __eq__(self, other):
        try:
            other = _as_weyl(other)
        except TypeError:
            return NotImplemented
        return self.root2 == other.root2 and self._terms == other._terms

    def __hash__(self):
        return hash((self.root2, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), f in sorted(self._terms.items()):
            d = "".join(s for s in (_power("dx", i), _power("dy", j)) if s)
            parts.append(f"[{f!r}]{d}")
        body = " + ".join(parts)
        return f"sqrt2*({body})" if self.root2 else body


def _as_weyl(value) -> WeylElement:
    if isinstance(value, WeylElement):
        return value
    if isinstance(value, LaurentPoly):
        return WeylElement.function(value)
    return WeylElement.scalar(value)


def _multiply(a: WeylElement, b: WeylElement) -> WeylElement:
    # (f d^al)(g d^be) = sum_{ga <= al} C(al, ga) f (d^ga g) d^(al - ga + be)
    out: dict[tuple[int, int], LaurentPoly] = {}
    for (i1, j1), f in a._terms.items():
        for (i2, j2), g in b._terms.items():
            for gi in range(i1 + 1):
                for gj in range(j1 + 1):
                    dg = g.diff(gi, gj)
                    if dg.is_zero():
                        continue
                    coeff = comb(i1, gi) * comb(j1, gj)
                    term = f * dg * coeff
                    key = (i1 - gi + i2, j1 - gj + j2)
                    s = out[key] + term if key in out else term
                    if s.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = s
    half, parity = divmod(a.root2 + b.root2, 2)
    if half:
        out = {k: f * 2 for k, f in out.items()}
    return WeylElement._raw(out, parity)


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    """``ab - ba`` in normal form."""
    return a * b - b * a
