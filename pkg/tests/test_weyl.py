from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given

from susyvcs.weyl import GaussianRational, LaurentPoly, WeylElement, commutator

from strategies import gaussians, laurent, weyl

I = GaussianRational(0, 1)
X, Y = sp.symbols("x y", real=True)


def test_gaussian_rational_arithmetic():
    a = GaussianRational(Fraction(1, 2), 3)
    b = GaussianRational(2, -1)
    assert a * b == GaussianRational(Fraction(1, 2) * 2 + 3, Fraction(-1, 2) + 6)
    assert (a / b) * b == a
    assert a.conjugate() == GaussianRational(Fraction(1, 2), -3)
    assert complex(I * I) == -1


def test_gaussian_rational_rejects_non_numbers():
    with pytest.raises(TypeError):
        GaussianRational(object())


def test_leibniz_rule():
    dx, x = WeylElement.dx(), WeylElement.x()
    assert dx * x == x * dx + 1


def test_momentum_position_commutator():
    px, x = WeylElement.px(), WeylElement.x()
    assert px * x - x * px == WeylElement.scalar(-I)


def test_inverse_x_against_derivative():
    inv = WeylElement.function(LaurentPoly.monomial(-1, 0))
    dx = WeylElement.dx()
    # d/dx x^-1 - x^-1 d/dx = -x^-2, differentiated by hand
    assert commutator(dx, inv) == WeylElement.function(LaurentPoly.monomial(-2, 0, -1))


def test_laurent_diff_and_evaluate():
    p = LaurentPoly({(2, 1): 3, (-1, 0): 1})
    assert p.diff(1, 0) == LaurentPoly({(1, 1): 6, (-2, 0): -1})
    assert p.evaluate(2.0, 1.0) == pytest.approx(12.5)


def test_sqrt2_tracking():
    e = WeylElement.x().times_sqrt2(-1)
    assert e.root2 == 1
    assert (e * e) == WeylElement.function(LaurentPoly.monomial(2, 0, Fraction(1, 2)))


def test_records_round_trip():
    p = LaurentPoly({(1, -1): GaussianRational(Fraction(1, 3), -2), (0, 0): 5})
    assert LaurentPoly.from_records(p.to_records()) == p


@given(weyl(), weyl(), weyl())
def test_product_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(weyl(), weyl(), weyl())
def test_jacobi_identity(a, b, c):
    total = (commutator(a, commutator(b, c)) + commutator(b, commutator(c, a))
             + commutator(c, commutator(a, b)))
    assert total.is_zero()


@given(weyl(), weyl())
def test_adjoint_reverses_products(a, b):
    assert (a * b).adjoint() == b.adjoint() * a.adjoint()


@given(weyl())
def test_adjoint_is_an_involution(a):
    assert a.adjoint().adjoint() == a


@given(laurent(allow_negative=False), laurent(allow_negative=False))
def test_leibniz_on_functions(f, g):
    assert (f * g).diff(1, 0) == f.diff(1, 0) * g + f * g.diff(1, 0)


@given(weyl(max_terms=2, max_order=1), weyl(max_terms=2, max_order=1))
def test_product_acts_as_composition(a, b):
    probe = sp.exp(X / 3 - Y / 5) * (1 + X ** 2 + Y)
    lhs = (a * b).apply_sympy(probe, X, Y)
    rhs = a.apply_sympy(b.apply_sympy(probe, X, Y), X, Y)
    pt = {X: sp.Rational(7, 5), Y: sp.Rational(-2, 3)}
    assert complex(sp.N((lhs - rhs).subs(pt), 30)) == pytest.approx(0, abs=1e-20)


@given(gaussians, weyl())
def test_scalar_multiplication_commutes(c, a):
    assert a * c == WeylElement.scalar(c) * a
