from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from bsfamily.arith import ParamPoly, PrimeIdealSpec
from bsfamily.bfunction import BFunction, full_signature
from bsfamily.errors import MalformedCertificate
from bsfamily.ncalg import DERIVATION, DT_VAR, S_VAR, NCOperator, weyl_signature
from bsfamily.polyparse import parse_poly
from bsfamily.verify import XiVector, apply, certificate_check
from strategies import operators, param_polys

F = Fraction
SIG = weyl_signature(1, m=1)        # dx1, s, dt ; parameter y
FAM = parse_poly("x1^2 + y*x1", ["x1", "y"])
s_, x_, y_ = sympy.symbols("s x1 y")
XS, YS = (x_,), (y_,)


def to_sympy(p: ParamPoly, names):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.prod([v ** k for v, k in zip(names, e)])
                for e, c in p.terms.items()), sympy.Integer(0))


def xi_to_sympy(v: XiVector, f):
    fs = to_sympy(f, XS + YS)
    out = 0
    for l, u in enumerate(v.components):
        out += to_sympy(u, XS + YS) * sympy.ff(s_, l) * fs ** (s_ - l)
    return out


def act_sympy(op: NCOperator, expr):
    """The oracle: operators act on expressions in s, x, y, f^(s-l) by their defining formulas."""
    sig, n = op.sig, op.sig.n
    total = 0
    for mo, c in op.terms.items():
        e = expr
        for j in reversed(range(sig.q)):
            kind = sig.z_kinds[j]
            for _ in range(mo[n + j]):
                if kind[0] == DERIVATION:
                    e = sympy.diff(e, XS[kind[1]])
                elif kind[0] == S_VAR:
                    e = s_ * e
                elif kind[0] == DT_VAR:
                    e = -s_ * e.subs(s_, s_ - 1)
        coeff = to_sympy(c, YS) * sympy.prod([v ** k for v, k in zip(XS, mo[:n])])
        total += coeff * e
    return total


def same(a, b):
    """a == b, after writing every f^(s-l) as F f^(-l) for a new symbol F."""
    fs = to_sympy(FAM, XS + YS)
    F_ = sympy.Symbol("F")
    rat = (a - b).replace(lambda e: e.is_Pow and e.base == fs and e.exp.has(s_),
                          lambda e: F_ * fs ** sympy.expand(e.exp - s_))
    assert not rat.has(fs ** s_)
    return sympy.cancel(rat) == 0


def test_apply_examples():
    f = parse_poly("x1^2", ["x1"])
    sig = weyl_signature(1)
    one = XiVector.xi0(ParamPoly.one(1))
    d, s, dt = (NCOperator.z(sig, j) for j in range(3))
    assert apply(d, one, f).components == [ParamPoly.zero(1), parse_poly("2*x1", ["x1"])]
    assert apply(s, one, f).components == [ParamPoly.zero(1), f]
    assert apply(dt, one, f).components == [ParamPoly.zero(1), -ParamPoly.one(1)]
    # 2s - x dx kills x^(2s)
    ann = s.scale(2) - NCOperator.x(sig, 0) * d
    assert apply(ann, one, f).is_zero()


@settings(max_examples=40)
@given(operators(SIG, 3, 2), operators(SIG, 3, 2), param_polys(2, 2, 2))
def test_action_is_a_module_action(P, Q, u):
    v = XiVector.xi0(u)
    assert apply(P * Q, v, FAM) == apply(P, apply(Q, v, FAM), FAM)


@settings(max_examples=25)
@given(operators(SIG, 3, 2), param_polys(2, 2, 2))
def test_action_matches_symbolic_calculus(P, u):
    v = XiVector.xi0(u)
    lhs = xi_to_sympy(apply(P, v, FAM), FAM)
    rhs = act_sympy(P, xi_to_sympy(v, FAM))
    assert same(lhs, rhs)


def test_oracle_detects_a_wrong_action():
    d, s = NCOperator.z(SIG, 0), NCOperator.z(SIG, 1)
    v = XiVector.xi0(ParamPoly.one(2))
    assert not same(xi_to_sympy(apply(d, v, FAM), FAM), act_sympy(s, xi_to_sympy(v, FAM)))


@pytest.mark.parametrize("word", ["dt*s", "s*dt", "dt*dt*d", "x*dt*d*s", "d*x*dt + s*s"])
def test_dt_words_match_symbolic_calculus(word):
    x, d, s, dt = NCOperator.x(SIG, 0), NCOperator.z(SIG, 0), NCOperator.z(SIG, 1), NCOperator.z(SIG, 2)
    P = eval(word, {"x": x, "d": d, "s": s, "dt": dt})
    v = XiVector.xi0(parse_poly("x1*y + 2", ["x1", "y"]))
    assert same(xi_to_sympy(apply(P, v, FAM), FAM), act_sympy(P, xi_to_sympy(v, FAM)))


def _x2_certificate():
    f = parse_poly("x^2", ["x"])
    sig = full_signature(1, 0)
    d = NCOperator.z(sig, 0)
    return f, sig, (d * d).scale(F(1, 4))


def test_certificate_check_examples():
    f, sig, P0 = _x2_certificate()
    Q = PrimeIdealSpec.zero(0)
    one = ParamPoly.one(1)
    zero = NCOperator.zero(sig)
    b = BFunction(((-1, 1), (F(-1, 2), 1)))
    assert certificate_check(f, 1, Q, b, one, P0, zero).ok
    assert certificate_check(f, 1, Q, b.coefficients(), one, P0, zero).ok
    assert not certificate_check(f, 1, Q, BFunction(((-1, 2),)), one, P0, zero).ok
    assert not certificate_check(f, 1, Q, b, one, P0.scale(2), zero).ok


def test_certificate_check_matches_sympy():
    f, sig, P0 = _x2_certificate()
    x = sympy.Symbol("x")
    lhs = (s_ + 1) * (s_ + sympy.Rational(1, 2)) * x ** (2 * s_)
    rhs = sympy.diff(x ** (2 * s_ + 2), x, 2) / 4
    assert sympy.simplify(lhs - rhs) == 0


def test_malformed_certificates():
    f, sig, P0 = _x2_certificate()
    Q = PrimeIdealSpec.zero(0)
    one = ParamPoly.one(1)
    zero = NCOperator.zero(sig)
    b = BFunction(((-1, 1), (F(-1, 2), 1)))
    dt = NCOperator.z(sig, sig.dt_index)
    with pytest.raises(MalformedCertificate):
        certificate_check(f, 1, Q, b, one, P0 + dt, zero)
    with pytest.raises(MalformedCertificate):
        certificate_check(f, 1, Q, b, parse_poly("x", ["x"]), P0, zero)
    with pytest.raises(MalformedCertificate):
        certificate_check(f, 1, Q, b, one, P0, NCOperator.constant(sig, 1))
    with pytest.raises(MalformedCertificate):
        certificate_check(f, 1, PrimeIdealSpec.zero(1), b, one, P0, zero)


def test_P1_must_lie_in_Q():
    f = parse_poly("x^2 + y*x", ["x", "y"])
    sig = full_signature(1, 1)
    Q = PrimeIdealSpec([ParamPoly.var(0, 1)], 1)
    b = BFunction(((-1, 1), (F(-1, 2), 1)))
    d = NCOperator.z(sig, 0)
    y = NCOperator.constant(sig, ParamPoly.var(0, 1))
    P0 = (d * d).scale(F(1, 4))
    one = ParamPoly.one(2)
    # the x^2 certificate is only right modulo y; the y-terms are not in P1 here
    assert not certificate_check(f, 1, Q, b, one, P0, NCOperator.zero(sig)).ok
    with pytest.raises(MalformedCertificate):
        certificate_check(f, 1, Q, b, one, P0, d)
    assert not certificate_check(f, 1, Q, b, one, P0, y * d).ok
