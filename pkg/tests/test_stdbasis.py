import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from bsfamily.arith import ParamPoly, PrimeIdealSpec
from bsfamily.bfunction import annihilator_generators
from bsfamily.ncalg import NCOperator, OrderSpec, elimination_order, lead, polynomial_signature, weyl_signature
from bsfamily.polyparse import parse_poly
from bsfamily.stdbasis import (GenericBasis, buchberger_check, eliminate, generic_standard_basis,
                               in_ideal, s_operator, standard_basis)
from strategies import monomials, small_rationals

D1 = weyl_signature(1, with_s=False, with_dt=False)
C2 = polynomial_signature(2, 0, extra=())


def staircase(G, ord):
    return GenericBasis(list(G), ParamPoly.one(0), ord, PrimeIdealSpec.zero(0)).staircase()


def test_s_operator_examples():
    x, d = NCOperator.x(D1, 0), NCOperator.z(D1, 0)
    ord = OrderSpec(1, [0])
    assert s_operator(x * d, x * d, ord).is_zero()
    assert s_operator(x * d, d, ord).is_zero()
    x1, x2 = NCOperator.x(C2, 0), NCOperator.x(C2, 1)
    assert s_operator(x1 * x1, x1 * x2, OrderSpec(2, [])).is_zero()


def test_standard_basis_examples():
    x, d = NCOperator.x(D1, 0), NCOperator.z(D1, 0)
    ord = OrderSpec(1, [0])
    assert standard_basis([x], ord) == [x]
    x1, x2 = NCOperator.x(C2, 0), NCOperator.x(C2, 1)
    G = standard_basis([x1 * x1, x1 * x2], OrderSpec(2, []))
    assert G == [x1 * x1, x1 * x2]
    G = standard_basis([d, x * d], ord)
    assert staircase(G, ord) == [(0, 1)]


def test_generic_standard_basis_examples():
    sig = polynomial_signature(0, 1, ("s",))
    s = NCOperator.z(sig, 0)
    y = ParamPoly.var(0, 1)
    one = NCOperator.constant(sig, 1)
    ord = OrderSpec(0, [0])
    gb = generic_standard_basis([s.scale(y) + one], ord, PrimeIdealSpec.zero(1))
    assert gb.elements == [s.scale(y) + one] and gb.h == y
    gb = generic_standard_basis([s.scale(y) + one], ord, PrimeIdealSpec([y], 1))
    assert gb.staircase() == [(0,)] and gb.h == 1
    sig0 = polynomial_signature(0, 0, ("s",))
    s0 = NCOperator.z(sig0, 0)
    gb = generic_standard_basis([s0.scale(3) + NCOperator.constant(sig0, 1)], ord)
    assert gb.h == 3


def test_eliminate_examples():
    sig = polynomial_signature(1, 0, ("s", "zeta"))
    x, s, z = NCOperator.x(sig, 0), NCOperator.z(sig, 0), NCOperator.z(sig, 1)
    one = NCOperator.constant(sig, 1)
    E = eliminate([z * x, (one - z) * s], [1])
    assert len(E.basis.elements) == 1
    g = E.basis.elements[0]
    assert g.scale(1 / g.rational_content()).format() == "x1*s"

    E = eliminate([x * s, s * s], [])
    assert E.basis.staircase() == generic_standard_basis([x * s, s * s], OrderSpec(1, [0, 0])).staircase()

    W = weyl_signature(1)
    X, Dx, S, Dt = NCOperator.x(W, 0), NCOperator.z(W, 0), NCOperator.z(W, 1), NCOperator.z(W, 2)
    E = eliminate([S + X * Dt, Dx + Dt], [2])
    target = (S - X * Dx).change_signature(E.signature, [0, 1, None])
    assert in_ideal(target, E.basis)
    assert all(not g.involves_z(j) for g in E.basis.elements for j in range(E.signature.q)
               if E.signature.z_kinds[j][0] == "dt")


DEFORMED_CUSP = parse_poly("x1^2 + y*x2^2 + x2^3", ["x1", "x2", "y"])


def _stage1(Q):
    I = annihilator_generators(DEFORMED_CUSP, 2)
    return I, generic_standard_basis(I, elimination_order(I[0].sig, [I[0].sig.dt_index]), Q)


def test_buchberger_postcondition():
    for Q in (PrimeIdealSpec.zero(1), PrimeIdealSpec([ParamPoly.var(0, 1)], 1)):
        _, gb = _stage1(Q)
        assert buchberger_check(gb.elements, gb.order, Q) == []


@settings(max_examples=25)
@given(st.lists(st.tuples(monomials(weyl_signature(2, m=1), 2), small_rationals), min_size=1, max_size=3),
       st.sampled_from([0, 1]))
def test_membership_oracle(combo, qi):
    Q = [PrimeIdealSpec.zero(1), PrimeIdealSpec([ParamPoly.var(0, 1)], 1)][qi]
    I, gb = _stage1(Q)
    P = NCOperator.zero(I[0].sig)
    for k, (mono, c) in enumerate(combo):
        P = P + I[k % len(I)].lmul(mono, c)
    assert in_ideal(P, gb)


def test_generic_basis_specializes_to_a_standard_basis():
    I, gb = _stage1(PrimeIdealSpec.zero(1))
    rng = random.Random(7)
    pts = []
    while len(pts) < 3:
        y0 = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if gb.h.evaluate([y0]) != 0 and (y0,) not in pts:
            pts.append((y0,))
    for p in pts:
        Is = [g.specialize(p) for g in I]
        G = standard_basis(Is, gb.order)
        assert staircase(G, gb.order) == gb.staircase()
        Gs = [g.specialize(p) for g in gb.elements]
        assert buchberger_check(Gs, gb.order) == []


def test_elimination_soundness_after_specialization():
    I = annihilator_generators(DEFORMED_CUSP, 2)
    E = eliminate(I, [I[0].sig.dt_index], PrimeIdealSpec([ParamPoly.var(0, 1)], 1))
    assert E.signature.dt_index is None
    for g in E.basis.elements:
        assert lead(g, E.basis.order)[1] != 0
        assert g.specialize((0,)).sig.dt_index is None
