"""Exact checking of functional equations h b(s) f^s = P0 f^{s+1} + P1 f^s.

Elements of the module generated by f^s are written sum_l u_l xi_l with
xi_l = (s-l+1)...(s) f^{s-l} and u_l polynomials in (x, y).  Operators act by

    d_i . u xi_l = u_{x_i} xi_l + u f_{x_i} xi_{l+1}
    dt  . u xi_l = -u xi_{l+1}
    s   . u xi_l = l u xi_l + u f xi_{l+1}

so both sides of an equation become finite vectors that can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .arith import ParamPoly, PrimeIdealSpec
from .errors import MalformedCertificate
from .ncalg import CENTRAL, DERIVATION, DT_VAR, S_VAR, NCOperator, weyl_signature


@dataclass
class XiVector:
    components: list  # ParamPoly in (x, y), index l

    @property
    def d(self) -> int:
        return len(self.components) - 1

    @classmethod
    def xi0(cls, u: ParamPoly) -> "XiVector":
        return cls([u])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "XiVector") -> "XiVector":
        k = max(len(self.components), len(other.components))
        a = self.components + [ParamPoly.zero(self._nv(other))] * (k - len(self.components))
        b = other.components + [ParamPoly.zero(self._nv(other))] * (k - len(other.components))
        return XiVector([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "XiVector":
        return XiVector([-c for c in self.components])

    def __sub__(self, other: "XiVector") -> "XiVector":
        return self + (-other)

    def scale(self, p: ParamPoly) -> "XiVector":
        return XiVector([c * p for c in self.components])

    def _nv(self, other) -> int:
        for c in self.components + other.components:
            return c.nvars
        return 0

    def trimmed(self) -> "XiVector":
        comps = list(self.components)
        while len(comps) > 1 and comps[-1].is_zero():
            comps.pop()
        return XiVector(comps)


def _shift(comps: list, nv: int) -> list:
    return [ParamPoly.zero(nv)] + comps


def _act_generator(kind: tuple, comps: list, f: ParamPoly, n: int) -> list:
    nv = f.nvars
    out = [ParamPoly.zero(nv) for _ in range(len(comps) + 1)]
    if kind[0] == DERIVATION:
        i = kind[1]
        fi = f.derivative(i)
        for l, u in enumerate(comps):
            if u:
                out[l] = out[l] + u.derivative(i)
                out[l + 1] = out[l + 1] + u * fi
    elif kind[0] == DT_VAR:
        for l, u in enumerate(comps):
            if u:
                out[l + 1] = out[l + 1] - u
    elif kind[0] == S_VAR:
        for l, u in enumerate(comps):
            if u:
                if l:
                    out[l] = out[l] + u * l
                out[l + 1] = out[l + 1] + u * f
    else:
        raise ValueError("central generators have no action on f^s")
    return out


def _coeff_poly(c: ParamPoly, alpha: tuple, n: int, nv: int) -> ParamPoly:
    out = {}
    for e, v in c.terms.items():
        out[tuple(alpha) + tuple(e)] = v
    return ParamPoly(out, nv)


def apply(op: NCOperator, v: XiVector, f: ParamPoly) -> XiVector:
    """Left action of op on v; f is a polynomial in (x, y) matching op's signature."""
    sig = op.sig
    n = sig.n
    nv = f.nvars
    if nv != n + sig.m:
        raise ValueError("f does not match the operator's variables")
    total = XiVector([ParamPoly.zero(nv)])
    cache: dict = {}
    for mo, c in op.terms.items():
        beta = mo[n:]
        comps = cache.get(beta)
        if comps is None:
            comps = list(v.components)
            for j in reversed(range(sig.q)):
                for _ in range(beta[j]):
                    comps = _act_generator(sig.z_kinds[j], comps, f, n)
            cache[beta] = comps
        w = _coeff_poly(c, mo[:n], n, nv)
        total = total + XiVector([u * w for u in comps])
    return total.trimmed()


def s_poly_operator(sig, coeffs: Sequence) -> NCOperator:
    s = NCOperator.z(sig, sig.s_index)
    out = NCOperator.zero(sig)
    for k, c in enumerate(coeffs):
        if c:
            out = out + (s ** k).scale(c)
    return out


@dataclass
class CheckResult:
    ok: bool
    residual: XiVector
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def certificate_check(f: ParamPoly, n: int, Q: PrimeIdealSpec, b, h: ParamPoly,
                      P0: NCOperator, P1: NCOperator) -> CheckResult:
    """b is a BFunction or a coefficient list (lowest degree first)."""
    coeffs = b.coefficients() if hasattr(b, "coefficients") else list(b)
    m = f.nvars - n
    if Q.nvars != m:
        raise MalformedCertificate("Q has the wrong number of parameters")
    for name, op in (("P0", P0), ("P1", P1)):
        if op.sig.n != n or op.sig.m != m:
            raise MalformedCertificate(f"{name} lives in the wrong algebra")
        if any(k[0] == CENTRAL for k in op.sig.z_kinds) and op.terms:
            for mo in op.terms:
                if any(mo[n + j] for j, k in enumerate(op.sig.z_kinds) if k[0] == CENTRAL):
                    raise MalformedCertificate(f"{name} involves an auxiliary variable")
    if P0.sig.dt_index is not None and P0.involves_z(P0.sig.dt_index):
        raise MalformedCertificate("P0 involves dt")
    if not P1.reduce(Q).is_zero():
        raise MalformedCertificate("P1 has a coefficient outside Q")
    h0 = h.substitute({i: 0 for i in range(n)}).project(range(n, n + m)) if m else \
        ParamPoly.constant(h.substitute({i: 0 for i in range(n)}).constant_term(), 0)
    if Q.contains(h0):
        raise MalformedCertificate("h(0, y) lies in Q")
    one = XiVector.xi0(ParamPoly.one(f.nvars))
    ssig = weyl_signature(n, m, with_dt=False)
    lhs = apply(s_poly_operator(ssig, coeffs), one, f).scale(h)
    rhs = apply(P0, XiVector.xi0(f), f) + apply(P1, one, f)
    res = (lhs - rhs).trimmed()
    if res.is_zero():
        return CheckResult(True, res, "functional equation holds")
    return CheckResult(False, res, "functional equation fails")
