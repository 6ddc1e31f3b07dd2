"""Local Bernstein-Sato polynomial at x = 0 by elimination.

Stages: the annihilator I of f^s in D<s, dt>; I1 = I with dt eliminated;
I2 = I1 + (f); J = I2 with every d_i eliminated, an ideal of C[x][s].  Then
b0 generates J(0, s), and for every root s_i of b0 the exponent l_i is the
least l such that J : (s - s_i)^l has an element not vanishing at
(0, s_i).  The result is prod (s - s_i)^{l_i}.

Every stage takes an optional prime Q of the parameter ring; with Q = (0)
and no parameters this is the plain computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import (ParamPoly, PrimeIdealSpec, rational_roots, upoly_divmod,
                    upoly_from_roots, upoly_gcd, upoly_monic, upoly_trim)
from .division import DivisionConfig
from .errors import InternalInconsistency, IrrationalRoots, ResourceError
from .ncalg import (AlgebraSignature, NCOperator, polynomial_signature, weyl_signature)
from .stdbasis import Elimination, GenericBasis, eliminate

DEFAULT_SCAN_CAP = 50


@dataclass(frozen=True)
class BFunction:
    """prod (s - root)^mult, roots ascending."""

    roots: tuple

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(sorted((Fraction(r), int(k)) for r, k in self.roots if k)))

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.roots)

    def coefficients(self) -> list:
        """Coefficients, lowest degree first (monic)."""
        return upoly_from_roots(self.roots)

    def factored(self) -> str:
        if not self.roots:
            return "1"
        parts = []
        for r, k in self.roots:
            if r == 0:
                base = "s"
            else:
                base = f"(s+{-r})" if r < 0 else f"(s-{r})"
            parts.append(base if k == 1 else f"{base}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        return self.factored()


# ---------------------------------------------------------------------------
# signatures used by the stages

def full_signature(n: int, m: int, x_names=None, y_names=None) -> AlgebraSignature:
    return weyl_signature(n, m, x_names=x_names, y_names=y_names)


def _x_poly_to_op(sig: AlgebraSignature, p: ParamPoly) -> NCOperator:
    return NCOperator.from_poly(sig, p)


def annihilator_generators(f: ParamPoly, n: int, sig: AlgebraSignature | None = None) -> list:
    """s + f dt and d_i + f_{x_i} dt; f has n x-variables followed by parameters."""
    m = f.nvars - n
    sig = sig or full_signature(n, m)
    s = NCOperator.z(sig, sig.s_index)
    dt = NCOperator.z(sig, sig.dt_index)
    gens = [s + _x_poly_to_op(sig, f) * dt]
    for j, i in sorted(sig.deriv_of.items()):
        gens.append(NCOperator.z(sig, j) + _x_poly_to_op(sig, f.derivative(i)) * dt)
    return gens


def compute_I1(I: Sequence[NCOperator], Q=None, config=None, track=False) -> Elimination:
    sig = I[0].sig
    return eliminate(I, [sig.dt_index], Q, config, track)


def compute_I2(I1: Sequence[NCOperator], f: ParamPoly, sig: AlgebraSignature) -> list:
    return list(I1) + [_x_poly_to_op(sig, f)]


def compute_J(I2: Sequence[NCOperator], Q=None, config=None, track=False) -> Elimination:
    sig = I2[0].sig
    return eliminate(I2, sorted(sig.deriv_of), Q, config, track)


def at_origin(g: NCOperator) -> list:
    """g(0, s) for g in C[x][s]: coefficient list in s (lowest first) of ParamPolys."""
    sig = g.sig
    n, si = sig.n, sig.s_index
    coeffs: dict = {}
    for mo, c in g.terms.items():
        if any(mo[:n]):
            continue
        k = mo[n + si]
        coeffs[k] = coeffs.get(k, ParamPoly.zero(sig.m)) + c
    if not coeffs:
        return []
    top = max(coeffs)
    out = [coeffs.get(k, ParamPoly.zero(sig.m)) for k in range(top + 1)]
    while out and out[-1].is_zero():
        out.pop()
    return out


def value_at(g: NCOperator, root: Fraction) -> ParamPoly:
    """g(0, root) as a parameter polynomial."""
    total = ParamPoly.zero(g.sig.m)
    for k, c in enumerate(at_origin(g)):
        total = total + c * (Fraction(root) ** k)
    return total


def b0(J: Sequence[NCOperator]) -> list:
    """Monic generator of J(0, s) (no parameters): gcd of the g(0, s)."""
    acc: list = []
    for g in J:
        if g.sig.m:
            raise ValueError("b0 is the parameter-free variant; use the generic pipeline")
        u = [c.constant_term() for c in at_origin(g)]
        acc = upoly_gcd(acc, u) if acc else upoly_monic(u)
    if not acc:
        raise InternalInconsistency("J(0, s) is zero: the pipeline produced no b-function")
    return acc


def _u_operator(sig: AlgebraSignature, u: Sequence[Fraction]) -> NCOperator:
    s = NCOperator.z(sig, sig.s_index)
    out = NCOperator.zero(sig)
    for k, c in enumerate(u):
        if c:
            out = out + (s ** k).scale(c)
    return out


def divide_by_s_poly(g: NCOperator, u: Sequence[Fraction]) -> NCOperator:
    """Exact quotient g / u(s) for g in C[x][s] and monic u in Q[s]."""
    sig = g.sig
    n, si = sig.n, sig.s_index
    u = upoly_monic(list(u))
    d = len(u) - 1
    rem = dict(g.terms)
    quo: dict = {}
    while True:
        top = max((mo[n + si] for mo in rem), default=-1)
        if top < d:
            break
        for mo in [mo for mo in rem if mo[n + si] == top]:
            c = rem.pop(mo)
            qm = list(mo)
            qm[n + si] -= d
            qm = tuple(qm)
            quo[qm] = quo.get(qm, ParamPoly.zero(sig.m)) + c
            for k, uk in enumerate(u[:-1]):
                if not uk:
                    continue
                t = list(qm)
                t[n + si] += k
                t = tuple(t)
                v = rem.get(t, ParamPoly.zero(sig.m)) - c * uk
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
    if rem:
        raise InternalInconsistency("inexact division by a polynomial in s")
    return NCOperator(sig, {k: v for k, v in quo.items() if v})


def colon(J: Sequence[NCOperator], u: Sequence[Fraction], Q=None, config=None) -> tuple[list, GenericBasis]:
    """Generators of J : u(s), via an auxiliary central variable.

    Returns the quotients and the generic basis of the zeta-elimination
    (whose h is the exceptional factor of this step).
    """
    u = upoly_trim(list(u))
    if not u:
        raise ValueError("u must be nonzero")
    sig = J[0].sig
    csig = polynomial_signature(sig.n, sig.m, extra=("s", "zeta"),
                                x_names=sig.x_names, y_names=sig.y_names)
    zeta = NCOperator.z(csig, 1)
    one = NCOperator.constant(csig, 1)
    gens = [zeta * g.change_signature(csig, [0]) for g in J]
    gens.append((one - zeta) * _u_operator(csig, u))
    E = eliminate(gens, [1], Q, config)
    quotients = [divide_by_s_poly(g.change_signature(sig, [0]), u) for g in E.basis.elements]
    return quotients, E.full


@dataclass
class RootData:
    root: Fraction
    mu: int
    l: int
    witness: NCOperator
    witness_value: ParamPoly
    colon_h: list = field(default_factory=list)  # (l, exceptional factor, privileged coefficients) per scanned l


def minimal_exponents(J: Sequence[NCOperator], roots: Sequence[tuple], Q=None, config=None,
                      cap: int = DEFAULT_SCAN_CAP) -> list:
    sig = J[0].sig
    Qz = Q if Q is not None else PrimeIdealSpec.zero(sig.m)
    out = []
    for root, mu in roots:
        root = Fraction(root)
        colon_h = []
        found = None
        for l in range(mu, mu + cap + 1):
            u = upoly_from_roots([(root, l)])
            gens, basis = colon(J, u, Qz, config)
            colon_h.append((l, basis.h, basis.cps))
            for g in gens:
                v = Qz.reduce(value_at(g, root))
                if v:
                    found = (l, g, v)
                    break
            if found:
                break
        if not found:
            raise ResourceError(f"exponent scan for root {root} exceeded the cap of {cap}")
        out.append(RootData(root, mu, found[0], found[1], found[2], colon_h))
    return out


@dataclass
class PipelineTrace:
    I: list
    I1: Elimination
    I2: list
    J: Elimination
    J0: list
    b0: list
    roots: list


def check_rational(u: Sequence[Fraction]) -> list:
    roots, residual = rational_roots(list(u))
    if len(residual) > 1:
        raise IrrationalRoots(f"b0 has a factor without rational roots of degree {len(residual) - 1}")
    return roots


def bernstein(f: ParamPoly, config: DivisionConfig | None = None,
              cap: int = DEFAULT_SCAN_CAP, sig: AlgebraSignature | None = None):
    """Local b-function of f (no parameters) at the origin, with the stage data."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    n = f.nvars
    sig = sig or full_signature(n, 0)
    I = annihilator_generators(f, n, sig)
    E1 = compute_I1(I, None, config)
    I2 = compute_I2(E1.basis.elements, f, E1.signature)
    EJ = compute_J(I2, None, config)
    Jg = EJ.basis.elements
    J0 = [at_origin(g) for g in Jg]
    b0poly = b0(Jg)
    roots = check_rational(b0poly)
    data = minimal_exponents(Jg, roots, None, config, cap)
    b = BFunction(tuple((d.root, d.l) for d in data))
    return b, PipelineTrace(I, E1, I2, EJ, J0, b0poly, data)


def bernstein_of(f: ParamPoly, **kw) -> BFunction:
    return bernstein(f, **kw)[0]


def exact_quotient(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    q, r = upoly_divmod(list(a), list(b))
    if r:
        raise InternalInconsistency("inexact univariate division")
    return q
