"""Bernstein-Sato polynomials of a family f(x, y) over a parameter variety.

`generic_bernstein(f, n, Q)` runs the elimination pipeline with every
coefficient taken modulo the prime Q of Q[y] and returns the b-function of
the generic fibre over V(Q), together with an exceptional polynomial h'
(outside Q) off whose zero set every fibre has that b-function.
`stratify` recurses on the components of V(Q) n V(h') to cover the whole
parameter space.  `weak_certificate` replays the pipeline with cofactor
tracking and produces h, P0, P1 with h b(s) f^s = P0 f^{s+1} + P1 f^s.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import sympy

from .arith import (ParamPoly, PrimeIdealSpec, factor_irreducible, from_sympy, radical_product,
                    rational_roots, to_sympy, _symbols)
from .bfunction import (DEFAULT_SCAN_CAP, BFunction, annihilator_generators, at_origin,
                        bernstein, check_rational, compute_I1, compute_I2, compute_J,
                        full_signature, minimal_exponents)
from .division import DivisionConfig, mora_reduce
from .errors import DecompositionUnsupported, InternalInconsistency, NotGenericallyRational
from .ncalg import NCOperator, OrderSpec, lead, polynomial_signature
from .stdbasis import Elimination, GenericBasis, generic_standard_basis


def rationality_reduce(p: Sequence[ParamPoly], Q: PrimeIdealSpec) -> list:
    """Monic q in Q[s] with p - cp(p) q having all coefficients in Q.

    `p` is a coefficient list (lowest degree first) of parameter polynomials.
    """
    coeffs = [Q.reduce(c) for c in p]
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if not coeffs:
        raise ValueError("polynomial lies in Q[s]")
    lc = coeffs[-1]
    e, v = lc.leading_term()
    out = []
    for c in coeffs:
        q = c.terms.get(e, Fraction(0)) / v
        if not (c - lc * q).is_zero():
            raise NotGenericallyRational(
                f"coefficient {c.format()} is not a rational multiple of {lc.format()} modulo Q")
        out.append(q)
    return out


@dataclass
class GenericTrace:
    I: list
    I1: Elimination
    I2: list
    J: Elimination
    J0: list
    G3: GenericBasis
    b0_tilde: NCOperator
    b0: list
    roots: list


@dataclass
class GenericBResult:
    b: BFunction
    h_prime: ParamPoly
    h_factors: list          # (stage label, parameter polynomial)
    trace: GenericTrace
    Q: PrimeIdealSpec
    f: ParamPoly
    n: int

    @property
    def m(self) -> int:
        return self.f.nvars - self.n


def _check_family(f: ParamPoly, n: int, Q: PrimeIdealSpec):
    if f.nvars < n:
        raise ValueError("f has fewer variables than declared x-variables")
    m = f.nvars - n
    if Q.nvars != m:
        raise ValueError("Q lives in a parameter ring of the wrong size")
    sig = full_signature(n, m)
    if NCOperator.from_poly(sig, f).reduce(Q).is_zero():
        raise ValueError("f vanishes identically on V(Q)")


def generic_bernstein(
    f: ParamPoly,
    n: int,
    Q: PrimeIdealSpec | None = None,
    config: DivisionConfig | None = None,
    cap: int = DEFAULT_SCAN_CAP,
    x_names=None,
    y_names=None,
) -> GenericBResult:
    m = f.nvars - n
    Q = Q if Q is not None else PrimeIdealSpec.zero(m)
    _check_family(f, n, Q)
    sig = full_signature(n, m, x_names, y_names)
    I = annihilator_generators(f, n, sig)
    E1 = compute_I1(I, Q, config)
    I2 = compute_I2(E1.basis.elements, f, E1.signature)
    EJ = compute_J(I2, Q, config)
    J = EJ.basis.elements
    J0 = [c for c in (at_origin(g) for g in J) if any(not Q.reduce(a).is_zero() for a in c)]
    if not J0:
        raise InternalInconsistency("J(0, s) vanishes modulo Q")
    ssig = polynomial_signature(0, m, ("s",), y_names=sig.y_names)
    s = NCOperator.z(ssig, 0)
    polys = []
    for c in J0:
        op = NCOperator.zero(ssig)
        for k, a in enumerate(c):
            if a:
                op = op + (s ** k).scale(a)
        polys.append(op)
    sord = OrderSpec(0, [0])
    G3 = generic_standard_basis(polys, sord, Q, config)
    b0t = min(G3.elements, key=lambda g: lead(g, sord)[0])
    deg = lead(b0t, sord)[0][0]
    b0t_coeffs = [b0t.coefficient((k,)) for k in range(deg + 1)]
    b0 = rationality_reduce(b0t_coeffs, Q)
    roots = check_rational(b0)
    data = minimal_exponents(J, roots, Q, config, cap)
    b = BFunction(tuple((d.root, d.l) for d in data))

    # only V(h') matters, so every stage keeps just its distinct irreducible factors
    stage_cps = [("I1", E1.full.cps), ("J", EJ.full.cps), ("J(0,s)", G3.cps)]
    for d in data:
        for l, _, cps in d.colon_h:
            stage_cps.append((f"colon s={d.root} l={l}", cps))
        stage_cps.append((f"witness s={d.root}", [d.witness_value]))
    factors = [(label, Q.reduce(radical_product(cps, m))) for label, cps in stage_cps]
    hp = Q.reduce(radical_product([c for _, cps in stage_cps for c in cps], m))
    if Q.contains(hp):
        raise InternalInconsistency("the exceptional polynomial lies in Q")
    hp = hp * (1 / hp.rational_content())
    trace = GenericTrace(I, E1, I2, EJ, J0, G3, b0t, b0, data)
    return GenericBResult(b, hp, factors, trace, Q, f, n)


# ---------------------------------------------------------------------------
# specialisation

def specialize(f: ParamPoly, n: int, point: Sequence) -> ParamPoly:
    m = f.nvars - n
    g = f.substitute({n + i: Fraction(v) for i, v in enumerate(point)})
    return g.project(range(n)) if m else g


@dataclass
class SpecializationReport:
    points: list            # (point, BFunction at the point, equal?)
    requested: int
    expected: BFunction

    @property
    def all_equal(self) -> bool:
        return bool(self.points) and all(eq for _, _, eq in self.points)

    @property
    def shortfall(self) -> int:
        return max(0, self.requested - len(self.points))


def sample_points(Q: PrimeIdealSpec, avoid: ParamPoly, count: int, seed: int = 0,
                  height: int = 6, tries: int = 400) -> list:
    """Small-height rational points of V(Q) outside V(avoid)."""
    m = Q.nvars
    if m == 0:
        return [()]
    rng = random.Random(seed)
    pts: list = []

    def ok(p):
        return p not in pts and avoid.evaluate(p) != 0 and Q.point_in_variety(p)

    def rnd():
        return Fraction(rng.randint(-height, height), rng.randint(1, 3))

    if Q.is_zero:
        for _ in range(tries):
            p = tuple(rnd() for _ in range(m))
            if ok(p):
                pts.append(p)
            if len(pts) >= count:
                break
        return pts
    if m == 1:
        for g in Q.generators:
            roots, _ = rational_roots([g.terms.get((k,), Fraction(0)) for k in range(g.degree_in(0) + 1)])
            for r, _ in roots:
                if ok((r,)):
                    pts.append((r,))
            break
        return pts[:count]
    # one generator linear in some variable: solve for it
    if len(Q.generators) == 1:
        g = Q.generators[0]
        for k in range(m):
            if g.degree_in(k) != 1:
                continue
            for _ in range(tries):
                p = [rnd() for _ in range(m)]
                sub = g.substitute({i: p[i] for i in range(m) if i != k})
                a = sub.terms.get(tuple(1 if i == k else 0 for i in range(m)), Fraction(0))
                if not a or len(sub.terms) > 2:
                    continue
                p[k] = -sub.constant_term() / a
                p = tuple(p)
                if ok(p):
                    pts.append(p)
                if len(pts) >= count:
                    break
            return pts
    for _ in range(tries):
        p = tuple(rnd() for _ in range(m))
        if ok(p):
            pts.append(p)
        if len(pts) >= count:
            break
    return pts


def specialization_check(result: GenericBResult, f: ParamPoly | None = None, sample_count: int = 3,
                         seed: int = 0, config: DivisionConfig | None = None) -> SpecializationReport:
    f = f if f is not None else result.f
    n = result.n
    pts = sample_points(result.Q, result.h_prime, sample_count, seed)
    rows = []
    for p in pts:
        fp = specialize(f, n, p)
        if fp.is_zero():
            continue
        bp = bernstein(fp, config=config)[0]
        rows.append((p, bp, bp == result.b))
    return SpecializationReport(rows, sample_count, result.b)


# ---------------------------------------------------------------------------
# stratification

@dataclass(frozen=True)
class Carrier:
    """V(Q) minus V(excluded)."""

    Q: PrimeIdealSpec
    excluded: ParamPoly

    def contains(self, point) -> bool:
        return self.Q.point_in_variety(point) and self.excluded.evaluate(point) != 0

    def format(self, names=None) -> str:
        ex = self.excluded
        if ex.is_constant():
            return f"V{self.Q.format(names)}"
        return f"V{self.Q.format(names)} minus V({ex.format(names)})"


@dataclass
class Stratum:
    """A union of carriers on which every fibre has the b-function `b`.

    b is None on carriers where f vanishes identically (no b-function).
    """

    carrier: list
    b: BFunction | None
    results: list = field(default_factory=list)

    def contains(self, point) -> bool:
        return any(c.contains(point) for c in self.carrier)


def _linear_solve(p: ParamPoly, free: Sequence[int]):
    """(k, expr) with p = c*(y_k - expr), c rational, expr free of y_k; else None."""
    m = p.nvars
    for k in free:
        if p.degree_in(k) != 1:
            continue
        unit = tuple(1 if i == k else 0 for i in range(m))
        c = p.terms.get(unit)
        if c is None or any(e[k] for e in p.terms if e != unit):
            continue
        rest = ParamPoly({e: v for e, v in p.terms.items() if e != unit}, m)
        return k, rest * (-1 / c)
    return None


def _apply_subs(p: ParamPoly, subs: list) -> ParamPoly:
    if not subs:
        return p
    gens = _symbols(p.nvars)
    expr = to_sympy(p, gens)
    for k, e in reversed(subs):
        expr = expr.subs(gens[k], to_sympy(e, gens))
    return from_sympy(sympy.expand(expr), gens, p.nvars)


def stratify(f: ParamPoly, n: int, config: DivisionConfig | None = None,
             cap: int = DEFAULT_SCAN_CAP, max_depth: int = 8) -> list:
    """Partition of parameter space into carriers V(Q) minus V(E) with constant b.

    A piece V(Q) minus V(E) is handled by one generic run; the rest,
    V(Q) n V(h') minus V(E), splits into the components V(Q + (p_i)) for
    the irreducible factors p_i of h' on V(Q), and component i also
    excludes p_1 .. p_{i-1} so that no point is visited twice.  V(Q) is
    always a graph over the free parameters, possibly cut by one more
    irreducible polynomial; anything else raises DecompositionUnsupported.
    """
    m = f.nvars - n
    if f.is_zero():
        raise ValueError("f must be nonzero")
    sig = full_signature(n, m)
    fop = NCOperator.from_poly(sig, f)
    pieces: list = []

    def visit(subs: list, extra: list, E: ParamPoly, depth: int):
        Q = PrimeIdealSpec([ParamPoly.var(k, m) - e for k, e in subs] + extra, m)
        E = _apply_subs(E, subs)
        if E.is_zero() or Q.contains(E):
            return  # already covered by an earlier component
        E = radical_product([E], m)
        if fop.reduce(Q).is_zero():
            pieces.append((Carrier(Q, E), None))
            return
        res = generic_bernstein(f, n, Q, config, cap)
        H = _apply_subs(res.h_prime, subs)
        pieces.append((Carrier(Q, radical_product([E, H], m)), res))
        if H.is_constant():
            return
        free = [k for k in range(m) if k not in {k for k, _ in subs}]
        if extra:
            if len(free) == 1:
                return  # V(Q) is a finite set of conjugate points and h' is a unit on it
            raise DecompositionUnsupported("cannot decompose V(Q) n V(h') for a nonlinear prime Q")
        if depth >= max_depth:
            raise DecompositionUnsupported("stratification exceeded the recursion depth")
        done: list = []
        for p, _ in factor_irreducible(H):
            E2 = radical_product([E] + done, m)
            sol = _linear_solve(p, free)
            if sol is None:
                visit(subs, [p], E2, depth + 1)
            else:
                k, e = sol
                subs2 = [(k2, _apply_subs(e2, [(k, e)])) for k2, e2 in subs] + [(k, e)]
                visit(subs2, [], E2, depth + 1)
            done.append(p)

    visit([], [], ParamPoly.one(m), 0)
    strata: list[Stratum] = []
    for car, res in pieces:
        b = res.b if res is not None else None
        for st in strata:
            if st.b == b:
                st.carrier.append(car)
                if res is not None:
                    st.results.append(res)
                break
        else:
            strata.append(Stratum([car], b, [res] if res is not None else []))
    return strata


def carriers_disjoint(a: Carrier, b: Carrier) -> bool:
    """Rabinowitsch test: V(Qa + Qb) minus V(ha * hb) is empty."""
    m = a.Q.nvars
    gens = _symbols(m)
    t = sympy.Symbol("_rabinowitsch")
    eqs = [to_sympy(g, gens) for g in a.Q.generators + b.Q.generators]
    eqs.append(1 - t * to_sympy(a.excluded * b.excluded, gens))
    gb = sympy.groebner(eqs, *gens, t, order="grevlex")
    return list(gb.exprs) == [1]


def strata_disjoint(strata: Sequence[Stratum]) -> bool:
    pieces = [c for st in strata for c in st.carrier]
    return all(carriers_disjoint(pieces[i], pieces[j])
               for i in range(len(pieces)) for j in range(i))


# ---------------------------------------------------------------------------
# certificates

@dataclass
class Certificate:
    """h(x, y) b(s) f^s = P0 f^{s+1} + P1 f^s, P0 free of dt, P1 in Q.D."""

    f: ParamPoly
    n: int
    Q: PrimeIdealSpec
    b: BFunction
    h: ParamPoly
    P0: NCOperator
    P1: NCOperator


def _x_part(u: NCOperator, nvars: int) -> ParamPoly:
    """An x-only operator as a polynomial in (x, y)."""
    n = u.sig.n
    out: dict = {}
    for mo, c in u.terms.items():
        if any(mo[n:]):
            raise InternalInconsistency("multiplier involves z")
        for e, v in c.terms.items():
            k = tuple(mo[:n]) + tuple(e)
            out[k] = out.get(k, 0) + v
    return ParamPoly.from_dict(out, nvars)


def weak_certificate(f: ParamPoly, n: int, Q: PrimeIdealSpec | None, result: GenericBResult,
                     config: DivisionConfig | None = None, x_names=None, y_names=None) -> Certificate:
    """h b(s) f^s = P0 f^{s+1} + P1 f^s with h(0, y) outside Q.

    The cofactors are first sought with the global order, where b(s) lies
    in J whenever no other point of {f = 0} needs a larger b; h is then a
    polynomial in y alone.  Otherwise the local order supplies a unit
    multiplier h(x, y).
    """
    m = f.nvars - n
    Q = Q if Q is not None else PrimeIdealSpec.zero(m)
    cfg = config or DivisionConfig()
    for order in ("global", "local"):
        cert = _certificate(f, n, Q, result, replace(cfg, order=order), x_names, y_names)
        if cert is not None:
            return cert
    raise InternalInconsistency("b(s) does not reduce to zero against J")


def _certificate(f, n, Q, result, config, x_names, y_names) -> Certificate | None:
    m = f.nvars - n
    sig = full_signature(n, m, x_names, y_names)
    I = annihilator_generators(f, n, sig)
    E1 = compute_I1(I, Q, config, track=True)
    sig1 = E1.signature
    I2 = compute_I2(E1.basis.elements, f, sig1)
    K = len(I2)
    EJ = compute_J(I2, Q, config, track=True)
    idx = EJ.kept_indices
    divisors = [EJ.full.elements[k] for k in idx]
    zero = NCOperator.zero(sig1)
    reps = [(zero,) + tuple(EJ.full.reps[k]) for k in idx]
    s1 = NCOperator.z(sig1, sig1.s_index)
    bop = NCOperator.zero(sig1)
    for k, c in enumerate(result.b.coefficients()):
        if c:
            bop = bop + (s1 ** k).scale(c)
    p_rep = (NCOperator.constant(sig1, 1),) + (zero,) * K
    R, rep = mora_reduce(bop, divisors, EJ.full.order, Q, reps, p_rep, config)
    if not R.is_zero():
        return None
    u = rep[0]
    D = [-r for r in rep[1:]]          # u b = sum D_k I2_k  (mod Q)
    # back to the generators of I: I1_k = sum_i A_ki I_i  (mod Q)
    # sig1 = (d_1..d_n, s) is a prefix of sig = (d_1..d_n, s, dt)
    def up(op):
        return NCOperator(sig, {mo + (0,): c for mo, c in op.terms.items()})
    W = NCOperator.zero(sig)
    A = E1.basis.reps
    for k in range(K - 1):
        Dk = up(D[k])
        for i, Ii in enumerate(I):
            W = W + Dk * (A[k][i] * Ii)
    P0 = up(D[K - 1])
    hpoly = _x_part(u, f.nvars)
    hop = up(u)
    bfull = up(bop)
    P1 = hop * bfull - P0 * NCOperator.from_poly(sig, f) - W
    if not P1.reduce(Q).is_zero():
        raise InternalInconsistency("certificate remainder has coefficients outside Q")
    h0 = hpoly.substitute({i: 0 for i in range(n)}).project(range(n, f.nvars))
    if Q.contains(h0):
        return None
    c = hpoly.rational_content()
    if c and c != 1:
        inv = 1 / c
        hpoly, P0, P1 = hpoly * inv, P0.scale(inv), P1.scale(inv)
    return Certificate(f, n, Q, result.b, hpoly, P0, P1)
