"""Standard bases of left ideals for the orders <_L, generic over V(Q).

Buchberger's algorithm with Mora's weak normal form.  Pairs are taken by
sugar (the total degree an S-operator would have if nothing cancelled),
ties broken by the order on the lcm.  Coefficients are kept reduced modulo Q throughout, so the
result is a generic standard basis: it specialises to a standard basis at
every prime containing Q that avoids the product h of the privileged
coefficients.  With tracking on, every element carries a vector of
cofactors expressing it (modulo Q) in terms of the input generators.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .arith import ParamPoly, PrimeIdealSpec
from .division import DivisionConfig, divides, invariant_checks_enabled, mora_reduce
from .errors import InternalInconsistency, ResourceError
from .ncalg import AlgebraSignature, NCOperator, OrderSpec, elimination_order, lead


@dataclass
class GenericBasis:
    elements: list
    h: ParamPoly
    order: OrderSpec
    Q: PrimeIdealSpec
    reps: list | None = None
    stats: dict = field(default_factory=dict)

    @property
    def leads(self) -> list:
        return [lead(g, self.order)[0] for g in self.elements]

    @property
    def cps(self) -> list:
        return [lead(g, self.order)[1] for g in self.elements]

    def staircase(self) -> list:
        """Minimal generators of the monoid ideal spanned by the privileged exponents."""
        exps = sorted(set(self.leads), key=lambda e: (sum(e), e))
        out = []
        for e in exps:
            if not any(divides(g, e) for g in out):
                out.append(e)
        return sorted(out)


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(i, j) for i, j in zip(a, b))


def s_operator(P: NCOperator, P2: NCOperator, ord: OrderSpec, Q: PrimeIdealSpec | None = None):
    """cp(P2) m P - cp(P) m2 P2, the privileged data taken modulo Q."""
    return _s_with_reps(P, P2, ord, Q, None, None)[0]


def _s_with_reps(P, P2, ord, Q, rep1, rep2):
    A = P.reduce(Q)
    B = P2.reduce(Q)
    if A.is_zero() or B.is_zero():
        raise ValueError("S-operator of an element of R(Q)")
    e1, c1 = lead(A, ord)
    e2, c2 = lead(B, ord)
    mu = _lcm(e1, e2)
    m1 = tuple(a - b for a, b in zip(mu, e1))
    m2 = tuple(a - b for a, b in zip(mu, e2))
    if c1.is_constant() and c2.is_constant():
        k1 = ParamPoly.constant(1 / c1.constant_term(), c1.nvars)
        k2 = ParamPoly.constant(1 / c2.constant_term(), c2.nvars)
    else:
        k1, k2 = c2, c1
    S = (A.lmul(m1, k1) - B.lmul(m2, k2)).reduce(Q)
    rep = None
    if rep1 is not None:
        rep = tuple((r1.lmul(m1, k1) - r2.lmul(m2, k2)).reduce(Q) for r1, r2 in zip(rep1, rep2))
    return S, rep


def generic_standard_basis(
    generators: Sequence[NCOperator],
    ord: OrderSpec,
    Q: PrimeIdealSpec | None = None,
    config: DivisionConfig | None = None,
    track: bool = False,
) -> GenericBasis:
    gens = list(generators)
    if not gens:
        raise ValueError("no generators")
    sig = gens[0].sig
    Q = Q if Q is not None else PrimeIdealSpec.zero(sig.m)
    cfg = config or DivisionConfig()
    r0 = len(gens)
    G: list[NCOperator] = []
    R: list = []
    leads: list = []
    stats = {"pairs": 0, "zero": 0, "skipped": 0, "steps": 0}
    pending: list = []
    done: set = set()

    sugar: list = []

    def add(g, rep):
        k = len(G)
        G.append(g)
        R.append(rep)
        e = lead(g, ord)[0]
        leads.append(e)
        sugar.append(max(sum(mo) for mo in g.terms))
        for i in range(k):
            mu = _lcm(leads[i], e)
            sug = max(sugar[i] + sum(mu) - sum(leads[i]), sugar[k] + sum(mu) - sum(e))
            heapq.heappush(pending, (sug, ord.key(mu), k, i))

    for j, g in enumerate(gens):
        rep = None
        if track:
            rep = tuple(NCOperator.constant(sig, 1) if i == j else NCOperator.zero(sig) for i in range(r0))
        g_red = g.reduce(Q)
        if g_red.is_zero():
            continue
        # reduce the new generator against the previous ones (keeps bases small)
        g_red, rep = mora_reduce(g_red, G, ord, Q, R if track else None, rep, cfg, stats)
        if g_red.is_zero():
            continue
        add(g_red, rep)
    if not G:
        raise ValueError("all generators lie in R(Q)")

    while pending:
        _, _, j, i = heapq.heappop(pending)
        done.add((i, j))
        mu = _lcm(leads[i], leads[j])
        if _chain_skip(i, j, mu, leads, done):
            stats["skipped"] += 1
            continue
        stats["pairs"] += 1
        if stats["steps"] > cfg.step_budget:
            raise ResourceError(f"standard basis exceeded the step budget of {cfg.step_budget}")
        S, rep = _s_with_reps(G[i], G[j], ord, Q, R[i] if track else None, R[j] if track else None)
        if S.is_zero():
            stats["zero"] += 1
            continue
        h, rep = mora_reduce(S, G, ord, Q, R if track else None, rep, cfg, stats)
        if h.is_zero():
            stats["zero"] += 1
            continue
        add(h, rep)

    hprod = ParamPoly.one(sig.m)
    for g in G:
        hprod = Q.reduce(hprod * lead(g, ord)[1])
    if invariant_checks_enabled():
        bad = buchberger_check(G, ord, Q, cfg)
        if bad:
            raise InternalInconsistency(f"S-operators of pairs {bad} do not reduce to zero")
    return GenericBasis(G, hprod, ord, Q, R if track else None, stats)


def _chain_skip(i, j, mu, leads, done) -> bool:
    for k, e in enumerate(leads):
        if k in (i, j) or not divides(e, mu):
            continue
        if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
            return True
    return False


def standard_basis(generators, ord, config=None) -> list:
    return generic_standard_basis(generators, ord, None, config).elements


def buchberger_check(G: Sequence[NCOperator], ord: OrderSpec, Q=None, config=None) -> list:
    """Pairs (i, j) whose S-operator does not reduce to zero modulo Q."""
    bad = []
    G = list(G)
    for j in range(len(G)):
        for i in range(j):
            S = s_operator(G[i], G[j], ord, Q)
            if S.is_zero():
                continue
            if not mora_reduce(S, G, ord, Q, config=config)[0].is_zero():
                bad.append((i, j))
    return bad


def in_ideal(P: NCOperator, basis: GenericBasis, config=None) -> bool:
    return mora_reduce(P, basis.elements, basis.order, basis.Q, config=config)[0].is_zero()


# ---------------------------------------------------------------------------

def subsignature(sig: AlgebraSignature, keep: Sequence[int]) -> AlgebraSignature:
    keep = list(keep)
    return AlgebraSignature(
        sig.n,
        [sig.z_kinds[j] for j in keep],
        sig.m,
        sig.x_names,
        [sig.z_names[j] for j in keep],
        sig.y_names,
    )


@dataclass
class Elimination:
    basis: GenericBasis          # over the smaller signature
    full: GenericBasis           # the basis the subset was taken from
    signature: AlgebraSignature
    kept_indices: list           # positions in full.elements


def eliminate(
    generators: Sequence[NCOperator],
    drop: Sequence[int],
    Q: PrimeIdealSpec | None = None,
    config: DivisionConfig | None = None,
    track: bool = False,
) -> Elimination:
    gens = list(generators)
    sig = gens[0].sig
    Q = Q if Q is not None else PrimeIdealSpec.zero(sig.m)
    drop = sorted(set(drop))
    local = (config or DivisionConfig()).order == "local"
    ord = elimination_order(sig, drop, local)
    full = generic_standard_basis(gens, ord, Q, config, track)
    keep = [j for j in range(sig.q) if j not in drop]
    small = subsignature(sig, keep)
    z_map = [None] * sig.q
    for new, old in enumerate(keep):
        z_map[old] = new
    n = sig.n
    elements, reps, idx = [], [], []
    for k, g in enumerate(full.elements):
        e = lead(g, ord)[0]
        if any(e[n + j] for j in drop):
            continue
        # elements are already reduced mod Q, and the weight on dropped
        # variables comes first, so no term involves them any more
        elements.append(g.reduce(Q).change_signature(small, z_map))
        idx.append(k)
        if track:
            reps.append(full.reps[k])
    small_ord = ord.restricted(keep)
    h = ParamPoly.one(sig.m)
    for g in elements:
        h = Q.reduce(h * lead(g, small_ord)[1])
    basis = GenericBasis(elements, h, small_ord, Q, reps if track else None, full.stats)
    return Elimination(basis, full, small, idx)
