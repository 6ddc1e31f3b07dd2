"""Division by a finite family of operators for the orders <_L.

The orders are global in z but local in x, so plain reduction need not
terminate.  `weak_normal_form` is Mora's tangent-cone reduction: among the
divisors whose privileged exponent divides that of the current operator it
picks one of least ecart, and an intermediate operator joins the divisor
pool whenever the chosen divisor has larger ecart.  The result is a weak
normal form: only the privileged exponent of the remainder is guaranteed to
avoid the staircase, and the identity holds up to a multiplier u(x) whose
value at x = 0 lies outside Q.

Reduction is fraction free when the divisor's privileged coefficient is not
a constant, so the multiplier's constant term collects those coefficients.
With a global order (`DivisionConfig(order="global")`) no intermediate
operators are added and this is ordinary reduction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from .arith import ParamPoly, PrimeIdealSpec
from .errors import InternalInconsistency, ResourceError
from .ncalg import NCMonomial, NCOperator, OrderSpec, lead

DEFAULT_STEP_BUDGET = 10**6

_checks = {"enabled": os.environ.get("BSFAMILY_CHECK", "") not in ("", "0")}


def set_invariant_checks(flag: bool) -> bool:
    """Re-verify every division and every standard basis; returns the old value.

    Also switched on by BSFAMILY_CHECK=1.  Untracked reductions are redone
    with cofactors, which can be slow for the local order.
    """
    old = _checks["enabled"]
    _checks["enabled"] = bool(flag)
    return old


def invariant_checks_enabled() -> bool:
    return _checks["enabled"]


def default_step_budget() -> int:
    env = os.environ.get("BSFAMILY_STEP_BUDGET")
    return int(env) if env else DEFAULT_STEP_BUDGET


@dataclass
class DivisionConfig:
    step_budget: int = field(default_factory=default_step_budget)
    # "total": degree in x and z (tangent cone of the homogenised ring); "x": x-degree only
    ecart: str = "total"
    # "local": the local order in x; "global": a degree order, same b-function, often much faster
    order: str = "local"

    def __post_init__(self):
        if self.ecart not in ("total", "x"):
            raise ValueError(f"unknown ecart mode {self.ecart!r}")
        if self.order not in ("local", "global"):
            raise ValueError(f"unknown order {self.order!r}")


# ---------------------------------------------------------------------------
# staircases

def divides(a: tuple, b: tuple) -> bool:
    return all(i <= j for i, j in zip(a, b))


def delta_index(mono, exps: Sequence) -> int | None:
    """Index j with mono in Delta_j, or None when mono lies in the complement."""
    mono = mono.flat() if isinstance(mono, NCMonomial) else tuple(mono)
    for j, e in enumerate(exps):
        e = e.flat() if isinstance(e, NCMonomial) else tuple(e)
        if divides(e, mono):
            return j
    return None


@dataclass(frozen=True)
class Partition:
    """N^{n+q} = Delta_1 u ... u Delta_r u complement, from divisor exponents."""

    exps: tuple

    def index(self, mono) -> int | None:
        return delta_index(mono, self.exps)

    def in_complement(self, mono) -> bool:
        return self.index(mono) is None

    def complement_points(self, bound: int) -> list:
        """Complement points with every coordinate < bound (for inspection)."""
        from itertools import product

        k = len(self.exps[0]) if self.exps else 0
        if not self.exps:
            raise ValueError("the complement of an empty family is everything")
        return [p for p in product(range(bound), repeat=k) if self.in_complement(p)]


def partition(exps: Sequence) -> Partition:
    return Partition(tuple(e.flat() if isinstance(e, NCMonomial) else tuple(e) for e in exps))


# ---------------------------------------------------------------------------

class _Item:
    __slots__ = ("op", "lead", "cp", "ecart", "rep")

    def __init__(self, op, lead, cp, ecart, rep):
        self.op, self.lead, self.cp, self.ecart, self.rep = op, lead, cp, ecart, rep


def _ecart(op: NCOperator, lead_mono: tuple, mode: str) -> int:
    if mode == "x":
        n = op.sig.n
        return max(sum(m[:n]) for m in op.terms) - sum(lead_mono[:n])
    return max(sum(m) for m in op.terms) - sum(lead_mono)


def _normalise(op: NCOperator, rep, Q=None):
    c = op.rational_content()
    if c and c != 1:
        inv = 1 / c
        op = op.scale(inv)
        if rep is not None:
            rep = tuple(r.scale(inv) for r in rep)
    if rep is not None:
        op, rep = _strip_monomial_content(op, rep, Q)
    return op, rep


def _strip_monomial_content(op: NCOperator, rep, Q):
    """Divide op and its cofactors by their common parameter monomial.

    Only with cofactors: then the quotient is again a combination of the
    family with polynomial coefficients.  Variables lying in Q are kept.
    """
    m = op.sig.m
    if not m:
        return op, rep
    low = None
    for P in (op,) + tuple(rep):
        for c in P.terms.values():
            for e in c.terms:
                low = list(e) if low is None else [min(a, b) for a, b in zip(low, e)]
                if not any(low):
                    return op, rep
    if low is None:
        return op, rep
    if Q is not None and not Q.is_zero:
        low = [0 if k and Q.contains(ParamPoly.var(i, m)) else k for i, k in enumerate(low)]
    if not any(low):
        return op, rep
    return _shift_down(op, low), tuple(_shift_down(r, low) for r in rep)


def _shift_down(P: NCOperator, low) -> NCOperator:
    m = len(low)
    out = {}
    for mo, c in P.terms.items():
        out[mo] = ParamPoly({tuple(a - b for a, b in zip(e, low)): v for e, v in c.terms.items()}, m)
    return NCOperator(P.sig, out)


def _reduce_rep(rep, Q):
    if rep is None or Q is None or Q.is_zero:
        return rep
    return tuple(r.reduce(Q) for r in rep)


def mora_reduce(
    P: NCOperator,
    divisors: Sequence[NCOperator],
    ord: OrderSpec,
    Q: PrimeIdealSpec | None = None,
    reps: Sequence | None = None,
    p_rep=None,
    config: DivisionConfig | None = None,
    stats: dict | None = None,
):
    """Core reduction loop.

    `reps[j]` is a vector of operators representing divisor j in some fixed
    family, `p_rep` the one for P; the returned vector represents the
    remainder in the same family (linear operations are mirrored).  Returns
    (remainder, remainder_rep).
    """
    cfg = config or DivisionConfig()
    track = reps is not None
    h = P.reduce(Q)
    rep_h = _reduce_rep(p_rep, Q) if track else None
    items: list[_Item] = []
    for j, g in enumerate(divisors):
        g_red = g.reduce(Q)
        if g_red.is_zero():
            raise ValueError(f"divisor {j} lies in R(Q)")
        lm, lc = lead(g_red, ord)
        items.append(_Item(g_red, lm, lc, _ecart(g_red, lm, cfg.ecart),
                           _reduce_rep(reps[j], Q) if track else None))
    steps = 0
    key = ord.key
    while h.terms:
        hl, hc = lead(h, ord)
        best = None
        for it in items:
            if (best is None or it.ecart < best.ecart) and divides(it.lead, hl):
                best = it
                if it.ecart == 0:
                    break
        if best is None:
            break
        steps += 1
        if steps > cfg.step_budget:
            raise ResourceError(f"division exceeded the step budget of {cfg.step_budget}")
        he = _ecart(h, hl, cfg.ecart)
        if ord.local and best.ecart > he:
            items.append(_Item(h, hl, hc, he, rep_h))
        m = tuple(a - b for a, b in zip(hl, best.lead))
        if best.cp.is_constant():
            c = hc * (1 / best.cp.constant_term())
            h = h - best.op.lmul(m, c)
            if track:
                rep_h = tuple(r - rg.lmul(m, c) for r, rg in zip(rep_h, best.rep))
        else:
            h = h.scale(best.cp) - best.op.lmul(m, hc)
            if track:
                rep_h = tuple(r.scale(best.cp) - rg.lmul(m, hc) for r, rg in zip(rep_h, best.rep))
        if Q is not None and not Q.is_zero:
            h = h.reduce(Q)
            rep_h = _reduce_rep(rep_h, Q)
        h, rep_h = _normalise(h, rep_h, Q)
        if h.terms and not key(lead(h, ord)[0]) < key(hl):
            raise InternalInconsistency("reduction step did not lower the privileged exponent")
    if stats is not None:
        stats["steps"] = stats.get("steps", 0) + steps
    if _checks["enabled"] and not track:
        # redo it with cofactors; divide_mod_Q re-verifies identity and support
        res = divide_mod_Q(P, divisors, ord, Q, config)
        if res.remainder.is_zero() != h.is_zero():
            raise InternalInconsistency("tracked and untracked reductions disagree")
    return h, rep_h


def weak_normal_form(P, divisors, ord, Q=None, config=None) -> NCOperator:
    return mora_reduce(P, divisors, ord, Q, config=config)[0]


# ---------------------------------------------------------------------------

@dataclass
class DivisionResult:
    """multiplier * P = sum quotients[j] * divisors[j] + remainder + q_part.

    `multiplier` is an operator in x only whose constant term `denominator`
    lies outside Q; `q_part` has all coefficients in Q.
    """

    quotients: list
    remainder: NCOperator
    q_part: NCOperator
    multiplier: NCOperator
    steps: int = 0

    @property
    def denominator(self) -> ParamPoly:
        return self.multiplier.coefficient(self.multiplier.sig.one())


def _unit(sig, k: int, j: int):
    return tuple(NCOperator.constant(sig, 1) if i == j else NCOperator.zero(sig) for i in range(k))


def divide_mod_Q(
    P: NCOperator,
    divisors: Sequence[NCOperator],
    ord: OrderSpec,
    Q: PrimeIdealSpec | None,
    config: DivisionConfig | None = None,
) -> DivisionResult:
    sig = P.sig
    r = len(divisors)
    reps = [_unit(sig, r + 1, j + 1) for j in range(r)]
    stats: dict = {}
    R, rep = mora_reduce(P, divisors, ord, Q, reps, _unit(sig, r + 1, 0), config, stats)
    # R = u P + sum q_j g_j (mod Q)
    u = rep[0]
    quotients = [-q for q in rep[1:]]
    T = u * P
    for q, g in zip(quotients, divisors):
        T = T - q * g
    T = T - R
    res = DivisionResult(quotients, R, T, u, stats.get("steps", 0))
    if _checks["enabled"]:
        problems = check_division(P, divisors, ord, Q, res)
        if problems:
            raise InternalInconsistency("; ".join(problems))
    return res


def divide(P, divisors, ord, config=None) -> DivisionResult:
    return divide_mod_Q(P, divisors, ord, None, config)


def check_division(P, divisors, ord, Q, res: DivisionResult) -> list[str]:
    """Independent re-verification of a DivisionResult; returns the failures."""
    problems = []
    n = P.sig.n
    Qz = Q if Q is not None else PrimeIdealSpec.zero(P.sig.m)
    rhs = res.remainder + res.q_part
    for q, g in zip(res.quotients, divisors):
        rhs = rhs + q * g
    if res.multiplier * P != rhs:
        problems.append("division identity fails")
    if not res.q_part.reduce(Qz).is_zero():
        problems.append("q_part has a coefficient outside Q")
    if any(any(mo[n:]) for mo in res.multiplier.terms):
        problems.append("multiplier involves z")
    if Qz.contains(res.denominator):
        problems.append("multiplier is not a unit modulo Q")
    exps = [lead(g.reduce(Qz), ord)[0] for g in divisors]
    R = res.remainder.reduce(Qz)
    if R.terms and delta_index(lead(R, ord)[0], exps) is not None:
        problems.append("privileged exponent of the remainder lies in the staircase")
    Pr = P.reduce(Qz)
    if Pr.terms:
        top = ord.key(lead(Pr, ord)[0])
        for q, g in zip(res.quotients, divisors):
            qg = (q * g).reduce(Qz)
            if qg.terms and ord.key(lead(qg, ord)[0]) > top:
                problems.append("a quotient term exceeds the privileged exponent of P")
        if R.terms and ord.key(lead(R, ord)[0]) > top:
            problems.append("remainder exceeds the privileged exponent of P")
    return problems


def strictly_positive_weights(L: Sequence[int], exps: Sequence) -> tuple:
    """Weights L' > 0 inducing the same order as L on monomials whose z-degree
    is at most that of the given exponents' bound (the lemma used to reduce
    division to strictly positive forms)."""
    bound = 1 + max((sum(e.beta) for e in exps), default=0)
    return tuple(bound * w + 1 for w in L)
