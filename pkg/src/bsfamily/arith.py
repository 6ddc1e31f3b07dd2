"""Exact coefficient arithmetic.

`ParamPoly` is a sparse multivariate polynomial over the rationals.  It is
used for the parameter ring C = Q[y] and, with more variables, for plain
polynomials in (x, y).  `PrimeIdealSpec` holds a prime ideal of C together
with a degree-reverse-lexicographic Groebner basis used for normal forms.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

import sympy

Rational = Fraction


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


def grevlex_key(e: tuple) -> tuple:
    # bigger key == bigger monomial
    return (sum(e), tuple(-a for a in reversed(e)))


class ParamPoly:
    """Sparse polynomial: map from exponent tuples to nonzero Fractions."""

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: dict | None = None, nvars: int = 0):
        self.terms = terms if terms is not None else {}
        self.nvars = nvars
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def from_dict(cls, terms: dict, nvars: int) -> "ParamPoly":
        clean = {}
        for e, c in terms.items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = _frac(c)
            if c:
                clean[tuple(e)] = c
        return cls(clean, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "ParamPoly":
        c = _frac(c)
        return cls({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def zero(cls, nvars: int) -> "ParamPoly":
        return cls({}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "ParamPoly":
        return cls({(0,) * nvars: Fraction(1)}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "ParamPoly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): Fraction(1)}, nvars)

    # -- predicates ---------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other) -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            other = ParamPoly.constant(other, self.nvars)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return ParamPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "ParamPoly":
        return ParamPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other) -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            other = ParamPoly.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other) -> "ParamPoly":
        return (-self) + other

    def __mul__(self, other) -> "ParamPoly":
        if not isinstance(other, ParamPoly):
            c = _frac(other)
            if not c:
                return ParamPoly({}, self.nvars)
            return ParamPoly({e: v * c for e, v in self.terms.items()}, self.nvars)
        if not self.terms or not other.terms:
            return ParamPoly({}, self.nvars)
        a, b = self.terms, other.terms
        if len(a) == 1 and (0,) * self.nvars in a:
            c = a[(0,) * self.nvars]
            return ParamPoly({e: v * c for e, v in b.items()}, self.nvars)
        if len(b) == 1 and (0,) * self.nvars in b:
            c = b[(0,) * self.nvars]
            return ParamPoly({e: v * c for e, v in a.items()}, self.nvars)
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return ParamPoly({e: c for e, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ParamPoly":
        out = ParamPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamPoly):
            return self.terms == other.terms
        try:
            return self.terms == ParamPoly.constant(other, self.nvars).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- evaluation and calculus ----------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for a, p in zip(e, point):
                if a:
                    v *= _frac(p) ** a
            total += v
        return total

    def substitute(self, values: dict) -> "ParamPoly":
        """Substitute rational values for some variables (kept in the tuple)."""
        out: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, v in values.items():
                if e2[i]:
                    c = c * _frac(v) ** e2[i]
                    e2[i] = 0
            if not c:
                continue
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + c
        return ParamPoly({e: c for e, c in out.items() if c}, self.nvars)

    def derivative(self, i: int) -> "ParamPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return ParamPoly(out, self.nvars)

    def project(self, keep: Sequence[int]) -> "ParamPoly":
        """Reindex onto the variables `keep`; the others must not occur."""
        keep = list(keep)
        out = {}
        keep_set = set(keep)
        for e, c in self.terms.items():
            if any(a for i, a in enumerate(e) if i not in keep_set):
                raise ValueError("polynomial involves a dropped variable")
            out[tuple(e[i] for i in keep)] = c
        return ParamPoly(out, len(keep))

    def embed(self, positions: Sequence[int], nvars: int) -> "ParamPoly":
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * nvars
            for a, p in zip(e, positions):
                e2[p] = a
            out[tuple(e2)] = c
        return ParamPoly(out, nvars)

    # -- normalisation --------------------------------------------------
    def rational_content(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        lead = self.terms[max(self.terms, key=grevlex_key)]
        sign = -1 if lead < 0 else 1
        return Fraction(sign * num, den)

    def leading_term(self):
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    # -- display ----------------------------------------------------------
    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"y{i + 1}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (n if a == 1 else f"{n}^{a}") for n, a in zip(names, e) if a
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"ParamPoly({self.format()})"


# ---------------------------------------------------------------------------
# sympy bridge (used for Groebner bases of Q and for factorisation)

def _symbols(nvars: int):
    return sympy.symbols(f"_y0:{nvars}") if nvars else ()


def to_sympy(p: ParamPoly, gens=None):
    gens = gens if gens is not None else _symbols(p.nvars)
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for g, a in zip(gens, e):
            t *= g**a
        expr += t
    return expr


def from_sympy(expr, gens, nvars: int) -> ParamPoly:
    if not gens:
        return ParamPoly.constant(Fraction(str(sympy.nsimplify(expr))), 0)
    poly = sympy.Poly(expr, *gens, domain="QQ")
    out = {}
    for e, c in poly.terms():
        out[tuple(int(a) for a in e)] = Fraction(int(c.numerator), int(c.denominator))
    return ParamPoly.from_dict(out, nvars)


def factor_irreducible(p: ParamPoly) -> list[tuple[ParamPoly, int]]:
    """Irreducible factors over Q (constants dropped), with multiplicities."""
    return list(_factor_cached(p))


@lru_cache(maxsize=4096)
def _factor_cached(p: ParamPoly) -> tuple:
    if p.is_constant():
        return ()
    gens = _symbols(p.nvars)
    _, factors = sympy.factor_list(to_sympy(p, gens), *gens)
    out = []
    for fac, mult in factors:
        q = from_sympy(fac, gens, p.nvars)
        q = q * (1 / q.rational_content())
        out.append((q, int(mult)))
    out.sort(key=lambda t: (t[0].total_degree(), t[0].format()))
    return tuple(out)


def radical_factors(polys: Iterable[ParamPoly]) -> list[ParamPoly]:
    """Distinct irreducible factors of the given nonzero polynomials."""
    seen: dict = {}
    for p in polys:
        if p.is_zero():
            raise ValueError("zero has no radical factorisation")
        for q, _ in factor_irreducible(p):
            seen.setdefault(q, None)
    return sorted(seen, key=lambda q: (q.total_degree(), q.format()))


def radical_product(polys: Iterable[ParamPoly], nvars: int) -> ParamPoly:
    """Product of the distinct irreducible factors: same zero set as the product."""
    out = ParamPoly.one(nvars)
    for q in radical_factors(polys):
        out = out * q
    return out


# ---------------------------------------------------------------------------

class PrimeIdealSpec:
    """Prime ideal Q of Q[y_1..y_m]; an empty generator list means Q = (0).

    Primality is trusted, not checked.  Non-prime input voids the genericity
    guarantees of everything built on top.
    """

    def __init__(self, generators: Iterable[ParamPoly] = (), nvars: int = 0):
        gens = [g for g in generators if not g.is_zero()]
        for g in gens:
            if g.nvars != nvars:
                raise ValueError("generator lives in the wrong parameter ring")
        self.generators = gens
        self.nvars = nvars
        self._cache: dict = {}
        if not gens:
            self.reduction_basis = []
        else:
            syms = _symbols(nvars)
            if not syms:
                raise ValueError("a nonzero constant generates the unit ideal")
            gb = sympy.groebner([to_sympy(g, syms) for g in gens], *syms, order="grevlex")
            basis = [from_sympy(g, syms, nvars) for g in gb.exprs]
            if any(b.is_constant() for b in basis):
                raise ValueError("Q is the unit ideal")
            self.reduction_basis = []
            for b in basis:
                e, c = b.leading_term()
                self.reduction_basis.append((e, b * (1 / c)))

    @classmethod
    def zero(cls, nvars: int) -> "PrimeIdealSpec":
        return cls((), nvars)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def _reduce_monomial(self, e: tuple) -> dict:
        hit = self._cache.get(e)
        if hit is not None:
            return hit
        rem: dict = {}
        work = {e: Fraction(1)}
        while work:
            m = max(work, key=grevlex_key)
            c = work.pop(m)
            for le, g in self.reduction_basis:
                if all(a >= b for a, b in zip(m, le)):
                    shift = tuple(a - b for a, b in zip(m, le))
                    for ge, gc in g.terms.items():
                        if ge == le:
                            continue
                        t = tuple(a + b for a, b in zip(ge, shift))
                        v = work.get(t, 0) - c * gc
                        if v:
                            work[t] = v
                        else:
                            work.pop(t, None)
                    break
            else:
                rem[m] = c
        self._cache[e] = rem
        return rem

    def reduce(self, p: ParamPoly) -> ParamPoly:
        if not self.generators or not p.terms:
            return p
        out: dict = {}
        changed = False
        for e, c in p.terms.items():
            r = self._reduce_monomial(e)
            if len(r) == 1 and e in r:
                out[e] = out.get(e, 0) + c
                continue
            changed = True
            for e2, c2 in r.items():
                out[e2] = out.get(e2, 0) + c * c2
        if not changed:
            return p
        return ParamPoly({e: c for e, c in out.items() if c}, p.nvars)

    def contains(self, p: ParamPoly) -> bool:
        return self.reduce(p).is_zero()

    def point_in_variety(self, point: Sequence) -> bool:
        return all(g.evaluate(point) == 0 for g in self.generators)

    def format(self, names=None) -> str:
        if not self.generators:
            return "(0)"
        return "(" + ", ".join(g.format(names) for g in self.generators) + ")"

    def __repr__(self) -> str:
        return f"PrimeIdealSpec{self.format()}"


def reduce_mod_prime(p: ParamPoly, Q: PrimeIdealSpec) -> ParamPoly:
    """Normal form of p modulo Q; zero exactly when p lies in Q."""
    return Q.reduce(p)


def not_in_Q(p: ParamPoly, Q: PrimeIdealSpec) -> bool:
    return not Q.reduce(p).is_zero()


class LocalizedCoeff:
    """numerator / denominator with the denominator outside Q."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: ParamPoly, denominator: ParamPoly, Q: PrimeIdealSpec):
        if Q.contains(denominator):
            raise ValueError("denominator lies in Q")
        self.numerator = numerator
        self.denominator = denominator

    def specialize(self, point: Sequence) -> Fraction:
        d = self.denominator.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.numerator.evaluate(point) / d


# ---------------------------------------------------------------------------
# univariate polynomials over Q as coefficient lists, lowest degree first

def upoly_trim(u: list) -> list:
    u = [_frac(c) for c in u]
    while u and u[-1] == 0:
        u.pop()
    return u


def upoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return upoly_trim(out)


def upoly_divmod(a: list, b: list) -> tuple[list, list]:
    a = upoly_trim(a)
    b = upoly_trim(b)
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / b[-1]
        q[k] = c
        for i, bc in enumerate(b):
            r[i + k] -= c * bc
        r = upoly_trim(r)
    return upoly_trim(q), r


def upoly_monic(a: list) -> list:
    a = upoly_trim(a)
    return [c / a[-1] for c in a] if a else a


def upoly_gcd(a: list, b: list) -> list:
    a, b = upoly_trim(a), upoly_trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    return upoly_monic(a)


def upoly_eval(a: list, x) -> Fraction:
    v = Fraction(0)
    for c in reversed(a):
        v = v * x + c
    return v


def upoly_from_roots(roots: Iterable[tuple[Fraction, int]]) -> list:
    out = [Fraction(1)]
    for r, mult in roots:
        for _ in range(mult):
            out = upoly_mul(out, [-_frac(r), Fraction(1)])
    return out


def upoly_format(a: list, var: str = "s") -> str:
    a = upoly_trim(a)
    if not a:
        return "0"
    p = ParamPoly({(i,): c for i, c in enumerate(a) if c}, 1)
    return p.format([var])


def rational_roots(u: list) -> tuple[list[tuple[Fraction, int]], list]:
    """Rational roots of u with multiplicities, and the monic rootless residual.

    u == lc(u) * residual * prod (s - r)^mult exactly.
    """
    u = upoly_trim(u)
    if not u:
        raise ValueError("zero polynomial has no finite root multiset")
    roots: list[tuple[Fraction, int]] = []
    work = upoly_monic(u)
    k = 0
    while work and work[0] == 0:
        work = work[1:]
        k += 1
    if k:
        roots.append((Fraction(0), k))
    while len(work) > 1:
        den = 1
        for c in work:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in work]
        a0, an = abs(ints[0]), abs(ints[-1])
        found = None
        for p in sympy.divisors(a0):
            for q in sympy.divisors(an):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if upoly_eval(work, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        mult = 0
        while len(work) > 1 and upoly_eval(work, found) == 0:
            work = upoly_divmod(work, [-found, Fraction(1)])[0]
            mult += 1
        roots.append((found, mult))
    roots.sort(key=lambda t: t[0])
    return roots, upoly_monic(work)
