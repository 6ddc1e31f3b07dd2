"""The ring C[x]<z> of operators in left normal form x^alpha z^beta.

Generators z come in four kinds:

* ``derivation`` i -- acts as d/dx_i, so [d_i, x_i] = 1;
* ``s`` -- the variable s, central except against ``dt``;
* ``dt`` -- d/dt, with [dt, s] = -dt (from s = -dt*t);
* ``central`` -- commutes with everything (the auxiliary variable zeta).

Monomials are flat tuples (alpha + beta) internally; `NCMonomial` is the
public, split view.  Products of monomials are computed with closed forms
(Leibniz for d_i x_i, shift for dt s) and cached per signature.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import comb, perm
from typing import NamedTuple, Sequence

from .arith import ParamPoly, PrimeIdealSpec

DERIVATION = "derivation"
S_VAR = "s"
DT_VAR = "dt"
CENTRAL = "central"


class NCMonomial(NamedTuple):
    alpha: tuple
    beta: tuple

    def flat(self) -> tuple:
        return tuple(self.alpha) + tuple(self.beta)


class AlgebraSignature:
    def __init__(
        self,
        n: int,
        z_kinds: Sequence[tuple],
        m: int = 0,
        x_names: Sequence[str] | None = None,
        z_names: Sequence[str] | None = None,
        y_names: Sequence[str] | None = None,
    ):
        self.n = n
        self.m = m
        self.z_kinds = tuple(tuple(k) for k in z_kinds)
        self.q = len(self.z_kinds)
        self.x_names = tuple(x_names) if x_names else tuple(f"x{i + 1}" for i in range(n))
        self.y_names = tuple(y_names) if y_names else tuple(f"y{i + 1}" for i in range(m))
        if z_names:
            self.z_names = tuple(z_names)
        else:
            names = []
            for k in self.z_kinds:
                if k[0] == DERIVATION:
                    names.append(f"d{self.x_names[k[1]]}")
                elif k[0] == S_VAR:
                    names.append("s")
                elif k[0] == DT_VAR:
                    names.append("dt")
                else:
                    names.append(f"z{len(names) + 1}")
            self.z_names = tuple(names)
        self.deriv_of: dict[int, int] = {}  # z index -> x index
        self.s_index = None
        self.dt_index = None
        for j, k in enumerate(self.z_kinds):
            if k[0] == DERIVATION:
                i = k[1]
                if not 0 <= i < n or i in self.deriv_of.values():
                    raise ValueError(f"bad derivation target {i}")
                self.deriv_of[j] = i
            elif k[0] == S_VAR:
                if self.s_index is not None:
                    raise ValueError("at most one s generator")
                self.s_index = j
            elif k[0] == DT_VAR:
                if self.dt_index is not None:
                    raise ValueError("at most one dt generator")
                self.dt_index = j
            elif k[0] != CENTRAL:
                raise ValueError(f"unknown generator kind {k[0]}")
        self.commutative = not self.deriv_of and (self.s_index is None or self.dt_index is None)
        self._mul_cache: dict = {}
        self.table = self._commutation_table()

    def _commutation_table(self) -> dict:
        """[z_i, z_j] = u + sum v_k z_k as (u, {k: v}) for every ordered pair."""
        table = {}
        for i in range(self.q):
            for j in range(self.q):
                if i == j:
                    continue
                u, v = 0, {}
                if i == self.dt_index and j == self.s_index:
                    v = {self.dt_index: -1}
                elif i == self.s_index and j == self.dt_index:
                    v = {self.dt_index: 1}
                table[(i, j)] = (u, v)
        return table

    def x_bracket(self, j: int, i: int) -> int:
        """[z_j, x_i] as an integer (only derivations act)."""
        return 1 if self.deriv_of.get(j) == i else 0

    @property
    def nvars(self) -> int:
        return self.n + self.q

    def specialized(self) -> "AlgebraSignature":
        """The same algebra with the parameters evaluated away (m = 0)."""
        if self.m == 0:
            return self
        sp = self.__dict__.get("_specialized")
        if sp is None:
            sp = AlgebraSignature(self.n, self.z_kinds, 0, self.x_names, self.z_names)
            self._specialized = sp
        return sp

    def one(self) -> tuple:
        return (0,) * (self.n + self.q)

    def __eq__(self, other):
        return isinstance(other, AlgebraSignature) and (
            self.n, self.m, self.z_kinds, self.x_names, self.z_names
        ) == (other.n, other.m, other.z_kinds, other.x_names, other.z_names)

    def __hash__(self):
        return hash((self.n, self.m, self.z_kinds))

    def __repr__(self):
        return f"AlgebraSignature(x={self.x_names}, z={self.z_names}, y={self.y_names})"

    # ------------------------------------------------------------------
    def mono_mul(self, m1: tuple, m2: tuple) -> tuple:
        key = (m1, m2)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        res = self._mono_mul(m1, m2)
        self._mul_cache[key] = res
        return res

    def _mono_mul(self, m1: tuple, m2: tuple) -> tuple:
        n = self.n
        a1, b1 = m1[:n], m1[n:]
        a2, b2 = m2[:n], m2[n:]
        # move z^b1 past x^a2: only derivations with both exponents > 0 matter
        choices = []
        for j, i in self.deriv_of.items():
            p, q = b1[j], a2[i]
            if p and q:
                choices.append([(j, i, k, comb(p, k) * perm(q, k)) for k in range(min(p, q) + 1)])
        out: dict = {}
        for combo in iproduct(*choices) if choices else [()]:
            coef = 1
            alpha = [x + y for x, y in zip(a1, a2)]
            beta = list(b1)
            for j, i, k, c in combo:
                coef *= c
                alpha[i] -= k
                beta[j] -= k
            for beta2, c2 in self._z_mul(beta, b2):
                mono = tuple(alpha) + beta2
                out[mono] = out.get(mono, 0) + coef * c2
        return tuple((mo, c) for mo, c in out.items() if c)

    def _z_mul(self, b1: list, b2: tuple):
        si, di = self.s_index, self.dt_index
        base = [x + y for x, y in zip(b1, b2)]
        if si is None or di is None:
            return [(tuple(base), 1)]
        if si < di:
            # dt^d (from b1) sits left of s^e (from b2): dt^d s^e = (s-d)^e dt^d
            d, e = b1[di], b2[si]
            if not d or not e:
                return [(tuple(base), 1)]
            res = []
            for j in range(e + 1):
                c = comb(e, j) * (-d) ** (e - j)
                if c:
                    bb = list(base)
                    bb[si] = b1[si] + j
                    res.append((tuple(bb), c))
            return res
        # s^a (from b1) sits left of dt^b (from b2): s^a dt^b = dt^b (s+b)^a
        a, b = b1[si], b2[di]
        if not a or not b:
            return [(tuple(base), 1)]
        res = []
        for j in range(a + 1):
            c = comb(a, j) * b ** (a - j)
            bb = list(base)
            bb[si] = b2[si] + j
            res.append((tuple(bb), c))
        return res


def weyl_signature(n: int, m: int = 0, with_s: bool = True, with_dt: bool = True,
                   n_central: int = 0, x_names=None, y_names=None,
                   central_names=None) -> AlgebraSignature:
    """D_n<s, dt> (or a subring) with derivations first, then s, dt, centrals."""
    kinds = [(DERIVATION, i) for i in range(n)]
    if with_s:
        kinds.append((S_VAR,))
    if with_dt:
        kinds.append((DT_VAR,))
    kinds += [(CENTRAL,)] * n_central
    x_names = tuple(x_names) if x_names else tuple(f"x{i + 1}" for i in range(n))
    names = [f"d{x}" for x in x_names]
    if with_s:
        names.append("s")
    if with_dt:
        names.append("dt")
    names += list(central_names) if central_names else [f"zeta{i or ''}" for i in range(n_central)]
    return AlgebraSignature(n, kinds, m, x_names, names, y_names)


def polynomial_signature(n: int, m: int = 0, extra: Sequence[str] = ("s",), x_names=None,
                         y_names=None) -> AlgebraSignature:
    """Commutative C[x][extra...]; every extra generator is central."""
    kinds = [(S_VAR,) if name == "s" else (CENTRAL,) for name in extra]
    return AlgebraSignature(n, kinds, m, x_names, tuple(extra), y_names)


# ---------------------------------------------------------------------------

class NCOperator:
    """Finite sum of c(y) x^alpha z^beta with ParamPoly coefficients."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: dict | None = None):
        self.sig = sig
        self.terms = terms if terms is not None else {}

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, sig) -> "NCOperator":
        return cls(sig, {})

    @classmethod
    def constant(cls, sig, c) -> "NCOperator":
        c = c if isinstance(c, ParamPoly) else ParamPoly.constant(c, sig.m)
        return cls(sig, {sig.one(): c} if c else {})

    @classmethod
    def monomial(cls, sig, mono, c=1) -> "NCOperator":
        if isinstance(mono, NCMonomial):
            mono = mono.flat()
        c = c if isinstance(c, ParamPoly) else ParamPoly.constant(c, sig.m)
        return cls(sig, {tuple(mono): c} if c else {})

    @classmethod
    def x(cls, sig, i: int) -> "NCOperator":
        e = [0] * sig.nvars
        e[i] = 1
        return cls.monomial(sig, tuple(e))

    @classmethod
    def z(cls, sig, j: int) -> "NCOperator":
        e = [0] * sig.nvars
        e[sig.n + j] = 1
        return cls.monomial(sig, tuple(e))

    @classmethod
    def from_poly(cls, sig, p: ParamPoly) -> "NCOperator":
        """Embed a polynomial in (x_1..x_n, y_1..y_m) as a zeroth-order operator."""
        n, m = sig.n, sig.m
        if p.nvars != n + m:
            raise ValueError("polynomial has the wrong number of variables")
        terms: dict = {}
        zq = (0,) * sig.q
        for e, c in p.terms.items():
            mono = tuple(e[:n]) + zq
            ye = tuple(e[n:])
            coeff = terms.get(mono)
            add = ParamPoly({ye: c}, m)
            terms[mono] = add if coeff is None else coeff + add
        return cls(sig, {k: v for k, v in terms.items() if v})

    # -- basics -------------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def copy(self) -> "NCOperator":
        return NCOperator(self.sig, dict(self.terms))

    def coefficient(self, mono) -> ParamPoly:
        if isinstance(mono, NCMonomial):
            mono = mono.flat()
        return self.terms.get(tuple(mono), ParamPoly.zero(self.sig.m))

    def __add__(self, other: "NCOperator") -> "NCOperator":
        out = dict(self.terms)
        for mo, c in other.terms.items():
            v = out.get(mo)
            if v is None:
                out[mo] = c
            else:
                v = v + c
                if v:
                    out[mo] = v
                else:
                    del out[mo]
        return NCOperator(self.sig, out)

    def __neg__(self) -> "NCOperator":
        return NCOperator(self.sig, {mo: -c for mo, c in self.terms.items()})

    def __sub__(self, other: "NCOperator") -> "NCOperator":
        return self + (-other)

    def scale(self, c) -> "NCOperator":
        if not isinstance(c, ParamPoly):
            c = Fraction(c)
            if not c:
                return NCOperator(self.sig, {})
            if c == 1:
                return self
            return NCOperator(self.sig, {mo: v * c for mo, v in self.terms.items()})
        if c.is_zero():
            return NCOperator(self.sig, {})
        out = {}
        for mo, v in self.terms.items():
            w = v * c
            if w:
                out[mo] = w
        return NCOperator(self.sig, out)

    def lmul(self, mono: tuple, c=None) -> "NCOperator":
        """(c * mono) . self"""
        sig = self.sig
        out: dict = {}
        for mo, v in self.terms.items():
            for mo2, k in sig.mono_mul(mono, mo):
                add = v * k
                cur = out.get(mo2)
                out[mo2] = add if cur is None else cur + add
        res = NCOperator(sig, {k: v for k, v in out.items() if v})
        return res if c is None else res.scale(c)

    def __mul__(self, other):
        if not isinstance(other, NCOperator):
            return self.scale(other)
        if other.sig is not self.sig and other.sig != self.sig:
            raise ValueError("operators live in different algebras")
        sig = self.sig
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c12 = c1 * c2
                for mo, k in sig.mono_mul(m1, m2):
                    add = c12 * k
                    cur = out.get(mo)
                    out[mo] = add if cur is None else cur + add
        return NCOperator(sig, {k: v for k, v in out.items() if v})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "NCOperator":
        out = NCOperator.constant(self.sig, 1)
        for _ in range(k):
            out = out * self
        return out

    def reduce(self, Q: PrimeIdealSpec | None) -> "NCOperator":
        """Drop the parts of coefficients lying in Q (specialisation to C/Q)."""
        if Q is None or Q.is_zero:
            return self
        out = {}
        for mo, c in self.terms.items():
            r = Q.reduce(c)
            if r:
                out[mo] = r
        return NCOperator(self.sig, out)

    def specialize(self, point) -> "NCOperator":
        """Evaluate the coefficients at a rational parameter point."""
        sig0 = self.sig.specialized()
        out = {}
        for mo, c in self.terms.items():
            v = c.evaluate(point)
            if v:
                out[mo] = ParamPoly.constant(v, 0)
        return NCOperator(sig0, out)

    def in_ideal_coefficients(self, Q: PrimeIdealSpec) -> bool:
        return all(Q.contains(c) for c in self.terms.values())

    # -- structure ------------------------------------------------------------
    def support(self) -> list:
        return list(self.terms)

    def x_degree(self) -> int:
        n = self.sig.n
        return max((sum(mo[:n]) for mo in self.terms), default=-1)

    def z_degree(self, positions=None) -> int:
        n = self.sig.n
        pos = range(self.sig.q) if positions is None else positions
        return max((sum(mo[n + j] for j in pos) for mo in self.terms), default=-1)

    def involves_z(self, j: int) -> bool:
        n = self.sig.n
        return any(mo[n + j] for mo in self.terms)

    def y_degree(self) -> int:
        return max((c.total_degree() for c in self.terms.values()), default=-1)

    def rational_content(self) -> Fraction:
        from math import gcd, lcm

        num, den = 0, 1
        for c in self.terms.values():
            for v in c.terms.values():
                num = gcd(num, v.numerator)
                den = lcm(den, v.denominator)
        return Fraction(num, den) if num else Fraction(0)

    def change_signature(self, sig: AlgebraSignature, z_map: Sequence[int | None]) -> "NCOperator":
        """Re-express in `sig`; z_map[j] is the new index of old z_j (None: must be absent)."""
        n = self.sig.n
        if sig.n != n:
            raise ValueError("x variables must agree")
        out = {}
        for mo, c in self.terms.items():
            beta = [0] * sig.q
            for j, e in enumerate(mo[n:]):
                if e:
                    if z_map[j] is None:
                        raise ValueError("operator involves a dropped generator")
                    beta[z_map[j]] = e
            out[tuple(mo[:n]) + tuple(beta)] = c
        return NCOperator(sig, out)

    def format(self) -> str:
        if not self.terms:
            return "0"
        sig = self.sig
        names = sig.x_names + sig.z_names
        parts = []
        for mo in sorted(self.terms, reverse=True):
            c = self.terms[mo]
            mono = "*".join((nm if a == 1 else f"{nm}^{a}") for nm, a in zip(names, mo) if a)
            cs = c.format(sig.y_names)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            elif len(c.terms) == 1:
                parts.append(f"{cs}*{mono}")
            else:
                parts.append(f"({cs})*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self) -> str:
        return f"NCOperator({self.format()})"


def multiply(P: NCOperator, R: NCOperator) -> NCOperator:
    return P * R


# ---------------------------------------------------------------------------

class OrderSpec:
    """The order <_L: L(beta), then |beta|, then smaller |alpha| wins, then
    the reverse of lexicographic order on (alpha, beta) as a final tie-break.

    Local in x, global in z.  `key` maps a flat monomial to a tuple that is
    larger exactly when the monomial is larger.

    With local=False the x-part is global as well: L(beta), then total
    degree, then lexicographic.  That is a well-order, so reductions are
    plain Buchberger reductions.
    """

    __slots__ = ("n", "L", "local", "_keys")

    def __init__(self, n: int, L: Sequence[int], local: bool = True):
        if any(w < 0 for w in L):
            raise ValueError("weights must be non-negative")
        self.n = n
        self.L = tuple(int(w) for w in L)
        self.local = bool(local)
        self._keys: dict = {}

    def key(self, mono: tuple) -> tuple:
        k = self._keys.get(mono)
        if k is None:
            n = self.n
            beta = mono[n:]
            weight = sum(w * b for w, b in zip(self.L, beta))
            if self.local:
                k = (weight, sum(beta), -sum(mono[:n]), tuple(-e for e in mono))
            else:
                k = (weight, sum(mono), 0, mono)
            self._keys[mono] = k
        return k

    def restricted(self, keep: Sequence[int]) -> "OrderSpec":
        return OrderSpec(self.n, [self.L[j] for j in keep], self.local)

    def __eq__(self, other):
        return isinstance(other, OrderSpec) and (self.n, self.L, self.local) == (other.n, other.L, other.local)

    def __hash__(self):
        return hash((self.n, self.L, self.local))

    def __repr__(self):
        tail = "" if self.local else ", local=False"
        return f"OrderSpec(n={self.n}, L={self.L}{tail})"


def elimination_order(sig: AlgebraSignature, drop: Sequence[int], local: bool = True) -> OrderSpec:
    drop = set(drop)
    return OrderSpec(sig.n, [1 if j in drop else 0 for j in range(sig.q)], local)


def _flat(m) -> tuple:
    return m.flat() if isinstance(m, NCMonomial) else tuple(m)


def compare(m1, m2, ord: OrderSpec) -> int:
    """-1 if m1 < m2, 0 if equal, 1 if m1 > m2."""
    k1, k2 = ord.key(_flat(m1)), ord.key(_flat(m2))
    return (k1 > k2) - (k1 < k2)


def split(mono: tuple, n: int) -> NCMonomial:
    return NCMonomial(tuple(mono[:n]), tuple(mono[n:]))


def lead(P: NCOperator, ord: OrderSpec) -> tuple:
    mono = max(P.terms, key=ord.key)
    return mono, P.terms[mono]


def privileged_exponent(P: NCOperator, ord: OrderSpec) -> tuple[NCMonomial, ParamPoly]:
    if P.is_zero():
        raise ValueError("the zero operator has no privileged exponent")
    mono, c = lead(P, ord)
    return split(mono, P.sig.n), c


def privileged_exponent_mod_Q(P: NCOperator, ord: OrderSpec, Q: PrimeIdealSpec):
    """Privileged exponent and coefficient of (P)_Q, or None if P has all
    coefficients in Q."""
    R = P.reduce(Q)
    if R.is_zero():
        return None
    mono, c = lead(R, ord)
    return split(mono, P.sig.n), c
