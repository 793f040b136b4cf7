"""Grassmann algebra on n odd generators and the left-symmetric product on W(n).

Generators are numbered 1..n.  A monomial is a strictly increasing tuple of
generator indices.  ``u d_i o v d_j = u (d_i v) d_j`` is the product that
turns the derivation superalgebra W(n) into a left-symmetric superalgebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .exact_arith import as_scalar
from .graded_core import SuperAlgebra


class GeneratorCountMismatch(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


Monomial = tuple  # strictly increasing generator indices


def _merge_sign(s: Monomial, t: Monomial) -> tuple[int, Monomial] | None:
    """Sign and support of xi_S * xi_T, or None when S and T overlap."""
    if set(s) & set(t):
        return None
    inv = 0
    for a in s:
        for b in t:
            if a > b:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(s + t))


@dataclass(frozen=True, eq=False)
class GrassmannElement:
    n: int
    terms: Mapping[Monomial, object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            mono = tuple(mono)
            if any(not 1 <= g <= self.n for g in mono) or list(mono) != sorted(set(mono)):
                raise ValueError(f"invalid monomial {mono!r} for n = {self.n}")
            c = as_scalar(c)
            if c != 0:
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, n: int, mono, coeff=1) -> "GrassmannElement":
        return cls(n, {tuple(mono): coeff})

    @classmethod
    def generator(cls, n: int, i: int) -> "GrassmannElement":
        return cls(n, {(i,): 1})

    @classmethod
    def one(cls, n: int) -> "GrassmannElement":
        return cls(n, {(): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> int | None:
        ps = {len(m) % 2 for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        _same_n(self.n, other.n)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return GrassmannElement(self.n, out)

    def __neg__(self):
        return GrassmannElement(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GrassmannElement":
        return GrassmannElement(self.n, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "GrassmannElement") -> "GrassmannElement":
        return grassmann_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*xi{''.join(map(str, m))}" for m, c in sorted(self.terms.items()))


def _same_n(a: int, b: int):
    if a != b:
        raise GeneratorCountMismatch(f"generator counts differ: {a} vs {b}")


def grassmann_mul(u: GrassmannElement, v: GrassmannElement) -> GrassmannElement:
    _same_n(u.n, v.n)
    out: dict = {}
    for s, a in u.terms.items():
        for t, b in v.terms.items():
            merged = _merge_sign(s, t)
            if merged is None:
                continue
            sign, mono = merged
            out[mono] = out.get(mono, 0) + sign * a * b
    return GrassmannElement(u.n, out)


def partial_derivative(i: int, u: GrassmannElement) -> GrassmannElement:
    """Left odd derivative: d_i(xi_S) = (-1)^(pos(i,S)-1) xi_{S minus i}."""
    if not 1 <= i <= u.n:
        raise IndexOutOfRange(f"generator index {i} outside 1..{u.n}")
    out = {}
    for s, c in u.terms.items():
        if i in s:
            pos = s.index(i)  # 0-based, so the sign exponent is pos
            out[s[:pos] + s[pos + 1:]] = -c if pos % 2 else c
    return GrassmannElement(u.n, out)


@dataclass(frozen=True, eq=False)
class WnDerivation:
    """``sum_i components[i-1] d_i``."""

    n: int
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != self.n:
            raise GeneratorCountMismatch("need exactly n components")
        for c in comps:
            _same_n(self.n, c.n)
        object.__setattr__(self, "components", comps)

    @classmethod
    def basis(cls, n: int, mono, i: int, coeff=1) -> "WnDerivation":
        comps = [GrassmannElement(n) for _ in range(n)]
        comps[i - 1] = GrassmannElement.monomial(n, mono, coeff)
        return cls(n, tuple(comps))

    @classmethod
    def euler(cls, n: int) -> "WnDerivation":
        return cls(n, tuple(GrassmannElement.generator(n, i) for i in range(1, n + 1)))

    def apply(self, f: GrassmannElement) -> GrassmannElement:
        """Act on Lambda(n) as the derivation sum_i u_i d_i(f)."""
        out = GrassmannElement(self.n)
        for i, u in enumerate(self.components, start=1):
            if not u.is_zero():
                out = out + grassmann_mul(u, partial_derivative(i, f))
        return out

    def parity(self) -> int | None:
        ps = {(len(m) + 1) % 2 for c in self.components for m in c.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def __add__(self, other):
        _same_n(self.n, other.n)
        return WnDerivation(self.n, tuple(a + b for a, b in zip(self.components, other.components)))

    def __eq__(self, other):
        if not isinstance(other, WnDerivation):
            return NotImplemented
        return self.n == other.n and self.components == other.components

    def __hash__(self):
        return hash(self.components)


def circle_product(d1: WnDerivation, d2: WnDerivation) -> WnDerivation:
    """Component j of the result is ``sum_i u_i d_i(v_j)``."""
    _same_n(d1.n, d2.n)
    return WnDerivation(d1.n, tuple(d1.apply(v) for v in d2.components))


def subsets_graded_lex(n: int) -> list[Monomial]:
    return [c for k in range(n + 1) for c in combinations(range(1, n + 1), k)]


def wn_basis(n: int) -> list[tuple[Monomial, int]]:
    return [(s, i) for s in subsets_graded_lex(n) for i in range(1, n + 1)]


def basis_name(mono: Monomial, i: int) -> str:
    return f"xi{''.join(map(str, mono))}d{i}"


def _decompose(d: WnDerivation, index: Mapping) -> dict:
    out = {}
    for i, comp in enumerate(d.components, start=1):
        for mono, c in comp.terms.items():
            out[index[(mono, i)]] = c
    return out


def build_wn(n: int) -> SuperAlgebra:
    """(W(n), circle) on the basis xi_S d_i, subsets in graded-lex order then i."""
    if n < 1:
        raise ValueError("n must be at least 1")
    basis = wn_basis(n)
    index = {b: k for k, b in enumerate(basis)}
    consts = []
    for a, (s, i) in enumerate(basis):
        for b, (t, j) in enumerate(basis):
            # xi_S d_i o xi_T d_j = xi_S d_i(xi_T) d_j
            if i not in t:
                continue
            pos = t.index(i)
            rest = t[:pos] + t[pos + 1:]
            merged = _merge_sign(s, rest)
            if merged is None:
                continue
            sign, mono = merged
            if pos % 2:
                sign = -sign
            consts.append((a, b, index[(mono, j)], Fraction(sign)))
    parity = [(len(s) + 1) % 2 for s, _ in basis]
    return SuperAlgebra(parity, consts, [basis_name(s, i) for s, i in basis])


def euler_element(n: int) -> dict:
    """Coordinates of sum_j xi_j d_j in the build_wn basis."""
    index = {b: k for k, b in enumerate(wn_basis(n))}
    return {index[((j,), j)]: Fraction(1) for j in range(1, n + 1)}


def derivation_bracket_algebra(n: int) -> SuperAlgebra:
    """W(n) as a Lie superalgebra, brackets from composing derivations on Lambda(n).

    Independent of :func:`build_wn`: each basis derivation acts as an
    endomorphism of Lambda(n), the super-commutator of endomorphisms is
    evaluated on every generator, and the result is read back as a
    derivation via its values on the generators.
    """
    basis = wn_basis(n)
    index = {b: k for k, b in enumerate(basis)}
    ders = [WnDerivation.basis(n, s, i) for s, i in basis]
    parity = [(len(s) + 1) % 2 for s, _ in basis]
    gens = [GrassmannElement.generator(n, j) for j in range(1, n + 1)]
    consts = []
    for a, d1 in enumerate(ders):
        for b, d2 in enumerate(ders):
            sign = -1 if parity[a] and parity[b] else 1
            comps = []
            for g in gens:
                val = d1.apply(d2.apply(g)) - d2.apply(d1.apply(g)).scale(sign)
                comps.append(val)
            br = WnDerivation(n, tuple(comps))
            for k, c in _decompose(br, index).items():
                consts.append((a, b, k, c))
    return SuperAlgebra(parity, consts, [basis_name(s, i) for s, i in basis])
