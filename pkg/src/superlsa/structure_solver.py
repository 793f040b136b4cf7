"""Unknown-odd-block ansatz, constraint generation and case-splitting elimination.

The solver fragment is deliberately small: substitute any equation that is
linear in some unknown with a constant coefficient, look for further linear
consequences by row-reducing over monomials, and split on equations that
factor.  Anything else is reported, never approximated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from . import linalg
from .exact_arith import ALPHA, Poly, RatFun, Scalar, as_scalar, format_scalar
from .graded_core import CheckReport, SuperAlgebra, Violation, check_compatible, find_right_identities, Element


class Inconsistent(Exception):
    def __init__(self, equation: "SolverPoly"):
        super().__init__(f"derived {equation} = 0")
        self.equation = equation


class UnfactorableResidual(Exception):
    def __init__(self, equations: Sequence["SolverPoly"]):
        super().__init__("residual equations outside the solver fragment: "
                         + "; ".join(str(e) for e in equations[:5]))
        self.equations = list(equations)


class GradingMismatch(ValueError):
    pass


class NoEvenRightIdentity(ValueError):
    pass


class FreeParameterUnsupported(ValueError):
    pass


Mono = tuple  # sorted unknown names with multiplicity


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


class SolverPoly:
    """Multivariate polynomial in named unknowns with Fraction/RatFun coefficients."""

    __slots__ = ("terms", "_key")

    def __init__(self, terms: Mapping[Mono, Scalar] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}
        self._key = None

    @classmethod
    def const(cls, c) -> "SolverPoly":
        return cls({(): as_scalar(c)})

    @classmethod
    def var(cls, name: str) -> "SolverPoly":
        return cls({(name,): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((), Fraction(0))

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v in m}

    def __add__(self, other) -> "SolverPoly":
        if not isinstance(other, SolverPoly):
            other = SolverPoly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return SolverPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "SolverPoly":
        return SolverPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "SolverPoly":
        if not isinstance(other, SolverPoly):
            other = SolverPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "SolverPoly":
        return SolverPoly.const(other) - self

    def __mul__(self, other) -> "SolverPoly":
        if not isinstance(other, SolverPoly):
            c = as_scalar(other)
            if c == 0:
                return SolverPoly()
            return SolverPoly({m: c * v for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v == 0:
                    out.pop(m, None)
                else:
                    out[m] = v
        return SolverPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SolverPoly):
            other = SolverPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.sort_key())

    def sort_key(self):
        if self._key is None:
            self._key = tuple(sorted((m, format_scalar(c)) for m, c in self.terms.items()))
        return self._key

    def linear_coefficient(self, name: str) -> tuple["SolverPoly", "SolverPoly"] | None:
        """(A, B) with self = A*name + B and name absent from A, B; None if degree > 1."""
        a, b = {}, {}
        for m, c in self.terms.items():
            k = m.count(name)
            if k == 0:
                b[m] = c
            elif k == 1:
                i = m.index(name)
                a[m[:i] + m[i + 1:]] = c
            else:
                return None
        return SolverPoly(a), SolverPoly(b)

    def substitute(self, assignments: Mapping[str, "SolverPoly"]) -> "SolverPoly":
        if not any(v in assignments for m in self.terms for v in m):
            return self
        out = SolverPoly()
        for m, c in self.terms.items():
            term = SolverPoly({(): c})
            rest = []
            for v in m:
                if v in assignments:
                    term = term * assignments[v]
                else:
                    rest.append(v)
            out = out + term * SolverPoly({tuple(rest): Fraction(1)})
        return out

    def evaluate(self, values: Mapping[str, Scalar]) -> "SolverPoly":
        return self.substitute({k: SolverPoly.const(v) for k, v in values.items()})

    def map_coefficients(self, f: Callable) -> "SolverPoly":
        return SolverPoly({m: f(c) for m, c in self.terms.items()})

    def normalized(self) -> "SolverPoly":
        """Scaled so the leading term (in sort order) has coefficient 1."""
        if not self.terms:
            return self
        lead = max(self.terms, key=lambda m: (len(m), m))
        return self * (1 / self.terms[lead])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-len(m), m)):
            c = self.terms[m]
            mono = "*".join(_power_str(m))
            cs = format_scalar(c)
            if not m:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            elif isinstance(c, RatFun) and not c.is_constant():
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _power_str(m: Mono) -> list[str]:
    out = []
    for v, grp in itertools.groupby(m):
        k = len(list(grp))
        out.append(v if k == 1 else f"{v}^{k}")
    return out


def _eq_sort_key(p: SolverPoly):
    return (p.degree, len(p.terms), p.sort_key())


# factorisation -------------------------------------------------------------

def factor(p: SolverPoly) -> list[SolverPoly]:
    """Irreducible non-constant factors of p (multiplicity dropped).

    Factors depending on the formal parameter alone are treated as nonzero
    constants and discarded.
    """
    return list(_factor_cached(p))


@lru_cache(maxsize=100_000)
def _factor_cached(p: SolverPoly) -> tuple:
    import sympy

    # pull out common unknowns first; cheap and covers most equations
    common = None
    for m in p.terms:
        cm = set(m) if common is None else common & set(m)
        common = cm
    factors: list[SolverPoly] = []
    rest = p
    if common:
        for v in sorted(common):
            factors.append(SolverPoly.var(v))
        out = {}
        for m, c in p.terms.items():
            mm = list(m)
            for v in common:
                mm.remove(v)
            out[tuple(mm)] = c
        rest = SolverPoly(out)
    if rest.degree <= 0:
        return tuple(factors)
    if rest.degree == 1:
        return tuple(factors + [rest.normalized()])

    names = sorted(rest.variables())
    syms = sympy.symbols([f"u{i}" for i in range(len(names))])
    a = sympy.Symbol("alpha_")
    expr = 0
    for m, c in rest.terms.items():
        term = _scalar_to_sympy(c, a)
        for v in m:
            term = term * syms[names.index(v)]
        expr += term
    expr = sympy.together(expr)
    num, _ = sympy.fraction(expr)
    _, flist = sympy.factor_list(sympy.expand(num), *syms, a)
    for f, _mult in flist:
        if not (f.free_symbols & set(syms)):
            continue  # constant or alpha-only
        factors.append(_sympy_to_poly(f, syms, names, a).normalized())
    return tuple(factors)


def _scalar_to_sympy(c, a):
    import sympy
    if isinstance(c, RatFun):
        num = sum(sympy.Rational(v.numerator, v.denominator) * a ** i for i, v in enumerate(c.num.c))
        den = sum(sympy.Rational(v.numerator, v.denominator) * a ** i for i, v in enumerate(c.den.c))
        return num / den
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def _sympy_to_poly(expr, syms, names, a) -> SolverPoly:
    import sympy
    P = sympy.Poly(expr, *syms)
    out = SolverPoly()
    for monom, coeff in P.terms():
        cnum, cden = sympy.fraction(sympy.cancel(coeff))
        c = RatFun.normalize(_sympy_univariate(cnum, a), _sympy_univariate(cden, a)).to_scalar()
        mono = []
        for i, e in enumerate(monom):
            mono += [names[i]] * e
        out = out + SolverPoly({tuple(sorted(mono)): c})
    return out


def _sympy_univariate(expr, a) -> Poly:
    import sympy
    coeffs = sympy.Poly(expr, a).all_coeffs()
    return Poly(Fraction(int(sympy.numer(v)), int(sympy.denom(v))) for v in reversed(coeffs))


def parse_poly(text: str, unknowns: Iterable[str]) -> SolverPoly:
    """Read a polynomial back from its printed form (as in branch trails)."""
    import sympy
    from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

    names = sorted(set(unknowns))
    syms = sympy.symbols([f"u{i}" for i in range(len(names))])
    a = sympy.Symbol("alpha_")
    local = dict(zip(names, syms))
    local["a"] = a
    expr = parse_expr(text, local_dict=local, global_dict={"Integer": sympy.Integer,
                                                           "Rational": sympy.Rational,
                                                           "Symbol": sympy.Symbol},
                      transformations=standard_transformations + (convert_xor,))
    stray = {str(s) for s in expr.free_symbols} - {str(s) for s in syms} - {"alpha_"}
    if stray:
        raise ValueError(f"unknown symbols {sorted(stray)} in {text!r}")
    return _sympy_to_poly(sympy.expand(expr), syms, names, a)


# constraint systems ----------------------------------------------------------

@dataclass
class ConstraintSystem:
    equations: list[SolverPoly] = field(default_factory=list)
    assignments: dict[str, SolverPoly] = field(default_factory=dict)
    branch_trail: list[str] = field(default_factory=list)
    unknowns: list[str] = field(default_factory=list)
    origin: list[SolverPoly] = field(default_factory=list)
    log: list[str] = field(default_factory=list)

    def copy(self) -> "ConstraintSystem":
        return ConstraintSystem(list(self.equations), dict(self.assignments), list(self.branch_trail),
                                list(self.unknowns), self.origin, list(self.log))

    def add(self, eqs: Iterable[SolverPoly]) -> "ConstraintSystem":
        new = self.copy()
        added = [e.substitute(new.assignments) for e in eqs]
        new.equations.extend(e for e in added if not e.is_zero())
        new.origin = list(self.origin) + [e for e in eqs if not e.is_zero()]
        return new

    def free_unknowns(self) -> list[str]:
        return [u for u in self.unknowns if u not in self.assignments]

    def residuals(self) -> list[SolverPoly]:
        """Original equations after substituting the current assignments."""
        return [e.substitute(self.assignments) for e in self.origin]


def make_system(equations: Iterable[SolverPoly], unknowns: Sequence[str] | None = None) -> ConstraintSystem:
    eqs = [e for e in equations if not e.is_zero()]
    if unknowns is None:
        unknowns = sorted(set().union(*(e.variables() for e in eqs))) if eqs else []
    return ConstraintSystem(list(eqs), {}, [], list(unknowns), list(eqs), [])


def _assign(sys: ConstraintSystem, name: str, value: SolverPoly) -> None:
    sub = {name: value}
    for k in list(sys.assignments):
        sys.assignments[k] = sys.assignments[k].substitute(sub)
    sys.assignments[name] = value
    sys.log.append(f"{name} := {value}")


def _pick_linear(eqs: Sequence[SolverPoly]) -> tuple[int, str, SolverPoly] | None:
    best = None
    for idx, e in enumerate(eqs):
        for v in sorted(e.variables()):
            lc = e.linear_coefficient(v)
            if lc is None:
                continue
            a, b = lc
            if not a.is_constant():
                continue
            key = (_eq_sort_key(e), v)
            if best is None or key < best[0]:
                best = (key, idx, v, (-b) * (1 / a.constant_term()))
            break
    if best is None:
        return None
    return best[1], best[2], best[3]


def _dedupe(eqs: Iterable[SolverPoly]) -> list[SolverPoly]:
    seen = {}
    for e in eqs:
        if e.is_zero():
            continue
        if e.is_constant():
            raise Inconsistent(e)
        n = e.normalized()
        seen.setdefault(n.sort_key(), n)
    return sorted(seen.values(), key=_eq_sort_key)


def _linear_consequences(eqs: Sequence[SolverPoly]) -> list[SolverPoly]:
    """Row-reduce over monomials (nonlinear ones first) and return new rows of degree <= 1."""
    monos = sorted({m for e in eqs for m in e.terms}, key=lambda m: (-len(m), m))
    if not monos or all(len(m) <= 1 for m in monos):
        return []
    col = {m: i for i, m in enumerate(monos)}
    rows = []
    for e in eqs:
        r = [Fraction(0)] * len(monos)
        for m, c in e.terms.items():
            r[col[m]] = c
        rows.append(r)
    red, pivots = linalg.rref(rows)
    out = []
    for r, p in zip(red, pivots):
        if len(monos[p]) <= 1:
            poly = SolverPoly({monos[j]: r[j] for j in range(len(monos)) if r[j] != 0})
            out.append(poly)
    return out


def _drop_implied(eqs: Sequence[SolverPoly]) -> list[SolverPoly]:
    """Remove equations having another equation of the system as a factor."""
    keys = {e.normalized().sort_key() for e in eqs}
    out = []
    for e in eqs:
        own = e.normalized().sort_key()
        fs = factor(e) if e.degree > 1 else []
        if len(fs) >= 2 and any(f.sort_key() in keys and f.sort_key() != own for f in fs):
            continue
        out.append(e)
    return out


def reduce_linear(sys: ConstraintSystem) -> ConstraintSystem:
    """Eliminate linearly solvable unknowns until none is left; raises Inconsistent."""
    sys = sys.copy()
    eqs = _dedupe(e.substitute(sys.assignments) for e in sys.equations)
    while True:
        pick = _pick_linear(eqs)
        if pick is None:
            extra = _linear_consequences(eqs)
            extra = [e for e in extra if e.degree <= 1]
            known = {e.normalized().sort_key() for e in eqs}
            extra = [e for e in extra if e.is_constant() or e.normalized().sort_key() not in known]
            if not extra:
                break
            eqs = _dedupe(list(eqs) + extra)
            continue
        idx, v, value = pick
        _assign(sys, v, value)
        sub = {v: value}
        eqs = _dedupe(e.substitute(sub) for i, e in enumerate(eqs) if i != idx)
    sys.equations = eqs
    return sys


# branching ---------------------------------------------------------------------

@dataclass
class SolutionFamily:
    assignments: dict[str, SolverPoly]
    free: list[str]
    branch_trail: list[str]
    residual: list[SolverPoly] = field(default_factory=list)

    def value(self, name: str) -> SolverPoly:
        return self.assignments.get(name, SolverPoly.var(name))

    def satisfies(self, equations: Iterable[SolverPoly]) -> bool:
        return all(e.substitute(self.assignments).is_zero() for e in equations)

    def contains(self, point: Mapping[str, Scalar]) -> bool:
        """Whether a full assignment of unknowns lies in this family."""
        free_vals = {v: point[v] for v in self.free}
        for name, val in self.assignments.items():
            ev = val.evaluate(free_vals)
            if not ev.is_constant() or ev.constant_term() != point[name]:
                return False
        return True

    def to_json(self) -> dict:
        return {"assignments": {k: str(v) for k, v in sorted(self.assignments.items())},
                "free": self.free, "branch_trail": self.branch_trail,
                "residual": [str(e) for e in self.residual]}


@dataclass
class CaseNode:
    trail: list[str]
    equations: list[str]
    status: str = "open"  # branch | solution | contradiction | pruned | unfactorable | depth
    chosen: str | None = None
    factors: list[str] = field(default_factory=list)
    reason: str | None = None
    children: list["CaseNode"] = field(default_factory=list)
    assignments: dict[str, str] = field(default_factory=dict)
    label: str | None = None
    stage: int | None = None
    family: "SolutionFamily | None" = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        out = {"trail": self.trail, "status": self.status, "equations": self.equations}
        if self.label is not None:
            out["label"] = self.label
        if self.stage is not None:
            out["stage"] = self.stage
        if self.chosen is not None:
            out["chosen_equation"] = self.chosen
            out["factors"] = self.factors
        if self.reason is not None:
            out["reason"] = self.reason
        if self.assignments:
            out["assignments"] = self.assignments
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        return out

    def leaves(self) -> list["CaseNode"]:
        if not self.children:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]


@dataclass
class SolveResult:
    families: list[SolutionFamily]
    tree: CaseNode
    stuck: list[SolutionFamily] = field(default_factory=list)


def branch_and_solve(sys: ConstraintSystem, depth_cap: int = 8,
                     prune: Callable[[ConstraintSystem], str | None] | None = None,
                     strict: bool = True) -> SolveResult:
    """Depth-first case split.

    With ``strict`` an equation outside the fragment raises
    UnfactorableResidual; otherwise such leaves are returned in ``stuck``.
    """
    root = CaseNode(list(sys.branch_trail), [str(e) for e in sys.equations])
    families: list[SolutionFamily] = []
    stuck: list[SolutionFamily] = []
    _branch(sys, depth_cap, prune, strict, root, families, stuck, 0)
    return SolveResult(families, root, stuck)


def _family(sys: ConstraintSystem, residual=()) -> SolutionFamily:
    free = sorted(set(sys.free_unknowns()) | set().union(*(v.variables() for v in sys.assignments.values()))
                  - set(sys.assignments))
    return SolutionFamily(dict(sys.assignments), free, list(sys.branch_trail), list(residual))


def _branch(sys, depth_cap, prune, strict, node, families, stuck, depth):
    try:
        sys = reduce_linear(sys)
    except Inconsistent as exc:
        node.status = "contradiction"
        node.reason = f"{exc.equation} = 0"
        return
    node.equations = [str(e) for e in sys.equations]
    if prune is not None:
        why = prune(sys)
        if why:
            node.status = "pruned"
            node.reason = why
            return
    if not sys.equations:
        node.status = "solution"
        node.assignments = {k: str(v) for k, v in sorted(sys.assignments.items())}
        families.append(_family(sys))
        return
    if depth >= depth_cap:
        node.status = "depth"
        node.reason = f"depth cap {depth_cap} reached"
        stuck.append(_family(sys, sys.equations))
        if strict:
            raise UnfactorableResidual(sys.equations)
        return
    sys.equations = _drop_implied(sys.equations)
    node.equations = [str(e) for e in sys.equations]
    chosen = None
    for e in sys.equations:  # already sorted: lowest degree, then lexicographic
        fs = factor(e)
        if len(fs) >= 2:
            chosen = (e, fs)
            break
    if chosen is None:
        node.status = "unfactorable"
        node.reason = "; ".join(str(e) for e in sys.equations)
        stuck.append(_family(sys, sys.equations))
        if strict:
            raise UnfactorableResidual(sys.equations)
        return
    e, fs = chosen
    node.status = "branch"
    node.chosen = f"{e} = 0"
    node.factors = [str(f) for f in fs]
    for f in fs:
        child_sys = sys.copy()
        child_sys.equations = list(sys.equations) + [f]
        child_sys.branch_trail = sys.branch_trail + [f"{f} = 0"]
        child = CaseNode(child_sys.branch_trail, [])
        node.children.append(child)
        _branch(child_sys, depth_cap, prune, strict, child, families, stuck, depth + 1)


def solve_staged(stages: Sequence[Sequence[SolverPoly]], unknowns: Sequence[str], depth_cap: int = 8,
                 prune=None, strict: bool = True,
                 annotate: Callable[[int, CaseNode, SolutionFamily], None] | None = None,
                 ) -> tuple[list[SolutionFamily], CaseNode, list]:
    """Solve stage by stage, extending each leaf with the next stage's equations.

    Leaves of an intermediate stage that are stuck on equations outside the
    fragment carry those equations forward; only the last stage may end stuck.
    ``annotate(stage, leaf, family)`` is called on every surviving leaf of
    every intermediate stage.
    """
    root = CaseNode([], [], status="branch", chosen="staged")
    frontier = [(make_system([], unknowns), root)]
    stuck_final: list[SolutionFamily] = []
    all_eqs: list[SolverPoly] = []
    for s, stage in enumerate(stages):
        last = s == len(stages) - 1
        all_eqs = all_eqs + list(stage)
        next_frontier = []
        for sys, parent in frontier:
            sys2 = sys.add(stage)
            sys2.origin = list(all_eqs)
            res = branch_and_solve(sys2, depth_cap, prune, strict and last)
            res.tree.stage = s + 1
            parent.children = [res.tree]
            if parent is not root:
                parent.status = "branch"
            if last:
                next_frontier += [(fam, None) for fam in res.families]
                stuck_final += res.stuck
                continue
            for leaf, fam in _leaf_families(res):
                if annotate is not None:
                    annotate(s, leaf, fam)
                nsys = ConstraintSystem(list(fam.residual), dict(fam.assignments), list(fam.branch_trail),
                                        list(unknowns), list(all_eqs), [])
                next_frontier.append((nsys, leaf))
        frontier = next_frontier
    families = [fam for fam, _ in frontier]
    return families, root, stuck_final


def _leaf_families(res: SolveResult):
    sols = iter(res.families)
    stuck = iter(res.stuck)
    for leaf in res.tree.leaves():
        if leaf.status == "solution":
            yield leaf, next(sols)
        elif leaf.status in ("unfactorable", "depth"):
            yield leaf, next(stuck)


# the ansatz ---------------------------------------------------------------------

BLOCK_LETTERS_X = "abcd"
BLOCK_LETTERS_YY = "efgh"
BLOCK_LETTERS_YX = "mnpq"


@dataclass
class Ansatz:
    parity: tuple
    names: tuple
    table: dict  # (i, j) -> {k: SolverPoly}
    unknowns: list[str]
    blocks: dict[str, str]  # unknown -> block tag

    def product(self, i, j) -> dict:
        return self.table.get((i, j), {})

    def mul_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.product(i, j).items():
                    out[k] = out.get(k, SolverPoly()) + a * b * c
        return {k: c for k, c in out.items() if not c.is_zero()}

    def left_operator(self, i: int) -> list[list[SolverPoly]]:
        n = len(self.parity)
        m = [[SolverPoly() for _ in range(n)] for _ in range(n)]
        for j in range(n):
            for k, c in self.product(i, j).items():
                m[k][j] = c
        return m

    def materialize(self, family: SolutionFamily, params: Mapping[str, Scalar] | None = None) -> SuperAlgebra:
        params = dict(params or {})
        missing = [f for f in family.free if f not in params]
        if missing:
            raise FreeParameterUnsupported(f"free parameters {missing} must be specialized")
        values = {k: v.evaluate(params) for k, v in family.assignments.items()}
        values.update({k: SolverPoly.const(v) for k, v in params.items()})
        consts = []
        for (i, j), row in self.table.items():
            for k, c in row.items():
                val = c.substitute(values)
                if not val.is_constant():
                    raise FreeParameterUnsupported(f"coefficient {val} is not determined")
                if val.constant_term() != 0:
                    consts.append((i, j, k, val.constant_term()))
        return SuperAlgebra(self.parity, consts, self.names)


def _block_name(letter: str, r: int, c: int) -> str:
    return f"{letter}{r + 1}{c + 1}"


def build_ansatz(even: SuperAlgebra, lie: SuperAlgebra) -> Ansatz:
    """Fix even*even from ``even``; every product touching the odd part is unknown."""
    ev, od = lie.even_indices(), lie.odd_indices()
    if even.dim != len(ev) or any(p != 0 for p in even.parity):
        raise GradingMismatch("even part must be purely even with the Lie algebra's even dimension")
    if any(lie.parity[i] for i in ev) or ev != list(range(len(ev))):
        raise GradingMismatch("the Lie algebra basis must list even vectors first")
    p, q = len(ev), len(od)
    named = (p, q) == (4, 4)
    table: dict = {}
    unknowns: list[str] = []
    blocks: dict[str, str] = {}

    def fresh(letter, r, c):
        name = _block_name(letter, r, c) if named else f"{letter}{r + 1}_{c + 1}"
        unknowns.append(name)
        blocks[name] = letter[0] if named else letter.split("_")[0]
        return SolverPoly.var(name)

    for i in range(p):
        for j in range(p):
            for k, c in even.product(i, j).items():
                table.setdefault((i, j), {})[k] = SolverPoly.const(c)
    for i in range(p):
        letter = BLOCK_LETTERS_X[i] if named else f"X{i + 1}_"
        for c in range(q):
            for r in range(q):
                table.setdefault((i, p + c), {})[p + r] = fresh(letter, r, c)
    for j in range(q):
        yy = BLOCK_LETTERS_YY[j] if named else f"YY{j + 1}_"
        yx = BLOCK_LETTERS_YX[j] if named else f"YX{j + 1}_"
        for c in range(q):
            for r in range(p):
                table.setdefault((p + j, p + c), {})[r] = fresh(yy, r, c)
        for c in range(p):
            for r in range(q):
                table.setdefault((p + j, c), {})[p + r] = fresh(yx, r, c)
    unknowns.sort(key=_unknown_order)
    return Ansatz(lie.parity, lie.names, table, unknowns, blocks)


def _unknown_order(name: str):
    return ("abcdefghmnpq".find(name[0]) if name[0] in "abcdefghmnpq" else 99, name)


def _sign(a, b):
    return -1 if a and b else 1


def bracket_equations(ans: Ansatz, lie: SuperAlgebra) -> list[SolverPoly]:
    n = len(ans.parity)
    eqs = []
    for i in range(n):
        for j in range(n):
            s = _sign(ans.parity[i], ans.parity[j])
            keys = set(ans.product(i, j)) | set(ans.product(j, i)) | set(lie.product(i, j))
            for k in sorted(keys):
                e = ans.product(i, j).get(k, SolverPoly()) - ans.product(j, i).get(k, SolverPoly()) * s
                e = e - lie.product(i, j).get(k, Fraction(0))
                if not e.is_zero():
                    eqs.append(e)
    return eqs


def right_identity_equations(ans: Ansatz, e: Element) -> list[SolverPoly]:
    n = len(ans.parity)
    eqs = []
    evec = {k: SolverPoly.const(v) for k, v in e.vec.items()}
    for i in range(n):
        prod = ans.mul_vec({i: SolverPoly.const(1)}, evec)
        prod[i] = prod.get(i, SolverPoly()) - 1
        eqs.extend(v for v in prod.values() if not v.is_zero())
    return eqs


def representation_equations(ans: Ansatz, lie: SuperAlgebra, pairs=None) -> list[SolverPoly]:
    """Entries of L(u)L(v) - (-1)^{|u||v|} L(v)L(u) - L([u,v]) for the given basis pairs."""
    n = len(ans.parity)
    ops = [ans.left_operator(i) for i in range(n)]
    if pairs is None:
        pairs = [(i, j) for i in range(n) for j in range(n)]
    eqs = []
    for i, j in pairs:
        s = _sign(ans.parity[i], ans.parity[j])
        for r in range(n):
            for c in range(n):
                acc = SolverPoly()
                for t in range(n):
                    x, y = ops[i][r][t], ops[j][t][c]
                    if x.terms and y.terms:
                        acc = acc + x * y
                    x, y = ops[j][r][t], ops[i][t][c]
                    if x.terms and y.terms:
                        acc = acc - x * y * s
                for k, coef in lie.product(i, j).items():
                    acc = acc - ops[k][r][c] * coef
                if not acc.is_zero():
                    eqs.append(acc)
    return eqs


def impose_bracket_constraints(sys: ConstraintSystem, ans: Ansatz, lie: SuperAlgebra) -> ConstraintSystem:
    return sys.add(bracket_equations(ans, lie))


def impose_right_identity(sys: ConstraintSystem, ans: Ansatz, e: Element | None) -> ConstraintSystem:
    if e is None:
        raise NoEvenRightIdentity("the even part has no right identity")
    return sys.add(right_identity_equations(ans, e))


def impose_representation(sys: ConstraintSystem, ans: Ansatz, lie: SuperAlgebra, pairs=None) -> ConstraintSystem:
    return sys.add(representation_equations(ans, lie, pairs))


def even_right_identity(even: SuperAlgebra, lie: SuperAlgebra) -> Element | None:
    """The even part's unique right identity, embedded in the Lie algebra's basis."""
    sols = find_right_identities(even)
    if len(sols) != 1:
        return None
    ev = lie.even_indices()
    return Element(lie, {ev[k]: c for k, c in sols[0].vec.items()})


@dataclass
class StructureRun:
    ansatz: Ansatz
    families: list[SolutionFamily]
    tree: CaseNode
    stuck: list
    stages: list[list[SolverPoly]]
    right_identity: Element | None
    remaining_pairs: list = field(default_factory=list)


# Stage-one leaves are named after the action of x1 and x3 on the odd part:
# a21 in {0, -1} and a34 in {0, 1}.
ODD_MODULE_CASES = {(0, 0): "a", (-1, 0): "b", (0, 1): "c", (-1, 1): "d"}


def _case_label(fam: SolutionFamily) -> str | None:
    vals = []
    for name in ("a21", "a34"):
        v = fam.value(name)
        if not v.is_constant():
            return None
        vals.append(v.constant_term())
    return ODD_MODULE_CASES.get(tuple(vals))


def _label_leaf(stage: int, leaf: CaseNode, fam: SolutionFamily) -> None:
    leaf.family = fam
    if stage == 0:
        leaf.label = _case_label(fam)
        leaf.assignments = {k: str(fam.value(k)) for k in ("a21", "a34")}


def solve_structures(even: SuperAlgebra, lie: SuperAlgebra, depth_cap: int = 8,
                     strict: bool = True) -> StructureRun:
    """Compatible LSSAs on ``lie`` with even part ``even`` whose right identity is even's.

    Stage 1 uses the bracket, right-identity and even-even representation
    equations (these fix the odd-module blocks); stage 2 adds every remaining
    representation pair.
    """
    ans = build_ansatz(even, lie)
    e = even_right_identity(even, lie)
    if e is None:
        raise NoEvenRightIdentity("the even part has no unique right identity")
    ev = lie.even_indices()
    n = len(lie.parity)
    even_pairs = [(i, j) for i in ev for j in ev]
    rest = [(i, j) for i in range(n) for j in range(n) if (i, j) not in set(even_pairs)]
    stage1 = bracket_equations(ans, lie) + right_identity_equations(ans, e) + \
        representation_equations(ans, lie, even_pairs)
    stage2 = representation_equations(ans, lie, rest)
    if {"a21", "a34"} <= set(ans.unknowns):
        annotate = _label_leaf
    else:
        def annotate(stage, leaf, fam):
            leaf.family = fam
    families, tree, stuck = solve_staged([stage1, stage2], ans.unknowns, depth_cap, strict=strict,
                                         annotate=annotate)
    return StructureRun(ans, families, tree, stuck, [stage1, stage2], e, rest)


def contradicting_pairs(run: "StructureRun", lie: SuperAlgebra, fam: SolutionFamily) -> list:
    """Every remaining basis pair whose representation equations alone close ``fam``.

    Returns a list of ``((i, j), equation)`` with i <= j in basis order; the
    pair (j, i) gives the same condition up to sign.
    """
    out = []
    for pair in run.remaining_pairs:
        if pair[0] > pair[1]:
            continue
        eqs = list(fam.residual) + representation_equations(run.ansatz, lie, [pair])
        sys = ConstraintSystem(eqs, dict(fam.assignments), list(fam.branch_trail), list(run.ansatz.unknowns))
        try:
            reduce_linear(sys)
        except Inconsistent as exc:
            out.append((pair, exc.equation))
    return out


def point_of(ans: Ansatz, alg: SuperAlgebra) -> dict[str, Scalar] | None:
    """Unknown values that make the ansatz equal ``alg``; None if its fixed part differs."""
    if tuple(alg.parity) != tuple(ans.parity):
        return None
    point = {}
    for (i, j), row in ans.table.items():
        for k, c in row.items():
            val = alg.product(i, j).get(k, Fraction(0))
            if c.is_constant():
                if c.constant_term() != val:
                    return None
            else:
                (mono,) = c.terms
                point[mono[0]] = val
    for i in range(alg.dim):
        for j in range(alg.dim):
            if any(k not in ans.product(i, j) for k in alg.product(i, j)):
                return None
    return point


def family_matches(ans: Ansatz, family: SolutionFamily, alg: SuperAlgebra) -> bool:
    """Whether ``alg`` is a member of ``family`` (residual equations included)."""
    point = point_of(ans, alg)
    if point is None or not family.contains(point):
        return False
    return all(e.evaluate(point).is_zero() for e in family.residual)


def verify_solution(ans: Ansatz, family: SolutionFamily, lie: SuperAlgebra,
                    params: Mapping[str, Scalar] | None = None) -> tuple[CheckReport, SuperAlgebra]:
    """Materialize and run check_compatible plus the right-identity search."""
    if len(family.free) > 1 and not params:
        raise FreeParameterUnsupported(f"{len(family.free)} free parameters; specialize first")
    if family.free and not params:
        params = {family.free[0]: ALPHA}
    alg = ans.materialize(family, params)
    report = check_compatible(alg, lie)
    if not find_right_identities(alg):
        report.violations.append(Violation("right_identity", (), "no right identity"))
    return report, alg
