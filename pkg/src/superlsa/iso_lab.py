"""Isomorphism invariants, homomorphism constraint systems and certificates.

An even isomorphism maps right identities to right identities, so a unique
even right identity e is canonical and the characteristic polynomials of
L(e) and R(e) are invariants.  When invariants agree, the unknown entries
of an even matrix P are constrained by P(x_i x_j) = P(x_i) P(x_j) and run
through the structure solver; vanishing rows or columns of P close a branch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .exact_arith import format_scalar
from .graded_core import (DimensionMismatch, SuperAlgebra, check_associative, check_homomorphism,
                          check_novikov, find_right_identities, operator_of)
from .structure_solver import (CaseNode, ConstraintSystem, SolutionFamily, SolverPoly, make_system,
                               parse_poly, solve_staged)

WITNESS = "IsomorphismWitness"
MISMATCH = "FingerprintMismatch"
CONTRADICTION = "ConstraintContradiction"
INCONCLUSIVE = "Inconclusive"


# fingerprints --------------------------------------------------------------

def _even_right_identity(A: SuperAlgebra, sols):
    """Unique even right identity from the affine solution set, or None."""
    if not sols:
        return None
    part, kernel = sols[0], sols[1:]
    odd = set(A.odd_indices())
    even_kernel = [v for v in kernel if not any(k in odd for k in v.vec)]
    mixed = [v for v in kernel if any(k in odd for k in v.vec) and any(k not in odd for k in v.vec)]
    if even_kernel or mixed:
        return None
    # the odd part of any solution is an odd right annihilator, so dropping it keeps a solution
    return A.element({k: c for k, c in part.vec.items() if k not in odd})


def _right_mult_by(A: SuperAlgebra, e) -> list[list]:
    return operator_of(A, e, "right")


@dataclass(frozen=True)
class Fingerprint:
    dims: tuple
    has_unique_right_identity: bool
    has_unique_even_right_identity: bool
    right_identity: str | None
    charpoly_L_e: tuple | None
    charpoly_R_e: tuple | None
    associative: bool
    novikov: bool

    # fields compared by distinguish; right_identity is a coordinate rendering, not an invariant
    COMPARED = ("dims", "has_unique_right_identity", "has_unique_even_right_identity",
                "charpoly_L_e", "charpoly_R_e", "associative", "novikov")

    def mismatches(self, other: "Fingerprint") -> list[tuple[str, object, object]]:
        return [(f, getattr(self, f), getattr(other, f)) for f in self.COMPARED
                if getattr(self, f) != getattr(other, f)]

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "has_unique_right_identity": self.has_unique_right_identity,
            "has_unique_even_right_identity": self.has_unique_even_right_identity,
            "right_identity": self.right_identity,
            "charpoly_L_e": _render_poly(self.charpoly_L_e),
            "charpoly_R_e": _render_poly(self.charpoly_R_e),
            "associative": self.associative,
            "novikov": self.novikov,
        }


def _render_poly(coeffs) -> list[str] | None:
    return None if coeffs is None else [format_scalar(c) for c in coeffs]


def fingerprint(A: SuperAlgebra) -> Fingerprint:
    """Charpolys are taken at the unique even right identity when there is one."""
    sols = find_right_identities(A)
    unique = len(sols) == 1
    e = _even_right_identity(A, sols)
    if e is not None:
        cl = tuple(linalg.charpoly(operator_of(A, e, "left")))
        cr = tuple(linalg.charpoly(_right_mult_by(A, e)))
        rendered = e.render()
    else:
        cl = cr = None
        rendered = None
    return Fingerprint(
        dims=(len(A.even_indices()), len(A.odd_indices())),
        has_unique_right_identity=unique,
        has_unique_even_right_identity=e is not None,
        right_identity=rendered,
        charpoly_L_e=cl,
        charpoly_R_e=cr,
        associative=check_associative(A).verdict,
        novikov=check_novikov(A).verdict,
    )


# homomorphism constraints -------------------------------------------------

@dataclass
class HomomorphismSystem:
    """Unknown even matrix P with one equation per coordinate of P(x_i x_j) - P(x_i)P(x_j)."""

    letter: str
    unknowns: list[str]
    matrix: list[list[SolverPoly]]
    stages: list[list[SolverPoly]]
    stage_names: list[str]
    rows: list[list[str]]  # unknown names per row of P
    cols: list[list[str]]

    def system(self) -> ConstraintSystem:
        return make_system([e for st in self.stages for e in st], self.unknowns)

    def prune(self, sys: ConstraintSystem) -> str | None:
        """Reason string when some row or column of P is forced to vanish."""
        for kind, groups in (("row", self.rows), ("column", self.cols)):
            for idx, names in enumerate(groups):
                if names and all(n in sys.assignments and sys.assignments[n].is_zero() for n in names):
                    return f"{kind} {idx + 1} of P vanishes: " + " = ".join(names) + " = 0"
        return None

    def materialize(self, family: SolutionFamily, params=None) -> list[list]:
        params = dict(params or {})
        values = {k: v.evaluate(params) for k, v in family.assignments.items()}
        values.update({k: SolverPoly.const(v) for k, v in params.items()})
        out = []
        for row in self.matrix:
            r = []
            for p in row:
                val = p.substitute(values)
                if not val.is_constant():
                    raise ValueError(f"entry {val} is not determined")
                r.append(val.constant_term())
            out.append(r)
        return out


def _index_label(i: int, j: int, n: int) -> str:
    return f"{i + 1}{j + 1}" if n <= 9 else f"{i + 1}_{j + 1}"


def homomorphism_constraints(A: SuperAlgebra, B: SuperAlgebra, letter: str = "p") -> HomomorphismSystem:
    """Equations for an even linear P: A -> B to be multiplicative.

    Stages: even-even products, then mixed products, then odd-odd products.
    """
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions differ: {A.dim} vs {B.dim}")
    if sorted(A.parity) != sorted(B.parity) or list(A.parity) != list(B.parity):
        raise DimensionMismatch("parity signatures differ")
    n = A.dim
    unknowns: list[str] = []
    P = [[SolverPoly() for _ in range(n)] for _ in range(n)]
    rows = [[] for _ in range(n)]
    cols = [[] for _ in range(n)]
    for r in range(n):
        for c in range(n):
            if A.parity[c] == B.parity[r]:
                name = f"{letter}{_index_label(r, c, n)}"
                unknowns.append(name)
                P[r][c] = SolverPoly.var(name)
                rows[r].append(name)
                cols[c].append(name)

    def pair_equations(i, j):
        eqs = []
        lhs = [SolverPoly() for _ in range(n)]
        for k, c in A.product(i, j).items():
            for r in range(n):
                if P[r][k].terms:
                    lhs[r] = lhs[r] + P[r][k] * c
        for s in range(n):
            if not P[s][i].terms:
                continue
            for t in range(n):
                if not P[t][j].terms:
                    continue
                prod = P[s][i] * P[t][j]
                for r, c in B.product(s, t).items():
                    lhs[r] = lhs[r] - prod * c
        for e in lhs:
            if not e.is_zero():
                eqs.append(e)
        return eqs

    ev, od = A.even_indices(), A.odd_indices()
    groups = [
        ("even*even", [(i, j) for i in ev for j in ev]),
        ("even*odd", [(i, j) for i in ev for j in od] + [(j, i) for i in ev for j in od]),
        ("odd*odd", [(i, j) for i in od for j in od]),
    ]
    stages, names = [], []
    for name, pairs in groups:
        eqs = [e for i, j in pairs for e in pair_equations(i, j)]
        if eqs:
            stages.append(eqs)
            names.append(name)
    return HomomorphismSystem(letter, unknowns, P, stages, names, rows, cols)


# certificates ----------------------------------------------------------------

@dataclass
class IsoCertificate:
    kind: str
    field_name: str | None = None
    value_a: object = None
    value_b: object = None
    matrix: list | None = None
    branches: list[dict] = field(default_factory=list)
    tree: CaseNode | None = None
    reason: str | None = None
    letter: str = "p"

    @property
    def definitive(self) -> bool:
        return self.kind != INCONCLUSIVE

    @property
    def isomorphic(self) -> bool | None:
        if self.kind == WITNESS:
            return True
        if self.kind in (MISMATCH, CONTRADICTION):
            return False
        return None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.field_name is not None:
            out["field"] = self.field_name
            out["value_a"] = _render(self.value_a)
            out["value_b"] = _render(self.value_b)
        if self.matrix is not None:
            out["matrix"] = [[format_scalar(x) for x in row] for row in self.matrix]
        if self.branches:
            out["branches"] = self.branches
        if self.tree is not None:
            out["case_tree"] = self.tree.to_json()
        if self.reason is not None:
            out["reason"] = self.reason
        out["unknown_letter"] = self.letter
        return out


def _render(v):
    if isinstance(v, tuple):
        return [_render(x) for x in v]
    if v is None or isinstance(v, (bool, int)):
        return v
    return format_scalar(v)


def _closed_branches(tree: CaseNode) -> list[dict]:
    out = []
    for leaf in tree.leaves():
        if leaf.status in ("contradiction", "pruned"):
            out.append({"trail": leaf.trail, "status": leaf.status, "final": leaf.reason})
    return out


def _try_family(hom: HomomorphismSystem, fam: SolutionFamily, A, B):
    """Search small integer values of the free parameters for an invertible P."""
    free = fam.free
    candidates = [Fraction(v) for v in (1, 0, -1, 2, -2)]
    if len(free) > 6:
        return None

    def assignments(k):
        if k == len(free):
            yield {}
            return
        for v in candidates:
            for rest in assignments(k + 1):
                yield {free[k]: v, **rest}

    tried = 0
    for params in assignments(0):
        tried += 1
        if tried > 400:
            return None
        if any(not e.evaluate(params).is_zero() for e in fam.residual):
            continue
        try:
            P = hom.materialize(fam, params)
        except ValueError:
            continue
        if check_homomorphism(A, B, P).verdict:
            return P
    return None


def distinguish(A: SuperAlgebra, B: SuperAlgebra, depth_cap: int = 8, letter: str = "p",
                use_fingerprint: bool = True) -> IsoCertificate:
    """Certificate for whether A and B are isomorphic by an even map; never guesses."""
    if A.dim != B.dim:
        return IsoCertificate(MISMATCH, "dim", A.dim, B.dim, letter=letter)
    if list(A.parity) != list(B.parity):
        fa, fb = fingerprint(A), fingerprint(B)
        if fa.dims != fb.dims:
            return IsoCertificate(MISMATCH, "dims", fa.dims, fb.dims, letter=letter)
        return IsoCertificate(INCONCLUSIVE, reason="bases list parities in different orders", letter=letter)
    if A.same_structure(B):
        return IsoCertificate(WITNESS, matrix=linalg.identity(A.dim), letter=letter,
                              reason="identical structure constants")
    if use_fingerprint:
        diff = fingerprint(A).mismatches(fingerprint(B))
        if diff:
            f, va, vb = diff[0]
            return IsoCertificate(MISMATCH, f, va, vb, letter=letter)
    hom = homomorphism_constraints(A, B, letter)
    families, tree, stuck = solve_staged(hom.stages, hom.unknowns, depth_cap, prune=hom.prune, strict=False)
    # stuck leaves are searched too: a point on their residual that passes
    # check_homomorphism is a witness regardless of how it was found
    for fam in families + stuck:
        P = _try_family(hom, fam, A, B)
        if P is not None:
            return IsoCertificate(WITNESS, matrix=P, tree=tree, letter=letter)
    if not families and not stuck:
        return IsoCertificate(CONTRADICTION, branches=_closed_branches(tree), tree=tree, letter=letter,
                              reason="every branch of the homomorphism system closes")
    why = f"{len(families)} consistent families without a verified witness, {len(stuck)} stuck leaves"
    return IsoCertificate(INCONCLUSIVE, tree=tree, branches=_closed_branches(tree), reason=why,
                          letter=letter)


def verify_certificate(cert: IsoCertificate, A: SuperAlgebra, B: SuperAlgebra, depth_cap: int = 8) -> bool:
    """Re-check a certificate from scratch."""
    if cert.kind == WITNESS:
        return check_homomorphism(A, B, cert.matrix).verdict
    if cert.kind == MISMATCH:
        if cert.field_name == "dim":
            return A.dim != B.dim
        fa, fb = fingerprint(A), fingerprint(B)
        return getattr(fa, cert.field_name) == cert.value_a and getattr(fb, cert.field_name) == cert.value_b \
            and cert.value_a != cert.value_b
    if cert.kind == CONTRADICTION:
        hom = homomorphism_constraints(A, B, cert.letter)
        families, tree, stuck = solve_staged(hom.stages, hom.unknowns, depth_cap, prune=hom.prune,
                                             strict=False)
        return not families and not stuck
    return False


def replay_branch(hom: HomomorphismSystem, trail: Sequence[str], depth_cap: int = 8) -> str | None:
    """Close one recorded branch again: rerun the staged system with the trail factors imposed.

    Returns the closing reason of the leaf reached by ``trail`` (or of the
    first closed leaf when the factors close earlier), None if anything
    survives.
    """
    extra = [parse_poly(step.rsplit("=", 1)[0], hom.unknowns) for step in trail]
    stages = [list(hom.stages[0]) + extra] + [list(st) for st in hom.stages[1:]]
    families, tree, stuck = solve_staged(stages, hom.unknowns, depth_cap, prune=hom.prune, strict=False)
    if families or stuck:
        return None
    closed = _closed_branches(tree)
    if not closed:
        return None
    for b in closed:
        if b["trail"] == list(trail):
            return b["final"]
    return closed[0]["final"]
