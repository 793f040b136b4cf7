"""Structure-constant engine for Z2-graded algebras and the identity checkers.

A :class:`SuperAlgebra` stores ``x_i x_j = sum_k c_ij^k x_k`` sparsely.  Every
checker works on basis tuples only: all identities involved are multilinear,
so basis tuples are exhaustive.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from . import linalg
from .exact_arith import Scalar, as_scalar, format_scalar, parse_scalar, specialize, substitute_param


class AlgebraMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class GradingError(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class ZeroSeed(ValueError):
    pass


Vec = dict  # sparse coordinates: basis index -> nonzero scalar


def _axpy(acc: Vec, coeff, vec: Mapping) -> None:
    """acc += coeff * vec, dropping zeros."""
    for k, v in vec.items():
        nv = acc.get(k, 0) + coeff * v
        if nv == 0:
            acc.pop(k, None)
        else:
            acc[k] = nv


def _sign(p: int, q: int) -> int:
    return -1 if (p & q) else 1


class SuperAlgebra:
    """Finite-dimensional Z2-graded algebra given by structure constants."""

    def __init__(self, parity: Sequence[int], constants: Iterable[tuple] = (),
                 names: Sequence[str] | None = None, check_grading: bool = True):
        self.parity = tuple(int(p) for p in parity)
        if any(p not in (0, 1) for p in self.parity):
            raise GradingError("parities must be 0 or 1")
        self.dim = len(self.parity)
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        self.names = tuple(names) if names is not None else tuple(f"e{i + 1}" for i in range(self.dim))
        if len(self.names) != self.dim:
            raise DimensionMismatch("names and parity differ in length")
        table: dict[tuple[int, int], dict[int, Scalar]] = {}
        seen = set()
        for entry in constants:
            i, j, k, c = entry
            if not (0 <= i < self.dim and 0 <= j < self.dim and 0 <= k < self.dim):
                raise IndexOutOfRange(f"constant {entry!r} out of range for dim {self.dim}")
            if (i, j, k) in seen:
                raise ValueError(f"duplicate structure constant for {(i, j, k)}")
            seen.add((i, j, k))
            c = as_scalar(c)
            if c == 0:
                continue
            if check_grading and self.parity[k] != (self.parity[i] ^ self.parity[j]):
                raise GradingError(
                    f"grading-inconsistent constant c[{i},{j}]^{k} = {format_scalar(c)}")
            table.setdefault((i, j), {})[k] = c
        self.table = table
        self._hash = None

    @classmethod
    def from_table(cls, parity, table: Mapping[tuple[int, int], Mapping[int, Scalar]],
                   names=None) -> "SuperAlgebra":
        return cls(parity, ((i, j, k, c) for (i, j), row in table.items() for k, c in row.items()),
                   names)

    @classmethod
    def zero(cls, parity, names=None) -> "SuperAlgebra":
        return cls(parity, (), names)

    # access ----------------------------------------------------------------
    def product(self, i: int, j: int) -> Mapping[int, Scalar]:
        return self.table.get((i, j), {})

    def constants(self) -> list[tuple[int, int, int, Scalar]]:
        return sorted((i, j, k, c) for (i, j), row in self.table.items() for k, c in row.items())

    def even_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.parity) if p == 0]

    def odd_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.parity) if p == 1]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def basis(self, i: int) -> "Element":
        if not 0 <= i < self.dim:
            raise IndexOutOfRange(i)
        return Element(self, {i: Fraction(1)})

    def element(self, coords) -> "Element":
        if isinstance(coords, Mapping):
            return Element(self, coords)
        if len(coords) != self.dim:
            raise DimensionMismatch("coordinate length differs from dimension")
        return Element(self, {i: c for i, c in enumerate(coords)})

    def zero_element(self) -> "Element":
        return Element(self, {})

    def mul_vec(self, u: Mapping, v: Mapping) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                row = self.table.get((i, j))
                if row:
                    _axpy(out, a * b, row)
        return out

    def has_parameter(self) -> bool:
        return any(not isinstance(c, Fraction) for row in self.table.values() for c in row.values())

    def specialize(self, q) -> "SuperAlgebra":
        """Substitute the formal parameter ``a = q`` in every constant."""
        q = Fraction(q)
        return SuperAlgebra(self.parity, ((i, j, k, specialize(c, q)) for i, j, k, c in self.constants()),
                            self.names)

    def reparametrize(self, g) -> "SuperAlgebra":
        """Substitute ``a = g`` with g a scalar, e.g. ``-a``."""
        return SuperAlgebra(self.parity, ((i, j, k, substitute_param(c, g)) for i, j, k, c in self.constants()),
                            self.names)

    def same_structure(self, other: "SuperAlgebra") -> bool:
        return self.parity == other.parity and self.table == other.table

    def differences(self, other: "SuperAlgebra") -> list[tuple[int, int, int, Scalar, Scalar]]:
        out = []
        for key in sorted(set(self.table) | set(other.table)):
            a, b = self.table.get(key, {}), other.table.get(key, {})
            for k in sorted(set(a) | set(b)):
                x, y = a.get(k, Fraction(0)), b.get(k, Fraction(0))
                if x != y:
                    out.append((key[0], key[1], k, x, y))
        return out

    def __eq__(self, other):
        if not isinstance(other, SuperAlgebra):
            return NotImplemented
        return self.same_structure(other) and self.names == other.names

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.parity, tuple(self.constants())))
        return self._hash

    def __repr__(self):
        return f"SuperAlgebra(dim={self.dim}, parity={self.parity}, nnz={sum(map(len, self.table.values()))})"

    # serialization ----------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "parity": list(self.parity),
            "names": list(self.names),
            "constants": [[i, j, k, format_scalar(c)] for i, j, k, c in self.constants()],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "SuperAlgebra":
        for key in ("dim", "parity", "constants"):
            if key not in data:
                raise ValueError(f"algebra JSON is missing {key!r}")
        if len(data["parity"]) != data["dim"]:
            raise DimensionMismatch("'dim' disagrees with the length of 'parity'")
        consts = []
        for entry in data["constants"]:
            if len(entry) != 4:
                raise ValueError(f"constant entry must be [i, j, k, coeff]: {entry!r}")
            i, j, k, c = entry
            consts.append((int(i), int(j), int(k), parse_scalar(str(c))))
        return cls(data["parity"], consts, data.get("names"))


def load_algebra(path) -> SuperAlgebra:
    with open(path) as fh:
        return SuperAlgebra.from_json_dict(json.load(fh))


def dump_algebra(alg: SuperAlgebra, path) -> None:
    with open(path, "w") as fh:
        json.dump(alg.to_json_dict(), fh, indent=1)
        fh.write("\n")


@dataclass(frozen=True, eq=False)
class Element:
    algebra: SuperAlgebra
    vec: Mapping[int, Scalar]

    def __post_init__(self):
        clean = {int(k): as_scalar(v) for k, v in self.vec.items()}
        object.__setattr__(self, "vec", {k: v for k, v in sorted(clean.items()) if v != 0})

    @property
    def coords(self) -> list:
        return [self.vec.get(i, Fraction(0)) for i in range(self.algebra.dim)]

    def parity(self) -> int | None:
        """Parity of a homogeneous element; None if mixed.  Zero counts as even."""
        ps = {self.algebra.parity[i] for i in self.vec}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def is_zero(self) -> bool:
        return not self.vec

    def _check(self, other: "Element"):
        if other.algebra is not self.algebra and not other.algebra.same_structure(self.algebra):
            raise AlgebraMismatch("elements belong to different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.vec)
        _axpy(out, 1, other.vec)
        return Element(self.algebra, out)

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.vec)
        _axpy(out, -1, other.vec)
        return Element(self.algebra, out)

    def __neg__(self) -> "Element":
        return Element(self.algebra, {k: -v for k, v in self.vec.items()})

    def __rmul__(self, c) -> "Element":
        c = as_scalar(c)
        return Element(self.algebra, {k: c * v for k, v in self.vec.items()})

    def __mul__(self, other: "Element") -> "Element":
        return multiply(self.algebra, self, other)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.vec == other.vec and self.algebra.dim == other.algebra.dim

    def __hash__(self):
        return hash(tuple(self.vec.items()))

    def render(self) -> str:
        if not self.vec:
            return "0"
        parts = []
        for k, v in self.vec.items():
            name = self.algebra.names[k]
            if v == 1:
                parts.append(name)
            elif v == -1:
                parts.append(f"-{name}")
            else:
                s = format_scalar(v)
                parts.append(f"({s})*{name}" if any(ch in s[1:] for ch in "+-/") or "a" in s else f"{s}*{name}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Element({self.render()})"


@dataclass
class Violation:
    identity: str
    indices: tuple
    residual: Any

    def describe(self, names: Sequence[str] | None = None) -> str:
        idx = ", ".join(names[i] if names else str(i) for i in self.indices)
        res = self.residual.render() if isinstance(self.residual, Element) else str(self.residual)
        return f"{self.identity}({idx}) -> {res}"


@dataclass
class CheckReport:
    name: str
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def verdict(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.verdict

    def merge(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(self.name, self.violations + other.violations, self.checked + other.checked)


def _require_same(*elems: Element) -> SuperAlgebra:
    alg = elems[0].algebra
    for e in elems[1:]:
        if e.algebra is not alg and not e.algebra.same_structure(alg):
            raise AlgebraMismatch("elements belong to different algebras")
    return alg


def multiply(A: SuperAlgebra, u: Element, v: Element) -> Element:
    _require_same(u, v)
    if u.algebra is not A and not u.algebra.same_structure(A):
        raise AlgebraMismatch("elements do not belong to the given algebra")
    return Element(A, A.mul_vec(u.vec, v.vec))


def associator(A: SuperAlgebra, u: Element, v: Element, w: Element) -> Element:
    _require_same(u, v, w)
    if u.algebra is not A and not u.algebra.same_structure(A):
        raise AlgebraMismatch("elements do not belong to the given algebra")
    left = A.mul_vec(A.mul_vec(u.vec, v.vec), w.vec)
    _axpy(left, -1, A.mul_vec(u.vec, A.mul_vec(v.vec, w.vec)))
    return Element(A, left)


def _assoc_basis(A: SuperAlgebra, i: int, j: int, k: int) -> Vec:
    out: Vec = {}
    for l, c in A.product(i, j).items():
        row = A.table.get((l, k))
        if row:
            _axpy(out, c, row)
    for l, c in A.product(j, k).items():
        row = A.table.get((i, l))
        if row:
            _axpy(out, -c, row)
    return out


# parallel scan over the first index --------------------------------------

def worker_count() -> int:
    env = os.environ.get("SUPERLSA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


_PARALLEL_MIN_DIM = 48


def _scan(kind: str, A: SuperAlgebra, i_values: list[int]) -> list[tuple[str, tuple, Vec]]:
    scan = _SCANNERS[kind]
    out = []
    for i in i_values:
        out.extend(scan(A, i))
    return out


def _run_scan(kind: str, A: SuperAlgebra, workers: int | None = None) -> list[tuple[str, tuple, Vec]]:
    n = A.dim
    workers = worker_count() if workers is None else workers
    if workers <= 1 or n < _PARALLEL_MIN_DIM:
        return _scan(kind, A, list(range(n)))
    chunks = [list(range(s, n, workers)) for s in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_scan, [kind] * len(chunks), [A] * len(chunks), chunks))
    found = [v for part in parts for v in part]
    found.sort(key=lambda t: t[1])
    return found


def _scan_left_symmetric(A: SuperAlgebra, i: int):
    n, par = A.dim, A.parity
    for j in range(i, n):
        s = _sign(par[i], par[j])
        for k in range(n):
            r = _assoc_basis(A, i, j, k)
            if i == j:
                if s == 1:
                    continue
                _axpy(r, 1, _assoc_basis(A, i, i, k))
            else:
                _axpy(r, -s, _assoc_basis(A, j, i, k))
            if r:
                yield ("left_symmetry", (i, j, k), r)


def _scan_associative(A: SuperAlgebra, i: int):
    for j in range(A.dim):
        for k in range(A.dim):
            r = _assoc_basis(A, i, j, k)
            if r:
                yield ("associativity", (i, j, k), r)


def _scan_novikov(A: SuperAlgebra, z: int):
    # (z x) y = (-1)^{|x||y|} (z y) x
    n, par = A.dim, A.parity
    for x in range(n):
        zx = A.product(z, x)
        for y in range(x, n):
            r = A.mul_vec(zx, {y: 1})
            _axpy(r, -_sign(par[x], par[y]), A.mul_vec(A.product(z, y), {x: 1}))
            if r:
                yield ("novikov", (z, x, y), r)


_SCANNERS = {
    "left_symmetric": lambda A, i: list(_scan_left_symmetric(A, i)),
    "associative": lambda A, i: list(_scan_associative(A, i)),
    "novikov": lambda A, i: list(_scan_novikov(A, i)),
}


def _report(name: str, A: SuperAlgebra, found, checked: int) -> CheckReport:
    return CheckReport(name, [Violation(ident, idx, Element(A, r)) for ident, idx, r in found], checked)


def check_left_symmetric(A: SuperAlgebra, workers: int | None = None) -> CheckReport:
    """(u v) w - u (v w) = (-1)^{|u||v|} ((v u) w - v (u w)) on basis triples.

    The identity is symmetric in the first two slots, so triples with
    ``i <= j`` cover all ``dim**3`` triples; violations are reported that way.
    """
    return _report("left_symmetric", A, _run_scan("left_symmetric", A, workers), A.dim ** 3)


def check_associative(A: SuperAlgebra, workers: int | None = None) -> CheckReport:
    return _report("associative", A, _run_scan("associative", A, workers), A.dim ** 3)


def check_novikov(A: SuperAlgebra, workers: int | None = None) -> CheckReport:
    """Right-commutativity ``(z x) y = (-1)^{|x||y|} (z y) x``; triples reported as (z, x, y)."""
    return _report("novikov", A, _run_scan("novikov", A, workers), A.dim ** 3)


def sub_adjacent(A: SuperAlgebra) -> SuperAlgebra:
    """Super-commutator algebra ``[u, v] = u v - (-1)^{|u||v|} v u``."""
    table: dict = {}
    par = A.parity
    for i in range(A.dim):
        for j in range(A.dim):
            row: Vec = dict(A.product(i, j))
            _axpy(row, -_sign(par[i], par[j]), A.product(j, i))
            if row:
                table[(i, j)] = row
    return SuperAlgebra.from_table(A.parity, table, A.names)


def check_super_jacobi(L: SuperAlgebra) -> CheckReport:
    """Super-antisymmetry on pairs and [u,[v,w]] = [[u,v],w] + (-1)^{|u||v|}[v,[u,w]] on triples."""
    n, par = L.dim, L.parity
    found = []
    for i in range(n):
        for j in range(i, n):
            r: Vec = dict(L.product(i, j))
            _axpy(r, _sign(par[i], par[j]), L.product(j, i))
            if r:
                found.append(("super_antisymmetry", (i, j), r))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                r = L.mul_vec({i: 1}, L.product(j, k))
                _axpy(r, -1, L.mul_vec(L.product(i, j), {k: 1}))
                _axpy(r, -_sign(par[i], par[j]), L.mul_vec({j: 1}, L.product(i, k)))
                if r:
                    found.append(("super_jacobi", (i, j, k), r))
    return _report("super_jacobi", L, found, n * (n + 1) // 2 + n ** 3)


def check_compatible(A: SuperAlgebra, L: SuperAlgebra) -> CheckReport:
    """A is left-symmetric and its super-commutator is exactly L's bracket."""
    if A.dim != L.dim or A.parity != L.parity:
        raise DimensionMismatch("algebras differ in dimension or parity")
    report = check_left_symmetric(A)
    sub = sub_adjacent(A)
    found = []
    for i in range(A.dim):
        for j in range(A.dim):
            r: Vec = dict(sub.product(i, j))
            _axpy(r, -1, L.product(i, j))
            if r:
                found.append(("bracket", (i, j), r))
    bracket = _report("bracket", A, found, A.dim ** 2)
    return CheckReport("compatible", report.violations + bracket.violations,
                       report.checked + bracket.checked)


def left_mult_operator(A: SuperAlgebra, i: int) -> list[list]:
    """Matrix of ``v -> x_i v``; column j holds the coordinates of ``x_i x_j``."""
    if not 0 <= i < A.dim:
        raise IndexOutOfRange(i)
    m = linalg.zeros(A.dim, A.dim)
    for j in range(A.dim):
        for k, c in A.product(i, j).items():
            m[k][j] = c
    return m


def right_mult_operator(A: SuperAlgebra, i: int) -> list[list]:
    """Matrix of ``v -> v x_i``; column j holds the coordinates of ``x_j x_i``."""
    if not 0 <= i < A.dim:
        raise IndexOutOfRange(i)
    m = linalg.zeros(A.dim, A.dim)
    for j in range(A.dim):
        for k, c in A.product(j, i).items():
            m[k][j] = c
    return m


def operator_of(A: SuperAlgebra, u: Element, side: str = "left") -> list[list]:
    m = linalg.zeros(A.dim, A.dim)
    for i, c in u.vec.items():
        op = left_mult_operator(A, i) if side == "left" else right_mult_operator(A, i)
        m = linalg.matadd(m, op, c)
    return m


def check_representation(L: SuperAlgebra, ops: Sequence[Sequence[Sequence]]) -> CheckReport:
    """``ops[u] ops[v] - (-1)^{|u||v|} ops[v] ops[u] = ops([u, v])`` for all basis pairs."""
    if len(ops) != L.dim:
        raise DimensionMismatch("need one operator per basis vector")
    size = len(ops[0])
    if any(len(op) != size or any(len(row) != size for row in op) for op in ops):
        raise DimensionMismatch("operators must be square and of equal size")
    par = L.parity
    found = []
    for i in range(L.dim):
        for j in range(L.dim):
            lhs = linalg.matmul(ops[i], ops[j])
            lhs = linalg.matadd(lhs, linalg.matmul(ops[j], ops[i]), -_sign(par[i], par[j]))
            for k, c in L.product(i, j).items():
                lhs = linalg.matadd(lhs, ops[k], -c)
            if not linalg.is_zero_matrix(lhs):
                found.append(Violation("representation", (i, j), lhs))
    return CheckReport("representation", found, L.dim ** 2)


def find_right_identities(A: SuperAlgebra) -> list[Element]:
    """Solve ``x e = x`` for every basis x.

    Returns ``[]`` when no right identity exists; otherwise the first element
    is a particular solution and the rest span the homogeneous solutions.
    """
    n = A.dim
    rows, rhs = [], []
    for i in range(n):
        # coordinate l of x_i e = sum_k e_k c_{ik}^l
        block = linalg.zeros(n, n)
        for k in range(n):
            for l, c in A.product(i, k).items():
                block[l][k] = c
        for l in range(n):
            rows.append(block[l])
            rhs.append(Fraction(1) if l == i else Fraction(0))
    sol = linalg.solve_affine(rows, rhs)
    if sol is None:
        return []
    part, kernel = sol
    return [A.element(part)] + [A.element(v) for v in kernel]


def unique_right_identity(A: SuperAlgebra) -> Element | None:
    sols = find_right_identities(A)
    if len(sols) == 1:
        return sols[0]
    return None


def restrict_even(A: SuperAlgebra) -> SuperAlgebra:
    even = A.even_indices()
    pos = {old: new for new, old in enumerate(even)}
    consts = []
    for a in even:
        for b in even:
            for k, c in A.product(a, b).items():
                consts.append((pos[a], pos[b], pos[k], c))
    return SuperAlgebra([0] * len(even), consts, [A.names[i] for i in even])


class _Span:
    """Incrementally maintained row-reduced basis of a subspace."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, Vec] = {}  # pivot -> reduced vector with 1 at pivot

    def reduce(self, v: Mapping) -> Vec:
        out = dict(v)
        for p, row in self.rows.items():
            c = out.get(p)
            if c:
                _axpy(out, -c, row)
        return out

    def add(self, v: Mapping) -> Vec | None:
        r = self.reduce(v)
        if not r:
            return None
        p = min(r)
        inv = 1 / r[p]
        r = {k: c * inv for k, c in r.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                _axpy(row, -c, r)
        self.rows[p] = r
        return r

    def basis(self) -> list[Vec]:
        return [self.rows[p] for p in sorted(self.rows)]


def ideal_closure(A: SuperAlgebra, seed: Element) -> list[Element]:
    """Smallest two-sided ideal containing ``seed`` (row-reduced spanning set)."""
    if seed.is_zero():
        raise ZeroSeed("seed element is zero")
    span = _Span(A.dim)
    queue = [span.add(seed.vec)]
    while queue:
        v = queue.pop()
        for b in range(A.dim):
            for w in (A.mul_vec({b: 1}, v), A.mul_vec(v, {b: 1})):
                if w:
                    added = span.add(w)
                    if added is not None:
                        queue.append(dict(added))
    return [Element(A, v) for v in span.basis()]


def is_even_map(A: SuperAlgebra, B: SuperAlgebra, P) -> bool:
    return all(P[r][c] == 0 for r in range(B.dim) for c in range(A.dim)
               if B.parity[r] != A.parity[c])


def check_homomorphism(A: SuperAlgebra, B: SuperAlgebra, P) -> CheckReport:
    """P (column j = image of the j-th basis vector) is an even isomorphism A -> B."""
    if A.dim != B.dim or len(P) != A.dim or any(len(r) != A.dim for r in P):
        raise DimensionMismatch("map and algebras must share one dimension")
    n = A.dim
    found = []
    for r in range(n):
        for c in range(n):
            if P[r][c] != 0 and B.parity[r] != A.parity[c]:
                found.append(Violation("parity", (r, c), P[r][c]))
    if linalg.det(P) == 0:
        found.append(Violation("invertibility", (), Fraction(0)))
    cols = [{r: P[r][c] for r in range(n) if P[r][c] != 0} for c in range(n)]
    for i in range(n):
        for j in range(n):
            lhs: Vec = {}
            for k, c in A.product(i, j).items():
                _axpy(lhs, c, cols[k])
            _axpy(lhs, -1, B.mul_vec(cols[i], cols[j]))
            if lhs:
                found.append(Violation("multiplicativity", (i, j), Element(B, lhs)))
    return CheckReport("homomorphism", found, n * n)


def transport(A: SuperAlgebra, P) -> SuperAlgebra:
    """Algebra structure on the same space making P an isomorphism from A."""
    n = A.dim
    Pinv = linalg.inverse(P)
    cols = [{r: P[r][c] for r in range(n) if P[r][c] != 0} for c in range(n)]
    pinv_cols = [{r: Pinv[r][c] for r in range(n) if Pinv[r][c] != 0} for c in range(n)]
    table = {}
    for i in range(n):
        for j in range(n):
            # x_i * x_j = P(P^{-1} x_i . P^{-1} x_j)
            prod = A.mul_vec(pinv_cols[i], pinv_cols[j])
            out: Vec = {}
            for k, c in prod.items():
                _axpy(out, c, cols[k])
            if out:
                table[(i, j)] = out
    return SuperAlgebra.from_table(A.parity, table, A.names)
