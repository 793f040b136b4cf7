"""Transcribed structures and the obstruction table for simple Lie superalgebras.

Operator matrices are written as printed, column convention: column j of
L(x_i) holds the coordinates of x_i x_j.  In the 8-dimensional entries the
basis is (x1, x2, x3, x4, y1, y2, y3, y4); for L(x_i) the two diagonal 4x4
blocks are given, for L(y_j) the two off-diagonal ones.  ``B`` and ``G``
inside a matrix entry stand for 1+a and 1-a.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .exact_arith import parse_scalar
from .graded_core import SuperAlgebra


class UnknownKey(KeyError):
    pass


class MissingParameter(ValueError):
    pass


class ParameterOutOfRange(ValueError):
    pass


def _entry(text: str):
    return parse_scalar(text.replace("B", "(1+a)").replace("G", "(1-a)"))


def _mat(rows: str) -> list[list]:
    return [[_entry(t) for t in row.split()] for row in rows.strip().split(";")]


ZERO4 = "0 0 0 0; 0 0 0 0; 0 0 0 0; 0 0 0 0"

GL2_NAMES = ("x", "y", "h", "z")
A01_NAMES = ("x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4")
A01_PARITY = (0, 0, 0, 0, 1, 1, 1, 1)


def algebra_from_left_operators(parity, names, ops: Sequence[list[list]]) -> SuperAlgebra:
    n = len(parity)
    consts = []
    for i, op in enumerate(ops):
        for j in range(n):
            for k in range(n):
                c = op[k][j]
                if c != 0:
                    consts.append((i, j, k, c))
    return SuperAlgebra(parity, consts, names)


def _block_ops(even_blocks, odd_blocks, y_top_right, y_bottom_left) -> list[list[list]]:
    ops = []
    for E, O in zip(even_blocks, odd_blocks):
        E, O = _mat(E), _mat(O)
        m = [[Fraction(0)] * 8 for _ in range(8)]
        for r in range(4):
            for c in range(4):
                m[r][c] = E[r][c]
                m[r + 4][c + 4] = O[r][c]
        ops.append(m)
    for TR, BL in zip(y_top_right, y_bottom_left):
        TR, BL = _mat(TR), _mat(BL)
        m = [[Fraction(0)] * 8 for _ in range(8)]
        for r in range(4):
            for c in range(4):
                m[r][c + 4] = TR[r][c]
                m[r + 4][c] = BL[r][c]
        ops.append(m)
    return ops


# gl(2) with x = e12, y = e21, h = e11 - e22, z = e11 + e22 -----------------

def gl2() -> SuperAlgebra:
    x, y, h, z = range(4)
    br = [(x, y, h, 1), (h, x, x, 2), (h, y, y, -2)]
    consts = []
    for i, j, k, c in br:
        consts += [(i, j, k, c), (j, i, k, -c)]
    return SuperAlgebra((0,) * 4, consts, GL2_NAMES)


A1_OPS = (
    "0 1/2 -1 1; 0 0 0 0; 0 1/2 0 0; 0 1/2 0 0",
    "1/2 0 0 -1/2; 0 0 1 1; -1/2 0 0 1/2; 1/2 0 0 -1/2",
    "1 0 1 -1; 0 -1 0 0; 0 0 0 1; 0 0 1 0",
    "1 -1/2 -1 -1; 0 1 0 0; 0 1/2 1 0; 0 -1/2 0 1",
)

A2_OPS = (
    "0 0 -1 1+a; 0 0 0 0; 0 (1+a)/2 0 0; 0 1/2 0 0",
    "0 0 0 0; 0 0 1 1-a; (a-1)/2 0 0 0; 1/2 0 0 0",
    "1 0 0 0; 0 -1 0 0; 0 0 a 1-a^2; 0 0 1 -a",
    "1+a 0 0 0; 0 1-a 0 0; 0 0 1-a^2 a^3-a; 0 0 -a 1+a^2",
)

A3_OPS = (
    "0 0 -1 1; 0 0 0 0; 3 0 0 0; 3 3 0 0",
    "0 0 1 0; 0 0 -1 1; -1 -1/4 0 0; 3 3/4 0 0",
    "1 1 0 0; 0 -3 0 0; 0 0 2 1; 0 0 3 0",
    "1 0 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 1",
)


def _lsa(ops) -> SuperAlgebra:
    return algebra_from_left_operators((0,) * 4, GL2_NAMES, [_mat(o) for o in ops])


# A(0,1): x1 = e23, x2 = e32, x3 = e22 - e33, x4 = 2e11 + e22 + e33,
#         y1 = e12, y2 = e13, y3 = e21, y4 = e31

A01_BRACKETS = {
    # [x_i, x_j]
    ("x1", "x2"): "x3", ("x3", "x1"): "2*x1", ("x3", "x2"): "-2*x2",
    # [x_i, y_j]
    ("x1", "y1"): "-y2", ("x1", "y4"): "y3",
    ("x2", "y2"): "-y1", ("x2", "y3"): "y4",
    ("x3", "y1"): "-y1", ("x3", "y2"): "y2", ("x3", "y3"): "y3", ("x3", "y4"): "-y4",
    ("x4", "y1"): "y1", ("x4", "y2"): "y2", ("x4", "y3"): "-y3", ("x4", "y4"): "-y4",
    # [y_i, y_j], symmetric
    ("y1", "y3"): "1/2*x3 + 1/2*x4", ("y1", "y4"): "x2", ("y2", "y3"): "x1",
    ("y2", "y4"): "1/2*x4 - 1/2*x3",
}


def parse_combination(text: str, names) -> dict[int, Fraction]:
    out = {}
    for term in text.replace("- ", "+ -").split("+"):
        term = term.strip()
        if not term:
            continue
        if "*" in term:
            c, name = term.rsplit("*", 1)
        elif term.startswith("-"):
            c, name = "-1", term[1:]
        else:
            c, name = "1", term
        out[names.index(name.strip())] = parse_scalar(c)
    return out


def a01() -> SuperAlgebra:
    consts = {}
    for (u, v), rhs in A01_BRACKETS.items():
        i, j = A01_NAMES.index(u), A01_NAMES.index(v)
        sym = A01_PARITY[i] and A01_PARITY[j]
        for k, c in parse_combination(rhs, A01_NAMES).items():
            consts[(i, j, k)] = c
            consts[(j, i, k)] = c if sym else -c
    return SuperAlgebra(A01_PARITY, [(i, j, k, c) for (i, j, k), c in consts.items()], A01_NAMES)


B1_BLOCKS = dict(
    even=A1_OPS,
    odd=(ZERO4, ZERO4, ZERO4, "2 0 0 0; -1 2 0 0; 0 0 0 1; 0 0 0 0"),
    top_right=(
        "0 0 0 1/4; 0 0 0 0; 0 0 0 -1/4; 0 0 0 1/4",
        "0 0 0 -1/2; 0 0 0 0; 0 0 0 0; 0 0 0 0",
        "0 1 0 0; 0 0 0 0; 1/2 0 0 0; 1/2 0 0 0",
        "-1/4 1/2 0 0; 1 0 0 0; 1/4 -1/2 0 0; -1/4 1/2 0 0",
    ),
    bottom_left=(
        "0 0 1 1; 1 0 0 -1; 0 0 0 0; 0 0 0 0",
        "0 1 0 0; 0 0 -1 1; 0 0 0 0; 0 0 0 0",
        "0 0 0 0; 0 0 0 0; 0 0 -1 1; 0 -1 0 0",
        "0 0 0 0; 0 0 0 0; -1 0 0 1; 0 0 1 1",
    ),
)

B2_BLOCKS = dict(
    even=(
        "0 0 -1 B; 0 0 0 0; 0 B/2 0 0; 0 1/2 0 0",
        "0 0 0 0; 0 0 1 G; -G/2 0 0 0; 1/2 0 0 0",
        "1 0 0 0; 0 -1 0 0; 0 0 a B*G; 0 0 1 -a",
        "B 0 0 0; 0 G 0 0; 0 0 B*G -a*B*G; 0 0 -a 1+a^2",
    ),
    odd=(ZERO4, ZERO4, ZERO4, "2-a 0 0 0; 0 2+a 0 0; 0 0 a 0; 0 0 0 -a"),
    top_right=(
        "0 0 0 0; 0 0 0 a*B/4; 0 0 -a*G/4 0; 0 0 a/4 0",
        "0 0 -a/2 0; 0 0 0 0; 0 0 0 -a*B/4; 0 0 0 -a/4",
        "0 1+a/2 0 0; 0 0 0 0; (a*G+2)/4 0 0 0; (2-a)/4 0 0 0",
        "0 0 0 0; 1-a*B/4 0 0 0; 0 (a*B-2)/4 0 0; 0 (a+2)/4 0 0",
    ),
    bottom_left=(
        "0 0 1 G; 1 0 0 0; 0 0 0 0; 0 0 0 0",
        "0 1 0 0; 0 0 -1 B; 0 0 0 0; 0 0 0 0",
        "0 0 0 0; 0 0 0 0; 0 0 -1 B; 0 -1 0 0",
        "0 0 0 0; 0 0 0 0; -1 0 0 0; 0 0 1 G",
    ),
)

B2TILDE_BLOCKS = dict(
    even=(
        "0 0 -1 0; 0 0 0 0; 0 0 0 0; 0 1/2 0 0",
        "0 0 0 0; 0 0 1 2; -1 0 0 0; 1/2 0 0 0",
        "1 0 0 0; 0 -1 0 0; 0 0 -1 0; 0 0 1 1",
        "0 0 0 0; 0 2 0 0; 0 0 0 0; 0 0 1 2",
    ),
    odd=(
        "0 0 0 0; 1 0 0 0; 0 1/2 0 1; -3/2 0 0 0",
        "0 -1 0 -2; 0 0 -2 0; 0 0 0 0; 0 0 3 0",
        "-2 0 0 0; 0 0 0 0; 0 0 2 0; 0 0 0 0",
        "1 0 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 1",
    ),
    top_right=(
        "0 0 0 0; 0 3/4 0 1; 0 0 0 0; 0 0 3/4 0",
        "0 0 0 0; -3/4 0 0 0; 0 0 0 0; 0 0 0 1/4",
        "0 1 0 1; 0 0 0 0; 1/2 0 0 0; -1/4 0 0 0",
        "0 0 -1 0; 0 0 0 0; 0 -1/2 0 0; 0 1/4 0 0",
    ),
    bottom_left=(
        "0 0 -1 0; 2 0 0 0; 0 0 0 0; -3/2 0 0 0",
        "0 0 0 0; 0 0 -1 0; 1/2 0 0 0; 0 0 0 0",
        "0 0 0 0; 0 -2 0 0; 0 0 1 2; 0 2 0 0",
        "0 -2 0 0; 0 0 0 0; 0 0 0 0; 0 0 1 2",
    ),
)


def _lssa(blocks) -> SuperAlgebra:
    ops = _block_ops(blocks["even"], blocks["odd"], blocks["top_right"], blocks["bottom_left"])
    return algebra_from_left_operators(A01_PARITY, A01_NAMES, ops)


# documented corrections of misprinted entries ----------------------------

PRINTED_BLOCKS = {"B1": B1_BLOCKS, "B2alpha": B2_BLOCKS, "B2tilde_m1": B2TILDE_BLOCKS}


def load_patch(key: str) -> dict | None:
    """The correction record shipped for ``key``, or None."""
    try:
        text = resources.files("superlsa").joinpath(f"data/{key}.patch.json").read_text()
    except FileNotFoundError:
        return None
    return json.loads(text)


def _op_slot(operator: str) -> int:
    # "L(y3)" -> 2, "L(x1)" -> 0; block tuples are indexed within x or y
    return int(operator[3:-1]) - 1


def apply_patch(blocks: dict, patch: dict) -> dict:
    out = {k: list(v) for k, v in blocks.items()}
    for e in patch["entries"]:
        slot = _op_slot(e["operator"])
        rows = [row.split() for row in out[e["block"]][slot].strip().split(";")]
        cell = rows[e["row"] - 1][e["col"] - 1]
        if cell != e["printed"]:
            raise ValueError(f"patch for {patch['key']} expects {e['printed']!r} at "
                             f"{e['operator']} {e['block']} ({e['row']},{e['col']}), found {cell!r}")
        rows[e["row"] - 1][e["col"] - 1] = e["corrected"]
        out[e["block"]][slot] = "; ".join(" ".join(r) for r in rows)
    return {k: tuple(v) for k, v in out.items()}


def _lssa_entry(key: str, patched: bool) -> SuperAlgebra:
    blocks = PRINTED_BLOCKS[key]
    patch = load_patch(key) if patched else None
    return _lssa(apply_patch(blocks, patch) if patch else blocks)


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    kind: str  # lie_superalgebra | lssa | left_symmetric_algebra
    parameters: tuple
    provenance: str
    underlying: str | None = None
    basis: tuple = ()
    notes: str = ""
    right_identity: str | None = None

    def summary(self) -> dict:
        return {
            "key": self.key, "kind": self.kind, "parameters": list(self.parameters),
            "provenance": self.provenance, "underlying_lie": self.underlying,
            "basis": list(self.basis), "right_identity": self.right_identity,
            "notes": self.notes,
        }


ENTRIES = (
    CatalogEntry("gl2", "lie_superalgebra", (), "Section 3, basis before Thm 3.2",
                 basis=GL2_NAMES, notes="purely even; x=e12, y=e21, h=e11-e22, z=e11+e22"),
    CatalogEntry("A01", "lie_superalgebra", (), "Section 3, Eqs. (3.1)-(3.2) and bracket table",
                 basis=A01_NAMES, notes="even part isomorphic to gl(2) via x,y,h,z -> x1,x2,x3,x4"),
    CatalogEntry("A1", "left_symmetric_algebra", (), "Thm 3.2(1)", "gl2", GL2_NAMES),
    CatalogEntry("A2alpha", "left_symmetric_algebra", ("alpha",), "Thm 3.2(2)", "gl2", GL2_NAMES,
                 "A2,alpha ~ A2,alpha' iff alpha^2 = alpha'^2; associative iff alpha = 0"),
    CatalogEntry("A3", "left_symmetric_algebra", (), "Thm 3.2(3)", "gl2", GL2_NAMES),
    CatalogEntry("B1", "lssa", (), "Thm 3.4(1)", "A01", A01_NAMES, right_identity="x1 + x4"),
    CatalogEntry("B2alpha", "lssa", ("alpha",), "Thm 3.4(2)", "A01", A01_NAMES,
                 "beta = 1+alpha and gamma = 1-alpha expanded", "alpha*x3 + x4"),
    CatalogEntry("B2tilde_m1", "lssa", (), "Thm 3.4(3)", "A01", A01_NAMES,
                 "exceptional structure with even part A2,-1", "-x3 + x4"),
    CatalogEntry("Wn", "lssa", ("n",), "Section 1, circle product on W(n)", "Wn_lie",
                 notes="n >= 3 for simplicity of W(n); basis xi{S}d{i}, dim n*2^n",
                 right_identity="sum_j xi{j}d{j}"),
)

_BY_KEY = {e.key: e for e in ENTRIES}

_BUILDERS = {
    "gl2": gl2,
    "A01": a01,
    "A1": lambda: _lsa(A1_OPS),
    "A2alpha": lambda: _lsa(A2_OPS),
    "A3": lambda: _lsa(A3_OPS),
}

_CACHE: dict = {}


def _parse_key(key: str) -> tuple[str, int | None]:
    if key.startswith("Wn(") and key.endswith(")"):
        return "Wn", int(key[3:-1])
    return key, None


def entry(key: str) -> CatalogEntry:
    base, _ = _parse_key(key)
    if base not in _BY_KEY:
        raise UnknownKey(key)
    return _BY_KEY[base]


def instantiate(key: str, alpha=None, n: int | None = None, patched: bool = True) -> SuperAlgebra:
    """Exact algebra for a catalog key; parametric entries stay symbolic when alpha is None.

    Entries with a shipped correction record (see :func:`load_patch`) use the
    corrected values unless ``patched`` is False, which gives the literal
    transcription.
    """
    base, n_key = _parse_key(key)
    if base not in _BY_KEY:
        raise UnknownKey(key)
    if base in ("Wn", "Wn_lie"):
        n = n if n is not None else n_key
        if n is None:
            raise MissingParameter("Wn needs n")
        from .cartan_w import build_wn, derivation_bracket_algebra
        if base == "Wn_lie":
            return _cached(("Wn_lie", n), lambda: derivation_bracket_algebra(n))
        return _cached(("Wn", n), lambda: build_wn(n))
    if alpha is not None and "alpha" not in _BY_KEY[base].parameters:
        raise ValueError(f"{key} takes no alpha parameter")
    if base in PRINTED_BLOCKS:
        alg = _cached((base, patched), lambda: _lssa_entry(base, patched))
    else:
        alg = _cached(base, _BUILDERS[base])
    if alpha is not None:
        alg = alg.specialize(Fraction(alpha))
    return alg


def underlying_lie(key: str, n: int | None = None) -> SuperAlgebra | None:
    e = entry(key)
    if e.underlying is None:
        return None
    if e.underlying == "Wn_lie":
        _, n_key = _parse_key(key)
        n = n if n is not None else n_key
        from .cartan_w import derivation_bracket_algebra
        return _cached(("Wn_lie", n), lambda: derivation_bracket_algebra(n))
    return instantiate(e.underlying)


def _cached(k, build):
    if k not in _CACHE:
        _CACHE[k] = build()
    return _CACHE[k]


def list_entries() -> list[dict]:
    out = []
    for e in ENTRIES:
        d = e.summary()
        patch = load_patch(e.key)
        d["patch"] = patch["summary"] if patch else None
        out.append(d)
    out.append({"key": "D(2,1;alpha)", "kind": "note", "provenance": "Section 2",
                "notes": ("D(2,1;alpha) ~ D(2,1;beta) iff alpha and beta lie in one orbit of the "
                          "order-6 group generated by alpha -> -1-alpha and alpha -> 1/alpha; "
                          "alpha not in {0, -1}")})
    return out


# obstruction table -----------------------------------------------------

NO_LSSA = "NoCompatibleLSSA"
EXISTS = "ExistsConstruction"
OPEN = "OpenOrKnownFamily"

SEMISIMPLE_RULE = "Lemma 2.1 + Lemma 2.2 (semisimple even part has no compatible LSA)"


@dataclass
class FamilyVerdict:
    family: str
    even_part: str
    verdict: str
    rule: str
    catalog_key: str | None = None
    constraints: str = ""
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"family": self.family, "even_part": self.even_part, "verdict": self.verdict,
                "rule": self.rule, "catalog_key": self.catalog_key, "constraints": self.constraints}


FAMILY_ALIASES = {
    "A": "A", "A(m,n)": "A", "A(n,n)": "A",
    "B": "B", "B(m,n)": "B", "C": "C", "C(n)": "C", "D": "D", "D(m,n)": "D",
    "D21": "D21", "D(2,1;alpha)": "D21", "D(2,1)": "D21",
    "F4": "F4", "F(4)": "F4", "G3": "G3", "G(3)": "G3",
    "P": "P", "P(n)": "P", "Q": "Q", "Q(n)": "Q",
    "W": "W", "W(n)": "W", "S": "S", "S(n)": "S",
    "Stilde": "Stilde", "S~(n)": "Stilde", "Stilde(n)": "Stilde", "H": "H", "H(n)": "H",
}

# one representative parameter tuple per family of Kac's list; A(m,n) with m != n
# appears twice since (0,1) is the one case with a construction
KAC_FAMILIES = (
    ("A", (0, 1)), ("A", (0, 2)), ("A", (1, 1)), ("B", (1, 1)), ("C", (3,)), ("D", (2, 1)), ("D21", (1,)),
    ("F4", ()), ("G3", ()), ("P", (2,)), ("Q", (2,)), ("W", (3,)), ("S", (4,)),
    ("Stilde", (4,)), ("H", (5,)),
)


def _need(params, k, family):
    if len(params) != k:
        raise ParameterOutOfRange(f"{family} takes {k} parameter(s), got {len(params)}")


def _bad(msg):
    raise ParameterOutOfRange(msg)


def _series(letter: str, k: int) -> str:
    return f"{letter}_{k}"


def obstruction_report(family: str, params: Sequence = ()) -> FamilyVerdict:
    fam = FAMILY_ALIASES.get(family.replace(" ", ""))
    if fam is None:
        raise UnknownKey(family)
    params = tuple(params)

    if fam == "A":
        _need(params, 2, "A(m,n)")
        m, n = map(int, params)
        if m == n:
            if n < 1:
                _bad("A(n,n) requires n >= 1")
            return FamilyVerdict(f"A({n},{n})", f"{_series('A', n)} + {_series('A', n)}", NO_LSSA,
                                 SEMISIMPLE_RULE, constraints="n >= 1")
        if m > n:
            m, n = n, m  # A(m,n) ~ A(n,m)
        if m < 0:
            _bad("A(m,n) requires m >= 0")
        even = f"{_series('A', m)} + {_series('A', n)} + C" if m > 0 else f"{_series('A', n)} + C"
        if (m, n) == (0, 1):
            return FamilyVerdict("A(0,1)", "gl(2) = A_1 + C", EXISTS,
                                 "Thm 3.4 (explicit B1, B2alpha, B2tilde_m1)", "B1",
                                 "n > m >= 0")
        return FamilyVerdict(f"A({m},{n})", even, OPEN,
                             "Question 3.7: compatible LSSAs on A(m,n), (m,n) != (0,1), remain open",
                             constraints="n > m >= 0")
    if fam == "B":
        _need(params, 2, "B(m,n)")
        m, n = map(int, params)
        if m < 0 or n < 1:
            _bad("B(m,n) requires m >= 0, n >= 1")
        even = f"{_series('B', m)} + {_series('C', n)}" if m > 0 else _series("C", n)
        return FamilyVerdict(f"B({m},{n})", even, NO_LSSA, SEMISIMPLE_RULE,
                             constraints="m >= 0, n >= 1")
    if fam == "C":
        _need(params, 1, "C(n)")
        (n,) = map(int, params)
        if n < 3:
            _bad("C(n) requires n >= 3")
        return FamilyVerdict(f"C({n})", f"{_series('C', n - 1)} + C (reductive, simple part not of type A)",
                             NO_LSSA,
                             "Lemma 2.1 + Lemma 2.3 (reductive even part C_{n-1} + C is not of type A)",
                             constraints="n >= 3")
    if fam == "D":
        _need(params, 2, "D(m,n)")
        m, n = map(int, params)
        if m < 2 or n < 1:
            _bad("D(m,n) requires m >= 2, n >= 1")
        return FamilyVerdict(f"D({m},{n})", f"{_series('D', m)} + {_series('C', n)}", NO_LSSA,
                             SEMISIMPLE_RULE, constraints="m >= 2, n >= 1")
    if fam == "D21":
        _need(params, 1, "D(2,1;alpha)")
        alpha = Fraction(params[0])
        if alpha in (0, -1):
            _bad("D(2,1;alpha) requires alpha not in {0, -1}")
        return FamilyVerdict(f"D(2,1;{alpha})", "A_1 + A_1 + A_1", NO_LSSA, SEMISIMPLE_RULE,
                             constraints="alpha != 0, -1; isomorphic within orbits of "
                                         "alpha -> -1-alpha, alpha -> 1/alpha")
    if fam == "F4":
        _need(params, 0, "F(4)")
        return FamilyVerdict("F(4)", "B_3 + A_1", NO_LSSA, SEMISIMPLE_RULE)
    if fam == "G3":
        _need(params, 0, "G(3)")
        return FamilyVerdict("G(3)", "G_2 + A_1", NO_LSSA, SEMISIMPLE_RULE)
    if fam in ("P", "Q"):
        _need(params, 1, f"{fam}(n)")
        (n,) = map(int, params)
        if n < 2:
            _bad(f"{fam}(n) requires n >= 2")
        return FamilyVerdict(f"{fam}({n})", _series("A", n), NO_LSSA, SEMISIMPLE_RULE,
                             constraints="n >= 2")
    if fam == "W":
        _need(params, 1, "W(n)")
        (n,) = map(int, params)
        if n < 3:
            _bad("W(n) requires n >= 3")
        return FamilyVerdict(f"W({n})", f"gl({n}) in Z-degree zero", EXISTS,
                             "Section 1: (W(n), circle) is a compatible LSSA", f"Wn({n})",
                             "n >= 3")
    if fam in ("S", "Stilde"):
        _need(params, 1, f"{fam}(n)")
        (n,) = map(int, params)
        if n < 4 or (fam == "Stilde" and n % 2):
            _bad(f"{fam}(n) requires n >= 4" + (" and n even" if fam == "Stilde" else ""))
        name = "S" if fam == "S" else "S~"
        return FamilyVerdict(f"{name}({n})", f"degree-zero part sl({n}) (simple)", NO_LSSA,
                             "Lemma 2.1 + Lemma 2.2 applied to the simple Z-degree-zero part",
                             constraints="n >= 4" + (", n even" if fam == "Stilde" else ""))
    if fam == "H":
        _need(params, 1, "H(n)")
        (n,) = map(int, params)
        if n < 5:
            _bad("H(n) requires n >= 5")
        return FamilyVerdict(f"H({n})", f"degree-zero part so({n}) (simple)", NO_LSSA,
                             "Lemma 2.1 + Lemma 2.2 applied to the simple Z-degree-zero part",
                             constraints="n >= 5")
    raise UnknownKey(family)  # pragma: no cover


def families_table() -> list[FamilyVerdict]:
    return [obstruction_report(f, p) for f, p in KAC_FAMILIES]
