"""The eight acceptance criteria, each checked at zero tolerance.

Every test records one pass/fail line (printed in the terminal summary by
conftest) before asserting, so a red criterion still reports what it saw.
"""

import json
import random
import time
from fractions import Fraction
from itertools import combinations, product

import oracle
from conftest import ACCEPTANCE
from superlsa import catalog, cli, graded_core as gc, iso_lab
from superlsa.cartan_w import build_wn, derivation_bracket_algebra, euler_element, wn_basis
from superlsa.exact_arith import ALPHA, numerator_poly
from superlsa.structure_solver import SolverPoly, branch_and_solve, make_system


def record(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    assert ok, detail


def run_cli(argv, capsys):
    code = cli.main(argv + ["--format", "json"])
    return code, json.loads(capsys.readouterr().out)


# 1 ------------------------------------------------------------------------------

def test_c1_catalog_validity():
    lie = catalog.a01()
    fails, slow = [], []
    for key in ("B1", "B2tilde_m1", "B2alpha"):
        t = time.perf_counter()
        A = catalog.instantiate(key)
        ls = gc.check_left_symmetric(A)
        comp = gc.check_compatible(A, lie)
        dt = time.perf_counter() - t
        if not (ls.verdict and comp.verdict):
            fails.append(f"{key}: {len(ls.violations)} LS / {len(comp.violations)} bracket violations")
        if dt >= 1:
            slow.append(f"{key} {dt:.2f}s")
    record(1, not fails and not slow,
           "B1, B2tilde_m1, formal B2alpha left-symmetric and compatible with A(0,1)"
           + (f"; failures: {fails}" if fails else "") + (f"; too slow: {slow}" if slow else ""))


# 2 ------------------------------------------------------------------------------

def test_c2_right_identities():
    expected = {
        "B1": {0: 1, 3: 1},
        "B2alpha": {2: ALPHA, 3: 1},
        "B2tilde_m1": {2: -1, 3: 1},
    }
    problems = []
    for key, want in expected.items():
        A = catalog.instantiate(key)
        sols = gc.find_right_identities(A)
        if len(sols) != 1:
            extra = ", ".join(v.render() for v in sols[1:])
            problems.append(f"{key}: solution set {sols[0].render()} + span{{{extra}}}, not a single point")
            continue
        if sols[0] != A.element(want) or sols[0].parity() != 0:
            problems.append(f"{key}: got {sols[0].render()}")
    record(2, not problems, "exactly one right identity per entry, even and as declared"
           + (f"; {'; '.join(problems)}" if problems else ""))


# 3 ------------------------------------------------------------------------------

def test_c3_associativity_boundary():
    A = catalog.instantiate("A2alpha")
    rep = gc.check_associative(A)
    coeffs = [c for v in rep.violations for c in v.residual.vec.values()]
    divisible = all(numerator_poly(c)(Fraction(0)) == 0 for c in coeffs)
    at_zero = gc.check_associative(catalog.instantiate("A2alpha", alpha=0)).verdict
    B = catalog.instantiate("B2alpha", alpha=0)
    rep_b = gc.check_associative(B)
    x3, y1 = B.index("x3"), B.index("y1")
    witness = [v for v in rep_b.violations if v.indices == (x3, x3, y1)]
    witness_ok = len(witness) == 1 and witness[0].residual == 2 * B.basis(y1)
    ok = (not rep.verdict) and bool(coeffs) and divisible and at_zero and (not rep_b.verdict) and witness_ok
    record(3, ok, f"formal A2alpha: {len(rep.violations)} failing triples, all residuals divisible by a: "
                  f"{divisible}; A2,0 associative: {at_zero}; B2,0 witness (x3,x3,y1) -> 2*y1: {witness_ok}")


# 4 ------------------------------------------------------------------------------

def _wn_suite(n):
    t = time.perf_counter()
    W = build_wn(n)
    ls = gc.check_left_symmetric(W)
    dt = time.perf_counter() - t
    bracket = gc.sub_adjacent(W)
    circle_o, bracket_o = oracle.wn_tables(n, wn_basis(n))
    oracle_ok = oracle.table_of(bracket) == bracket_o and oracle.table_of(W) == circle_o
    engine_ok = bracket.same_structure(derivation_bracket_algebra(n))
    E = W.element(euler_element(n))
    euler_ok = all(W.basis(i) * E == W.basis(i) for i in range(W.dim))
    return W.dim, ls.verdict and ls.checked == W.dim ** 3, dt, oracle_ok and engine_ok, euler_ok


def test_c4_wn_construction():
    d3, ls3, t3, br3, eu3 = _wn_suite(3)
    d4, ls4, t4, br4, eu4 = _wn_suite(4)
    ok = (d3, d4) == (24, 64) and ls3 and ls4 and t3 < 5 and t4 < 120 and br3 and br4 and eu3 and eu4
    record(4, ok, f"W(3): dim {d3}, LS {ls3} in {t3:.2f}s, bracket oracle {br3}, Euler {eu3}; "
                  f"W(4): dim {d4}, LS {ls4} in {t4:.2f}s, bracket oracle {br4}, Euler {eu4}")


# 5 ------------------------------------------------------------------------------

def test_c5_classification_reproduction(capsys):
    code1, r1 = run_cli(["solve", "--even", "A1"], capsys)
    cases = {c["label"]: c["outcome"] for c in r1["results"]["cases"]}
    fams = r1["results"]["families"]
    survivor_ok = False
    if len(fams) == 1:
        a = fams[0]["assignments"]
        survivor_ok = (a.get("e14") == a.get("e44") == "1/4" and a.get("e34") == "-1/4"
                       and a.get("f14") == "-1/2" and fams[0]["catalog_matches"] == ["B1"]
                       and gc.SuperAlgebra.from_json_dict(fams[0]["algebra"]) == catalog.instantiate("B1"))
    four = len(r1["results"]["cases"]) == 4 and cases == {
        "a": "solution", "b": "contradiction", "c": "contradiction", "d": "contradiction"}

    code3, r3 = run_cli(["solve", "--even", "A3"], capsys)
    empty = not r3["results"]["families"] and not r3["results"]["stuck"]

    code2, r2 = run_cli(["solve", "--even", "A2alpha"], capsys)
    f2 = r2["results"]["families"]
    b2_ok = (len(f2) == 1 and f2[0]["catalog_matches"] == ["B2alpha"] and f2[0]["verified"] is True
             and gc.SuperAlgebra.from_json_dict(f2[0]["algebra"]) == catalog.instantiate("B2alpha")
             and not r2["results"]["stuck"])
    ok = four and survivor_ok and empty and b2_ok and code1 == code2 == code3 == 0
    record(5, ok, f"A1: 4 cases {cases}, survivor is B1: {survivor_ok}; A3 empty: {empty}; "
                  f"A2alpha materializes B2alpha: {b2_ok}")


# 6 ------------------------------------------------------------------------------

SIX = {
    "B1": ("B1", None),
    "B2,1": ("B2alpha", 1),
    "B2,-1": ("B2alpha", -1),
    "B2tilde,-1": ("B2tilde_m1", None),
}


def test_c6_non_isomorphism_suite():
    algs = {name: catalog.instantiate(key, alpha=a) for name, (key, a) in SIX.items()}
    verdicts, problems = {}, []
    q_replay = False
    for u, v in combinations(SIX, 2):
        letter = "q" if (u, v) == ("B2,-1", "B2tilde,-1") else "p"
        cert = iso_lab.distinguish(algs[u], algs[v], letter=letter)
        verdicts[(u, v)] = cert.kind
        if not (cert.definitive and cert.isomorphic is False and iso_lab.verify_certificate(cert, algs[u], algs[v])):
            extra = ""
            if cert.kind == iso_lab.WITNESS:
                ok_p = gc.check_homomorphism(algs[u], algs[v], cert.matrix).verdict
                extra = f" (an even isomorphism, check_homomorphism {ok_p})"
            problems.append(f"({u}, {v}) -> {cert.kind}{extra}")
        if letter == "q" and cert.kind == iso_lab.CONTRADICTION:
            hom = iso_lab.homomorphism_constraints(algs[u], algs[v], "q")
            target = "row 5 of P vanishes: q55 = q56 = q57 = q58 = 0"
            q_replay = any(b["final"] == target and iso_lab.replay_branch(hom, b["trail"]) == target
                           for b in cert.branches)
    if not q_replay:
        problems.append("q55 = q56 = q57 = q58 = 0 branch not replayed")
    # the (B2,1, B2,-1) run has to close on kp65p78 = 1 against (1+a)/2 at a = 1
    k_pair = verdicts.get(("B2,1", "B2,-1")) == iso_lab.CONTRADICTION
    if not k_pair:
        problems.append("no kp65p78 = 1 vs (1+a)/2 contradiction: the pair is isomorphic")
    record(6, not problems, "six pairwise certificates: "
           + ", ".join(f"{u}/{v}={k}" for (u, v), k in verdicts.items())
           + (f"; {'; '.join(problems)}" if problems else ""))


# 7 ------------------------------------------------------------------------------

FAMILY_EXPECTATIONS = [
    (("A", (1, 1)), catalog.NO_LSSA, "A_1 + A_1"),
    (("A", (3, 3)), catalog.NO_LSSA, "A_3 + A_3"),
    (("B", (1, 1)), catalog.NO_LSSA, "B_1 + C_1"),
    (("B", (0, 2)), catalog.NO_LSSA, "C_2"),
    (("C", (3,)), catalog.NO_LSSA, "reductive"),
    (("D", (2, 1)), catalog.NO_LSSA, "D_2 + C_1"),
    (("D(2,1;alpha)", (2,)), catalog.NO_LSSA, "A_1 + A_1 + A_1"),
    (("F(4)", ()), catalog.NO_LSSA, "B_3 + A_1"),
    (("G(3)", ()), catalog.NO_LSSA, "G_2 + A_1"),
    (("P", (3,)), catalog.NO_LSSA, "A_3"),
    (("Q", (3,)), catalog.NO_LSSA, "A_3"),
    (("S", (5,)), catalog.NO_LSSA, "sl(5)"),
    (("Stilde", (6,)), catalog.NO_LSSA, "sl(6)"),
    (("H", (6,)), catalog.NO_LSSA, "so(6)"),
    (("W", (3,)), catalog.EXISTS, "gl(3)"),
    (("A", (0, 1)), catalog.EXISTS, "gl(2)"),
    (("A", (1, 2)), catalog.OPEN, "A_1 + A_2 + C"),
    (("A", (0, 3)), catalog.OPEN, "A_3 + C"),
]


def test_c7_obstruction_table():
    bad = []
    for (fam, params), verdict, even in FAMILY_EXPECTATIONS:
        v = catalog.obstruction_report(fam, params)
        rule_ok = True
        if verdict == catalog.NO_LSSA:
            rule_ok = "Lemma 2.1" in v.rule and ("Lemma 2.2" in v.rule or "Lemma 2.3" in v.rule)
        if verdict == catalog.EXISTS:
            rule_ok = v.catalog_key is not None
        if v.verdict != verdict or even not in v.even_part or not rule_ok:
            bad.append(f"{fam}{params}: {v.verdict} / {v.even_part} / {v.rule}")
    kinds: dict[str, set] = {}
    for fam, params in catalog.KAC_FAMILIES:
        v = catalog.obstruction_report(fam, params)
        name = fam
        if fam == "A":
            name = "A(n,n)" if params[0] == params[1] else ("A(0,1)" if params == (0, 1) else "A(m,n)")
        kinds.setdefault(v.verdict, set()).add(name)
    counts = {k: len(s) for k, s in kinds.items()}
    families = len(set().union(*kinds.values()) - {"A(0,1)"})
    ok = not bad and counts.get(catalog.NO_LSSA) == 12 and families == 14 \
        and kinds.get(catalog.EXISTS) == {"W", "A(0,1)"} and kinds.get(catalog.OPEN) == {"A(m,n)"}
    record(7, ok, f"{families} families; verdict counts {counts}" + (f"; mismatches: {bad}" if bad else ""))


# 8 ------------------------------------------------------------------------------

def _mutations_detected(rng):
    B = catalog.instantiate("B1")
    consts = B.constants()
    picks = rng.sample(range(len(consts)), 50)
    missed = []
    for idx in picks:
        table = [list(c) for c in consts]
        table[idx][3] = table[idx][3] + 1
        M = gc.SuperAlgebra(B.parity, [tuple(c) for c in table], B.names)
        if gc.check_left_symmetric(M).verdict and gc.check_super_jacobi(gc.sub_adjacent(M)).verdict:
            missed.append(consts[idx][:3])
    return missed


def _random_linear(rng, names):
    p = SolverPoly.const(rng.randint(-2, 2))
    for v in names:
        c = rng.randint(-2, 2)
        if c:
            p = p + SolverPoly.var(v) * c
    return p


def _random_system(rng):
    k = rng.randint(1, 4)
    names = [f"u{i}" for i in range(1, k + 1)]
    eqs = []
    for _ in range(rng.randint(1, 3)):
        shape = rng.random()
        if shape < 0.3:
            e = _random_linear(rng, names)
        elif shape < 0.8:
            e = _random_linear(rng, names) * _random_linear(rng, names)
        else:
            e = _random_linear(rng, names) * _random_linear(rng, names) * _random_linear(rng, names)
        if not e.is_zero():
            eqs.append(e)
    return names, eqs


def _solver_disagreements(rng):
    bad = []
    for trial in range(100):
        names, eqs = _random_system(rng)
        res = branch_and_solve(make_system(eqs, names), strict=False)
        pieces = res.families + res.stuck
        for fam in res.families:
            if not fam.satisfies(eqs):
                bad.append((trial, "unsound family", [str(e) for e in eqs]))
        for vals in product(range(-2, 3), repeat=len(names)):
            point = {n: Fraction(v) for n, v in zip(names, vals)}
            truth = all(e.evaluate(point).is_zero() for e in eqs)
            found = any(f.contains(point) and all(r.evaluate(point).is_zero() for r in f.residual)
                        for f in pieces)
            if truth != found:
                bad.append((trial, vals, [str(e) for e in eqs]))
                break
    return bad


def random_even_conjugation(rng, parity):
    """Block-diagonal invertible integer matrix respecting ``parity``.

    Up to dimension 8 every parity-preserving entry is random.  Larger
    algebras get a permutation within each parity class times a diagonal
    scaling times one shear, which keeps transported W(3) sparse enough to
    check in well under a second.
    """
    from superlsa import linalg
    n = len(parity)
    if n <= 8:
        while True:
            P = [[Fraction(0)] * n for _ in range(n)]
            for r in range(n):
                for c in range(n):
                    if parity[r] == parity[c]:
                        P[r][c] = Fraction(rng.randint(-2, 2))
            if linalg.det(P) != 0:
                return P
    P = [[Fraction(0)] * n for _ in range(n)]
    for p in (0, 1):
        idx = [i for i in range(n) if parity[i] == p]
        for src, dst in zip(idx, rng.sample(idx, len(idx))):
            P[dst][src] = Fraction(rng.choice((-2, -1, 1, 2)))
    p = rng.choice((0, 1))
    r, c = rng.sample([i for i in range(n) if parity[i] == p], 2)
    shear = linalg.identity(n)
    shear[r][c] = Fraction(rng.choice((-1, 1)))
    return linalg.matmul(shear, P)


def _transport_failures(rng):
    bad = []
    for ent in catalog.list_entries():
        if ent.get("kind") == "note":
            continue
        key = ent["key"]
        A = catalog.instantiate(key, n=3) if key == "Wn" or key == "Wn_lie" else catalog.instantiate(key)
        fp = iso_lab.fingerprint(A)
        for _ in range(20):
            P = random_even_conjugation(rng, A.parity)
            B = gc.transport(A, P)
            if not gc.check_homomorphism(A, B, P).verdict or iso_lab.fingerprint(B).mismatches(fp):
                bad.append(key)
                break
    return bad


def test_c8_property_suites():
    rng = random.Random(20240611)
    missed = _mutations_detected(rng)
    solver_bad = _solver_disagreements(rng)
    transport_bad = _transport_failures(rng)
    ok = not missed and not solver_bad and not transport_bad
    record(8, ok, f"mutations undetected: {len(missed)}/50; solver vs brute force disagreements: "
                  f"{len(solver_bad)}/100; fingerprint transport failures: {transport_bad or 0}"
                  + (f"; first solver disagreement {solver_bad[0]}" if solver_bad else ""))
