import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from superlsa import catalog, graded_core as gc
from superlsa.exact_arith import ALPHA


def test_grading_enforced():
    with pytest.raises(gc.GradingError):
        gc.SuperAlgebra([0, 1], [(0, 0, 1, 1)])
    gc.SuperAlgebra([0, 1], [(0, 0, 1, 1)], check_grading=False)


def test_bad_inputs():
    with pytest.raises(gc.IndexOutOfRange):
        gc.SuperAlgebra([0], [(0, 0, 1, 1)])
    with pytest.raises(ValueError):
        gc.SuperAlgebra([0], [(0, 0, 0, 1), (0, 0, 0, 2)])
    with pytest.raises(gc.DimensionMismatch):
        gc.SuperAlgebra.from_json_dict({"dim": 2, "parity": [0], "constants": []})
    with pytest.raises(gc.GradingError):
        gc.SuperAlgebra([2], [])


def test_json_roundtrip(tmp_path):
    for key in ("B1", "B2alpha", "A2alpha"):
        A = catalog.instantiate(key)
        path = tmp_path / f"{key}.json"
        gc.dump_algebra(A, path)
        assert gc.load_algebra(path) == A
        assert json.loads(path.read_text())["dim"] == A.dim


def test_zero_algebra_is_everything():
    Z = gc.SuperAlgebra.zero([0, 0, 1, 1])
    for check in (gc.check_left_symmetric, gc.check_associative, gc.check_novikov):
        rep = check(Z)
        assert rep.verdict and rep.checked == 64
    assert gc.find_right_identities(Z) == []


def test_grassmann_two_is_associative_lssa():
    # Lambda(1) tensor nothing: basis 1, xi with xi*xi = 0
    G = gc.SuperAlgebra([0, 1], [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)])
    assert gc.check_associative(G).verdict
    assert gc.check_left_symmetric(G).verdict
    assert gc.unique_right_identity(G) == G.basis(0)


@pytest.mark.parametrize("key", ["B1", "B2tilde_m1", "B2alpha", "A1", "A2alpha", "A3"])
def test_left_symmetric_matches_oracle(key):
    A = catalog.instantiate(key)
    assert gc.check_left_symmetric(A).verdict == (oracle.left_symmetric_failures(A) == [])


@pytest.mark.parametrize("key", ["B1", "B2tilde_m1", "B2alpha"])
def test_compatible_matches_oracle(key):
    A = catalog.instantiate(key)
    assert oracle.same_bracket(A, catalog.a01())
    assert gc.check_compatible(A, catalog.a01()).verdict
    assert gc.check_super_jacobi(catalog.a01()).verdict


def test_corrupted_b1_is_localized():
    B = catalog.instantiate("B1")
    i, j, k, c = B.constants()[0]
    consts = [(i2, j2, k2, c2 + 1 if (i2, j2, k2) == (i, j, k) else c2) for i2, j2, k2, c2 in B.constants()]
    M = gc.SuperAlgebra(B.parity, consts, B.names)
    rep = gc.check_left_symmetric(M)
    assert not rep.verdict
    # the engine reports each unordered first pair once, as i <= j
    assert sorted(tuple(v.indices) for v in rep.violations) == \
        sorted({(min(i, j), max(i, j), k) for i, j, k in oracle.left_symmetric_failures(M)})


def test_every_single_mutation_of_b1_detected():
    B = catalog.instantiate("B1")
    consts = B.constants()
    for idx in range(len(consts)):
        table = list(consts)
        i, j, k, c = table[idx]
        table[idx] = (i, j, k, c + 1)
        M = gc.SuperAlgebra(B.parity, table, B.names)
        assert not (gc.check_left_symmetric(M).verdict and gc.check_super_jacobi(gc.sub_adjacent(M)).verdict), \
            (i, j, k)


def test_b2_alpha_specializations_compatible():
    lie = catalog.a01()
    for q in (Fraction(-3), Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(7)):
        A = catalog.instantiate("B2alpha", alpha=q)
        assert gc.check_left_symmetric(A).verdict
        assert gc.check_compatible(A, lie).verdict


def test_right_identity_solution_space_matches_oracle():
    for key in ("B1", "B2alpha", "B2tilde_m1", "A1", "A2alpha", "A3"):
        A = catalog.instantiate(key)
        sols = gc.find_right_identities(A)
        ref = oracle.right_identities(A)
        assert (ref is None) == (not sols)
        if sols:
            tup, syms = ref
            free = {s for t in tup for s in t.free_symbols} & set(syms)
            assert len(free) == len(sols) - 1


def test_b1_right_identity_directions():
    B = catalog.instantiate("B1")
    sols = gc.find_right_identities(B)
    assert sols[0] == B.element({0: 1, 3: 1})
    assert [v.render() for v in sols[1:]] == ["y3"]
    y3 = B.basis(B.index("y3"))
    assert all((B.basis(i) * y3).is_zero() for i in range(B.dim))


def test_b2alpha_right_identity_not_unique_at_two():
    A = catalog.instantiate("B2alpha", alpha=2)
    assert [v.render() for v in gc.find_right_identities(A)] == ["2*x3 + x4", "y1"]


def test_element_arithmetic():
    A = catalog.instantiate("B2alpha")
    x3, x4 = A.basis(2), A.basis(3)
    e = ALPHA * x3 + x4
    assert all(A.basis(i) * e == A.basis(i) for i in range(A.dim))
    assert (e - e).is_zero()
    assert (x3 + x4).parity() == 0 and (x3 + A.basis(4)).parity() is None


def test_restrict_even_b1_is_a1():
    assert gc.restrict_even(catalog.instantiate("B1")).same_structure(catalog.instantiate("A1"))
    assert gc.restrict_even(catalog.instantiate("B2alpha")).same_structure(catalog.instantiate("A2alpha"))


def test_ideal_closure_zero_seed():
    with pytest.raises(gc.ZeroSeed):
        gc.ideal_closure(catalog.instantiate("B1"), catalog.instantiate("B1").zero_element())


def test_check_representation_of_left_multiplications():
    A = catalog.instantiate("B1")
    ops = [gc.left_mult_operator(A, i) for i in range(A.dim)]
    assert gc.check_representation(catalog.a01(), ops).verdict
    ops[0] = [[x * 2 for x in row] for row in ops[0]]
    assert not gc.check_representation(catalog.a01(), ops).verdict


def test_worker_paths_agree():
    # W(4) has dim 64, large enough for the process pool
    W = catalog.instantiate("Wn", n=4)
    consts = W.constants()
    i, j, k, c = consts[5]
    M = gc.SuperAlgebra(W.parity, consts[:5] + [(i, j, k, c + 1)] + consts[6:], W.names)
    one = gc.check_left_symmetric(M, workers=1)
    two = gc.check_left_symmetric(M, workers=2)
    assert one.violations and [v.indices for v in one.violations] == [v.indices for v in two.violations]


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_transport_is_homomorphism(entries):
    A = catalog.instantiate("A2alpha", alpha=3)
    P = [[Fraction(entries[0]), Fraction(entries[1]), 0, 0],
         [Fraction(entries[2]), Fraction(entries[3]), 0, 0],
         [0, 0, 1, 0], [0, 0, 0, 1]]
    if entries[0] * entries[3] - entries[1] * entries[2] == 0:
        return
    B = gc.transport(A, P)
    assert gc.check_homomorphism(A, B, P).verdict
    assert gc.check_left_symmetric(B).verdict


@pytest.mark.parametrize("key", ["B1", "B2alpha", "B2tilde_m1"])
def test_right_identity_operator_consistency(key):
    A = catalog.instantiate(key)
    e = gc.find_right_identities(A)[0]
    for i in range(A.dim):
        col = [sum((row[k] * e.vec.get(k, 0) for k in range(A.dim)), Fraction(0))
               for row in gc.left_mult_operator(A, i)]
        assert col == A.basis(i).coords


def test_homomorphism_carries_right_identity():
    import random
    from test_acceptance import random_even_conjugation
    from superlsa import linalg
    rng = random.Random(3)
    A = catalog.instantiate("B2tilde_m1")
    e = gc.unique_right_identity(A)
    for _ in range(5):
        P = random_even_conjugation(rng, A.parity)
        B = gc.transport(A, P)
        assert gc.check_homomorphism(A, B, P).verdict
        Pe = B.element(linalg.matvec(P, e.coords))
        assert all(B.basis(i) * Pe == B.basis(i) for i in range(B.dim))


def test_odd_swap_is_not_a_homomorphism():
    from superlsa import linalg
    A = catalog.instantiate("B2alpha", alpha=1)
    P = linalg.identity(8)
    P[4][4], P[5][5], P[4][5], P[5][4] = 0, 0, 1, 1
    assert not gc.check_homomorphism(A, A, P).verdict


def test_lie_admissible_for_every_catalog_lssa():
    for key, kw in [("B1", {}), ("B2alpha", {}), ("B2tilde_m1", {}), ("A1", {}), ("A2alpha", {}),
                    ("A3", {}), ("Wn", {"n": 3})]:
        A = catalog.instantiate(key, **kw)
        assert gc.check_left_symmetric(A).verdict
        assert gc.check_super_jacobi(gc.sub_adjacent(A)).verdict


def test_ideal_closure_generates_everything_in_catalog():
    for key in ("B1", "B2alpha", "B2tilde_m1"):
        A = catalog.instantiate(key)
        assert all(len(gc.ideal_closure(A, A.basis(i))) == A.dim for i in range(A.dim))
    # a direct sum splits
    D = gc.SuperAlgebra([0, 0], [(0, 0, 0, 1), (1, 1, 1, 1)])
    assert len(gc.ideal_closure(D, D.basis(0))) == 1
