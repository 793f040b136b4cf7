import random
from fractions import Fraction

import sympy

import oracle
from superlsa import catalog, graded_core as gc, iso_lab
from superlsa.exact_arith import ALPHA
from test_acceptance import random_even_conjugation


def alg(key, alpha=None):
    return catalog.instantiate(key, alpha=alpha)


def test_fingerprint_b1():
    fp = iso_lab.fingerprint(alg("B1"))
    assert fp.dims == (4, 4)
    assert not fp.has_unique_right_identity and fp.has_unique_even_right_identity
    assert fp.right_identity == "x1 + x4"
    assert not fp.associative


def test_fingerprints_cannot_split_alpha_sign():
    a, b, t = iso_lab.fingerprint(alg("B2alpha", 1)), iso_lab.fingerprint(alg("B2alpha", -1)), \
        iso_lab.fingerprint(alg("B2tilde_m1"))
    assert not a.mismatches(b) and not b.mismatches(t)


def test_b1_differs_by_fingerprint():
    cert = iso_lab.distinguish(alg("B1"), alg("B2tilde_m1"))
    assert cert.kind == iso_lab.MISMATCH and cert.isomorphic is False
    assert iso_lab.verify_certificate(cert, alg("B1"), alg("B2tilde_m1"))


def test_tilde_certificate_replays_row_five():
    A, B = alg("B2alpha", -1), alg("B2tilde_m1")
    cert = iso_lab.distinguish(A, B, letter="q")
    assert cert.kind == iso_lab.CONTRADICTION
    finals = [b["final"] for b in cert.branches]
    assert "row 5 of P vanishes: q55 = q56 = q57 = q58 = 0" in finals
    hom = iso_lab.homomorphism_constraints(A, B, "q")
    for b in cert.branches:
        assert iso_lab.replay_branch(hom, b["trail"]) == b["final"]
    assert iso_lab.verify_certificate(cert, A, B)


def test_alpha_one_versus_tilde_contradiction():
    cert = iso_lab.distinguish(alg("B2alpha", 1), alg("B2tilde_m1"))
    assert cert.kind == iso_lab.CONTRADICTION


def test_alpha_sign_flip_witness_checked_by_oracle():
    A, B = alg("B2alpha", 1), alg("B2alpha", -1)
    cert = iso_lab.distinguish(A, B)
    assert cert.kind == iso_lab.WITNESS
    M = sympy.Matrix([[oracle.to_sympy(x) for x in row] for row in cert.matrix])
    assert M.det() != 0
    TA, TB = oracle.dense(A), oracle.dense(B)
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = M * sympy.Matrix(TA[i][j])
            rhs = sympy.Matrix(oracle.mul(TB, list(M[:, i]), list(M[:, j])))
            assert lhs == rhs


def test_formal_sign_flip_is_isomorphism():
    A = alg("B2alpha")
    B = A.reparametrize(-ALPHA)
    cert = iso_lab.distinguish(A, B)
    assert cert.kind == iso_lab.WITNESS
    assert gc.check_homomorphism(A, B, cert.matrix).verdict


def test_identical_inputs():
    cert = iso_lab.distinguish(alg("B1"), alg("B1"))
    assert cert.kind == iso_lab.WITNESS and cert.reason == "identical structure constants"


def test_dimension_mismatch():
    cert = iso_lab.distinguish(alg("B1"), alg("A1"))
    assert cert.kind == iso_lab.MISMATCH and cert.field_name == "dim"


def test_transported_copy_is_found():
    rng = random.Random(7)
    A = alg("B2tilde_m1")
    Pm = random_even_conjugation(rng, A.parity)
    B = gc.transport(A, Pm)
    cert = iso_lab.distinguish(A, B)
    assert cert.isomorphic is True
    assert gc.check_homomorphism(A, B, cert.matrix).verdict


def test_homomorphism_system_layout():
    hom = iso_lab.homomorphism_constraints(alg("B1"), alg("B1"), "p")
    assert len(hom.unknowns) == 32
    assert hom.unknowns[0] == "p11" and "p58" in hom.unknowns and "p15" not in hom.unknowns
    P = hom.materialize(iso_lab.SolutionFamily({n: iso_lab.SolverPoly.const(Fraction(int(n[1] == n[2])))
                                                for n in hom.unknowns}, [], []))
    assert gc.check_homomorphism(alg("B1"), alg("B1"), P).verdict


def test_certificate_json():
    cert = iso_lab.distinguish(alg("B2alpha", -1), alg("B2tilde_m1"), letter="q")
    body = cert.to_json()
    assert body["kind"] == iso_lab.CONTRADICTION and body["unknown_letter"] == "q"
    assert body["case_tree"]["children"]
