"""Tests for the brute-force finite-field verification oracle."""

import dataclasses

import pytest

from tmodext import (
    Biderivation,
    CarrierTooLarge,
    Check,
    FiniteFieldRequired,
    Report,
    SkewMatrix,
    SkewPoly,
    carlitz,
    class_of,
    drinfeld,
    enumerate_ext,
    ext_structure,
    ga_sequence,
    parse_field,
    parse_matrix,
    parse_poly,
    six_term,
    verify_duality,
    verify_ga,
    verify_sixterm,
    verify_structure,
)
from tmodext.oracle import coordinate_vectors

F2 = parse_field("GF(2)")
F4 = parse_field("GF(2^2)")
F8 = parse_field("GF(2^3)")
F9 = parse_field("GF(3^2)")
F16 = parse_field("GF(2^4)")
Q3 = parse_field("GF(3)(th)")


def _drin(spec, text):
    return drinfeld(spec, parse_poly(spec, text))


def _structure(spec, src_text, tgt_text):
    return ext_structure(_drin(spec, src_text), _drin(spec, tgt_text))


def twist_one_coefficient(matrix):
    """Return a copy of the matrix with a single coefficient replaced by its
    Frobenius twist, picking one the twist actually moves."""
    spec, var = matrix.spec, matrix.var
    for i in range(matrix.nrows):
        for j in range(matrix.ncols):
            p = matrix.entry(i, j)
            for k in range(p.degree + 1):
                c = p.coefficient(k)
                if not c.is_zero() and c.twist(1) != c:
                    bumped = p + SkewPoly.term(spec, var, c.twist(1) - c, k)
                    rows = [[matrix.entry(r, s) for s in range(matrix.ncols)]
                            for r in range(matrix.nrows)]
                    rows[i][j] = bumped
                    return SkewMatrix.from_rows(spec, var, rows)
    raise AssertionError("no twist-sensitive coefficient found")


# ---------------------------------------------------------------------------
# Structure verification.


def test_verify_structure_passes_and_is_deterministic():
    S = _structure(F9, "g + tau^3", "g + tau^2")
    rep1 = verify_structure(S, samples=50, seed=7)
    rep2 = verify_structure(S, samples=50, seed=7)
    assert rep1.ok
    assert [c.name for c in rep1.checks] == [
        "constant-structure", "action-samples", "inner-invariance"]
    assert rep1.to_json() == rep2.to_json()


def test_verify_structure_full_enumeration():
    S = _structure(F4, "g + tau^2", "g + tau")
    rep = verify_structure(S, seed=0, mode="enumerate")
    assert rep.ok


def test_verify_structure_rejects_twisted_matrix():
    S = _structure(F9, "g + tau^3", "g + tau^2")
    mutated = dataclasses.replace(S, pi=twist_one_coefficient(S.pi))
    assert mutated.pi != S.pi
    rep = verify_structure(mutated, samples=50, seed=7)
    assert not rep.ok
    failed = [c.name for c in rep.checks if not c.passed]
    assert "action-samples" in failed


def test_structure_verification_needs_finite_field():
    S = _structure(Q3, "th + tau^3", "th + tau^2")
    with pytest.raises(FiniteFieldRequired):
        verify_structure(S)


# ---------------------------------------------------------------------------
# Enumeration guards.


def test_carrier_guard():
    with pytest.raises(CarrierTooLarge):
        coordinate_vectors(F16, 6)
    assert len(list(coordinate_vectors(F4, 3))) == 64


def test_enumerate_ext_counts_and_canonicity():
    classes = enumerate_ext(_drin(F4, "g + tau^2"), _drin(F4, "g + tau"))
    assert len(classes) == 16
    assert len({c.matrix for c in classes}) == 16
    for c in classes[:6]:
        assert class_of(c).matrix == c.matrix


# ---------------------------------------------------------------------------
# Sequence verification.


def test_verify_ga_sequences():
    for src, tgt in (("g + tau^2", "g + tau"), ("g + tau^3", "g + tau"),
                     ("g + tau^3", "g + tau^2")):
        seq = ga_sequence(_structure(F4, src, tgt))
        rep = verify_ga(seq, seed=1)
        assert rep.ok, [c for c in rep.checks if not c.passed]
        assert [c.name for c in rep.checks] == [
            "kernel", "t-equivariance", "image-count",
            "inclusion-equivariance"]


def test_verify_sixterm_bundle():
    E = _drin(F2, "1 + tau^2")
    F = _drin(F2, "1 + tau^3")
    d = Biderivation(E, F, parse_matrix(F2, "[[1]]"))
    rep = verify_sixterm(six_term(d, carlitz(F2)), seed=1, inner_samples=5)
    assert rep.ok, [c for c in rep.checks if not c.passed]
    assert len(rep.checks) == 13
    names = {c.name for c in rep.checks}
    assert {"co-final-surjective", "contra-final-surjective",
            "ext-maps-well-defined"} <= names


def test_verify_duality_passes_and_is_deterministic():
    rep1 = verify_duality(_drin(F8, "g + tau^3"), _drin(F8, "g + tau^2"),
                          classes=30, seed=2)
    rep2 = verify_duality(_drin(F8, "g + tau^3"), _drin(F8, "g + tau^2"),
                          classes=30, seed=2)
    assert rep1.ok
    assert rep1.to_json() == rep2.to_json()
    assert [c.name for c in rep1.checks] == [
        "inner-transport", "action-transport", "double-adjoint",
        "anti-homomorphism", "class-transport", "action-classes"]


def test_verify_duality_needs_finite_field():
    with pytest.raises(FiniteFieldRequired):
        verify_duality(_drin(Q3, "th + tau^3"), _drin(Q3, "th + tau^2"))


# ---------------------------------------------------------------------------
# Report plumbing.


def test_report_aggregation():
    good = Check("a", True, "fine")
    bad = Check("b", False, "broken")
    rep = Report.from_checks([good, bad])
    assert not rep.ok
    assert Report.from_checks([good]).ok
    data = rep.to_json()
    assert data["ok"] is False
    assert data["checks"][1] == {"name": "b", "passed": False,
                                 "detail": "broken"}
