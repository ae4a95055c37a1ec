"""Axiom checkers, canonical models, conjugation, lint, eps-complex eigenchecks."""

import random

import pytest

from liftcheck.algebra import EpsComplex, NotUnimodular, Poly, PolyMatrix
from liftcheck.structures import (
    CONSISTENT,
    MissingMetric,
    PAPER_LITERAL,
    canonical_complex,
    canonical_structure,
    check_axioms,
    check_metric,
    conjugate_structure,
    consistency_lint,
    contact_structure,
    random_unimodular,
)
from liftcheck.tensor import Chart, TensorField, endo_apply, endo_compose, outer


def test_canonical_f_matrix():
    s = canonical_structure(1, 1, -1, "riemannian")
    expected = TensorField.endo(s.chart, [[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    assert s.f == expected
    assert s.chart.coords == ("a1", "b1", "c1")


def test_canonical_pairing_values():
    riem = canonical_structure(1, 1, -1, "riemannian")
    lor = canonical_structure(1, 1, -1, "lorentzian")
    from liftcheck.tensor import oneform_apply

    assert oneform_apply(riem.eta[0], riem.xi[0]).comps == Poly.const(1, riem.chart.coords)
    assert oneform_apply(lor.eta[0], lor.xi[0]).comps == Poly.const(-1, lor.chart.coords)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("signature", ["riemannian", "lorentzian"])
@pytest.mark.parametrize("mode", [PAPER_LITERAL, CONSISTENT])
def test_canonical_axioms_pass_eps_minus_one(n, r, signature, mode):
    s = canonical_structure(n, r, -1, signature)
    report = check_axioms(s, mode=mode)
    assert report.overall
    assert any("sampled rank(F)" in note for note in report.notes)


def test_paper_literal_squaring_fails_for_plus_one():
    # direct expansion: both sides applied to xi differ by (eps+1)*xi, so for
    # eps=+1 the squaring residual is -2 * xi (x) eta on the degenerate block
    s = canonical_structure(1, 1, 1, "riemannian")
    report = check_axioms(s, mode=PAPER_LITERAL)
    assert not report.overall
    failing = report.failed()
    assert len(failing) == 1
    entry = failing[0]
    assert entry.name.startswith("F^2")
    assert entry.residual == outer(s.xi[0], s.eta[0]).scale(-2)
    assert entry.witness is not None
    values = entry.witness.mapping()
    # the witness must actually expose a nonzero residual component
    assert any(
        comp.eval_at(values) != 0 for _, comp in entry.residual.nonzero_items()
    )


def test_consistent_mode_admits_paracontact():
    s = canonical_structure(1, 1, 1, "riemannian")
    assert check_axioms(s, mode=CONSISTENT).overall
    lor = canonical_structure(2, 1, 1, "lorentzian")
    assert check_axioms(lor, mode=CONSISTENT).overall


def test_check_metric_canonical():
    for signature in ("riemannian", "lorentzian"):
        s = canonical_structure(1, 2, -1, signature)
        report = check_metric(s)
        assert report.overall
    assert any("positive definite" in n for n in check_metric(
        canonical_structure(1, 1, -1, "riemannian")).notes)


def test_check_metric_missing():
    s = canonical_structure(1, 1, -1, "riemannian")
    stripped = contact_structure(
        s.chart, s.f, s.xi[0], s.eta[0], s.epsilon, s.signature
    )
    with pytest.raises(MissingMetric):
        check_metric(stripped)


def test_check_metric_rescaled_eta_mutant():
    # G stays the identity but eta doubles: the pullback residual picks up
    # exactly 3 * dc (x) dc on the degenerate block
    s = canonical_structure(1, 1, -1, "riemannian")
    mutant = contact_structure(
        s.chart, s.f, s.xi[0], s.eta[0].scale(2), s.epsilon, s.signature, s.metric
    )
    report = check_metric(mutant)
    assert not report.overall
    entry = report.entries[0]
    dc = TensorField.basis_oneform(s.chart, "c1")
    expected = TensorField.bilinear(
        s.chart, [[a * b for b in dc.comps] for a in dc.comps]
    ).scale(3)
    assert entry.residual == expected


def test_conjugation_by_identity_and_shear():
    s = canonical_structure(1, 1, -1, "riemannian")
    ident = PolyMatrix.identity(3, s.chart.coords)
    assert conjugate_structure(s, ident) == s

    # shear mixing a1 into c1 with a polynomial entry
    rows = [list(row) for row in ident.entries]
    rows[2][0] = Poly(s.chart.coords, {(2, 0, 0): 1})
    u = PolyMatrix(rows)
    conj = conjugate_structure(s, u)
    assert check_axioms(conj).overall
    assert check_metric(conj).overall
    from liftcheck.tensor import oneform_apply

    for a in range(s.r):
        for b in range(s.r):
            assert oneform_apply(conj.eta[a], conj.xi[b]) == oneform_apply(
                s.eta[a], s.xi[b]
            )


def test_conjugation_rejects_bad_inverse():
    s = canonical_structure(1, 1, -1, "riemannian")
    ident = PolyMatrix.identity(3, s.chart.coords)
    rows = [list(row) for row in ident.entries]
    rows[0][1] = Poly.const(1, s.chart.coords)
    u = PolyMatrix(rows)
    with pytest.raises(NotUnimodular):
        conjugate_structure(s, u, u)  # u is not its own inverse


def test_random_conjugations_preserve_all_residuals():
    rng = random.Random(99)
    s = canonical_structure(1, 2, -1, "lorentzian")
    for _ in range(6):
        u, uinv = random_unimodular(s.chart, rng, max_shears=4, max_degree=2)
        conj = conjugate_structure(s, u, uinv)
        assert check_axioms(conj).overall
        assert check_metric(conj).overall


def test_conjugation_preserves_failing_residuals_too():
    # a model that fails paper-literal squaring keeps failing after conjugation,
    # with the same failing identity
    rng = random.Random(123)
    s = canonical_structure(1, 1, 1, "riemannian")
    before = check_axioms(s, mode=PAPER_LITERAL)
    u, uinv = random_unimodular(s.chart, rng, max_shears=3, max_degree=2)
    conj = conjugate_structure(s, u, uinv)
    after = check_axioms(conj, mode=PAPER_LITERAL)
    assert [e.name for e in before.failed()] == [e.name for e in after.failed()]
    assert not after.overall
    # and the consistent-mode verdict stays green on both
    assert check_axioms(s, mode=CONSISTENT).overall
    assert check_axioms(conj, mode=CONSISTENT).overall


def test_conjugation_exercises_unimodular_inverse():
    rng = random.Random(5)
    s = canonical_structure(1, 1, -1, "riemannian")
    u, _ = random_unimodular(s.chart, rng, max_shears=3, max_degree=2)
    conj = conjugate_structure(s, u)  # inverse computed via the adjugate
    assert check_axioms(conj).overall


# -- lint ----------------------------------------------------------------------


def brute_force_forced_eps(family, signature):
    """Apply F^2 = eps*I + p*sum xi(x)eta to every xi on a canonical-type model
    and return the eps for which the residual vanishes, independently of lint."""
    from liftcheck.structures import _FAMILY_TABLE

    p, kappa, _tag = _FAMILY_TABLE[(family, signature)]
    # canonical model with the requested pairing: r = 1, n = 1
    s = canonical_structure(1, 1, -1, signature)
    admitted = []
    for eps in (-1, 1):
        ok = True
        rhs = TensorField.identity_endo(s.chart).scale(eps) + s.sum_outer().scale(p)
        f2 = endo_compose(s.f, s.f)
        for xi in s.xi:
            if not (endo_apply(f2, xi) - endo_apply(rhs, xi)).is_zero():
                ok = False
        if ok:
            admitted.append(eps)
    assert len(admitted) == 1
    return admitted[0]


@pytest.mark.parametrize(
    "family,signature,forced",
    [
        ("r-contact", "riemannian", -1),
        ("r-contact", "lorentzian", -1),
        ("contact", "riemannian", 1),
        ("contact", "lorentzian", 1),
    ],
)
def test_lint_forced_eps_matches_brute_force(family, signature, forced):
    assert brute_force_forced_eps(family, signature) == forced
    for eps in (-1, 1):
        notes = consistency_lint(family, eps, signature)
        assert f"forcing eps = {forced:+d}" in notes[0]
        if eps == forced:
            assert "is CONSISTENT" in notes[1]
        else:
            assert "INCONSISTENT" in notes[1]


def test_lint_consistent_family_admits_both():
    for eps in (-1, 1):
        for signature in ("riemannian", "lorentzian"):
            notes = consistency_lint("consistent", eps, signature)
            assert "satisfiable for both eps" in notes[0]
            # cross-check: the canonical model with that eps passes consistent mode
            s = canonical_structure(1, 1, eps, signature)
            assert check_axioms(s, mode=CONSISTENT).overall


# -- canonical eps-complex block -------------------------------------------------


def test_canonical_complex_squares():
    for eps in (-1, 1):
        j, report = canonical_complex(1, eps)
        ident = TensorField.identity_endo(j.chart)
        assert endo_compose(j, j) == ident.scale(eps)
        assert report.overall


def test_canonical_complex_eigenvalues():
    for eps in (-1, 1):
        _, report = canonical_complex(2, eps)
        minus = [e for e in report.entries if "-i*eps" in e.name]
        plus = [e for e in report.entries if "+i*eps" in e.name]
        assert len(minus) == 2 and all(e.passed for e in minus)
        assert len(plus) == 2 and all(e.passed for e in plus)
        dual = [e for e in report.entries if e.name == "(J*)^2 = eps*I"]
        assert len(dual) == 1 and dual[0].passed


def test_eigenvalue_square_is_eps_in_eps_arithmetic():
    for eps in (-1, 1):
        lam = EpsComplex(0, -eps, eps)
        assert lam * lam == EpsComplex(eps, 0, eps)


def test_canonical_complex_rejects_odd_chart():
    with pytest.raises(Exception, match="even-dimensional"):
        canonical_complex(1, -1, chart=Chart("odd", ("u", "v", "w")))
