"""Tensor field operations on a chart: contractions, outer products, rank."""

import random
from fractions import Fraction

import pytest

from liftcheck.algebra import Poly
from liftcheck.tensor import (
    Chart,
    Point,
    TensorError,
    TensorField,
    endo_apply,
    endo_compose,
    endo_transpose,
    metric_pullback,
    oneform_after_endo,
    oneform_apply,
    outer,
    random_point,
    rank_at,
)

AB = Chart("P", ("a", "b"))
ABC = Chart("Q", ("a", "b", "c"))


def rotation(chart=AB):
    return TensorField.endo(chart, [[0, -1], [1, 0]])


def random_field(chart, valence, rng, max_degree=2):
    def rnd_poly():
        terms = {}
        for _ in range(rng.randint(0, 3)):
            exps = tuple(rng.randint(0, max_degree) for _ in chart.coords)
            terms[exps] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        return Poly(chart.coords, terms)

    if valence == (0, 0):
        return TensorField.function(chart, rnd_poly())
    if valence in ((1, 0), (0, 1)):
        return TensorField(chart, valence, [rnd_poly() for _ in chart.coords])
    return TensorField(
        chart, valence, [[rnd_poly() for _ in chart.coords] for _ in chart.coords]
    )


def test_identity_application():
    rng = random.Random(0)
    x = random_field(AB, (1, 0), rng)
    assert endo_apply(TensorField.identity_endo(AB), x) == x


def test_rotation_sends_e1_to_e2():
    # matrix-vector oracle: [[0,-1],[1,0]] * (1,0) = (0,1)
    x = TensorField.vector(AB, [1, 0])
    assert endo_apply(rotation(), x) == TensorField.vector(AB, [0, 1])


def test_dual_pairing():
    dc = TensorField.basis_oneform(ABC, "c")
    assert oneform_apply(dc, TensorField.basis_vector(ABC, "c")).comps == Poly.const(1, ABC.coords)
    assert oneform_apply(dc, TensorField.basis_vector(ABC, "a")).is_zero()


def test_oneform_contraction():
    # (x dx) applied to (y d/dx) = xy; contraction computed by hand
    a = Poly.variable("a", AB.coords)
    b = Poly.variable("b", AB.coords)
    w = TensorField.oneform(AB, [a, Poly.zero(AB.coords)])
    x = TensorField.vector(AB, [b, Poly.zero(AB.coords)])
    assert oneform_apply(w, x).comps == a * b


def test_compose_with_identity_and_rotation_square():
    rng = random.Random(1)
    f = random_field(AB, (1, 1), rng)
    ident = TensorField.identity_endo(AB)
    assert endo_compose(f, ident) == f
    assert endo_compose(ident, f) == f
    assert endo_compose(rotation(), rotation()) == ident.scale(-1)


def test_outer_products():
    dc = TensorField.basis_oneform(ABC, "c")
    ec = TensorField.basis_vector(ABC, "c")
    single = outer(ec, dc)
    expected = [[0] * 3 for _ in range(3)]
    expected[2][2] = 1
    assert single == TensorField.endo(ABC, expected)
    assert outer(TensorField.zero(ABC, (1, 0)), dc).is_zero()
    # (x d/da) (x) (y db) has the single entry (a,b) = xy
    a = Poly.variable("a", AB.coords)
    b = Poly.variable("b", AB.coords)
    z = Poly.zero(AB.coords)
    got = outer(TensorField.vector(AB, [a, z]), TensorField.oneform(AB, [z, b]))
    assert got == TensorField.endo(AB, [[z, a * b], [z, z]])


def test_transpose_involution_and_duality():
    rng = random.Random(2)
    f = random_field(AB, (1, 1), rng)
    assert endo_transpose(endo_transpose(f)) == f
    assert endo_transpose(TensorField.identity_endo(AB)) == TensorField.identity_endo(AB)
    # (w o F)(X) = w(F X): transpose acting on one-forms agrees with composition
    w = random_field(AB, (0, 1), rng)
    x = random_field(AB, (1, 0), rng)
    assert oneform_apply(oneform_after_endo(w, f), x) == oneform_apply(w, endo_apply(f, x))
    # and (w o F) is literally the transpose matrix applied to w's components
    as_vector = TensorField.vector(AB, w.comps)
    assert oneform_after_endo(w, f).comps == endo_apply(endo_transpose(f), as_vector).comps


def euclidean(chart):
    return TensorField.bilinear(
        chart,
        [[1 if i == j else 0 for j in range(chart.dim)] for i in range(chart.dim)],
    )


def test_pullback_by_identity_and_rotation():
    g = euclidean(AB)
    assert metric_pullback(g, TensorField.identity_endo(AB)) == g
    assert metric_pullback(g, rotation()) == g


def test_pullback_componentwise_oracle():
    rng = random.Random(3)
    g = random_field(AB, (0, 2), rng)
    f = random_field(AB, (1, 1), rng)
    got = metric_pullback(g, f)
    for i in range(2):
        for j in range(2):
            manual = Poly.zero(AB.coords)
            for k in range(2):
                for l in range(2):
                    manual = manual + g.comps[k][l] * f.comps[k][i] * f.comps[l][j]
            assert got.comps[i][j] == manual


def test_rank_examples():
    pts = [Point(ABC, (Fraction(1), Fraction(2), Fraction(3)))]
    assert rank_at(TensorField.identity_endo(ABC), pts) == 3
    assert rank_at(TensorField.zero(ABC, (1, 1)), pts) == 0
    # canonical contact action on a 3-dim chart: rank 2 by elimination
    phi = TensorField.endo(ABC, [[0, -1, 0], [1, 0, 0], [0, 0, 0]])
    assert rank_at(phi, pts) == 2


def test_rank_bounds_and_monotonicity():
    rng = random.Random(4)
    f = random_field(ABC, (1, 1), rng)
    pts = [random_point(ABC, rng) for _ in range(4)]
    ranks = [rank_at(f, pts[: k + 1]) for k in range(4)]
    assert all(r <= ABC.dim for r in ranks)
    assert all(a <= b for a, b in zip(ranks, ranks[1:]))


def test_chart_and_valence_mismatch_errors():
    x = TensorField.basis_vector(AB, "a")
    with pytest.raises(TensorError):
        endo_apply(TensorField.identity_endo(ABC), x)
    with pytest.raises(TensorError):
        oneform_apply(x, x)


def test_compose_associative_and_outer_identity():
    rng = random.Random(5)
    f = random_field(AB, (1, 1), rng)
    g = random_field(AB, (1, 1), rng)
    h = random_field(AB, (1, 1), rng)
    assert endo_compose(endo_compose(f, g), h) == endo_compose(f, endo_compose(g, h))
    # (X (x) w) o (X' (x) w') = w(X') * (X (x) w')
    x1 = random_field(AB, (1, 0), rng)
    x2 = random_field(AB, (1, 0), rng)
    w1 = random_field(AB, (0, 1), rng)
    w2 = random_field(AB, (0, 1), rng)
    lhs = endo_compose(outer(x1, w1), outer(x2, w2))
    rhs = outer(x1, w2).scale(oneform_apply(w1, x2))
    assert lhs == rhs


def test_pullback_functorial():
    rng = random.Random(6)
    g = random_field(AB, (0, 2), rng)
    f = random_field(AB, (1, 1), rng)
    h = random_field(AB, (1, 1), rng)
    assert metric_pullback(g, endo_compose(f, h)) == metric_pullback(
        metric_pullback(g, f), h
    )
