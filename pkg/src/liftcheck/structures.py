"""Structure containers, axiom checkers, canonical models and model mutation.

An almost r-contact structure is a tuple (F, xi_1..xi_r, eta^1..eta^r) on a
(2n+r)-dimensional chart.  Two axiom modes are supported for the squaring
identity:

  paper-literal   F^2 = eps*I + sum xi(x)eta   (riemannian pairing +delta)
                  F^2 = eps*I - sum xi(x)eta   (lorentzian pairing -delta)
  consistent      F^2 = eps*(I - kappa * sum xi(x)eta)

Applying the paper-literal identity to a xi forces eps = -1; the consistent
rewrite is satisfiable for both signs of eps.  ``consistency_lint`` reports
exactly which eps each axiom family admits, and ``check_axioms`` verifies a
concrete model against either mode, producing residual fields and witness
points instead of bare booleans.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .algebra import EpsComplex, NotUnimodular, Poly, PolyMatrix
from .tensor import (
    Chart,
    Point,
    TensorError,
    TensorField,
    endo_apply,
    endo_compose,
    endo_transpose,
    leading_minors_positive,
    metric_pullback,
    oneform_after_endo,
    oneform_apply,
    outer,
    random_point,
    rank_at,
)

DEFAULT_SEED = 1729
WITNESS_CAP = 256

RIEMANNIAN = "riemannian"
LORENTZIAN = "lorentzian"
SIGNATURES = (RIEMANNIAN, LORENTZIAN)

PAPER_LITERAL = "paper-literal"
CONSISTENT = "consistent"
AXIOM_MODES = (PAPER_LITERAL, CONSISTENT)


class StructureError(TensorError):
    """Malformed structure tuple."""


class MissingMetric(StructureError):
    """Metric compatibility was requested but the structure carries no metric."""


# -- check reports -------------------------------------------------------------


@dataclass(frozen=True)
class CheckEntry:
    """One verified identity: residual field, verdict, witness point on failure."""

    name: str
    tag: str
    residual: TensorField
    passed: bool
    witness: Optional[Point]


@dataclass
class CheckReport:
    entries: list[CheckEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    def failed(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def entry(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def merge(self, other: "CheckReport") -> "CheckReport":
        merged = CheckReport(entries=self.entries + other.entries, notes=list(self.notes))
        for note in other.notes:
            if note not in merged.notes:
                merged.notes.append(note)
        return merged


def find_witness(
    residual: TensorField, seed: int | None = None, cap: int = WITNESS_CAP
) -> Optional[Point]:
    """A sample point where some residual component is nonzero, if one is found.

    The residual is already known nonzero symbolically; the witness is a
    concrete demonstration.  Search is seeded and capped, so reports are
    reproducible; ``None`` after the cap means "nonzero symbolically only".
    """
    rng = random.Random(DEFAULT_SEED if seed is None else seed)
    components = [c for _, c in residual.nonzero_items()]
    if not components:
        return None
    for _ in range(cap):
        point = random_point(residual.chart, rng)
        values = point.mapping()
        for comp in components:
            if comp.eval_at(values) != 0:
                return point
    return None


def new_entry(
    name: str, tag: str, residual: TensorField, seed: int | None = None
) -> CheckEntry:
    passed = residual.is_zero()
    witness = None if passed else find_witness(residual, seed)
    return CheckEntry(name=name, tag=tag, residual=residual, passed=passed, witness=witness)


# -- structure containers --------------------------------------------------------


@dataclass(frozen=True)
class RContactStructure:
    """(F, xi_alpha, eta^alpha) with eps, signature, and an optional metric."""

    chart: Chart
    f: TensorField
    xi: tuple[TensorField, ...]
    eta: tuple[TensorField, ...]
    epsilon: int
    signature: str
    n: int
    r: int
    metric: Optional[TensorField] = None

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(self.xi))
        object.__setattr__(self, "eta", tuple(self.eta))
        if self.epsilon not in (-1, 1):
            raise StructureError("epsilon must be -1 or +1")
        if self.signature not in SIGNATURES:
            raise StructureError(f"unknown signature {self.signature!r}")
        if self.n < 0 or self.r < 0 or (self.n, self.r) == (0, 0):
            raise StructureError("need n >= 0, r >= 0, not both zero")
        if self.chart.dim != 2 * self.n + self.r:
            raise StructureError(
                f"chart dim {self.chart.dim} != 2n + r = {2 * self.n + self.r}"
            )
        if len(self.xi) != self.r or len(self.eta) != self.r:
            raise StructureError("need exactly r xi fields and r eta fields")
        if self.f.valence != (1, 1) or self.f.chart != self.chart:
            raise StructureError("F must be a (1,1) field on the structure chart")
        for x in self.xi:
            if x.valence != (1, 0) or x.chart != self.chart:
                raise StructureError("each xi must be a (1,0) field on the chart")
        for w in self.eta:
            if w.valence != (0, 1) or w.chart != self.chart:
                raise StructureError("each eta must be a (0,1) field on the chart")
        if self.metric is not None and (
            self.metric.valence != (0, 2) or self.metric.chart != self.chart
        ):
            raise StructureError("metric must be a (0,2) field on the chart")

    def pairing_convention(self) -> int:
        """Expected eta(xi) diagonal: +1 riemannian, -1 lorentzian."""
        return 1 if self.signature == RIEMANNIAN else -1

    def sum_outer(self) -> TensorField:
        """sum_alpha xi_alpha (x) eta^alpha as a (1,1) field."""
        acc = TensorField.zero(self.chart, (1, 1))
        for x, w in zip(self.xi, self.eta):
            acc = acc + outer(x, w)
        return acc


def contact_structure(
    chart: Chart,
    phi: TensorField,
    xi: TensorField,
    eta: TensorField,
    epsilon: int,
    signature: str = RIEMANNIAN,
    metric: Optional[TensorField] = None,
) -> RContactStructure:
    """The r = 1 special case (phi, xi, eta) on an odd-dimensional chart."""
    if chart.dim % 2 == 0:
        raise StructureError("contact structure needs an odd-dimensional chart")
    return RContactStructure(
        chart=chart,
        f=phi,
        xi=(xi,),
        eta=(eta,),
        epsilon=epsilon,
        signature=signature,
        n=(chart.dim - 1) // 2,
        r=1,
        metric=metric,
    )


# -- axiom checks ----------------------------------------------------------------


def _axiom_tag(signature: str, mode: str) -> str:
    base = "1.9" if signature == RIEMANNIAN else "1.13"
    return base if mode == PAPER_LITERAL else base + "c"


def squaring_sign(signature: str, mode: str, epsilon: int) -> int:
    """Coefficient p in the axiom F^2 = eps*I + p * sum xi(x)eta."""
    kappa = 1 if signature == RIEMANNIAN else -1
    if mode == PAPER_LITERAL:
        return 1 if signature == RIEMANNIAN else -1
    return -epsilon * kappa


def check_axioms(
    structure: RContactStructure,
    mode: str = PAPER_LITERAL,
    seed: int | None = None,
) -> CheckReport:
    """Residuals for the pairing, kernel, annihilator and squaring axioms."""
    if mode not in AXIOM_MODES:
        raise StructureError(f"unknown axiom mode {mode!r}")
    s = structure
    kappa = s.pairing_convention()
    tag = _axiom_tag(s.signature, mode)
    sign = "+" if kappa > 0 else "-"
    entries: list[CheckEntry] = []
    for a in range(s.r):
        for b in range(s.r):
            expected = TensorField.function(s.chart, s.chart.const(kappa if a == b else 0))
            entries.append(
                new_entry(
                    f"eta^{a + 1}(xi_{b + 1}) - ({sign}delta)",
                    tag,
                    oneform_apply(s.eta[a], s.xi[b]) - expected,
                    seed,
                )
            )
    for a in range(s.r):
        entries.append(new_entry(f"F(xi_{a + 1})", tag, endo_apply(s.f, s.xi[a]), seed))
    for a in range(s.r):
        entries.append(
            new_entry(f"eta^{a + 1} o F", tag, oneform_after_endo(s.eta[a], s.f), seed)
        )
    p = squaring_sign(s.signature, mode, s.epsilon)
    identity = TensorField.identity_endo(s.chart)
    rhs = identity.scale(s.epsilon) + s.sum_outer().scale(p)
    f2 = endo_compose(s.f, s.f)
    p_sign = "+" if p > 0 else "-"
    entries.append(
        new_entry(
            f"F^2 - (eps*I {p_sign} sum xi(x)eta)",
            tag,
            f2 - rhs,
            seed,
        )
    )
    report = CheckReport(entries=entries)
    rng = random.Random(DEFAULT_SEED if seed is None else seed)
    pts = [random_point(s.chart, rng) for _ in range(3)]
    sampled = rank_at(s.f, pts)
    report.notes.append(
        f"[rank] sampled rank(F) = {sampled}; generic expectation dim - r = {s.chart.dim - s.r}"
    )
    return report


def _lower_index(g: TensorField, x: TensorField) -> TensorField:
    """One-form G(x, .): component j is G_ij x^i."""
    m = g.chart.dim
    zero = g.chart.zero_poly()
    comps = []
    for j in range(m):
        acc = zero
        for i in range(m):
            a = g.comps[i][j]
            if a.is_zero() or x.comps[i].is_zero():
                continue
            acc = acc + a * x.comps[i]
        comps.append(acc)
    return TensorField.oneform(g.chart, comps)


def check_metric(
    structure: RContactStructure,
    seed: int | None = None,
    samples: int = 5,
) -> CheckReport:
    """Metric compatibility: pullback identity, and for riemannian structures
    also eta = G(xi, .) plus sampled positive-definiteness notes."""
    s = structure
    if s.metric is None:
        raise MissingMetric("structure has no metric")
    tag = "1.8" if s.signature == RIEMANNIAN else "1.12"
    q = 1 if s.signature == RIEMANNIAN else -1
    eta_sq = TensorField.zero(s.chart, (0, 2))
    for w in s.eta:
        eta_sq = eta_sq + TensorField.bilinear(
            s.chart, [[wi * wj for wj in w.comps] for wi in w.comps]
        )
    residual = metric_pullback(s.metric, s.f) - s.metric + eta_sq.scale(q)
    q_sign = "+" if q > 0 else "-"
    entries = [
        new_entry(
            f"G(F.,F.) - G {q_sign} sum eta(x)eta",
            tag,
            residual,
            seed,
        )
    ]
    if s.signature == RIEMANNIAN:
        for a in range(s.r):
            entries.append(
                new_entry(
                    f"eta^{a + 1} - G(xi_{a + 1}, .)",
                    tag,
                    s.eta[a] - _lower_index(s.metric, s.xi[a]),
                    seed,
                )
            )
    report = CheckReport(entries=entries)
    rng = random.Random(DEFAULT_SEED if seed is None else seed)
    if s.signature == RIEMANNIAN:
        ok = all(
            leading_minors_positive(s.metric, random_point(s.chart, rng))
            for _ in range(samples)
        )
        verdict = "positive" if ok else "NOT positive"
        report.notes.append(
            f"[metric] leading principal minors {verdict} definite at {samples} sample points"
        )
    return report


# -- canonical models --------------------------------------------------------------


def canonical_chart(n: int, r: int) -> Chart:
    coords = (
        [f"a{i + 1}" for i in range(n)]
        + [f"b{i + 1}" for i in range(n)]
        + [f"c{i + 1}" for i in range(r)]
    )
    return Chart("M", tuple(coords))


def canonical_structure(
    n: int, r: int, epsilon: int, signature: str = RIEMANNIAN
) -> RContactStructure:
    """Minimal model: F swaps the a/b blocks (with eps), xi/eta sit on the c block.

    F(d/da_i) = d/db_i, F(d/db_i) = eps * d/da_i, F(d/dc_alpha) = 0,
    xi_alpha = d/dc_alpha, eta^alpha = dc_alpha (riemannian) or -dc_alpha
    (lorentzian); metric is diagonal +1 with -1 on the c block iff lorentzian.
    """
    if n < 1 or r < 1:
        raise StructureError("canonical structures need n >= 1 and r >= 1")
    if signature not in SIGNATURES:
        raise StructureError(f"unknown signature {signature!r}")
    chart = canonical_chart(n, r)
    m = chart.dim
    z = chart.zero_poly()
    fmat = [[z for _ in range(m)] for _ in range(m)]
    for i in range(n):
        fmat[n + i][i] = chart.const(1)
        fmat[i][n + i] = chart.const(epsilon)
    f = TensorField.endo(chart, fmat)
    xi = tuple(TensorField.basis_vector(chart, f"c{a + 1}") for a in range(r))
    eta_sign = 1 if signature == RIEMANNIAN else -1
    eta = tuple(
        TensorField.basis_oneform(chart, f"c{a + 1}").scale(eta_sign) for a in range(r)
    )
    diag = [1] * (2 * n) + [eta_sign] * r
    metric = TensorField.bilinear(
        chart,
        [[chart.const(diag[i] if i == j else 0) for j in range(m)] for i in range(m)],
    )
    return RContactStructure(
        chart=chart,
        f=f,
        xi=xi,
        eta=eta,
        epsilon=epsilon,
        signature=signature,
        n=n,
        r=r,
        metric=metric,
    )


# -- model mutation -----------------------------------------------------------------


def conjugate_structure(
    structure: RContactStructure,
    u: PolyMatrix,
    u_inverse: Optional[PolyMatrix] = None,
) -> RContactStructure:
    """Pointwise frame change F -> U F U^-1, xi -> U xi, eta -> eta U^-1.

    Preserves every axiom residual exactly.  The inverse may be supplied
    when the caller already knows it; either way U * U^-1 = I is verified.
    """
    s = structure
    m = s.chart.dim
    if u.rows != m or u.cols != m:
        raise StructureError("conjugation matrix shape does not match the chart")
    if u.variables != s.chart.coords:
        raise StructureError("conjugation matrix lives on a different chart")
    if u_inverse is None:
        u_inverse = u.unimodular_inverse()
    ident = PolyMatrix.identity(m, s.chart.coords)
    if (u @ u_inverse) - ident != ident - ident:
        raise NotUnimodular("supplied inverse fails U * U^-1 = I")

    f_new = TensorField.endo_from_matrix(
        s.chart, u @ s.f.to_matrix() @ u_inverse
    )
    xi_new = []
    for x in s.xi:
        comps = []
        for i in range(m):
            acc = s.chart.zero_poly()
            for k in range(m):
                a = u[i, k]
                if a.is_zero() or x.comps[k].is_zero():
                    continue
                acc = acc + a * x.comps[k]
            comps.append(acc)
        xi_new.append(TensorField.vector(s.chart, comps))
    eta_new = []
    for w in s.eta:
        comps = []
        for j in range(m):
            acc = s.chart.zero_poly()
            for l in range(m):
                a = w.comps[l]
                if a.is_zero():
                    continue
                b = u_inverse[l, j]
                if b.is_zero():
                    continue
                acc = acc + a * b
            comps.append(acc)
        eta_new.append(TensorField.oneform(s.chart, comps))
    metric_new = None
    if s.metric is not None:
        metric_new = metric_pullback(
            s.metric, TensorField.endo_from_matrix(s.chart, u_inverse)
        )
    return replace(
        s, f=f_new, xi=tuple(xi_new), eta=tuple(eta_new), metric=metric_new
    )


def random_unimodular(
    chart: Chart,
    rng: random.Random,
    max_shears: int = 4,
    max_degree: int = 2,
) -> tuple[PolyMatrix, PolyMatrix]:
    """Seeded product of elementary shears I + p*e_ij, with its exact inverse.

    Entry polynomials are monomials of total degree <= max_degree with small
    integer coefficients, so determinants stay at +1 and conjugated models
    remain desk-sized.
    """
    m = chart.dim
    coeff_pool = (-2, -1, 1, 2)
    count = rng.randint(1, max_shears)
    factors: list[tuple[int, int, Poly]] = []
    for _ in range(count):
        i = rng.randrange(m)
        j = rng.randrange(m)
        while j == i:
            j = rng.randrange(m)
        degree = rng.randint(0, max_degree)
        exps = [0] * m
        for _ in range(degree):
            exps[rng.randrange(m)] += 1
        p = Poly(chart.coords, {tuple(exps): Fraction(rng.choice(coeff_pool))})
        factors.append((i, j, p))

    def shear(i: int, j: int, p: Poly) -> PolyMatrix:
        ident = PolyMatrix.identity(m, chart.coords)
        rows = [list(row) for row in ident.entries]
        rows[i][j] = rows[i][j] + p
        return PolyMatrix(rows)

    u = PolyMatrix.identity(m, chart.coords)
    for i, j, p in factors:
        u = u @ shear(i, j, p)
    u_inv = PolyMatrix.identity(m, chart.coords)
    for i, j, p in reversed(factors):
        u_inv = u_inv @ shear(i, j, -p)
    return u, u_inv


# -- sign-consistency lint -----------------------------------------------------------


CONTACT_FAMILY = "contact"
R_CONTACT_FAMILY = "r-contact"
CONSISTENT_FAMILY = "consistent"
AXIOM_FAMILIES = (CONTACT_FAMILY, R_CONTACT_FAMILY, CONSISTENT_FAMILY)

_FAMILY_TABLE = {
    # (family, signature) -> (squaring coefficient p, pairing kappa, tag)
    (CONTACT_FAMILY, RIEMANNIAN): (-1, 1, "1.6"),
    (CONTACT_FAMILY, LORENTZIAN): (1, -1, "1.10"),
    (R_CONTACT_FAMILY, RIEMANNIAN): (1, 1, "1.9"),
    (R_CONTACT_FAMILY, LORENTZIAN): (-1, -1, "1.13"),
}


def consistency_lint(family: str, epsilon: int, signature: str) -> list[str]:
    """Apply the squaring axiom to xi_beta symbolically and report the forced eps.

    For an axiom family F^2 = eps*I + p * sum xi(x)eta with pairing value
    kappa, the left side kills xi_beta while the right side gives
    (eps + p*kappa) * xi_beta, so the family admits models only when
    eps = -p*kappa.  The consistent rewrite chooses p = -eps*kappa and is
    therefore satisfiable for both eps.
    """
    if signature not in SIGNATURES:
        raise StructureError(f"unknown signature {signature!r}")
    if epsilon not in (-1, 1):
        raise StructureError("epsilon must be -1 or +1")
    notes: list[str] = []
    kappa = 1 if signature == RIEMANNIAN else -1
    if family == CONSISTENT_FAMILY:
        tag = "1.9c" if signature == RIEMANNIAN else "1.13c"
        rewrite = "F^2 = eps*(I - sum xi(x)eta)" if kappa > 0 else "F^2 = eps*(I + sum xi(x)eta)"
        notes.append(
            f"[lint {tag}] {rewrite}: applied to xi_beta gives (eps - eps*kappa^2)*xi_beta = 0; "
            f"satisfiable for both eps, requested eps = {epsilon:+d} is CONSISTENT"
        )
        return notes
    try:
        p, kappa, tag = _FAMILY_TABLE[(family, signature)]
    except KeyError:
        raise StructureError(f"unknown axiom family {family!r}")
    forced = -p * kappa
    notes.append(
        f"[lint {tag}] F^2 axiom applied to xi_beta gives (eps + ({p:+d})*({kappa:+d}))*xi_beta = 0, "
        f"forcing eps = {forced:+d}"
    )
    if epsilon == forced:
        notes.append(f"[lint {tag}] requested eps = {epsilon:+d} is CONSISTENT")
    else:
        notes.append(
            f"[lint {tag}] requested eps = {epsilon:+d} is INCONSISTENT; "
            f"the consistent rewrite F^2 = eps*(I {'-' if kappa > 0 else '+'} sum xi(x)eta) "
            f"admits both eps"
        )
    return notes


# -- canonical eps-complex block and its eigenchecks -----------------------------------


@dataclass(frozen=True)
class EigenCheck:
    name: str
    passed: bool
    detail: str


@dataclass
class EigenReport:
    epsilon: int
    entries: list[EigenCheck] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)


def canonical_complex(
    n: int, epsilon: int, chart: Chart | None = None
) -> tuple[TensorField, EigenReport]:
    """The block structure J(d/dx_i) = d/dy_i, J(d/dy_i) = eps*d/dx_i, with
    eps-complex eigenvector checks and the dual squaring check (J*)^2 = eps*I."""
    if chart is None:
        coords = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
        chart = Chart("C", tuple(coords))
    if chart.dim % 2 != 0:
        raise StructureError("canonical complex block needs an even-dimensional chart")
    if chart.dim != 2 * n:
        raise StructureError(f"chart dim {chart.dim} != 2n = {2 * n}")
    m = chart.dim
    z = chart.zero_poly()
    jmat = [[z for _ in range(m)] for _ in range(m)]
    for i in range(n):
        jmat[n + i][i] = chart.const(1)
        jmat[i][n + i] = chart.const(epsilon)
    j = TensorField.endo(chart, jmat)

    values = [[entry.constant_value() for entry in row] for row in jmat]
    report = EigenReport(epsilon=epsilon)

    def apply_j(vec: list[EpsComplex]) -> list[EpsComplex]:
        out = []
        for i in range(m):
            acc = EpsComplex(0, 0, epsilon)
            for k in range(m):
                if values[i][k] == 0:
                    continue
                acc = acc + vec[k].scale(values[i][k])
            out.append(acc)
        return out

    half = Fraction(1, 2)
    for i in range(n):
        for im_sign, lam_im, label in (
            (-1, -epsilon, "-i*eps"),
            (1, epsilon, "+i*eps"),
        ):
            vec = [EpsComplex(0, 0, epsilon) for _ in range(m)]
            vec[i] = EpsComplex(half, 0, epsilon)
            vec[n + i] = EpsComplex(0, im_sign * half, epsilon)
            lam = EpsComplex(0, lam_im, epsilon)
            image = apply_j(vec)
            expected = [v * lam for v in vec]
            passed = all((a - b).is_zero() for a, b in zip(image, expected))
            handed = "-" if im_sign < 0 else "+"
            report.entries.append(
                EigenCheck(
                    name=f"J(1/2(dx{i + 1} {handed} i dy{i + 1})) eigenvalue {label}",
                    passed=passed,
                    detail=f"eigenvalue = (0 {'+' if lam_im >= 0 else '-'} {abs(lam_im)}i), eps = {epsilon:+d}",
                )
            )
    lam_sq = EpsComplex(0, -epsilon, epsilon) * EpsComplex(0, -epsilon, epsilon)
    report.entries.append(
        EigenCheck(
            name="eigenvalue squares back to eps",
            passed=lam_sq == EpsComplex(epsilon, 0, epsilon),
            detail=f"(-i*eps)^2 = {lam_sq.re} with eps = {epsilon:+d}",
        )
    )
    dual = endo_transpose(j)
    dual_sq = endo_compose(dual, dual)
    eps_identity = TensorField.identity_endo(chart).scale(epsilon)
    report.entries.append(
        EigenCheck(
            name="(J*)^2 = eps*I",
            passed=(dual_sq - eps_identity).is_zero(),
            detail="dual endomorphism squares to eps times identity",
        )
    )
    return j, report
