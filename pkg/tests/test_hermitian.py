from fractions import Fraction as Q
import random

import pytest

from hermlie import linalg
from hermlie.algebra_core import (
    Endo,
    KForm,
    abelian,
    basis_one_form,
    ce_d,
    change_basis,
    form_text,
    parse_salamon,
    pullback_form,
    wedge,
)
from hermlie.hermitian import (
    ClassFlags,
    HermitianError,
    HermitianStructure,
    IncompatiblePairError,
    Metric,
    NotAlmostComplexError,
    NotIntegrableError,
    NotPositiveDefiniteError,
    classify,
    codiff2,
    connection_defects,
    fundamental_form,
    lee_form,
    levi_civita,
    metric_from,
    nijenhuis,
)

from conftest import (
    RR31_J,
    random_compatible_metric,
    random_solvable,
    random_unimodular,
    rational,
    rr31_structure,
    standard_j,
)


# ---------------------------------------------------------------------------
# Nijenhuis tensor
# ---------------------------------------------------------------------------

def test_nijenhuis_abelian_always_integrable(rng):
    L = abelian(4)
    j = standard_j(2)
    values, integrable = nijenhuis(L, j)
    assert integrable and not values


def test_nijenhuis_rank_one_solvable_integrable():
    L = parse_salamon("(0,-12,-13,0)")
    _, integrable = nijenhuis(L, RR31_J)
    assert integrable


def test_nijenhuis_flipped_j_not_integrable():
    # J f1=f2, f3=f4 on the same algebra: expand the four brackets by hand:
    # N(f1,f3) = [f2,f4] - [f1,f3] - J([f2,f3] + [f1,f4]) = -f3
    L = parse_salamon("(0,-12,-13,0)")
    j = Endo.from_images([(0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0)])
    values, integrable = nijenhuis(L, j)
    assert not integrable
    assert values[(1, 3)] == (Q(0), Q(0), Q(-1), Q(0))


def test_nijenhuis_rejects_non_almost_complex():
    with pytest.raises(NotAlmostComplexError):
        nijenhuis(abelian(2), Endo.identity(2))


# ---------------------------------------------------------------------------
# fundamental form <-> metric
# ---------------------------------------------------------------------------

def test_fundamental_form_rr31():
    h = rr31_structure(Q(3))
    assert h.omega == KForm(2, 4, {(1, 4): Q(3), (2, 3): Q(1)})


def test_fundamental_form_standard_plane():
    h = HermitianStructure(abelian(2), standard_j(1), Metric.identity(2))
    assert h.omega == KForm(2, 2, {(1, 2): Q(1)})


def test_metric_from_examples():
    omega = KForm(2, 4, {(1, 4): Q(3), (2, 3): Q(1)})
    g = metric_from(omega, RR31_J)
    assert g == Metric.diagonal([3, 1, 1, 3])
    assert g.is_positive_definite
    # sigma = -1 is reported indefinite, not raised
    g2 = metric_from(KForm(2, 4, {(1, 4): Q(-1), (2, 3): Q(1)}), RR31_J)
    assert not g2.is_positive_definite
    g3 = metric_from(KForm(2, 2, {(1, 2): Q(1)}), standard_j(1))
    assert g3 == Metric.identity(2)


def test_metric_from_rejects_non_invariant_omega():
    # omega = e^{12} is not invariant under the standard J on R^4
    # (J pairs (1,3) and (2,4), so omega(Je1, Je2) = omega(e3, e4) = 0 != 1)
    with pytest.raises(IncompatiblePairError):
        metric_from(KForm(2, 4, {(1, 2): Q(1)}), standard_j(2))


def test_metric_roundtrip_random(rng):
    for _ in range(20):
        j = standard_j(2)
        g = random_compatible_metric(rng, j)
        h = HermitianStructure(abelian(4), j, g)
        assert metric_from(h.omega, j) == g


def test_hermitian_structure_validation():
    L = parse_salamon("(0,-12,-13,0)")
    with pytest.raises(NotAlmostComplexError):
        HermitianStructure(L, Endo.identity(4), Metric.identity(4))
    bad_j = Endo.from_images([(0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0)])
    with pytest.raises(NotIntegrableError):
        HermitianStructure(L, bad_j, Metric.identity(4))
    with pytest.raises(NotPositiveDefiniteError):
        HermitianStructure(L, RR31_J, Metric.diagonal([-1, 1, 1, -1]))
    with pytest.raises(IncompatiblePairError):
        HermitianStructure(L, RR31_J, Metric.diagonal([1, 2, 3, 4]))
    # escape hatch for diagnostics
    h = HermitianStructure(L, bad_j, Metric.identity(4), unchecked=True)
    assert h.dim == 4


# ---------------------------------------------------------------------------
# Levi-Civita connection
# ---------------------------------------------------------------------------

def test_levi_civita_abelian_vanishes():
    conn = levi_civita(abelian(3), Metric.identity(3))
    assert all(
        linalg.is_zero_vec(conn.nabla_basis(i, j)) for i in range(1, 4) for j in range(1, 4)
    )


def test_levi_civita_rank_one_coefficient():
    # 2 g(nabla_{f2} f2, f1) = -2 g([f2,f1], f2) = 2, so nabla_{f2}f2 = (1/s) f1
    s = Q(3)
    L = parse_salamon("(0,-12,-13,0)")
    conn = levi_civita(L, Metric.diagonal([s, 1, 1, s]))
    assert conn.nabla_basis(2, 2) == (1 / s, 0, 0, 0)
    assert conn.nabla_basis(1, 2) == (0, 0, 0, 0)
    assert conn.nabla_basis(2, 1) == (0, -1, 0, 0)


def test_levi_civita_invariants_randomized():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(3, 5)
        L = random_solvable(rng, n)
        a = tuple(
            tuple(rational(rng, -2, 2, 2) for _ in range(n)) for _ in range(n)
        )
        if linalg.det(a) == 0:
            continue
        g = Metric(linalg.mat_mul(linalg.transpose(a), a))
        conn = levi_civita(L, g)
        assert connection_defects(L, g, conn) == []


# ---------------------------------------------------------------------------
# codifferential and Lee form
# ---------------------------------------------------------------------------

def test_codiff2_abelian_zero(rng):
    j = standard_j(2)
    g = random_compatible_metric(rng, j)
    omega = fundamental_form(HermitianStructure(abelian(4), j, g))
    assert codiff2(abelian(4), g, omega).is_zero


def test_lee_form_rr31_is_minus_two_e1():
    # the pinned oracle: theta = -2 f^1 for every sigma > 0
    for s in (Q(3), Q(1), Q(7, 2)):
        h = rr31_structure(s)
        assert lee_form(h) == KForm(1, 4, {(1,): Q(-2)})
        assert form_text(lee_form(h)) == "-2*e1"


def test_lee_form_aff_plane_vanishes():
    # aff(R) with omega = e^{12} is Kahler, hence balanced
    L = parse_salamon("(-12,0)")
    h = HermitianStructure(L, standard_j(1), Metric.identity(2))
    assert lee_form(h).is_zero
    assert classify(h) == ClassFlags(kahler=True, balanced=True, lcb=True, lck=True)


def test_codiff2_matches_orthonormal_formula(rng):
    # at metrics diag(d_i^2) the orthonormal basis e_i/d_i stays rational and
    # the textbook formula -sum_i (nabla_{u_i} omega)(u_i, X) can be computed
    # directly; it must agree with the g^{ij}-weighted trace
    for _ in range(10):
        L = random_solvable(rng, 4)
        d = [Q(rng.randint(1, 3)) for _ in range(4)]
        g = Metric.diagonal([x * x for x in d])
        omega = KForm(
            2, 4, {(i, j): rational(rng) for i in range(1, 5) for j in range(i + 1, 5)}
        )
        conn = levi_civita(L, g)
        onb = [linalg.vec_scale(1 / d[k], linalg.basis_vector(4, k + 1)) for k in range(4)]
        fast = codiff2(L, g, omega)
        for k in range(1, 5):
            x = linalg.basis_vector(4, k)
            direct = -sum(
                (
                    -omega(conn.nabla(u, u), x) - omega(u, conn.nabla(u, x))
                    for u in onb
                ),
                Q(0),
            )
            assert fast.coefficient(k) == direct


def test_codiff2_basis_invariance(rng):
    # recompute everything in a random unimodular basis; the codifferential
    # transforms by pullback
    for _ in range(10):
        L = random_solvable(rng, 4)
        j = standard_j(2)
        g = random_compatible_metric(rng, j)
        omega = fundamental_form(HermitianStructure(L, j, g, unchecked=True))
        p = random_unimodular(rng, 4)
        L2 = change_basis(L, p)
        g2 = Metric(linalg.mat_mul(linalg.transpose(p), linalg.mat_mul(g.matrix, p)))
        omega2 = pullback_form(omega, p)
        assert codiff2(L2, g2, omega2) == pullback_form(codiff2(L, g, omega), p)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def test_classify_abelian_all_flags(rng):
    j = standard_j(2)
    h = HermitianStructure(abelian(4), j, random_compatible_metric(rng, j))
    assert classify(h) == ClassFlags(kahler=True, balanced=True, lcb=True, lck=True)


def test_classify_rr31_is_lck_not_balanced():
    h = rr31_structure(Q(3))
    flags = classify(h)
    assert flags == ClassFlags(kahler=False, balanced=False, lcb=True, lck=True)
    # d omega = theta ^ omega = -2 f^{123} pins the LCK identity
    assert ce_d(h.L, h.omega) == wedge(lee_form(h), h.omega)


def test_classify_six_dim_balanced_instance():
    # first classified family at sigma = 1, x = 1/2, t = -2: balanced, not Kahler
    L = parse_salamon(
        "(-13-x*23-t*26, x*13+t*16-23, 0, -34, -35, 0)", {"x": Q(1, 2), "t": Q(-2)}
    )
    j = Endo.from_images(
        [
            (0, 1, 0, 0, 0, 0),
            (-1, 0, 0, 0, 0, 0),
            (0, 0, 0, 0, 0, 1),
            (0, 0, 0, 0, 1, 0),
            (0, 0, 0, -1, 0, 0),
            (0, 0, -1, 0, 0, 0),
        ]
    )
    omega = KForm(2, 6, {(1, 2): Q(1), (3, 6): Q(1), (4, 5): Q(1)})
    h = HermitianStructure(L, j, metric_from(omega, j))
    flags = classify(h)
    assert flags.balanced and not flags.kahler
    assert not ce_d(L, h.omega).is_zero


def test_classflags_implications_randomized(rng):
    # kahler => balanced & lcb & lck; balanced => lcb; balanced & lck => kahler
    structures = []
    for _ in range(15):
        j = standard_j(2)
        structures.append(HermitianStructure(abelian(4), j, random_compatible_metric(rng, j)))
        structures.append(rr31_structure(abs(rational(rng)) + Q(1, 3)))
    for h in structures:
        f = classify(h)
        if f.kahler:
            assert f.balanced and f.lcb and f.lck
        if f.balanced:
            assert f.lcb
        if f.balanced and f.lck:
            assert f.kahler


def test_metric_errors():
    with pytest.raises(HermitianError):
        Metric([[1, 2], [3, 4]])  # not symmetric
    singular = Metric([[1, 1], [1, 1]])
    assert singular.is_singular
    with pytest.raises(HermitianError):
        singular.inverse()
