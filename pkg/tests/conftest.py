"""Shared deterministic generators for the randomized suites.

Everything draws from an explicit random.Random seed; no test uses global
or wall-clock randomness.
"""

from fractions import Fraction
import random

import pytest

from hermlie import linalg
from hermlie.algebra_core import Endo, LieAlgebra, abelian, change_basis, parse_salamon
from hermlie.hermitian import HermitianStructure, Metric
from hermlie.twist import Representation, TwistData

Q = Fraction


def rational(rng, lo=-5, hi=5, den=3):
    return Q(rng.randint(lo, hi), rng.randint(1, den))


def nonzero_rational(rng, lo=-5, hi=5, den=3):
    while True:
        x = rational(rng, lo, hi, den)
        if x != 0:
            return x


def random_invertible(rng, n, lo=-3, hi=3):
    """Random invertible rational matrix (resampled until nonsingular)."""
    while True:
        m = tuple(tuple(rational(rng, lo, hi, 2) for _ in range(n)) for _ in range(n))
        if linalg.det(m) != 0:
            return m


def random_unimodular(rng, n):
    """Random integer matrix with determinant +-1 (product of shears/swaps)."""
    m = [list(row) for row in linalg.identity(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = Q(rng.randint(-2, 2))
        for k in range(n):
            m[i][k] += c * m[j][k]
    if rng.random() < 0.5:
        m[0], m[-1] = m[-1], m[0]
    return tuple(tuple(row) for row in m)


def standard_j(p):
    """J e_i = e_{p+i}, J e_{p+i} = -e_i on R^{2p}."""
    rows = [[Q(0)] * (2 * p) for _ in range(2 * p)]
    for i in range(p):
        rows[p + i][i] = Q(1)
        rows[i][p + i] = Q(-1)
    return Endo(tuple(tuple(r) for r in rows))


def random_compatible_metric(rng, j):
    """Random J-invariant positive-definite metric: A^T A averaged over J."""
    n = j.dim
    a = random_invertible(rng, n)
    ata = linalg.mat_mul(linalg.transpose(a), a)
    jt = linalg.transpose(j.m)
    sym = linalg.mat_add(ata, linalg.mat_mul(jt, linalg.mat_mul(ata, j.m)))
    return Metric(sym)


def random_solvable(rng, n):
    """R acting on an abelian R^{n-1}: always a Lie algebra, randomized by a
    unimodular change of basis."""
    brackets = {}
    for j in range(2, n + 1):
        comps = {k: rational(rng, -2, 2, 2) for k in range(2, n + 1)}
        comps = {k: v for k, v in comps.items() if v != 0}
        if comps:
            brackets[(1, j)] = comps
    L = LieAlgebra(n, brackets)
    return change_basis(L, random_unimodular(rng, n))


# the 4-dim rank-one solvable factor used throughout: [f1,f2]=f2, [f1,f3]=f3,
# J f1=f4, f2=f3, and any metric diag(s,1,1,s)
RR31_TEXT = "(0,-12,-13,0)"
RR31_J = Endo.from_images([(0, 0, 0, 1), (0, 0, 1, 0), (0, -1, 0, 0), (-1, 0, 0, 0)])


def rr31_structure(sigma=Q(3)):
    L = parse_salamon(RR31_TEXT)
    return HermitianStructure(L, RR31_J, Metric.diagonal([sigma, 1, 1, sigma]))


def r2_structure(rng=None):
    j = standard_j(1)
    g = Metric.identity(2) if rng is None else random_compatible_metric(rng, j)
    return HermitianStructure(abelian(2), j, g)


def aff_structure(rng=None):
    L = parse_salamon("(-12,0)")
    j = standard_j(1)
    g = Metric.identity(2) if rng is None else random_compatible_metric(rng, j)
    return HermitianStructure(L, j, g)


def proof_couple(x1, t1, x2=Q(-1), t2=Q(0), sigma=Q(3)):
    """The representation couple of the worked classification example; the
    balanced case is x2 = -1, t2 = 0."""
    h1 = r2_structure()
    h2 = rr31_structure(sigma)
    rho1 = Representation.zero(h1.L, h2.L)
    rho2 = Representation(
        h2.L,
        h1.L,
        [
            Endo([[x2, -x1], [x1, x2]]),
            Endo.zero(2),
            Endo.zero(2),
            Endo([[t2, -t1], [t1, t2]]),
        ],
    )
    return TwistData(h1, h2, rho1, rho2)


def _complex_block(q, diag_a, diag_b):
    rows = [[Q(0)] * (2 * q) for _ in range(2 * q)]
    for i in range(q):
        rows[i][i] = diag_a[i]
        rows[q + i][q + i] = diag_a[i]
        rows[i][q + i] = diag_b[i]
        rows[q + i][i] = -diag_b[i]
    return Endo(tuple(tuple(r) for r in rows))


def random_twist_data(rng, kind=None):
    """A valid TwistData drawn from four constructions:

    * 'semidirect22'  : abelian R^2 factors, rho2 = 0, rho1 in span(I, J2)
    * 'aff22'         : aff(R) acting on abelian R^2 through e2 only
    * 'proof24'       : the 2+4 rank-one solvable couple at random parameters
    * 'twisted24'     : abelian 2+4 with BOTH representations nonzero
                        (complex-linear, disjoint complex supports)
    """
    kinds = ("semidirect22", "aff22", "proof24", "twisted24")
    if kind is None:
        kind = kinds[rng.randrange(4)]
    if kind == "semidirect22":
        h1 = r2_structure(rng)
        h2 = r2_structure(rng)
        j2 = h2.J
        images = [
            rational(rng) * Endo.identity(2) + rational(rng) * j2 for _ in range(2)
        ]
        rho1 = Representation(h1.L, h2.L, images)
        rho2 = Representation.zero(h2.L, h1.L)
        return TwistData(h1, h2, rho1, rho2)
    if kind == "aff22":
        h1 = aff_structure(rng)
        h2 = r2_structure(rng)
        rho1 = Representation(
            h1.L,
            h2.L,
            [Endo.zero(2), rational(rng) * Endo.identity(2) + rational(rng) * h2.J],
        )
        rho2 = Representation.zero(h2.L, h1.L)
        return TwistData(h1, h2, rho1, rho2)
    if kind == "proof24":
        td = proof_couple(
            rational(rng),
            rational(rng),
            x2=rational(rng),
            t2=rational(rng),
            sigma=abs(nonzero_rational(rng)),
        )
        return td
    # twisted24: both representations nonzero on abelian factors
    h1 = r2_structure(rng)
    q = 2
    j2 = standard_j(q)
    h2 = HermitianStructure(abelian(2 * q), j2, random_compatible_metric(rng, j2))
    # rho1 complex-linear, image in complex coordinate 2 of the target
    t_re, t_im = rational(rng), rational(rng)
    im1 = _complex_block(q, [Q(0), t_re], [Q(0), t_im])
    rho1 = Representation(h1.L, h2.L, [im1, j2 @ im1])
    # rho2 reads complex coordinate 2 only, complex-linearly
    c_re, c_im = rational(rng), rational(rng)
    m2 = c_re * Endo.identity(2) + c_im * h1.J
    zero = Endo.zero(2)
    rho2 = Representation(h2.L, h1.L, [zero, m2, zero, h1.J @ m2])
    return TwistData(h1, h2, rho1, rho2)


@pytest.fixture
def rng():
    return random.Random(20260811)
