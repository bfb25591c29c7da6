"""Twisted cartesian products of Hermitian Lie algebras.

Two representations rho1: G1 -> Der(G2) and rho2: G2 -> Der(G1) form a
compatible couple when

    rho1(rho2(a)x)b = rho1(rho2(b)x)a      (Eq 1)
    rho2(rho1(x)a)y = rho2(rho1(y)a)x      (Eq 2)

which is exactly the Jacobi identity of the bracket

    [x,y] = [x,y]_1,  [a,b] = [a,b]_2,  [x,a] = rho1(x)a - rho2(a)x

on G1 (+) G2 (G1 basis first).  This module builds the product Hermitian
structure and implements the closed-form expressions for its Levi-Civita
connection, d omega and Lee form, each of which is cross-checked in the test
suite against the generic computations from :mod:`hermlie.hermitian`.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools

from . import linalg
from .algebra_core import Endo, KForm, LieAlgebra, commutator, ce_d
from .hermitian import (
    Connection,
    HermitianStructure,
    Metric,
    classify,
    fundamental_form,
    lee_form,
    levi_civita,
)

Q = Fraction
_ZERO = Q(0)


class TwistError(ValueError):
    pass


class ProductGateError(TwistError):
    """Raised when build_product preconditions fail; carries the defects."""

    def __init__(self, defects):
        self.defects = list(defects)
        lines = "; ".join(str(d) for d in self.defects)
        super().__init__(f"invalid twist data: {lines}")


class TraceConditionError(TwistError):
    pass


@dataclass(frozen=True)
class Defect:
    """One violated law: which identity failed, at which basis indices, and
    the exact residual (a vector or an Endo)."""

    law: str
    where: tuple
    residual: object

    def __str__(self):
        return f"{self.law} law fails at {self.where}: residual {self.residual!r}"


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

class Representation:
    """Per-basis-vector endomorphisms of the other factor.

    ``images[k-1]`` is the endomorphism of ``target`` assigned to the k-th
    basis vector of ``source``.  The representation laws are *checked*, not
    assumed: see :func:`check_representation`.
    """

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        images = tuple(images)
        if len(images) != source.dim:
            raise ValueError("need one image per source basis vector")
        if any(im.dim != target.dim for im in images):
            raise ValueError("image dimension does not match target algebra")
        self.source = source
        self.target = target
        self.images = images

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, [Endo.zero(target.dim) for _ in range(source.dim)])

    def of_basis(self, k):
        return self.images[k - 1]

    def of_vector(self, x):
        out = Endo.zero(self.target.dim)
        for k, c in enumerate(x):
            if c != 0:
                out = out + c * self.images[k]
        return out

    @property
    def is_zero(self):
        return all(im.is_zero for im in self.images)

    def __repr__(self):
        return f"Representation({self.source.dim}->End({self.target.dim}))"


def check_representation(r):
    """Defect list for the derivation and homomorphism laws; empty iff r is a
    representation by derivations."""
    defects = []
    tgt, src = r.target, r.source
    basis_t = [linalg.basis_vector(tgt.dim, k) for k in range(1, tgt.dim + 1)]
    for k in range(1, src.dim + 1):
        d = r.of_basis(k)
        for a, b in itertools.combinations(range(1, tgt.dim + 1), 2):
            lhs = d(tgt.bracket_basis(a, b))
            rhs = linalg.vec_add(
                tgt.bracket(d(basis_t[a - 1]), basis_t[b - 1]),
                tgt.bracket(basis_t[a - 1], d(basis_t[b - 1])),
            )
            res = linalg.vec_sub(lhs, rhs)
            if not linalg.is_zero_vec(res):
                defects.append(Defect("derivation", (k, a, b), res))
    for i, j in itertools.combinations(range(1, src.dim + 1), 2):
        lhs = r.of_vector(src.bracket_basis(i, j))
        rhs = commutator(r.of_basis(i), r.of_basis(j))
        res = lhs - rhs
        if not res.is_zero:
            defects.append(Defect("homomorphism", (i, j), res))
    return defects


def check_compatible(r1, r2):
    """Defect list for the couple identities Eq 1 / Eq 2; empty iff the
    product bracket satisfies Jacobi (factor Jacobi identities held fixed)."""
    defects = []
    m, n = r1.source.dim, r2.source.dim
    if r1.target.dim != n or r2.target.dim != m:
        raise TwistError("representation dimensions are not a couple")
    basis1 = [linalg.basis_vector(m, k) for k in range(1, m + 1)]
    basis2 = [linalg.basis_vector(n, k) for k in range(1, n + 1)]
    for i in range(1, m + 1):
        x = basis1[i - 1]
        for a, b in itertools.combinations(range(1, n + 1), 2):
            lhs = r1.of_vector(r2.of_basis(a)(x))(basis2[b - 1])
            rhs = r1.of_vector(r2.of_basis(b)(x))(basis2[a - 1])
            res = linalg.vec_sub(lhs, rhs)
            if not linalg.is_zero_vec(res):
                defects.append(Defect("compatibility-1", (i, a, b), res))
    for a in range(1, n + 1):
        av = basis2[a - 1]
        for i, j in itertools.combinations(range(1, m + 1), 2):
            lhs = r2.of_vector(r1.of_basis(i)(av))(basis1[j - 1])
            rhs = r2.of_vector(r1.of_basis(j)(av))(basis1[i - 1])
            res = linalg.vec_sub(lhs, rhs)
            if not linalg.is_zero_vec(res):
                defects.append(Defect("compatibility-2", (a, i, j), res))
    return defects


# ---------------------------------------------------------------------------
# TwistData
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistData:
    """Two Hermitian factors plus the representation couple (rho1, rho2)."""

    h1: HermitianStructure
    h2: HermitianStructure
    rho1: Representation
    rho2: Representation

    def defects(self):
        return (
            check_representation(self.rho1)
            + check_representation(self.rho2)
            + check_compatible(self.rho1, self.rho2)
        )


def check_commuting(td):
    """True iff every rho1(x) commutes with J2 and every rho2(a) with J1."""
    return all(
        commutator(im, td.h2.J).is_zero for im in td.rho1.images
    ) and all(commutator(im, td.h1.J).is_zero for im in td.rho2.images)


def check_integrability_general(td):
    """The two operator identities equivalent to integrability of the product
    J (implied by, but strictly weaker than, the commuting condition):

        [rho1(J1 x), J2] = J2 rho1(x) J2 + rho1(x)
        [rho2(J2 a), J1] = J1 rho2(a) J1 + rho2(a)
    """
    j1, j2 = td.h1.J, td.h2.J
    m, n = td.h1.dim, td.h2.dim
    for i in range(1, m + 1):
        x = linalg.basis_vector(m, i)
        lhs = commutator(td.rho1.of_vector(j1(x)), j2)
        rhs = j2 @ td.rho1.of_basis(i) @ j2 + td.rho1.of_basis(i)
        if lhs != rhs:
            return False
    for a in range(1, n + 1):
        av = linalg.basis_vector(n, a)
        lhs = commutator(td.rho2.of_vector(j2(av)), j1)
        rhs = j1 @ td.rho2.of_basis(a) @ j1 + td.rho2.of_basis(a)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# the product
# ---------------------------------------------------------------------------

def _embed1(v, m, n):
    return tuple(v) + (_ZERO,) * n


def _embed2(v, m, n):
    return (_ZERO,) * m + tuple(v)


def product_bracket_table(td):
    """Brackets of G1 |><| G2 (G1 indices 1..m, G2 indices m+1..m+n)."""
    m, n = td.h1.dim, td.h2.dim
    brackets = {key: dict(slot) for key, slot in td.h1.L.nonzero_brackets()}
    for (a, b), slot in td.h2.L.nonzero_brackets():
        brackets[(a + m, b + m)] = {k + m: v for k, v in slot.items()}
    for i in range(1, m + 1):
        x = linalg.basis_vector(m, i)
        for a in range(1, n + 1):
            av = linalg.basis_vector(n, a)
            g2part = td.rho1.of_basis(i)(av)
            g1part = linalg.vec_neg(td.rho2.of_basis(a)(x))
            slot = {}
            for k, val in enumerate(g1part, start=1):
                if val != 0:
                    slot[k] = val
            for k, val in enumerate(g2part, start=1):
                if val != 0:
                    slot[k + m] = val
            if slot:
                brackets[(i, a + m)] = slot
    return brackets


def build_product(td, unchecked=False):
    """Assemble (G1 |><| G2, J1 (+) J2, k1 (+) k2) as a Hermitian structure.

    Preconditions (representation laws, compatibility, integrability) are
    enforced and reported verbatim unless ``unchecked`` is set, which exists
    so property tests can probe invalid couples.
    """
    if not unchecked:
        defects = td.defects()
        if defects:
            raise ProductGateError(defects)
        if not check_integrability_general(td):
            raise ProductGateError(
                [Defect("integrability", (), "operator identities (3)-(4) fail")]
            )
    m, n = td.h1.dim, td.h2.dim
    L = LieAlgebra(m + n, product_bracket_table(td))
    jrows = []
    for r in range(m + n):
        row = []
        for c in range(m + n):
            if r < m and c < m:
                row.append(td.h1.J.m[r][c])
            elif r >= m and c >= m:
                row.append(td.h2.J.m[r - m][c - m])
            else:
                row.append(_ZERO)
        jrows.append(tuple(row))
    J = Endo(tuple(jrows))
    grows = []
    for r in range(m + n):
        row = []
        for c in range(m + n):
            if r < m and c < m:
                row.append(td.h1.g.matrix[r][c])
            elif r >= m and c >= m:
                row.append(td.h2.g.matrix[r - m][c - m])
            else:
                row.append(_ZERO)
        grows.append(tuple(row))
    g = Metric(tuple(grows))
    h = HermitianStructure(L, J, g, unchecked=unchecked)
    return L, h


# ---------------------------------------------------------------------------
# adjoints and the closed-form product operations
# ---------------------------------------------------------------------------

def adjoint(a, g):
    """g-adjoint: g(Ax, y) = g(x, A*y); A* = g^{-1} A^T g."""
    ginv = g.inverse()
    return Endo(linalg.mat_mul(ginv, linalg.mat_mul(linalg.transpose(a.m), g.matrix)))


def _rho_adjoints(td):
    rho1s = [adjoint(im, td.h2.g) for im in td.rho1.images]
    rho2s = [adjoint(im, td.h1.g) for im in td.rho2.images]
    return rho1s, rho2s


def product_connection(td):
    """Levi-Civita connection of the product via the closed-form block rules:

        nabla_x a = 1/2((rho1(x)-rho1*(x))a - (rho2(a)+rho2*(a))x)
        nabla_a x = 1/2((rho2(a)-rho2*(a))x - (rho1(x)+rho1*(x))a)

    with the factor connections on the pure blocks plus the symmetric
    cross components those blocks pick up,

        k2(nabla_x y|_2, c) = 1/2 k1((rho2(c)+rho2*(c))x, y),
        k1(nabla_a b|_1, z) = 1/2 k2((rho1(z)+rho1*(z))a, b),

    which vanish exactly when the representations are skew-adjoint.  Agrees
    coefficient by coefficient with the generic Koszul solution on the
    assembled product.
    """
    m, n = td.h1.dim, td.h2.dim
    half = Q(1, 2)
    rho1s, rho2s = _rho_adjoints(td)
    c1 = levi_civita(td.h1.L, td.h1.g)
    c2 = levi_civita(td.h2.L, td.h2.g)
    basis1 = [linalg.basis_vector(m, k) for k in range(1, m + 1)]
    basis2 = [linalg.basis_vector(n, k) for k in range(1, n + 1)]
    sym1 = [td.rho1.of_basis(i) + rho1s[i - 1] for i in range(1, m + 1)]
    sym2 = [td.rho2.of_basis(a) + rho2s[a - 1] for a in range(1, n + 1)]
    k1inv = td.h1.g.inverse()
    k2inv = td.h2.g.inverse()
    total = m + n
    gamma = [[None] * total for _ in range(total)]
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            vals = tuple(
                half * td.h1.g.value(sym2[c](basis1[i - 1]), basis1[j - 1])
                for c in range(n)
            )
            corr = linalg.mat_vec(k2inv, vals)
            gamma[i - 1][j - 1] = linalg.vec_add(
                _embed1(c1.nabla_basis(i, j), m, n), _embed2(corr, m, n)
            )
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            vals = tuple(
                half * td.h2.g.value(sym1[z](basis2[a - 1]), basis2[b - 1])
                for z in range(m)
            )
            corr = linalg.mat_vec(k1inv, vals)
            gamma[m + a - 1][m + b - 1] = linalg.vec_add(
                _embed2(c2.nabla_basis(a, b), m, n), _embed1(corr, m, n)
            )
    for i in range(1, m + 1):
        x = basis1[i - 1]
        for a in range(1, n + 1):
            av = basis2[a - 1]
            g2part = linalg.vec_scale(half, (td.rho1.of_basis(i) - rho1s[i - 1])(av))
            g1part = linalg.vec_scale(-half, (td.rho2.of_basis(a) + rho2s[a - 1])(x))
            gamma[i - 1][m + a - 1] = linalg.vec_add(
                _embed1(g1part, m, n), _embed2(g2part, m, n)
            )
            g1part_b = linalg.vec_scale(half, (td.rho2.of_basis(a) - rho2s[a - 1])(x))
            g2part_b = linalg.vec_scale(-half, (td.rho1.of_basis(i) + rho1s[i - 1])(av))
            gamma[m + a - 1][i - 1] = linalg.vec_add(
                _embed1(g1part_b, m, n), _embed2(g2part_b, m, n)
            )
    return Connection(tuple(tuple(row) for row in gamma))


def product_dw(td):
    """d omega of the product via the closed-form block rules:

        d omega(x,y,c) = -omega1((rho2*(c)+rho2(c))x, y)
        d omega(x,b,c) = -omega2((rho1*(x)+rho1(x))b, c)

    with the factor d omega_i on pure triples.  Agrees exactly with ce_d of
    the product fundamental form.
    """
    m, n = td.h1.dim, td.h2.dim
    rho1s, rho2s = _rho_adjoints(td)
    w1 = fundamental_form(td.h1)
    w2 = fundamental_form(td.h2)
    dw1 = ce_d(td.h1.L, w1)
    dw2 = ce_d(td.h2.L, w2)
    basis1 = [linalg.basis_vector(m, k) for k in range(1, m + 1)]
    basis2 = [linalg.basis_vector(n, k) for k in range(1, n + 1)]
    coeffs = {}
    for idx, v in dw1.coeffs.items():
        coeffs[idx] = v
    for (a, b, c), v in dw2.coeffs.items():
        coeffs[(a + m, b + m, c + m)] = v
    for i, j in itertools.combinations(range(1, m + 1), 2):
        for c in range(1, n + 1):
            sym = td.rho2.of_basis(c) + rho2s[c - 1]
            v = -w1(sym(basis1[i - 1]), basis1[j - 1])
            if v != 0:
                coeffs[(i, j, c + m)] = v
    for i in range(1, m + 1):
        for b, c in itertools.combinations(range(1, n + 1), 2):
            sym = td.rho1.of_basis(i) + rho1s[i - 1]
            v = -w2(sym(basis2[b - 1]), basis2[c - 1])
            if v != 0:
                coeffs[(i, b + m, c + m)] = v
    return KForm(3, m + n, coeffs)


# ---------------------------------------------------------------------------
# characters and the Lee form of the product
# ---------------------------------------------------------------------------

def character(r):
    """The 1-form x |-> tr(rho(x)) on the source algebra."""
    coeffs = {}
    for k in range(1, r.source.dim + 1):
        t = r.of_basis(k).trace()
        if t != 0:
            coeffs[(k,)] = t
    return KForm(1, r.source.dim, coeffs)


def lee_via_theorem(td):
    """Lee form of the product, blockwise: theta = (theta1 - chi_rho1) (+)
    (theta2 - chi_rho2).  Exactly equals lee_form(build_product(td))."""
    m, n = td.h1.dim, td.h2.dim
    t1 = lee_form(td.h1) - character(td.rho1)
    t2 = lee_form(td.h2) - character(td.rho2)
    coeffs = {}
    for (k,), v in t1.coeffs.items():
        coeffs[(k,)] = v
    for (k,), v in t2.coeffs.items():
        coeffs[(k + m,)] = v
    return KForm(1, m + n, coeffs)


@dataclass(frozen=True)
class BalancedLCBFlags:
    balanced: bool
    lcb: bool


def balanced_lcb_test(td):
    """Balanced / LCB criteria for the product, without assembling it:

    balanced  <=>  theta_i = chi_rho_i on both factors;
    LCB       <=>  both factors LCB and
                   theta1(rho2(a)x) - theta2(rho1(x)a)
                     = chi_rho1(rho2(a)x) - chi_rho2(rho1(x)a).
    """
    t1, t2 = lee_form(td.h1), lee_form(td.h2)
    x1, x2 = character(td.rho1), character(td.rho2)
    balanced = (t1 == x1) and (t2 == x2)
    lcb = classify(td.h1).lcb and classify(td.h2).lcb
    if lcb:
        m, n = td.h1.dim, td.h2.dim
        d1 = t1 - x1
        d2 = t2 - x2
        for i in range(1, m + 1):
            x = linalg.basis_vector(m, i)
            for a in range(1, n + 1):
                av = linalg.basis_vector(n, a)
                if d1(td.rho2.of_basis(a)(x)) != d2(td.rho1.of_basis(i)(av)):
                    lcb = False
                    break
            if not lcb:
                break
    return BalancedLCBFlags(balanced=balanced, lcb=lcb)


def kahler_test(td):
    """Product is Kahler iff both factors are and every rho image is
    skew-adjoint for the other factor's metric."""
    if not (classify(td.h1).kahler and classify(td.h2).kahler):
        return False
    rho1s, rho2s = _rho_adjoints(td)
    skew1 = all((im + st).is_zero for im, st in zip(td.rho1.images, rho1s))
    skew2 = all((im + st).is_zero for im, st in zip(td.rho2.images, rho2s))
    return skew1 and skew2


# ---------------------------------------------------------------------------
# the R^{2p} |><| R^{2q} example family
# ---------------------------------------------------------------------------

def _standard_j(p):
    """J e_i = e_{p+i}, J e_{p+i} = -e_i on R^{2p}."""
    rows = [[_ZERO] * (2 * p) for _ in range(2 * p)]
    for i in range(p):
        rows[p + i][i] = Q(1)
        rows[i][p + i] = Q(-1)
    return Endo(tuple(tuple(r) for r in rows))


def _block_endo(diag_a, diag_b):
    """[[A, B], [-B, A]] with A = diag(diag_a), B = diag(diag_b)."""
    q = len(diag_a)
    rows = [[_ZERO] * (2 * q) for _ in range(2 * q)]
    for i in range(q):
        rows[i][i] = Q(diag_a[i])
        rows[q + i][q + i] = Q(diag_a[i])
        rows[i][q + i] = Q(diag_b[i])
        rows[q + i][i] = -Q(diag_b[i])
    return Endo(tuple(tuple(r) for r in rows))


def build_example_2p2q(p, q, a, b, c, d):
    """Abelian twisted product R^{2p} |><| R^{2q} with the standard complex
    structures, identity metrics, and block-diagonal representations

        rho1(e_i) = [[A_i, B_i], [-B_i, A_i]],  rho2(f_j) = [[C_j, D_j], [-D_j, C_j]]

    given by diagonal coefficient lists: ``a``/``b`` hold 2p rows of length q,
    ``c``/``d`` hold 2q rows of length p.  Requires tr A_i = tr C_j = 0
    (the balanced condition) and a compatible couple; compatibility is
    checked and reported, not assumed.
    """
    from .algebra_core import abelian

    a = [list(map(Q, row)) for row in a]
    b = [list(map(Q, row)) for row in b]
    c = [list(map(Q, row)) for row in c]
    d = [list(map(Q, row)) for row in d]
    if len(a) != 2 * p or len(b) != 2 * p:
        raise ValueError("a and b need one diagonal (length q) per R^{2p} basis vector")
    if len(c) != 2 * q or len(d) != 2 * q:
        raise ValueError("c and d need one diagonal (length p) per R^{2q} basis vector")
    if any(len(row) != q for row in a + b) or any(len(row) != p for row in c + d):
        raise ValueError("diagonal length mismatch")
    for i, row in enumerate(a, start=1):
        if sum(row) != 0:
            raise TraceConditionError(f"tr A_{i} = {sum(row)} != 0")
    for j, row in enumerate(c, start=1):
        if sum(row) != 0:
            raise TraceConditionError(f"tr C_{j} = {sum(row)} != 0")
    g1 = abelian(2 * p)
    g2 = abelian(2 * q)
    h1 = HermitianStructure(g1, _standard_j(p), Metric.identity(2 * p))
    h2 = HermitianStructure(g2, _standard_j(q), Metric.identity(2 * q))
    rho1 = Representation(g1, g2, [_block_endo(a[i], b[i]) for i in range(2 * p)])
    rho2 = Representation(g2, g1, [_block_endo(c[j], d[j]) for j in range(2 * q)])
    td = TwistData(h1, h2, rho1, rho2)
    defects = check_compatible(rho1, rho2)
    if defects:
        raise ProductGateError(defects)
    return td
