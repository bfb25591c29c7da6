"""Hermitian layer on a single Lie algebra: compatibility and integrability
checks, Levi-Civita connection, codifferential of the fundamental 2-form,
the Lee form, and the Kahler / balanced / LCB / LCK predicates.

Everything is exact: the codifferential uses the g^{ij}-weighted trace over
an arbitrary basis (no orthonormalisation, hence no square roots), and the
Lee form convention is theta(X) = -(d*omega)(J X).
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools

from . import linalg
from .algebra_core import Endo, KForm, jacobi_defect, ce_d, wedge

Q = Fraction
_ZERO = Q(0)


class HermitianError(ValueError):
    pass


class NotAlmostComplexError(HermitianError):
    pass


class NotIntegrableError(HermitianError):
    pass


class IncompatiblePairError(HermitianError):
    pass


class NotPositiveDefiniteError(HermitianError):
    pass


class SingularMetricError(HermitianError):
    pass


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------

class Metric:
    """Symmetric bilinear form.  Positive definiteness is a reported property
    (Sylvester's criterion in exact arithmetic), not a constructor demand, so
    samplers can probe parameter regions where it fails."""

    __slots__ = ("dim", "matrix", "_inverse", "_minors")

    def __init__(self, matrix):
        rows = tuple(tuple(Q(x) for x in row) for row in matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("metric matrix must be square")
        if not linalg.is_symmetric(rows):
            raise HermitianError("metric matrix is not symmetric")
        self.dim = n
        self.matrix = rows
        self._inverse = None
        self._minors = None

    @classmethod
    def identity(cls, n):
        return cls(linalg.identity(n))

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls(tuple(tuple(Q(entries[i]) if i == j else _ZERO for j in range(n)) for i in range(n)))

    def value(self, u, v):
        total = _ZERO
        for i, ui in enumerate(u):
            if ui:
                row = self.matrix[i]
                total += ui * sum((row[j] * vj for j, vj in enumerate(v) if vj), _ZERO)
        return total

    def leading_minors(self):
        if self._minors is None:
            self._minors = linalg.leading_principal_minors(self.matrix)
        return self._minors

    @property
    def is_positive_definite(self):
        return all(m > 0 for m in self.leading_minors())

    @property
    def is_singular(self):
        return self.leading_minors()[-1] == 0

    def inverse(self):
        if self._inverse is None:
            try:
                self._inverse = linalg.inverse(self.matrix)
            except linalg.SingularMatrixError:
                raise SingularMetricError("metric is singular") from None
        return self._inverse

    def __eq__(self, other):
        return isinstance(other, Metric) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Metric({[[str(x) for x in row] for row in self.matrix]})"


# ---------------------------------------------------------------------------
# almost complex structures
# ---------------------------------------------------------------------------

def is_almost_complex(j):
    n = j.dim
    return (j @ j) == -1 * Endo.identity(n)


def nijenhuis(L, j):
    """Nijenhuis tensor N(x,y)=[Jx,Jy]-[x,y]-J([Jx,y]+[x,Jy]) on basis pairs.

    Returns (values, integrable) where values maps (i,j) with i<j to the
    nonzero N(e_i,e_j) vectors; integrable iff values is empty.
    """
    if not is_almost_complex(j):
        raise NotAlmostComplexError("J^2 != -I")
    n = L.dim
    basis = [linalg.basis_vector(n, k) for k in range(1, n + 1)]
    values = {}
    for a, b in itertools.combinations(range(1, n + 1), 2):
        ja, jb = j.image_of_basis(a), j.image_of_basis(b)
        v = linalg.vec_sub(L.bracket(ja, jb), L.bracket_basis(a, b))
        mixed = linalg.vec_add(L.bracket(ja, basis[b - 1]), L.bracket(basis[a - 1], jb))
        v = linalg.vec_sub(v, j(mixed))
        if not linalg.is_zero_vec(v):
            values[(a, b)] = v
    return values, not values


# ---------------------------------------------------------------------------
# HermitianStructure
# ---------------------------------------------------------------------------

class HermitianStructure:
    """A Lie algebra with an integrable J and a compatible positive metric.

    Construction enforces: Jacobi closed, J^2=-I, g(J.,J.)=g(.,.),
    vanishing Nijenhuis tensor and positive definiteness.  ``unchecked=True``
    skips all of it for diagnostic use.
    """

    __slots__ = ("L", "J", "g", "_omega")

    def __init__(self, L, J, g, unchecked=False):
        if not (L.dim == J.dim == g.dim):
            raise ValueError("dimension mismatch between algebra, J and metric")
        self.L = L
        self.J = J
        self.g = g
        self._omega = None
        if unchecked:
            return
        if not is_almost_complex(J):
            raise NotAlmostComplexError("J^2 != -I")
        defects = jacobi_defect(L)
        if defects:
            raise HermitianError(f"underlying algebra violates Jacobi at {defects[0][0]}")
        n = L.dim
        for a in range(1, n + 1):
            for b in range(a, n + 1):
                ea = linalg.basis_vector(n, a)
                eb = linalg.basis_vector(n, b)
                if g.value(J(ea), J(eb)) != g.value(ea, eb):
                    raise IncompatiblePairError(f"g(Je{a},Je{b}) != g(e{a},e{b})")
        _, integrable = nijenhuis(L, J)
        if not integrable:
            raise NotIntegrableError("Nijenhuis tensor does not vanish")
        if not g.is_positive_definite:
            raise NotPositiveDefiniteError("metric is not positive-definite")

    @property
    def dim(self):
        return self.L.dim

    @property
    def omega(self):
        if self._omega is None:
            self._omega = fundamental_form(self)
        return self._omega

    def __repr__(self):
        return f"HermitianStructure(dim={self.dim})"


def fundamental_form(h):
    """omega(x,y) = g(Jx, y)."""
    n = h.dim
    coeffs = {}
    for a, b in itertools.combinations(range(1, n + 1), 2):
        v = h.g.value(h.J(linalg.basis_vector(n, a)), linalg.basis_vector(n, b))
        if v != 0:
            coeffs[(a, b)] = v
    return KForm(2, n, coeffs)


def metric_from(omega, j):
    """Recover g(x,y) = omega(x, Jy) from a 2-form and an almost complex J.

    Raises if the result is not symmetric (omega was not J-invariant);
    positive definiteness is *reported* on the returned Metric, not assumed.
    """
    if not is_almost_complex(j):
        raise NotAlmostComplexError("J^2 != -I")
    n = omega.dim
    basis = [linalg.basis_vector(n, k) for k in range(1, n + 1)]
    rows = tuple(
        tuple(omega(basis[a], j(basis[b])) for b in range(n)) for a in range(n)
    )
    if not linalg.is_symmetric(rows):
        raise IncompatiblePairError("omega(., J.) is not symmetric: omega is not J-invariant")
    return Metric(rows)


# ---------------------------------------------------------------------------
# Levi-Civita connection (left-invariant Koszul formula)
# ---------------------------------------------------------------------------

class Connection:
    """Connection coefficients: gamma[i-1][j-1] is the vector nabla_{e_i} e_j."""

    __slots__ = ("dim", "gamma")

    def __init__(self, gamma):
        self.gamma = tuple(tuple(tuple(Q(x) for x in v) for v in row) for row in gamma)
        self.dim = len(self.gamma)

    def nabla_basis(self, i, j):
        return self.gamma[i - 1][j - 1]

    def nabla(self, x, y):
        """Bilinear extension (left-invariant setting: tensorial in both slots)."""
        n = self.dim
        out = [_ZERO] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                c = x[i] * y[j]
                for k, v in enumerate(self.gamma[i][j]):
                    if v != 0:
                        out[k] += c * v
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, Connection) and self.gamma == other.gamma

    def __repr__(self):
        return f"Connection(dim={self.dim})"


def levi_civita(L, g):
    """Solve 2 g(nabla_x y, z) = g([x,y],z) - g([y,z],x) - g([x,z],y)."""
    n = L.dim
    ginv = g.inverse()
    half = Q(1, 2)
    # gb[i][j] = G.[e_{i+1}, e_{j+1}], so g([e_i,e_j], e_k) = gb[i-1][j-1][k-1]
    gb = [
        [linalg.mat_vec(g.matrix, L.bracket_basis(i, j)) for j in range(1, n + 1)]
        for i in range(1, n + 1)
    ]
    gamma = []
    for i in range(n):
        row = []
        for j in range(n):
            rhs = tuple(
                half * (gb[i][j][k] - gb[j][k][i] - gb[i][k][j]) for k in range(n)
            )
            row.append(linalg.mat_vec(ginv, rhs))
        gamma.append(tuple(row))
    return Connection(gamma)


def connection_defects(L, g, conn):
    """Torsion-freeness and metric-compatibility residuals (for checks)."""
    n = L.dim
    basis = [linalg.basis_vector(n, k) for k in range(1, n + 1)]
    defects = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        t = linalg.vec_sub(
            linalg.vec_sub(conn.nabla_basis(i, j), conn.nabla_basis(j, i)),
            L.bracket_basis(i, j),
        )
        if not linalg.is_zero_vec(t):
            defects.append(("torsion", (i, j), t))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(j, n + 1):
                r = g.value(conn.nabla_basis(i, j), basis[k - 1]) + g.value(
                    basis[j - 1], conn.nabla_basis(i, k)
                )
                if r != 0:
                    defects.append(("metric", (i, j, k), r))
    return defects


# ---------------------------------------------------------------------------
# codifferential, Lee form, classification
# ---------------------------------------------------------------------------

def codiff2(L, g, omega):
    """d*omega(X) = -sum_{i,j} g^{ij} (nabla_{e_i} omega)(e_j, X).

    Left-invariant forms have no directional-derivative term, so
    (nabla_X omega)(Y,Z) = -omega(nabla_X Y, Z) - omega(Y, nabla_X Z).
    The g^{ij}-weighted trace agrees with the orthonormal-basis formula and
    keeps the arithmetic rational.
    """
    n = L.dim
    conn = levi_civita(L, g)
    ginv = g.inverse()
    w = tuple(
        tuple(omega.coefficient(i, j) for j in range(1, n + 1)) for i in range(1, n + 1)
    )
    # a[i][j] = W.(nabla_{e_{i+1}} e_{j+1}): omega(nabla_ij, e_k) = -a[i][j][k-1]
    a = [[linalg.mat_vec(w, conn.gamma[i][j]) for j in range(n)] for i in range(n)]
    coeffs = {}
    for k in range(n):
        total = _ZERO
        for i in range(n):
            for j in range(n):
                gij = ginv[i][j]
                if gij == 0:
                    continue
                # (nabla_{e_i} omega)(e_j, e_k) = a[i][j][k] - a[i][k][j]
                total -= gij * (a[i][j][k] - a[i][k][j])
        if total != 0:
            coeffs[(k + 1,)] = total
    return KForm(1, n, coeffs)


def lee_form(h):
    """theta = J d*omega, implemented as theta(X) = -(d*omega)(J X)."""
    dstar = codiff2(h.L, h.g, h.omega)
    n = h.dim
    coeffs = {}
    for k in range(1, n + 1):
        v = -dstar(h.J(linalg.basis_vector(n, k)))
        if v != 0:
            coeffs[(k,)] = v
    return KForm(1, n, coeffs)


@dataclass(frozen=True)
class ClassFlags:
    kahler: bool
    balanced: bool
    lcb: bool
    lck: bool


def classify(h):
    """Kahler (d omega = 0), balanced (theta = 0), LCB (d theta = 0) and
    LCK (d omega = theta ^ omega with d theta = 0) flags, all exact."""
    omega = h.omega
    domega = ce_d(h.L, omega)
    theta = lee_form(h)
    dtheta = ce_d(h.L, theta)
    kahler = domega.is_zero
    balanced = theta.is_zero
    lcb = dtheta.is_zero
    lck = lcb and domega == wedge(theta, omega)
    return ClassFlags(kahler=kahler, balanced=balanced, lcb=lcb, lck=lck)
