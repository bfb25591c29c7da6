"""Exact-rational Lie algebra arithmetic, alternating forms in degree <= 3
with the Chevalley-Eilenberg differential, and the structure-equation
(Salamon-style) parser/printer.

Conventions, fixed once and used everywhere:

* ``de^k = sum_{i<j} s^k_{ij} e^{ij}`` encodes ``c^k_{ij} = -s^k_{ij}``, so
  the string ``(0,-12,-13,0)`` is the algebra with [e1,e2]=e2, [e1,e3]=e3;
* ``d alpha(x,y) = -alpha([x,y])`` in degree 1 and
  ``d w(x,y,z) = -w([x,y],z) + w([x,z],y) - w([y,z],x)`` in degree 2.

Basis indices are 1-based throughout the public API; coefficient vectors are
tuples of Fractions with entry ``k-1`` belonging to ``e_k``.  All values are
immutable and all operations are pure functions.
"""

from fractions import Fraction
import itertools

from . import linalg
from .expressions import (
    ExpressionError,
    parse_two_form_terms,
    split_signed_terms,
    _strip_two_form_monomial,
    evaluate,
    normalize,
)

Q = Fraction
_ZERO = Q(0)
_ONE = Q(1)


class DegreeError(ValueError):
    """A form degree outside the supported range {1,2,3}."""


# ---------------------------------------------------------------------------
# LieAlgebra
# ---------------------------------------------------------------------------

class LieAlgebra:
    """Finite-dimensional algebra given by structure constants over Q.

    Antisymmetry is built into the storage (constants kept for i<j only);
    the Jacobi identity is *not* assumed here — run :func:`jacobi_defect`.
    ``params`` optionally records the parameter binding the algebra was
    instantiated from (purely informational).
    """

    __slots__ = ("dim", "_c", "params")

    def __init__(self, dim, brackets, params=None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        table = {}
        for (i, j), comps in brackets.items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ValueError(f"bracket index ({i},{j}) out of range 1..{dim}")
            if i == j:
                if any(Q(v) != 0 for v in comps.values()):
                    raise ValueError(f"nonzero bracket [e{i},e{i}]")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            slot = table.setdefault((i, j), {})
            for k, v in comps.items():
                if not 1 <= k <= dim:
                    raise ValueError(f"bracket component e{k} out of range 1..{dim}")
                slot[k] = slot.get(k, _ZERO) + sign * Q(v)
        self._c = {
            key: {k: v for k, v in sorted(slot.items()) if v != 0}
            for key, slot in sorted(table.items())
        }
        self._c = {key: slot for key, slot in self._c.items() if slot}
        self.params = dict(params) if params else {}

    def structure_constant(self, i, j, k):
        if i == j:
            return _ZERO
        if i > j:
            return -self.structure_constant(j, i, k)
        return self._c.get((i, j), {}).get(k, _ZERO)

    def bracket_basis(self, i, j):
        """[e_i, e_j] as a coefficient vector."""
        out = [_ZERO] * self.dim
        if i == j:
            return tuple(out)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for k, v in self._c.get((i, j), {}).items():
            out[k - 1] = sign * v
        return tuple(out)

    def bracket(self, x, y):
        """Bilinear extension of the bracket to coefficient vectors."""
        out = [_ZERO] * self.dim
        for i in range(1, self.dim + 1):
            xi = x[i - 1]
            if xi == 0:
                continue
            for j in range(1, self.dim + 1):
                yj = y[j - 1]
                if yj == 0 or i == j:
                    continue
                for k, v in (self._c.get((i, j), {}) if i < j else self._c.get((j, i), {})).items():
                    out[k - 1] += xi * yj * (v if i < j else -v)
        return tuple(out)

    def nonzero_brackets(self):
        """Sorted ((i,j), {k: c}) pairs with i<j and nonzero values only."""
        return [(key, dict(slot)) for key, slot in self._c.items()]

    @property
    def is_abelian(self):
        return not self._c

    def __eq__(self, other):
        return (
            isinstance(other, LieAlgebra)
            and self.dim == other.dim
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.dim, tuple((k, tuple(sorted(v.items()))) for k, v in self._c.items())))

    def __repr__(self):
        if self.dim <= 9:
            return f"LieAlgebra({print_salamon(self)!r})"
        return f"LieAlgebra(dim={self.dim})"


def abelian(dim):
    return LieAlgebra(dim, {})


def direct_sum(a, b):
    """Block direct sum; the second factor's indices are shifted by a.dim."""
    brackets = {key: dict(slot) for key, slot in a.nonzero_brackets()}
    m = a.dim
    for (i, j), slot in b.nonzero_brackets():
        brackets[(i + m, j + m)] = {k + m: v for k, v in slot.items()}
    return LieAlgebra(a.dim + b.dim, brackets)


# ---------------------------------------------------------------------------
# Salamon-style structure equations
# ---------------------------------------------------------------------------

def parse_salamon(text, binding=None, params=None):
    """Parse ``(expr_1, ..., expr_n)`` structure equations into a LieAlgebra.

    Slot k gives ``de^k`` as a sum of ``coeff*ij`` monomials; the bracket
    constants are ``c^k_{ij} = -s^k_{ij}``.  All parameters occurring in the
    text must be bound.  The Jacobi identity is not checked here.
    """
    binding = binding if binding is not None else {}
    raw = normalize(text).strip()
    if not (raw.startswith("(") and raw.endswith(")")):
        raise ExpressionError("structure equations must be parenthesised: (...)")
    inner = raw[1:-1]
    slots = _split_top_level_commas(inner)
    dim = len(slots)
    if dim < 1:
        raise ExpressionError("empty structure-equation list")
    if dim > 9:
        raise ExpressionError("juxtaposed-digit notation supports at most 9 dimensions")
    brackets = {}
    for k, slot_text in enumerate(slots, start=1):
        try:
            terms = parse_two_form_terms(slot_text, dim, binding)
        except ExpressionError as exc:
            raise ExpressionError(f"slot {k}: {exc}") from None
        for (i, j), s in terms.items():
            brackets.setdefault((i, j), {})[k] = brackets.get((i, j), {}).get(k, _ZERO) - s
    return LieAlgebra(dim, brackets, params=params if params is not None else binding)


def _split_top_level_commas(text):
    parts = []
    depth = 0
    buf = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf).strip())
    return parts


def qstr(x):
    """Canonical text for a rational coefficient."""
    return str(Q(x))


def print_salamon(L):
    """Canonical structure-equation text; inverse of :func:`parse_salamon`."""
    if L.dim > 9:
        raise ValueError("juxtaposed-digit notation supports at most 9 dimensions")
    # collect s^k_{ij} = -c^k_{ij} per slot
    slots = []
    for k in range(1, L.dim + 1):
        terms = []
        for (i, j), comps in L.nonzero_brackets():
            c = comps.get(k)
            if not c:
                continue
            s = -c
            mono = f"{i}{j}"
            if s == 1:
                term = mono
            elif s == -1:
                term = f"-{mono}"
            else:
                term = f"{qstr(s)}*{mono}"
            terms.append(term)
        if not terms:
            slots.append("0")
        else:
            out = terms[0]
            for t in terms[1:]:
                out += t if t.startswith("-") else "+" + t
            slots.append(out)
    return "(" + ",".join(slots) + ")"


# ---------------------------------------------------------------------------
# Jacobi identity
# ---------------------------------------------------------------------------

def jacobi_defect(L):
    """Nonzero cyclic sums [[ei,ej],ek]+[[ej,ek],ei]+[[ek,ei],ej].

    Returns [((i,j,k), defect vector), ...]; empty iff L is a Lie algebra.
    """
    defects = []
    n = L.dim
    basis = [linalg.basis_vector(n, k) for k in range(1, n + 1)]
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        v = linalg.vec_add(
            L.bracket(L.bracket_basis(i, j), basis[k - 1]),
            linalg.vec_add(
                L.bracket(L.bracket_basis(j, k), basis[i - 1]),
                L.bracket(L.bracket_basis(k, i), basis[j - 1]),
            ),
        )
        if not linalg.is_zero_vec(v):
            defects.append(((i, j, k), v))
    return defects


# ---------------------------------------------------------------------------
# KForm
# ---------------------------------------------------------------------------

def _sort_with_sign(idx):
    """Sort an index tuple, tracking the permutation sign; repeats give sign 0."""
    idx = list(idx)
    sign = 1
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    if any(idx[a] == idx[a + 1] for a in range(len(idx) - 1)):
        return tuple(idx), 0
    return tuple(idx), sign


class KForm:
    """Alternating k-linear form (k in {1,2,3}) stored on increasing index
    tuples with Fraction coefficients."""

    __slots__ = ("degree", "dim", "coeffs")

    def __init__(self, degree, dim, coeffs=None):
        if degree not in (1, 2, 3):
            raise DegreeError(f"unsupported form degree {degree}")
        self.degree = degree
        self.dim = dim
        table = {}
        for idx, v in (coeffs or {}).items():
            idx = tuple(idx) if isinstance(idx, (tuple, list)) else (idx,)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} does not match degree {degree}")
            if any(not 1 <= a <= dim for a in idx):
                raise ValueError(f"index tuple {idx} out of range 1..{dim}")
            key, sign = _sort_with_sign(idx)
            v = Q(v)
            if sign == 0:
                if v != 0:
                    raise ValueError(f"repeated index tuple {idx} with nonzero coefficient")
                continue
            table[key] = table.get(key, _ZERO) + sign * v
        self.coeffs = {k: v for k, v in sorted(table.items()) if v != 0}

    @classmethod
    def zero(cls, degree, dim):
        return cls(degree, dim, {})

    def coefficient(self, *idx):
        key, sign = _sort_with_sign(idx)
        if sign == 0:
            return _ZERO
        return sign * self.coeffs.get(key, _ZERO)

    def __call__(self, *vectors):
        """Multilinear alternating evaluation on coefficient vectors."""
        if len(vectors) != self.degree:
            raise ValueError(f"expected {self.degree} vectors")
        total = _ZERO
        if self.degree == 1:
            (x,) = vectors
            for (i,), c in self.coeffs.items():
                if x[i - 1]:
                    total += c * x[i - 1]
            return total
        if self.degree == 2:
            x, y = vectors
            for (i, j), c in self.coeffs.items():
                d = x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1]
                if d:
                    total += c * d
            return total
        x, y, z = vectors
        for (i, j, k), c in self.coeffs.items():
            d = (
                x[i - 1] * (y[j - 1] * z[k - 1] - y[k - 1] * z[j - 1])
                - x[j - 1] * (y[i - 1] * z[k - 1] - y[k - 1] * z[i - 1])
                + x[k - 1] * (y[i - 1] * z[j - 1] - y[j - 1] * z[i - 1])
            )
            if d:
                total += c * d
        return total

    def _binop(self, other, op):
        if not isinstance(other, KForm) or other.degree != self.degree or other.dim != self.dim:
            raise ValueError("form degree/dimension mismatch")
        keys = set(self.coeffs) | set(other.coeffs)
        return KForm(
            self.degree,
            self.dim,
            {k: op(self.coeffs.get(k, _ZERO), other.coeffs.get(k, _ZERO)) for k in keys},
        )

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __neg__(self):
        return KForm(self.degree, self.dim, {k: -v for k, v in self.coeffs.items()})

    def __rmul__(self, scalar):
        c = Q(scalar)
        return KForm(self.degree, self.dim, {k: c * v for k, v in self.coeffs.items()})

    @property
    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, KForm)
            and self.degree == other.degree
            and self.dim == other.dim
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.degree, self.dim, tuple(self.coeffs.items())))

    def __repr__(self):
        return f"KForm({form_text(self)!r})"


def _permutation_sign(perm):
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return sign


def basis_one_form(dim, k):
    return KForm(1, dim, {(k,): _ONE})


def form_text(f):
    """Human-readable text like ``-2 e3`` or ``e12+3*e36``; '0' when zero."""
    if f.is_zero:
        return "0"
    terms = []
    for idx, c in f.coeffs.items():
        mono = "e" + "".join(str(a) for a in idx)
        if c == 1:
            term = mono
        elif c == -1:
            term = f"-{mono}"
        else:
            term = f"{qstr(c)}*{mono}"
        terms.append(term)
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def parse_two_form(text, dim, binding=None):
    """2-form expression (Salamon monomial style) -> KForm of degree 2."""
    return KForm(2, dim, parse_two_form_terms(text, dim, binding))


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg differential and wedge
# ---------------------------------------------------------------------------

def ce_d(L, f):
    """Chevalley-Eilenberg differential in degree 1 or 2.

    d^2 = 0 exactly whenever jacobi_defect(L) is empty.
    """
    if f.dim != L.dim:
        raise ValueError("form/algebra dimension mismatch")
    n = L.dim
    if f.degree == 1:
        coeffs = {}
        for i, j in itertools.combinations(range(1, n + 1), 2):
            v = -f(L.bracket_basis(i, j))
            if v != 0:
                coeffs[(i, j)] = v
        return KForm(2, n, coeffs)
    if f.degree == 2:
        basis = [linalg.basis_vector(n, k) for k in range(1, n + 1)]
        coeffs = {}
        for i, j, k in itertools.combinations(range(1, n + 1), 3):
            v = (
                -f(L.bracket_basis(i, j), basis[k - 1])
                + f(L.bracket_basis(i, k), basis[j - 1])
                - f(L.bracket_basis(j, k), basis[i - 1])
            )
            if v != 0:
                coeffs[(i, j, k)] = v
        return KForm(3, n, coeffs)
    raise DegreeError(f"ce_d supports degrees 1 and 2, got {f.degree}")


def wedge(a, b):
    """Wedge of a 1-form with a 2-form:
    (a^b)(x,y,z) = a(x)b(y,z) - a(y)b(x,z) + a(z)b(x,y)."""
    if a.degree != 1 or b.degree != 2:
        raise DegreeError("wedge expects a 1-form and a 2-form")
    if a.dim != b.dim:
        raise ValueError("form dimension mismatch")
    n = a.dim
    coeffs = {}
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        v = (
            a.coefficient(i) * b.coefficient(j, k)
            - a.coefficient(j) * b.coefficient(i, k)
            + a.coefficient(k) * b.coefficient(i, j)
        )
        if v != 0:
            coeffs[(i, j, k)] = v
    return KForm(3, n, coeffs)


# ---------------------------------------------------------------------------
# Endomorphisms
# ---------------------------------------------------------------------------

class Endo:
    """Square matrix over Q; column j is the image of e_j in basis coordinates."""

    __slots__ = ("dim", "m")

    def __init__(self, rows):
        rows = tuple(tuple(Q(x) for x in row) for row in rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("endomorphism matrix must be square")
        self.dim = n
        self.m = rows

    @classmethod
    def from_images(cls, images):
        """Build from the list of basis-vector images (one vector per e_j)."""
        n = len(images)
        return cls(tuple(tuple(images[j][i] for j in range(n)) for i in range(n)))

    @classmethod
    def identity(cls, n):
        return cls(linalg.identity(n))

    @classmethod
    def zero(cls, n):
        return cls(linalg.zeros(n, n))

    def image_of_basis(self, j):
        return tuple(self.m[i][j - 1] for i in range(self.dim))

    def __call__(self, v):
        return linalg.mat_vec(self.m, v)

    def __matmul__(self, other):
        return Endo(linalg.mat_mul(self.m, other.m))

    def __add__(self, other):
        return Endo(linalg.mat_add(self.m, other.m))

    def __sub__(self, other):
        return Endo(linalg.mat_sub(self.m, other.m))

    def __neg__(self):
        return Endo(linalg.mat_neg(self.m))

    def __rmul__(self, scalar):
        return Endo(linalg.mat_scale(Q(scalar), self.m))

    def trace(self):
        return sum((self.m[i][i] for i in range(self.dim)), _ZERO)

    @property
    def is_zero(self):
        return all(x == 0 for row in self.m for x in row)

    def __eq__(self, other):
        return isinstance(other, Endo) and self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __repr__(self):
        return f"Endo({[[str(x) for x in row] for row in self.m]})"


def commutator(a, b):
    return a @ b - b @ a


# ---------------------------------------------------------------------------
# change of basis
# ---------------------------------------------------------------------------

def change_basis(L, p):
    """Structure constants in the new basis f_j = sum_i p[i][j] e_i.

    ``p`` (columns = new basis vectors in old coordinates) must be invertible.
    """
    n = L.dim
    pinv = linalg.inverse(p)
    cols = [tuple(p[i][j] for i in range(n)) for j in range(n)]
    brackets = {}
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            w = L.bracket(cols[a - 1], cols[b - 1])
            comps = linalg.mat_vec(pinv, w)
            slot = {k: comps[k - 1] for k in range(1, n + 1) if comps[k - 1] != 0}
            if slot:
                brackets[(a, b)] = slot
    return LieAlgebra(n, brackets)


def pullback_form(f, p):
    """(p*f)(v1,..,vk) = f(p v1, .., p vk) for a basis change matrix p."""
    n = f.dim
    cols = [tuple(p[i][j] for i in range(n)) for j in range(n)]
    coeffs = {}
    for idx in itertools.combinations(range(1, n + 1), f.degree):
        v = f(*[cols[a - 1] for a in idx])
        if v != 0:
            coeffs[idx] = v
    return KForm(f.degree, n, coeffs)
