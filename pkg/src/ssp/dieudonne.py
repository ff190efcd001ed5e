"""Dieudonné modules over truncated Witt rings.

A module is a free W_n(F_{p^s})-module of rank h with F acting as
(matrix A) o sigma on coordinates and V as (matrix B) o sigma^{-1},
an optional polarization Gram matrix E, and an optional action of
sqrt(alpha) from an imaginary quadratic order.  The axioms FV = VF = p,
the polarization compatibility e(Fx, y) = e(x, Vy)^sigma and the action
compatibilities are all checked at the truncation level.

Newton polygons come from the linear matrix of F^s via the p-adic
Newton polygon of its characteristic polynomial (Berkowitz, division
free), abscissae divided by s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .errors import FormulaInconsistencyError, InsufficientPrecisionError, ValidationError
from .gf import sqrt_nonresidue
from .witt import INF, WittRing, hensel_sqrt, witt_ring

DEFAULT_TRUNCATION_SLACK = 2  # polygon default n = 2*height + 2
MAX_TRUNCATION = 64


# ---------------------------------------------------------------------------
# polygons


@dataclass(frozen=True)
class NewtonPolygon:
    """Sorted (slope, multiplicity) pairs; multiplicities sum to the height."""

    slopes: tuple[tuple[Fraction, int], ...]

    def __post_init__(self):
        prev = None
        for lam, mult in self.slopes:
            if mult < 1:
                raise ValidationError("multiplicities must be positive")
            if prev is not None and lam <= prev:
                raise ValidationError("slopes must be strictly increasing after merging")
            prev = lam

    @staticmethod
    def from_pairs(pairs) -> "NewtonPolygon":
        merged: dict[Fraction, int] = {}
        for lam, mult in pairs:
            lam = Fraction(lam)
            merged[lam] = merged.get(lam, 0) + mult
        return NewtonPolygon(tuple(sorted(merged.items())))

    @property
    def height(self) -> int:
        return sum(m for _, m in self.slopes)

    @property
    def total_slope(self) -> Fraction:
        return sum((lam * m for lam, m in self.slopes), Fraction(0))


@dataclass(frozen=True)
class HodgePolygon:
    """Sorted (weight, multiplicity) pairs; PEL usage only has weights 0, 1."""

    weights: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = None
        for w, mult in self.weights:
            if mult < 0:
                raise ValidationError("multiplicities must be non-negative")
            if prev is not None and w <= prev:
                raise ValidationError("weights must be strictly increasing")
            prev = w

    @property
    def height(self) -> int:
        return sum(m for _, m in self.weights)

    @property
    def total_weight(self) -> int:
        return sum(w * m for w, m in self.weights)


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class DieudonneModule:
    ring: WittRing
    rank: int
    f_matrix: tuple[tuple, ...]
    v_matrix: tuple[tuple, ...]
    polarization: Optional[tuple[tuple, ...]] = None
    ok_action: Optional[tuple[tuple, ...]] = None
    alpha: Optional[int] = None

    def sigma_mat(self, M):
        return linalg.mat_map(self.ring.sigma, M)

    def sigma_inv_mat(self, M):
        return linalg.mat_map(self.ring.sigma_inv, M)

    def apply_f(self, vec):
        return linalg.mat_vec(self.f_matrix, tuple(self.ring.sigma(x) for x in vec))

    def apply_v(self, vec):
        return linalg.mat_vec(self.v_matrix, tuple(self.ring.sigma_inv(x) for x in vec))

    def pairing(self, x, y):
        if self.polarization is None:
            raise ValidationError("polarization required")
        w = linalg.mat_vec(self.polarization, y)
        acc = x[0] * w[0]
        for t in range(1, self.rank):
            acc = acc + x[t] * w[t]
        return acc

    def basis_vector(self, i: int):
        return tuple(
            self.ring.one() if j == i else self.ring.zero() for j in range(self.rank)
        )


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[tuple[str, bool, str], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def failures(self) -> list[tuple[str, str]]:
        return [(name, detail) for name, passed, detail in self.checks if not passed]


def _first_mismatch(A, B) -> str:
    for i, (ra, rb) in enumerate(zip(A, B)):
        for j, (a, b) in enumerate(zip(ra, rb)):
            if a != b:
                return f"first violation at coordinate ({i},{j})"
    return ""


def check_axioms(m: DieudonneModule) -> AxiomReport:
    """Verify the semilinear module axioms at the truncation level."""
    ring, h = m.ring, m.rank
    for name, M in (("F", m.f_matrix), ("V", m.v_matrix)):
        if len(M) != h or any(len(row) != h for row in M):
            raise ValidationError(f"{name} matrix is not {h} x {h}")
    if m.polarization is not None and (
        len(m.polarization) != h or any(len(r) != h for r in m.polarization)
    ):
        raise ValidationError("polarization Gram matrix has wrong dimensions")
    if m.ok_action is not None and (
        len(m.ok_action) != h or any(len(r) != h for r in m.ok_action)
    ):
        raise ValidationError("ok_action matrix has wrong dimensions")

    checks = []
    p_id = linalg.scalar_matrix(h, ring.el(ring.p), ring.zero())
    fv = linalg.mat_mul(m.f_matrix, m.sigma_mat(m.v_matrix))
    checks.append(("fv-equals-p", fv == p_id, _first_mismatch(fv, p_id)))
    vf = linalg.mat_mul(m.v_matrix, m.sigma_inv_mat(m.f_matrix))
    checks.append(("vf-equals-p", vf == p_id, _first_mismatch(vf, p_id)))

    if m.polarization is not None:
        E = m.polarization
        alt = linalg.transpose(E) == linalg.mat_neg(E)
        checks.append(
            ("polarization-alternating", alt, "" if alt else _first_mismatch(
                linalg.transpose(E), linalg.mat_neg(E)))
        )
        d = linalg.det(E, ring.one(), ring.zero())
        unimod = d.val() == 0
        checks.append(("polarization-unimodular", unimod, f"det valuation {d.val()}"))
        lhs = linalg.mat_mul(linalg.transpose(m.f_matrix), E)
        rhs = m.sigma_mat(linalg.mat_mul(E, m.v_matrix))
        checks.append(("polarization-compatible", lhs == rhs, _first_mismatch(lhs, rhs)))

    if m.ok_action is not None:
        J = m.ok_action
        jj = linalg.mat_mul(J, J)
        if m.alpha is not None:
            target = linalg.scalar_matrix(h, ring.el(m.alpha), ring.zero())
            checks.append(("action-squares-to-alpha", jj == target, _first_mismatch(jj, target)))
        else:
            scalar = jj[0][0]
            target = linalg.scalar_matrix(h, scalar, ring.zero())
            ok = jj == target and ring.sigma(scalar) == scalar
            checks.append(("action-squares-to-scalar", ok, _first_mismatch(jj, target)))
        lhs = linalg.mat_mul(J, m.f_matrix)
        rhs = linalg.mat_mul(m.f_matrix, m.sigma_mat(J))
        checks.append(("action-commutes-with-f", lhs == rhs, _first_mismatch(lhs, rhs)))
        lhs = linalg.mat_mul(J, m.v_matrix)
        rhs = linalg.mat_mul(m.v_matrix, m.sigma_inv_mat(J))
        checks.append(("action-commutes-with-v", lhs == rhs, _first_mismatch(lhs, rhs)))
        if m.polarization is not None:
            lhs = linalg.mat_mul(linalg.transpose(J), m.polarization)
            rhs = linalg.mat_neg(linalg.mat_mul(m.polarization, J))
            checks.append(("action-skew-adjoint", lhs == rhs, _first_mismatch(lhs, rhs)))

    return AxiomReport(tuple(checks))


# ---------------------------------------------------------------------------
# explicit superspecial models


def build_a_half(ring: WittRing) -> DieudonneModule:
    """The rank-2 slope-1/2 module over W_n(F_{p^2}):
    F = [[0,1],[-p,0]] o sigma, V = [[0,-1],[p,0]] o sigma^{-1},
    polarization Gram [[0,1],[-1,0]].  Satisfies F + V = 0.
    """
    if ring.s != 2:
        raise ValidationError("the slope-1/2 model lives over W_n(F_{p^2})")
    one, zero, p = ring.one(), ring.zero(), ring.el(ring.p)
    F = ((zero, one), (-p, zero))
    V = ((zero, -one), (p, zero))
    E = ((zero, one), (-one, zero))
    return DieudonneModule(ring=ring, rank=2, f_matrix=F, v_matrix=V, polarization=E)


def _block_diag(blocks, zero):
    n = sum(len(b) for b in blocks)
    out = [[zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return linalg.freeze(out)


def _mod_p_matrix(m: DieudonneModule, M):
    return linalg.mat_map(m.ring.reduce, M)


def _quotient_data(m: DieudonneModule):
    """Echelon data for M/VM over the residue field.

    Returns (echelon {pivot_row: column}, quotient_rows sorted)."""
    vbar = _mod_p_matrix(m, m.v_matrix)
    cols = list(zip(*vbar))
    ech = linalg.column_echelon(cols)
    quot = [i for i in range(m.rank) if i not in ech]
    return ech, quot


def induced_quotient_action(m: DieudonneModule):
    """Matrix of the ok_action on M/VM, in the echelon quotient basis."""
    if m.ok_action is None:
        raise ValidationError("module carries no imaginary-quadratic action")
    ech, quot = _quotient_data(m)
    jbar = _mod_p_matrix(m, m.ok_action)
    cols = []
    for i in quot:
        col = tuple(jbar[r][i] for r in range(m.rank))
        red = linalg.reduce_mod_columns(col, ech)
        cols.append(tuple(red[r] for r in quot))
    return linalg.freeze(zip(*cols))


def build_superspecial_unitary(p: int, n: int, alpha: int, r: int, s: int) -> DieudonneModule:
    """g = r + s copies of the slope-1/2 module with product polarization
    and sqrt(alpha) acting blockwise by diag(u, sigma u) / diag(sigma u, u).

    The block orientation is not hard-coded: both assignments are tried
    and the one whose induced action on M/VM is diag(-sqrt(alpha) I_r,
    +sqrt(alpha) I_s) mod p is kept.
    """
    g = r + s
    if r < 0 or s < 0 or g < 2 or g % 2 != 0:
        raise ValidationError("r, s must be non-negative with r + s even and >= 2")
    ring = witt_ring(p, 2, n)
    base = build_a_half(ring)
    zero = ring.zero()
    F = _block_diag([base.f_matrix] * g, zero)
    V = _block_diag([base.v_matrix] * g, zero)
    E = _block_diag([base.polarization] * g, zero)
    u = hensel_sqrt(ring, alpha)
    su = ring.sigma(u)
    ubar = ring.reduce(u)

    def assemble(first, second):
        blocks = [((first, zero), (zero, second))] * r + [((second, zero), (zero, first))] * s
        return _block_diag(blocks, zero)

    target = linalg.scalar_matrix(g, ubar, ubar.ctx.zero())
    target = tuple(
        tuple((-x if i < r else x) if i == j else x for j, x in enumerate(row))
        for i, row in enumerate(target)
    )
    for J in (assemble(u, su), assemble(su, u)):
        m = DieudonneModule(
            ring=ring, rank=2 * g, f_matrix=F, v_matrix=V,
            polarization=E, ok_action=J, alpha=alpha,
        )
        if induced_quotient_action(m) == target:
            return m
    raise FormulaInconsistencyError(
        "neither block orientation induces diag(-sqrt(a) I_r, sqrt(a) I_s) on M/VM"
    )


def action_eigen_indices(m: DieudonneModule) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Indices of basis vectors on which ok_action acts by +u / -u.

    Only meaningful when the action matrix is diagonal in the standard
    basis (true for the built models); raises otherwise."""
    if m.ok_action is None or m.alpha is None:
        raise ValidationError("module carries no imaginary-quadratic action")
    u = hensel_sqrt(m.ring, m.alpha)
    plus, minus = [], []
    for i in range(m.rank):
        col = tuple(m.ok_action[r][i] for r in range(m.rank))
        if col == tuple(u if r == i else m.ring.zero() for r in range(m.rank)):
            plus.append(i)
        elif col == tuple(-u if r == i else m.ring.zero() for r in range(m.rank)):
            minus.append(i)
        else:
            raise ValidationError("ok_action is not diagonal with +/- sqrt(alpha) entries")
    return tuple(minus), tuple(plus)


def graded_quotient_dims(m: DieudonneModule) -> tuple[int, int]:
    """(dim M_-/V M_+, dim M_+/V M_-) over the residue field."""
    minus, plus = action_eigen_indices(m)
    vbar = _mod_p_matrix(m, m.v_matrix)

    def qdim(rows, cols):
        sub = [[vbar[i][j] for j in cols] for i in rows]
        return len(rows) - linalg.rank(sub)

    return qdim(minus, plus), qdim(plus, minus)


# ---------------------------------------------------------------------------
# Newton / Hodge polygons


def _linear_frobenius_matrix(m: DieudonneModule):
    """Matrix of F^s, which is W-linear: A sigma(A) ... sigma^{s-1}(A)."""
    A = m.f_matrix
    out = A
    twisted = A
    for _ in range(1, m.ring.s):
        twisted = m.sigma_mat(twisted)
        out = linalg.mat_mul(out, twisted)
    return out


def _lower_hull(points):
    """Lower convex hull of integer points sorted by abscissa."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            x3, y3 = pt
            if (x2 - x1) * (y3 - y1) <= (y2 - y1) * (x3 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon(m: DieudonneModule) -> NewtonPolygon:
    """Slopes of the module, each in [0,1] when pM is contained in FM.

    Raises InsufficientPrecisionError when a needed coefficient
    valuation is censored by the truncation level.
    """
    ring, h = m.ring, m.rank
    B = _linear_frobenius_matrix(m)
    coeffs = linalg.charpoly(B, ring.one(), ring.zero())  # highest degree first
    # point (i, v(c_i)) where c_i multiplies T^i
    vals = [c.val() for c in coeffs]
    by_degree = list(reversed(vals))  # index i = degree
    if by_degree[0] == INF:
        raise InsufficientPrecisionError(
            "constant coefficient of the characteristic polynomial is censored; "
            "raise the truncation level"
        )
    points = [(i, v) for i, v in enumerate(by_degree) if v != INF]
    hull = _lower_hull(points)
    pairs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        root_val = Fraction(y1 - y2, x2 - x1)
        pairs.append((root_val / ring.s, x2 - x1))
    np = NewtonPolygon.from_pairs(pairs)
    assert np.height == h
    return np


def hodge_polygon(m: DieudonneModule) -> HodgePolygon:
    """Weights 0 and 1 with multiplicities (h - d, d), d = dim M/FM."""
    fbar = _mod_p_matrix(m, m.f_matrix)
    d = m.rank - linalg.rank(fbar)
    weights = []
    if m.rank - d > 0:
        weights.append((0, m.rank - d))
    if d > 0:
        weights.append((1, d))
    return HodgePolygon(tuple(weights))


def is_isoclinic(np: NewtonPolygon) -> bool:
    return len(np.slopes) == 1


def is_basic_gl(np: NewtonPolygon) -> bool:
    """For GL, basic coincides with isoclinic."""
    return is_isoclinic(np)


@dataclass(frozen=True)
class EndpointReport:
    t_newton: Fraction
    t_hodge: Fraction
    endpoints_equal: bool
    newton_at_or_above: bool


def endpoint_admissibility(np: NewtonPolygon, hp: HodgePolygon) -> EndpointReport:
    """Compare rightmost endpoints: sum slope*mult vs sum weight*mult."""
    if np.height != hp.height:
        raise ValidationError(
            f"polygon heights differ: {np.height} vs {hp.height}"
        )
    t_n = np.total_slope
    t_h = Fraction(hp.total_weight)
    return EndpointReport(
        t_newton=t_n,
        t_hodge=t_h,
        endpoints_equal=t_n == t_h,
        newton_at_or_above=t_n >= t_h,
    )


# ---------------------------------------------------------------------------
# determinant condition


def _bivar_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            v = out.get(key)
            out[key] = c1 * c2 if v is None else v + c1 * c2
    return {k: v for k, v in out.items() if not v.is_zero()}


def determinant_condition(r: int, s: int, alpha: int, matrix) -> bool:
    """True iff det(X1*I + X2*L) = (X1 - u X2)^r (X1 + u X2)^s exactly,
    as fully expanded polynomials over F_{p^2}, with u = sqrt(alpha).

    L must be square of size r + s with entries in one F_{p^2} context.
    """
    g = r + s
    if len(matrix) != g or any(len(row) != g for row in matrix):
        raise ValidationError(f"matrix must be {g} x {g}")
    ctx = matrix[0][0].ctx
    u = sqrt_nonresidue(ctx, alpha)
    one, zero = ctx.one(), ctx.zero()
    # det(X1 I + X2 L) = sum_k E_k(L) X1^{g-k} X2^k with E_k read off the
    # characteristic polynomial (division-free), then compared fully.
    coeffs = linalg.charpoly(matrix, one, zero)  # c[k] = (-1)^k E_k
    lhs = {}
    for k, c in enumerate(coeffs):
        ek = c if k % 2 == 0 else -c
        if not ek.is_zero():
            lhs[(g - k, k)] = ek
    rhs = {(0, 0): one}
    for _ in range(r):
        rhs = _bivar_mul(rhs, {(1, 0): one, (0, 1): -u})
    for _ in range(s):
        rhs = _bivar_mul(rhs, {(1, 0): one, (0, 1): u})
    return lhs == rhs


def canonical_lie_action(ctx, alpha: int, r: int, s: int):
    """diag(-sqrt(alpha) I_r, sqrt(alpha) I_s) over F_{p^2}."""
    u = sqrt_nonresidue(ctx, alpha)
    g = r + s
    return linalg.freeze(
        [[(-u if i < r else u) if i == j else ctx.zero() for j in range(g)] for i in range(g)]
    )


# ---------------------------------------------------------------------------
# JSON interchange (CLI surface)


def module_to_dict(m: DieudonneModule) -> dict:
    def enc(M):
        return [[list(x.coeffs) for x in row] for row in M]

    out = {
        "p": m.ring.p,
        "s": m.ring.s,
        "n": m.ring.n,
        "rank": m.rank,
        "F": enc(m.f_matrix),
        "V": enc(m.v_matrix),
    }
    if m.polarization is not None:
        out["E"] = enc(m.polarization)
    if m.ok_action is not None:
        out["action"] = enc(m.ok_action)
    if m.alpha is not None:
        out["alpha"] = m.alpha
    return out


def module_from_dict(data: dict, n_override: Optional[int] = None) -> DieudonneModule:
    try:
        p, s, n, rank = int(data["p"]), int(data["s"]), int(data["n"]), int(data["rank"])
    except KeyError as e:
        raise ValidationError(f"module spec missing field {e}") from None
    if n_override is not None:
        n = n_override
    ring = witt_ring(p, s, n)

    def dec(M, name):
        if len(M) != rank or any(len(row) != rank for row in M):
            raise ValidationError(f"{name} must be {rank} x {rank}")
        return linalg.freeze(
            [[ring.el(tuple(x) if isinstance(x, list) else int(x)) for x in row] for row in M]
        )

    F = dec(data["F"], "F")
    V = dec(data["V"], "V")
    E = dec(data["E"], "E") if "E" in data else None
    J = dec(data["action"], "action") if "action" in data else None
    alpha = int(data["alpha"]) if "alpha" in data else None
    return DieudonneModule(
        ring=ring, rank=rank, f_matrix=F, v_matrix=V,
        polarization=E, ok_action=J, alpha=alpha,
    )


def newton_polygon_with_retry(data: dict) -> tuple[NewtonPolygon, int]:
    """Newton polygon of a JSON module spec, doubling the truncation on
    censored valuations (default start 2*height + 2, cap 64)."""
    rank = int(data["rank"])
    n = int(data.get("n") or 2 * rank + DEFAULT_TRUNCATION_SLACK)
    while True:
        try:
            return newton_polygon(module_from_dict(data, n_override=n)), n
        except InsufficientPrecisionError:
            if n >= MAX_TRUNCATION:
                raise
            n = min(2 * n, MAX_TRUNCATION)
