"""The mod-p Hermitian quotient M/VM of a polarized Dieudonné module.

When F + V = 0, the polarization induces the pairing
<x_bar, y_bar> = e(x, F y) mod p on M/VM.  It is linear in the first
slot, sigma-semilinear in the second, sigma-alternating
(<x,y> = <y,x>^sigma), perfect, and skew-Hermitian for the imaginary
quadratic action.  Its automorphism group (block-diagonal for the
+/- sqrt(alpha) grading, similitude factor in F_p^x) is determined
here by exhaustive enumeration.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Optional

from . import linalg
from .dieudonne import DieudonneModule, _mod_p_matrix, _quotient_data, check_axioms
from .errors import BudgetExceededError, ValidationError
from .ftables import FieldTable, field_table
from .gf import FieldCtx, FqElem

DEFAULT_ENUM_BUDGET = 10**8


def enum_budget(budget: Optional[int] = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("SSP_MAX_ENUM")
    return int(env) if env else DEFAULT_ENUM_BUDGET


def _conj_mat(M):
    return linalg.mat_map(lambda x: x.frobenius(), M)


@dataclass(frozen=True)
class HermitianQuotient:
    """A sigma-alternating perfect pairing on F_{p^2}^dim.

    gram[i][j] = <e_i, e_j>; the pairing of vectors is
    x^T . gram . sigma(y).  When the space is graded, the first
    grading[0] basis vectors span the -sqrt(alpha) eigenspace and the
    rest the +sqrt(alpha) eigenspace, and gram is block diagonal.
    """

    ctx: FieldCtx
    dim: int
    gram: tuple[tuple[FqElem, ...], ...]
    grading: Optional[tuple[int, int]] = None
    sqrt_alpha: Optional[FqElem] = None

    def __post_init__(self):
        if len(self.gram) != self.dim or any(len(r) != self.dim for r in self.gram):
            raise ValidationError("Gram matrix has wrong dimensions")
        if self.gram != linalg.transpose(_conj_mat(self.gram)):
            raise ValidationError("pairing is not sigma-alternating")
        if not linalg.is_invertible(self.gram):
            raise ValidationError("degenerate pairing (polarization bug)")
        if self.grading is not None:
            r, s = self.grading
            if r + s != self.dim or r < 0 or s < 0:
                raise ValidationError("grading does not match the dimension")
            for i in range(r):
                for j in range(r, self.dim):
                    if not (self.gram[i][j].is_zero() and self.gram[j][i].is_zero()):
                        raise ValidationError("Gram is not block diagonal for the grading")

    def pairing(self, x, y) -> FqElem:
        w = linalg.mat_vec(self.gram, tuple(c.frobenius() for c in y))
        acc = x[0] * w[0]
        for t in range(1, self.dim):
            acc = acc + x[t] * w[t]
        return acc

    def blocks(self):
        r, s = self.grading if self.grading is not None else (self.dim, 0)
        minus = tuple(tuple(self.gram[i][j] for j in range(r)) for i in range(r))
        plus = tuple(tuple(self.gram[i][j] for j in range(r, self.dim)) for i in range(r, self.dim))
        return minus, plus


def reduce_pairing(m: DieudonneModule) -> HermitianQuotient:
    """The induced pairing on M/VM for a module with F = -V.

    Verifies perfectness, the sigma-alternating symmetry, and (when an
    imaginary quadratic action is present) skew-Hermitian compatibility
    before returning; the quotient basis is reordered so the grading is
    (minus block, plus block).
    """
    if m.polarization is None:
        raise ValidationError("polarization required")
    rep = check_axioms(m)
    if not rep.ok:
        raise ValidationError(f"module fails axioms: {rep.failures()}")
    if m.ring.s not in (1, 2):
        raise ValidationError("F = -V only makes sense when sigma is an involution")
    if m.f_matrix != linalg.mat_neg(m.v_matrix):
        raise ValidationError("F + V != 0 on this module")

    ctx = m.ring.gf_ctx
    ech, quot = _quotient_data(m)
    pairing_full = _mod_p_matrix(m, linalg.mat_mul(m.polarization, m.f_matrix))
    gram = linalg.freeze([[pairing_full[i][j] for j in quot] for i in quot])

    if gram != linalg.transpose(_conj_mat(gram)):
        raise ValidationError("induced pairing is not sigma-alternating")
    if not linalg.is_invertible(gram):
        raise ValidationError("degenerate pairing (polarization bug)")

    grading = None
    sqrt_alpha = None
    if m.ok_action is not None:
        from .dieudonne import induced_quotient_action
        from .witt import hensel_sqrt

        if m.alpha is None:
            raise ValidationError("module with an action must record alpha")
        jq = induced_quotient_action(m)
        ubar = m.ring.reduce(hensel_sqrt(m.ring, m.alpha))
        # skew-Hermitian: <J x, y> = <x, -J y>, i.e. J^T G = -G sigma(J)
        lhs = linalg.mat_mul(linalg.transpose(jq), gram)
        rhs = linalg.mat_neg(linalg.mat_mul(gram, _conj_mat(jq)))
        if lhs != rhs:
            raise ValidationError("induced pairing is not skew-Hermitian for the action")
        g = len(quot)
        one, zero = ctx.one(), ctx.zero()
        minus_basis = linalg.nullspace(
            linalg.mat_add(jq, linalg.scalar_matrix(g, ubar, zero)), one, zero
        )
        plus_basis = linalg.nullspace(
            linalg.mat_sub(jq, linalg.scalar_matrix(g, ubar, zero)), one, zero
        )
        if len(minus_basis) + len(plus_basis) != g:
            raise ValidationError("action on the quotient is not semisimple")
        C = linalg.transpose(tuple(minus_basis) + tuple(plus_basis))
        gram = linalg.mat_mul(linalg.mat_mul(linalg.transpose(C), gram), _conj_mat(C))
        grading = (len(minus_basis), len(plus_basis))
        sqrt_alpha = ubar

    return HermitianQuotient(
        ctx=ctx, dim=len(quot), gram=linalg.freeze(gram), grading=grading, sqrt_alpha=sqrt_alpha
    )


def pairing_well_defined(m: DieudonneModule, h: HermitianQuotient, trials: int = 20, seed: int = 0) -> int:
    """Oracle: recompute <e_i, e_j> from random coset representatives
    x + Fa, y + Vb and count disagreements (0 for a correct pairing).

    Representatives are compared on the raw quotient coordinates, so
    this is independent of the grading change of basis."""
    import random

    rng = random.Random(seed)
    ring = m.ring
    ech, quot = _quotient_data(m)
    pairing_full = _mod_p_matrix(m, linalg.mat_mul(m.polarization, m.f_matrix))
    disagreements = 0
    for _ in range(trials):
        i = quot[rng.randrange(len(quot))]
        j = quot[rng.randrange(len(quot))]
        base = pairing_full[i][j]
        a = tuple(ring.el(rng.randrange(ring.pn)) for _ in range(m.rank))
        b = tuple(ring.el(rng.randrange(ring.pn)) for _ in range(m.rank))
        x = tuple(u + v for u, v in zip(m.basis_vector(i), m.apply_f(a)))
        y = tuple(u + v for u, v in zip(m.basis_vector(j), m.apply_v(b)))
        value = ring.reduce(m.pairing(x, m.apply_f(y)))
        if value != base:
            disagreements += 1
    return disagreements


# ---------------------------------------------------------------------------
# automorphism groups by exhaustive enumeration


def _similitude_buckets(size: int, gram_codes, table: FieldTable):
    """All size x size coded matrices X with X* G X = c G, bucketed by c."""
    buckets: dict[int, list] = {c: [] for c in table.fp_units}
    if size == 0:
        for c in table.fp_units:
            buckets[c].append(())
        return buckets
    mul, add = table.mul, table.add
    q = table.q
    anchor = next(
        (i, j) for i in range(size) for j in range(size) if gram_codes[i][j] != 0
    )
    anchor_inv = table.inv[gram_codes[anchor[0]][anchor[1]]]
    for entries in itertools.product(range(q), repeat=size * size):
        X = tuple(entries[k * size : (k + 1) * size] for k in range(size))
        XG = table.mat_mul(table.conj_transpose(X), gram_codes)
        M = table.mat_mul(XG, X)
        c = mul[M[anchor[0]][anchor[1]]][anchor_inv]
        if c == 0 or c >= table.p:
            continue
        ok = True
        for i in range(size):
            for j in range(size):
                if M[i][j] != mul[c][gram_codes[i][j]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            buckets[c].append(X)
    return buckets


def automorphism_group_bruteforce(
    h: HermitianQuotient, budget: Optional[int] = None
) -> tuple[int, list]:
    """All automorphisms of the Hermitian space: block-diagonal matrices
    with X* gram X = c gram for a common similitude c in F_p^x.

    Enumerates each grading block independently (the blocks only
    interact through c), so the candidate count is q^(r^2) + q^(s^2).
    Returns (order, elements) with elements as FqElem matrices.
    """
    table = field_table(h.ctx.p, h.ctx.s)
    r, s = h.grading if h.grading is not None else (h.dim, 0)
    cost = table.q ** (r * r) + table.q ** (s * s)
    limit = enum_budget(budget)
    if cost > limit:
        raise BudgetExceededError(
            f"enumeration needs {cost} candidates; budget is {limit} (set SSP_MAX_ENUM)"
        )
    gm, gp = h.blocks()
    bm = _similitude_buckets(r, table.mat_encode(gm), table)
    bp = _similitude_buckets(s, table.mat_encode(gp), table)
    order = 0
    elements = []
    zero = h.ctx.zero()
    for c in table.fp_units:
        order += len(bm[c]) * len(bp[c])
        for Xm in bm[c]:
            dm = table.mat_decode(Xm) if r else ()
            for Xp in bp[c]:
                dp = table.mat_decode(Xp) if s else ()
                rows = []
                for i in range(r):
                    rows.append(tuple(dm[i]) + tuple(zero for _ in range(s)))
                for i in range(s):
                    rows.append(tuple(zero for _ in range(r)) + tuple(dp[i]))
                elements.append(tuple(rows))
    return order, elements


def similitude_factor(h: HermitianQuotient, X) -> FqElem:
    """The c with X* gram X = c gram; raises if X is not an automorphism."""
    lhs = linalg.mat_mul(
        linalg.mat_mul(linalg.transpose(_conj_mat(X)), h.gram), X
    )
    anchor = next(
        (i, j)
        for i in range(h.dim)
        for j in range(h.dim)
        if not h.gram[i][j].is_zero()
    )
    c = lhs[anchor[0]][anchor[1]] * h.gram[anchor[0]][anchor[1]].inv()
    if lhs != linalg.mat_scale(c, h.gram) or not c.in_prime_subfield() or c.is_zero():
        raise ValidationError("matrix is not a similitude of the pairing")
    return c


def cotangent_dual(h: HermitianQuotient) -> HermitianQuotient:
    """The dual space with the pairing transported through v -> <., v>.

    On coded bases the transported Gram is sigma(G^{-1})^T; the grading
    and sqrt(alpha) are unchanged (the functionals supported on an
    eigenspace form the eigenspace of the dual action for the same
    eigenvalue)."""
    one, zero = h.ctx.one(), h.ctx.zero()
    ginv = linalg.inverse(h.gram, one, zero)
    dual_gram = linalg.transpose(_conj_mat(ginv))
    return HermitianQuotient(
        ctx=h.ctx,
        dim=h.dim,
        gram=linalg.freeze(dual_gram),
        grading=h.grading,
        sqrt_alpha=h.sqrt_alpha,
    )
