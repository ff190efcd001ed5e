"""Orders and p-regular class counts of the finite groups in the
counting pipeline, with exhaustive-enumeration oracles.

Formulas (all exact integers):
  #SU_t(F_{p^2})  = p^{t(t-1)/2} prod_{i=2}^{t} (p^i - (-1)^i),  SU_0 = SU_1 = 1
  #U_t(F_{p^2})   = #SU_t (p+1) for t >= 1
  #G(U_r x U_s)   = #U_r #U_s (p-1)
  #GSp_{2g}(F_l)  = l^{g^2} (l-1) prod_{i=1}^{g} (l^{2i} - 1),
                    lifted to l^k by l^{(k-1)(2g^2+g+1)}, multiplicative in N
  k^p(G(U_r x U_s)) = p^{g-2} (p-1)(p+1)^2 if rs != 0, else p^{g-1} (p-1)(p+1)

Enumeration oracles run over table-coded fields (ftables) and are kept
independent of the closed forms so each route checks the other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Optional

from .errors import BudgetExceededError, ValidationError
from .ftables import QuatTable, field_table
from .gf import sqrt_nonresidue
from .hermitian import enum_budget

# ---------------------------------------------------------------------------
# integer utilities


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValidationError("can only factor positive integers")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def sylow_p_order(order: int, p: int) -> int:
    out = 1
    while order % p == 0:
        order //= p
        out *= p
    return out


# ---------------------------------------------------------------------------
# closed-form orders


def order_su(t: int, p: int) -> int:
    if t < 0:
        raise ValidationError("t must be >= 0")
    if t <= 1:
        return 1
    out = p ** (t * (t - 1) // 2)
    for i in range(2, t + 1):
        out *= p**i - (-1) ** i
    return out


def order_u(t: int, p: int) -> int:
    if t < 0:
        raise ValidationError("t must be >= 0")
    if t == 0:
        return 1
    return order_su(t, p) * (p + 1)


def order_gu(t: int, p: int) -> int:
    """Unitary similitudes; the similitude character is onto F_p^x."""
    return order_u(t, p) * (p - 1)


def order_gusplit(r: int, s: int, p: int) -> int:
    if r < 0 or s < 0:
        raise ValidationError("r, s must be >= 0")
    return order_u(r, p) * order_u(s, p) * (p - 1)


def order_gsp_fp(g: int, ell: int) -> int:
    out = ell ** (g * g) * (ell - 1)
    for i in range(1, g + 1):
        out *= ell ** (2 * i) - 1
    return out


def order_gsp_mod(g: int, N: int) -> int:
    """#GSp_{2g}(Z/N): prime-power lifting and CRT multiplicativity."""
    if g < 1 or N < 1:
        raise ValidationError("need g >= 1 and N >= 1")
    out = 1
    dim = 2 * g * g + g + 1  # dim GSp_{2g} as a group scheme
    for ell, k in factorize(N).items() if N > 1 else []:
        out *= order_gsp_fp(g, ell) * ell ** ((k - 1) * dim)
    return out


def p_regular_classes(r: int, s: int, p: int) -> int:
    """Number of p-regular conjugacy classes of G(U_r x U_s)(F_{p^2})."""
    g = r + s
    if g < 2:
        raise ValidationError("r + s must be >= 2")
    if r * s != 0:
        return p ** (g - 2) * (p - 1) * (p + 1) ** 2
    return p ** (g - 1) * (p - 1) * (p + 1)


def irrep_dim_bound(r: int, s: int, p: int) -> int:
    """Every irreducible mod-p representation has dimension at most the
    p-Sylow order p^{(r(r-1)+s(s-1))/2} (split (B,N)-pair bound)."""
    return p ** ((r * (r - 1) + s * (s - 1)) // 2)


def irrep_sum_bound(r: int, s: int, p: int) -> int:
    return p_regular_classes(r, s, p) * irrep_dim_bound(r, s, p)


@dataclass(frozen=True)
class GroupSpec:
    """A parameterized finite group with an exact order."""

    family: str  # 'su' | 'u' | 'gu' | 'gusplit' | 'gsp_mod'
    params: tuple[int, ...]

    def order(self) -> int:
        fam, pr = self.family, self.params
        if fam == "su":
            return order_su(*pr)
        if fam == "u":
            return order_u(*pr)
        if fam == "gu":
            return order_gu(*pr)
        if fam == "gusplit":
            return order_gusplit(*pr)
        if fam == "gsp_mod":
            return order_gsp_mod(*pr)
        raise ValidationError(f"unknown group family {self.family!r}")


# ---------------------------------------------------------------------------
# exhaustive enumeration oracles (coded matrices over F_{p^2})


def _all_matrices(t: int, q: int):
    for entries in itertools.product(range(q), repeat=t * t):
        yield tuple(entries[k * t : (k + 1) * t] for k in range(t))


def unitary_group_elements(t: int, p: int, budget: Optional[int] = None) -> list:
    """All X over F_{p^2} with X* X = I (identity Hermitian form)."""
    table = field_table(p)
    _check_budget(table.q ** (t * t), budget)
    ident = table.identity(t)
    out = []
    for X in _all_matrices(t, table.q):
        if table.mat_mul(table.conj_transpose(X), X) == ident:
            out.append(X)
    return out


def su_group_elements(t: int, p: int, budget: Optional[int] = None) -> list:
    table = field_table(p)
    return [X for X in unitary_group_elements(t, p, budget) if table.det(X) == 1]


def gusplit_group_elements(r: int, s: int, p: int, budget: Optional[int] = None) -> list:
    """All block-diagonal (X, Y) with X*X = cI_r, Y*Y = cI_s, c in F_p^x.

    Blocks are enumerated independently and bucketed by similitude, so
    the work is q^(r^2) + q^(s^2) candidates rather than the product.
    """
    table = field_table(p)
    _check_budget(table.q ** (r * r) + table.q ** (s * s), budget)

    def buckets(t: int):
        res: dict[int, list] = {c: [] for c in table.fp_units}
        if t == 0:
            for c in table.fp_units:
                res[c].append(())
            return res
        for X in _all_matrices(t, table.q):
            M = table.mat_mul(table.conj_transpose(X), X)
            c = M[0][0]
            if c == 0 or c >= table.p:
                continue
            if M == table.scale(c, table.identity(t)):
                res[c].append(X)
        return res

    bm, bp = buckets(r), buckets(s)
    out = []
    for c in table.fp_units:
        for X in bm[c]:
            for Y in bp[c]:
                rows = [list(X[i]) + [0] * s for i in range(r)]
                rows += [[0] * r + list(Y[i]) for i in range(s)]
                out.append(tuple(tuple(rw) for rw in rows))
    return out


def _check_budget(cost: int, budget: Optional[int]):
    limit = enum_budget(budget)
    if cost > limit:
        raise BudgetExceededError(
            f"enumeration needs {cost} candidates; budget is {limit} (set SSP_MAX_ENUM)"
        )


def gl2_order_enumerated(N: int) -> int:
    """#GL_2(Z/N) by direct enumeration (equals #GSp_2(Z/N))."""
    count = 0
    for a, b, c, d in itertools.product(range(N), repeat=4):
        if gcd((a * d - b * c) % N, N) == 1:
            count += 1
    return count


def symplectic_gram(g: int):
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        J[i][g + i] = 1
        J[g + i][i] = -1
    return J


def hyperbolic_pair_count(g: int, ell: int) -> int:
    """#{(u, v) in (F_l^{2g})^2 : <u, v> = 1} by direct enumeration."""
    n = 2 * g
    count = 0
    vectors = list(itertools.product(range(ell), repeat=n))
    for u in vectors:
        for v in vectors:
            val = sum(u[i] * v[g + i] - u[g + i] * v[i] for i in range(g)) % ell
            if val == 1:
                count += 1
    return count


def gsp_order_enumerated(g: int, ell: int) -> int:
    """#GSp_{2g}(F_l) via enumerated hyperbolic-pair counts:
    #Sp_{2g} = #pairs(g) * #Sp_{2g-2}, and #GSp = #Sp * (l - 1)."""
    sp = 1
    for k in range(1, g + 1):
        sp *= hyperbolic_pair_count(k, ell)
    return sp * (ell - 1)


# ---------------------------------------------------------------------------
# conjugacy classes of enumerated groups


def _element_order(x, mat_mul, ident) -> int:
    k = 1
    y = x
    while y != ident:
        y = mat_mul(y, x)
        k += 1
    return k


def conjugacy_class_data(elements: list, p: int):
    """(class representatives, p-regular class count) for a coded group."""
    table = field_table(p)
    ident = table.identity(len(elements[0]))
    elems = set(elements)
    inverses = {}
    for x in elements:
        k = _element_order(x, table.mat_mul, ident)
        y = x
        for _ in range(k - 2):
            y = table.mat_mul(y, x)
        inverses[x] = y if k > 1 else ident
    seen = set()
    reps = []
    regular = 0
    for x in sorted(elems):
        if x in seen:
            continue
        orbit = {table.mat_mul(table.mat_mul(inverses[gel], x), gel) for gel in elements}
        assert orbit <= elems
        seen |= orbit
        reps.append(x)
        if gcd(_element_order(x, table.mat_mul, ident), p) == 1:
            regular += 1
    return reps, regular


def p_regular_class_count_enumerated(r: int, s: int, p: int, budget: Optional[int] = None) -> int:
    elements = gusplit_group_elements(r, s, p, budget)
    return conjugacy_class_data(elements, p)[1]


# ---------------------------------------------------------------------------
# the quaternion order mod p and the level-p exact sequence


@dataclass(frozen=True)
class QuatModP:
    """The 4-dimensional F_p-algebra F_p[u, Pi]: u^2 = alpha, Pi^2 = 0,
    Pi w = sigma(w) Pi for w in F_p[u] = F_{p^2} (so Pi u = -u Pi).

    Elements are tuples (a, b, c, d) = a + b u + c Pi + d u Pi.  This is
    the reduction mod p of the maximal order of the quaternion algebra
    ramified at p and infinity, with Pi a uniformizer, Pi^2 = p.
    """

    p: int
    alpha: int

    def __post_init__(self):
        from .gf import is_nonresidue

        if not is_nonresidue(self.alpha, self.p):
            raise ValidationError("alpha must be a non-residue mod p")

    ONE = (1, 0, 0, 0)
    U = (0, 1, 0, 0)
    PI = (0, 0, 1, 0)
    UPI = (0, 0, 0, 1)

    def el(self, a=0, b=0, c=0, d=0):
        p = self.p
        return (a % p, b % p, c % p, d % p)

    def add(self, x, y):
        p = self.p
        return tuple((xi + yi) % p for xi, yi in zip(x, y))

    def neg(self, x):
        p = self.p
        return tuple((-xi) % p for xi in x)

    def mul(self, x, y):
        a1, b1, c1, d1 = x
        a2, b2, c2, d2 = y
        al, p = self.alpha, self.p
        return (
            (a1 * a2 + al * b1 * b2) % p,
            (a1 * b2 + b1 * a2) % p,
            (a1 * c2 + al * b1 * d2 + c1 * a2 - al * d1 * b2) % p,
            (a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2) % p,
        )

    def conj(self, x):
        """Main involution: fixes 1, negates u, Pi and u Pi."""
        a, b, c, d = x
        p = self.p
        return (a, (-b) % p, (-c) % p, (-d) % p)

    def basis(self):
        return [self.ONE, self.U, self.PI, self.UPI]


@dataclass(frozen=True)
class LemmaGpReport:
    """Level-p verification of 1 -> U_p -> J(Z_p) -> G(p) -> 1.

    Everything is computed in the finite truncation GU_g(QuatModP)
    commuting with Phi = diag(-u I_r, u I_s); the infinite p-adic group
    is out of reach and out of scope."""

    p: int
    alpha: int
    r: int
    s: int
    group_order: int
    gp_order: int
    image_size: int
    surjective: bool
    kernel_size: int
    kernel_is_identity_mod_pi: bool
    offdiag_probes_rejected: int
    offdiag_probes_total: int

    @property
    def ok(self) -> bool:
        return (
            self.surjective
            and self.kernel_is_identity_mod_pi
            and self.group_order == self.kernel_size * self.gp_order
            and self.offdiag_probes_rejected == self.offdiag_probes_total
        )

    scope_note = "verified at the level-p truncation of the p-adic automorphism group"


def lemma_gp_check(p: int, alpha: int, r: int, s: int, budget: Optional[int] = None) -> LemmaGpReport:
    """Enumerate {X in GU_g(QuatModP) : X Phi = Phi X} and verify that
    reduction mod Pi is a surjection onto block-diagonal G(p) whose
    kernel is trivial mod Pi.

    Commutation with Phi forces diagonal (r, s)-blocks into F_{p^2} and
    off-diagonal blocks into Pi F_{p^2} (checked by probes), so the
    candidate space is those q^{g^2} shapes; each candidate is still
    verified against both defining equations.
    """
    g = r + s
    table = field_table(p)
    q = table.q
    _check_budget(q ** (g * g), budget)
    quat = QuatModP(p, alpha)
    qt = QuatTable(quat)

    u_code = table.encode(sqrt_nonresidue(table.ctx, alpha))
    phi = tuple(
        tuple(
            (qt.subfield_code(table.neg[u_code]) if i < r else qt.subfield_code(u_code))
            if i == j
            else 0
            for j in range(g)
        )
        for i in range(g)
    )
    ident = qt.identity(g)
    fp_scalars = {c: tuple(tuple(c if i == j else 0 for j in range(g)) for i in range(g)) for c in table.fp_units}

    is_diag_pos = [[(i < r) == (j < r) for j in range(g)] for i in range(g)]
    members = []
    for entries in itertools.product(range(q), repeat=g * g):
        X = tuple(
            tuple(
                qt.subfield_code(entries[i * g + j])
                if is_diag_pos[i][j]
                else qt.pi_multiple_code(entries[i * g + j])
                for j in range(g)
            )
            for i in range(g)
        )
        if qt.mat_mul(X, phi) != qt.mat_mul(phi, X):
            continue
        M = qt.mat_mul(qt.conj_transpose(X), X)
        c = M[0][0]
        if c not in fp_scalars or M != fp_scalars[c]:
            continue
        members.append(X)

    gp_elements = set(gusplit_group_elements(r, s, p, budget))
    gp_identity = table.identity(g)
    image = set()
    kernel_size = 0
    kernel_ok = True
    for X in members:
        red = tuple(tuple(qt.mod_pi(x) for x in row) for row in X)
        assert red in gp_elements, "reduction left the block-diagonal unitary group"
        image.add(red)
        if red == gp_identity:
            kernel_size += 1
            for i in range(g):
                for j in range(g):
                    if qt.mod_pi(X[i][j]) != (1 if i == j else 0):
                        kernel_ok = False

    # probes: a unit (not Pi-divisible) off-diagonal entry must break X Phi = Phi X
    probes = 0
    rejected = 0
    if r > 0 and s > 0:
        for w in (1, u_code):  # 1 and u
            X = [list(row) for row in ident]
            X[0][r] = qt.subfield_code(w)
            X = tuple(tuple(row) for row in X)
            probes += 1
            if qt.mat_mul(X, phi) != qt.mat_mul(phi, X):
                rejected += 1

    return LemmaGpReport(
        p=p,
        alpha=alpha,
        r=r,
        s=s,
        group_order=len(members),
        gp_order=len(gp_elements),
        image_size=len(image),
        surjective=image == gp_elements,
        kernel_size=kernel_size,
        kernel_is_identity_mod_pi=kernel_ok,
        offdiag_probes_rejected=rejected,
        offdiag_probes_total=probes,
    )
