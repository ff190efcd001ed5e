"""The eigensystem-counting pipeline and equivariant-function spaces.

The headline bound on the number of distinct mod-p Hecke eigensystems:

    N <= ceil( C_g * #GSp_{2g}(Z/N) * prod_{i=1}^{g} (p^i + (-1)^i) )
         * (p-regular class count) * (irreducible dimension bound)

kept as an exact rational until the single final ceiling.  The first
factor bounds the superspecial point count via the Siegel embedding
(it is an upper bound, not claimed sharp, and is labeled as such in
all output); the second bounds the total dimension of irreducibles.

Double-coset spaces are input data here (fixtures), never computed
from global arithmetic: honest class-set enumeration is out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import FormulaInconsistencyError, ValidationError
from .exact import mass_constant, mass_constant_bernoulli_abs
from .gf import FieldCtx, FqElem, field_ctx, is_nonresidue
from .groups import (
    factorize,
    irrep_dim_bound,
    irrep_sum_bound,
    is_prime,
    order_gsp_mod,
    p_regular_classes,
)

SUPERSPECIAL_BOUND_NOTE = "upper bound via Siegel embedding"


@dataclass(frozen=True)
class SignatureParams:
    """Validated parameters (p, alpha, r, s, N) for the pipeline.

    Hard requirements: p an odd prime not dividing alpha, alpha a
    negative squarefree non-residue mod p (p inert), g = r + s even and
    at least 2.  Soft conditions are recorded in .warnings: rs = 0 is
    allowed (the counting formulas cover it), N < 3 drops level
    rigidity, and p | N loses the prime-to-p level interpretation while
    the bound still evaluates."""

    p: int
    alpha: int
    r: int
    s: int
    N: int
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        p, alpha, r, s, N = self.p, self.alpha, self.r, self.s, self.N
        if not is_prime(p) or p == 2:
            raise ValidationError(f"p = {p} must be an odd prime")
        if r < 0 or s < 0:
            raise ValidationError("r and s must be non-negative")
        g = r + s
        if g < 2 or g % 2 != 0:
            raise ValidationError(f"g = r + s = {g} must be even and >= 2")
        if N < 1:
            raise ValidationError("N must be >= 1")
        if alpha >= 0:
            raise ValidationError("alpha must be negative (imaginary quadratic)")
        if alpha % p == 0:
            raise ValidationError(f"p = {p} divides alpha = {alpha}")
        if any(e > 1 for e in factorize(-alpha).values()):
            raise ValidationError(f"alpha = {alpha} must be squarefree")
        if not is_nonresidue(alpha, p):
            raise ValidationError(f"alpha is a QR mod p: p splits or ramifies in Q(sqrt({alpha}))")
        warns = []
        if r * s == 0:
            warns.append("rs = 0: degenerate signature, counting formulas still apply")
        if N < 3:
            warns.append("N < 3: level structure is not rigid")
        if N % p == 0:
            warns.append("p divides N: level is not prime to p; bound evaluated formally")
        object.__setattr__(self, "warnings", tuple(warns))

    @property
    def g(self) -> int:
        return self.r + self.s


@dataclass(frozen=True)
class CountReport:
    """Every intermediate quantity of the eigensystem bound."""

    params: SignatureParams
    c_g: Fraction
    gsp_order: int
    mass_product: int
    superspecial_bound_exact: Fraction
    superspecial_bound_ceiling: int
    class_count: int
    dim_bound: int
    irr_sum_bound: int
    final_bound: int
    asymptotic_exponent: int


def mass_factor_product(p: int, g: int) -> int:
    """prod_{i=1}^{g} (p^i + (-1)^i)."""
    out = 1
    for i in range(1, g + 1):
        out *= p**i + (-1) ** i
    return out


def superspecial_bound(params: SignatureParams) -> Fraction:
    """C_g * #GSp_{2g}(Z/N) * prod (p^i + (-1)^i), exactly.

    An upper bound for the superspecial point count (via the Siegel
    embedding); integrality is not asserted."""
    g = params.g
    return (
        mass_constant(g)
        * order_gsp_mod(g, params.N)
        * mass_factor_product(params.p, g)
    )


def asymptotic_exponent_symbolic(g: int, r: int, s: int) -> int:
    """Degree in p of the bound, as the sum of per-factor degrees.

    The sum must reproduce g^2 + g + 1 - rs (and g^2 + g + 1 on the
    rs = 0 branch); a mismatch is a formula regression and raises."""
    if r + s != g or r < 0 or s < 0:
        raise ValidationError("need r + s = g with r, s >= 0")
    deg_mass = g * (g + 1) // 2
    deg_dim_bound = (r * (r - 1) + s * (s - 1)) // 2
    if r * s != 0:
        deg_classes = (g - 2) + 3
    else:
        deg_classes = (g - 1) + 2
    total = deg_mass + deg_dim_bound + deg_classes
    closed = g * g + g + 1 - r * s
    if total != closed:
        raise FormulaInconsistencyError(
            f"factor degrees sum to {total}, closed form gives {closed}"
        )
    return total


def eigensystem_bound(params: SignatureParams) -> CountReport:
    """Assemble the full bound with a term-by-term double entry.

    The mass constant is evaluated through both the zeta product and
    the absolute Bernoulli product; the final number must factor as
    ceil(superspecial bound) * (class count * dimension bound)."""
    g = params.g
    c_g = mass_constant(g)
    if c_g != mass_constant_bernoulli_abs(g):
        raise FormulaInconsistencyError("zeta and Bernoulli forms of C_g disagree")
    gsp = order_gsp_mod(g, params.N)
    mass = mass_factor_product(params.p, g)
    ss_exact = c_g * gsp * mass
    ss_ceiling = math.ceil(ss_exact)
    classes = p_regular_classes(params.r, params.s, params.p)
    dim_b = irrep_dim_bound(params.r, params.s, params.p)
    irr_sum = irrep_sum_bound(params.r, params.s, params.p)
    if irr_sum != classes * dim_b:
        raise FormulaInconsistencyError("irreducible-sum bound fails to factor")
    if ss_exact != superspecial_bound(params):
        raise FormulaInconsistencyError("superspecial bound fails to reassemble")
    return CountReport(
        params=params,
        c_g=c_g,
        gsp_order=gsp,
        mass_product=mass,
        superspecial_bound_exact=ss_exact,
        superspecial_bound_ceiling=ss_ceiling,
        class_count=classes,
        dim_bound=dim_b,
        irr_sum_bound=irr_sum,
        final_bound=ss_ceiling * irr_sum,
        asymptotic_exponent=asymptotic_exponent_symbolic(g, params.r, params.s),
    )


def supersingular_mass_g1(p: int) -> Fraction:
    """C_1 * (p - 1) = (p - 1)/24, the classical supersingular mass.

    Outside the pipeline preconditions (g = 1); a standalone sanity
    check for the mass constant."""
    if not is_prime(p) or p == 2:
        raise ValidationError("p must be an odd prime")
    value = mass_constant(1) * (p - 1)
    if value != Fraction(p - 1, 24):
        raise FormulaInconsistencyError("supersingular mass deviates from (p-1)/24")
    return value


# ---------------------------------------------------------------------------
# equivariant function spaces on finite coset fixtures


@dataclass(frozen=True)
class CosetSpace:
    """A finite right G-set given by generator permutations.

    generators[i][x] is x . g_i.  The name list is parallel and only
    used in messages."""

    points: int
    generators: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()
    group: str = ""

    def __post_init__(self):
        if self.points < 1:
            raise ValidationError("a coset space needs at least one point")
        for i, perm in enumerate(self.generators):
            if len(perm) != self.points or sorted(perm) != list(range(self.points)):
                raise ValidationError(f"generator {self._name(i)} is not a permutation")
        if self.names and len(self.names) != len(self.generators):
            raise ValidationError("generator name list has the wrong length")

    def _name(self, i: int) -> str:
        return self.names[i] if self.names else f"#{i}"


@dataclass(frozen=True)
class GroupRepresentation:
    """Matrix generators over F_{p^s}, parallel to a CosetSpace's."""

    ctx: FieldCtx
    dim: int
    generators: tuple[tuple[tuple[FqElem, ...], ...], ...]

    def __post_init__(self):
        for i, M in enumerate(self.generators):
            if len(M) != self.dim or any(len(row) != self.dim for row in M):
                raise ValidationError(f"representation matrix #{i} is not {self.dim} x {self.dim}")
            if not linalg.is_invertible(M):
                raise ValidationError(f"representation matrix #{i} is singular")


def _validate_action_pair(space: CosetSpace, rho: GroupRepresentation):
    if len(space.generators) != len(rho.generators):
        raise ValidationError(
            "inconsistent action data: "
            f"{len(space.generators)} permutations vs {len(rho.generators)} matrices"
        )


def orbit_stabilizer_data(space: CosetSpace, rho: GroupRepresentation):
    """Per orbit: (representative, rho-images of its stabilizer generators).

    A spanning tree of the orbit graph gives a transversal t_y with
    rep . t_y = y; each non-tree edge (y --g--> z) closes the loop
    t_y g t_z^{-1} fixing the representative (Schreier generators)."""
    _validate_action_pair(space, rho)
    one, zero = rho.ctx.one(), rho.ctx.zero()
    ident = linalg.identity_matrix(rho.dim, one, zero)

    seen = [False] * space.points
    out = []
    for start in range(space.points):
        if seen[start]:
            continue
        transversal = {start: ident}
        seen[start] = True
        queue = [start]
        stabilizer = []
        while queue:
            y = queue.pop()
            for gi, perm in enumerate(space.generators):
                z = perm[y]
                word = linalg.mat_mul(transversal[y], rho.generators[gi])
                if z not in transversal:
                    transversal[z] = word
                    seen[z] = True
                    queue.append(z)
                else:
                    loop = linalg.mat_mul(word, linalg.inverse(transversal[z], one, zero))
                    if loop != ident:
                        stabilizer.append(loop)
        out.append((start, stabilizer))
    return out


def equivariant_dimension(space: CosetSpace, rho: GroupRepresentation) -> int:
    """dim { f : space -> F^d with f(x . g) = rho(g)^{-1} f(x) }.

    Per orbit, f is determined by its value at the representative,
    which must lie in the common fixed space of the stabilizer images,
    so the total is the sum of those fixed-space dimensions."""
    one, zero = rho.ctx.one(), rho.ctx.zero()
    d = rho.dim
    ident = linalg.identity_matrix(d, one, zero)
    total = 0
    for _rep, stabilizer in orbit_stabilizer_data(space, rho):
        if stabilizer:
            constraints = []
            for loop in stabilizer:
                constraints.extend(linalg.mat_sub(loop, ident))
            total += d - linalg.rank(constraints)
        else:
            total += d
    return total


def equivariant_dimension_dense(space: CosetSpace, rho: GroupRepresentation) -> int:
    """Independent oracle: assemble the full linear system on all values
    f(x) at once and return the kernel dimension."""
    _validate_action_pair(space, rho)
    one, zero = rho.ctx.one(), rho.ctx.zero()
    n, d = space.points, rho.dim
    inv = [linalg.inverse(M, one, zero) for M in rho.generators]
    rows = []
    for gi, perm in enumerate(space.generators):
        for x in range(n):
            z = perm[x]
            for row_idx in range(d):
                row = [zero] * (n * d)
                for col in range(d):
                    row[x * d + col] = row[x * d + col] - inv[gi][row_idx][col]
                row[z * d + row_idx] = row[z * d + row_idx] + one
                rows.append(tuple(row))
    return n * d - linalg.rank(rows)


def dim_superspecial_bound_check(space: CosetSpace, rho: GroupRepresentation) -> bool:
    """The dimension never exceeds (#points) x (dim rho)."""
    return equivariant_dimension(space, rho) <= space.points * rho.dim


# ---------------------------------------------------------------------------
# JSON interchange for fixtures


def coset_space_from_dict(data: dict) -> CosetSpace:
    try:
        points = int(data["points"])
        gens = data["generators"]
    except KeyError as e:
        raise ValidationError(f"coset-space spec missing field {e}") from None
    perms, names = [], []
    for i, g in enumerate(gens):
        perms.append(tuple(int(x) for x in g["perm"]))
        names.append(str(g.get("name", f"#{i}")))
    return CosetSpace(
        points=points,
        generators=tuple(perms),
        names=tuple(names),
        group=str(data.get("group", "")),
    )


def representation_from_dict(data: dict) -> GroupRepresentation:
    try:
        dim = int(data["dim"])
        fld = data["field"]
        gens = data["generators"]
    except KeyError as e:
        raise ValidationError(f"representation spec missing field {e}") from None
    ctx = field_ctx(int(fld["p"]), int(fld.get("s", 1)))
    mats = []
    for M in gens:
        mats.append(
            linalg.freeze(
                [[ctx.el(tuple(x) if isinstance(x, list) else int(x)) for x in row] for row in M]
            )
        )
    return GroupRepresentation(ctx=ctx, dim=dim, generators=tuple(mats))
