"""Truncated Witt rings W_n(F_{p^s}) = Z_{p^s} / p^n.

Realized as (Z/p^n)[x]/(M) for a lift M of the F_{p^s} modulus, so
arithmetic is polynomial arithmetic rather than Witt-coordinate
polynomials (the rings are identical for unramified extensions).  The
Frobenius lift sigma sends the generator to the Hensel lift of its p-th
power and fixes Z/p^n.

Valuations on a truncated ring are censored: an element that is zero at
level n has valuation >= n, and val() returns math.inf to signal this.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import InsufficientPrecisionError, ValidationError
from .gf import FieldCtx, FqElem, field_ctx

INF = math.inf


class WittRing:
    """W_n(F_{p^s}) with Frobenius lift sigma, sigma^s = id."""

    def __init__(self, p: int, s: int, n: int):
        if n < 1:
            raise ValidationError("truncation level n must be >= 1")
        self.gf_ctx: FieldCtx = field_ctx(p, s)
        self.p = p
        self.s = s
        self.n = n
        self.pn = p**n
        self.modulus = tuple(int(c) for c in self.gf_ctx.modulus)
        self._sigma_pows = self._build_sigma()
        gen = self.gen()
        x = gen
        for _ in range(s):
            x = self.sigma(x)
        assert x == gen, "sigma^s must fix the generator"

    # -- construction helpers ------------------------------------------------

    def _build_sigma(self):
        """Powers of sigma(x), where sigma(x) is the root of the modulus
        congruent to x^p mod p (Newton iteration)."""
        if self.s == 1:
            return [self.el(1)]
        r = self.gen() ** self.p
        for _ in range(self.n + 2):
            fr = self._eval_modulus(r)
            if fr.is_zero():
                break
            dr = self._eval_modulus_derivative(r)
            r = r - fr * dr.inv()
        else:
            raise InsufficientPrecisionError("Frobenius-lift Newton iteration stalled")
        assert self._eval_modulus(r).is_zero()
        pows = [self.one()]
        for _ in range(1, self.s):
            pows.append(pows[-1] * r)
        return pows

    def _eval_modulus(self, x: "WittElem") -> "WittElem":
        acc = self.zero()
        for c in reversed(self.modulus):
            acc = acc * x + self.el(c)
        return acc

    def _eval_modulus_derivative(self, x: "WittElem") -> "WittElem":
        acc = self.zero()
        for i in range(len(self.modulus) - 1, 0, -1):
            acc = acc * x + self.el(i * self.modulus[i])
        return acc

    # -- identity / comparison ----------------------------------------------

    def __eq__(self, other):
        return isinstance(other, WittRing) and (self.p, self.s, self.n) == (
            other.p,
            other.s,
            other.n,
        )

    def __hash__(self):
        return hash((self.p, self.s, self.n))

    def __repr__(self):
        return f"WittRing(p={self.p}, s={self.s}, n={self.n})"

    # -- element constructors -------------------------------------------------

    def el(self, coeffs) -> "WittElem":
        if isinstance(coeffs, WittElem):
            if coeffs.ring != self:
                raise ValidationError("element from a different ring")
            return coeffs
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        c = [x % self.pn for x in coeffs]
        if len(c) > self.s:
            c = self._reduce_poly(c)
        c += [0] * (self.s - len(c))
        return WittElem(self, tuple(c[: self.s]))

    def _reduce_poly(self, c: list[int]) -> list[int]:
        d = self.s
        for i in range(len(c) - 1, d - 1, -1):
            top = c[i]
            if top:
                for j in range(d + 1):
                    c[i - d + j] = (c[i - d + j] - top * self.modulus[j]) % self.pn
        return c[:d]

    def zero(self) -> "WittElem":
        return self.el(0)

    def one(self) -> "WittElem":
        return self.el(1)

    def gen(self) -> "WittElem":
        return self.el((0, 1)) if self.s > 1 else self.el(1)

    def from_gf(self, x: FqElem) -> "WittElem":
        """The coefficient-wise lift of a residue-field element."""
        if x.ctx != self.gf_ctx:
            raise ValidationError("residue element from a different field")
        return self.el(tuple(x.coeffs))

    # -- structure maps --------------------------------------------------------

    def sigma(self, x: "WittElem") -> "WittElem":
        x = self.el(x)
        acc = self.zero()
        for i, c in enumerate(x.coeffs):
            if c:
                acc = acc + self._sigma_pows[i] * c
        return acc

    def sigma_inv(self, x: "WittElem") -> "WittElem":
        out = self.el(x)
        for _ in range(self.s - 1):
            out = self.sigma(out)
        return out

    def reduce(self, x: "WittElem") -> FqElem:
        """Reduction W_n -> W_1 = F_{p^s}."""
        return self.gf_ctx.el(tuple(c % self.p for c in x.coeffs))


@lru_cache(maxsize=None)
def witt_ring(p: int, s: int, n: int) -> WittRing:
    return WittRing(p, s, n)


class WittElem:
    """Element of a truncated Witt ring; immutable coefficient vector."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: WittRing, coeffs: tuple[int, ...]):
        self.ring = ring
        self.coeffs = coeffs

    def __repr__(self):
        return f"W({list(self.coeffs)} mod {self.ring.p}^{self.ring.n})"

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.el(other)
        return (
            isinstance(other, WittElem) and self.ring == other.ring and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring.p, self.ring.s, self.ring.n, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _coerce(self, other) -> "WittElem":
        if isinstance(other, int):
            return self.ring.el(other)
        if not isinstance(other, WittElem) or other.ring != self.ring:
            raise ValidationError("mixed-ring arithmetic")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        pn = self.ring.pn
        return WittElem(self.ring, tuple((a + b) % pn for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        pn = self.ring.pn
        return WittElem(self.ring, tuple((-a) % pn for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        other = self._coerce(other)
        s, pn = self.ring.s, self.ring.pn
        out = [0] * (2 * s - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = (out[i + j] + a * b) % pn
        return WittElem(self.ring, tuple(self.ring._reduce_poly(out)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> "WittElem":
        """Inverse of a unit, by lifting the residue-field inverse."""
        if self.val() != 0:
            raise ValidationError("not a unit in the truncated Witt ring")
        ring = self.ring
        z = ring.from_gf(ring.reduce(self).inv())
        for _ in range(ring.n.bit_length() + 1):
            err = self * z
            if err == ring.one():
                return z
            z = z * (ring.el(2) - err)
        assert self * z == ring.one()
        return z

    def val(self):
        """Largest k <= n with x in p^k * ring; math.inf when censored (x = 0)."""
        best = INF
        p, n = self.ring.p, self.ring.n
        for c in self.coeffs:
            if c == 0:
                continue
            k = 0
            while c % p == 0:
                c //= p
                k += 1
            best = min(best, k)
            if best == 0:
                return 0
        return best if best < n else INF


def frobenius_lift(x: WittElem) -> WittElem:
    """The ring automorphism lifting y -> y^p on the residue field."""
    return x.ring.sigma(x)


def val_p(x: WittElem):
    """p-adic valuation; math.inf marks a truncation-censored value."""
    return x.val()


def hensel_sqrt(ring: WittRing, alpha: int) -> WittElem:
    """Lift of sqrt(alpha) in W_n(F_{p^2}) for a non-residue alpha.

    Reduces mod p to gf.sqrt_nonresidue(ctx, alpha); satisfies
    sigma(u) = -u.
    """
    from .gf import sqrt_nonresidue

    if ring.s != 2:
        raise ValidationError("hensel_sqrt requires a W_n(F_{p^2}) ring")
    u0 = sqrt_nonresidue(ring.gf_ctx, alpha)
    target = ring.el(alpha)
    u = ring.from_gf(u0)
    for _ in range(ring.n.bit_length() + 2):
        err = u * u - target
        if err.is_zero():
            break
        u = u - err * (ring.el(2) * u).inv()
    assert (u * u) == target, "Hensel square-root iteration failed"
    assert ring.sigma(u) == -u
    assert ring.reduce(u) == u0
    return u
