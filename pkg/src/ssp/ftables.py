"""Table-backed arithmetic for small fields and quaternion orders mod p.

Exhaustive matrix-group enumerations spend almost all their time on
field multiplications, so the oracles run on integer-coded elements
with dense lookup tables.  Tables are derived directly from the object
arithmetic in gf/groups, never written by hand, so the encodings stay
consistent with the rest of the library: a field element with
coefficients (c0, .., c_{s-1}) is the code sum(c_i p^i).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .gf import FieldCtx, FqElem, field_ctx


class FieldTable:
    """Dense op tables for F_{p^s}; element codes are 0 .. q-1."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        p, s, q = ctx.p, ctx.s, ctx.q
        self.p, self.s, self.q = p, s, q
        els = [FqElem(ctx, c) for c in itertools.product(range(p), repeat=s)]
        # code of coefficient tuple (c0, c1, ...) is c0 + c1 p + ...
        self.elements = sorted(els, key=lambda e: self.encode(e))
        self.add = [[self.encode(a + b) for b in self.elements] for a in self.elements]
        self.mul = [[self.encode(a * b) for b in self.elements] for a in self.elements]
        self.neg = [self.encode(-a) for a in self.elements]
        self.conj = [self.encode(a.frobenius()) for a in self.elements]
        self.inv = [0] + [self.encode(a.inv()) for a in self.elements[1:]]
        self.fp_codes = [self.encode(ctx.el(c)) for c in range(p)]
        self.fp_units = self.fp_codes[1:]

    def encode(self, x: FqElem) -> int:
        code = 0
        for c in reversed(x.coeffs):
            code = code * self.p + c
        return code

    def decode(self, code: int) -> FqElem:
        coeffs = []
        for _ in range(self.s):
            coeffs.append(code % self.p)
            code //= self.p
        return FqElem(self.ctx, tuple(coeffs))

    # -- coded matrices (tuples of tuples of ints) ---------------------------

    def mat_encode(self, M):
        return tuple(tuple(self.encode(x) for x in row) for row in M)

    def mat_decode(self, M):
        return tuple(tuple(self.decode(x) for x in row) for row in M)

    def mat_mul(self, A, B):
        mul, add = self.mul, self.add
        n, k = len(A), len(B)
        m = len(B[0]) if k else 0
        out = []
        for i in range(n):
            Ai = A[i]
            row = []
            for j in range(m):
                acc = 0
                for t in range(k):
                    acc = add[acc][mul[Ai[t]][B[t][j]]]
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def conj_transpose(self, A):
        conj = self.conj
        return tuple(tuple(conj[A[i][j]] for i in range(len(A))) for j in range(len(A[0]) if A else 0))

    def identity(self, n):
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))

    def scale(self, c, A):
        mul = self.mul
        return tuple(tuple(mul[c][x] for x in row) for row in A)

    def det(self, A):
        n = len(A)
        if n == 0:
            return 1
        mul, add, neg = self.mul, self.add, self.neg
        total = 0
        for perm in itertools.permutations(range(n)):
            prod = 1
            for i in range(n):
                prod = mul[prod][A[i][perm[i]]]
                if prod == 0:
                    break
            # permutation sign by inversion count
            inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            total = add[total][neg[prod] if inv % 2 else prod]
        return total


@lru_cache(maxsize=None)
def field_table(p: int, s: int = 2) -> FieldTable:
    return FieldTable(field_ctx(p, s))


class QuatTable:
    """Dense tables for a quaternion order mod p (see groups.QuatModP).

    Codes are 0 .. p^4 - 1 encoding (a, b, c, d) = a + b u + c Pi + d u Pi.
    The F_{p^2} subalgebra F_p[u] has codes < p^2, matching FieldTable
    codes for the same (p, s=2) context; multiplying a subfield code w
    by Pi gives code w * p^2.
    """

    def __init__(self, quat):
        self.quat = quat
        p = quat.p
        self.p = p
        self.size = p**4
        els = list(itertools.product(range(p), repeat=4))
        self.tuples = sorted(els, key=self._enc_tuple)
        n = self.size
        self.mul = [[0] * n for _ in range(n)]
        self.add = [[0] * n for _ in range(n)]
        for i, x in enumerate(self.tuples):
            for j, y in enumerate(self.tuples):
                self.mul[i][j] = self._enc_tuple(quat.mul(x, y))
                self.add[i][j] = self._enc_tuple(quat.add(x, y))
        self.conj = [self._enc_tuple(quat.conj(x)) for x in self.tuples]

    def _enc_tuple(self, x) -> int:
        a, b, c, d = x
        p = self.p
        return ((d * p + c) * p + b) * p + a

    def decode(self, code: int):
        p = self.p
        a = code % p
        code //= p
        b = code % p
        code //= p
        c = code % p
        return (a, b, c, code // p)

    def subfield_code(self, field_code: int) -> int:
        """F_{p^2} code (a + b p) -> quaternion code of a + b u."""
        return field_code

    def pi_multiple_code(self, field_code: int) -> int:
        """F_{p^2} code w -> quaternion code of w * Pi."""
        return field_code * self.p * self.p

    def mod_pi(self, code: int) -> int:
        """Reduction mod Pi, landing in the F_{p^2} codes."""
        return code % (self.p * self.p)

    def mat_mul(self, A, B):
        mul, add = self.mul, self.add
        n, k = len(A), len(B)
        m = len(B[0])
        out = []
        for i in range(n):
            Ai = A[i]
            row = []
            for j in range(m):
                acc = 0
                for t in range(k):
                    acc = add[acc][mul[Ai[t]][B[t][j]]]
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def conj_transpose(self, A):
        conj = self.conj
        n = len(A)
        return tuple(tuple(conj[A[i][j]] for i in range(n)) for j in range(n))

    def identity(self, n):
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
