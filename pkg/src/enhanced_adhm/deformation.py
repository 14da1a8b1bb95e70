"""The deformation complex at a point and the tangent space ker(d1)/im(d0).

Ambient coordinates flatten a tangent vector ``(a, b, i, j, a', b', f)`` by
concatenating the components in that order, each row-major.  Gauge
coordinates flatten ``(h, h')`` the same way, ``h`` first.  Relation
coordinates follow the five components of ``d1`` in order.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Sequence

from .numkernel import Matrix, nullspace, rref, solve
from .numkernel.linalg import InconsistentSystemError
from .numkernel.scalar import zero
from .rep import DimVector, EnhancedRep, require_stable_point

log = logging.getLogger(__name__)

TANGENT_SLOTS = ("a", "b", "i", "j", "ap", "bp", "f")


class NotInImageError(InconsistentSystemError):
    """The vector is not an infinitesimal gauge transformation."""


def slot_shapes(dims: DimVector) -> dict[str, tuple[int, int]]:
    r, c, cp = dims
    return {"a": (c, c), "b": (c, c), "i": (c, r), "j": (r, c),
            "ap": (cp, cp), "bp": (cp, cp), "f": (c, cp)}


def ambient_length(dims: DimVector) -> int:
    r, c, cp = dims
    return 2 * c * c + 2 * r * c + 2 * cp * cp + c * cp


def relation_length(dims: DimVector) -> int:
    r, c, cp = dims
    return c * c + 2 * c * cp + r * cp + cp * cp


@dataclass(frozen=True)
class TangentVector:
    a: Matrix
    b: Matrix
    i: Matrix
    j: Matrix
    ap: Matrix
    bp: Matrix
    f: Matrix

    @property
    def dims(self) -> DimVector:
        return DimVector(self.i.cols, self.a.rows, self.ap.rows)

    @property
    def field(self) -> str:
        return self.a.field

    def components(self) -> tuple[Matrix, ...]:
        return tuple(getattr(self, s) for s in TANGENT_SLOTS)

    def _map(self, fn, other=None) -> TangentVector:
        if other is None:
            return TangentVector(*(fn(m) for m in self.components()))
        return TangentVector(*(fn(m, n) for m, n in zip(self.components(), other.components())))

    def __add__(self, other: TangentVector) -> TangentVector:
        return self._map(lambda m, n: m + n, other)

    def __sub__(self, other: TangentVector) -> TangentVector:
        return self._map(lambda m, n: m - n, other)

    def __neg__(self) -> TangentVector:
        return self._map(lambda m: -m)

    def scale(self, s) -> TangentVector:
        return self._map(lambda m: m.scale(s))

    def replace(self, **kw) -> TangentVector:
        return dataclasses.replace(self, **kw)

    def flatten(self) -> tuple:
        out = []
        for m in self.components():
            out.extend(m.entries)
        return tuple(out)

    @classmethod
    def zero(cls, dims, field) -> TangentVector:
        return cls(*(Matrix.zeros(r, c, field) for r, c in slot_shapes(DimVector(*dims)).values()))

    @classmethod
    def from_coords(cls, dims, coords: Sequence, field) -> TangentVector:
        dims = DimVector(*dims)
        if len(coords) != ambient_length(dims):
            raise ValueError(f"expected {ambient_length(dims)} coordinates, got {len(coords)}")
        parts, k = [], 0
        for rows, cols in slot_shapes(dims).values():
            parts.append(Matrix(rows, cols, coords[k:k + rows * cols], field))
            k += rows * cols
        return cls(*parts)


def as_tangent(x: EnhancedRep, u) -> TangentVector:
    if isinstance(u, TangentVector):
        return u
    return TangentVector.from_coords(x.dims, u, x.field)


def d0(x: EnhancedRep, h: Matrix, hp: Matrix) -> TangentVector:
    """Infinitesimal gauge action ``(h, h')`` at ``x``."""
    return TangentVector(
        a=h.commutator(x.A),
        b=h.commutator(x.B),
        i=h @ x.I,
        j=-(x.J @ h),
        ap=hp.commutator(x.Ap),
        bp=hp.commutator(x.Bp),
        f=h @ x.F - x.F @ hp,
    )


def d1(x: EnhancedRep, u: TangentVector) -> tuple[Matrix, ...]:
    """Linearized relations at ``x``, in the order of the five equations."""
    A, B, I, J, Ap, Bp, F = x.A, x.B, x.I, x.J, x.Ap, x.Bp, x.F
    a, b, i, j, ap, bp, f = u.components()
    return (
        a.commutator(B) + A.commutator(b) + I @ j + i @ J,
        A @ f + a @ F - F @ ap - f @ Ap,
        B @ f + b @ F - F @ bp - f @ Bp,
        j @ F + J @ f,
        ap.commutator(Bp) + Ap.commutator(bp),
    )


def _flat(ms) -> list:
    out = []
    for m in ms:
        out.extend(m.entries)
    return out


def d0_matrix(x: EnhancedRep) -> Matrix:
    """Matrix of d0 in gauge/ambient coordinates, shape ``ambient x (c^2 + cp^2)``."""
    _, c, cp = x.dims
    field = x.field
    cols = []
    zc, zcp = Matrix.zeros(c, c, field), Matrix.zeros(cp, cp, field)
    for k in range(c * c):
        cols.append(d0(x, Matrix.unit(c, c, k // c, k % c, field), zcp).flatten())
    for k in range(cp * cp):
        cols.append(d0(x, zc, Matrix.unit(cp, cp, k // cp, k % cp, field)).flatten())
    return Matrix.from_columns(cols, ambient_length(x.dims), field)


def d1_matrix(x: EnhancedRep) -> Matrix:
    """Matrix of d1, shape ``(c^2 + 2 c cp + r cp + cp^2) x ambient``."""
    n = ambient_length(x.dims)
    z = zero(x.field)
    cols = []
    for k in range(n):
        e = [z] * n
        e[k] = 1
        cols.append(_flat(d1(x, TangentVector.from_coords(x.dims, e, x.field))))
    return Matrix.from_columns(cols, relation_length(x.dims), x.field)


@dataclass(frozen=True)
class DeformationComplex:
    base: EnhancedRep
    D0: Matrix
    D1: Matrix
    ker_d1: tuple
    im_d0: tuple
    quotient: tuple

    @property
    def tangent_dim(self) -> int:
        return len(self.quotient)

    @property
    def dim_ker_d1(self) -> int:
        return len(self.ker_d1)

    @property
    def dim_im_d0(self) -> int:
        return len(self.im_d0)

    def quotient_vectors(self) -> list[TangentVector]:
        return [TangentVector.from_coords(self.base.dims, v, self.base.field)
                for v in self.quotient]

    def combine(self, coeffs: Sequence) -> tuple:
        """Ambient coordinates of ``sum coeffs[k] * quotient[k]``."""
        n = ambient_length(self.base.dims)
        acc = [zero(self.base.field)] * n
        for c, v in zip(coeffs, self.quotient, strict=True):
            if c:
                acc = [s + c * t for s, t in zip(acc, v)]
        return tuple(acc)


def tangent_basis(x: EnhancedRep) -> DeformationComplex:
    """Bases of ker d1, im d0 and representatives of the quotient.

    Quotient representatives are the kernel vectors whose columns carry a
    pivot in the RREF of ``[im d0 | ker d1]``.
    """
    require_stable_point(x)
    D0, D1 = d0_matrix(x), d1_matrix(x)
    if not (D1 @ D0).is_zero():
        log.warning("d1 . d0 != 0 at %s; base point is inconsistent", x.digest())
    ker = nullspace(D1)
    _, piv0, _ = rref(D0)
    im = [D0.col(j) for j in piv0]
    n = ambient_length(x.dims)
    if ker:
        _, piv, _ = rref(Matrix.from_columns(im + ker, n, x.field))
        quotient = [ker[p - len(im)] for p in piv if p >= len(im)]
    else:
        quotient = []
    return DeformationComplex(x, D0, D1, tuple(ker), tuple(im), tuple(quotient))


def preimage_d0(x: EnhancedRep, u, D0: Matrix | None = None) -> tuple[Matrix, Matrix]:
    """Some ``(h, h')`` with ``d0(h, h') = u``; raises :class:`NotInImageError`."""
    _, c, cp = x.dims
    coords = u.flatten() if isinstance(u, TangentVector) else tuple(u)
    D0 = d0_matrix(x) if D0 is None else D0
    try:
        sol = solve(D0, coords)
    except InconsistentSystemError:
        raise NotInImageError("vector is not in the image of d0") from None
    return (Matrix(c, c, sol[:c * c], x.field), Matrix(cp, cp, sol[c * c:], x.field))
