"""Enhanced ADHM representations ``X = (A, B, I, J, A', B', F)``.

Spaces: ``W`` (dim r), ``V`` (dim c), ``V'`` (dim cp).  ``A, B`` act on ``V``,
``A', B'`` on ``V'``, ``I: W -> V``, ``J: V -> W`` and ``F: V' -> V``.  The
relations are

    [A, B] + IJ = 0,  JF = 0,  [A', B'] = 0,  AF - FA' = 0,  BF - FB' = 0.

The extra arrow ``V -> V'`` of the full quiver is not stored; it is always zero.
"""

from __future__ import annotations

import dataclasses
import hashlib
import random
from dataclasses import dataclass
from typing import NamedTuple

from .numkernel import EXACT, Matrix, rank, rref
from .numkernel.linalg import FLOAT_RANK_RTOL, SingularMatrixError, inverse

MAX_GENERIC_C = 8
SAMPLER_MAX_REJECTIONS = 1000
SAMPLER_RANGE = 5
BASIS_CHANGE_RANGE = 3


class OffVarietyError(ValueError):
    """The representation does not satisfy the enhanced ADHM equations."""


class UnstableError(ValueError):
    """The representation violates (S.1) or (S.2)."""


class DimVector(NamedTuple):
    r: int
    c: int
    cp: int

    def validate(self):
        if self.r < 1 or self.c < 1 or self.cp < 0:
            raise ValueError(f"invalid dimension vector {tuple(self)}")
        return self


CLASSIFICATION_DIMS = DimVector(1, 3, 1)


@dataclass(frozen=True)
class EnhancedRep:
    A: Matrix
    B: Matrix
    I: Matrix
    J: Matrix
    Ap: Matrix
    Bp: Matrix
    F: Matrix

    def __post_init__(self):
        c = self.A.rows
        r = self.I.cols
        cp = self.Ap.rows
        expected = {
            "A": (c, c), "B": (c, c), "I": (c, r), "J": (r, c),
            "Ap": (cp, cp), "Bp": (cp, cp), "F": (c, cp),
        }
        for name, shape in expected.items():
            m = getattr(self, name)
            if not isinstance(m, Matrix):
                raise TypeError(f"{name} must be a Matrix")
            if m.shape != shape:
                raise ValueError(f"{name} has shape {m.shape}, expected {shape}")
            if m.field != self.A.field:
                raise ValueError(f"{name} is {m.field}, A is {self.A.field}")
        DimVector(r, c, cp).validate()

    @property
    def dims(self) -> DimVector:
        return DimVector(self.I.cols, self.A.rows, self.Ap.rows)

    @property
    def field(self) -> str:
        return self.A.field

    def matrices(self) -> dict[str, Matrix]:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    def replace(self, **changes) -> EnhancedRep:
        return dataclasses.replace(self, **changes)

    def to_field(self, field: str) -> EnhancedRep:
        return EnhancedRep(**{k: m.to_field(field) for k, m in self.matrices().items()})

    def mirrored(self) -> EnhancedRep:
        """Swap the roles of (A, A') and (B, B')."""
        return self.replace(A=self.B, B=self.A, Ap=self.Bp, Bp=self.Ap)

    def digest(self) -> str:
        h = hashlib.sha256(self.field.encode())
        for name, m in self.matrices().items():
            h.update(f"|{name}:{m.rows}x{m.cols}:".encode())
            h.update(",".join(str(x) for x in m.entries).encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class ResidualSet:
    R1: Matrix  # [A,B] + IJ
    R2: Matrix  # JF
    R3: Matrix  # [A',B']
    R4: Matrix  # AF - FA'
    R5: Matrix  # BF - FB'

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in dataclasses.fields(self)]

    def nonzero(self, tol: float = 0.0) -> list[str]:
        if tol == 0.0:
            return [name for name, m in self.items() if not m.is_zero()]
        return [name for name, m in self.items() if m.max_abs() > tol]

    def vanishes(self, tol: float = 0.0) -> bool:
        return not self.nonzero(tol)

    def max_abs(self) -> dict[str, float]:
        return {name: m.max_abs() for name, m in self.items()}


def residuals(x: EnhancedRep) -> ResidualSet:
    A, B, I, J, Ap, Bp, F = x.A, x.B, x.I, x.J, x.Ap, x.Bp, x.F
    return ResidualSet(
        R1=A.commutator(B) + I @ J,
        R2=J @ F,
        R3=Ap.commutator(Bp),
        R4=A @ F - F @ Ap,
        R5=B @ F - F @ Bp,
    )


def data_scale(x: EnhancedRep) -> float:
    return max([m.max_abs() for m in x.matrices().values()] + [1.0])


def on_variety(x: EnhancedRep) -> bool:
    """All five relations vanish (exactly, or to rank tolerance for floats)."""
    tol = 0.0 if x.field == EXACT else FLOAT_RANK_RTOL * data_scale(x) ** 2
    return residuals(x).vanishes(tol)


def is_injective_F(x: EnhancedRep) -> bool:
    return rank(x.F) == x.dims.cp


def krylov_closure(A: Matrix, B: Matrix, I: Matrix) -> tuple[int, int]:
    """Dimension of the smallest (A, B)-invariant subspace containing im I.

    Breadth-first: ``S <- S + AS + BS`` starting from ``S = im I``.  Returns
    ``(dimension, iterations)``; the loop stops once the dimension is stable,
    which takes at most ``c`` rounds.
    """
    c = A.rows
    span = I
    _, piv, dim = rref(span)
    basis = Matrix.from_columns([span.col(j) for j in piv], c, A.field) if dim else None
    iterations = 0
    while basis is not None and dim < c:
        iterations += 1
        grown = Matrix.hstack(basis, A @ basis, B @ basis)
        _, piv, new_dim = rref(grown)
        if new_dim == dim:
            break
        basis = Matrix.from_columns([grown.col(j) for j in piv], c, A.field)
        dim = new_dim
    return dim, iterations


def is_adhm_stable(A: Matrix, B: Matrix, I: Matrix) -> bool:
    """(S.2): no proper (A, B)-invariant subspace of V contains im I."""
    return krylov_closure(A, B, I)[0] == A.rows


@dataclass(frozen=True)
class StabilityReport:
    s1: bool
    s2: bool
    j_vanishes: bool | None  # only reported for r = 1

    @property
    def stable(self) -> bool:
        return self.s1 and self.s2

    def violations(self) -> list[str]:
        out = []
        if not self.s1:
            out.append("S.1 violated: F is not injective")
        if not self.s2:
            out.append("S.2 violated: im I generates a proper invariant subspace")
        return out


def stability_report(x: EnhancedRep) -> StabilityReport:
    j0 = x.J.is_zero() if x.dims.r == 1 else None
    if j0 is not None and x.field != EXACT:
        j0 = x.J.max_abs() <= FLOAT_RANK_RTOL * data_scale(x)
    return StabilityReport(is_injective_F(x), is_adhm_stable(x.A, x.B, x.I), j0)


def is_stable(x: EnhancedRep) -> bool:
    return stability_report(x).stable


def require_stable_point(x: EnhancedRep) -> None:
    """Raise unless ``x`` solves the equations and is stable."""
    bad = residuals(x).nonzero(0.0 if x.field == EXACT
                               else FLOAT_RANK_RTOL * data_scale(x) ** 2)
    if bad:
        raise OffVarietyError("enhanced ADHM equations fail: " + ", ".join(bad))
    problems = stability_report(x).violations()
    if problems:
        raise UnstableError("; ".join(problems))


def act(g: Matrix, gp: Matrix, x: EnhancedRep) -> EnhancedRep:
    """Change of basis ``(g, g')`` on ``(V, V')``; ``W`` stays fixed."""
    c, cp = x.dims.c, x.dims.cp
    if g.shape != (c, c) or gp.shape != (cp, cp):
        raise ValueError("basis change has the wrong shape")
    try:
        gi = inverse(g)
        gpi = inverse(gp) if cp else gp
    except SingularMatrixError:
        raise SingularMatrixError("basis change is not invertible") from None
    return EnhancedRep(
        A=g @ x.A @ gi,
        B=g @ x.B @ gi,
        I=g @ x.I,
        J=x.J @ gi,
        Ap=gp @ x.Ap @ gpi,
        Bp=gp @ x.Bp @ gpi,
        F=g @ x.F @ gpi,
    )


def random_invertible(n: int, rng: random.Random, field: str = EXACT,
                      bound: int = BASIS_CHANGE_RANGE) -> Matrix:
    while True:
        g = Matrix(n, n, [rng.randint(-bound, bound) for _ in range(n * n)], field)
        if rank(g) == n:
            return g


def random_basis_change(x: EnhancedRep, rng: random.Random) -> EnhancedRep:
    g = random_invertible(x.dims.c, rng, x.field)
    gp = random_invertible(x.dims.cp, rng, x.field)
    return act(g, gp, x)


def sample_stable(dims, case: str, seed: int, *, random_basis: bool = False,
                  mirror: bool = False, field: str = EXACT) -> EnhancedRep:
    """Draw a stable solution in the requested normal form.

    ``case`` is one of ``"i", "ii1", "ii2", "ii3"``.  Free parameters are small
    integers; draws that fail stability are rejected.  ``random_basis``
    conjugates by a random integer basis change, ``mirror`` swaps A and B.
    """
    from . import normalform

    dims = DimVector(*dims).validate()
    kind = normalform.Case(case)
    if dims.r != 1 or dims.cp != 1 or dims.c > MAX_GENERIC_C:
        raise ValueError(f"sampler supports (1, c, 1) with c <= {MAX_GENERIC_C}, got {tuple(dims)}")
    if kind is not normalform.Case.I and dims != CLASSIFICATION_DIMS:
        raise ValueError(f"case {kind.value} is only defined for {tuple(CLASSIFICATION_DIMS)}")
    rng = random.Random(seed)
    for _ in range(SAMPLER_MAX_REJECTIONS):
        params = normalform.draw_params(kind, rng, dims.c)
        try:
            x = normalform.build_case(kind, params, field=field)
        except (UnstableError, normalform.ParameterError):
            continue
        break
    else:
        raise RuntimeError(f"sampler gave up after {SAMPLER_MAX_REJECTIONS} rejections")
    if mirror:
        x = x.mirrored()
    if random_basis:
        x = random_basis_change(x, rng)
    return x
