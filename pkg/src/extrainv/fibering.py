"""Fiberization over a translation subgroup: fibers, Gramians, ranks.

For a subgroup K of G, the spectrum of a signal is sliced into fibers: at
each representative w of the canonical dual section, the fiber is the
vector of spectral values on the coset w + K*.  Membership of a signal in
the subspace generated by K-translates of a family reduces to per-fiber
least squares, and the dimension of the local span is the rank of a small
Gramian.  All orderings (section reps, K* elements) are lexicographic, so
every matrix here is reproducible bit for bit.

Per-fiber quantities are independent of each other; the computations are
pure and safe to parallelize over fibers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import Element, Group, Subgroup, Transversal, annihilator, transversal
from .spectral import Signal, dft

DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FiberContext:
    """Precomputed slicing data for fibers over a translation subgroup K."""

    group: Group
    K: Subgroup
    kstar: Subgroup
    section: Transversal
    kstar_order: tuple[Element, ...]

    @cached_property
    def fiber_index(self) -> np.ndarray:
        """Lex index of w + k* for each (section rep, K* element)."""
        group = self.group
        idx = np.empty((len(self.section.reps), len(self.kstar_order)), dtype=np.intp)
        for i, w in enumerate(self.section.reps):
            for j, k in enumerate(self.kstar_order):
                idx[i, j] = group.index(group.add(w, k))
        return idx

    @cached_property
    def rep_position(self) -> np.ndarray:
        """For each dual element (by lex index), position of its coset rep."""
        pos = np.empty(self.group.order, dtype=np.intp)
        for i in range(len(self.section.reps)):
            pos[self.fiber_index[i]] = i
        return pos

    def rep_of(self, gamma: Element) -> Element:
        """Canonical section representative of gamma's K* coset."""
        return self.section.reps[self.rep_position[self.group.index(gamma)]]


@dataclass(frozen=True, eq=False)
class FiberMatrix:
    """All fibers of one signal: row i is the fiber at section rep i."""

    context: FiberContext
    matrix: np.ndarray

    def fiber(self, omega: Element) -> np.ndarray:
        reps = self.context.section.reps
        return self.matrix[reps.index(omega)]


@dataclass(frozen=True, eq=False)
class Gramian:
    """Hermitian PSD matrix of pairwise fiber inner products at one rep."""

    context: FiberContext
    omega: Element
    matrix: np.ndarray


def make_fiber_context(group: Group, sub: Subgroup) -> FiberContext:
    """Fiber slicing for translations by `sub`: annihilator plus canonical section."""
    kstar = annihilator(group, sub)
    section = transversal(group, kstar)
    return FiberContext(
        group=group,
        K=sub,
        kstar=kstar,
        section=section,
        kstar_order=kstar.elements,
    )


def spectrum_fibers(ctx: FiberContext, spectral_values: np.ndarray) -> np.ndarray:
    """Slice a raw spectrum vector into the (|section| x |K*|) fiber array."""
    return np.asarray(spectral_values, dtype=np.complex128)[ctx.fiber_index]


def fiberize(ctx: FiberContext, f: Signal) -> FiberMatrix:
    """Fibers of f; satisfies ||fibers||^2 = ||f||^2 / |G| in the weighted norm."""
    if f.group != ctx.group:
        raise ValueError("signal group does not match context group")
    return FiberMatrix(context=ctx, matrix=spectrum_fibers(ctx, dft(f).values))


def fiber_norm_sq(fm: FiberMatrix) -> float:
    """Squared norm of the fibered signal, weight 1/|G| on both section and K*."""
    n = fm.context.group.order
    return float(np.sum(np.abs(fm.matrix) ** 2) / (n * n))


def extend_over_cosets(ctx: FiberContext, values_on_reps: np.ndarray) -> np.ndarray:
    """K*-periodic extension: one value per section rep, spread to all of the dual."""
    values_on_reps = np.asarray(values_on_reps, dtype=np.complex128)
    if values_on_reps.shape != (len(ctx.section.reps),):
        raise ValueError("need exactly one value per section representative")
    return values_on_reps[ctx.rep_position]


def _generator_fibers(ctx: FiberContext, family: Sequence[Signal]) -> np.ndarray:
    """Array of shape (len(family), |section|, |K*|)."""
    return np.stack([fiberize(ctx, f).matrix for f in family])


def gramian(ctx: FiberContext, family: Sequence[Signal], omega: Element) -> Gramian:
    """Pairwise fiber inner products at omega, scaled by 1/|G|."""
    if len(family) == 0:
        raise ValueError("need at least one generator")
    omega = ctx.group.element(omega)
    if omega not in ctx.section.reps:
        raise ValueError(f"{omega} is not a section representative")
    i = ctx.section.reps.index(omega)
    rows = _generator_fibers(ctx, family)[:, i, :]
    mat = rows @ rows.conj().T / ctx.group.order
    return Gramian(context=ctx, omega=omega, matrix=mat)


def numerical_rank(mat: np.ndarray, tol_rel: float = DEFAULT_TOL) -> int:
    """Count singular values above tol_rel times the largest one."""
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.size == 0:
        return 0
    svals = np.linalg.svd(mat, compute_uv=False)
    smax = svals[0]
    if smax == 0.0:
        return 0
    return int(np.sum(svals > tol_rel * smax))


def dim_function(
    ctx: FiberContext, family: Sequence[Signal], tol_rel: float = DEFAULT_TOL
) -> dict[Element, int]:
    """Local span dimension (Gramian rank) at each section representative."""
    if len(family) == 0:
        return {omega: 0 for omega in ctx.section.reps}
    fibers = _generator_fibers(ctx, family)
    dims: dict[Element, int] = {}
    for i, omega in enumerate(ctx.section.reps):
        rows = fibers[:, i, :]
        mat = rows @ rows.conj().T / ctx.group.order
        dims[omega] = numerical_rank(mat, tol_rel)
    return dims


@dataclass(frozen=True)
class MembershipCheck:
    """Per-fiber least-squares verdict with relative residuals."""

    contained: bool
    residuals: dict[Element, float]


def fiber_membership(
    ctx: FiberContext,
    family: Sequence[Signal],
    g: Signal,
    tol_rel: float = DEFAULT_TOL,
) -> MembershipCheck:
    """Does every fiber of g lie in the span of the family's fibers?

    Residuals are relative to the fiber norm of g; fibers that vanish
    relative to g's largest fiber pass trivially.  The zero signal is a
    member of everything.
    """
    fam_fibers = _generator_fibers(ctx, family) if len(family) else None
    g_fibers = fiberize(ctx, g).matrix
    scale = float(np.max(np.linalg.norm(g_fibers, axis=1), initial=0.0))
    residuals: dict[Element, float] = {}
    contained = True
    for i, omega in enumerate(ctx.section.reps):
        b = g_fibers[i]
        bnorm = float(np.linalg.norm(b))
        if scale == 0.0 or bnorm <= tol_rel * scale:
            residuals[omega] = 0.0
            continue
        if fam_fibers is None:
            residuals[omega] = 1.0
            contained = False
            continue
        a = fam_fibers[:, i, :].T
        coef, *_ = np.linalg.lstsq(a, b, rcond=None)
        rel = float(np.linalg.norm(a @ coef - b)) / bnorm
        residuals[omega] = rel
        if rel > tol_rel:
            contained = False
    return MembershipCheck(contained=contained, residuals=residuals)
