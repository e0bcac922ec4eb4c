"""Deciding and certifying extra translation invariance.

Given a subspace generated by translates along a subgroup H, and a larger
subgroup M, the dual group splits into blocks indexed by a section of
H*/M*: block sigma is the M*-periodization of (section + sigma).  The
subspace is M-invariant exactly when cutting every generator's spectrum to
each block lands back inside the subspace, equivalently when the fiber
Gramian rank splits as the sum of the per-block ranks.  Both criteria are
implemented, along with the invariance set (all translations that preserve
the subspace), transfer functions for principal spaces, spectral support
bounds, and a constructor for subspaces that are invariant under a chosen
M and nothing larger.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .fibering import (
    DEFAULT_TOL,
    FiberContext,
    dim_function,
    extend_over_cosets,
    fiber_membership,
    fiberize,
    make_fiber_context,
)
from .groups import (
    Element,
    Group,
    Subgroup,
    Transversal,
    annihilator,
    character,
    subgroup_from_elements,
    transversal,
)
from .spectral import Signal, Spectrum, dft, idft, indicator_spectrum, translate


class InconsistencyError(RuntimeError):
    """A certified postcondition failed; usually a tolerance misconfiguration."""


@dataclass(frozen=True, eq=False)
class InvarianceContext:
    """Fiber context for H refined by a candidate invariance subgroup M."""

    base: FiberContext
    M: Subgroup
    mstar: Subgroup
    sigma_section: Transversal
    blocks: dict[Element, frozenset[Element]]
    refined_section: Transversal

    @cached_property
    def block_masks(self) -> dict[Element, np.ndarray]:
        """0/1 spectral mask per block, indexed like spectra."""
        group = self.base.group
        masks = {}
        for sigma, block in self.blocks.items():
            mask = np.zeros(group.order, dtype=np.complex128)
            for gamma in block:
                mask[group.index(gamma)] = 1.0
            masks[sigma] = mask
        return masks


@dataclass(frozen=True)
class OmegaRanks:
    """Rank certificate at one section rep: total and per-block Gramian ranks."""

    omega: Element
    rank_total: int
    sigma_ranks: dict[Element, int]


@dataclass(frozen=True)
class MembershipFailure:
    generator: int
    sigma: Element
    omega: Element
    residual: float


@dataclass(frozen=True)
class InvarianceReport:
    verdict: bool
    per_omega: tuple[OmegaRanks, ...]
    failures: tuple[MembershipFailure, ...]
    invariance_set: Subgroup | None = None


@dataclass(frozen=True)
class SupportReport:
    """Spectral support accounting against the rank-weighted section bound.

    e_sizes[j] counts section reps where the local dimension is j, so the
    sizes sum to the section length; support_sizes[i] counts generator i's
    spectral support inside the refined section.  For an M-invariant space
    each support size is at most sum_j j*e_sizes[j], which is at most
    section length times the number of generators; breaches land in
    `violations` and falsify M-invariance.
    """

    e_sizes: tuple[int, ...]
    support_sizes: tuple[int, ...]
    rank_weighted_size: int
    section_bound: int
    violations: tuple[str, ...]
    wiener_set: tuple[Element, ...] | None


class TransferFunction(NamedTuple):
    eta: dict[Element, complex]
    residual: float


def refine_context(base: FiberContext, M: Subgroup) -> InvarianceContext:
    """Split the dual into M*-periodic blocks indexed by a section of K*/M*.

    Requires the base translation subgroup to be contained in M.  The block
    family is verified to partition the dual group; failure is an internal
    error.
    """
    group = base.group
    if M.parent != group:
        raise ValueError("M belongs to a different group")
    if not base.K.member_set <= M.member_set:
        raise ValueError("M does not contain the base translation subgroup")
    mstar = annihilator(group, M)
    sigma_section = transversal(group, mstar, within=base.kstar)
    blocks: dict[Element, frozenset[Element]] = {}
    for sigma in sigma_section.reps:
        block = frozenset(
            group.add(group.add(omega, sigma), m)
            for omega in base.section.reps
            for m in mstar.elements
        )
        blocks[sigma] = block
    total = sum(len(b) for b in blocks.values())
    combined: set[Element] = set().union(*blocks.values()) if blocks else set()
    if total != group.order or len(combined) != group.order:
        raise InconsistencyError("block family does not partition the dual group")
    refined_section = transversal(group, mstar)
    return InvarianceContext(
        base=base,
        M=M,
        mstar=mstar,
        sigma_section=sigma_section,
        blocks=blocks,
        refined_section=refined_section,
    )


def cutoff(ictx: InvarianceContext, f: Signal, sigma: Element) -> Signal:
    """Mask the spectrum of f to block sigma and transform back."""
    sigma = ictx.base.group.element(sigma)
    if sigma not in ictx.blocks:
        raise ValueError(f"{sigma} is not a block representative")
    masked = dft(f).values * ictx.block_masks[sigma]
    return idft(Spectrum(ictx.base.group, masked))


def _rank_table(
    ictx: InvarianceContext, family: Sequence[Signal], tol_rel: float
) -> tuple[OmegaRanks, ...]:
    base = ictx.base
    dims_total = dim_function(base, family, tol_rel)
    dims_sigma = {
        sigma: dim_function(base, [cutoff(ictx, f, sigma) for f in family], tol_rel)
        for sigma in ictx.sigma_section.reps
    }
    lines = []
    for omega in base.section.reps:
        lines.append(
            OmegaRanks(
                omega=omega,
                rank_total=dims_total[omega],
                sigma_ranks={
                    sigma: dims_sigma[sigma][omega]
                    for sigma in ictx.sigma_section.reps
                },
            )
        )
    return tuple(lines)


def is_invariant_rank(
    ictx: InvarianceContext, family: Sequence[Signal], tol_rel: float = DEFAULT_TOL
) -> InvarianceReport:
    """M-invariance via the rank identity: total rank = sum of block ranks per rep."""
    per_omega = _rank_table(ictx, family, tol_rel)
    verdict = all(
        line.rank_total == sum(line.sigma_ranks.values()) for line in per_omega
    )
    return InvarianceReport(verdict=verdict, per_omega=per_omega, failures=())


def is_invariant_subspace(
    ictx: InvarianceContext, family: Sequence[Signal], tol_rel: float = DEFAULT_TOL
) -> InvarianceReport:
    """M-invariance via containment: every block cutoff of every generator
    must pass the per-fiber membership test against the family.

    Agrees with `is_invariant_rank` on every input; the test suite enforces
    this equivalence against a brute-force oracle as well.
    """
    failures: list[MembershipFailure] = []
    for gi, f in enumerate(family):
        for sigma in ictx.sigma_section.reps:
            piece = cutoff(ictx, f, sigma)
            check = fiber_membership(ictx.base, family, piece, tol_rel)
            if not check.contained:
                for omega, res in check.residuals.items():
                    if res > tol_rel:
                        failures.append(
                            MembershipFailure(
                                generator=gi, sigma=sigma, omega=omega, residual=res
                            )
                        )
    per_omega = _rank_table(ictx, family, tol_rel)
    return InvarianceReport(
        verdict=not failures, per_omega=per_omega, failures=tuple(failures)
    )


def invariance_set(
    base: FiberContext, family: Sequence[Signal], tol_rel: float = DEFAULT_TOL
) -> Subgroup:
    """All group elements whose translation keeps every generator in the space.

    The result is guaranteed to be a subgroup containing the base
    translations; if the accepted element set fails closure the tolerance
    is misconfigured and an InconsistencyError is raised.
    """
    group = base.group
    members = [
        x
        for x in group.elements()
        if all(
            fiber_membership(base, family, translate(f, x), tol_rel).contained
            for f in family
        )
    ]
    try:
        sub = subgroup_from_elements(group, members)
    except ValueError as exc:
        raise InconsistencyError(
            f"accepted translations are not closed under addition: {exc}"
        ) from exc
    if not base.K.member_set <= sub.member_set:
        raise InconsistencyError("invariance set does not contain the base subgroup")
    return sub


def transfer_function(
    mctx: FiberContext, f: Signal, g: Signal, tol_rel: float = DEFAULT_TOL
) -> TransferFunction:
    """Best periodic multiplier carrying f to g fiber by fiber.

    eta is defined on the section of the context's translation subgroup M
    (zero where the fiber of f vanishes) and extends M*-periodically; the
    residual is the weighted spectral norm of g_hat - eta * f_hat, and is
    small exactly when g lies in the M-translation span of f.
    """
    tf = fiberize(mctx, f).matrix
    tg = fiberize(mctx, g).matrix
    norms = np.linalg.norm(tf, axis=1)
    scale = float(np.max(norms, initial=0.0))
    eta_values = np.zeros(len(mctx.section.reps), dtype=np.complex128)
    if scale > 0.0:
        live = norms > tol_rel * scale
        inner = np.sum(tg * np.conj(tf), axis=1)
        eta_values[live] = inner[live] / (norms[live] ** 2)
    eta_ext = extend_over_cosets(mctx, eta_values)
    diff = dft(g).values - eta_ext * dft(f).values
    residual = float(np.sqrt(np.sum(np.abs(diff) ** 2) / mctx.group.order))
    eta = {rep: complex(v) for rep, v in zip(mctx.section.reps, eta_values)}
    return TransferFunction(eta=eta, residual=residual)


def periodized_character(
    ictx: InvarianceContext, m: Element, sigma: Element
) -> np.ndarray:
    """The K*-periodic function equal to (m, .) on block sigma.

    Values are laid out over the whole dual group in lex order.  Periodicity
    is exact by construction; agreement with the character on the block
    holds because m pairs trivially with the block's M* translates.
    """
    group = ictx.base.group
    m = group.element(m)
    if m not in ictx.M.member_set:
        raise ValueError(f"{m} is not in the invariance subgroup")
    sigma = group.element(sigma)
    if sigma not in ictx.blocks:
        raise ValueError(f"{sigma} is not a block representative")
    values_on_reps = np.array(
        [
            character(group, m, group.add(omega, sigma))
            for omega in ictx.base.section.reps
        ],
        dtype=np.complex128,
    )
    return extend_over_cosets(ictx.base, values_on_reps)


def construct_exactly_invariant(group: Group, H: Subgroup, M: Subgroup) -> Signal:
    """Generator whose H-translation span is invariant under M and nothing more.

    The spectrum is the indicator of the block at the zero representative;
    the resulting principal space has invariance set exactly M.
    """
    base = make_fiber_context(group, H)
    ictx = refine_context(base, M)
    block0 = ictx.blocks[group.zero]
    return idft(indicator_spectrum(group, block0))


def support_report(
    ictx: InvarianceContext, family: Sequence[Signal], tol_rel: float = DEFAULT_TOL
) -> SupportReport:
    """Support accounting; a theorem check when the invariance verdict is true."""
    base = ictx.base
    dims = dim_function(base, family, tol_rel)
    ell = len(family)
    e_sizes = [0] * (ell + 1)
    for d in dims.values():
        e_sizes[d] += 1
    rank_weighted = sum(j * c for j, c in enumerate(e_sizes))
    section_bound = len(base.section.reps) * ell
    section_set = set(ictx.refined_section.reps)
    group = base.group
    support_sizes = []
    supports = []
    for f in family:
        spec = dft(f).values
        peak = float(np.max(np.abs(spec), initial=0.0))
        supp = {
            group.element_at(i)
            for i, v in enumerate(spec)
            if peak > 0.0 and abs(v) > tol_rel * peak
        }
        supports.append(supp)
        support_sizes.append(len(supp & section_set))
    violations = []
    for i, s in enumerate(support_sizes):
        if s > rank_weighted:
            violations.append(
                f"generator {i}: section support {s} exceeds rank-weighted size "
                f"{rank_weighted}"
            )
    if rank_weighted > section_bound:
        violations.append(
            f"rank-weighted size {rank_weighted} exceeds section bound {section_bound}"
        )
    wiener = None
    if ictx.M.order == group.order:
        wiener = tuple(sorted(set().union(*supports))) if supports else ()
    return SupportReport(
        e_sizes=tuple(e_sizes),
        support_sizes=tuple(support_sizes),
        rank_weighted_size=rank_weighted,
        section_bound=section_bound,
        violations=tuple(violations),
        wiener_set=wiener,
    )
