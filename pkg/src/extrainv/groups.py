"""Finite abelian groups as products of cyclic factors.

A group is a tuple of moduli (N_1, ..., N_k) representing Z_{N_1} x ... x
Z_{N_k}; elements are tuples of reduced coordinates.  The group doubles as
its own dual via the standard pairing, which makes annihilators exact
integer computations.  Everything is fully enumerated: these are desk-scale
groups, not a general-purpose subgroup-lattice engine.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

Element = tuple[int, ...]


@dataclass(frozen=True)
class Group:
    """Product of cyclic groups Z_{N_1} x ... x Z_{N_k}."""

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "moduli", tuple(int(n) for n in self.moduli))
        if len(self.moduli) == 0:
            raise ValueError("group needs at least one cyclic factor")
        if any(n <= 0 for n in self.moduli):
            raise ValueError(f"moduli must be positive, got {self.moduli}")

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def zero(self) -> Element:
        return (0,) * len(self.moduli)

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for n in reversed(self.moduli):
            strides.append(acc)
            acc *= n
        return tuple(reversed(strides))

    @cached_property
    def exponent_scale(self) -> int:
        """lcm of the moduli; pairing exponents live in Z_scale."""
        return math.lcm(*self.moduli)

    def element(self, coords) -> Element:
        """Validate length and reduce coordinates mod the moduli."""
        coords = tuple(int(c) for c in coords)
        if len(coords) != len(self.moduli):
            raise ValueError(
                f"element {coords} has {len(coords)} coordinates, "
                f"group has {len(self.moduli)} factors"
            )
        return tuple(c % n for c, n in zip(coords, self.moduli))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.moduli))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % n for a, n in zip(x, self.moduli))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % n for a, b, n in zip(x, y, self.moduli))

    def elements(self) -> tuple[Element, ...]:
        """All elements in lexicographic order."""
        return self._element_list

    @cached_property
    def _element_list(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.moduli)))

    def index(self, x: Element) -> int:
        """Position of x in the lexicographic enumeration (mixed radix)."""
        return sum(c * s for c, s in zip(x, self._strides))

    def element_at(self, idx: int) -> Element:
        return self._element_list[idx]


def make_group(moduli) -> Group:
    """Build Z_{N_1} x ... x Z_{N_k} from a list of positive moduli."""
    return Group(tuple(moduli))


def pairing_exponent(group: Group, x: Element, gamma: Element) -> int:
    """Integer e with (x, gamma) = exp(2*pi*i*e/L), L = lcm of the moduli.

    Exact arithmetic: membership tests against the pairing never touch
    floating point.
    """
    scale = group.exponent_scale
    total = 0
    for a, b, n in zip(x, gamma, group.moduli):
        total += a * b * (scale // n)
    return total % scale


def character(group: Group, x: Element, gamma: Element) -> complex:
    """Value of the character gamma at x under the standard pairing."""
    import cmath

    e = pairing_exponent(group, x, gamma)
    return cmath.exp(2j * cmath.pi * e / group.exponent_scale)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """Fully enumerated subgroup, with the generators it was built from."""

    parent: Group
    generators: tuple[Element, ...]
    elements: tuple[Element, ...]

    @cached_property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> int:
        return self.parent.order // self.order

    @cached_property
    def member_set(self) -> frozenset[Element]:
        return frozenset(self.elements)

    def __contains__(self, x: Element) -> bool:
        return x in self.member_set

    def __le__(self, other: "Subgroup") -> bool:
        return self.member_set <= other.member_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent == other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.parent.moduli, self.elements))

    def __repr__(self) -> str:
        return f"Subgroup({list(self.elements)!r} of Z{list(self.parent.moduli)!r})"


def _close_under_addition(group: Group, gens: tuple[Element, ...]) -> tuple[Element, ...]:
    # Additive closure of {0} + gens; in a finite group this already
    # contains all negatives.
    members = {group.zero}
    frontier = [group.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.add(x, g)
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(members))


def generating_set(group: Group, elements) -> tuple[Element, ...]:
    """Greedy small generating set for a set of elements known to be a subgroup."""
    gens: list[Element] = []
    current = frozenset((group.zero,))
    for e in sorted(set(elements)):
        if e not in current:
            gens.append(e)
            current = frozenset(_close_under_addition(group, tuple(gens)))
    return tuple(gens)


def subgroup_closure(group: Group, gens) -> Subgroup:
    """Smallest subgroup containing the given elements."""
    gens = tuple(group.element(g) for g in gens)
    elements = _close_under_addition(group, gens)
    return Subgroup(parent=group, generators=gens, elements=elements)


def subgroup_from_elements(group: Group, elements) -> Subgroup:
    """Wrap an element set that is already a subgroup, with tidy generators.

    Raises ValueError if the set is not closed (callers use this to surface
    tolerance inconsistencies).
    """
    elems = tuple(sorted(set(group.element(e) for e in elements)))
    gens = generating_set(group, elems)
    closed = _close_under_addition(group, gens)
    if closed != elems:
        raise ValueError(
            f"element set of size {len(elems)} is not a subgroup "
            f"(closure has {len(closed)} elements)"
        )
    return Subgroup(parent=group, generators=gens, elements=elems)


def trivial_subgroup(group: Group) -> Subgroup:
    return Subgroup(parent=group, generators=(), elements=(group.zero,))


def full_subgroup(group: Group) -> Subgroup:
    gens = generating_set(group, group.elements())
    return Subgroup(parent=group, generators=gens, elements=group.elements())


def annihilator(group: Group, sub: Subgroup) -> Subgroup:
    """Characters that are identically 1 on the subgroup.

    |K| * |K*| = |G| and K** = K under the self-dual pairing; both are
    exercised by the test suite.
    """
    if sub.parent != group:
        raise ValueError("subgroup belongs to a different group")
    scale = group.exponent_scale
    gens = sub.generators if sub.generators else ()
    members = [
        gamma
        for gamma in group.elements()
        if all(pairing_exponent(group, k, gamma) % scale == 0 for k in gens)
    ]
    return Subgroup(
        parent=group,
        generators=generating_set(group, members),
        elements=tuple(members),
    )


@dataclass(frozen=True, eq=False)
class Transversal:
    """Canonical coset representatives: lexicographically minimal, sorted.

    `within` restricts the tiled set to a subgroup (used for sections of
    one subgroup modulo a smaller one); None means the whole group.
    """

    parent: Group
    subgroup: Subgroup
    reps: tuple[Element, ...]
    within: Subgroup | None = field(default=None)

    def __len__(self) -> int:
        return len(self.reps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Transversal):
            return NotImplemented
        return (
            self.parent == other.parent
            and self.subgroup == other.subgroup
            and self.reps == other.reps
        )

    def __hash__(self) -> int:
        return hash((self.parent.moduli, self.subgroup.elements, self.reps))


def transversal(group: Group, sub: Subgroup, within: Subgroup | None = None) -> Transversal:
    """Lex-minimal coset representatives of `sub` inside `within` (default: all of G)."""
    if sub.parent != group:
        raise ValueError("subgroup belongs to a different group")
    if within is not None and not sub.member_set <= within.member_set:
        raise ValueError("subgroup is not contained in the ambient subgroup")
    ambient = within.elements if within is not None else group.elements()
    covered: set[Element] = set()
    reps: list[Element] = []
    for e in ambient:
        if e not in covered:
            reps.append(e)
            covered.update(group.add(e, k) for k in sub.elements)
    return Transversal(parent=group, subgroup=sub, reps=tuple(reps), within=within)


def subgroups_between(group: Group, low: Subgroup) -> list[Subgroup]:
    """All subgroups M with low <= M <= G, sorted by (order, elements).

    Walks the interval lattice by repeatedly adjoining one element and
    closing; every intermediate subgroup is reached this way.
    """
    if low.parent != group:
        raise ValueError("subgroup belongs to a different group")
    seen: dict[tuple[Element, ...], Subgroup] = {low.elements: low}
    frontier = [low]
    while frontier:
        nxt = []
        for sub in frontier:
            for g in group.elements():
                if g in sub.member_set:
                    continue
                bigger = _close_under_addition(group, sub.generators + (g,))
                if bigger not in seen:
                    grown = Subgroup(
                        parent=group,
                        generators=generating_set(group, bigger),
                        elements=bigger,
                    )
                    seen[bigger] = grown
                    nxt.append(grown)
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.order, s.elements))
