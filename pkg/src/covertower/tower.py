"""Towers of covers over one base graph, and arithmetic in their fibres.

A tower lists finite groups G_1, G_2, ... with surjective bonding maps
G_(i+1) -> G_i and one generator image per level, compatible with the
bonds. Every level uses the trivial fibre subgroup, so level i is a
|G_i|-sheeted cover and the fibre over the base point at depth d is the
set of compatible tuples (g_1, ..., g_d).

The map theta sends a word to the tuple of its level evaluations. At
finite depth, "the leaf is dense" becomes: every level map is onto; and
the profinite kernel story becomes: the word preimage of the identity at
level i has index |G_i|, witnessed by explicit words hitting every
element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import covers, graphs, groups
from .errors import (
    BondNotSurjectiveError,
    DepthExceededError,
    DepthMismatchError,
    IncompatibleBondError,
    NotDenseError,
)

__all__ = [
    "TowerSpec",
    "TowerCover",
    "ProfiniteElement",
    "LevelDensity",
    "KernelLevel",
    "validate_tower",
    "solenoid_tower",
    "build_tower_covers",
    "dense_leaf_check",
    "is_dense",
    "kernel_chain",
]


@dataclass(frozen=True)
class ProfiniteElement:
    """A depth-n fibre point: one group element per level.

    Compatibility with the bonds is the caller's contract; tower methods
    that produce or combine elements verify it.
    """

    components: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.components)

    def __repr__(self) -> str:
        return f"ProfiniteElement{self.components!r}"


class TowerSpec:
    """Validated tower data over one loop basis.

    Levels are numbered from 1 in every public argument and report;
    ``bonds[i]`` maps level i+2 onto level i+1 in that numbering (it sits
    between ``levels[i+1]`` and ``levels[i]``).
    """

    def __init__(
        self,
        basis: graphs.Pi1Basis,
        levels: Sequence[groups.FiniteGroup],
        gen_images: Sequence[Sequence[int]],
        bonds: Sequence[groups.GroupHom],
    ):
        if not levels:
            raise ValueError("a tower needs at least one level")
        if len(gen_images) != len(levels):
            raise ValueError("one generator image tuple per level required")
        if len(bonds) != len(levels) - 1:
            raise ValueError(
                f"{len(levels)} levels need {len(levels) - 1} bonds, got {len(bonds)}"
            )
        rank = basis.rank
        for i, imgs in enumerate(gen_images):
            if len(imgs) != rank:
                raise ValueError(
                    f"level {i + 1} has {len(imgs)} generator images, basis rank is {rank}"
                )
            for v in imgs:
                if not 0 <= v < levels[i].order:
                    raise ValueError(f"image {v} outside level {i + 1} group")
        for i, bond in enumerate(bonds):
            if bond.source != levels[i + 1] or bond.target != levels[i]:
                raise ValueError(f"bond {i + 1} does not connect levels {i + 2} -> {i + 1}")
            if not groups.is_surjective(bond):
                raise BondNotSurjectiveError(i + 1)
            for k in range(rank):
                if bond(gen_images[i + 1][k]) != gen_images[i][k]:
                    raise IncompatibleBondError(i + 1, _gen_name(k))
        self.basis = basis
        self.levels = tuple(levels)
        self.gen_images = tuple(tuple(imgs) for imgs in gen_images)
        self.bonds = tuple(bonds)
        self._level_specs: dict[int, covers.CoverSpec] = {}
        self._composites: dict[tuple[int, int], tuple[int, ...]] = {}

    @property
    def base(self) -> graphs.BaseGraph:
        return self.basis.graph

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def rank(self) -> int:
        return self.basis.rank

    def level_group(self, i: int) -> groups.FiniteGroup:
        self._check_level(i)
        return self.levels[i - 1]

    def level_spec(self, i: int) -> covers.CoverSpec:
        """The cover spec of level i (trivial fibre subgroup)."""
        self._check_level(i)
        if i not in self._level_specs:
            self._level_specs[i] = covers.CoverSpec(
                self.basis, self.levels[i - 1], self.gen_images[i - 1]
            )
        return self._level_specs[i]

    def truncate(self, d: int) -> "TowerSpec":
        self._check_level(d)
        return TowerSpec(
            self.basis, self.levels[:d], self.gen_images[:d], self.bonds[: d - 1]
        )

    def bond_composite(self, i: int, j: int) -> tuple[int, ...]:
        """Image table of the composite bond from level j down to level i."""
        self._check_level(i)
        self._check_level(j)
        if i > j:
            raise ValueError(f"composite bond needs i <= j, got ({i}, {j})")
        key = (i, j)
        if key not in self._composites:
            table = tuple(range(self.levels[j - 1].order))
            for k in range(j - 1, i - 1, -1):
                bond = self.bonds[k - 1].image
                table = tuple(bond[x] for x in table)
            self._composites[key] = table
        return self._composites[key]

    def _check_level(self, i: int) -> None:
        if i < 1:
            raise ValueError(f"levels are numbered from 1, got {i}")
        if i > self.depth:
            raise DepthExceededError(i, self.depth)

    # -- fibre arithmetic --------------------------------------------------

    def theta(self, word: groups.Word, depth: int | None = None) -> ProfiniteElement:
        """Evaluate a word at every level down to the requested depth."""
        d = self.depth if depth is None else depth
        self._check_level(d)
        comps = tuple(
            groups.evaluate_word(self.levels[i], self.gen_images[i], word)
            for i in range(d)
        )
        elem = ProfiniteElement(comps)
        self._assert_compatible(elem)
        return elem

    def fibre_identity(self, depth: int | None = None) -> ProfiniteElement:
        d = self.depth if depth is None else depth
        self._check_level(d)
        return ProfiniteElement(tuple(self.levels[i].identity for i in range(d)))

    def fibre_mul(self, x: ProfiniteElement, y: ProfiniteElement) -> ProfiniteElement:
        if x.depth != y.depth:
            raise DepthMismatchError(x.depth, y.depth)
        self._check_level(x.depth)
        self._assert_compatible(x)
        self._assert_compatible(y)
        out = ProfiniteElement(
            tuple(
                self.levels[i].mult[x.components[i]][y.components[i]]
                for i in range(x.depth)
            )
        )
        self._assert_compatible(out)
        return out

    def fibre_inv(self, x: ProfiniteElement) -> ProfiniteElement:
        self._check_level(x.depth)
        self._assert_compatible(x)
        return ProfiniteElement(
            tuple(self.levels[i].inv[x.components[i]] for i in range(x.depth))
        )

    def is_compatible(self, elem: ProfiniteElement) -> bool:
        if not 1 <= elem.depth <= self.depth:
            return False
        for i, c in enumerate(elem.components):
            if not 0 <= c < self.levels[i].order:
                return False
        return all(
            self.bonds[i](elem.components[i + 1]) == elem.components[i]
            for i in range(elem.depth - 1)
        )

    def _assert_compatible(self, elem: ProfiniteElement) -> None:
        if not self.is_compatible(elem):
            raise ValueError(f"{elem!r} is not bond-compatible with the tower")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TowerSpec):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.levels == other.levels
            and self.gen_images == other.gen_images
            and tuple(b.image for b in self.bonds) == tuple(b.image for b in other.bonds)
        )

    def __repr__(self) -> str:
        orders = ", ".join(str(g.order) for g in self.levels)
        return f"TowerSpec(depth={self.depth}, orders=[{orders}])"


def _gen_name(i: int) -> str:
    return chr(ord("a") + i) if i < 26 else f"g{i}"


def validate_tower(
    basis: graphs.Pi1Basis,
    levels: Sequence[groups.FiniteGroup],
    gen_images: Sequence[Sequence[int]],
    bonds: Sequence[groups.GroupHom],
) -> TowerSpec:
    """Build a tower, checking bond surjectivity and compatibility."""
    return TowerSpec(basis, levels, gen_images, bonds)


def solenoid_tower(p: int, depth: int) -> TowerSpec:
    """The mod-p tower over the circle: Z/p, Z/p^2, ... with reduction bonds
    and the single loop generator mapping to 1 at every level."""
    if p < 2:
        raise ValueError(f"solenoid modulus must be at least 2, got {p}")
    if depth < 1:
        raise ValueError(f"solenoid depth must be at least 1, got {depth}")
    basis = graphs.spanning_tree(graphs.circle())
    levels = [groups.cyclic_group(p ** (i + 1)) for i in range(depth)]
    images = [(1,) for _ in range(depth)]
    bonds = [
        groups.group_hom(
            levels[i + 1], levels[i],
            [x % levels[i].order for x in range(levels[i + 1].order)],
        )
        for i in range(depth - 1)
    ]
    return TowerSpec(basis, levels, images, bonds)


class TowerCover:
    """Built covers of every level plus the maps between them.

    ``vertex_maps[i]`` and ``dart_maps[i]`` send level i+2 to level i+1
    (1-based levels). Both maps commute with the projections to the base
    and are covering maps themselves; all of that is verified on build.
    """

    def __init__(self, spec: TowerSpec):
        self.spec = spec
        self.covers = tuple(
            covers.build_cover(spec.level_spec(i)) for i in range(1, spec.depth + 1)
        )
        vmaps: list[tuple[int, ...]] = []
        dmaps: list[tuple[int, ...]] = []
        for i in range(spec.depth - 1):
            upper = self.covers[i + 1]
            lower = self.covers[i]
            bond = spec.bonds[i].image
            nu, nl = upper.n_cosets, lower.n_cosets
            vmap = tuple(
                (vid // nu) * nl + bond[vid % nu] for vid in range(upper.n_vertices)
            )
            dmap = tuple(
                (did // nu) * nl + bond[upper.dart_source[did] % nu]
                for did in range(upper.n_darts)
            )
            vmaps.append(vmap)
            dmaps.append(dmap)
        self.vertex_maps = tuple(vmaps)
        self.dart_maps = tuple(dmaps)
        self._check()

    @property
    def depth(self) -> int:
        return self.spec.depth

    def level(self, i: int) -> covers.CoverGraph:
        self.spec._check_level(i)
        return self.covers[i - 1]

    def _check(self) -> None:
        for i in range(self.depth - 1):
            upper = self.covers[i + 1]
            lower = self.covers[i]
            vmap = self.vertex_maps[i]
            dmap = self.dart_maps[i]
            for did in range(upper.n_darts):
                ld = dmap[did]
                if lower.dart_base[ld] != upper.dart_base[did]:
                    raise RuntimeError(
                        f"internal error: bonding map breaks the base projection at "
                        f"level {i + 2}, dart {did}"
                    )
                if lower.dart_source[ld] != vmap[upper.dart_source[did]] or (
                    lower.dart_target[ld] != vmap[upper.dart_target[did]]
                ):
                    raise RuntimeError(
                        f"internal error: bonding map is not a graph map at "
                        f"level {i + 2}, dart {did}"
                    )
            # covering property of the bonding map itself
            outs: list[list[int]] = [[] for _ in range(upper.n_vertices)]
            for did in range(upper.n_darts):
                outs[upper.dart_source[did]].append(did)
            louts: list[list[int]] = [[] for _ in range(lower.n_vertices)]
            for ld in range(lower.n_darts):
                louts[lower.dart_source[ld]].append(ld)
            for vid in range(upper.n_vertices):
                mapped = sorted(dmap[d] for d in outs[vid])
                if mapped != sorted(louts[vmap[vid]]):
                    raise RuntimeError(
                        f"internal error: bonding map star at level {i + 2} "
                        f"vertex {vid} is not a bijection"
                    )

    def __repr__(self) -> str:
        return f"TowerCover(depth={self.depth})"


def build_tower_covers(spec: TowerSpec) -> TowerCover:
    return TowerCover(spec)


@dataclass(frozen=True)
class LevelDensity:
    """Surjectivity verdict of one level map."""

    level: int
    surjective: bool
    image_order: int
    group_order: int


def dense_leaf_check(spec: TowerSpec) -> tuple[LevelDensity, ...]:
    """Per level: do the generator images generate the whole group?"""
    out = []
    for i in range(1, spec.depth + 1):
        cspec = spec.level_spec(i)
        img = cspec.image_subgroup.order
        out.append(LevelDensity(i, img == cspec.group.order, img, cspec.group.order))
    return tuple(out)


def is_dense(spec: TowerSpec) -> bool:
    return all(d.surjective for d in dense_leaf_check(spec))


@dataclass(frozen=True)
class KernelLevel:
    """Index of the level-i word kernel, with per-element witness words.

    ``witness_words[g]`` evaluates to g at level i, certifying that words
    surject onto the level group; the index of the kernel is therefore
    exactly the group order.
    """

    level: int
    index: int
    witness_words: tuple[groups.Word, ...]


def kernel_chain(spec: TowerSpec) -> tuple[KernelLevel, ...]:
    """Kernel indices [words : ker theta_i] = |G_i| with witnesses.

    Requires a dense leaf; raises NotDenseError naming the offending
    levels otherwise. Witness words are found breadth-first over the
    generator images, so they are shortest in the generators and
    deterministic.
    """
    density = dense_leaf_check(spec)
    bad = tuple(d.level for d in density if not d.surjective)
    if bad:
        raise NotDenseError(bad)
    out = []
    for i in range(1, spec.depth + 1):
        group = spec.levels[i - 1]
        images = spec.gen_images[i - 1]
        words: dict[int, groups.Word] = {group.identity: groups.Word()}
        frontier = [group.identity]
        steps = [
            (groups.Word(((k, 1),)), img) for k, img in enumerate(images)
        ] + [
            (groups.Word(((k, -1),)), group.inv[img]) for k, img in enumerate(images)
        ]
        while frontier:
            nxt = []
            for g in frontier:
                for letter_word, img in steps:
                    h = group.mult[g][img]
                    if h not in words:
                        words[h] = words[g] * letter_word
                        nxt.append(h)
            frontier = nxt
        if len(words) != group.order:
            raise NotDenseError((i,))
        witness = tuple(words[g] for g in range(group.order))
        for g, w in enumerate(witness):
            if groups.evaluate_word(group, images, w) != g:
                raise RuntimeError(
                    f"internal error: witness word for element {g} at level {i} "
                    "evaluates elsewhere"
                )
        out.append(KernelLevel(i, group.order, witness))
    return tuple(out)
