"""Finite covers of a graph built from a group and generator voltages.

A cover is specified by a group G, one image per loop generator, and a
subgroup K. The fibre over the base vertex is the set of right cosets
K\\G; tree darts lift horizontally and the chord for generator a moves a
coset by right multiplication with the image of a.

Two actions live on that fibre and their interplay is the point of this
module. Monodromy acts on the right: following the lift of a word w ends
at Kx * phi(w). Deck transformations act on the left through elements of
the normalizer of K: Kx goes to K n x. Both are computed exactly, and
regularity (deck transitivity) is decided twice, once through normality
of K and once by enumerating a deck orbit; the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import graphs, groups
from .errors import Error, NotRegularError, NotSurjectiveError, NotIncidentError

__all__ = [
    "CoverSpec",
    "CoverGraph",
    "DeckGroup",
    "build_cover",
    "dart_voltages",
    "is_connected_cover",
    "monodromy",
    "lift_path",
    "monodromy_by_lifting",
    "is_regular",
    "deck_group",
    "fibre_group",
    "left_action",
    "equalizer_set",
    "generator_coset_action",
]


class CoverSpec:
    """Covering data: loop basis, group, generator images and a subgroup.

    Fibre points are right-coset indices as produced by
    ``groups.right_cosets``; with the trivial subgroup they coincide with
    the group elements themselves.
    """

    def __init__(
        self,
        basis: graphs.Pi1Basis,
        group: groups.FiniteGroup,
        gen_images: Sequence[int],
        fibre_subgroup: groups.Subgroup | None = None,
    ):
        if len(gen_images) != basis.rank:
            raise ValueError(
                f"{len(gen_images)} generator images for a rank {basis.rank} basis"
            )
        for v in gen_images:
            if not 0 <= v < group.order:
                raise ValueError(f"generator image {v} is outside the group")
        if fibre_subgroup is None:
            fibre_subgroup = groups.trivial_subgroup(group)
        if fibre_subgroup.parent != group:
            raise ValueError("fibre subgroup belongs to a different group")
        self.basis = basis
        self.group = group
        self.gen_images = tuple(gen_images)
        self.subgroup = fibre_subgroup
        self.coset_reps, self.coset_of = groups.right_cosets(group, fibre_subgroup)
        self.base_coset = self.coset_of[group.identity]

    @property
    def base(self) -> graphs.BaseGraph:
        return self.basis.graph

    @property
    def n_cosets(self) -> int:
        return len(self.coset_reps)

    def phi(self, word: groups.Word) -> int:
        """Evaluate a word under the generator images."""
        return groups.evaluate_word(self.group, self.gen_images, word)

    def phi_surjective(self) -> bool:
        return self.image_subgroup.order == self.group.order

    @cached_property
    def image_subgroup(self) -> groups.Subgroup:
        return groups.generated_subgroup(self.group, self.gen_images)

    @cached_property
    def _deck(self) -> "DeckGroup":
        return _build_deck(self)

    @cached_property
    def _regular(self) -> bool:
        by_normality = groups.is_normal(self.group, self.subgroup)
        deck = self._deck
        orbit = {self.base_coset}
        stack = [self.base_coset]
        while stack:
            x = stack.pop()
            for perm in deck.coset_perms:
                y = perm[x]
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        by_transitivity = len(orbit) == self.n_cosets
        if by_normality != by_transitivity:
            raise RuntimeError(
                "internal error: normality and deck-orbit routes disagree "
                f"({by_normality} vs {by_transitivity})"
            )
        return by_normality

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoverSpec):
            return NotImplemented
        return (
            self.basis == other.basis
            and self.group == other.group
            and self.gen_images == other.gen_images
            and self.subgroup.elements == other.subgroup.elements
        )

    def __repr__(self) -> str:
        return (
            f"CoverSpec(group={self.group.name}, images={list(self.gen_images)}, "
            f"sheets={self.n_cosets})"
        )


def dart_voltages(spec: CoverSpec) -> tuple[int, ...]:
    """Group element attached to each base dart.

    Tree darts carry the identity, chord i carries the image of generator
    i, and the reverse of a chord carries the inverse.
    """
    g = spec.base
    group = spec.group
    voltages = [group.identity] * g.n_darts
    for i, chord in enumerate(spec.basis.chords):
        voltages[chord] = spec.gen_images[i]
        voltages[g.dart_reverse[chord]] = group.inv[spec.gen_images[i]]
    return tuple(voltages)


class CoverGraph:
    """The derived graph of a cover spec.

    Vertices are pairs (base vertex, coset), encoded as
    ``v * n_cosets + coset``; dart (d, c) lifts base dart d starting at
    coset c and is encoded the same way. The covering property (each star
    maps bijectively to the base star) is asserted at construction.
    """

    def __init__(self, spec: CoverSpec):
        self.spec = spec
        g = spec.base
        group = spec.group
        nc = spec.n_cosets
        self.n_cosets = nc
        self.voltages = dart_voltages(spec)
        self.n_vertices = g.vertex_count * nc
        self.base_point = g.base_vertex * nc + spec.base_coset

        src: list[int] = []
        tgt: list[int] = []
        rev: list[int] = []
        base_dart: list[int] = []
        for d in range(g.n_darts):
            sv, tv = g.dart_source[d], g.dart_target[d]
            rd = g.dart_reverse[d]
            volt = self.voltages[d]
            for c in range(nc):
                tc = spec.coset_of[group.mult[spec.coset_reps[c]][volt]]
                src.append(sv * nc + c)
                tgt.append(tv * nc + tc)
                rev.append(rd * nc + tc)
                base_dart.append(d)
        self.dart_source = tuple(src)
        self.dart_target = tuple(tgt)
        self.dart_reverse = tuple(rev)
        self.dart_base = tuple(base_dart)
        self._check()

    @property
    def n_darts(self) -> int:
        return len(self.dart_source)

    def vertex_id(self, base_vertex: int, coset: int) -> int:
        return base_vertex * self.n_cosets + coset

    def vertex_pair(self, vid: int) -> tuple[int, int]:
        return divmod(vid, self.n_cosets)

    def _check(self) -> None:
        g = self.spec.base
        for ld in range(self.n_darts):
            r = self.dart_reverse[ld]
            if self.dart_reverse[r] != ld or r == ld:
                raise RuntimeError(f"internal error: lifted reversal broken at dart {ld}")
            if (
                self.dart_source[r] != self.dart_target[ld]
                or self.dart_target[r] != self.dart_source[ld]
            ):
                raise RuntimeError(f"internal error: reverse of lift {ld} mismatched")
        # star bijection: out-darts of each cover vertex project one-to-one
        # onto the out-darts of the underlying base vertex
        outs: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for ld in range(self.n_darts):
            outs[self.dart_source[ld]].append(self.dart_base[ld])
        for vid in range(self.n_vertices):
            v, _ = self.vertex_pair(vid)
            if sorted(outs[vid]) != list(g.out_darts[v]):
                raise RuntimeError(
                    f"internal error: star at cover vertex {vid} does not match its base"
                )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoverGraph):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.dart_source == other.dart_source
            and self.dart_target == other.dart_target
            and self.dart_reverse == other.dart_reverse
        )

    def __repr__(self) -> str:
        return (
            f"CoverGraph(vertices={self.n_vertices}, darts={self.n_darts}, "
            f"sheets={self.n_cosets})"
        )


def build_cover(spec: CoverSpec) -> CoverGraph:
    return CoverGraph(spec)


def generator_coset_action(spec: CoverSpec) -> tuple[tuple[int, ...], ...]:
    """Per generator, the right-multiplication permutation of the fibre."""
    group = spec.group
    out = []
    for img in spec.gen_images:
        out.append(
            tuple(
                spec.coset_of[group.mult[spec.coset_reps[c]][img]]
                for c in range(spec.n_cosets)
            )
        )
    return tuple(out)


def is_connected_cover(spec: CoverSpec) -> bool:
    """Whether monodromy moves the base coset through the whole fibre."""
    action = generator_coset_action(spec)
    inverse_action = [groups.perm_inverse(p) for p in action]
    seen = {spec.base_coset}
    stack = [spec.base_coset]
    while stack:
        c = stack.pop()
        for perm in action:
            if perm[c] not in seen:
                seen.add(perm[c])
                stack.append(perm[c])
        for perm in inverse_action:
            if perm[c] not in seen:
                seen.add(perm[c])
                stack.append(perm[c])
    return len(seen) == spec.n_cosets


def monodromy(spec: CoverSpec, x: int, word: groups.Word) -> int:
    """End coset of the lift of a word's loop starting at coset x.

    Computed by right coset multiplication: Kx goes to Kx * phi(w). The
    dart-by-dart route ``monodromy_by_lifting`` must land on the same
    coset; tests compare the two exhaustively.
    """
    if not 0 <= x < spec.n_cosets:
        raise ValueError(f"fibre point {x} out of range")
    el = spec.phi(word)
    return spec.coset_of[spec.group.mult[spec.coset_reps[x]][el]]


def lift_path(cover: CoverGraph, start_vertex: int, path: graphs.EdgePath) -> int:
    """Walk the unique lift of a base path; returns the end vertex id."""
    v, _ = cover.vertex_pair(start_vertex)
    if v != path.start:
        raise NotIncidentError(
            f"lift starts over base vertex {v}, path starts at {path.start}"
        )
    nc = cover.n_cosets
    cur = start_vertex
    for d in path.darts:
        _, c = cover.vertex_pair(cur)
        lifted = d * nc + c
        if cover.dart_source[lifted] != cur:
            raise NotIncidentError(f"dart {d} does not start at the current vertex")
        cur = cover.dart_target[lifted]
    return cur


def monodromy_by_lifting(cover: CoverGraph, x: int, word: groups.Word) -> int:
    """Monodromy computed by lifting the word's canonical loop dart by dart.

    Independent of the coset-multiplication route in ``monodromy`` apart
    from sharing the cover's dart structure.
    """
    spec = cover.spec
    path = graphs.word_to_path(spec.basis, word)
    end = lift_path(cover, cover.vertex_id(spec.base.base_vertex, x), path)
    v, c = cover.vertex_pair(end)
    assert v == spec.base.base_vertex
    return c


@dataclass(frozen=True)
class DeckGroup:
    """Deck transformations of a connected cover.

    The carrier is the quotient N(K)/K of the normalizer of the fibre
    subgroup; element q acts on the fibre by the stored permutation
    ``coset_perms[q]``, sending Kx to K n x for a normalizer
    representative n. The action is free, which is asserted on build.
    """

    carrier: groups.FiniteGroup
    reps: tuple[int, ...]  # parent-group representative per carrier element
    coset_perms: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return self.carrier.order

    def act(self, q: int, x: int) -> int:
        return self.coset_perms[q][x]

    def __repr__(self) -> str:
        return f"DeckGroup(order={self.order})"


def _build_deck(spec: CoverSpec) -> DeckGroup:
    group = spec.group
    norm = groups.normalizer(group, spec.subgroup)
    norm_group, embed = groups.subgroup_as_group(norm, name="N")
    index_in_norm = {g: i for i, g in enumerate(embed)}
    k_inside = groups.subgroup(
        norm_group, tuple(index_in_norm[k] for k in spec.subgroup.elements)
    )
    carrier, proj = groups.quotient_group(norm_group, k_inside, name="deck")
    class_reps, _ = groups.right_cosets(norm_group, k_inside)
    reps = tuple(embed[r] for r in class_reps)
    perms = tuple(
        tuple(
            spec.coset_of[group.mult[n][spec.coset_reps[c]]]
            for c in range(spec.n_cosets)
        )
        for n in reps
    )
    deck = DeckGroup(carrier, reps, perms)
    for q in range(carrier.order):
        if q == carrier.identity:
            continue
        if any(perms[q][c] == c for c in range(spec.n_cosets)):
            raise RuntimeError("internal error: deck action is not free on the fibre")
    # left action: acting by s after q equals acting by s*q. Checking this
    # for s in a generating set and all q extends to every element, since
    # each element is a nested product of generators.
    identity_perm = tuple(range(spec.n_cosets))
    if perms[carrier.identity] != identity_perm:
        raise RuntimeError("internal error: deck identity moves the fibre")
    for s in groups.generating_set(carrier):
        ps = perms[s]
        for q in range(carrier.order):
            composed = tuple(ps[x] for x in perms[q])
            if composed != perms[carrier.mult[s][q]]:
                raise RuntimeError("internal error: deck action is not a left action")
    return deck


def is_regular(spec: CoverSpec) -> bool:
    """Deck transitivity on the fibre, decided twice.

    Requires surjective generator images (a connected cover). Normality
    of the fibre subgroup and direct deck-orbit enumeration are both
    computed; a disagreement would be an internal error, never a return
    value.
    """
    if not spec.phi_surjective():
        raise NotSurjectiveError(
            f"generator images span {spec.image_subgroup.order} of "
            f"{spec.group.order} elements"
        )
    return spec._regular


def deck_group(spec: CoverSpec) -> DeckGroup:
    """Deck transformations of a connected cover; order [N(K) : K]."""
    if not spec.phi_surjective():
        raise NotSurjectiveError(
            "deck transformations are only computed for connected covers "
            "(generator images must generate the group)"
        )
    return spec._deck


def fibre_group(spec: CoverSpec) -> tuple[groups.FiniteGroup, tuple[int, ...]]:
    """Group law on the fibre of a regular cover, with the deck bijection.

    Cosets multiply by Ka * Kb = K(ab), well-defined since K is normal
    here. The returned tuple maps each deck element to the fibre point
    obtained by letting it act on the base point; it is a group
    isomorphism onto the fibre, which is asserted.
    """
    if not is_regular(spec):
        raise NotRegularError("the fibre carries a group law only for regular covers")
    group = spec.group
    reps = spec.coset_reps
    cof = spec.coset_of
    m = spec.n_cosets
    mult = tuple(
        tuple(cof[group.mult[reps[a]][reps[b]]] for b in range(m)) for a in range(m)
    )
    inv = tuple(cof[group.inv[reps[a]]] for a in range(m))
    fib = groups.FiniteGroup(m, mult, spec.base_coset, inv, name=f"fibre({group.name})")
    deck = spec._deck
    theta = tuple(deck.coset_perms[q][spec.base_coset] for q in range(deck.order))
    if sorted(theta) != list(range(m)):
        raise RuntimeError("internal error: deck-to-fibre map is not a bijection")
    for q1 in range(deck.order):
        for q2 in range(deck.order):
            if theta[deck.carrier.mult[q1][q2]] != fib.mult[theta[q1]][theta[q2]]:
                raise RuntimeError("internal error: deck-to-fibre map is not multiplicative")
    return fib, theta


def left_action(spec: CoverSpec, word: groups.Word, x: int) -> int:
    """Deck-side action on the fibre: Kx goes to K phi(w) x.

    Well-defined only for regular covers, which is enforced.
    """
    if not is_regular(spec):
        raise NotRegularError("left action requires a regular cover")
    if not 0 <= x < spec.n_cosets:
        raise ValueError(f"fibre point {x} out of range")
    el = spec.phi(word)
    return spec.coset_of[spec.group.mult[el][spec.coset_reps[x]]]


def equalizer_set(spec: CoverSpec, word: groups.Word) -> tuple[int, ...]:
    """Fibre points where the left action and monodromy of a word agree.

    With a trivial fibre subgroup this is exactly the centralizer of
    phi(w): the points x with phi(w) x = x phi(w). Always contains the
    base point.
    """
    if not is_regular(spec):
        raise NotRegularError("equalizer comparison requires a regular cover")
    if spec.subgroup.order != 1:
        raise Error("equalizer_set requires the trivial fibre subgroup")
    return tuple(
        x for x in range(spec.n_cosets)
        if left_action(spec, word, x) == monodromy(spec, x, word)
    )
