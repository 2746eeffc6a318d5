"""Balanced quotients across tower levels, reconstruction, and the
bundled verification suite.

For levels i <= j, the level-j group acts on pairs (u, y) with u in G_i
and y a vertex of the level-j cover: gamma sends (u, y) to
(u * q(gamma), gamma^-1 y), where q is the composite bond and gamma acts
on the cover through the deck action. The map (u, y) -> u * q(y's sheet)
over the same base vertex is constant on orbits and the induced map from
orbit classes to level-i vertices is a bijection. ``borel_quotient``
builds the partition and certifies all of that element by element.

``reconstruct_tower`` rebuilds every level cover from fibre data alone
(level groups, bonds, generator values) and certifies the rebuilt covers
isomorphic to the originals. ``theorem_suite`` runs every check of the
package against one tower and reports pass/fail entries with witnesses
instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from . import covers, groups, tower as tower_mod
from .errors import LevelOrderError, NotDenseError
from .tower import ProfiniteElement, TowerCover, TowerSpec

__all__ = [
    "ISO_SEARCH_MAX_ORDER",
    "BorelQuotient",
    "FibreData",
    "CheckResult",
    "SuiteOptions",
    "phi_map",
    "borel_quotient",
    "fibre_data",
    "reconstruct_tower",
    "find_cover_isomorphism",
    "covers_isomorphic",
    "theorem_suite",
]

# Above this fibre size the isomorphism certificate falls back from the
# exhaustive bijection search to comparing canonical constructions.
ISO_SEARCH_MAX_ORDER = 64


def _require_dense(spec: TowerSpec) -> None:
    bad = tuple(d.level for d in tower_mod.dense_leaf_check(spec) if not d.surjective)
    if bad:
        raise NotDenseError(bad)


def _check_pair(spec: TowerSpec, i: int, j: int) -> None:
    spec._check_level(i)
    spec._check_level(j)
    if i > j:
        raise LevelOrderError(i, j)


def phi_map(tcov: TowerCover, i: int, j: int, u: int, y: int) -> int:
    """Send (u, vertex of level j) to a vertex of level i.

    The vertex (v, g) goes to (v, u * q(g)) with q the composite bond.
    Raises LevelOrderError when i > j.
    """
    spec = tcov.spec
    _check_pair(spec, i, j)
    gi = spec.levels[i - 1]
    nj = tcov.level(j).n_cosets
    if not 0 <= u < gi.order:
        raise ValueError(f"{u} is not an element of the level {i} group")
    if not 0 <= y < tcov.level(j).n_vertices:
        raise ValueError(f"{y} is not a vertex of the level {j} cover")
    v, g = divmod(y, nj)
    q = spec.bond_composite(i, j)
    return v * gi.order + gi.mult[u][q[g]]


@dataclass(frozen=True)
class BorelQuotient:
    """Orbit partition of G_i x V(E_j) with its canonical vertex map.

    ``classes`` lists each orbit as a sorted tuple of (u, vertex) pairs,
    ordered by smallest member; ``canonical[c]`` is the level-i vertex
    every member of class c maps to.
    """

    i: int
    j: int
    classes: tuple[tuple[tuple[int, int], ...], ...]
    canonical: tuple[int, ...]

    @property
    def class_count(self) -> int:
        return len(self.classes)


def borel_quotient(tcov: TowerCover, i: int, j: int) -> BorelQuotient:
    """Partition G_i x V(E_j) into level-j orbits and certify the bijection.

    Verifies that the canonical map is constant on every class, hits each
    level-i vertex exactly once, and that the class count is
    |V(base)| * |G_i|. Requires a dense tower and i <= j.
    """
    spec = tcov.spec
    _check_pair(spec, i, j)
    _require_dense(spec)
    gi = spec.levels[i - 1]
    gj = spec.levels[j - 1]
    cover_j = tcov.level(j)
    nj = cover_j.n_cosets
    n_vertices_j = cover_j.n_vertices
    q = spec.bond_composite(i, j)

    seen = [False] * (gi.order * n_vertices_j)
    classes: list[tuple[tuple[int, int], ...]] = []
    for u in range(gi.order):
        for y in range(n_vertices_j):
            if seen[u * n_vertices_j + y]:
                continue
            v, g = divmod(y, nj)
            orbit = []
            for gamma in range(gj.order):
                uu = gi.mult[u][q[gamma]]
                yy = v * nj + gj.mult[gj.inv[gamma]][g]
                orbit.append((uu, yy))
            members = sorted(set(orbit))
            if len(members) != gj.order:
                raise RuntimeError(
                    "internal error: the level action is not free at "
                    f"(u={u}, y={y}) for levels ({i}, {j})"
                )
            for uu, yy in members:
                seen[uu * n_vertices_j + yy] = True
            classes.append(tuple(members))

    canonical = []
    for members in classes:
        values = {phi_map(tcov, i, j, uu, yy) for uu, yy in members}
        if len(values) != 1:
            raise RuntimeError(
                f"internal error: canonical map not constant on a class for ({i}, {j})"
            )
        canonical.append(values.pop())
    n_vertices_i = tcov.level(i).n_vertices
    if sorted(canonical) != list(range(n_vertices_i)):
        raise RuntimeError(
            f"internal error: classes of ({i}, {j}) do not biject onto level {i} vertices"
        )
    if len(classes) != spec.base.vertex_count * gi.order:
        raise RuntimeError(
            f"internal error: class count {len(classes)} for ({i}, {j}), "
            f"expected {spec.base.vertex_count * gi.order}"
        )
    return BorelQuotient(i, j, tuple(classes), tuple(canonical))


# -- reconstruction --------------------------------------------------------

@dataclass(frozen=True)
class FibreData:
    """What the fibre remembers of a tower: groups, bonds and the values
    of theta on the generators."""

    levels: tuple[groups.FiniteGroup, ...]
    bond_images: tuple[tuple[int, ...], ...]
    generator_values: tuple[ProfiniteElement, ...]


def fibre_data(spec: TowerSpec) -> FibreData:
    return FibreData(
        spec.levels,
        tuple(b.image for b in spec.bonds),
        tuple(
            spec.theta(groups.Word(((k, 1),))) for k in range(spec.rank)
        ),
    )


def find_cover_isomorphism(
    a: covers.CoverGraph, b: covers.CoverGraph,
) -> tuple[int, ...] | None:
    """Search for a fibre bijection turning one cover into the other.

    Candidates are exactly the bijections commuting with monodromy: each
    is pinned down by where the base point goes, then propagated along
    the generator actions and checked everywhere. Covers must share the
    base and basis and be connected; candidates are tried in ascending
    order so the result is deterministic.
    """
    sa, sb = a.spec, b.spec
    if sa.basis != sb.basis or sa.n_cosets != sb.n_cosets:
        return None
    n = sa.n_cosets
    act_a = covers.generator_coset_action(sa)
    act_b = covers.generator_coset_action(sb)
    act_a += tuple(groups.perm_inverse(p) for p in act_a)
    act_b += tuple(groups.perm_inverse(p) for p in act_b)
    for start in range(n):
        f = [-1] * n
        f[sa.base_coset] = start
        stack = [sa.base_coset]
        ok = True
        while stack and ok:
            x = stack.pop()
            for pa, pb in zip(act_a, act_b):
                ximg, yimg = pa[x], pb[f[x]]
                if f[ximg] < 0:
                    f[ximg] = yimg
                    stack.append(ximg)
                elif f[ximg] != yimg:
                    ok = False
                    break
        if not ok or -1 in f or len(set(f)) != n:
            continue
        return tuple(f)
    return None


def covers_isomorphic(
    a: covers.CoverGraph,
    b: covers.CoverGraph,
    search_max: int = ISO_SEARCH_MAX_ORDER,
) -> tuple[str, tuple[int, ...] | None]:
    """Certify cover isomorphism; returns (route, fibre bijection or None).

    Fibres up to ``search_max`` get the exhaustive search; larger ones
    fall back to the canonical comparison, which accepts only equality of
    the constructions (route "canonical", identity bijection).
    """
    if a.spec.n_cosets <= search_max:
        return "search", find_cover_isomorphism(a, b)
    if a == b:
        return "canonical", tuple(range(a.n_cosets))
    return "canonical", None


def reconstruct_tower(
    spec: TowerSpec, search_max: int = ISO_SEARCH_MAX_ORDER,
) -> TowerSpec:
    """Rebuild the tower from its fibre data and certify it level by level.

    Each level is rebuilt on the subgroup generated by the recorded
    generator values (the image of the level map), reindexed from
    scratch; bonds are restricted accordingly. Every rebuilt cover must
    be isomorphic to the original one over the base, else RuntimeError.
    Requires a dense tower.
    """
    _require_dense(spec)
    data = fibre_data(spec)
    new_levels: list[groups.FiniteGroup] = []
    new_images: list[tuple[int, ...]] = []
    embeddings: list[tuple[int, ...]] = []
    for i in range(spec.depth):
        g = data.levels[i]
        values = [pe.components[i] for pe in data.generator_values]
        img_sub = groups.generated_subgroup(g, values)
        img_group, embed = groups.subgroup_as_group(img_sub, name=f"im{i + 1}")
        index = {e: k for k, e in enumerate(embed)}
        new_levels.append(img_group)
        new_images.append(tuple(index[v] for v in values))
        embeddings.append(embed)
    new_bonds = []
    for i in range(spec.depth - 1):
        hi = embeddings[i + 1]
        lo_index = {e: k for k, e in enumerate(embeddings[i])}
        table = [lo_index[data.bond_images[i][e]] for e in hi]
        new_bonds.append(groups.group_hom(new_levels[i + 1], new_levels[i], table))
    rebuilt = TowerSpec(spec.basis, new_levels, new_images, new_bonds)
    for i in range(1, spec.depth + 1):
        original = covers.build_cover(spec.level_spec(i))
        fresh = covers.build_cover(rebuilt.level_spec(i))
        route, bijection = covers_isomorphic(fresh, original, search_max)
        if bijection is None:
            raise RuntimeError(
                f"reconstruction failed: level {i} cover is not isomorphic "
                f"to the original (route: {route})"
            )
    return rebuilt


# -- the bundled verification suite ----------------------------------------

@dataclass(frozen=True)
class CheckResult:
    """One suite entry: a name, pass/fail/skip, and a witness string."""

    name: str
    status: str
    witness: str


@dataclass(frozen=True)
class SuiteOptions:
    """Knobs for the sampled parts of the suite."""

    samples: int = 100
    seed: int = 0
    word_length: int = 8
    iso_search_max: int = ISO_SEARCH_MAX_ORDER


def _sampled_action_laws(
    spec: covers.CoverSpec, samples: int, seed: int, max_len: int,
) -> str | None:
    """Check the composition laws of the two actions on random triples.

    Returns a witness string for the first violation, None when clean.
    The identities: monodromy composes on the right, the left action
    composes on the left, the two commute past each other, and both agree
    at the base point.
    """
    rng = Random(seed)
    rank = spec.basis.rank
    for trial in range(samples):
        w1 = groups.random_word(rng, rank, max_len)
        w2 = groups.random_word(rng, rank, max_len)
        x = rng.randrange(spec.n_cosets)
        right = covers.monodromy(spec, covers.monodromy(spec, x, w1), w2)
        if right != covers.monodromy(spec, x, w1 * w2):
            return (
                f"right action broke composing {groups.format_word(w1)!r} then "
                f"{groups.format_word(w2)!r} at fibre point {x}"
            )
        left = covers.left_action(spec, w1, covers.left_action(spec, w2, x))
        if left != covers.left_action(spec, w1 * w2, x):
            return (
                f"left action broke composing {groups.format_word(w1)!r} . "
                f"{groups.format_word(w2)!r} at fibre point {x}"
            )
        mixed_a = covers.left_action(spec, w1, covers.monodromy(spec, x, w2))
        mixed_b = covers.monodromy(spec, covers.left_action(spec, w1, x), w2)
        if mixed_a != mixed_b:
            return (
                f"mixed associativity broke for {groups.format_word(w1)!r} / "
                f"{groups.format_word(w2)!r} at fibre point {x}"
            )
        if covers.left_action(spec, w1, spec.base_coset) != covers.monodromy(
            spec, spec.base_coset, w1
        ):
            return f"actions disagree at the base point on {groups.format_word(w1)!r}"
    return None


def _sampled_lift_agreement(
    cover: covers.CoverGraph, samples: int, seed: int, max_len: int,
) -> str | None:
    rng = Random(seed)
    spec = cover.spec
    for _ in range(samples):
        w = groups.random_word(rng, spec.basis.rank, max_len)
        x = rng.randrange(spec.n_cosets)
        if covers.monodromy(spec, x, w) != covers.monodromy_by_lifting(cover, x, w):
            return (
                f"coset route and dart route disagree on {groups.format_word(w)!r} "
                f"from fibre point {x}"
            )
    return None


def theorem_suite(
    spec: TowerSpec, options: SuiteOptions | None = None,
) -> tuple[CheckResult, ...]:
    """Run every verification against one tower.

    Mathematical failures become fail entries with witnesses; checks
    whose preconditions are unmet are skipped with a reason. Nothing
    raises for a mathematical failure.
    """
    opt = options or SuiteOptions()
    out: list[CheckResult] = []

    def add(name: str, ok: bool, witness: str) -> None:
        out.append(CheckResult(name, "pass" if ok else "fail", witness))

    def skip(name: str, witness: str) -> None:
        out.append(CheckResult(name, "skip", witness))

    add("tower.valid", True, f"depth={spec.depth}, rank={spec.rank}")

    density = tower_mod.dense_leaf_check(spec)
    dense = all(d.surjective for d in density)
    tcov = tower_mod.build_tower_covers(spec)

    for i in range(1, spec.depth + 1):
        problems = groups.check_group_axioms(spec.levels[i - 1])
        add(
            f"level{i}.group_axioms",
            not problems,
            problems[0] if problems else f"order={spec.levels[i - 1].order}",
        )

    for i in range(1, spec.depth + 1):
        cspec = spec.level_spec(i)
        if not cspec.phi_surjective():
            skip(
                f"level{i}.regular",
                f"level map not surjective at level {i}; see level{i}.dense",
            )
            continue
        try:
            regular = covers.is_regular(cspec)
            add(
                f"level{i}.regular",
                regular,
                f"deck order {covers.deck_group(cspec).order} on {cspec.n_cosets} sheets",
            )
        except RuntimeError as exc:
            add(f"level{i}.regular", False, str(exc))

    for d in density:
        add(
            f"level{d.level}.dense",
            d.surjective,
            f"generator images span {d.image_order} of {d.group_order} elements",
        )

    if dense:
        for entry in tower_mod.kernel_chain(spec):
            longest = max((len(w) for w in entry.witness_words), default=0)
            add(
                f"level{entry.level}.kernel_index",
                entry.index == spec.levels[entry.level - 1].order,
                f"index {entry.index}, witness words up to length {longest}",
            )
    else:
        bad = tuple(d.level for d in density if not d.surjective)
        for i in range(1, spec.depth + 1):
            add(
                f"level{i}.kernel_index",
                False,
                f"kernel indices undefined: leaf not dense at level"
                + ("s " if len(bad) != 1 else " ")
                + ", ".join(map(str, bad)),
            )

    for i in range(1, spec.depth + 1):
        cspec = spec.level_spec(i)
        if not cspec.phi_surjective():
            skip(
                f"level{i}.action_laws",
                f"left action undefined: level map not surjective at level {i}",
            )
            skip(
                f"level{i}.lift_vs_coset",
                "sampled on connected covers only",
            )
            continue
        witness = _sampled_action_laws(
            cspec, opt.samples, opt.seed * 1009 + i, opt.word_length
        )
        add(
            f"level{i}.action_laws",
            witness is None,
            witness or f"{opt.samples} sampled word pairs, seed {opt.seed}",
        )
        witness = _sampled_lift_agreement(
            tcov.level(i), opt.samples, opt.seed * 2003 + i, opt.word_length
        )
        add(
            f"level{i}.lift_vs_coset",
            witness is None,
            witness or f"{opt.samples} sampled words, seed {opt.seed}",
        )

    if dense:
        for i in range(1, spec.depth + 1):
            for j in range(i, spec.depth + 1):
                try:
                    quot = borel_quotient(tcov, i, j)
                    add(
                        f"borel.{i}x{j}",
                        True,
                        f"{quot.class_count} classes onto {tcov.level(i).n_vertices} vertices",
                    )
                except RuntimeError as exc:
                    add(f"borel.{i}x{j}", False, str(exc))
    else:
        bad = tuple(d.level for d in density if not d.surjective)
        add(
            "borel.quotients",
            False,
            "balanced quotients undefined: leaf not dense at level"
            + ("s " if len(bad) != 1 else " ")
            + ", ".join(map(str, bad)),
        )

    if dense:
        try:
            rebuilt = reconstruct_tower(spec, opt.iso_search_max)
            for i in range(1, spec.depth + 1):
                route, bijection = covers_isomorphic(
                    covers.build_cover(rebuilt.level_spec(i)),
                    tcov.level(i),
                    opt.iso_search_max,
                )
                add(
                    f"reconstruct.level{i}",
                    bijection is not None,
                    f"route {route}, fibre size {tcov.level(i).n_cosets}",
                )
        except RuntimeError as exc:
            add("reconstruct", False, str(exc))
    else:
        bad = tuple(d.level for d in density if not d.surjective)
        add(
            "reconstruct",
            False,
            "reconstruction undefined: leaf not dense at level"
            + ("s " if len(bad) != 1 else " ")
            + ", ".join(map(str, bad)),
        )

    return tuple(out)
