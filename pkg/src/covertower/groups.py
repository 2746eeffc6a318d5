"""Finite groups as explicit multiplication tables, plus free-group words.

A group of order n has elements 0..n-1 and all structure lives in an
n x n multiplication table. Tables are validated on entry (identity,
inverses, associativity) and never mutated afterwards; every derived
object (subgroup, quotient, homomorphism) re-checks its own invariants
instead of trusting the caller.

Permutations are composed left to right: ``perm_compose(p, q)`` applies
``p`` first and ``q`` second. Every permutation-valued function in the
package follows this convention.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from random import Random
from typing import Iterable, Sequence

from .errors import (
    NoIdentityError,
    NoInverseError,
    NotAssociativeError,
    NotASubgroupError,
    NotNormalError,
    UnknownGeneratorError,
    WordSyntaxError,
)

__all__ = [
    "FiniteGroup",
    "GroupHom",
    "Subgroup",
    "Word",
    "validate_group",
    "check_group_axioms",
    "cyclic_group",
    "direct_product",
    "permutation_group",
    "symmetric_group",
    "perm_compose",
    "perm_inverse",
    "subgroup",
    "trivial_subgroup",
    "generated_subgroup",
    "subgroup_as_group",
    "is_normal",
    "normalizer",
    "centralizer",
    "right_cosets",
    "quotient_group",
    "group_hom",
    "kernel",
    "image",
    "is_surjective",
    "reduce_word",
    "evaluate_word",
    "parse_word",
    "format_word",
    "random_word",
]


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on the elements 0..order-1.

    ``mult[a][b]`` is the product a*b. The identity and the inverse table
    are stored explicitly; both are derived from ``mult`` at validation
    time. ``name`` is display-only and ignored by equality.
    """

    order: int
    mult: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    name: str = field(default="G", compare=False)

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def elements(self) -> range:
        return range(self.order)

    def power(self, a: int, k: int) -> int:
        """a raised to the integer power k (k may be negative or zero)."""
        if k < 0:
            a, k = self.inv[a], -k
        acc = self.identity
        row = self.mult
        for _ in range(k):
            acc = row[acc][a]
        return acc

    def element_order(self, a: int) -> int:
        acc, n = a, 1
        while acc != self.identity:
            acc = self.mult[acc][a]
            n += 1
        return n

    def is_abelian(self) -> bool:
        m = self.mult
        return all(
            m[a][b] == m[b][a]
            for a in range(self.order)
            for b in range(a + 1, self.order)
        )

    def conjugate(self, g: int, x: int) -> int:
        """x conjugated by g, that is inverse(g) * x * g."""
        return self.mult[self.mult[self.inv[g]][x]][g]

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


# -- table validation ------------------------------------------------------

def _check_table_shape(mult: tuple[tuple[int, ...], ...]) -> None:
    n = len(mult)
    if n == 0:
        raise ValueError("multiplication table must be non-empty")
    for i, row in enumerate(mult):
        if len(row) != n:
            raise ValueError(f"row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise ValueError(f"entry {x} in row {i} is outside 0..{n - 1}")


def _find_identity(mult: tuple[tuple[int, ...], ...]) -> int:
    n = len(mult)
    for e in range(n):
        if all(mult[e][a] == a and mult[a][e] == a for a in range(n)):
            return e
    raise NoIdentityError("no two-sided identity element")


def _inverse_table(mult: tuple[tuple[int, ...], ...], e: int) -> tuple[int, ...]:
    out = []
    n = len(mult)
    for a in range(n):
        for b in range(n):
            if mult[a][b] == e and mult[b][a] == e:
                out.append(b)
                break
        else:
            raise NoInverseError(a)
    return tuple(out)


def _left_closure(mult: tuple[tuple[int, ...], ...], gens: Sequence[int]) -> set[int]:
    # left-associated products of the generators, as Light's test requires
    seen = set(gens)
    stack = list(gens)
    while stack:
        row = mult[stack.pop()]
        for s in gens:
            y = row[s]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def _associativity_witness(
    mult: tuple[tuple[int, ...], ...],
) -> tuple[int, int, int] | None:
    """Light's associativity test; returns a violating triple or None.

    A greedy generating set is grown until its left-associated closure is
    the whole table, then each generator g is checked against all pairs.
    This is a complete decision procedure and avoids the cubic scan.
    """
    n = len(mult)
    gens: list[int] = []
    covered: set[int] = set()
    while len(covered) < n:
        gens.append(next(i for i in range(n) if i not in covered))
        covered = _left_closure(mult, gens)
    for g in gens:
        rowg = mult[g]
        for a in range(n):
            left = mult[mult[a][g]]
            rowa = mult[a]
            for b in range(n):
                if left[b] != rowa[rowg[b]]:
                    return (a, g, b)
    return None


def validate_group(mult: Sequence[Sequence[int]], name: str = "G") -> FiniteGroup:
    """Check a raw multiplication table and wrap it as a FiniteGroup.

    Raises NoIdentityError, NoInverseError or NotAssociativeError with the
    witnessing elements; malformed shapes raise ValueError.
    """
    rows = tuple(tuple(r) for r in mult)
    _check_table_shape(rows)
    e = _find_identity(rows)
    inv = _inverse_table(rows, e)
    bad = _associativity_witness(rows)
    if bad is not None:
        raise NotAssociativeError(*bad)
    return FiniteGroup(len(rows), rows, e, inv, name)


def generating_set(group: FiniteGroup) -> tuple[int, ...]:
    """A small generating set, grown greedily over ascending elements.

    Deterministic; at most log2(order) elements. The trivial group yields
    the empty tuple.
    """
    gens: list[int] = []
    covered = {group.identity}
    while len(covered) < group.order:
        gens.append(next(i for i in range(group.order) if i not in covered))
        covered = {group.identity}
        stack = [group.identity]
        while stack:
            row = group.mult[stack.pop()]
            for s in gens:
                y = row[s]
                if y not in covered:
                    covered.add(y)
                    stack.append(y)
    return tuple(gens)


def check_group_axioms(group: FiniteGroup) -> list[str]:
    """Re-verify the group axioms of an existing FiniteGroup.

    Returns a list of human-readable violations, empty when the table is a
    group and the stored identity and inverse tables match it. Used by the
    verification suite, which reports rather than raises.
    """
    problems: list[str] = []
    try:
        _check_table_shape(group.mult)
    except ValueError as exc:
        return [str(exc)]
    try:
        e = _find_identity(group.mult)
        if e != group.identity:
            problems.append(f"stored identity {group.identity}, table says {e}")
    except NoIdentityError as exc:
        problems.append(str(exc))
        return problems
    try:
        inv = _inverse_table(group.mult, e)
        if inv != group.inv:
            problems.append("stored inverse table disagrees with the mult table")
    except NoInverseError as exc:
        problems.append(str(exc))
    bad = _associativity_witness(group.mult)
    if bad is not None:
        a, g, b = bad
        problems.append(f"associativity fails at ({a}, {g}, {b})")
    return problems


# -- standard constructions ------------------------------------------------

def cyclic_group(n: int, name: str | None = None) -> FiniteGroup:
    """The cyclic group of order n, with addition mod n."""
    if n < 1:
        raise ValueError(f"cyclic group order must be positive, got {n}")
    mult = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    inv = tuple((-a) % n for a in range(n))
    return FiniteGroup(n, mult, 0, inv, name if name is not None else f"Z{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """The direct product; the pair (a, b) is encoded as a * |H| + b."""
    nh = h.order
    order = g.order * nh
    mult = tuple(
        tuple(
            g.mult[a1][a2] * nh + h.mult[b1][b2]
            for a2 in range(g.order)
            for b2 in range(nh)
        )
        for a1 in range(g.order)
        for b1 in range(nh)
    )
    identity = g.identity * nh + h.identity
    inv = tuple(
        g.inv[a] * nh + h.inv[b] for a in range(g.order) for b in range(nh)
    )
    return FiniteGroup(
        order, mult, identity, inv,
        name if name is not None else f"{g.name}x{h.name}",
    )


def perm_compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Apply p first, then q."""
    return tuple(q[x] for x in p)


def perm_inverse(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _check_permutation(p: Sequence[int], degree: int) -> tuple[int, ...]:
    t = tuple(p)
    if len(t) != degree or sorted(t) != list(range(degree)):
        raise ValueError(f"{t!r} is not a permutation of 0..{degree - 1}")
    return t


def permutation_group(
    generators: Sequence[Sequence[int]], name: str = "perm",
) -> tuple[FiniteGroup, tuple[tuple[int, ...], ...]]:
    """Close a set of permutations under composition.

    Returns the group together with the element list: elements are sorted
    lexicographically by image tuple, so the identity is always index 0.
    """
    if not generators:
        raise ValueError("need at least one generating permutation")
    degree = len(generators[0])
    gens = [_check_permutation(p, degree) for p in generators]
    identity = tuple(range(degree))
    elems = {identity}
    stack = [identity]
    while stack:
        x = stack.pop()
        for g in gens:
            y = perm_compose(x, g)
            if y not in elems:
                elems.add(y)
                stack.append(y)
    ordered = tuple(sorted(elems))
    index = {p: i for i, p in enumerate(ordered)}
    mult = tuple(
        tuple(index[perm_compose(a, b)] for b in ordered) for a in ordered
    )
    inv = tuple(index[perm_inverse(a)] for a in ordered)
    return FiniteGroup(len(ordered), mult, index[identity], inv, name), ordered


def symmetric_group(n: int, name: str | None = None) -> tuple[FiniteGroup, tuple[tuple[int, ...], ...]]:
    """All permutations of 0..n-1 in lexicographic order."""
    ordered = tuple(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(ordered)}
    mult = tuple(
        tuple(index[perm_compose(a, b)] for b in ordered) for a in ordered
    )
    inv = tuple(index[perm_inverse(a)] for a in ordered)
    return FiniteGroup(
        len(ordered), mult, index[tuple(range(n))], inv,
        name if name is not None else f"S{n}",
    ), ordered


# -- subgroups -------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    """A verified subgroup, stored as a sorted tuple of parent elements."""

    parent: FiniteGroup
    elements: tuple[int, ...]
    _members: frozenset[int] = field(repr=False, compare=False, default=frozenset())

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._members

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent.name})"


def subgroup(parent: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Wrap a set of elements as a subgroup, verifying closure.

    Closure is checked, never silently completed: a non-closed input is an
    error, not a request to generate.
    """
    elems = tuple(sorted(set(elements)))
    for x in elems:
        if not 0 <= x < parent.order:
            raise NotASubgroupError(f"element {x} is outside the parent group")
    members = frozenset(elems)
    if parent.identity not in members:
        raise NotASubgroupError(f"identity {parent.identity} is missing")
    for a in elems:
        if parent.inv[a] not in members:
            raise NotASubgroupError(f"inverse of {a} ({parent.inv[a]}) is missing")
        row = parent.mult[a]
        for b in elems:
            if row[b] not in members:
                raise NotASubgroupError(f"product {a}*{b} = {row[b]} is missing")
    return Subgroup(parent, elems)


def trivial_subgroup(parent: FiniteGroup) -> Subgroup:
    return Subgroup(parent, (parent.identity,))


def generated_subgroup(parent: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """The subgroup generated by the given elements."""
    seen = {parent.identity}
    gen_list = []
    for g in gens:
        if not 0 <= g < parent.order:
            raise ValueError(f"generator {g} is outside the parent group")
        gen_list.append(g)
        seen.add(g)
    stack = list(seen)
    while stack:
        row = parent.mult[stack.pop()]
        for g in gen_list:
            y = row[g]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    # finite order makes inverses reachable, so this is already a subgroup
    return subgroup(parent, seen)


def subgroup_as_group(
    sub: Subgroup, name: str | None = None,
) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Reindex a subgroup as a standalone group.

    Returns the group together with the embedding: entry i is the parent
    element that the new element i stands for.
    """
    elems = sub.elements
    index = {g: i for i, g in enumerate(elems)}
    parent = sub.parent
    mult = tuple(
        tuple(index[parent.mult[a][b]] for b in elems) for a in elems
    )
    inv = tuple(index[parent.inv[a]] for a in elems)
    return FiniteGroup(
        len(elems), mult, index[parent.identity], inv,
        name if name is not None else f"{parent.name}|sub{len(elems)}",
    ), elems


def is_normal(parent: FiniteGroup, sub: Subgroup) -> bool:
    if sub.parent is not parent and sub.parent != parent:
        raise ValueError("subgroup belongs to a different group")
    return all(
        parent.conjugate(g, x) in sub
        for g in range(parent.order)
        for x in sub.elements
    )


def normalizer(parent: FiniteGroup, sub: Subgroup) -> Subgroup:
    """Largest subgroup in which ``sub`` is normal."""
    members = [
        g for g in range(parent.order)
        if all(parent.conjugate(g, x) in sub for x in sub.elements)
    ]
    return subgroup(parent, members)


def centralizer(parent: FiniteGroup, g: int) -> Subgroup:
    """All elements commuting with g; always contains the identity."""
    if not 0 <= g < parent.order:
        raise ValueError(f"element {g} is outside the group")
    row = parent.mult[g]
    return subgroup(
        parent,
        (x for x in range(parent.order) if parent.mult[x][g] == row[x]),
    )


def right_cosets(
    parent: FiniteGroup, sub: Subgroup,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Right cosets ``sub * g``, each represented by its minimal element.

    Returns (reps, coset_of): reps[i] is the representative of coset i and
    coset_of[g] the coset index of element g. Scanning elements in
    ascending order makes reps[i] the minimum of coset i and orders the
    cosets by that minimum, so the numbering is deterministic.
    """
    coset_of = [-1] * parent.order
    reps: list[int] = []
    for g in range(parent.order):
        if coset_of[g] < 0:
            cid = len(reps)
            reps.append(g)
            for k in sub.elements:
                coset_of[parent.mult[k][g]] = cid
    return tuple(reps), tuple(coset_of)


def quotient_group(
    parent: FiniteGroup, normal_sub: Subgroup, name: str | None = None,
) -> tuple[FiniteGroup, "GroupHom"]:
    """The quotient by a normal subgroup, with the projection map.

    Cosets are numbered by their minimal elements; multiplying the
    representatives is well-defined exactly because the subgroup is
    normal, which is verified first.
    """
    if not is_normal(parent, normal_sub):
        bad = next(
            (g, x)
            for g in range(parent.order)
            for x in normal_sub.elements
            if parent.conjugate(g, x) not in normal_sub
        )
        raise NotNormalError(bad[0], bad[1], parent.conjugate(*bad))
    reps, coset_of = right_cosets(parent, normal_sub)
    m = len(reps)
    mult = tuple(
        tuple(coset_of[parent.mult[reps[a]][reps[b]]] for b in range(m))
        for a in range(m)
    )
    identity = coset_of[parent.identity]
    inv = tuple(coset_of[parent.inv[reps[a]]] for a in range(m))
    quot = FiniteGroup(
        m, mult, identity, inv,
        name if name is not None else f"{parent.name}/N{normal_sub.order}",
    )
    return quot, GroupHom(parent, quot, tuple(coset_of))


# -- homomorphisms ---------------------------------------------------------

@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by its full image table."""

    source: FiniteGroup
    target: FiniteGroup
    image: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.image[a]

    def __repr__(self) -> str:
        return f"GroupHom({self.source.name} -> {self.target.name})"


def group_hom(
    source: FiniteGroup, target: FiniteGroup, image: Sequence[int],
) -> GroupHom:
    """Build a homomorphism, verifying multiplicativity on every pair."""
    img = tuple(image)
    if len(img) != source.order:
        raise ValueError(
            f"image table has {len(img)} entries for a group of order {source.order}"
        )
    for v in img:
        if not 0 <= v < target.order:
            raise ValueError(f"image value {v} is outside the target group")
    if img[source.identity] != target.identity:
        raise ValueError("identity is not carried to the identity")
    for a in range(source.order):
        rowa = source.mult[a]
        ia = img[a]
        for b in range(source.order):
            if img[rowa[b]] != target.mult[ia][img[b]]:
                raise ValueError(
                    f"not multiplicative at ({a}, {b}): "
                    f"f({a}*{b}) = {img[rowa[b]]} but f({a})*f({b}) = "
                    f"{target.mult[ia][img[b]]}"
                )
    return GroupHom(source, target, img)


def kernel(h: GroupHom) -> Subgroup:
    e = h.target.identity
    return subgroup(h.source, (a for a in range(h.source.order) if h.image[a] == e))


def image(h: GroupHom) -> Subgroup:
    return subgroup(h.target, set(h.image))


def is_surjective(h: GroupHom) -> bool:
    return len(set(h.image)) == h.target.order


# -- free-group words ------------------------------------------------------

@dataclass(frozen=True)
class Word:
    """A freely reduced word in abstract generators.

    Letters are (generator index, sign) pairs with sign +1 or -1. The
    reduced form is an invariant of the type: construct raw letter lists
    through ``reduce_word``.
    """

    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        for g, s in self.letters:
            if g < 0 or s not in (1, -1):
                raise ValueError(f"bad letter ({g}, {s})")
        for (g1, s1), (g2, s2) in zip(self.letters, self.letters[1:]):
            if g1 == g2 and s1 == -s2:
                raise ValueError("word is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return reduce_word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = Word()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


def reduce_word(letters: Iterable[tuple[int, int]]) -> Word:
    """Freely reduce a letter sequence with a stack pass."""
    out: list[tuple[int, int]] = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return Word(tuple(out))


def evaluate_word(
    group: FiniteGroup, images: Sequence[int], word: Word,
) -> int:
    """Evaluate a word under generator images, multiplying left to right."""
    acc = group.identity
    for g, s in word.letters:
        if g >= len(images):
            raise UnknownGeneratorError(g, len(images))
        v = images[g] if s > 0 else group.inv[images[g]]
        acc = group.mult[acc][v]
    return acc


_TOKEN_RE = re.compile(r"^([a-z])(')?(?:\^(\d+))?$")


def parse_word(text: str, rank: int) -> Word:
    """Parse the word grammar: tokens like ``a``, ``b'``, ``a^3``, ``c'^2``.

    Tokens are whitespace-separated; a trailing apostrophe inverts and a
    caret repeats. The single token ``1`` denotes the empty word. Letters
    are assigned to generators in order, ``a`` first.
    """
    letters: list[tuple[int, int]] = []
    for token in text.split():
        if token == "1":
            continue
        m = _TOKEN_RE.match(token)
        if m is None:
            raise WordSyntaxError(f"bad token {token!r}")
        g = ord(m.group(1)) - ord("a")
        if g >= rank:
            raise UnknownGeneratorError(g, rank)
        sign = -1 if m.group(2) else 1
        count = int(m.group(3)) if m.group(3) else 1
        letters.extend((g, sign) for _ in range(count))
    return reduce_word(letters)


def format_word(word: Word) -> str:
    """Inverse of parse_word; the empty word renders as ``1``."""
    if not word.letters:
        return "1"
    parts: list[str] = []
    run_letter: tuple[int, int] | None = None
    run_len = 0

    def flush() -> None:
        if run_letter is None:
            return
        g, s = run_letter
        text = chr(ord("a") + g) if g < 26 else f"g{g}"
        if s < 0:
            text += "'"
        if run_len > 1:
            text += f"^{run_len}"
        parts.append(text)

    for letter in word.letters:
        if letter == run_letter:
            run_len += 1
        else:
            flush()
            run_letter, run_len = letter, 1
    flush()
    return " ".join(parts)


def random_word(rng: Random, rank: int, max_len: int = 8) -> Word:
    """A freely reduced random word; used for sampled identity checks."""
    if rank < 1:
        return Word()
    length = rng.randint(0, max_len)
    return reduce_word(
        (rng.randrange(rank), rng.choice((1, -1))) for _ in range(length)
    )
