"""Command line front end and the sectioned configuration format.

A configuration document is line oriented: ``[section]`` headers with
``key = value`` lines, ``#`` comments, and blank lines ignored. Sections:

``[graph]``
    ``vertices = N``, one ``edge = u v`` line per undirected edge, and an
    optional ``base = v`` (default 0).

``[group NAME]``
    exactly one construction: ``cyclic = N``; ``product = A B`` (named
    groups, defined earlier in the file); ``table = r00 r01; r10 r11``
    (rows split by ``;``); or repeated ``perm = 1 0 2`` generator lines.

``[tower]``
    one ``level = NAME : images`` line per level, deepest last. Images
    are comma separated, each an element index or ``perm 1 0 2`` for
    permutation groups. From the second level on, append the bond after
    ``|``: the word ``mod`` (componentwise reduction, for cyclic groups
    and products of cyclics) or an explicit image table. The shorthand
    ``solenoid = p=2 depth=3`` expands to the whole mod-p ladder.

``[cover]``
    a single cover instead of a tower: ``group = NAME``,
    ``images = ...`` and optional ``subgroup = i j k`` (element indices;
    defaults to the trivial subgroup).

Exactly one of ``[tower]`` and ``[cover]`` must be present.

Words on the command line use the letters a, b, c, ... in chord order;
a trailing apostrophe inverts (``a'``), a caret repeats (``a^3``), and
tokens are whitespace separated. ``1`` is the empty word.

Exit codes: 0 success, 1 a verification check failed, 2 malformed input.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import borel, covers, graphs, groups, tower as tower_mod
from .borel import CheckResult, SuiteOptions
from .errors import (
    ConfigSyntaxError,
    DuplicateSectionError,
    Error,
    NotDenseError,
    NotRegularError,
    NotSurjectiveError,
    UnknownReferenceError,
)

__all__ = [
    "GraphSection",
    "GroupDef",
    "LevelDef",
    "CoverDef",
    "ConfigDocument",
    "Report",
    "SCHEMA_VERSION",
    "parse_config",
    "render_config",
    "export_dot",
    "render_human",
    "render_machine",
    "main",
]

SCHEMA_VERSION = 1


# -- document model --------------------------------------------------------

@dataclass(frozen=True)
class GraphSection:
    vertices: int
    edges: tuple[tuple[int, int], ...]
    base: int


@dataclass(frozen=True)
class GroupDef:
    name: str
    kind: str  # cyclic | product | table | perm
    cyclic_n: int | None = None
    factors: tuple[str, ...] | None = None
    rows: tuple[tuple[int, ...], ...] | None = None
    perms: tuple[tuple[int, ...], ...] | None = None


@dataclass(frozen=True)
class LevelDef:
    group: str
    images: tuple[int, ...]
    bond: str | tuple[int, ...] | None  # None (first level) | "mod" | table


@dataclass(frozen=True)
class CoverDef:
    group: str
    images: tuple[int, ...]
    subgroup_elements: tuple[int, ...]


@dataclass(frozen=True)
class ConfigDocument:
    """A parsed document: declarative fields compare, built objects ride
    along uncompared so round trips can be tested structurally."""

    graph: GraphSection
    group_defs: tuple[GroupDef, ...]
    tower_levels: tuple[LevelDef, ...] | None
    cover: CoverDef | None
    built_graph: graphs.BaseGraph = field(compare=False, repr=False, default=None)  # type: ignore[assignment]
    built_basis: graphs.Pi1Basis = field(compare=False, repr=False, default=None)  # type: ignore[assignment]
    built_groups: dict = field(compare=False, repr=False, default_factory=dict)
    built_tower: tower_mod.TowerSpec | None = field(compare=False, repr=False, default=None)
    built_cover: covers.CoverSpec | None = field(compare=False, repr=False, default=None)


# -- parsing ---------------------------------------------------------------

_HEADER_RE = re.compile(r"^\[([^\]]+)\]$")
_SOLENOID_RE = re.compile(r"^p\s*=\s*(\d+)\s+depth\s*=\s*(\d+)$")


def _ints(text: str, line: int) -> list[int]:
    out = []
    for token in text.split():
        try:
            out.append(int(token))
        except ValueError:
            raise ConfigSyntaxError(f"expected an integer, got {token!r}", line) from None
    return out


class _RawSection:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.items: list[tuple[str, str, int]] = []


def _split_sections(text: str) -> list[_RawSection]:
    sections: list[_RawSection] = []
    current: _RawSection | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER_RE.match(line)
        if m:
            current = _RawSection(m.group(1).strip(), lineno)
            sections.append(current)
            continue
        if "=" not in line:
            raise ConfigSyntaxError(f"expected 'key = value', got {line!r}", lineno)
        if current is None:
            raise ConfigSyntaxError("key outside any section", lineno)
        key, value = line.split("=", 1)
        current.items.append((key.strip(), value.strip(), lineno))
    return sections


def _parse_graph(sec: _RawSection) -> GraphSection:
    vertices: int | None = None
    base = 0
    edges: list[tuple[int, int]] = []
    for key, value, lineno in sec.items:
        if key == "vertices":
            vertices = _ints(value, lineno)[0]
        elif key == "edge":
            pair = _ints(value, lineno)
            if len(pair) != 2:
                raise ConfigSyntaxError("an edge is two vertex numbers", lineno)
            edges.append((pair[0], pair[1]))
        elif key == "base":
            base = _ints(value, lineno)[0]
        else:
            raise ConfigSyntaxError(f"unknown graph key {key!r}", lineno)
    if vertices is None:
        raise ConfigSyntaxError("graph section needs a 'vertices' line", sec.line)
    return GraphSection(vertices, tuple(edges), base)


def _parse_group(sec: _RawSection, name: str) -> GroupDef:
    kind: str | None = None
    cyclic_n = None
    factors = None
    rows = None
    perms: list[tuple[int, ...]] = []
    for key, value, lineno in sec.items:
        if key == "cyclic":
            kind, cyclic_n = "cyclic", _ints(value, lineno)[0]
        elif key == "product":
            kind, factors = "product", tuple(value.split())
            if len(factors) < 2:
                raise ConfigSyntaxError("a product needs at least two named groups", lineno)
        elif key == "table":
            kind = "table"
            rows = tuple(
                tuple(_ints(row, lineno)) for row in value.split(";") if row.strip()
            )
        elif key == "perm":
            kind = "perm"
            perms.append(tuple(_ints(value, lineno)))
        else:
            raise ConfigSyntaxError(f"unknown group key {key!r}", lineno)
    if kind is None:
        raise ConfigSyntaxError(f"group {name!r} has no construction", sec.line)
    return GroupDef(
        name, kind, cyclic_n=cyclic_n, factors=factors, rows=rows,
        perms=tuple(perms) if perms else None,
    )


@dataclass
class _BuiltGroup:
    group: groups.FiniteGroup
    cyclic_factors: tuple[int, ...] | None  # for mod bonds
    perm_elements: tuple[tuple[int, ...], ...] | None  # for perm element syntax


def _build_group(gdef: GroupDef, registry: dict[str, _BuiltGroup]) -> _BuiltGroup:
    if gdef.kind == "cyclic":
        return _BuiltGroup(
            groups.cyclic_group(gdef.cyclic_n, name=gdef.name), (gdef.cyclic_n,), None
        )
    if gdef.kind == "product":
        parts = []
        for ref in gdef.factors or ():
            if ref not in registry:
                raise UnknownReferenceError(ref)
            parts.append(registry[ref])
        built = parts[0].group
        factors = parts[0].cyclic_factors
        for nxt in parts[1:]:
            built = groups.direct_product(built, nxt.group)
            if factors is not None and nxt.cyclic_factors is not None:
                factors = factors + nxt.cyclic_factors
            else:
                factors = None
        built = groups.FiniteGroup(
            built.order, built.mult, built.identity, built.inv, gdef.name
        )
        return _BuiltGroup(built, factors, None)
    if gdef.kind == "table":
        return _BuiltGroup(groups.validate_group(gdef.rows or (), name=gdef.name), None, None)
    if gdef.kind == "perm":
        grp, elements = groups.permutation_group(gdef.perms or (), name=gdef.name)
        return _BuiltGroup(grp, None, elements)
    raise ConfigSyntaxError(f"unknown group kind {gdef.kind!r}")


def _resolve_element(token: str, built: _BuiltGroup, lineno: int) -> int:
    token = token.strip()
    if token.startswith("perm"):
        if built.perm_elements is None:
            raise ConfigSyntaxError(
                f"group {built.group.name!r} is not a permutation group", lineno
            )
        images = tuple(_ints(token[4:], lineno))
        try:
            return built.perm_elements.index(images)
        except ValueError:
            raise ConfigSyntaxError(
                f"{images!r} is not an element of group {built.group.name!r}", lineno
            ) from None
    value = _ints(token, lineno)
    if len(value) != 1:
        raise ConfigSyntaxError(f"expected one element, got {token!r}", lineno)
    if not 0 <= value[0] < built.group.order:
        raise ConfigSyntaxError(
            f"element {value[0]} outside group {built.group.name!r} "
            f"of order {built.group.order}", lineno
        )
    return value[0]


def _parse_images(text: str, built: _BuiltGroup, lineno: int) -> tuple[int, ...]:
    if not text.strip():
        return ()
    return tuple(_resolve_element(part, built, lineno) for part in text.split(","))


def _mod_bond_table(
    upper: _BuiltGroup, lower: _BuiltGroup, lineno: int,
) -> list[int]:
    uf, lf = upper.cyclic_factors, lower.cyclic_factors
    if uf is None or lf is None or len(uf) != len(lf):
        raise ConfigSyntaxError(
            "a 'mod' bond needs cyclic groups or matching products of cyclics", lineno
        )
    table = []
    for x in range(upper.group.order):
        digits = []
        rem = x
        for n in reversed(uf):
            digits.append(rem % n)
            rem //= n
        digits.reverse()
        enc = 0
        for d, n in zip(digits, lf):
            enc = enc * n + (d % n)
        table.append(enc)
    return table


def _parse_tower_section(
    sec: _RawSection, group_defs: list[GroupDef], seen_names: set[str],
) -> list[tuple[LevelDef, int]]:
    """Returns level defs with their line numbers; expands the solenoid
    shorthand into group defs and levels."""
    levels: list[tuple[LevelDef, int]] = []
    for key, value, lineno in sec.items:
        if key == "solenoid":
            if levels:
                raise ConfigSyntaxError(
                    "solenoid shorthand cannot be mixed with level lines", lineno
                )
            m = _SOLENOID_RE.match(value)
            if m is None:
                raise ConfigSyntaxError(
                    f"expected 'p=<int> depth=<int>', got {value!r}", lineno
                )
            p, depth = int(m.group(1)), int(m.group(2))
            if p < 2 or depth < 1:
                raise ConfigSyntaxError("solenoid needs p >= 2 and depth >= 1", lineno)
            for i in range(1, depth + 1):
                name = f"Z{p ** i}"
                if name in seen_names:
                    raise DuplicateSectionError(f"group {name}")
                seen_names.add(name)
                group_defs.append(GroupDef(name, "cyclic", cyclic_n=p ** i))
                levels.append(
                    (LevelDef(name, (1,), None if i == 1 else "mod"), lineno)
                )
        elif key == "level":
            if ":" not in value:
                raise ConfigSyntaxError(
                    "a level line is 'NAME : images' with an optional '| bond'", lineno
                )
            gname, rest = value.split(":", 1)
            bond: str | tuple[int, ...] | None = None
            if "|" in rest:
                images_text, bond_text = rest.split("|", 1)
                bond_text = bond_text.strip()
                bond = "mod" if bond_text == "mod" else tuple(_ints(bond_text, lineno))
            else:
                images_text = rest
            levels.append(
                (LevelDef(gname.strip(), ("RAW", images_text.strip()), bond), lineno)  # type: ignore[arg-type]
            )
        else:
            raise ConfigSyntaxError(f"unknown tower key {key!r}", lineno)
    if not levels:
        raise ConfigSyntaxError("tower section has no levels", sec.line)
    return levels


def parse_config(text: str) -> ConfigDocument:
    """Parse and build a document; every reference is resolved and every
    constructed object validated before this returns."""
    graph_sec: GraphSection | None = None
    group_defs: list[GroupDef] = []
    seen_groups: set[str] = set()
    tower_raw: list[tuple[LevelDef, int]] | None = None
    cover_items: list[tuple[str, str, int]] | None = None
    seen_sections: set[str] = set()

    for sec in _split_sections(text):
        if sec.name == "graph":
            if "graph" in seen_sections:
                raise DuplicateSectionError("graph")
            seen_sections.add("graph")
            graph_sec = _parse_graph(sec)
        elif sec.name.startswith("group"):
            parts = sec.name.split(None, 1)
            if len(parts) != 2 or not parts[1].strip():
                raise ConfigSyntaxError("group sections are named: [group NAME]", sec.line)
            name = parts[1].strip()
            if name in seen_groups:
                raise DuplicateSectionError(f"group {name}")
            seen_groups.add(name)
            group_defs.append(_parse_group(sec, name))
        elif sec.name == "tower":
            if "tower" in seen_sections:
                raise DuplicateSectionError("tower")
            if "cover" in seen_sections:
                raise ConfigSyntaxError(
                    "a document holds exactly one of [tower] or [cover]", sec.line
                )
            seen_sections.add("tower")
            tower_raw = _parse_tower_section(sec, group_defs, seen_groups)
        elif sec.name == "cover":
            if "cover" in seen_sections:
                raise DuplicateSectionError("cover")
            if "tower" in seen_sections:
                raise ConfigSyntaxError(
                    "a document holds exactly one of [tower] or [cover]", sec.line
                )
            seen_sections.add("cover")
            cover_items = sec.items
        else:
            raise ConfigSyntaxError(f"unknown section {sec.name!r}", sec.line)

    if graph_sec is None:
        raise ConfigSyntaxError("missing [graph] section")
    if tower_raw is None and cover_items is None:
        raise ConfigSyntaxError("missing [tower] or [cover] section")

    built_graph = graphs.build_graph(
        graph_sec.vertices, graph_sec.edges, graph_sec.base
    )
    basis = graphs.spanning_tree(built_graph)

    registry: dict[str, _BuiltGroup] = {}
    for gdef in group_defs:
        registry[gdef.name] = _build_group(gdef, registry)

    tower_levels: tuple[LevelDef, ...] | None = None
    built_tower: tower_mod.TowerSpec | None = None
    cover_def: CoverDef | None = None
    built_cover: covers.CoverSpec | None = None

    if tower_raw is not None:
        resolved: list[LevelDef] = []
        for ldef, lineno in tower_raw:
            if ldef.group not in registry:
                raise UnknownReferenceError(ldef.group)
            built = registry[ldef.group]
            if ldef.images and ldef.images[0] == "RAW":
                images = _parse_images(ldef.images[1], built, lineno)  # type: ignore[index]
            else:
                images = ldef.images
            resolved.append(LevelDef(ldef.group, images, ldef.bond))
        tower_levels = tuple(resolved)
        level_groups = [registry[ld.group].group for ld in resolved]
        bonds: list[groups.GroupHom] = []
        for k, ld in enumerate(resolved):
            if k == 0:
                if ld.bond is not None:
                    raise ConfigSyntaxError("the first level takes no bond", tower_raw[k][1])
                continue
            lineno = tower_raw[k][1]
            if ld.bond is None:
                raise ConfigSyntaxError(
                    f"level {k + 1} needs a bond to level {k}", lineno
                )
            upper, lower = registry[ld.group], registry[resolved[k - 1].group]
            if ld.bond == "mod":
                table = _mod_bond_table(upper, lower, lineno)
            else:
                table = list(ld.bond)
                if len(table) != upper.group.order:
                    raise ConfigSyntaxError(
                        f"bond table has {len(table)} entries, group order is "
                        f"{upper.group.order}", lineno
                    )
            bonds.append(groups.group_hom(upper.group, lower.group, table))
        built_tower = tower_mod.validate_tower(
            basis, level_groups, [ld.images for ld in resolved], bonds
        )
    else:
        assert cover_items is not None
        gname: str | None = None
        images_text: tuple[str, int] | None = None
        sub_elements: tuple[int, ...] | None = None
        for key, value, lineno in cover_items:
            if key == "group":
                gname = value
            elif key == "images":
                images_text = (value, lineno)
            elif key == "subgroup":
                sub_elements = tuple(_ints(value, lineno))
            else:
                raise ConfigSyntaxError(f"unknown cover key {key!r}", lineno)
        if gname is None or images_text is None:
            raise ConfigSyntaxError("cover section needs 'group' and 'images' lines")
        if gname not in registry:
            raise UnknownReferenceError(gname)
        built = registry[gname]
        images = _parse_images(images_text[0], built, images_text[1])
        if sub_elements is None:
            sub_elements = (built.group.identity,)
        cover_def = CoverDef(gname, images, sub_elements)
        built_cover = covers.CoverSpec(
            basis, built.group, images,
            groups.subgroup(built.group, sub_elements),
        )

    return ConfigDocument(
        graph=graph_sec,
        group_defs=tuple(group_defs),
        tower_levels=tower_levels,
        cover=cover_def,
        built_graph=built_graph,
        built_basis=basis,
        built_groups={name: b.group for name, b in registry.items()},
        built_tower=built_tower,
        built_cover=built_cover,
    )


def render_config(doc: ConfigDocument) -> str:
    """Serialize a document; parsing the result reproduces the document."""
    lines = ["[graph]", f"vertices = {doc.graph.vertices}"]
    lines += [f"edge = {u} {v}" for u, v in doc.graph.edges]
    lines.append(f"base = {doc.graph.base}")
    for gdef in doc.group_defs:
        lines.append("")
        lines.append(f"[group {gdef.name}]")
        if gdef.kind == "cyclic":
            lines.append(f"cyclic = {gdef.cyclic_n}")
        elif gdef.kind == "product":
            lines.append("product = " + " ".join(gdef.factors or ()))
        elif gdef.kind == "table":
            lines.append(
                "table = " + "; ".join(" ".join(map(str, row)) for row in gdef.rows or ())
            )
        elif gdef.kind == "perm":
            lines += ["perm = " + " ".join(map(str, p)) for p in gdef.perms or ()]
    if doc.tower_levels is not None:
        lines.append("")
        lines.append("[tower]")
        for ldef in doc.tower_levels:
            text = f"level = {ldef.group} : " + ", ".join(map(str, ldef.images))
            if ldef.bond == "mod":
                text += " | mod"
            elif ldef.bond is not None:
                text += " | " + " ".join(map(str, ldef.bond))
            lines.append(text)
    if doc.cover is not None:
        lines.append("")
        lines.append("[cover]")
        lines.append(f"group = {doc.cover.group}")
        lines.append("images = " + ", ".join(map(str, doc.cover.images)))
        lines.append("subgroup = " + " ".join(map(str, doc.cover.subgroup_elements)))
    return "\n".join(lines) + "\n"


# -- DOT export ------------------------------------------------------------

def export_dot(cover: covers.CoverGraph) -> str:
    """Deterministic DOT text for a cover.

    Vertices are named v<base>_<sheet>; each undirected lifted edge gets
    one line, tree lifts dashed and chord lifts labeled with their
    generator letter. Equal inputs give byte-identical output.
    """
    spec = cover.spec
    g = spec.base
    basis = spec.basis
    gen_of_chord = {d: i for i, d in enumerate(basis.chords)}
    nc = cover.n_cosets
    lines = ["graph cover {"]
    for vid in range(cover.n_vertices):
        v, c = divmod(vid, nc)
        lines.append(f"  v{v}_{c};")
    for d in range(g.n_darts):
        if d > g.dart_reverse[d]:
            continue  # one orientation per undirected edge
        for c in range(nc):
            lifted = d * nc + c
            sv, sc = divmod(cover.dart_source[lifted], nc)
            tv, tc = divmod(cover.dart_target[lifted], nc)
            if d in basis.tree:
                lines.append(f"  v{sv}_{sc} -- v{tv}_{tc} [style=dashed];")
            else:
                name = basis.generator_names[gen_of_chord[d]]
                lines.append(f'  v{sv}_{sc} -- v{tv}_{tc} [label="{name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- reports ---------------------------------------------------------------

@dataclass(frozen=True)
class Report:
    """An ordered list of check entries plus the schema version."""

    entries: tuple[CheckResult, ...]
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> int:
        return sum(1 for e in self.entries if e.status == "pass")

    @property
    def failed(self) -> int:
        return sum(1 for e in self.entries if e.status == "fail")

    @property
    def skipped(self) -> int:
        return sum(1 for e in self.entries if e.status == "skip")

    def exit_code(self) -> int:
        return 1 if self.failed else 0


def render_human(report: Report) -> str:
    lines = []
    for e in report.entries:
        lines.append(f"[{e.status.upper():<4}] {e.name}  ({e.witness})")
    lines.append(
        f"{report.passed} passed, {report.failed} failed, {report.skipped} skipped"
    )
    return "\n".join(lines) + "\n"


def _sanitize(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " ")


def render_machine(report: Report) -> str:
    lines = [f"schema\tcovertower.report\t{report.schema_version}"]
    for e in report.entries:
        lines.append(f"check\t{e.name}\t{e.status}\t{_sanitize(e.witness)}")
    lines.append(f"summary\t{report.passed}\t{report.failed}\t{report.skipped}")
    return "\n".join(lines) + "\n"


def _print_report(report: Report, fmt: str, notes: Sequence[str] = ()) -> None:
    text = render_machine(report) if fmt == "machine" else render_human(report)
    sys.stdout.write(text)
    for note in notes:
        if fmt == "machine":
            sys.stdout.write(f"note\t{_sanitize(note)}\n")
        else:
            sys.stdout.write(f"note: {note}\n")


# -- commands --------------------------------------------------------------

def _load(args: argparse.Namespace) -> ConfigDocument:
    with open(args.config, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _select_cover_spec(doc: ConfigDocument, depth: int | None) -> covers.CoverSpec:
    if doc.built_cover is not None:
        return doc.built_cover
    assert doc.built_tower is not None
    level = depth if depth is not None else doc.built_tower.depth
    return doc.built_tower.level_spec(level)


def _cmd_validate(args: argparse.Namespace) -> int:
    doc = _load(args)
    g = doc.built_graph
    print(
        f"graph: {g.vertex_count} vertices, {g.edge_count} edges, "
        f"rank {doc.built_basis.rank}, base {g.base_vertex}"
    )
    for name, grp in doc.built_groups.items():
        print(f"group {name}: order {grp.order}")
    if doc.built_tower is not None:
        orders = ", ".join(str(lvl.order) for lvl in doc.built_tower.levels)
        print(f"tower: depth {doc.built_tower.depth}, level orders [{orders}]")
    if doc.built_cover is not None:
        print(
            f"cover: group {doc.built_cover.group.name}, "
            f"{doc.built_cover.n_cosets} sheets"
        )
    print("ok")
    return 0


def _cmd_cover_build(args: argparse.Namespace) -> int:
    doc = _load(args)
    spec = _select_cover_spec(doc, args.depth)
    cover = covers.build_cover(spec)
    connected = covers.is_connected_cover(spec)
    print(f"sheets: {spec.n_cosets}")
    print(f"vertices: {cover.n_vertices}")
    print(f"darts: {cover.n_darts}")
    print(f"connected: {'yes' if connected else 'no'}")
    if spec.phi_surjective():
        print(f"regular: {'yes' if covers.is_regular(spec) else 'no'}")
    else:
        print("regular: n/a (generator images do not generate the group)")
    return 0


def _cmd_cover_dot(args: argparse.Namespace) -> int:
    doc = _load(args)
    spec = _select_cover_spec(doc, args.depth)
    sys.stdout.write(export_dot(covers.build_cover(spec)))
    return 0


def _parse_start(text: str, depth: int | None) -> tuple[int, ...] | int:
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    return int(text)


def _cmd_lift(args: argparse.Namespace) -> int:
    doc = _load(args)
    if doc.built_cover is not None:
        spec = doc.built_cover
        word = groups.parse_word(args.word, spec.basis.rank)
        start = _parse_start(args.start, None)
        if not isinstance(start, int):
            raise ConfigSyntaxError("a single cover takes one start point")
        print(covers.monodromy(spec, start, word))
        return 0
    assert doc.built_tower is not None
    tw = doc.built_tower if args.depth is None else doc.built_tower.truncate(args.depth)
    word = groups.parse_word(args.word, tw.rank)
    start = _parse_start(args.start, tw.depth)
    comps = (
        tuple(start) if not isinstance(start, int) else (start,) * tw.depth
    )
    if len(comps) != tw.depth:
        raise ConfigSyntaxError(
            f"start has {len(comps)} components for a depth {tw.depth} tower"
        )
    elem = tower_mod.ProfiniteElement(comps)
    if not tw.is_compatible(elem):
        raise ConfigSyntaxError(f"start point {comps} is not bond-compatible")
    ends = tuple(
        covers.monodromy(tw.level_spec(i + 1), comps[i], word)
        for i in range(tw.depth)
    )
    print(tuple(ends))
    return 0


def _cmd_actions_compare(args: argparse.Namespace) -> int:
    doc = _load(args)
    spec = _select_cover_spec(doc, args.depth)
    word = groups.parse_word(args.word, spec.basis.rank)
    points = covers.equalizer_set(spec, word)
    for x in points:
        print(f"fibre point {x}")
    print(f"equal on {len(points)} of {spec.n_cosets} fibre points")
    return 0


def _cmd_tower_theta(args: argparse.Namespace) -> int:
    doc = _load(args)
    if doc.built_tower is None:
        raise ConfigSyntaxError("theta needs a [tower] configuration")
    tw = doc.built_tower
    word = groups.parse_word(args.word, tw.rank)
    elem = tw.theta(word, args.depth)
    print(tuple(elem.components))
    return 0


_FINITE_DEPTH_NOTE = (
    "at finite depth, continuity of the fibre evaluation is represented by "
    "surjective level maps and finite kernel indices"
)


def _cmd_tower_verify(args: argparse.Namespace) -> int:
    doc = _load(args)
    if doc.built_tower is None:
        raise ConfigSyntaxError("verify needs a [tower] configuration")
    tw = doc.built_tower if args.depth is None else doc.built_tower.truncate(args.depth)
    entries: list[CheckResult] = []
    entries.append(
        CheckResult("tower.valid", "pass", f"depth={tw.depth}, rank={tw.rank}")
    )
    density = tower_mod.dense_leaf_check(tw)
    for d in density:
        entries.append(
            CheckResult(
                f"level{d.level}.dense",
                "pass" if d.surjective else "fail",
                f"generator images span {d.image_order} of {d.group_order} elements",
            )
        )
    if all(d.surjective for d in density):
        for entry in tower_mod.kernel_chain(tw):
            entries.append(
                CheckResult(
                    f"level{entry.level}.kernel_index",
                    "pass",
                    f"index {entry.index}",
                )
            )
    else:
        bad = [d.level for d in density if not d.surjective]
        entries.append(
            CheckResult(
                "kernel_chain",
                "fail",
                "undefined: leaf not dense at level"
                + ("s " if len(bad) != 1 else " ")
                + ", ".join(map(str, bad)),
            )
        )
    report = Report(tuple(entries))
    _print_report(report, args.format, notes=[_FINITE_DEPTH_NOTE])
    return report.exit_code()


def _cmd_borel_check(args: argparse.Namespace) -> int:
    doc = _load(args)
    if doc.built_tower is None:
        raise ConfigSyntaxError("borel check needs a [tower] configuration")
    tw = doc.built_tower if args.depth is None else doc.built_tower.truncate(args.depth)
    tcov = tower_mod.build_tower_covers(tw)
    entries: list[CheckResult] = []
    for i in range(1, tw.depth + 1):
        for j in range(i, tw.depth + 1):
            try:
                quot = borel.borel_quotient(tcov, i, j)
                entries.append(
                    CheckResult(
                        f"borel.{i}x{j}",
                        "pass",
                        f"{quot.class_count} classes onto "
                        f"{tcov.level(i).n_vertices} vertices",
                    )
                )
            except RuntimeError as exc:
                entries.append(CheckResult(f"borel.{i}x{j}", "fail", str(exc)))
    report = Report(tuple(entries))
    _print_report(report, args.format)
    return report.exit_code()


def _cmd_suite(args: argparse.Namespace) -> int:
    doc = _load(args)
    if doc.built_tower is None:
        raise ConfigSyntaxError("the suite needs a [tower] configuration")
    tw = doc.built_tower if args.depth is None else doc.built_tower.truncate(args.depth)
    options = SuiteOptions(samples=args.samples, seed=args.seed)
    report = Report(borel.theorem_suite(tw, options))
    _print_report(report, args.format)
    return report.exit_code()


# -- argument parsing ------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="configuration file")
    common.add_argument(
        "--depth", type=int, default=None,
        help="tower level or truncation depth (default: full depth)",
    )
    common.add_argument(
        "--format", choices=("human", "machine"), default="human",
        help="report rendering",
    )
    common.add_argument("--seed", type=int, default=0, help="sampling seed")

    parser = argparse.ArgumentParser(
        prog="covertower",
        description="finite covers of graphs, towers, and their fibre actions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common]).set_defaults(func=_cmd_validate)

    cover_p = sub.add_parser("cover").add_subparsers(dest="subcommand", required=True)
    cover_p.add_parser("build", parents=[common]).set_defaults(func=_cmd_cover_build)
    cover_p.add_parser("dot", parents=[common]).set_defaults(func=_cmd_cover_dot)

    lift_p = sub.add_parser("lift", parents=[common])
    lift_p.add_argument("--word", required=True, help="word to lift")
    lift_p.add_argument(
        "--start", default="0",
        help="start fibre point (tower: one value for all levels, or comma list)",
    )
    lift_p.set_defaults(func=_cmd_lift)

    actions_p = sub.add_parser("actions").add_subparsers(dest="subcommand", required=True)
    cmp_p = actions_p.add_parser("compare", parents=[common])
    cmp_p.add_argument("--word", required=True)
    cmp_p.set_defaults(func=_cmd_actions_compare)

    tower_p = sub.add_parser("tower").add_subparsers(dest="subcommand", required=True)
    theta_p = tower_p.add_parser("theta", parents=[common])
    theta_p.add_argument("--word", required=True)
    theta_p.set_defaults(func=_cmd_tower_theta)
    tower_p.add_parser("verify", parents=[common]).set_defaults(func=_cmd_tower_verify)

    borel_p = sub.add_parser("borel").add_subparsers(dest="subcommand", required=True)
    borel_p.add_parser("check", parents=[common]).set_defaults(func=_cmd_borel_check)

    suite_p = sub.add_parser("suite", parents=[common])
    suite_p.add_argument(
        "--samples", type=int, default=100, help="sampled words per check"
    )
    suite_p.set_defaults(func=_cmd_suite)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NotRegularError, NotSurjectiveError, NotDenseError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
