"""Configuration parsing, rendering, DOT export, and the command surface."""

from __future__ import annotations

from pathlib import Path

import pytest

from covertower import cli, covers, tower
from covertower.cli import parse_config, render_config
from covertower.errors import (
    ConfigSyntaxError,
    DuplicateSectionError,
    UnknownReferenceError,
)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

MINIMAL_COVER = """\
[graph]
vertices = 1
edge = 0 0
edge = 0 0

[group S3]
perm = 1 2 0
perm = 1 0 2

[cover]
group = S3
images = perm 1 2 0, perm 1 0 2
subgroup = 0 2
"""

MINIMAL_TOWER = """\
[graph]
vertices = 1
edge = 0 0

[tower]
solenoid = p=2 depth=3
"""


class TestParsing:
    def test_cover_document(self):
        doc = parse_config(MINIMAL_COVER)
        assert doc.graph.vertices == 1
        assert doc.graph.edges == ((0, 0), (0, 0))
        assert doc.graph.base == 0
        assert doc.built_groups["S3"].order == 6
        assert doc.cover.images == (3, 2)
        assert doc.cover.subgroup_elements == (0, 2)
        assert doc.built_cover.n_cosets == 3
        assert doc.built_tower is None

    def test_solenoid_shorthand(self):
        doc = parse_config(MINIMAL_TOWER)
        assert [g.name for g in doc.group_defs] == ["Z2", "Z4", "Z8"]
        assert [ld.bond for ld in doc.tower_levels] == [None, "mod", "mod"]
        assert doc.built_tower == tower.solenoid_tower(2, 3)

    def test_comments_and_blanks_ignored(self):
        text = MINIMAL_TOWER.replace(
            "[graph]", "# leading comment\n\n[graph]  # trailing"
        )
        assert parse_config(text) == parse_config(MINIMAL_TOWER)

    def test_explicit_bond_table(self):
        text = """\
[graph]
vertices = 1
edge = 0 0

[group Z2]
cyclic = 2

[group Z4]
cyclic = 4

[tower]
level = Z2 : 1
level = Z4 : 1 | 0 1 0 1
"""
        doc = parse_config(text)
        assert doc.built_tower == tower.solenoid_tower(2, 2)

    def test_table_group(self):
        text = """\
[graph]
vertices = 1
edge = 0 0

[group flip]
table = 0 1; 1 0

[cover]
group = flip
images = 1
"""
        doc = parse_config(text)
        assert doc.built_groups["flip"].order == 2
        assert doc.cover.subgroup_elements == (0,)

    def test_product_group(self):
        text = """\
[graph]
vertices = 1
edge = 0 0
edge = 0 0

[group Z2]
cyclic = 2

[group V4]
product = Z2 Z2

[cover]
group = V4
images = 2, 1
"""
        doc = parse_config(text)
        assert doc.built_groups["V4"].order == 4
        assert doc.built_cover.phi_surjective()


class TestParseErrors:
    def test_duplicate_graph(self):
        with pytest.raises(DuplicateSectionError):
            parse_config(MINIMAL_TOWER + "\n[graph]\nvertices = 1\nedge = 0 0\n")

    def test_duplicate_group(self):
        text = MINIMAL_COVER.replace(
            "[cover]", "[group S3]\ncyclic = 6\n\n[cover]"
        )
        with pytest.raises(DuplicateSectionError):
            parse_config(text)

    def test_tower_and_cover_exclusive(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config(MINIMAL_COVER + "\n[tower]\nsolenoid = p=2 depth=2\n")

    def test_unknown_section(self):
        with pytest.raises(ConfigSyntaxError) as info:
            parse_config(MINIMAL_TOWER + "\n[mystery]\nx = 1\n")
        assert info.value.line is not None

    def test_key_outside_section(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config("vertices = 1\n" + MINIMAL_TOWER)

    def test_bare_line(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config(MINIMAL_TOWER.replace("solenoid = p=2 depth=3", "solenoid"))

    def test_unknown_group_reference(self):
        text = MINIMAL_COVER.replace("group = S3", "group = S4")
        with pytest.raises(UnknownReferenceError):
            parse_config(text)

    def test_unknown_product_factor(self):
        text = """\
[graph]
vertices = 1
edge = 0 0

[group V4]
product = Z2 Z2

[cover]
group = V4
images = 1
"""
        with pytest.raises(UnknownReferenceError):
            parse_config(text)

    def test_missing_graph(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config("[tower]\nsolenoid = p=2 depth=2\n")

    def test_missing_tower_and_cover(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config("[graph]\nvertices = 1\nedge = 0 0\n")

    def test_group_without_construction(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config(MINIMAL_COVER.replace("perm = 1 2 0\nperm = 1 0 2\n", ""))

    def test_bad_solenoid_value(self):
        with pytest.raises(ConfigSyntaxError):
            parse_config(MINIMAL_TOWER.replace("p=2 depth=3", "p=2"))
        with pytest.raises(ConfigSyntaxError):
            parse_config(MINIMAL_TOWER.replace("p=2 depth=3", "p=1 depth=3"))

    def test_level_needs_bond(self):
        text = """\
[graph]
vertices = 1
edge = 0 0

[group Z2]
cyclic = 2

[group Z4]
cyclic = 4

[tower]
level = Z2 : 1
level = Z4 : 1
"""
        with pytest.raises(ConfigSyntaxError):
            parse_config(text)

    def test_first_level_takes_no_bond(self):
        text = """\
[graph]
vertices = 1
edge = 0 0

[group Z2]
cyclic = 2

[tower]
level = Z2 : 1 | mod
"""
        with pytest.raises(ConfigSyntaxError):
            parse_config(text)

    def test_bond_table_size(self):
        text = """\
[graph]
vertices = 1
edge = 0 0

[group Z2]
cyclic = 2

[group Z4]
cyclic = 4

[tower]
level = Z2 : 1
level = Z4 : 1 | 0 1
"""
        with pytest.raises(ConfigSyntaxError):
            parse_config(text)

    def test_mod_bond_needs_cyclic_structure(self):
        text = """\
[graph]
vertices = 1
edge = 0 0

[group S3]
perm = 1 2 0
perm = 1 0 2

[group Z6]
cyclic = 6

[tower]
level = Z6 : 1
level = S3 : perm 1 2 0 | mod
"""
        with pytest.raises(ConfigSyntaxError):
            parse_config(text)

    def test_perm_element_needs_perm_group(self):
        text = MINIMAL_TOWER + "\n"
        text = text.replace("solenoid = p=2 depth=3", "level = Z2 : perm 1 0")
        text = text.replace("[tower]", "[group Z2]\ncyclic = 2\n\n[tower]")
        with pytest.raises(ConfigSyntaxError):
            parse_config(text)

    def test_perm_outside_group(self):
        text = MINIMAL_COVER.replace("images = perm 1 2 0,", "images = perm 0 1 2 3,")
        with pytest.raises(ConfigSyntaxError):
            parse_config(text)

    def test_element_out_of_range(self):
        text = MINIMAL_COVER.replace("subgroup = 0 2", "subgroup = 0 9")
        with pytest.raises(Exception):
            parse_config(text)


class TestRenderRoundTrip:
    @pytest.mark.parametrize(
        "name", sorted(p.name for p in CONFIG_DIR.glob("*.cfg"))
    )
    def test_shipped_configs(self, name):
        text = (CONFIG_DIR / name).read_text()
        doc = parse_config(text)
        again = parse_config(render_config(doc))
        assert again == doc
        if doc.built_tower is not None:
            assert again.built_tower == doc.built_tower
        if doc.built_cover is not None:
            assert again.built_cover == doc.built_cover

    def test_inline_documents(self):
        for text in (MINIMAL_COVER, MINIMAL_TOWER):
            doc = parse_config(text)
            assert parse_config(render_config(doc)) == doc


class TestDotExport:
    def test_deterministic(self):
        doc = parse_config(MINIMAL_COVER)
        first = cli.export_dot(covers.build_cover(doc.built_cover))
        second = cli.export_dot(covers.build_cover(parse_config(MINIMAL_COVER).built_cover))
        assert first == second

    def test_frozen_three_sheet_output(self):
        doc = parse_config(MINIMAL_COVER)
        text = cli.export_dot(covers.build_cover(doc.built_cover))
        assert text == (
            "graph cover {\n"
            "  v0_0;\n"
            "  v0_1;\n"
            "  v0_2;\n"
            '  v0_0 -- v0_2 [label="a"];\n'
            '  v0_1 -- v0_0 [label="a"];\n'
            '  v0_2 -- v0_1 [label="a"];\n'
            '  v0_0 -- v0_0 [label="b"];\n'
            '  v0_1 -- v0_2 [label="b"];\n'
            '  v0_2 -- v0_1 [label="b"];\n'
            "}\n"
        )

    def test_tree_edges_dashed(self):
        text = """\
[graph]
vertices = 2
edge = 0 1
edge = 0 1

[group Z2]
cyclic = 2

[cover]
group = Z2
images = 1
"""
        doc = parse_config(text)
        dot = cli.export_dot(covers.build_cover(doc.built_cover))
        assert "style=dashed" in dot
        assert 'label="a"' in dot


class TestReportRendering:
    def test_counts_and_exit(self):
        report = cli.Report(
            (
                cli.CheckResult("x", "pass", "fine"),
                cli.CheckResult("y", "fail", "broken"),
                cli.CheckResult("z", "skip", "later"),
            )
        )
        assert (report.passed, report.failed, report.skipped) == (1, 1, 1)
        assert report.exit_code() == 1
        assert cli.Report(()).exit_code() == 0

    def test_human_format(self):
        report = cli.Report((cli.CheckResult("x.y", "pass", "w"),))
        text = cli.render_human(report)
        assert "[PASS] x.y  (w)" in text
        assert "1 passed, 0 failed, 0 skipped" in text

    def test_machine_format(self):
        report = cli.Report((cli.CheckResult("x.y", "fail", "bad\tnews\nhere"),))
        lines = cli.render_machine(report).splitlines()
        assert lines[0] == "schema\tcovertower.report\t1"
        assert lines[1] == "check\tx.y\tfail\tbad news here"
        assert lines[-1] == "summary\t0\t1\t0"


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def cfg(name: str) -> str:
    return str(CONFIG_DIR / name)


class TestCommands:
    def test_validate(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "--config", cfg("dyadic_depth3.cfg"))
        assert code == 0
        assert "tower: depth 3, level orders [2, 4, 8]" in out
        assert out.strip().endswith("ok")

    def test_theta(self, capsys):
        code, out, _ = run_cli(
            capsys, "tower", "theta", "--config", cfg("dyadic_depth3.cfg"),
            "--word", "a^6",
        )
        assert code == 0
        assert out.strip() == "(0, 2, 6)"

    def test_theta_with_depth(self, capsys):
        code, out, _ = run_cli(
            capsys, "tower", "theta", "--config", cfg("dyadic_depth3.cfg"),
            "--word", "a^6", "--depth", "2",
        )
        assert code == 0
        assert out.strip() == "(0, 2)"

    def test_lift_broadcast_start(self, capsys):
        code, out, _ = run_cli(
            capsys, "lift", "--config", cfg("dyadic_depth3.cfg"),
            "--word", "a^2", "--start", "0",
        )
        assert code == 0
        assert out.strip() == "(0, 2, 2)"

    def test_lift_component_start(self, capsys):
        code, out, _ = run_cli(
            capsys, "lift", "--config", cfg("dyadic_depth3.cfg"),
            "--word", "a", "--start", "1,1,1",
        )
        assert code == 0
        assert out.strip() == "(0, 2, 2)"

    def test_lift_incompatible_start(self, capsys):
        code, _, err = run_cli(
            capsys, "lift", "--config", cfg("dyadic_depth3.cfg"),
            "--word", "a", "--start", "1,2,1",
        )
        assert code == 2
        assert "error:" in err

    def test_lift_single_cover(self, capsys):
        code, out, _ = run_cli(
            capsys, "lift", "--config", cfg("wedge_s3_subgroup.cfg"),
            "--word", "a", "--start", "0",
        )
        assert code == 0
        assert out.strip() == "2"

    def test_cover_build(self, capsys):
        code, out, _ = run_cli(
            capsys, "cover", "build", "--config", cfg("wedge_s3_subgroup.cfg")
        )
        assert code == 0
        assert "sheets: 3" in out
        assert "connected: yes" in out
        assert "regular: no" in out

    def test_cover_build_at_depth(self, capsys):
        code, out, _ = run_cli(
            capsys, "cover", "build", "--config", cfg("dyadic_depth3.cfg"),
            "--depth", "2",
        )
        assert code == 0
        assert "sheets: 4" in out
        assert "regular: yes" in out

    def test_cover_dot_identical_runs(self, capsys):
        _, first, _ = run_cli(
            capsys, "cover", "dot", "--config", cfg("wedge_s3_subgroup.cfg")
        )
        _, second, _ = run_cli(
            capsys, "cover", "dot", "--config", cfg("wedge_s3_subgroup.cfg")
        )
        assert first == second
        assert first.startswith("graph cover {")

    def test_actions_compare(self, capsys):
        # a maps to a transposition, whose centralizer has two elements
        code, out, _ = run_cli(
            capsys, "actions", "compare", "--config", cfg("wedge_s3_free.cfg"),
            "--word", "a",
        )
        assert code == 0
        assert "fibre point 0" in out and "fibre point 2" in out
        assert "equal on 2 of 6 fibre points" in out

    def test_actions_compare_irregular_cover(self, capsys):
        code, _, err = run_cli(
            capsys, "actions", "compare", "--config", cfg("wedge_s3_subgroup.cfg"),
            "--word", "a",
        )
        assert code == 1
        assert "check failed:" in err

    def test_verify_dense(self, capsys):
        code, out, _ = run_cli(
            capsys, "tower", "verify", "--config", cfg("dyadic_depth3.cfg")
        )
        assert code == 0
        assert "[PASS] level3.kernel_index  (index 8)" in out
        assert "note:" in out

    def test_verify_non_dense(self, capsys):
        code, out, _ = run_cli(
            capsys, "tower", "verify", "--config", cfg("nondense.cfg")
        )
        assert code == 1
        assert "[FAIL] level1.dense" in out
        assert "[FAIL] kernel_chain" in out

    def test_borel_check(self, capsys):
        code, out, _ = run_cli(
            capsys, "borel", "check", "--config", cfg("wedge_klein_tower.cfg")
        )
        assert code == 0
        assert "[PASS] borel.2x2  (16 classes onto 16 vertices)" in out

    def test_suite_pass(self, capsys):
        code, out, _ = run_cli(
            capsys, "suite", "--config", cfg("dyadic_depth3.cfg"), "--samples", "20"
        )
        assert code == 0
        assert "0 failed" in out

    def test_suite_fail_names_level(self, capsys):
        code, out, _ = run_cli(capsys, "suite", "--config", cfg("nondense.cfg"))
        assert code == 1
        assert "level1.dense" in out
        assert "levels 1, 2" in out

    def test_machine_and_human_agree_on_entries(self, capsys):
        _, human, _ = run_cli(capsys, "suite", "--config", cfg("nondense.cfg"))
        _, machine, _ = run_cli(
            capsys, "suite", "--config", cfg("nondense.cfg"), "--format", "machine"
        )
        human_entries = {
            line.split("]", 1)[1].strip().split("  ")[0]: line[1:5].strip().lower()
            for line in human.splitlines()
            if line.startswith("[")
        }
        machine_entries = {
            parts[1]: parts[2]
            for parts in (line.split("\t") for line in machine.splitlines())
            if parts[0] == "check"
        }
        assert human_entries == machine_entries

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "validate", "--config", "/no/such/file.cfg")
        assert code == 2
        assert "error:" in err

    def test_syntax_error_exit(self, capsys, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("[graph]\nvertices = 1\nedge = 0 0\n\n[nope]\nx = 1\n")
        code, _, err = run_cli(capsys, "validate", "--config", str(bad))
        assert code == 2
        assert "error:" in err

    def test_bad_word_exit(self, capsys):
        code, _, err = run_cli(
            capsys, "lift", "--config", cfg("dyadic_depth3.cfg"), "--word", "zz"
        )
        assert code == 2
        assert "error:" in err

    def test_suite_truncated_depth(self, capsys):
        code, out, _ = run_cli(
            capsys, "suite", "--config", cfg("dyadic_depth8.cfg"),
            "--depth", "4", "--samples", "20",
        )
        assert code == 0
        assert "level4.kernel_index" in out
        assert "level5" not in out

    def test_suite_seed_changes_witness(self, capsys):
        _, first, _ = run_cli(
            capsys, "suite", "--config", cfg("dyadic_depth3.cfg"),
            "--samples", "10", "--seed", "3", "--format", "machine",
        )
        assert "seed 3" in first
