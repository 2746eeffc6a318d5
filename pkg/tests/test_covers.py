"""Covers from subgroup data: fibres, monodromy, deck groups, actions.

Hand-checked constants below use the lexicographic numbering of the
symmetric group on three points:

    0 = (0,1,2)   1 = (0,2,1)   2 = (1,0,2)
    3 = (1,2,0)   4 = (2,0,1)   5 = (2,1,0)

so element 2 is the transposition swapping 0 and 1, and element 3 is a
three-cycle. With K generated by element 2, the right cosets are
{0,2}, {1,4}, {3,5}, numbered 0, 1, 2 by smallest member.
"""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

import oracles
from covertower import covers, graphs, groups
from covertower.errors import (
    Error,
    NotASubgroupError,
    NotRegularError,
    NotSurjectiveError,
)
from covertower.groups import parse_word


def wedge_basis() -> graphs.Pi1Basis:
    return graphs.spanning_tree(graphs.wedge(2))


def s3_pair():
    return groups.symmetric_group(3)


def s3_subgroup_spec() -> covers.CoverSpec:
    s3, _ = s3_pair()
    K = groups.subgroup(s3, (0, 2))
    return covers.CoverSpec(wedge_basis(), s3, (3, 2), K)


def s3_free_spec() -> covers.CoverSpec:
    s3, _ = s3_pair()
    return covers.CoverSpec(wedge_basis(), s3, (3, 2))


def klein_spec() -> covers.CoverSpec:
    v4 = groups.direct_product(groups.cyclic_group(2), groups.cyclic_group(2))
    return covers.CoverSpec(wedge_basis(), v4, (2, 1))


def circle_spec(n: int, image: int) -> covers.CoverSpec:
    basis = graphs.spanning_tree(graphs.circle())
    return covers.CoverSpec(basis, groups.cyclic_group(n), (image,))


class TestCoverSpec:
    def test_coset_numbering_by_smallest_member(self):
        spec = s3_subgroup_spec()
        assert spec.coset_reps == (0, 1, 3)
        assert spec.coset_of == (0, 1, 0, 2, 1, 2)
        assert spec.base_coset == 0
        assert spec.n_cosets == 3

    def test_cosets_match_partition_oracle(self):
        spec = s3_subgroup_spec()
        s3 = spec.group
        expected = oracles.right_coset_partition(s3.mult, (0, 2))
        produced = {
            frozenset(
                g for g in range(s3.order) if spec.coset_of[g] == c
            )
            for c in range(spec.n_cosets)
        }
        assert produced == expected

    def test_phi_on_words(self):
        spec = s3_subgroup_spec()
        assert spec.phi(parse_word("a", 2)) == 3
        assert spec.phi(parse_word("b", 2)) == 2
        # (1,2,0) then (1,0,2) sends 0 to 0, 1 to 2, 2 to 1
        assert spec.phi(parse_word("a b", 2)) == 1
        assert spec.phi(parse_word("1", 2)) == 0

    def test_phi_surjectivity(self):
        assert s3_free_spec().phi_surjective()
        s3, _ = s3_pair()
        not_generating = covers.CoverSpec(wedge_basis(), s3, (3, 3))
        assert not not_generating.phi_surjective()
        assert not_generating.image_subgroup.order == 3

    def test_image_count_must_match_rank(self):
        s3, _ = s3_pair()
        with pytest.raises(ValueError):
            covers.CoverSpec(wedge_basis(), s3, (3,))

    def test_image_range_checked(self):
        s3, _ = s3_pair()
        with pytest.raises(ValueError):
            covers.CoverSpec(wedge_basis(), s3, (3, 17))

    def test_subgroup_must_belong_to_group(self):
        s3, _ = s3_pair()
        other = groups.cyclic_group(4)
        K = groups.subgroup(other, (0, 2))
        with pytest.raises(ValueError):
            covers.CoverSpec(wedge_basis(), s3, (3, 2), K)

    def test_non_subgroup_rejected_upstream(self):
        s3, _ = s3_pair()
        with pytest.raises(NotASubgroupError):
            groups.subgroup(s3, (0, 3))  # not closed: 3 * 3 = 4


class TestCoverGraph:
    def test_sizes(self):
        cover = covers.build_cover(s3_subgroup_spec())
        assert cover.n_vertices == 3
        assert cover.n_darts == 12
        assert cover.n_cosets == 3

    def test_reversal_involution(self):
        cover = covers.build_cover(s3_subgroup_spec())
        for d in range(cover.n_darts):
            r = cover.dart_reverse[d]
            assert r != d and cover.dart_reverse[r] == d
            assert cover.dart_source[r] == cover.dart_target[d]
            assert cover.dart_target[r] == cover.dart_source[d]

    def test_star_bijection(self):
        spec = s3_subgroup_spec()
        cover = covers.build_cover(spec)
        base = spec.base
        base_degree = [len(base.out_darts[v]) for v in range(base.vertex_count)]
        for vid in range(cover.n_vertices):
            v, _ = cover.vertex_pair(vid)
            star = [d for d in range(cover.n_darts) if cover.dart_source[d] == vid]
            assert len(star) == base_degree[v]
            # distinct base darts under the lift, one each
            assert sorted({d // cover.n_cosets for d in star}) == sorted(
                base.out_darts[v]
            )

    def test_generator_actions_frozen(self):
        spec = s3_subgroup_spec()
        action = covers.generator_coset_action(spec)
        assert action == ((2, 0, 1), (0, 2, 1))

    def test_voltages(self):
        spec = s3_free_spec()
        volts = covers.dart_voltages(spec)
        basis = spec.basis
        g = spec.base
        for i, chord in enumerate(basis.chords):
            assert volts[chord] == spec.gen_images[i]
            assert volts[g.dart_reverse[chord]] == spec.group.inv[spec.gen_images[i]]
        for d in basis.tree:
            assert volts[d] == spec.group.identity

    def test_vertex_id_round_trip(self):
        cover = covers.build_cover(s3_free_spec())
        for vid in range(cover.n_vertices):
            v, c = cover.vertex_pair(vid)
            assert cover.vertex_id(v, c) == vid

    def test_connected_cover_over_theta(self):
        # exercise a base with a nonempty spanning tree
        basis = graphs.spanning_tree(
            graphs.build_graph(2, [(0, 1), (0, 1), (0, 1)])
        )
        s3, _ = s3_pair()
        spec = covers.CoverSpec(basis, s3, (3, 2))
        cover = covers.build_cover(spec)
        assert cover.n_vertices == 12
        assert covers.is_connected_cover(spec)


class TestMonodromy:
    def test_base_fibre_values_frozen(self):
        spec = s3_subgroup_spec()
        assert covers.monodromy(spec, 0, parse_word("a", 2)) == 2
        assert covers.monodromy(spec, 0, parse_word("b", 2)) == 0
        assert covers.monodromy(spec, 1, parse_word("b", 2)) == 2

    def test_transposition_images(self):
        # a -> (0 1), b -> (1 2): crossing b from the subgroup coset lands
        # on the coset of (1 2)
        s3, _ = s3_pair()
        K = groups.subgroup(s3, (0, 2))
        spec = covers.CoverSpec(wedge_basis(), s3, (2, 1), K)
        assert covers.monodromy(spec, 0, parse_word("b", 2)) == 1

    def test_identity_word_fixes_fibre(self):
        spec = s3_subgroup_spec()
        for x in range(spec.n_cosets):
            assert covers.monodromy(spec, x, parse_word("1", 2)) == x

    def test_against_element_level_oracle(self):
        spec = s3_subgroup_spec()
        s3 = spec.group
        members = (0, 2)
        words = ["a", "b", "a b", "b a'", "a^2 b", "a' b' a b"]
        for text in words:
            word = parse_word(text, 2)
            for x in range(spec.n_cosets):
                end = covers.monodromy(spec, x, word)
                element = oracles.element_monodromy(
                    s3.mult, s3.inv, spec.gen_images, word.letters,
                    spec.coset_reps[x],
                )
                assert oracles.coset_containing(
                    s3.mult, members, element
                ) == frozenset(
                    g for g in range(s3.order) if spec.coset_of[g] == end
                )

    def test_lifting_route_agrees_exhaustively(self):
        spec = s3_subgroup_spec()
        cover = covers.build_cover(spec)
        words = ["1", "a", "a'", "b", "b'", "a b", "b a", "a b' a'", "a^3", "b^2 a"]
        for text in words:
            word = parse_word(text, 2)
            for x in range(spec.n_cosets):
                assert covers.monodromy(spec, x, word) == covers.monodromy_by_lifting(
                    cover, x, word
                )

    def test_out_of_range_point(self):
        with pytest.raises(ValueError):
            covers.monodromy(s3_subgroup_spec(), 5, parse_word("a", 2))

    def test_lift_path_tracks_sheets(self):
        spec = circle_spec(4, 1)
        cover = covers.build_cover(spec)
        path = graphs.word_to_path(spec.basis, parse_word("a^3", 1))
        end = covers.lift_path(cover, cover.vertex_id(0, 0), path)
        assert cover.vertex_pair(end) == (0, 3)


class TestConnectivity:
    def test_generating_images_connect(self):
        assert covers.is_connected_cover(s3_free_spec())
        assert covers.is_connected_cover(s3_subgroup_spec())

    def test_proper_image_disconnects(self):
        assert not covers.is_connected_cover(circle_spec(4, 2))
        s3, _ = s3_pair()
        spec = covers.CoverSpec(wedge_basis(), s3, (0, 0))
        assert not covers.is_connected_cover(spec)

    def test_proper_image_with_covering_subgroup_connects(self):
        # the image only generates the three-cycles, but together with K
        # every coset is reached
        s3, _ = s3_pair()
        K = groups.subgroup(s3, (0, 2))
        spec = covers.CoverSpec(wedge_basis(), s3, (3, 3), K)
        assert not spec.phi_surjective()
        assert covers.is_connected_cover(spec)


class TestDeckGroup:
    def test_free_cover_deck_is_whole_group(self):
        spec = s3_free_spec()
        deck = covers.deck_group(spec)
        assert deck.order == 6
        assert oracles.deck_orbit_of_base(covers.build_cover(spec)) == list(range(6))

    def test_subgroup_cover_deck_is_trivial(self):
        spec = s3_subgroup_spec()
        deck = covers.deck_group(spec)
        assert deck.order == 1
        assert oracles.deck_orbit_of_base(covers.build_cover(spec)) == [0]

    def test_cyclic_deck(self):
        spec = circle_spec(8, 1)
        deck = covers.deck_group(spec)
        assert deck.order == 8
        orbit = {deck.act(q, 0) for q in range(deck.order)}
        assert orbit == set(range(8))

    def test_action_is_free(self):
        for spec in (s3_free_spec(), circle_spec(6, 1)):
            deck = covers.deck_group(spec)
            for q in range(deck.order):
                if q == deck.carrier.identity:
                    continue
                assert all(
                    deck.act(q, x) != x for x in range(spec.n_cosets)
                )

    def test_orbit_oracle_matches_act(self):
        spec = s3_free_spec()
        cover = covers.build_cover(spec)
        deck = covers.deck_group(spec)
        by_deck = sorted({deck.act(q, spec.base_coset) for q in range(deck.order)})
        assert by_deck == oracles.deck_orbit_of_base(cover)

    def test_disconnected_cover_rejected(self):
        with pytest.raises(NotSurjectiveError):
            covers.deck_group(circle_spec(4, 2))
        with pytest.raises(NotSurjectiveError):
            covers.is_regular(circle_spec(4, 2))


class TestRegularity:
    def test_normal_subgroup_gives_regular(self):
        s3, _ = s3_pair()
        A3 = groups.subgroup(s3, (0, 3, 4))
        spec = covers.CoverSpec(wedge_basis(), s3, (3, 2), A3)
        assert covers.is_regular(spec)
        assert covers.deck_group(spec).order == 2

    def test_trivial_subgroup_always_regular(self):
        assert covers.is_regular(s3_free_spec())
        assert covers.is_regular(klein_spec())

    def test_transposition_subgroup_not_regular(self):
        assert not covers.is_regular(s3_subgroup_spec())


class TestFibreGroup:
    def test_trivial_subgroup_fibre_is_the_group(self):
        spec = klein_spec()
        fibre, _ = covers.fibre_group(spec)
        assert fibre.mult == spec.group.mult
        assert fibre.identity == spec.group.identity

    def test_deck_bijection_is_isomorphism(self):
        spec = s3_free_spec()
        fibre, theta = covers.fibre_group(spec)
        deck = covers.deck_group(spec)
        assert sorted(theta) == list(range(6))
        for q1 in range(deck.order):
            for q2 in range(deck.order):
                assert (
                    theta[deck.carrier.mult[q1][q2]]
                    == fibre.mult[theta[q1]][theta[q2]]
                )

    def test_quotient_fibre_group(self):
        s3, _ = s3_pair()
        A3 = groups.subgroup(s3, (0, 3, 4))
        spec = covers.CoverSpec(wedge_basis(), s3, (3, 2), A3)
        fibre, _ = covers.fibre_group(spec)
        assert fibre.order == 2
        assert groups.check_group_axioms(fibre) == []

    def test_irregular_cover_has_no_fibre_group(self):
        with pytest.raises(NotRegularError):
            covers.fibre_group(s3_subgroup_spec())


class TestActions:
    def test_left_action_frozen_value(self):
        spec = s3_free_spec()
        # phi(a) = element 3; 3 * 1 = 5 but 1 * 3 = 2
        assert covers.left_action(spec, parse_word("a", 2), 1) == 5
        assert covers.monodromy(spec, 1, parse_word("a", 2)) == 2

    def test_transposition_sides_differ(self):
        # phi(a) = (0 1) at the fibre point (1 2): the products
        # (0 1)(1 2) and (1 2)(0 1) are the two different 3-cycles
        s3, _ = s3_pair()
        spec = covers.CoverSpec(wedge_basis(), s3, (2, 3))
        assert covers.left_action(spec, parse_word("a", 2), 1) == 4
        assert covers.monodromy(spec, 1, parse_word("a", 2)) == 3

    def test_base_point_agreement(self):
        spec = s3_free_spec()
        for text in ("a", "b", "a b", "b' a", "a^2 b'", "a b a' b'"):
            word = parse_word(text, 2)
            assert covers.left_action(spec, word, spec.base_coset) == covers.monodromy(
                spec, spec.base_coset, word
            )

    def test_abelian_actions_agree_everywhere(self):
        spec = klein_spec()
        for text in ("a", "b", "a b", "a' b", "a^2", "b a b"):
            word = parse_word(text, 2)
            for x in range(spec.n_cosets):
                assert covers.left_action(spec, word, x) == covers.monodromy(
                    spec, x, word
                )

    def test_left_action_needs_regularity(self):
        with pytest.raises(NotRegularError):
            covers.left_action(s3_subgroup_spec(), parse_word("a", 2), 0)

    def test_left_action_range_check(self):
        with pytest.raises(ValueError):
            covers.left_action(klein_spec(), parse_word("a", 2), 9)


class TestEqualizer:
    def test_transposition_generator(self):
        s3, _ = s3_pair()
        # a maps to the transposition swapping 0 and 1
        spec = covers.CoverSpec(wedge_basis(), s3, (2, 3))
        points = covers.equalizer_set(spec, parse_word("a", 2))
        assert points == (0, 2)
        assert list(points) == oracles.commuting_elements(s3.mult, 2)

    def test_three_cycle_generator(self):
        spec = s3_free_spec()
        points = covers.equalizer_set(spec, parse_word("a", 2))
        assert points == (0, 3, 4)
        assert list(points) == oracles.commuting_elements(spec.group.mult, 3)

    def test_abelian_equalizer_is_everything(self):
        spec = klein_spec()
        for text in ("1", "a", "b", "a b", "a b' a"):
            assert covers.equalizer_set(spec, parse_word(text, 2)) == (0, 1, 2, 3)

    def test_requires_trivial_subgroup(self):
        s3, _ = s3_pair()
        A3 = groups.subgroup(s3, (0, 3, 4))
        spec = covers.CoverSpec(wedge_basis(), s3, (3, 2), A3)
        with pytest.raises(Error):
            covers.equalizer_set(spec, parse_word("a", 2))


_word_letters = st.lists(
    st.tuples(st.integers(min_value=0, max_value=1), st.sampled_from((1, -1))),
    max_size=6,
)


@given(_word_letters, _word_letters, st.integers(min_value=0, max_value=5))
def test_right_action_composes(u_letters, v_letters, x):
    spec = s3_free_spec()
    u = groups.reduce_word(u_letters)
    v = groups.reduce_word(v_letters)
    assert covers.monodromy(spec, x, u * v) == covers.monodromy(
        spec, covers.monodromy(spec, x, u), v
    )


@given(_word_letters, _word_letters, st.integers(min_value=0, max_value=5))
def test_left_action_composes(u_letters, v_letters, x):
    spec = s3_free_spec()
    u = groups.reduce_word(u_letters)
    v = groups.reduce_word(v_letters)
    assert covers.left_action(spec, u * v, x) == covers.left_action(
        spec, u, covers.left_action(spec, v, x)
    )


@given(_word_letters, _word_letters, st.integers(min_value=0, max_value=5))
def test_actions_mixed_associativity(u_letters, v_letters, x):
    spec = s3_free_spec()
    u = groups.reduce_word(u_letters)
    v = groups.reduce_word(v_letters)
    assert covers.left_action(spec, u, covers.monodromy(spec, x, v)) == covers.monodromy(
        spec, covers.left_action(spec, u, x), v
    )


@given(_word_letters, st.integers(min_value=0, max_value=3))
def test_monodromy_equals_lifting(letters, x):
    spec = circle_spec(4, 1)
    cover = covers.build_cover(spec)
    word = groups.reduce_word([(0, s) for _, s in letters])
    assert covers.monodromy(spec, x, word) == covers.monodromy_by_lifting(
        cover, x, word
    )
