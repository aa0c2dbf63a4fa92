import pytest
from hypothesis import given, settings, strategies as st

from gallai.core import (
    Coloring,
    DivisionParams,
    PeelImpossible,
    PreconditionViolated,
    TooManyColors,
    balanced_sizes,
    canonicalize,
    star_partition,
    total_edges,
)
from gallai.construct import (
    NotConstructed,
    construct_any,
    construct_balanced,
    construct_division,
    construct_gk_general,
    construct_k3_base,
    construct_k4_base,
    extend_by_star,
    lower_bound_witness,
    merge_classes,
    peel_reduction,
    replay_peel,
    special_coloring,
    star_partition_for,
)
from gallai.generator import random_gallai
from gallai.verify import class_sizes, is_gallai, is_special_coloring


def verified(c: Coloring, sizes) -> None:
    assert is_gallai(c)
    assert class_sizes(c) == canonicalize(sizes, c.n)


class TestSpecialColoring:
    def test_k5_table_entry(self):
        c = special_coloring(star_partition(5, [(4, 3), (2,), (1,)]))
        verified(c, [7, 2, 1])
        assert is_special_coloring(c)

    def test_k5_other_entry(self):
        c = special_coloring(star_partition(5, [(4,), (3, 1), (2,)]))
        verified(c, [4, 4, 2])

    def test_single_edge(self):
        c = special_coloring(star_partition(2, [(1,)]))
        verified(c, [1])

    def test_down_edges_share_group_color(self):
        c = special_coloring(star_partition(6, [(5, 2), (4, 1), (3,)]))
        for j in range(5):
            assert c.edge_color(j, 5) == c.edge_color(0, 5)


class TestStarPartitionSearch:
    def test_finds_721(self):
        sp = star_partition_for(canonicalize([7, 2, 1], 5))
        assert sp is not None
        assert sorted(sp.group_sums(), reverse=True) == [7, 2, 1]

    def test_singleton_stars(self):
        sp = star_partition_for(canonicalize([3, 2, 1], 4))
        assert sp is not None and sorted(sp.group_sums(), reverse=True) == [3, 2, 1]

    def test_8331_has_no_special_realization(self):
        assert star_partition_for(canonicalize([8, 3, 3, 1], 6)) is None

    def test_more_groups_than_labels(self):
        assert star_partition_for(canonicalize([1, 1, 1], 3)) is None

    @given(st.integers(min_value=2, max_value=10), st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=60)
    def test_found_partitions_realize_the_distribution(self, n, seed):
        import random

        rng = random.Random(seed)
        total = total_edges(n)
        k = rng.randint(1, min(total, n + 1))
        cuts = sorted(rng.sample(range(1, total), k - 1)) if k > 1 else []
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        d = canonicalize(sizes, n)
        sp = star_partition_for(d)
        if sp is not None:
            verified(special_coloring(sp), d.sizes)


class TestDivision:
    def test_spec_examples(self):
        c = construct_division(DivisionParams(n=5, k=2, p=4, q=2))
        verified(c, [4, 4, 2])
        assert is_special_coloring(c)
        c = construct_division(DivisionParams(n=4, k=1, p=6, q=0))
        verified(c, [6])
        c = construct_division(DivisionParams(n=7, k=3, p=6, q=3))
        verified(c, [6, 6, 6, 3])

    def test_q_larger_than_p_is_normalized(self):
        # q >= p exercises the split-and-merge reduction.
        c = construct_division(DivisionParams(n=6, k=1, p=5, q=10))
        verified(c, [5, 10])

    def test_endgame_delta_one(self):
        # n = 4k+1, p = 2n-2 forces the star triple/quadruple schedule.
        for k in (1, 2, 3):
            n = 4 * k + 1
            c = construct_division(DivisionParams(n=n, k=k, p=2 * n - 2, q=2 * k))
            verified(c, [2 * n - 2] * k + [2 * k])

    def test_endgame_delta_two(self):
        for k in (1, 2, 3):
            n = 4 * k + 2
            c = construct_division(DivisionParams(n=n, k=k, p=2 * n - 1, q=3 * k + 1))
            verified(c, [2 * n - 1] * k + [3 * k + 1])

    def test_grid_small(self):
        for n in range(2, 17):
            total = total_edges(n)
            for p in range(n - 1, total + 1):
                for k in range(1, total // p + 1):
                    q = total - k * p
                    c = construct_division(DivisionParams(n=n, k=k, p=p, q=q))
                    assert is_special_coloring(c)
                    want = [p] * k + ([q] if q else [])
                    assert class_sizes(c) == canonicalize(want, n)

    def test_single_vertex(self):
        c = construct_division(DivisionParams(n=1, k=0, p=0, q=0))
        assert c.n == 1 and c.k == 0


class TestBalanced:
    def test_k6_three_colors(self):
        c = construct_balanced(6, 3)
        verified(c, [5, 5, 5])

    def test_k5_three_colors(self):
        c = construct_balanced(5, 3)
        verified(c, [4, 3, 3])

    def test_too_many_colors(self):
        with pytest.raises(TooManyColors):
            construct_balanced(5, 4)

    def test_ceiling_boundary_odd_n(self):
        for n in (3, 5, 7, 9, 11):
            k = (n + 1) // 2
            c = construct_balanced(n, k)
            sizes = class_sizes(c).sizes
            assert len(sizes) == k and max(sizes) - min(sizes) <= 1
            assert is_gallai(c)

    def test_grid(self):
        for n in range(2, 31):
            for k in range(1, (n + 1) // 2 + 1):
                c = construct_balanced(n, k)
                sizes = class_sizes(c).sizes
                assert len(sizes) == k
                assert max(sizes) - min(sizes) <= 1
                assert is_special_coloring(c)


class TestExtendAndPeel:
    def test_extend_monochromatic(self):
        c = extend_by_star(Coloring(3, (1, 1, 1)), 1)
        verified(c, [6])

    def test_extend_grows_count_by_n(self):
        base = special_coloring(star_partition(5, [(4, 3), (2,), (1,)]))
        c = extend_by_star(base, 1)
        assert class_sizes(c).sizes == (12, 2, 1)

    def test_extend_with_fresh_color(self):
        c = extend_by_star(Coloring(3, (1, 1, 1)), 2)
        assert class_sizes(c).sizes == (3, 3)
        assert is_gallai(c)

    def test_extend_rejects_far_color(self):
        with pytest.raises(PreconditionViolated):
            extend_by_star(Coloring(3, (1, 1, 1)), 5)

    @given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=1, max_value=6))
    @settings(max_examples=40)
    def test_extend_preserves_rainbow_freeness(self, seed, color):
        c, _ = random_gallai(6, seed, 4)
        col = min(color, c.k + 1)
        assert is_gallai(extend_by_star(c, col))

    def test_peel_example(self):
        base, log = peel_reduction(canonicalize([12, 2, 1], 6), 5)
        assert base.sizes == (7, 2, 1)
        assert log == (0,)

    def test_peel_identity(self):
        d = canonicalize([7, 2, 1], 5)
        base, log = peel_reduction(d, 5)
        assert base == d and log == ()

    def test_peel_impossible(self):
        with pytest.raises(PeelImpossible):
            peel_reduction(canonicalize([2, 2, 2], 4), 3)

    def test_peel_can_empty_a_class(self):
        base, log = peel_reduction(canonicalize([2, 1], 3), 2)
        assert base.sizes == (1,) and log == (0,)

    def test_replay_restores_distribution(self):
        d = canonicalize([12, 6, 3], 7)
        base, log = peel_reduction(d, 5)
        c_base = construct_k3_base(base) if base.k == 3 and base.n == 5 else None
        assert c_base is not None
        c = replay_peel(c_base, d, log)
        verified(c, d.sizes)

    def test_replay_recreates_emptied_classes(self):
        d = canonicalize([7, 7, 7, 7], 8)
        base, log = peel_reduction(d, 5)
        from gallai.construct import _construct_guaranteed

        c = replay_peel(_construct_guaranteed(base), d, log)
        verified(c, d.sizes)

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=60)
    def test_peel_then_replay_is_identity_on_distributions(self, seed):
        import random

        rng = random.Random(seed)
        k = rng.randint(1, 4)
        n = rng.randint(max(2, {1: 2, 2: 2, 3: 5, 4: 8}[k]), 16)
        total = total_edges(n)
        if total < k:
            return
        cuts = sorted(rng.sample(range(1, total), k - 1)) if k > 1 else []
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        d = canonicalize(sizes, n)
        base_n = {1: 2, 2: 2, 3: 5, 4: 8}[d.k]
        if d.n <= base_n:
            return
        try:
            base, log = peel_reduction(d, base_n)
        except PeelImpossible:
            return
        built = construct_any(base)
        if not isinstance(built, Coloring):
            return
        c = replay_peel(built, d, log)
        assert class_sizes(c) == d
        assert is_gallai(c)


class TestK3Base:
    def test_all_eight_distributions(self):
        from gallai.oracle import partitions

        parts = list(partitions(10, 3))
        assert len(parts) == 8
        for sizes in parts:
            c = construct_k3_base(canonicalize(sizes, 5))
            verified(c, sizes)

    def test_table_entry_is_special(self):
        c = construct_k3_base(canonicalize([6, 3, 1], 5))
        assert is_special_coloring(c)

    def test_ad_hoc_cases_are_not_special(self):
        assert not is_special_coloring(construct_k3_base(canonicalize([8, 1, 1], 5)))
        assert not is_special_coloring(construct_k3_base(canonicalize([6, 2, 2], 5)))

    def test_bipartite_class_structure(self):
        c = construct_k3_base(canonicalize([6, 2, 2], 5))
        crossing = sum(1 for u, v, col in c.edges() if col == 1)
        assert crossing == 6

    def test_rejects_wrong_instance(self):
        with pytest.raises(PreconditionViolated):
            construct_k3_base(canonicalize([6, 3, 1, 5], 6))


class TestK4Base:
    def test_case1_clique_rows(self):
        c = construct_k4_base(canonicalize([16, 4, 4, 4], 8))
        verified(c, [16, 4, 4, 4])
        c = construct_k4_base(canonicalize([25, 1, 1, 1], 8))
        verified(c, [25, 1, 1, 1])

    def test_sevens_peel_down(self):
        c = construct_k4_base(canonicalize([7, 7, 7, 7], 8))
        verified(c, [7, 7, 7, 7])

    def test_tricky_reduced_instances(self):
        # These hit the clique-layout hole on seven vertices and fall through
        # to alternative layouts or the star-partition fallback.
        for sizes in ([13, 12, 2, 1], [13, 11, 3, 1], [12, 12, 2, 2], [8, 8, 6, 6], [13, 5, 5, 5]):
            c = construct_k4_base(canonicalize(sizes, 8))
            verified(c, sizes)

    def test_all_partitions(self):
        from gallai.oracle import partitions

        for sizes in partitions(28, 4):
            c = construct_k4_base(canonicalize(sizes, 8))
            verified(c, sizes)


class TestGkGeneral:
    def test_k3_threshold(self):
        d = canonicalize([876, 876, 876], 73)
        verified(construct_gk_general(d), d.sizes)

    def test_k4_threshold_skewed(self):
        stats: dict = {}
        d = canonicalize([total_edges(129) - 3, 1, 1, 1], 129)
        c = construct_gk_general(d, stats)
        verified(c, d.sizes)
        level = stats["levels"][0]
        assert level["phase1_stars"] == 0
        assert level["block_color_k"] == 1

    def test_k5_balanced_star_budget(self):
        stats: dict = {}
        d = canonicalize(balanced_sizes(201, 5), 201)
        c = construct_gk_general(d, stats)
        verified(c, d.sizes)
        assert stats["levels"][0]["phase1_stars"] <= 25

    def test_above_threshold_peels_first(self):
        stats: dict = {}
        d = canonicalize(balanced_sizes(80, 3), 80)
        c = construct_gk_general(d, stats)
        verified(c, d.sizes)
        assert stats["peeled_to_threshold"] == 7

    def test_below_threshold_rejected(self):
        with pytest.raises(PreconditionViolated):
            construct_gk_general(canonicalize(balanced_sizes(72, 3), 72))
        with pytest.raises(PreconditionViolated):
            construct_gk_general(canonicalize(balanced_sizes(10, 2), 10))

    def test_six_colors_recursion_chain(self):
        n = 8 * 36 + 1
        d = canonicalize(balanced_sizes(n, 6), n)
        verified(construct_gk_general(d), d.sizes)


class TestLowerBoundWitness:
    def test_values(self):
        assert lower_bound_witness(3) == (3, canonicalize([1, 1, 1], 3))
        assert lower_bound_witness(4) == (5, canonicalize([7, 1, 1, 1], 5))
        assert lower_bound_witness(5) == (7, canonicalize([17, 1, 1, 1, 1], 7))

    def test_rejects_small_k(self):
        with pytest.raises(PreconditionViolated):
            lower_bound_witness(2)


class TestMergeClasses:
    def test_pairwise_merge(self):
        c = construct_balanced(7, 4)
        merged = merge_classes(c, [(1, 2), (3, 4)])
        sizes = class_sizes(c).sizes
        assert sorted(class_sizes(merged).sizes) == sorted(
            [sizes[0] + sizes[1], sizes[2] + sizes[3]]
        )
        assert is_gallai(merged)

    def test_identity_grouping(self):
        c = construct_balanced(6, 3)
        assert merge_classes(c, [(1,), (2,), (3,)]) == c

    def test_balanced_merge_stays_balanced(self):
        c = construct_balanced(12, 6)
        merged = merge_classes(c, [(1, 6), (2, 5), (3, 4)])
        sizes = class_sizes(merged).sizes
        assert max(sizes) - min(sizes) <= 1

    def test_rejects_partial_grouping(self):
        c = construct_balanced(6, 3)
        with pytest.raises(PreconditionViolated):
            merge_classes(c, [(1, 2)])

    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=40)
    def test_merge_preserves_rainbow_freeness(self, seed):
        import random

        c, _ = random_gallai(8, seed, 5)
        rng = random.Random(seed)
        colors = list(range(1, c.k + 1))
        rng.shuffle(colors)
        split = max(1, len(colors) // 2)
        grouping = [tuple(colors[:split]), tuple(colors[split:])]
        grouping = [g for g in grouping if g]
        assert is_gallai(merge_classes(c, grouping))


class TestConstructAny:
    def test_k3_base_region(self):
        c = construct_any(canonicalize([6, 2, 2], 5))
        assert isinstance(c, Coloring)
        verified(c, [6, 2, 2])

    def test_two_colors_any_split(self):
        c = construct_any(canonicalize([14, 1], 6))
        assert isinstance(c, Coloring)
        verified(c, [14, 1])

    def test_infeasible_instance(self):
        result = construct_any(canonicalize([9, 4, 4, 4], 7))
        assert isinstance(result, NotConstructed)
        assert result.reason == "fallback exhausted"

    def test_necessary_failure_detected_early(self):
        result = construct_any(canonicalize([2, 2, 2], 4))
        assert isinstance(result, NotConstructed)
        assert result.reason == "necessary-condition failure"

    def test_necessary_passes_but_still_infeasible(self):
        result = construct_any(canonicalize([7, 3, 2, 2, 1], 6))
        assert isinstance(result, NotConstructed)
        assert result.reason == "fallback exhausted"

    def test_special_gap_instance_succeeds_via_oracle(self):
        c = construct_any(canonicalize([8, 3, 3, 1], 6))
        assert isinstance(c, Coloring)
        verified(c, [8, 3, 3, 1])

    def test_guaranteed_region_k4(self):
        for n in (8, 9, 12):
            d = canonicalize(balanced_sizes(n, 4), n)
            c = construct_any(d)
            assert isinstance(c, Coloring)
            verified(c, d.sizes)

    def test_guaranteed_region_k5(self):
        d = canonicalize(balanced_sizes(201, 5), 201)
        c = construct_any(d)
        assert isinstance(c, Coloring)
        verified(c, d.sizes)

    def test_agreement_with_oracle_small(self):
        from gallai.oracle import partitions, search_realizable

        for n in range(2, 7):
            total = total_edges(n)
            for k in range(1, min(total, 6) + 1):
                for sizes in partitions(total, k):
                    d = canonicalize(sizes, n)
                    built = construct_any(d)
                    verdict = search_realizable(d)
                    if isinstance(built, Coloring):
                        assert verdict.is_feasible
                    else:
                        assert verdict.is_infeasible
