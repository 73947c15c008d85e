"""Tests for the skeletal category tables of irreducible partitions."""

import itertools

import pytest

from forestcalc.category import (
    CategoryTable,
    aut_order_formula,
    automorphism_group,
    brute_force_fusions,
    canonical_object,
    enumerate_en,
    filtration,
    shapes_of_excess,
    strict_fusions,
    verify_nice_filtration,
)
from forestcalc.errors import CapExceededError, ValidationError
from forestcalc.partitions import SetMap, compose, image_partition


# --- oracles ---------------------------------------------------------------


def aut_order_brute(p):
    """Count support permutations fixing the partition, one by one."""
    m = p.support_size
    count = 0
    for perm in itertools.permutations(range(m)):
        f = SetMap(m, m, perm)
        if image_partition(f, p) == p:
            count += 1
    return count


# integer partition counts p(1)..p(5)
PARTITION_COUNTS = [1, 2, 3, 5, 7]


# --- shapes and objects ----------------------------------------------------


def test_shapes_of_excess_small():
    assert shapes_of_excess(1) == [(2,)]
    assert shapes_of_excess(2) == [(3,), (2, 2)]
    assert shapes_of_excess(3) == [(4,), (3, 2), (2, 2, 2)]


def test_shape_invariants():
    for n in range(1, 6):
        shapes = shapes_of_excess(n)
        for s in shapes:
            assert all(size >= 2 for size in s)
            assert sum(size - 1 for size in s) == n
            assert tuple(sorted(s, reverse=True)) == s
        assert len(set(shapes)) == len(shapes)


def test_object_count_is_integer_partition_count():
    for n, expected in enumerate(PARTITION_COUNTS, start=1):
        assert len(shapes_of_excess(n)) == expected


def test_canonical_object_roundtrip():
    for n in range(1, 5):
        for s in shapes_of_excess(n):
            p = canonical_object(s)
            assert p.shape() == s
            assert p.support_size == sum(s)
            assert p.excess == n
            assert p.is_irreducible()


def test_support_sizes_span_expected_range():
    for n in range(1, 5):
        table = enumerate_en(n, include_homs=False)
        sizes = sorted(p.support_size for p in table.objects)
        assert sizes[0] == n + 1
        assert sizes[-1] == 2 * n


# --- strict fusion enumeration ---------------------------------------------


def test_strict_fusions_match_brute_force():
    for n in (1, 2, 3):
        table = enumerate_en(n, include_homs=False)
        for src in table.objects:
            for tgt in table.objects:
                fast = strict_fusions(src, tgt)
                slow = brute_force_fusions(src, tgt)
                assert fast == slow, f"{src} -> {tgt}"


def test_fusions_between_different_excess_empty():
    a = canonical_object((3,))
    b = canonical_object((2,))
    assert strict_fusions(a, b) == ()


def test_hom_sets_sorted_and_distinct():
    table = enumerate_en(2)
    for maps in table.homs.values():
        values = [f.values for f in maps]
        assert values == sorted(values)
        assert len(set(values)) == len(values)


# --- frozen tables ----------------------------------------------------------


def test_e2_table_frozen():
    table = enumerate_en(2)
    assert [p.shape() for p in table.objects] == [(3,), (2, 2)]
    assert table.strata == (1, 2)
    assert [g.order for g in table.groups] == [6, 8]
    assert table.hom_size_matrix() == [[6, 0], [24, 8]]
    patterns = [
        [table.glue_pattern_count(i, j) for j in range(2)] for i in range(2)
    ]
    assert patterns == [[1, 0], [4, 1]]


def test_e4_hom_counts_frozen():
    table = enumerate_en(4)
    assert table.hom_size_matrix() == [
        [120, 0, 0, 0, 0],
        [1080, 72, 0, 0, 0],
        [960, 0, 48, 0, 0],
        [7200, 288, 576, 48, 0],
        [48000, 3456, 6144, 1152, 384],
    ]


def test_diagonal_hom_sets_are_automorphisms():
    # endomorphisms of an object are exactly its automorphisms
    for n in (1, 2, 3):
        table = enumerate_en(n)
        for i, p in enumerate(table.objects):
            endos = table.hom(i, i)
            assert len(endos) == table.groups[i].order
            for f in endos:
                assert f.is_bijective()


# --- automorphism groups ----------------------------------------------------


def test_aut_order_matches_brute_force():
    for n in (1, 2, 3):
        for s in shapes_of_excess(n):
            p = canonical_object(s)
            group = automorphism_group(p)
            assert group.order == aut_order_brute(p)
            assert group.order == aut_order_formula(p)


def test_aut_order_formula_larger_shapes():
    # (size!)^mult * mult! per size class, spot checks
    assert aut_order_formula(canonical_object((5,))) == 120
    assert aut_order_formula(canonical_object((3, 3))) == 72
    assert aut_order_formula(canonical_object((2, 2, 2, 2))) == 384
    assert aut_order_formula(canonical_object((4, 3, 3, 2))) == 24 * 36 * 2 * 2


def test_aut_generators_preserve_partition():
    p = canonical_object((3, 2, 2))
    group = automorphism_group(p)
    m = p.support_size
    for g in group.generators:
        assert image_partition(SetMap(m, m, g), p) == p


# --- table structure ---------------------------------------------------------


def test_table_validates():
    for n in (1, 2, 3):
        assert enumerate_en(n).validate() is True


def test_composition_closure():
    for n in (1, 2):
        table = enumerate_en(n)
        assert table.check_composition_closure() > 0


def test_identity_present():
    table = enumerate_en(2)
    for i in range(len(table.objects)):
        ident = table.identity_of(i)
        assert ident.is_identity()
        assert ident in table.hom(i, i)


def test_object_index_lookup():
    table = enumerate_en(3, include_homs=False)
    for i, p in enumerate(table.objects):
        assert table.object_index(p) == i
    with pytest.raises(ValidationError):
        table.object_index(canonical_object((2,)))


def test_glue_patterns_by_independent_orbit_count():
    # recount the E2 (2,2) -> (3) orbits with the raw symmetric group
    table = enumerate_en(2)
    maps = table.hom(1, 0)
    assert len(maps) == 24
    seen = set()
    orbits = 0
    for f in maps:
        if f.values in seen:
            continue
        orbits += 1
        for perm in itertools.permutations(range(3)):
            g = compose(SetMap(3, 3, perm), f)
            seen.add(g.values)
    assert orbits == 4


# --- filtration ---------------------------------------------------------------


def test_filtration_subcategory():
    table = enumerate_en(2)
    low = filtration(table, 1)
    assert [p.shape() for p in low.objects] == [(3,)]
    assert low.hom_size_matrix() == [[6]]
    full = filtration(table, 2)
    assert len(full.objects) == 2
    with pytest.raises(ValidationError):
        filtration(table, 0)
    with pytest.raises(ValidationError):
        filtration(table, 3)


def test_nice_filtration_passes():
    for n in (1, 2, 3):
        cert = verify_nice_filtration(enumerate_en(n))
        assert cert["passed"] is True


def test_nice_filtration_reports_bad_map():
    # hand-build a table with a morphism into a deeper stratum
    table = enumerate_en(2)
    broken = CategoryTable(
        n=2,
        objects=table.objects,
        strata=table.strata,
        groups=table.groups,
        homs={
            (0, 0): table.hom(0, 0),
            (0, 1): (SetMap(3, 4, (0, 1, 2)),),
            (1, 0): table.hom(1, 0),
            (1, 1): table.hom(1, 1),
        },
    )
    cert = verify_nice_filtration(broken)
    assert cert["passed"] is False
    assert cert["reason"] == "morphism into a deeper stratum"


# --- caps and materialization -------------------------------------------------


def test_enumerate_en_validation():
    with pytest.raises(ValidationError):
        enumerate_en(0)
    with pytest.raises(CapExceededError):
        enumerate_en(6)


def test_large_n_skips_homs_by_default():
    table = enumerate_en(5)
    assert table.homs is None
    assert len(table.objects) == 7
    with pytest.raises(ValidationError):
        table.hom(0, 0)


def test_to_json_shape():
    data = enumerate_en(2).to_json()
    assert data["n"] == 2
    assert data["hom_counts"] == [[6, 0], [24, 8]]
    assert data["glue_pattern_counts"] == [[1, 0], [4, 1]]
    assert "0->0" in data["homs"]
