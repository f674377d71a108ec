from fractions import Fraction

import pytest
from dfs_channel import multiplicity
from dfs_channel.multiplicity import (
    best_multiplicity,
    build_table,
    capacity_profile,
    k_initial,
    k_value,
    recursion_support,
    rectangle_vertices,
    summation_grid,
    tetrahedron_vertices,
    triple_sum,
)
from dfs_channel.types import (
    MultiplicityTable,
    ResourceCapError,
    SectorIndex,
    sector_dimension,
    valid_spins,
)
from hypothesis import given
from hypothesis import strategies as st


@pytest.fixture(scope="module")
def table() -> MultiplicityTable:
    return build_table(10, 20)


def test_k_initial() -> None:
    assert k_initial(2, 2) == 1
    assert k_initial(2, 0) == 0
    assert k_initial(0, 0) == 1


def test_initial_condition(table: MultiplicityTable) -> None:
    for L in range(21):
        for two_j in range(L + 1):
            expected = 1 if two_j == L else 0
            assert k_value(table, SectorIndex(1, L), two_j) == expected


def test_recursion_support() -> None:
    assert recursion_support(SectorIndex(3, 2), 2) == [(0, 0), (1, 1), (2, 2)]
    assert recursion_support(SectorIndex(3, 2), 0) == [(1, 1), (2, 0)]
    assert recursion_support(SectorIndex(1, 0), 0) == [(0, 0)]

    with pytest.raises(ValueError):
        recursion_support(SectorIndex(2, 2), 1)
    with pytest.raises(ValueError):
        recursion_support(SectorIndex(2, 2), 4)


def rectangle(L: int, two_j: int) -> set[tuple[int, int]]:
    """All lattice pairs inside the rotated rectangle, brute force"""
    found = set()
    for Lp in range(L + 1):
        for two_jp in range(Lp % 2, Lp + 1, 2):
            mu2, nu2 = Lp + two_jp, Lp - two_jp
            if L - two_j <= mu2 <= L + two_j and 0 <= nu2 <= L - two_j:
                found.add((Lp, two_jp))
    return found


@given(st.integers(0, 24), st.data())
def test_support_geometry(L: int, data: st.DataObject) -> None:
    two_j = data.draw(st.sampled_from(range(L % 2, L + 1, 2)))
    support = recursion_support(SectorIndex(2, L), two_j)

    assert len(support) == len(set(support))
    assert all(0 <= two_jp <= Lp <= L for Lp, two_jp in support)
    assert all((Lp - two_jp) % 2 == 0 for Lp, two_jp in support)
    assert set(support) == rectangle(L, two_j)


def test_rectangle_vertices() -> None:
    vertices = rectangle_vertices(2, 2)
    assert vertices == [
        (Fraction(2), Fraction(1)),
        (Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(0)),
        (Fraction(2), Fraction(1)),
    ]

    vertices = rectangle_vertices(5, 1)
    assert vertices[2] == (Fraction(2), Fraction(1))
    assert vertices[3] == (Fraction(3), Fraction(3, 2))

    with pytest.raises(ValueError):
        rectangle_vertices(2, 1)


def test_k_value_examples() -> None:
    table = MultiplicityTable()
    assert k_value(table, SectorIndex(2, 2), 2) == 3
    assert k_value(table, SectorIndex(2, 2), 0) == 1
    assert k_value(table, SectorIndex(1, 7), 7) == 1

    # Spins outside of the sector are zero
    assert k_value(table, SectorIndex(2, 2), 1) == 0
    assert k_value(table, SectorIndex(2, 2), 6) == 0

    with pytest.raises(ValueError):
        k_value(table, SectorIndex(0, 2), 0)


def test_k_value_memoizes() -> None:
    table = build_table(2, 2)
    assert table.n_max == 2 and table.l_max == 2

    assert k_value(table, SectorIndex(4, 5), 1) == k_value(table, SectorIndex(4, 5), 1)
    assert table.n_max == 4
    assert table.l_max == 5
    assert table.rows(4) == 6
    assert k_value(table, SectorIndex(2, 2), 2) == 3


def test_k_value_keeps_bounds() -> None:
    table = build_table(2, 10)
    before = list(table.entries())

    assert k_value(table, SectorIndex(4, 2), 0) == 6
    assert table.n_max == 4
    assert table.l_max == 10
    after = list(table.entries())
    assert all(entry in after for entry in before)

    # Sectors computed before the extension remain usable
    spin, value = best_multiplicity(table, SectorIndex(2, 5))
    assert (spin.two_j, value) == (5, 6)
    assert len(capacity_profile(table, 2)) == 11


def test_triple_sum_keeps_bounds() -> None:
    table = build_table(1, 8)
    assert triple_sum(table, SectorIndex(3, 2)) == {0: 3, 2: 6}
    assert table.n_max == 2
    assert table.l_max == 8


def test_build_table_examples() -> None:
    table = build_table(1, 3)
    assert list(table.entries()) == [(1, L, L, 1) for L in range(4)]

    table = build_table(2, 2)
    entries = {(n, L, two_j): k for n, L, two_j, k in table.entries()}
    assert entries[2, 2, 2] == 3
    assert entries[2, 2, 0] == 1
    assert entries[2, 1, 1] == 2

    table = build_table(3, 0)
    assert (3, 0, 0, 1) in list(table.entries())
    assert len(table) == 3


def test_build_table_errors() -> None:
    with pytest.raises(ValueError):
        build_table(0, 3)
    with pytest.raises(ValueError):
        build_table(1, -1)
    with pytest.raises(ResourceCapError) as info:
        build_table(10, 20, cap=100)
    assert info.value.cap_name == "table"


def test_dimension_identity(table: MultiplicityTable) -> None:
    for n in range(1, 11):
        for L in range(21):
            sector = SectorIndex(n, L)
            total = sum(
                k_value(table, sector, s.two_j) * s.dimension for s in valid_spins(sector)
            )
            assert total == sector_dimension(sector)


def test_spot_values(table: MultiplicityTable) -> None:
    assert k_value(table, SectorIndex(2, 2), 2) == 3
    assert k_value(table, SectorIndex(2, 2), 0) == 1
    assert k_value(table, SectorIndex(2, 1), 1) == 2
    assert sector_dimension(SectorIndex(2, 2)) == 10


def test_totals_increase_with_n(table: MultiplicityTable) -> None:
    for L in range(1, 21):
        totals = [
            sum(table.spectrum(SectorIndex(n, L)).values()) for n in range(1, 11)
        ]
        assert all(a < b for a, b in zip(totals, totals[1:]))


def test_best_multiplicity(table: MultiplicityTable) -> None:
    spin, value = best_multiplicity(table, SectorIndex(2, 2))
    assert (spin.two_j, value) == (2, 3)

    spin, value = best_multiplicity(table, SectorIndex(1, 4))
    assert (spin.two_j, value) == (4, 1)

    spin, value = best_multiplicity(table, SectorIndex(2, 1))
    assert (spin.two_j, value) == (1, 2)

    with pytest.raises(ValueError):
        best_multiplicity(table, SectorIndex(11, 2))
    with pytest.raises(ValueError):
        best_multiplicity(table, SectorIndex(2, 21))


def test_best_multiplicity_tie_break() -> None:
    table = MultiplicityTable()
    multiplicity._extend(table, 1, 0)
    # Artificial tie between j = 0 and j = 1
    table._layer(1).append([5])
    table._layer(1).append([5, 5])
    spin, value = best_multiplicity(table, SectorIndex(1, 2))
    assert (spin.two_j, value) == (0, 5)


def test_capacity_profile(table: MultiplicityTable) -> None:
    profile = capacity_profile(table, 2)
    assert len(profile) == 21
    assert profile[2][0] == 2
    assert (profile[2][1].two_j, profile[2][2]) == (2, 3)

    for L, spin, value in profile:
        assert value == max(table.spectrum(SectorIndex(2, L)).values())
        assert SectorIndex(2, L).allows(spin.two_j)


def test_triple_sum(table: MultiplicityTable) -> None:
    for n in range(1, 8):
        for L in range(13):
            sector = SectorIndex(n, L)
            assert triple_sum(table, sector) == table.spectrum(sector)


def test_summation_grid() -> None:
    assert summation_grid(0) == [(0, 0, 0)]
    assert summation_grid(1) == [(0, 0, 1), (1, 1, 1)]

    with pytest.raises(ValueError):
        summation_grid(-1)


@given(st.integers(0, 16))
def test_grid_inside_tetrahedron(L: int) -> None:
    vertices = tetrahedron_vertices(L)
    assert vertices[0] == (L, 0, 0)
    assert vertices[3] == (L, Fraction(L, 2), Fraction(L, 2))

    for Lp, two_jp, two_j in summation_grid(L):
        jp, j = Fraction(two_jp, 2), Fraction(two_j, 2)
        extra = Fraction(L - Lp, 2)
        assert j <= jp + extra
        assert j >= extra - jp
        assert j >= jp - extra
        assert jp <= Fraction(Lp, 2)


@given(st.integers(0, 16), st.data())
def test_grid_slice_is_support(L: int, data: st.DataObject) -> None:
    two_j = data.draw(st.sampled_from(range(L % 2, L + 1, 2)))
    plane = sorted((Lp, two_jp) for Lp, two_jp, tj in summation_grid(L) if tj == two_j)
    assert plane == sorted(recursion_support(SectorIndex(2, L), two_j))
