"""Multiplicities K^j_NL of the collective depolarization by recursion over N

K^j_NL = sum_{mu=L/2-j}^{L/2+j} sum_{nu=0}^{L/2-j} K^{(mu-nu)/2}_{N-1,mu+nu}

with K^j_{1,L} = delta_{L,2j}. Spins are doubled throughout, so with
two_j = 2j the bounds L/2 -+ j are (L -+ two_j) / 2 and the summand sits at
L' = mu + nu, two_j' = mu - nu.
"""

import logging
from collections.abc import Iterator
from fractions import Fraction

from .oracle import cg_pair
from .types import (
    IrrepMultiset,
    Multiplicity,
    MultiplicityTable,
    ResourceCapError,
    SectorIndex,
    SpinLabel,
    valid_spins,
)

_logger = logging.getLogger(__name__)

DEFAULT_TABLE_CAP = 10_000_000

SupportPoint = tuple[int, int]
GridPoint = tuple[int, int, int]


def k_initial(L: int, two_j: int) -> Multiplicity:
    """A single use carries exactly D^{L/2} in the L excitation sector"""
    return int(two_j == L)


def _mu_nu_bounds(L: int, two_j: int) -> tuple[int, int, int]:
    if two_j < 0 or two_j > L:
        raise ValueError(f"two_j={two_j} is outside of 0..{L}")
    if (L - two_j) % 2:
        raise ValueError(f"two_j={two_j} and L={L} differ in parity")
    return (L - two_j) // 2, (L + two_j) // 2, (L - two_j) // 2


def iter_support(L: int, two_j: int) -> Iterator[SupportPoint]:
    mu_lo, mu_hi, nu_hi = _mu_nu_bounds(L, two_j)
    for mu in range(mu_lo, mu_hi + 1):
        for nu in range(nu_hi + 1):
            yield mu + nu, mu - nu


def recursion_support(sector: SectorIndex, two_j: int) -> list[SupportPoint]:
    """The (L', two_j') pairs of layer N-1 summed up for K^j_NL"""
    return list(iter_support(sector.total_excitations, two_j))


def rectangle_vertices(L: int, two_j: int) -> list[tuple[Fraction, Fraction]]:
    """Corners of the rotated rectangle enclosing the support in (L', j')"""
    _mu_nu_bounds(L, two_j)
    j = Fraction(two_j, 2)
    half = Fraction(L, 2)
    return [
        (Fraction(L), j),
        (L - 2 * j, Fraction(0)),
        (half - j, half / 2 - j / 2),
        (half + j, half / 2 + j / 2),
    ]


def summation_grid(L: int) -> list[GridPoint]:
    """All (L', two_j', two_j) visited by the coupling sum before reordering"""
    if L < 0:
        raise ValueError(f"L must be non-negative, got {L}")

    points = []
    for Lp in range(L + 1):
        extra = L - Lp
        for two_jp in range(Lp % 2, Lp + 1, 2):
            for two_j in range(abs(two_jp - extra), two_jp + extra + 1, 2):
                points.append((Lp, two_jp, two_j))
    return points


def tetrahedron_vertices(L: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Vertices of the tetrahedron enclosing summation_grid(L) in (L', j', j)"""
    full, half, quarter = Fraction(L), Fraction(L, 2), Fraction(L, 4)
    zero = Fraction(0)
    return [
        (full, zero, zero),
        (half, quarter, zero),
        (zero, zero, half),
        (full, half, half),
    ]


def _row(table: MultiplicityTable, n: int, L: int) -> list[Multiplicity]:
    if n == 1:
        return [k_initial(L, two_j) for two_j in range(L % 2, L + 1, 2)]

    row = []
    for two_j in range(L % 2, L + 1, 2):
        row.append(
            sum(table.lookup(n - 1, Lp, two_jp) for Lp, two_jp in iter_support(L, two_j))
        )
    return row


def _entry_count(n_max: int, l_max: int) -> int:
    return n_max * sum(L // 2 + 1 for L in range(l_max + 1))


def _extend(
    table: MultiplicityTable, n_max: int, l_max: int, cap: int = DEFAULT_TABLE_CAP
) -> None:
    """Fill layers 1..n_max up to row l_max. Layer N only reads layer N-1"""
    requested = _entry_count(max(n_max, table.n_max), max(l_max, table.l_max))
    if requested > cap:
        raise ResourceCapError("table", requested, cap)

    with table.lock:
        try:
            for n in range(1, n_max + 1):
                if n > table.n_max:
                    table._append_layer()

                layer = table._layer(n)
                start = len(layer)
                while len(layer) <= l_max:
                    layer.append(_row(table, n, len(layer)))

                if len(layer) > start:
                    _logger.debug("Layer N=%d filled up to L=%d", n, len(layer) - 1)
        except MemoryError as e:
            raise ResourceCapError("table", requested, cap) from e


def build_table(
    n_max: int, l_max: int, *, cap: int = DEFAULT_TABLE_CAP
) -> MultiplicityTable:
    """Tabulate K^j_NL for 1 <= N <= n_max and 0 <= L <= l_max"""
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    if l_max < 0:
        raise ValueError(f"l_max must be non-negative, got {l_max}")

    table = MultiplicityTable()
    _extend(table, n_max, l_max, cap)
    _logger.debug(f"Built multiplicity table N<={n_max} L<={l_max}")
    return table


def k_value(
    table: MultiplicityTable, sector: SectorIndex, two_j: int
) -> Multiplicity:
    """K^j_NL looked up in the table, computing and storing missing layers"""
    if not sector.allows(two_j):
        return 0

    n, L = sector.n_uses, sector.total_excitations
    # Every layer is extended to the same row so the bounds stay rectangular
    if any(table.rows(k) <= L for k in range(1, n + 1)):
        _extend(table, max(n, table.n_max), max(L, table.l_max))
    return table.lookup(n, L, two_j)


def best_multiplicity(
    table: MultiplicityTable, sector: SectorIndex
) -> tuple[SpinLabel, Multiplicity]:
    """Spin with the largest decoherence-free subsystem. Ties go to the smaller
    spin as it couples to the smaller gauge factor"""
    if not table.covers(sector):
        raise ValueError(
            f"Sector N={sector.n_uses} L={sector.total_excitations} is outside "
            f"of the table bounds N<={table.n_max} L<={table.l_max}"
        )

    n, L = sector.n_uses, sector.total_excitations
    best, value = None, -1
    for spin in valid_spins(sector):
        k = table.lookup(n, L, spin.two_j)
        if k > value:
            best, value = spin, k

    assert best is not None
    return best, value


def capacity_profile(
    table: MultiplicityTable, n_uses: int
) -> list[tuple[int, SpinLabel, Multiplicity]]:
    """best_multiplicity for every L of the table at fixed N"""
    result = []
    for L in range(table.l_max + 1):
        spin, value = best_multiplicity(table, SectorIndex(n_uses, L))
        result.append((L, spin, value))
    return result


def triple_sum(table: MultiplicityTable, sector: SectorIndex) -> IrrepMultiset:
    """Couple every irrep of H_{N-1,L'} with the single use D^{(L-L')/2}
    without reordering the sums. Independent of the mu/nu recursion"""
    n, L = sector.n_uses, sector.total_excitations
    if n == 1:
        return IrrepMultiset({L: 1})

    if table.rows(n - 1) <= L:
        _extend(table, max(n - 1, table.n_max), max(L, table.l_max))

    result = IrrepMultiset()
    for Lp in range(L + 1):
        previous = table.spectrum(SectorIndex(n - 1, Lp))
        if previous:
            result = result + cg_pair(previous, L - Lp)
    return result
