"""Brute-force cross-checks for the multiplicities

The Clebsch-Gordan oracle decomposes every composition l_1 + ... + l_N = L of
the excitations into irreps by folding the series
D^{j1} x D^{j2} = D^{|j1-j2|} + ... + D^{j1+j2}. The weight oracle counts the
sector states with M horizontal excitations. The multiplicity of spin j is the
difference of the counts at M = L/2 + j and M = L/2 + j + 1.
"""

import logging
from collections.abc import Mapping
from functools import lru_cache
from math import comb

from .types import (
    Composition,
    IrrepMultiset,
    Multiplicity,
    ResourceCapError,
    SectorIndex,
    compositions,
    count_compositions,
    valid_spins,
)

_logger = logging.getLogger(__name__)

DEFAULT_COMPOSITION_CAP = 1_000_000


def cg_pair(acc: Mapping[int, int], two_j2: int) -> IrrepMultiset:
    """Couple every irrep in acc with D^{two_j2 / 2}"""
    result: dict[int, int] = {}
    for two_j1, count in acc.items():
        for two_j in range(abs(two_j1 - two_j2), two_j1 + two_j2 + 1, 2):
            result[two_j] = result.get(two_j, 0) + count
    return IrrepMultiset(result)


@lru_cache(maxsize=4096)
def _decompose_sorted(parts: Composition) -> IrrepMultiset:
    acc = IrrepMultiset({parts[0]: 1})
    for part in parts[1:]:
        acc = cg_pair(acc, part)
    return acc


def decompose_composition(comp: Composition) -> IrrepMultiset:
    """Irreps of D^{l_1/2} x ... x D^{l_N/2}"""
    if not comp:
        raise ValueError("A composition needs at least one part")
    if any(part < 0 for part in comp):
        raise ValueError(f"Negative part in composition {comp}")
    # The series is commutative up to isomorphism
    return _decompose_sorted(tuple(sorted(comp)))


def oracle_multiplicities(
    sector: SectorIndex, *, cap: int = DEFAULT_COMPOSITION_CAP
) -> IrrepMultiset:
    """K^j_NL summed over all compositions of L into N parts"""
    n, L = sector.n_uses, sector.total_excitations
    count = count_compositions(n, L)
    if count > cap:
        raise ResourceCapError("compositions", count, cap)

    _logger.debug(f"Folding {count} compositions for N={n} L={L}")
    counts: dict[int, int] = {}
    for comp in compositions(n, L):
        for two_j, k in decompose_composition(comp).items():
            counts[two_j] = counts.get(two_j, 0) + k
    return IrrepMultiset(counts)


def weight_count(sector: SectorIndex, M: int) -> Multiplicity:
    """Number of sector states with exactly M horizontal excitations"""
    n, L = sector.n_uses, sector.total_excitations
    if not 0 <= M <= L:
        return 0
    return comb(M + n - 1, n - 1) * comb(L - M + n - 1, n - 1)


def weight_multiplicities(sector: SectorIndex) -> IrrepMultiset:
    """K^j_NL as differences of neighbouring weight counts"""
    L = sector.total_excitations
    counts = {}
    for spin in valid_spins(sector):
        M = (L + spin.two_j) // 2
        counts[spin.two_j] = weight_count(sector, M) - weight_count(sector, M + 1)
    return IrrepMultiset(counts)
