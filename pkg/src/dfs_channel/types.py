import itertools
import logging
import threading
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

try:
    from typing import Self
except ImportError:
    from typing_extensions import Self

_logger = logging.getLogger(__name__)

# Max-norm tolerance on Ω†Ω − I for the 2x2 channel parameters
TAU_UNIT = 1e-10

Multiplicity = int
Composition = tuple[int, ...]


class ResourceCapError(RuntimeError):
    """A configured size cap would be exceeded"""

    def __init__(self, cap_name: str, requested: int, limit: int) -> None:
        super().__init__(
            f"{cap_name} cap exceeded: {requested} requested, limit is {limit}"
        )
        self.cap_name: str = cap_name
        self.requested: int = requested
        self.limit: int = limit


@dataclass(frozen=True, order=True)
class SpinLabel:
    """SU(2) irrep label j stored as the integer 2j"""

    two_j: int

    def __post_init__(self) -> None:
        if self.two_j < 0:
            raise ValueError(f"two_j must be non-negative, got {self.two_j}")

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dimension(self) -> int:
        return self.two_j + 1

    def __str__(self) -> str:
        return str(self.j)


@dataclass(frozen=True, order=True)
class SectorIndex:
    """The sector H_NL: N channel uses carrying L excitations in total"""

    n_uses: int
    total_excitations: int

    def __post_init__(self) -> None:
        if self.n_uses < 1:
            raise ValueError(f"n_uses must be at least 1, got {self.n_uses}")
        if self.total_excitations < 0:
            raise ValueError(
                f"total_excitations must be non-negative, got {self.total_excitations}"
            )

    def allows(self, two_j: int) -> bool:
        """Check the range and parity rule for spins occurring in this sector"""
        L = self.total_excitations
        return 0 <= two_j <= L and (L - two_j) % 2 == 0


def valid_spins(sector: SectorIndex) -> list[SpinLabel]:
    L = sector.total_excitations
    return [SpinLabel(two_j) for two_j in range(L % 2, L + 1, 2)]


def count_compositions(parts: int, total: int) -> int:
    """Number of ordered ways to write total as a sum of parts non-negative
    integers"""
    if parts < 1:
        return int(total == 0)
    return comb(total + parts - 1, parts - 1)


def compositions(parts: int, total: int) -> Iterator[Composition]:
    """Yield the compositions of total into parts non-negative integers in
    lexicographic order"""
    # Stars and bars: the bar positions are visited in lexicographic order which
    # yields the parts in lexicographic order as well
    width = total + parts - 1
    for bars in itertools.combinations(range(width), parts - 1):
        prev, result = -1, []
        for bar in bars:
            result.append(bar - prev - 1)
            prev = bar
        result.append(width - prev - 1)
        yield tuple(result)


def sector_dimension(sector: SectorIndex) -> Multiplicity:
    """Count the Fock tuples (m_1, v_1, ..., m_N, v_N) summing to L"""
    return count_compositions(2 * sector.n_uses, sector.total_excitations)


class IrrepMultiset(Mapping[int, Multiplicity]):
    """Immutable map two_j -> number of copies of D^j"""

    def __init__(
        self,
        counts: Mapping[int, int] | Iterable[tuple[int, int]] | None = None,
    ) -> None:
        items = counts.items() if isinstance(counts, Mapping) else counts or ()
        data: dict[int, int] = {}
        for two_j, count in items:
            if two_j < 0 or count < 0:
                raise ValueError(f"Invalid irrep entry {two_j}: {count}")
            if count:
                data[two_j] = data.get(two_j, 0) + count
        self._counts: dict[int, int] = dict(sorted(data.items()))

    def __getitem__(self, two_j: int) -> Multiplicity:
        return self._counts[two_j]

    def __iter__(self) -> Iterator[int]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __repr__(self) -> str:
        return f"IrrepMultiset({self._counts!r})"

    def __add__(self, other: Mapping[int, int]) -> "IrrepMultiset":
        merged = dict(self._counts)
        for two_j, count in other.items():
            merged[two_j] = merged.get(two_j, 0) + count
        return IrrepMultiset(merged)

    @property
    def dimension(self) -> int:
        """Total dimension of the represented space"""
        return sum((two_j + 1) * count for two_j, count in self._counts.items())


class MultiplicityTable:
    """Dense triangular store of K^j_NL indexed by (N, L, two_j)

    Layer N holds one row per L and row L holds the values for
    two_j = L mod 2, L mod 2 + 2, ..., L at position two_j // 2.
    """

    def __init__(self) -> None:
        self._layers: list[list[list[Multiplicity]]] = []
        self.lock: threading.RLock = threading.RLock()

    @property
    def n_max(self) -> int:
        return len(self._layers)

    @property
    def l_max(self) -> int:
        if not self._layers:
            return -1
        return min(len(layer) for layer in self._layers) - 1

    def covers(self, sector: SectorIndex) -> bool:
        return (
            sector.n_uses <= self.n_max and sector.total_excitations <= self.l_max
        )

    def rows(self, n_uses: int) -> int:
        """Number of L rows stored for layer n_uses"""
        if not 1 <= n_uses <= self.n_max:
            return 0
        return len(self._layers[n_uses - 1])

    def lookup(self, n_uses: int, total_excitations: int, two_j: int) -> Multiplicity:
        """Stored value or 0 for any spin that cannot occur in the sector"""
        if total_excitations < 0 or not 0 <= two_j <= total_excitations:
            return 0
        if (total_excitations - two_j) % 2:
            return 0
        if total_excitations >= self.rows(n_uses):
            raise KeyError((n_uses, total_excitations, two_j))
        return self._layers[n_uses - 1][total_excitations][two_j // 2]

    def spectrum(self, sector: SectorIndex) -> IrrepMultiset:
        """The nonzero multiplicities of the sector"""
        n, L = sector.n_uses, sector.total_excitations
        return IrrepMultiset(
            (s.two_j, self.lookup(n, L, s.two_j)) for s in valid_spins(sector)
        )

    def entries(self) -> Iterator[tuple[int, int, int, Multiplicity]]:
        """Iterate the nonzero (N, L, two_j, K) inside the bounds with N, L and
        two_j ascending"""
        for n in range(1, self.n_max + 1):
            for L in range(self.l_max + 1):
                for two_j in range(L % 2, L + 1, 2):
                    value = self._layers[n - 1][L][two_j // 2]
                    if value:
                        yield n, L, two_j, value

    def __len__(self) -> int:
        return sum(1 for _ in self.entries())

    def _append_layer(self) -> list[list[Multiplicity]]:
        layer: list[list[Multiplicity]] = []
        self._layers.append(layer)
        return layer

    def _layer(self, n_uses: int) -> list[list[Multiplicity]]:
        return self._layers[n_uses - 1]


@dataclass(frozen=True, eq=False)
class UnitaryU2:
    """A 2x2 unitary Ω acting on the mode operators (a_H†, a_V†)"""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise ValueError(f"Expected a 2x2 matrix, got shape {matrix.shape}")

        residual = unitarity_residual(matrix)
        if residual >= TAU_UNIT:
            raise ValueError(f"Matrix is not unitary (residual {residual:.3e})")

        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls) -> Self:
        return cls(np.eye(2, dtype=complex))

    @property
    def determinant(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    def __matmul__(self, other: "UnitaryU2") -> "UnitaryU2":
        return UnitaryU2(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class SpecialUnitarySU2(UnitaryU2):
    """Ω' with det Ω' = 1. alpha is the phase split off by Ω = e^{-iα} Ω'"""

    alpha: float = 0.0

    def __post_init__(self) -> None:
        super().__post_init__()
        if abs(self.determinant - 1) >= TAU_UNIT:
            raise ValueError(f"Determinant {self.determinant:.6g} is not 1")

    def __neg__(self) -> "SpecialUnitarySU2":
        return SpecialUnitarySU2(-self.matrix, alpha=self.alpha)

    def __matmul__(self, other: "UnitaryU2") -> "UnitaryU2":
        product = self.matrix @ other.matrix
        if isinstance(other, SpecialUnitarySU2):
            return SpecialUnitarySU2(product)
        return UnitaryU2(product)


def unitarity_residual(matrix: np.ndarray) -> float:
    """Max-norm of M†M − I"""
    eye = np.eye(matrix.shape[0])
    return float(np.max(np.abs(matrix.conj().T @ matrix - eye)))
