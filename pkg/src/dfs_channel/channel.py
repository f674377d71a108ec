"""The collective depolarization U(Ω)^⊗N restricted to the sector H_NL

States of the sector are Fock tuples ((m_1, v_1), ..., (m_N, v_N)) with
sum(m_k + v_k) = L. The matrix follows the block convention of the wigner
module: entry (s, t) is the amplitude of basis state t in the image of state s.
"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property, reduce
from math import prod

import numpy as np
from scipy.linalg import null_space, qr, schur
from scipy.stats import unitary_group

from .multiplicity import k_value
from .types import (
    MultiplicityTable,
    ResourceCapError,
    SectorIndex,
    SpecialUnitarySU2,
    UnitaryU2,
    compositions,
    sector_dimension,
    valid_spins,
)
from .wigner import block_unitary, character, decompose_u2, rotation_angle

_logger = logging.getLogger(__name__)

DEFAULT_SECTOR_CAP = 5000
DEFAULT_COMMUTANT_CAP = 60
DEFAULT_SAMPLES = 3

TAU_CHAR = 1e-8
# Singular values below TAU_RANK times the largest one count as zero
TAU_RANK = 1e-7

FockTuple = tuple[tuple[int, int], ...]
Seed = int | np.random.Generator


@dataclass(frozen=True)
class SectorBasis:
    sector: SectorIndex
    states: tuple[FockTuple, ...]

    def __len__(self) -> int:
        return len(self.states)

    @cached_property
    def positions(self) -> Mapping[FockTuple, int]:
        return {state: i for i, state in enumerate(self.states)}

    def index(self, state: FockTuple) -> int:
        return self.positions[state]


@dataclass(frozen=True, eq=False)
class SectorMatrix:
    basis: SectorBasis
    matrix: np.ndarray

    def __post_init__(self) -> None:
        self.matrix.flags.writeable = False

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


def sector_basis(
    sector: SectorIndex, *, cap: int = DEFAULT_SECTOR_CAP
) -> SectorBasis:
    """Fock tuples of the sector, lexicographic in (m_1, v_1, ..., m_N, v_N)"""
    dim = sector_dimension(sector)
    if dim > cap:
        raise ResourceCapError("sector_dim", dim, cap)

    states = tuple(
        tuple(zip(flat[0::2], flat[1::2]))
        for flat in compositions(2 * sector.n_uses, sector.total_excitations)
    )
    return SectorBasis(sector, states)


def excitations(state: FockTuple) -> tuple[int, ...]:
    """Excitations l_k = m_k + v_k carried by each use"""
    return tuple(m + v for m, v in state)


def sector_phase(sector: SectorIndex, omega: UnitaryU2) -> complex:
    """e^{-iLα} picked up by the whole sector"""
    alpha, _prime = decompose_u2(omega)
    return complex(np.exp(-1j * sector.total_excitations * alpha))


def sector_unitary(
    sector: SectorIndex, omega: UnitaryU2, *, cap: int = DEFAULT_SECTOR_CAP
) -> SectorMatrix:
    """Assemble U(Ω)^⊗N on H_NL as one Kronecker block per composition"""
    basis = sector_basis(sector, cap=cap)
    L = sector.total_excitations
    blocks: dict[int, np.ndarray] = {}

    groups: dict[tuple[int, ...], list[int]] = {}
    for i, state in enumerate(basis.states):
        groups.setdefault(excitations(state), []).append(i)

    matrix = np.zeros((len(basis), len(basis)), dtype=complex)
    for comp, members in groups.items():
        # Mixed radix position of each member inside the Kronecker product
        order = np.empty(prod(l + 1 for l in comp), dtype=int)
        for i in members:
            pos = 0
            for (m, _v), l in zip(basis.states[i], comp):
                pos = pos * (l + 1) + m
            order[pos] = i

        for l in comp:
            if l not in blocks:
                blocks[l] = block_unitary(l, omega).matrix
        kron = reduce(np.kron, (blocks[l] for l in comp))
        matrix[np.ix_(order, order)] = kron

    _logger.debug(
        "Assembled sector N=%d L=%d of dimension %d from %d compositions",
        sector.n_uses,
        L,
        len(basis),
        len(groups),
    )
    return SectorMatrix(basis, matrix)


def haar_sample_u2(seed: Seed) -> UnitaryU2:
    """Haar distributed Ω, deterministic for a fixed seed"""
    return UnitaryU2(unitary_group.rvs(2, random_state=seed))


def haar_sample_su2(seed: Seed) -> SpecialUnitarySU2:
    """The SU(2) part of a Haar distributed Ω"""
    _alpha, prime = decompose_u2(haar_sample_u2(seed))
    return prime


def sector_character(
    sector: SectorIndex, table: MultiplicityTable, theta: float
) -> float:
    """sum_j K^j_NL chi_j(θ)"""
    return sum(
        k_value(table, sector, spin.two_j) * character(spin.two_j, theta)
        for spin in valid_spins(sector)
    )


def character_check(
    sector: SectorIndex,
    table: MultiplicityTable,
    omega_prime: UnitaryU2,
    *,
    cap: int = DEFAULT_SECTOR_CAP,
) -> float:
    """|Tr U^⊗N|_NL - sum_j K^j_NL chi_j(θ)| for an SU(2) element"""
    if not isinstance(omega_prime, SpecialUnitarySU2):
        _alpha, omega_prime = decompose_u2(omega_prime)

    trace = sector_unitary(sector, omega_prime, cap=cap).trace
    expected = sector_character(sector, table, rotation_angle(omega_prime))
    return abs(trace - expected)


def expected_commutant_dimension(
    table: MultiplicityTable, sector: SectorIndex
) -> int:
    """sum_j (K^j_NL)^2"""
    return sum(
        k_value(table, sector, spin.two_j) ** 2 for spin in valid_spins(sector)
    )


def commutant_dimension(
    sector: SectorIndex,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    *,
    cap: int = DEFAULT_COMMUTANT_CAP,
) -> int:
    """Dimension of {X : X U_i = U_i X} for Haar sampled SU(2) elements"""
    if n_samples < 2:
        raise ValueError(f"At least 2 samples are required, got {n_samples}")

    dim = sector_dimension(sector)
    if dim > cap:
        raise ResourceCapError("commutant_dim", dim, cap)

    rng = np.random.default_rng(seed)
    samples = [
        sector_unitary(sector, haar_sample_su2(rng), cap=cap).matrix
        for _ in range(n_samples)
    ]

    # In the eigenbasis of the first sample a commuting X only couples states
    # with equal eigenvalues
    diagonal, basis = schur(samples[0], output="complex")
    eigvals = np.diag(diagonal)
    close = np.abs(eigvals[:, None] - eigvals[None, :]) <= TAU_RANK
    rows, cols = np.nonzero(close)

    system = np.vstack(
        [
            _restricted_commutator(basis.conj().T @ u @ basis, rows, cols)
            for u in samples[1:]
        ]
    )
    (reduced,) = qr(system, mode="r")
    reduced = reduced[: system.shape[1]]
    result = null_space(reduced, rcond=TAU_RANK).shape[1]

    _logger.debug(
        "Commutant of sector N=%d L=%d: %d unknowns, dimension %d",
        sector.n_uses,
        sector.total_excitations,
        len(rows),
        result,
    )
    return result


def _restricted_commutator(
    u: np.ndarray, rows: np.ndarray, cols: np.ndarray
) -> np.ndarray:
    """Matrix of X -> XU - UX acting on X supported on the given entries"""
    d = u.shape[0]
    out = np.zeros((d * d, len(rows)), dtype=complex)
    for p, (a, b) in enumerate(zip(rows, cols)):
        term = np.zeros((d, d), dtype=complex)
        term[a, :] += u[b, :]
        term[:, b] -= u[:, a]
        out[:, p] = term.ravel()
    return out
