"""Irreducible SU(2) blocks on the l excitation subspace of one channel use

The state |m_H (l-m)_V> is the monomial (a_H†)^m (a_V†)^(l-m) / sqrt(m!(l-m)!).
Under a_H† -> Ω_HH a_H† + Ω_HV a_V† and a_V† -> Ω_VH a_H† + Ω_VV a_V† it is
mapped to sum_n D_mn |n_H (l-n)_V>. Rows and columns are ordered by m
ascending. With this convention D(Ω1 Ω2) = D(Ω1) D(Ω2).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .types import SpecialUnitarySU2, UnitaryU2, unitarity_residual

_logger = logging.getLogger(__name__)

# Max-norm tolerance for representation identities on blocks up to two_j = 12
TAU_REP = 1e-8

# Below this rotation angle the character is replaced by its limit 2j + 1
THETA_LIMIT = 1e-6


@dataclass(frozen=True, eq=False)
class WignerBlock:
    two_j: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        size = self.two_j + 1
        if matrix.shape != (size, size):
            raise ValueError(
                f"Block for two_j={self.two_j} needs shape {(size, size)}, "
                f"got {matrix.shape}"
            )
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @property
    def dimension(self) -> int:
        return self.two_j + 1

    def element(self, m: int, n: int) -> complex:
        """Coefficient of |n_H (l-n)_V> in the image of |m_H (l-m)_V>"""
        return complex(self.matrix[m, n])

    def in_hv_order(self) -> np.ndarray:
        """The matrix with H-heavy states first. For two_j = 1 this is Ω'"""
        return self.matrix[::-1, ::-1]

    def residual(self) -> float:
        return unitarity_residual(self.matrix)


def decompose_u2(omega: UnitaryU2 | np.ndarray) -> tuple[float, SpecialUnitarySU2]:
    """Split Ω = e^{-iα} Ω' with α = -arg(det Ω) / 2 and arg in (-π, π]"""
    if not isinstance(omega, UnitaryU2):
        omega = UnitaryU2(omega)

    alpha = -0.5 * float(np.angle(omega.determinant))
    prime = np.exp(1j * alpha) * omega.matrix
    return alpha, SpecialUnitarySU2(prime, alpha=alpha)


def _norm(l: int, m: int, n: int) -> float:
    ratio = Fraction(
        math.factorial(n) * math.factorial(l - n),
        math.factorial(m) * math.factorial(l - m),
    )
    return math.sqrt(ratio)


def wigner_d(two_j: int, omega_prime: UnitaryU2) -> WignerBlock:
    """D^{two_j/2} from the monomial expansion

    (a x + b y)^m (c x + d y)^(l-m) picks k powers of x from the first factor
    and n - k from the second one.
    """
    if two_j < 0:
        raise ValueError(f"two_j must be non-negative, got {two_j}")

    l = two_j
    a, b, c, d = (complex(x) for x in omega_prime.matrix.flat)
    result = np.zeros((l + 1, l + 1), dtype=complex)
    for m in range(l + 1):
        for n in range(l + 1):
            total = 0j
            for k in range(max(0, n - l + m), min(m, n) + 1):
                total += (
                    math.comb(m, k)
                    * math.comb(l - m, n - k)
                    * a**k
                    * b ** (m - k)
                    * c ** (n - k)
                    * d ** (l - m - n + k)
                )
            result[m, n] = _norm(l, m, n) * total
    return WignerBlock(two_j, result)


def block_unitary(
    l: int, omega: UnitaryU2 | np.ndarray, *, alternate_branch: bool = False
) -> WignerBlock:
    """e^{-ilα} D^{l/2}(Ω'), the action of Ω on the l excitation subspace.

    The alternate branch (α + π, -Ω') gives the same matrix up to rounding.
    """
    if l < 0:
        raise ValueError(f"l must be non-negative, got {l}")

    alpha, prime = decompose_u2(omega)
    if alternate_branch:
        alpha, prime = alpha + math.pi, -prime

    block = wigner_d(l, prime)
    return WignerBlock(l, np.exp(-1j * l * alpha) * block.matrix)


def rotation_angle(omega_prime: SpecialUnitarySU2) -> float:
    """θ in [0, 2π] with eigenvalues e^{-+iθ/2}"""
    half_trace = float(np.real(np.trace(omega_prime.matrix))) / 2
    return 2 * math.acos(min(1.0, max(-1.0, half_trace)))


def character(two_j: int, theta: float) -> float:
    """Trace of D^j at rotation angle θ: sin((2j+1)θ/2) / sin(θ/2)"""
    if abs(theta) < THETA_LIMIT:
        return float(two_j + 1)
    if abs(2 * math.pi - theta) < THETA_LIMIT:
        return float((-1) ** two_j * (two_j + 1))
    return math.sin((two_j + 1) * theta / 2) / math.sin(theta / 2)
