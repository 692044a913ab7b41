"""Domain types for the complex double-delta-function potential.

The Hamiltonian ``-d^2/dx^2 + z_- delta(x + a) + z_+ delta(x - a)`` is handled in
dimensionless form throughout; :class:`PhysicalConfig` only exists so that
dimensionful input can be converted once at the boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, OriginError

__all__ = [
    "PhysicalConfig",
    "CouplingConfig",
    "ScaledCoupling",
    "Wavenumber",
    "nondimensionalize",
    "w_coefficients",
    "scale",
    "check_nonzero_k",
]


@dataclass(frozen=True)
class PhysicalConfig:
    """Dimensionful parameters: mass, hbar, complex couplings, half-separation, length scale."""

    mass: float
    hbar: float
    zeta_minus: complex
    zeta_plus: complex
    alpha: float
    length_scale: float

    def __post_init__(self):
        for name in ("mass", "hbar", "alpha", "length_scale"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidInputError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class CouplingConfig:
    """Dimensionless couplings ``z_-``, ``z_+`` and half-separation ``a``."""

    z_minus: complex
    z_plus: complex
    a: float = 1.0
    # the free particle is excluded from spectral questions but kept for limit checks
    allow_free: bool = field(default=False, repr=False, compare=False, kw_only=True)

    def __post_init__(self):
        object.__setattr__(self, "z_minus", complex(self.z_minus))
        object.__setattr__(self, "z_plus", complex(self.z_plus))
        object.__setattr__(self, "a", float(self.a))
        if not (math.isfinite(self.a) and self.a > 0):
            raise InvalidInputError(f"a must be positive, got {self.a!r}")
        if not (cmath.isfinite(self.z_minus) and cmath.isfinite(self.z_plus)):
            raise InvalidInputError("couplings must be finite")
        if self.z_minus == 0 and self.z_plus == 0 and not self.allow_free:
            raise InvalidInputError("z_- = z_+ = 0 is the free particle; at least one coupling must be nonzero")

    @property
    def u(self) -> complex:
        """Product ``z_- z_+``."""
        return self.z_minus * self.z_plus

    @property
    def v(self) -> complex:
        """Mean ``(z_- + z_+) / 2``."""
        return 0.5 * (self.z_minus + self.z_plus)

    @property
    def scaled(self) -> "ScaledCoupling":
        return scale(self)

    @classmethod
    def from_scaled(cls, zf_minus: complex, zf_plus: complex, a: float = 1.0) -> "CouplingConfig":
        return cls(zf_minus / a, zf_plus / a, a)


@dataclass(frozen=True)
class ScaledCoupling:
    """Couplings multiplied by the half-separation, ``zf = a z``.

    These are the only parameters entering the characteristic function of the
    variable ``K = 2 i a k``.
    """

    zf_minus: complex
    zf_plus: complex

    def __post_init__(self):
        object.__setattr__(self, "zf_minus", complex(self.zf_minus))
        object.__setattr__(self, "zf_plus", complex(self.zf_plus))

    @property
    def product(self) -> complex:
        return self.zf_minus * self.zf_plus

    @property
    def sigma(self) -> float:
        """Radius ``2 max(|zf_-|, |zf_+|)`` of the disc containing every relevant zero."""
        return 2.0 * max(abs(self.zf_minus), abs(self.zf_plus))

    @property
    def is_pt_symmetric(self) -> bool:
        return self.zf_minus == self.zf_plus.conjugate()


@dataclass(frozen=True)
class Wavenumber:
    """A wavenumber on the principal branch ``arg k in [0, pi)``.

    The energy is ``E = k**2``.  Constructors from ``E`` and from ``K = 2 i a k``
    pick the branch representative; a value with ``arg k = pi`` is negated.
    """

    k: complex

    def __post_init__(self):
        object.__setattr__(self, "k", _principal(complex(self.k)))

    @property
    def energy(self) -> complex:
        return self.k * self.k

    @classmethod
    def from_energy(cls, energy: complex) -> "Wavenumber":
        return cls(cmath.sqrt(energy))

    @classmethod
    def from_kappa(cls, kappa: complex, a: float) -> "Wavenumber":
        return cls(kappa / (2j * a))

    def __complex__(self):
        return self.k


def _principal(k: complex) -> complex:
    # arg in [0, pi): flip anything in the lower half-plane, and the negative real axis
    if k.imag < 0 or (k.imag == 0 and k.real < 0):
        k = -k
    if k.real < 0 and k.imag < 1e-15 * -k.real:
        # arg would round to pi in floating point; treat as the tie
        k = complex(-k.real, 0.0)
    return k + 0.0  # normalises -0.0


def nondimensionalize(cfg: PhysicalConfig) -> CouplingConfig:
    """Convert to ``z = 2 m l zeta / hbar^2`` and ``a = alpha / l``."""
    factor = 2.0 * cfg.mass * cfg.length_scale / cfg.hbar**2
    return CouplingConfig(
        z_minus=factor * complex(cfg.zeta_minus),
        z_plus=factor * complex(cfg.zeta_plus),
        a=cfg.alpha / cfg.length_scale,
    )


def scale(cc: CouplingConfig) -> ScaledCoupling:
    return ScaledCoupling(cc.a * cc.z_minus, cc.a * cc.z_plus)


def check_nonzero_k(k):
    """Coerce ``k`` to complex (scalar or array) and reject ``k == 0``."""
    if isinstance(k, Wavenumber):
        k = k.k
    karr = np.asarray(k, dtype=complex)
    if np.any(karr == 0):
        raise OriginError("k = 0 is excluded: w = i z / (2k) diverges")
    return karr if karr.ndim else complex(karr)


def w_coefficients(cc: CouplingConfig, k):
    """Return ``(w_-, w_+) = (i z_- / 2k, i z_+ / 2k)``; broadcasts over array ``k``."""
    k = check_nonzero_k(k)
    return 1j * cc.z_minus / (2 * k), 1j * cc.z_plus / (2 * k)
