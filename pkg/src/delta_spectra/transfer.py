"""Transfer matrix, the spectral function M22 and the eigenfunctions.

Everything here broadcasts over array-valued ``k``.  ``m22`` is the hot path
for root finding and is evaluated from its closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core_model import CouplingConfig, check_nonzero_k, w_coefficients
from .errors import InvalidInputError

__all__ = [
    "TransferMatrix",
    "EigenfunctionSample",
    "transfer_matrix",
    "m22",
    "f_factor",
    "f_plus",
    "eigenfunction",
    "eigenfunction_values",
]

Which = Literal["psi1", "psi2", "psi1-adjoint", "psi2-adjoint"]
_NORM = (2 * np.pi) ** -0.5


@dataclass(frozen=True)
class TransferMatrix:
    m11: complex
    m12: complex
    m21: complex
    m22: complex
    k: complex

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])


@dataclass(frozen=True)
class EigenfunctionSample:
    x: float
    value: complex
    branch: Literal["left", "middle", "right"]
    which: Which


def transfer_matrix(cc: CouplingConfig, k) -> TransferMatrix:
    """Matrix mapping the asymptotic amplitudes at ``x -> -inf`` to those at ``x -> +inf``."""
    k = check_nonzero_k(k)
    wm, wp = w_coefficients(cc, k)
    e2 = np.exp(2j * cc.a * k)
    e2i = np.exp(-2j * cc.a * k)
    s2 = np.sin(2 * cc.a * k)
    wmp = wm * wp
    m11 = 1 - wm - wp + (1 - e2i * e2i) * wmp
    m12 = 2j * wmp * s2 - wm * e2 - wp * e2i
    m21 = -2j * wmp * s2 + wm * e2i + wp * e2
    m22_ = 1 + wm + wp + (1 - e2 * e2) * wmp
    return TransferMatrix(m11, m12, m21, m22_, k)


def m22(cc: CouplingConfig, k):
    """``M22(k) = 1 + w_- + w_+ + (1 - exp(4iak)) w_- w_+``.

    Its nonzero real zeros are the spectral singularities; zeros with
    ``Im k > 0`` are bound states.
    """
    k = check_nonzero_k(k)
    wm, wp = w_coefficients(cc, k)
    # 1 - exp(4iak) via expm1 keeps small-|ak| accuracy
    return 1 + wm + wp - np.expm1(4j * cc.a * k) * wm * wp


def f_factor(cc: CouplingConfig, k):
    """``f(k) = u sin(2ak) / (2k^2) + exp(-2iak) (v/k - i)`` with ``u = z_- z_+``, ``v = (z_- + z_+)/2``.

    Identical to ``-i exp(-2iak) M22(k)``; its positive and negative real
    zeros together give every spectral singularity.
    """
    k = check_nonzero_k(k)
    u, v, a = cc.u, cc.v, cc.a
    return u * np.sin(2 * a * k) / (2 * k * k) + np.exp(-2j * a * k) * (v / k - 1j)


def f_plus(cc: CouplingConfig, k):
    """The second factor of ``det K``; equals ``-f(-k)``."""
    k = check_nonzero_k(k)
    u, v, a = cc.u, cc.v, cc.a
    return u * np.sin(2 * a * k) / (2 * k * k) + np.exp(2j * a * k) * (v / k + 1j)


def eigenfunction_values(cc: CouplingConfig, k: float, which: Which, x):
    """Vectorised eigenfunction ``psi_{1k}``, ``psi_{2k}`` or an adjoint partner at points ``x``.

    Amplitudes inside ``|x| <= a`` are ``A_0 = (2 pi)^(-1/2)`` (``psi1``) or
    ``B_0 = (2 pi)^(-1/2)`` (``psi2``).  The adjoint variants are the
    eigenfunctions of ``H^dagger``, obtained by ``w -> -conj(w)``.
    """
    k = float(k)
    if not k > 0:
        raise InvalidInputError(f"eigenfunctions are defined for real k > 0, got {k!r}")
    a = cc.a
    wm, wp = w_coefficients(cc, k)
    if which.endswith("-adjoint"):
        wm, wp = -np.conj(wm), -np.conj(wp)
        base = which[: -len("-adjoint")]
    else:
        base = which
    if base not in ("psi1", "psi2"):
        raise InvalidInputError(f"unknown eigenfunction selector {which!r}")

    x = np.asarray(x, dtype=float)
    ep = np.exp(1j * k * x)
    em = np.exp(-1j * k * x)
    if base == "psi1":
        left = (1 + wm) * ep - wm * np.exp(-1j * k * (x + 2 * a))
        middle = ep
        right = (1 - wp) * ep + wp * np.exp(-1j * k * (x - 2 * a))
    else:
        left = (1 - wm) * em + wm * np.exp(1j * k * (x + 2 * a))
        middle = em
        right = (1 + wp) * em - wp * np.exp(1j * k * (x - 2 * a))
    out = np.where(x < -a, left, np.where(x > a, right, middle))
    return _NORM * out


def eigenfunction(cc: CouplingConfig, k: float, which: Which, x: float) -> EigenfunctionSample:
    x = float(x)
    branch = "left" if x < -cc.a else ("right" if x > cc.a else "middle")
    value = complex(eigenfunction_values(cc, k, which, x))
    return EigenfunctionSample(x=x, value=value, branch=branch, which=which)
