"""Angle-parametrized three-qubit states reachable in an NMR register.

General form::

    cos a |000> + sin a cos b sin g |001> + sin a sin b |010>
      + sin a cos b cos g cos d |100> + e^{i phi} sin a cos b cos g sin d |111>

With ``a = pi/2`` and ``d = phi = 0`` it is a W-class state in the resource
basis with ``l2 = cos b sin g``, ``l3 = sin b``, ``l0 = cos b cos g``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .states import WParams, make_w_state, w_params_of

HALF_PI = math.pi / 2
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class NmrParams:
    alpha: float
    beta: float
    gamma: float
    delta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            value = getattr(self, name)
            if not 0 <= value <= HALF_PI:
                raise ValueError(f"{name}={value} outside [0, pi/2]")
        if not 0 <= self.phi <= TWO_PI:
            raise ValueError(f"phi={self.phi} outside [0, 2pi]")


def nmr_general_state(p: NmrParams) -> np.ndarray:
    sa, ca = math.sin(p.alpha), math.cos(p.alpha)
    sb, cb = math.sin(p.beta), math.cos(p.beta)
    sg, cg = math.sin(p.gamma), math.cos(p.gamma)
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = ca
    psi[0b001] = sa * cb * sg
    psi[0b010] = sa * sb
    psi[0b100] = sa * cb * cg * math.cos(p.delta)
    psi[0b111] = cmath.exp(1j * p.phi) * sa * cb * cg * math.sin(p.delta)
    return psi


def nmr_w_state(beta: float, gamma: float) -> np.ndarray:
    return nmr_general_state(NmrParams(HALF_PI, beta, gamma))


def nmr_w_params(beta: float, gamma: float) -> WParams:
    return w_params_of(nmr_w_state(beta, gamma))


def nmr_ap_family(beta: float) -> np.ndarray:
    """Circle-family member with ``cos b sin g = 1/sqrt2``, for ``b`` in ``(0, pi/4]``."""
    if not 0 < beta <= math.pi / 4:
        raise ValueError(f"beta={beta} outside (0, pi/4]")
    # 2 cos^2 b - 1 written as cos 2b to avoid cancellation near pi/4
    l0 = math.sqrt(max(0.0, math.cos(2 * beta))) / math.sqrt(2)
    return make_w_state(WParams(l0, 1 / math.sqrt(2), math.sin(beta)))


def nmr_ap_gamma(beta: float) -> float:
    """``g`` with ``cos b sin g = 1/sqrt2``; ``tan g = 1/sqrt(cos 2b)``."""
    return math.atan2(1.0, math.sqrt(max(0.0, math.cos(2 * beta))))


def nmr_proposed_family(beta: float) -> np.ndarray:
    """Ellipse-family member (``g = pi/4``), for ``b`` in ``(0, pi/2)``."""
    if not 0 < beta < HALF_PI:
        raise ValueError(f"beta={beta} outside (0, pi/2)")
    c = math.cos(beta) / math.sqrt(2)
    return make_w_state(WParams(c, c, math.sin(beta)))


def nmr_proposed_success_probability(beta: float) -> float:
    return math.cos(beta) ** 2
