"""When does a W-class resource teleport perfectly?

Parameter form: with ``u = |l0|`` and ``v = |l3|``, the three-qubit protocol
needs the point ``(u, v)`` on the circle ``u^2 + v^2 = 1/2``; the two-qubit
protocol needs it on the ellipse ``2u^2 + v^2 = 1``. Both are also stated
through the pairwise concurrences, which are locally measurable.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import integrate

from .entanglement import ConcurrenceTriple, concurrence_closed_form
from .protocols import Protocol
from .states import WParams

DEFAULT_TOLERANCE = 1e-9


class Geometry(str, enum.Enum):
    ON = "On"
    INSIDE = "Inside"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class GeometryPoint:
    u: float
    v: float


@dataclass(frozen=True)
class ConditionVerdict:
    protocol: Protocol
    satisfied: bool
    residual: float
    geometry: Geometry
    success_probability: float | None
    form: str = "parameters"
    details: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "protocol": self.protocol.value,
            "form": self.form,
            "satisfied": self.satisfied,
            "residual": self.residual,
            "geometry": self.geometry.value,
            "success_probability": self.success_probability,
        }
        if self.details is not None:
            out["details"] = self.details
        return out


def _classify(curve_value: float, tol: float) -> Geometry:
    # curve_value < 0 means strictly inside the curve
    if abs(curve_value) < tol:
        return Geometry.ON
    return Geometry.INSIDE if curve_value < 0 else Geometry.OUTSIDE


def geometry_point(params: WParams) -> GeometryPoint:
    l0, _, l3 = params.moduli
    return GeometryPoint(l0, l3)


def check_ap_condition(params: WParams, tol: float = DEFAULT_TOLERANCE) -> ConditionVerdict:
    """Circle test; ``residual = |l0|^2 + |l3|^2 - |l2|^2 = 2(u^2 + v^2) - 1``."""
    l0, l2, l3 = params.moduli
    residual = l0 * l0 + l3 * l3 - l2 * l2
    geometry = _classify(residual, tol)
    ok = geometry is Geometry.ON
    return ConditionVerdict(Protocol.AP, ok, float(residual), geometry, 1.0 if ok else 0.0)


def check_proposed_condition(params: WParams, tol: float = DEFAULT_TOLERANCE) -> ConditionVerdict:
    """Ellipse test; ``residual = |l0|^2 - |l2|^2 = 2u^2 + v^2 - 1``."""
    l0, l2, _ = params.moduli
    residual = l0 * l0 - l2 * l2
    geometry = _classify(residual, tol)
    return ConditionVerdict(Protocol.PROPOSED, geometry is Geometry.ON, residual, geometry,
                            l0 * l0 + l2 * l2)


def harmonic_mean(x: float, y: float) -> float:
    return 2 / (1 / x + 1 / y)


def geometric_mean(x: float, y: float) -> float:
    return math.sqrt(x * y)


def amplitudes_from_concurrences(c: ConcurrenceTriple) -> tuple[float, float, float]:
    """Moduli ``(l0, l2, l3)`` implied by a W-class concurrence triple (all nonzero)."""
    l0 = math.sqrt(c.cab * c.cac / (2 * c.cbc))
    l2 = math.sqrt(c.cac * c.cbc / (2 * c.cab))
    l3 = math.sqrt(c.cab * c.cbc / (2 * c.cac))
    return l0, l2, l3


def check_ap_concurrence_condition(c: ConcurrenceTriple, tol: float = DEFAULT_TOLERANCE) -> ConditionVerdict:
    """``1/C_AB^2 = 1/C_BC^2 + 1/C_AC^2``, i.e. ``C_AB^2 = H(C_BC^2, C_AC^2)/2``.

    ``residual = 1/C_AB^2 - 1/C_BC^2 - 1/C_AC^2`` is a positive multiple of
    ``|l2|^2 - |l0|^2 - |l3|^2``, so a positive residual means inside the
    circle. ``details`` reports the mean-inequality bound
    ``C_AB^2 <= C_BC C_AC / 2`` and its equality case.
    """
    cab, cbc, cac = c.as_tuple()
    if min(cab, cbc, cac) <= 0:
        raise ValueError("all three concurrences must be positive")
    residual = 1 / cab ** 2 - 1 / cbc ** 2 - 1 / cac ** 2
    geometry = _classify(-residual, tol)
    ok = geometry is Geometry.ON
    bound = 0.5 * cbc * cac
    details = {
        "half_harmonic_mean": 0.5 * harmonic_mean(cbc ** 2, cac ** 2),
        "half_geometric_mean": 0.5 * geometric_mean(cbc ** 2, cac ** 2),
        "bound_holds": bool(cab ** 2 <= bound + tol),
        "equality_case": bool(ok and abs(cab ** 2 - 0.5 * cac ** 2) <= tol and abs(cab ** 2 - 0.5 * cbc ** 2) <= tol),
    }
    return ConditionVerdict(Protocol.AP, ok, residual, geometry, 1.0 if ok else 0.0, "concurrences", details)


def check_proposed_concurrence_condition(c: ConcurrenceTriple, tol: float = DEFAULT_TOLERANCE) -> ConditionVerdict:
    """``C_AB = C_BC``; residual ``C_AB - C_BC = 2|l3|(|l0| - |l2|)``.

    The success probability ``|l0|^2 + |l2|^2`` is rebuilt from the triple;
    it equals ``C_AC`` whenever the condition holds.
    """
    cab, cbc, cac = c.as_tuple()
    details = None
    if cab < tol and cbc < tol:
        # l3 = 0 (or l0 = l2 = 0): C_AB = C_BC carries no information, but
        # with l3 = 0 the condition l0 = l2 is C_AC = 1
        residual = cac - 1
        prob = 1.0 if cac > 0 else None
        details = {"degenerate": True}
    else:
        residual = cab - cbc
        prob = cac * (cab * cab + cbc * cbc) / (2 * cab * cbc) if cab > 0 and cbc > 0 else None
    geometry = _classify(residual, tol)
    return ConditionVerdict(Protocol.PROPOSED, geometry is Geometry.ON, residual, geometry, prob,
                            "concurrences", details)


def check_all(params: WParams, tol: float = DEFAULT_TOLERANCE) -> dict[str, ConditionVerdict]:
    c = concurrence_closed_form(params)
    out = {
        "ap": check_ap_condition(params, tol),
        "proposed": check_proposed_condition(params, tol),
        "proposed_concurrence": check_proposed_concurrence_condition(c, tol),
    }
    if min(c.as_tuple()) > 0:
        out["ap_concurrence"] = check_ap_concurrence_condition(c, tol)
    return out


CIRCLE_RADIUS = 1 / math.sqrt(2)
ELLIPSE_AXES = (1 / math.sqrt(2), 1.0)  # along u, along v


def ellipse_arc_length(a: float, b: float) -> float:
    """Perimeter of the ellipse with semi-axes ``a``, ``b`` by adaptive quadrature."""
    speed = lambda t: math.hypot(a * math.sin(t), b * math.cos(t))  # noqa: E731
    quarter, _ = integrate.quad(speed, 0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    return 4 * quarter


@dataclass(frozen=True)
class PerimeterComparison:
    circle: float
    ellipse_quoted: float
    ellipse_numeric: float

    def to_dict(self) -> dict:
        return {"circle": self.circle, "ellipse_quoted": self.ellipse_quoted,
                "ellipse_numeric": self.ellipse_numeric}


def perimeter_comparison() -> PerimeterComparison:
    """Circle circumference, the quoted ellipse perimeter, and the true arc length.

    The quoted value ``sqrt(3) pi`` is the quadratic-mean estimate
    ``2 pi sqrt((a^2 + b^2)/2)``; the integral gives about 5.40258.
    """
    a, b = ELLIPSE_AXES
    return PerimeterComparison(
        circle=2 * math.pi * CIRCLE_RADIUS,
        ellipse_quoted=math.sqrt(3) * math.pi,
        ellipse_numeric=ellipse_arc_length(a, b),
    )

