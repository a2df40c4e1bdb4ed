"""State descriptions: the JSON form the CLI accepts for a resource state.

::

    {"family": "explicit",   "params": {"lambda": [l0, l2, l3]}, "basis": "resource"}
    {"family": "explicit",   "params": {"amplitudes": [a000, ..., a111]}}
    {"family": "ap_n",       "params": {"n": 1, "theta1": 0, "theta2": 0}}
    {"family": "proposed_m", "params": {"m": 99, "eta1": 0, "eta2": 0}}
    {"family": "nmr",        "params": {"kind": "ap", "beta": 0.3}}

``{"lambda": [...]}`` alone is shorthand for the explicit family. Complex
numbers are plain numbers, ``"re+imi"`` strings or ``[re, im]`` pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import nmr, qmath
from .states import Basis, WParams, ap_family, make_w_state, proposed_family, w_params, w_params_of

FAMILIES = ("explicit", "ap_n", "proposed_m", "nmr")
NMR_KINDS = ("general", "w", "ap", "proposed")


class DescriptionError(ValueError):
    pass


def parse_complex(value) -> complex:
    if isinstance(value, bool):
        raise DescriptionError(f"not a number: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        text = value.strip().replace(" ", "").replace("i", "j")
        try:
            return complex(text)
        except ValueError:
            pass
    raise DescriptionError(f"cannot read complex number from {value!r}")


@dataclass(frozen=True)
class ResolvedState:
    """A three-qubit state, its W amplitudes when it has them, and its origin."""

    state: np.ndarray
    params: WParams | None
    description: dict
    renormalized: bool = False

    def require_params(self) -> WParams:
        if self.params is None:
            raise DescriptionError("state is not W-class in the resource basis")
        return self.params

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "params": None if self.params is None else self.params.to_dict(),
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.state],
            "renormalized": self.renormalized,
        }


def _float(params: dict, key: str, default: float | None = None) -> float:
    if key not in params:
        if default is None:
            raise DescriptionError(f"missing parameter {key!r}")
        return default
    try:
        value = float(params[key])
    except (TypeError, ValueError):
        raise DescriptionError(f"parameter {key!r} must be a number") from None
    if not math.isfinite(value):
        raise DescriptionError(f"parameter {key!r} must be finite")
    return value


def _from_params(p: WParams, description: dict, renormalized: bool = False) -> ResolvedState:
    return ResolvedState(make_w_state(p), p, description, renormalized)


def resolve(description: dict) -> ResolvedState:
    """Turn a state description into a concrete state.

    Raises
    ------
    DescriptionError
        On unknown families, missing or malformed parameters, or values
        outside a family's domain.
    """
    if not isinstance(description, dict):
        raise DescriptionError("state description must be a JSON object")
    if "family" not in description and "lambda" in description:
        description = {"family": "explicit", "params": {"lambda": description["lambda"]},
                       "basis": description.get("basis", "resource")}
    family = description.get("family")
    params = description.get("params", {})
    if family not in FAMILIES:
        raise DescriptionError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if not isinstance(params, dict):
        raise DescriptionError("params must be a JSON object")
    try:
        basis = Basis(description.get("basis", "resource"))
    except ValueError:
        raise DescriptionError(f"unknown basis {description.get('basis')!r}") from None
    try:
        return _resolve(family, params, basis, description)
    except DescriptionError:
        raise
    except ValueError as exc:
        raise DescriptionError(str(exc)) from None


def _resolve(family: str, params: dict, basis: Basis, description: dict) -> ResolvedState:
    if family == "explicit":
        if "lambda" in params:
            lam = params["lambda"]
            if not isinstance(lam, (list, tuple)) or len(lam) != 3:
                raise DescriptionError("lambda must list three amplitudes")
            amps = [parse_complex(z) for z in lam]
            norm = math.sqrt(sum(abs(z) ** 2 for z in amps))
            p = w_params(*amps, basis=basis, renormalize=True)
            return _from_params(p, description, abs(norm - 1) > 1e-12)
        if "amplitudes" in params:
            amps = params["amplitudes"]
            if not isinstance(amps, (list, tuple)) or len(amps) != 8:
                raise DescriptionError("amplitudes must list eight entries")
            vec = np.array([parse_complex(z) for z in amps], dtype=complex)
            norm = np.linalg.norm(vec)
            state = qmath.normalize(vec)
            try:
                p = w_params_of(state, Basis.RESOURCE)
            except ValueError:
                p = None
            return ResolvedState(state, p, description, abs(norm - 1) > 1e-12)
        raise DescriptionError("explicit family needs 'lambda' or 'amplitudes'")

    if family == "ap_n":
        p = ap_family(_float(params, "n"), _float(params, "theta1", 0.0), _float(params, "theta2", 0.0))
        return _from_params(p.as_basis(basis), description)

    if family == "proposed_m":
        p = proposed_family(_float(params, "m"), _float(params, "eta1", 0.0), _float(params, "eta2", 0.0))
        return _from_params(p.as_basis(basis), description)

    kind = params.get("kind", "general")
    if kind == "general":
        state = nmr.nmr_general_state(nmr.NmrParams(
            _float(params, "alpha"), _float(params, "beta"), _float(params, "gamma"),
            _float(params, "delta", 0.0), _float(params, "phi", 0.0)))
    elif kind == "w":
        state = nmr.nmr_w_state(_float(params, "beta"), _float(params, "gamma"))
    elif kind == "ap":
        state = nmr.nmr_ap_family(_float(params, "beta"))
    elif kind == "proposed":
        state = nmr.nmr_proposed_family(_float(params, "beta"))
    else:
        raise DescriptionError(f"unknown nmr kind {kind!r}; expected one of {', '.join(NMR_KINDS)}")
    try:
        p = w_params_of(state, Basis.RESOURCE)
    except ValueError:
        p = None
    return ResolvedState(state, p, description)


_FAMILY_SHORTHAND = {"n": "ap_n", "m": "proposed_m"}


def parse_family_flag(text: str) -> dict:
    """``--family`` shorthand to a description.

    Accepted forms: ``n=1``, ``m=99,eta1=0.3``, ``nmr_ap:beta=0.3``,
    ``nmr_proposed:beta=0.1``, ``nmr_w:beta=0.2,gamma=0.9``,
    ``nmr:alpha=1.2,beta=0.3,gamma=0.4,delta=0.1,phi=2``.
    """
    text = text.strip()
    if ":" in text:
        head, _, rest = text.partition(":")
        if not head.startswith("nmr"):
            raise DescriptionError(f"unknown family prefix {head!r}")
        kind = head[4:] if head != "nmr" else "general"
        if kind not in NMR_KINDS:
            raise DescriptionError(f"unknown nmr kind {kind!r}")
        return {"family": "nmr", "params": {"kind": kind, **_pairs(rest)}}
    pairs = _pairs(text)
    first = text.split(",", 1)[0].split("=", 1)[0].strip()
    if first not in _FAMILY_SHORTHAND:
        raise DescriptionError(f"cannot read family {text!r}; try n=<value> or m=<value>")
    return {"family": _FAMILY_SHORTHAND[first], "params": pairs}


def _pairs(text: str) -> dict:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise DescriptionError(f"expected key=value, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise DescriptionError(f"value for {key.strip()!r} is not a number") from None
    return out
