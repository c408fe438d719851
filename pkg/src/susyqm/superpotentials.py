"""Bundled superpotentials.

Every registered W satisfies the unbroken-SUSY sign condition
sign W(-inf) = -1, sign W(+inf) = +1 on the default box; `parity` marks whether
W(-x) = -W(x) holds, which controls whether partner eigenstates are expected to
be orthogonal in the continuum limit.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["Superpotential", "get_superpotential", "REGISTRY_NAMES"]


@dataclass(frozen=True)
class Superpotential:
    name: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    asymptotic_signs: tuple = (-1, +1)
    parity: str = "none"  # "odd" or "none"
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=float))


def _harmonic(scale: float = 1.0):
    # scale = -1 gives W = -x, the canonical sign-condition violator
    scale = float(scale)
    signs = (-1, +1) if scale >= 0 else (+1, -1)
    return Superpotential(
        "harmonic", lambda x: scale * x, signs, "odd", {"scale": scale}
    )


def _cubic():
    # x * x * x, not x ** 3: libm pow is off by an ulp under sign flips,
    # which would break the declared odd parity bitwise
    return Superpotential("cubic", lambda x: x * x * x, (-1, +1), "odd")


def _shifted_cubic(a: float = 0.5):
    a = float(a)
    return Superpotential(
        "shifted_cubic", lambda x: x ** 3 + a, (-1, +1), "none", {"a": a}
    )


def _tanh():
    return Superpotential("tanh", np.tanh, (-1, +1), "odd")


_REGISTRY = {
    "harmonic": _harmonic,
    "cubic": _cubic,
    "shifted_cubic": _shifted_cubic,
    "tanh": _tanh,
}

REGISTRY_NAMES = tuple(sorted(_REGISTRY))


def get_superpotential(name: str, **params) -> Superpotential:
    """Look up a bundled superpotential by name, e.g. shifted_cubic(a=0.5)."""
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown superpotential {name!r}; available: {', '.join(REGISTRY_NAMES)}"
        ) from None
    return factory(**params)
