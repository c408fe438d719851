"""Uniform 1-D grid, wavefunctions and their inner-product algebra.

The quadrature is a plain Riemann sum with weight dx at every node. For
Dirichlet-decaying bound states the edge contribution is below 1e-14, and the
uniform weight is what makes the transpose of a difference matrix its exact
discrete adjoint, which the factorization module relies on.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, ZeroNormError

__all__ = [
    "Grid",
    "Wavefunction",
    "make_grid",
    "inner_product",
    "norm",
    "normalize",
    "fix_phase",
    "wavefunction_to_csv",
]


@dataclass(frozen=True)
class Grid:
    """Uniform mesh on [x_min, x_max] with n_points nodes."""

    x_min: float
    x_max: float
    n_points: int

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def nodes(self) -> np.ndarray:
        # node i sits at x_min + i*dx, reproducible bit-exactly from the fields
        return self.x_min + self.dx * np.arange(self.n_points)


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid:
    """Validated Grid constructor."""
    if not (np.isfinite(x_min) and np.isfinite(x_max)):
        raise ValueError("grid bounds must be finite")
    if not x_min < x_max:
        raise ValueError(f"grid requires x_min < x_max, got [{x_min}, {x_max}]")
    n_points = int(n_points)
    if n_points < 3:
        raise ValueError(f"grid needs at least 3 points, got {n_points}")
    return Grid(float(x_min), float(x_max), n_points)


@dataclass(frozen=True)
class Wavefunction:
    """Amplitude vector over a grid. Immutable; amplitudes read-only."""

    grid: Grid
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.ndim != 1 or len(amps) != self.grid.n_points:
            raise ValueError(
                f"amplitude vector of length {amps.shape} does not fit a "
                f"{self.grid.n_points}-point grid"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


def _require_same_grid(f: Wavefunction, g: Wavefunction):
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")


def inner_product(f: Wavefunction, g: Wavefunction) -> complex:
    """<f|g> = sum conj(f_i) g_i dx. Conjugate-symmetric by construction."""
    _require_same_grid(f, g)
    return complex(np.vdot(f.amplitudes, g.amplitudes) * f.grid.dx)


def norm(f: Wavefunction) -> float:
    return float(np.sqrt(np.real(np.vdot(f.amplitudes, f.amplitudes)) * f.grid.dx))


def fix_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-modulus entry is real positive.

    Ties break on the first occurrence, which makes eigenvector signs
    deterministic across runs.
    """
    i = int(np.argmax(np.abs(amplitudes)))
    pivot = amplitudes[i]
    if pivot == 0:
        return amplitudes
    if np.iscomplexobj(amplitudes):
        return amplitudes * (np.conj(pivot) / abs(pivot))
    return amplitudes if pivot > 0 else -amplitudes


def normalize(f: Wavefunction) -> Wavefunction:
    """Unit dx-weighted norm plus the deterministic phase convention."""
    n = norm(f)
    if n == 0.0 or not np.isfinite(n):
        raise ZeroNormError("cannot normalize state with zero or non-finite norm")
    return Wavefunction(f.grid, fix_phase(f.amplitudes / n))


def wavefunction_to_csv(f: Wavefunction) -> str:
    """CSV text with columns x, re, im at 17 significant digits."""
    x = f.grid.nodes()
    amps = np.asarray(f.amplitudes, dtype=complex)
    lines = ["x,re,im"]
    for xi, ai in zip(x, amps):
        lines.append(f"{xi:.17g},{ai.real:.17g},{ai.imag:.17g}")
    return "\n".join(lines) + "\n"
