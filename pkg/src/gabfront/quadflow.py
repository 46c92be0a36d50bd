"""Quadratic Hamiltonians: classical flows and Schrodinger propagators.

A real quadratic symbol a(x, xi) = (1/2) A x^2 + B x xi + (1/2) C xi^2 has
Hamiltonian matrix

    AA = [[ B,  C],
          [-A, -B]]

and classical flow exp((t / 2 pi) AA); the 2 pi stems from the e^{-2 pi i x xi}
Fourier normalization used everywhere in this package.  Two quantized
propagators are provided and checked against the flow:

  * free particle, symbol 2 pi^2 xi^2 (the operator -Laplacian/2), as the
    Fourier multiplier e^{-2 pi^2 i t xi^2};
  * harmonic oscillator, symbol pi (x^2 + xi^2) (the operator
    -(1/4 pi) Laplacian + pi x^2), by direct quadrature of the oscillator
    kernel

        K_t(x, y) = c(k) |sin t|^{-1/2}
                    exp(i pi (x^2 + y^2) cot t - 2 pi i x y / sin t)

    for k pi < t < (k+1) pi, with c(k) = e^{-i pi (2k+1)/4} fixed so the
    evolution is continuous on each branch and U(0) = identity; at t = k pi
    the kernel degenerates to e^{-i k pi / 2} times the (possibly reflected)
    identity.

The end-to-end check verifies that singular directions of the evolved state
are the flow image of the initial ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import NearSingularTime, NotSymplectic
from .tfcore import (
    Atom,
    Grid1D,
    SampledSignal,
    StandardGaussian,
    default_grid,
    dft,
    eval_atom,
    idft,
    stft_at,
)
from .wavefront import (
    WaveFrontEstimate,
    angular_distance,
    estimate_wavefront,
    transport_estimate,
)

__all__ = [
    "QuadraticHamiltonian",
    "HamiltonianMatrix",
    "SymplecticMatrix",
    "PropagationReport",
    "FREE_PARTICLE",
    "HARMONIC_OSCILLATOR",
    "hamiltonian_matrix",
    "classical_flow",
    "propagate_free",
    "propagate_harmonic",
    "propagate",
    "stft_ridge_slope",
    "verify_propagation",
]

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])
SYMPLECTIC_TOL = 1e-10
NEAR_SINGULAR_GUARD = 0.05


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Coefficients of the quadratic symbol (scalars in dimension one)."""

    A: float
    B: float
    C: float


# the two test Hamiltonians; C = +2 pi makes the harmonic flow the rotation
# block, consistently with the oscillator kernel below
FREE_PARTICLE = QuadraticHamiltonian(0.0, 0.0, 4.0 * math.pi**2)
HARMONIC_OSCILLATOR = QuadraticHamiltonian(2.0 * math.pi, 0.0, 2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.shape != (2, 2):
            raise NotSymplectic(f"expected 2x2 Hamiltonian matrix, got {m.shape}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        sym = _J @ m
        if np.max(np.abs(sym - sym.T)) > 1e-12:
            raise NotSymplectic("J A must be symmetric (A outside the symplectic algebra)")


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.shape != (2, 2):
            raise NotSymplectic(f"expected 2x2 matrix, got {m.shape}")
        if np.max(np.abs(m.T @ _J @ m - _J)) > SYMPLECTIC_TOL:
            raise NotSymplectic("S^T J S != J beyond tolerance")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)


def hamiltonian_matrix(H: QuadraticHamiltonian) -> HamiltonianMatrix:
    return HamiltonianMatrix(np.array([[H.B, H.C], [-H.A, -H.B]]))


def classical_flow(H: QuadraticHamiltonian, t: float) -> SymplecticMatrix:
    """Flow matrix exp((t / 2 pi) AA); always symplectic for symbol matrices."""
    AA = hamiltonian_matrix(H).mat
    return SymplecticMatrix(expm((t / (2.0 * math.pi)) * AA))


# ---------------------------------------------------------------------------
# propagators
# ---------------------------------------------------------------------------

def propagate_free(u0: SampledSignal, t: float) -> SampledSignal:
    """Free evolution as the multiplier e^{-2 pi^2 i t xi^2} on the spectrum.

    Matches convolution with the kernel (2 pi i t)^{-1/2} e^{i x^2 / (2 t)}.
    """
    if t == 0:
        return u0
    spec = dft(u0)
    xi = spec.grid.points()
    mult = np.exp(-2j * math.pi**2 * t * xi**2)
    out = idft(SampledSignal(spec.grid, spec.values * mult))
    if abs(out.grid.start - u0.grid.start) > 1e-9 or out.grid.count != u0.grid.count:
        # centered even grids round-trip exactly; anything else is a setup bug
        raise NearSingularTime("free propagation requires a centered power-of-two grid")
    return SampledSignal(u0.grid, out.values)


def _mehler_branch(t: float):
    k = math.floor(t / math.pi)
    frac = t - k * math.pi
    if min(frac, math.pi - frac) < 1e-12:
        k = int(round(t / math.pi))
        return k, True
    return k, False


def propagate_harmonic(u0: SampledSignal, t: float) -> SampledSignal:
    """Harmonic-oscillator evolution by direct kernel quadrature.

    Times within 0.05 of a multiple of pi (exclusive) are rejected: there the
    kernel oscillation outruns the grid.  At exact multiples the evolution is
    the phase e^{-i k pi / 2} times reflection by (-1)^k.
    """
    k, exact = _mehler_branch(t)
    if exact:
        phase = np.exp(-0.5j * math.pi * k)
        if k % 2 == 0:
            return SampledSignal(u0.grid, phase * u0.values)
        # u0((-1)^k x) needs the reversed grid; centered grids flip onto themselves
        g = u0.grid
        x = g.points()
        rev = np.interp(-x, x, u0.values.real) + 1j * np.interp(-x, x, u0.values.imag)
        return SampledSignal(g, phase * rev)
    dist = min(t - math.floor(t / math.pi) * math.pi, math.ceil(t / math.pi) * math.pi - t)
    if dist <= NEAR_SINGULAR_GUARD:
        raise NearSingularTime(
            f"t = {t} is within {NEAR_SINGULAR_GUARD} of a kernel singularity"
        )
    g = u0.grid
    x = g.points()
    sin_t, cos_t = math.sin(t), math.cos(t)
    cot_t = cos_t / sin_t
    c_k = np.exp(-1j * math.pi * (2 * k + 1) / 4.0)
    amp = c_k / math.sqrt(abs(sin_t))
    # kernel matrix K[i, j] = K_t(x_i, y_j); quadrature weight = step
    sq = np.exp(1j * math.pi * cot_t * x * x)
    cross = np.exp(-2j * math.pi * np.outer(x, x) / sin_t)
    kernel = amp * sq[:, None] * cross * sq[None, :]
    return SampledSignal(g, g.step * (kernel @ u0.values))


def propagate(tag: str, u0: SampledSignal, t: float) -> SampledSignal:
    if tag == "free":
        return propagate_free(u0, t)
    if tag == "harmonic":
        return propagate_harmonic(u0, t)
    raise ValueError(f"unknown Hamiltonian tag {tag!r}")


def hamiltonian_for(tag: str) -> QuadraticHamiltonian:
    if tag == "free":
        return FREE_PARTICLE
    if tag == "harmonic":
        return HARMONIC_OSCILLATOR
    raise ValueError(f"unknown Hamiltonian tag {tag!r}")


# ---------------------------------------------------------------------------
# ridge extraction and the propagation report
# ---------------------------------------------------------------------------

def stft_ridge_slope(u: SampledSignal, xs, xi_extent=24.0, xi_step=1.0 / 32.0, w=None):
    """Least-squares slope of the STFT magnitude ridge xi*(x) over the x list.

    The per-x maximizer over the frequency grid gets a parabolic refinement;
    this is the instantaneous-frequency readout used to measure chirp rates.
    """
    w = w or StandardGaussian()
    xs = np.asarray(xs, dtype=float)
    n = int(round(2 * xi_extent / xi_step)) + 1
    xis = -xi_extent + xi_step * np.arange(n)
    mags = np.abs(stft_at(u, w, xs, xis))
    peaks = np.empty(xs.size)
    for i in range(xs.size):
        j = int(np.argmax(mags[i]))
        if 0 < j < n - 1:
            y0, y1, y2 = mags[i, j - 1], mags[i, j], mags[i, j + 1]
            denom = y0 - 2 * y1 + y2
            delta = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        else:
            delta = 0.0
        peaks[i] = xis[j] + delta * xi_step
    xb = xs.mean()
    return float(np.sum((xs - xb) * (peaks - peaks.mean())) / np.sum((xs - xb) ** 2))


@dataclass(frozen=True)
class PropagationReport:
    """Predicted (transported) vs observed singular directions at time t."""

    hamiltonian: str
    t: float
    predicted: tuple
    observed: tuple
    max_mismatch: float
    passed: bool

    def to_json_dict(self):
        return {
            "hamiltonian": self.hamiltonian,
            "t": self.t,
            "predicted": list(self.predicted),
            "observed": list(self.observed),
            "max_mismatch": self.max_mismatch,
            "pass": self.passed,
        }


def _direction_mismatch(a, b):
    """Max over a of the distance to the closest element of b (inf if b empty)."""
    if len(a) == 0:
        return 0.0
    if len(b) == 0:
        return math.inf
    return max(min(float(angular_distance(x, y)) for y in b) for x in a)


def match_directions(observed, predicted, tol):
    """Mutual one-sided Hausdorff check on circle directions."""
    return (
        _direction_mismatch(observed, predicted),
        _direction_mismatch(predicted, observed),
        _direction_mismatch(observed, predicted) <= tol
        and _direction_mismatch(predicted, observed) <= tol,
    )


def verify_propagation(
    u0: Atom,
    tag: str,
    t: float,
    w=None,
    K: int = 72,
    grid: Grid1D = None,
    **estimator_kwargs,
) -> PropagationReport:
    """Transport the initial wave front by the classical flow and compare with
    the estimate recomputed on the numerically propagated state."""
    w = w or StandardGaussian()
    grid = grid or default_grid()
    H = hamiltonian_for(tag)
    base = estimate_wavefront(u0, w, K=K, **estimator_kwargs)
    flow = classical_flow(H, t)
    S = flow.mat

    predicted_dirs = []
    for th in base.flagged_angles():
        v = S @ np.array([math.cos(th), math.sin(th)])
        predicted_dirs.append(math.atan2(v[1], v[0]) % (2.0 * math.pi))

    u_t = propagate(tag, eval_atom(u0, grid), t)
    observed = estimate_wavefront(u_t, w, K=K, **estimator_kwargs)
    observed_dirs = list(observed.flagged_angles())

    width = 3.0 * math.pi / K  # full angular width of one sector
    mm_obs, mm_pred, ok = match_directions(observed_dirs, predicted_dirs, width)
    mismatch = max(mm_obs, mm_pred) if observed_dirs or predicted_dirs else 0.0
    return PropagationReport(
        hamiltonian=tag,
        t=t,
        predicted=tuple(predicted_dirs),
        observed=tuple(observed_dirs),
        max_mismatch=float(mismatch),
        passed=bool(ok),
    )
