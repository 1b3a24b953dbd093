"""Recovery of discrete eigenvalues from continuous-spectrum data.

For data with |b(w)| < 1 the a-coefficient splits into a radiation part,
computable from |b| alone through a Hilbert transform, and a unimodular
Blaschke factor carrying the eigenvalues.  Dividing out the radiation part
leaves an all-pass function G(w) whose total phase winding counts the
eigenvalues and whose phase profile locates them via least squares.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

from .core import (
    ContinuousSpectrum,
    EdgeDecayError,
    HalfPlaneError,
    IllPosedError,
    NoConvergenceError,
    PhaseJumpError,
    SupercriticalError,
    require_finite,
)

__all__ = [
    "hilbert",
    "radiation_a",
    "allpass",
    "count_eigenvalues",
    "FitResult",
    "fit_eigenvalues",
    "a_from_b_trace",
]


def hilbert(f, edge_tol: float = 1e-6) -> np.ndarray:
    """Discrete Hilbert transform of real samples on a uniform grid.

    Sign convention: the transform of 1/(1+w^2) is w/(1+w^2), i.e.
    f + j*hilbert(f) extends analytically to the upper half-plane.
    Implemented as the exact transform of the piecewise-linear interpolant
    (a lighter variant of the same FFT-convolution trick used for analytic
    signals), zero-padded 4x to suppress circular wrap-around.  The data
    must have decayed at the grid edges (|f| < edge_tol, EdgeDecayError
    otherwise); what lies beyond the window is invisible to the transform.
    """
    f = np.asarray(f, dtype=np.float64)
    require_finite("f", f)
    if f.size < 2:
        raise ValueError("need at least two samples")
    if max(abs(f[0]), abs(f[-1])) >= edge_tol:
        raise EdgeDecayError(
            f"edge magnitude {max(abs(f[0]), abs(f[-1])):.3g} >= {edge_tol:g}"
        )
    n = f.size
    m = 1 << int(np.ceil(np.log2(4 * n)))
    mid = (m + 1) // 2
    # kernel = second difference of x ln x = Hilbert transform of the unit hat
    aux = np.arange(mid + 1, dtype=np.float64)
    aux[1:] *= np.log(aux[1:])
    ker = np.zeros(m)
    ker[1:mid] = aux[2:] - 2.0 * aux[1:-1] + aux[:-2]
    ker[-1:-mid:-1] = -ker[1:mid]
    g = np.zeros(m)
    g[:n] = f
    out = np.real(np.fft.ifft(np.fft.fft(g) * np.fft.fft(ker))) / np.pi
    return out[:n]


def radiation_a(cs: ContinuousSpectrum, edge_tol: float = 1e-3) -> np.ndarray:
    """a-coefficient of the non-solitonic part, from |b(w)| alone.

    sqrt(1 - |b|^2) * exp( (j/2) H[ ln(1 - |b|^2) ] ); analytic and free of
    zeros in the upper half-plane.  Requires |b(w)| < 1 everywhere
    (SupercriticalError otherwise).
    """
    b2 = np.abs(cs.b) ** 2
    if np.any(b2 >= 1.0):
        raise SupercriticalError("|b(w)| >= 1 somewhere on the grid")
    u = np.log1p(-b2)
    return np.sqrt(1.0 - b2) * np.exp(0.5j * hilbert(u, edge_tol=edge_tol))


def allpass(cs: ContinuousSpectrum, edge_tol: float = 1e-3) -> np.ndarray:
    """All-pass factor G(w) = a(w) / radiation_a: |G| = 1, a Blaschke product.

    Its phase increases by 2 pi per eigenvalue as w sweeps the real line.
    """
    return cs.a / radiation_a(cs, edge_tol=edge_tol)


def count_eigenvalues(G) -> int:
    """Number of eigenvalues from the winding of the all-pass phase.

    N = (unwrapped phase change across the grid) / (2 pi), rounded.
    Unwrapping assumes true phase steps below pi; since a wrapped step can
    never exceed pi, aliasing is detected conservatively: any step of pi/2
    or more raises PhaseJumpError (the grid is too coarse to certify the
    winding).
    """
    G = np.asarray(G, dtype=np.complex128)
    require_finite("G", G)
    steps = np.angle(G[1:] / G[:-1])
    if np.any(np.abs(steps) >= np.pi / 2):
        raise PhaseJumpError("phase step >= pi/2 between adjacent samples")
    return int(round(float(np.sum(steps)) / (2.0 * np.pi)))


def _blaschke(omega: np.ndarray, eigs: np.ndarray) -> np.ndarray:
    out = np.ones(omega.shape, dtype=np.complex128)
    for lk in eigs:
        out = out * (omega - lk) / (omega - np.conj(lk))
    return out


@dataclass(frozen=True)
class FitResult:
    """All-pass fit output: eigenvalue estimates plus residual report."""

    eigenvalues: list
    residual: float
    iterations: int

    def to_json(self, path=None) -> str:
        doc = {
            "eigenvalues": [{"re": z.real, "im": z.imag} for z in self.eigenvalues],
            "residual": self.residual,
            "iterations": self.iterations,
        }
        text = json.dumps(doc, indent=2, sort_keys=True)
        if path is not None:
            Path(path).write_text(text + "\n")
        return text


def fit_eigenvalues(omega, G, N: int, seeds=None) -> FitResult:
    """Least-squares fit of N Blaschke factors to all-pass samples G(w).

    Minimizes sum |G_model(w_i) - G(w_i)|^2 over the 2N real parameters
    (x_k, s_k) with lam_k = x_k + j e^{s_k}; the exponential keeps every
    iterate in the open upper half-plane.  N must not exceed the phase
    winding of the data (IllPosedError).
    """
    omega = np.asarray(omega, dtype=np.float64)
    G = np.asarray(G, dtype=np.complex128)
    if omega.shape != G.shape:
        raise ValueError("omega and G must have matching shapes")
    if N == 0:
        resid = float(np.sum(np.abs(G - 1.0) ** 2))
        return FitResult(eigenvalues=[], residual=resid, iterations=0)
    winding = count_eigenvalues(G)
    if N > winding:
        raise IllPosedError(f"requested N = {N} exceeds phase winding {winding}")
    if seeds is None:
        seeds = 1j * np.geomspace(0.3, 2.5, N)
    seeds = np.asarray(seeds, dtype=np.complex128).ravel()
    if seeds.size != N:
        raise ValueError("need exactly N seeds")
    if np.any(seeds.imag <= 0):
        raise ValueError("seeds must lie in the open upper half-plane")

    def unpack(p):
        return p[:N] + 1j * np.exp(p[N:])

    def residuals(p):
        diff = _blaschke(omega, unpack(p)) - G
        return np.concatenate([diff.real, diff.imag])

    p0 = np.concatenate([seeds.real, np.log(seeds.imag)])
    sol = least_squares(residuals, p0, method="lm", xtol=1e-14, ftol=1e-14, gtol=1e-14)
    if not sol.success and not np.isfinite(sol.cost):
        raise NoConvergenceError(f"all-pass fit failed: {sol.message}")
    eigs = sorted(unpack(sol.x).tolist(), key=lambda z: z.imag)
    resid = float(np.sum(np.abs(_blaschke(omega, np.array(eigs)) - G) ** 2))
    return FitResult(eigenvalues=eigs, residual=resid, iterations=int(sol.nfev))


def a_from_b_trace(lam: complex, cs: ContinuousSpectrum, eigs, edge_tol: float = 1e-8) -> complex:
    """a(lam) in the upper half-plane from |b(w)| plus the eigenvalues.

    exp{ (1/2 pi j) int ln(1-|b(w)|^2)/(w - lam) dw } times the Blaschke
    product over the eigenvalues; trapezoidal quadrature on the grid.  The
    integrand must have decayed at the edges (|ln(1-|b|^2)| < edge_tol).
    """
    lam = complex(lam)
    if not (lam.imag > 0):
        raise HalfPlaneError("trace formula requires Im(lam) > 0")
    b2 = np.abs(cs.b) ** 2
    if np.any(b2 >= 1.0):
        raise SupercriticalError("|b(w)| >= 1 somewhere on the grid")
    u = np.log1p(-b2)
    if max(abs(u[0]), abs(u[-1])) >= edge_tol:
        raise EdgeDecayError(
            f"|ln(1-|b|^2)| = {max(abs(u[0]), abs(u[-1])):.3g} at a grid edge "
            f"(required < {edge_tol:g})"
        )
    integral = np.trapezoid(u / (cs.omega - lam), dx=cs.d_omega)
    radiation = np.exp(integral / (2j * np.pi))
    eigs = np.asarray(eigs, dtype=np.complex128).ravel()
    return complex(radiation * _blaschke(np.asarray(lam), eigs))
