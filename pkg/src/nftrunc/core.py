"""Shared domain types for nonlinear Fourier spectra.

All quantities live in normalized (dimensionless) units.  A pulse is a
complex envelope q(t) sampled on a uniform time grid; its nonlinear Fourier
data consist of a continuous part (a(w), b(w)) on a real frequency grid and
a discrete part {lambda_k, b(lambda_k)} with eigenvalues in the open upper
half-plane.  Containers are immutable after construction and reject
non-finite entries, so they are safe to share between threads.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

import numpy as np


# --------------------------------------------------------------------------
# exceptions


class NFTError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(NFTError):
    """Evaluation requested at (or within machine tolerance of) a pole."""


class DegenerateSpectrumError(NFTError):
    """Two eigenvalues coincide; dressing/synthesis is not defined."""


class DegenerateSigmaError(NFTError):
    """Two eigenvalues tie for the minimal imaginary part."""


class ScatterOverflowError(NFTError, OverflowError):
    """Intermediate scattering magnitudes exceeded the configured bound.

    Signals that the requested spectral point lies too deep in the complex
    plane relative to the decay of the signal.
    """


class DivisionError(NFTError):
    """A spectral quotient hit a vanishing denominator."""


class NoConvergenceError(NFTError):
    """An iterative solver failed for every seed."""


class GridTooNarrowError(NFTError):
    """Frequency grid does not reach the asymptotic |a| -> 1 region."""


class GridMismatchError(NFTError):
    """Two sampled spectra do not share the same grid."""


class StripError(NFTError):
    """Spectral point lies outside the analyticity strip of the formula."""


class BranchAmbiguityError(NFTError):
    """Eigenvalue sits on the boundary between two estimation branches."""


class SupercriticalError(NFTError):
    """|b(w)| >= 1 somewhere; the radiation functional is singular."""


class EdgeDecayError(NFTError):
    """Samples do not decay at the grid edges as the transform requires."""


class PhaseJumpError(NFTError):
    """Successive phase samples jump by >= pi; unwrapping is unreliable."""


class IllPosedError(NFTError):
    """Requested fit has more parameters than the data can support."""


class HalfPlaneError(NFTError):
    """Spectral point is outside the required half-plane."""


# --------------------------------------------------------------------------
# validation helpers


def require_finite(name: str, values) -> np.ndarray:
    """Return ``values`` as an ndarray, rejecting NaN/Inf entries."""
    arr = np.asarray(values)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.flags.writeable = False
    return out


# --------------------------------------------------------------------------
# containers


class JostPair(NamedTuple):
    """The pair (a, b) of Jost coefficients at a single spectral point.

    For real spectral points of exact scattering data |a|^2 + |b|^2 = 1.
    """

    a: complex
    b: complex


@dataclass(frozen=True)
class TimeSignal:
    """Complex envelope samples q(t_i) on the uniform grid t_i = t_start + i*dt."""

    t_start: float
    dt: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.dt > 0):
            raise ValueError("dt must be positive")
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D sequence")
        require_finite("samples", samples)
        require_finite("t_start", [self.t_start])
        object.__setattr__(self, "samples", _readonly(samples))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.samples.size)

    def energy(self) -> float:
        """Trapezoidal integral of |q(t)|^2 over the grid."""
        return float(np.trapezoid(np.abs(self.samples) ** 2, dx=self.dt))

    def truncated(self, T: float) -> "TimeSignal":
        """Copy with samples zeroed outside |t| <= T (same grid)."""
        q = np.array(self.samples, copy=True)
        q[np.abs(self.t) > T] = 0.0
        return TimeSignal(self.t_start, self.dt, q)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["t", "re", "im"])
            for t, q in zip(self.t, self.samples):
                w.writerow([repr(float(t)), repr(float(q.real)), repr(float(q.imag))])

    @classmethod
    def from_csv(cls, path) -> "TimeSignal":
        rows = []
        with open(path, newline="") as f:
            reader = csv.reader(f)
            header = next(reader)
            if [h.strip() for h in header] != ["t", "re", "im"]:
                raise ValueError(f"expected header 't,re,im', got {header}")
            for row in reader:
                rows.append((float(row[0]), float(row[1]), float(row[2])))
        if not rows:
            raise ValueError("empty signal file")
        t = np.array([r[0] for r in rows])
        q = np.array([complex(r[1], r[2]) for r in rows])
        if len(rows) > 1:
            dt = float(np.mean(np.diff(t)))
            if not np.allclose(np.diff(t), dt, rtol=0, atol=1e-9 * max(1.0, abs(dt))):
                raise ValueError("time grid is not uniform")
        else:
            dt = 1.0
        return cls(float(t[0]), dt, q)


def uniform_time_grid(t_max: float, n: int) -> TimeSignal:
    """Zero signal on n samples spanning [-t_max, t_max] (a grid template)."""
    if n < 2:
        raise ValueError("need at least two samples")
    dt = 2.0 * t_max / (n - 1)
    return TimeSignal(-t_max, dt, np.zeros(n, dtype=np.complex128))


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Eigenvalues (Im > 0, pairwise distinct, ascending Im) with b-coefficients."""

    eigenvalues: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=np.complex128).ravel()
        b = np.asarray(self.b, dtype=np.complex128).ravel()
        require_finite("eigenvalues", lam)
        require_finite("b", b)
        if lam.size != b.size:
            raise ValueError("eigenvalues and b must have equal length")
        if lam.size and np.any(lam.imag <= 0):
            raise ValueError("eigenvalues must have strictly positive imaginary part")
        order = np.argsort(lam.imag, kind="stable")
        lam, b = lam[order], b[order]
        for i in range(lam.size):
            for k in range(i + 1, lam.size):
                if abs(lam[i] - lam[k]) < 1e-12:
                    raise ValueError("eigenvalues must be pairwise distinct")
        object.__setattr__(self, "eigenvalues", _readonly(lam))
        object.__setattr__(self, "b", _readonly(b))

    def __len__(self) -> int:
        return self.eigenvalues.size

    def __iter__(self) -> Iterator[tuple[complex, complex]]:
        return iter(zip(self.eigenvalues.tolist(), self.b.tolist()))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[complex, complex]]) -> "DiscreteSpectrum":
        lam = [p[0] for p in pairs]
        b = [p[1] for p in pairs]
        return cls(np.asarray(lam, dtype=complex), np.asarray(b, dtype=complex))

    def to_json(self, path=None) -> str:
        doc = {
            "eigenvalues": [
                {
                    "re": float(lam.real),
                    "im": float(lam.imag),
                    "b_re": float(b.real),
                    "b_im": float(b.imag),
                }
                for lam, b in self
            ]
        }
        text = json.dumps(doc, indent=2, sort_keys=True)
        if path is not None:
            Path(path).write_text(text + "\n")
        return text

    @classmethod
    def from_json(cls, source) -> "DiscreteSpectrum":
        if isinstance(source, (str, Path)) and Path(str(source)).exists():
            doc = json.loads(Path(source).read_text())
        else:
            doc = json.loads(source)
        entries = doc["eigenvalues"]
        lam = np.array([complex(e["re"], e["im"]) for e in entries], dtype=complex)
        b = np.array([complex(e["b_re"], e["b_im"]) for e in entries], dtype=complex)
        return cls(lam, b)


@dataclass(frozen=True)
class ContinuousSpectrum:
    """Jost coefficients a(w), b(w) sampled on a uniform real frequency grid.

    The grid must be strictly increasing and symmetric about w = 0.
    """

    omega: np.ndarray = field(repr=False)
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=np.float64).ravel()
        a = np.asarray(self.a, dtype=np.complex128).ravel()
        b = np.asarray(self.b, dtype=np.complex128).ravel()
        if not (w.size == a.size == b.size):
            raise ValueError("omega, a, b must have equal length")
        if w.size < 2:
            raise ValueError("need at least two grid points")
        require_finite("omega", w)
        require_finite("a", a)
        require_finite("b", b)
        dw = np.diff(w)
        if np.any(dw <= 0):
            raise ValueError("omega grid must be strictly increasing")
        if not np.allclose(dw, dw[0], rtol=1e-9, atol=1e-12):
            raise ValueError("omega grid must be uniform")
        if not np.allclose(w + w[::-1], 0.0, atol=1e-9 * max(1.0, abs(w[-1]))):
            raise ValueError("omega grid must be symmetric about 0")
        object.__setattr__(self, "omega", _readonly(w))
        object.__setattr__(self, "a", _readonly(a))
        object.__setattr__(self, "b", _readonly(b))

    def __len__(self) -> int:
        return self.omega.size

    @property
    def d_omega(self) -> float:
        return float(self.omega[1] - self.omega[0])

    def qc(self) -> np.ndarray:
        """Spectral amplitude b(w)/a(w) of the continuous part."""
        if np.any(np.abs(self.a) < 1e-12):
            raise DivisionError("|a(w)| < 1e-12 somewhere on the grid")
        return self.b / self.a

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["omega", "a_re", "a_im", "b_re", "b_im"])
            for om, a, b in zip(self.omega, self.a, self.b):
                w.writerow(
                    [
                        repr(float(om)),
                        repr(float(a.real)),
                        repr(float(a.imag)),
                        repr(float(b.real)),
                        repr(float(b.imag)),
                    ]
                )

    @classmethod
    def from_csv(cls, path) -> "ContinuousSpectrum":
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        data = np.atleast_2d(data)
        return cls(data[:, 0], data[:, 1] + 1j * data[:, 2], data[:, 3] + 1j * data[:, 4])


def symmetric_omega_grid(omega_max: float, n: int) -> np.ndarray:
    """Uniform grid of n frequencies spanning [-omega_max, omega_max]."""
    return np.linspace(-omega_max, omega_max, n)


# --------------------------------------------------------------------------
# operations


def propagate_b(b: complex, lam: complex, z: float) -> complex:
    """Evolve a b-coefficient over a distance z: b -> b * exp(-4j lam^2 z).

    The a-coefficient is invariant under propagation; for real lam the
    factor is a pure phase, so |b| is conserved.
    """
    require_finite("b", [b])
    require_finite("lam", [lam])
    require_finite("z", [z])
    return b * np.exp(-4j * complex(lam) ** 2 * z)


def validate_unitarity(cs: ContinuousSpectrum) -> float:
    """Max deviation of |a(w)|^2 + |b(w)|^2 from 1 over the grid."""
    return float(np.max(np.abs(np.abs(cs.a) ** 2 + np.abs(cs.b) ** 2 - 1.0)))
