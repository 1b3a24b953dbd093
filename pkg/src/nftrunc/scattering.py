"""Numerical forward nonlinear Fourier transform of sampled signals.

The scattering system is integrated across the signal with exact per-cell
matrix exponentials (see _zs_kernels).  The canonical scheme is the plain
forward product; the forward/backward split meets the two passes at t = 0,
which can condition the b-coefficient better for spectral points deep in
the upper half-plane.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace

import numpy as np

from . import _zs_kernels
from .core import (
    ContinuousSpectrum,
    GridTooNarrowError,
    JostPair,
    NoConvergenceError,
    ScatterOverflowError,
    TimeSignal,
    require_finite,
)

__all__ = [
    "ScatterConfig",
    "SCHEME_FORWARD",
    "SCHEME_SPLIT",
    "scatter",
    "scatter_many",
    "continuous_spectrum",
    "find_eigenvalues",
    "discrete_amplitudes",
    "energy_continuous",
    "compose_segments",
]

log = logging.getLogger(__name__)

SCHEME_FORWARD = "piecewise_constant"
SCHEME_SPLIT = "forward_backward_split"


@dataclass(frozen=True)
class ScatterConfig:
    """Numerical parameters of the forward transform.

    newton_tol is the |a| stopping threshold of the eigenvalue search;
    fd_step the central-difference step for da/dlam; samples the default
    sample count used when a signal has to be generated first.
    """

    scheme: str = SCHEME_FORWARD
    newton_tol: float = 1e-6
    newton_max_iter: int = 50
    fd_step: float = 1e-6
    samples: int = 10000

    def __post_init__(self):
        if self.scheme not in (SCHEME_FORWARD, SCHEME_SPLIT):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not (self.newton_tol > 0 and self.fd_step > 0):
            raise ValueError("newton_tol and fd_step must be positive")
        if self.newton_max_iter < 1:
            raise ValueError("newton_max_iter must be >= 1")

    @classmethod
    def from_mapping(cls, doc: dict) -> "ScatterConfig":
        """Build from a parsed config file; reads the [scattering] section."""
        section = doc.get("scattering", doc)
        kwargs = {}
        for key in ("scheme", "newton_tol", "newton_max_iter", "fd_step", "samples"):
            if key in section:
                kwargs[key] = section[key]
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "ScatterConfig":
        from pathlib import Path

        text = Path(path).read_bytes()
        if str(path).endswith(".json"):
            return cls.from_mapping(json.loads(text))
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib
        return cls.from_mapping(tomllib.loads(text.decode()))


_DEFAULT = ScatterConfig()


def _support_slice(sig: TimeSignal) -> tuple[np.ndarray, float]:
    """Nonzero span of the signal plus the matching left cell edge.

    Zero cells act as exact identities, so trimming them changes nothing
    but saves work on heavily truncated signals.
    """
    q = sig.samples
    nz = np.nonzero(q)[0]
    if nz.size == 0:
        return q[:0], sig.t_start - 0.5 * sig.dt
    lo, hi = nz[0], nz[-1] + 1
    return q[lo:hi], sig.t_start + (lo - 0.5) * sig.dt


def scatter_many(sig: TimeSignal, lams, cfg: ScatterConfig = _DEFAULT):
    """Jost coefficients (a, b) at each spectral point in ``lams``.

    Returns complex arrays shaped like ``lams``.  Raises
    ScatterOverflowError if the state exceeded the magnitude bound at any
    requested point (possible for Im(lam) large relative to signal decay).
    """
    lams = np.asarray(lams, dtype=np.complex128)
    require_finite("lams", lams)
    flat = lams.ravel()
    q, t_left = _support_slice(sig)
    if q.size == 0:
        return np.ones_like(lams), np.zeros_like(lams)
    if cfg.scheme == SCHEME_SPLIT:
        n = q.size
        i_split = int(np.clip(round(-t_left / sig.dt), 0, n))
        a, b, flag = _zs_kernels.split_pass(q, t_left, sig.dt, flat, i_split)
    else:
        a, b, flag = _zs_kernels.forward_pass(q, t_left, sig.dt, flat)
    if np.any(flag):
        raise ScatterOverflowError(
            f"scattering state overflowed at {int(np.sum(flag))} spectral point(s); "
            "the point(s) lie too deep relative to the signal decay"
        )
    return a.reshape(lams.shape), b.reshape(lams.shape)


def scatter(sig: TimeSignal, lam: complex, cfg: ScatterConfig = _DEFAULT) -> JostPair:
    """Jost pair (a(lam), b(lam)) of the sampled signal at one point."""
    a, b = scatter_many(sig, np.array([lam]), cfg)
    return JostPair(complex(a[0]), complex(b[0]))


def continuous_spectrum(sig: TimeSignal, omega_grid, cfg: ScatterConfig = _DEFAULT) -> ContinuousSpectrum:
    """Per-frequency Jost pairs on a real grid; Qc is available as b/a."""
    omega = np.asarray(omega_grid, dtype=np.float64)
    a, b = scatter_many(sig, omega.astype(np.complex128), cfg)
    return ContinuousSpectrum(omega, a, b)


def _newton_batch(sig, lams, cfg):
    """a at lam and central-difference da/dlam, one kernel call for all."""
    h = cfg.fd_step
    stacked = np.concatenate([lams, lams + h, lams - h])
    a, _ = scatter_many(sig, stacked, cfg)
    n = lams.size
    return a[:n], (a[n : 2 * n] - a[2 * n :]) / (2.0 * h)


def find_eigenvalues(sig: TimeSignal, seeds, cfg: ScatterConfig = _DEFAULT) -> list[complex]:
    """Upper-half-plane roots of a(lam) by Newton iteration from the seeds.

    Converged roots satisfy |a| < cfg.newton_tol (one extra polish step is
    taken after the criterion fires); duplicates within 1e-4 are merged and
    non-converged seeds are dropped with a log message.  Returns [] when no
    seed converged but every trajectory stayed clearly away from a root
    (|a| >= 0.5 throughout, e.g. a rootless signal); raises
    NoConvergenceError when all seeds fail despite near-root evidence.
    """
    seeds = np.asarray(seeds, dtype=np.complex128).ravel()
    if seeds.size == 0:
        return []
    if np.any(seeds.imag <= 0):
        raise ValueError("seeds must lie in the open upper half-plane")

    lam = seeds.copy()
    best = seeds.copy()
    best_abs = np.full(seeds.size, np.inf)
    active = np.ones(seeds.size, dtype=bool)
    polish_left = np.full(seeds.size, -1)  # -1: not yet converged
    converged = np.zeros(seeds.size, dtype=bool)
    min_abs_a = np.full(seeds.size, np.inf)

    for _ in range(cfg.newton_max_iter + 3):
        if not np.any(active):
            break
        idx = np.nonzero(active)[0]
        try:
            a, da = _newton_batch(sig, lam[idx], cfg)
        except ScatterOverflowError:
            # retry one-by-one so a single bad iterate cannot kill the batch
            a = np.empty(idx.size, dtype=complex)
            da = np.empty(idx.size, dtype=complex)
            for pos, i in enumerate(idx):
                try:
                    av, dav = _newton_batch(sig, lam[i : i + 1], cfg)
                    a[pos], da[pos] = av[0], dav[0]
                except ScatterOverflowError:
                    a[pos], da[pos] = np.nan, np.nan
        abs_a = np.abs(a)
        min_abs_a[idx] = np.minimum(min_abs_a[idx], abs_a)
        for pos, i in enumerate(idx):
            if not np.isfinite(a[pos]) or not np.isfinite(da[pos]):
                active[i] = False
                continue
            if abs_a[pos] < best_abs[i]:
                best_abs[i] = abs_a[pos]
                best[i] = lam[i]
            if abs_a[pos] < cfg.newton_tol:
                converged[i] = True
                if polish_left[i] < 0:
                    # criterion fired: a few extra steps drive |a| to the
                    # rounding floor, which sharpens b-extraction later
                    polish_left[i] = 3
            if polish_left[i] == 0 or abs(da[pos]) < 1e-30:
                active[i] = False
                continue
            if polish_left[i] > 0:
                polish_left[i] -= 1
            new = lam[i] - a[pos] / da[pos]
            if new.imag <= 0 or not np.isfinite(new):
                active[i] = False
                continue
            lam[i] = new

    roots = [complex(best[i]) for i in range(seeds.size) if converged[i]]
    dropped = int(np.sum(~converged))
    if dropped:
        log.info("find_eigenvalues: dropped %d non-converged seed(s)", dropped)
    if not roots:
        if np.all(min_abs_a >= 0.5):
            return []
        raise NoConvergenceError("no seed converged to a root of a(lam)")

    roots.sort(key=lambda z: z.imag)
    unique: list[complex] = []
    for r in roots:
        if all(abs(r - u) >= 1e-4 for u in unique):
            unique.append(r)
    return unique


def _bound_state_b(sig: TimeSignal, eigs: np.ndarray) -> np.ndarray:
    """b at eigenvalues via the matched pairing at the meeting point.

    At a root of a(lam) the canonical solution is parallel to the right
    Jost solution w (the one tending to (0,1) at the right edge), so
    b = v2/w2 at any interior point.  Meeting at t = 0 keeps both passes in
    their stable direction, which beats the plain edge readout by many
    orders of magnitude for eigenvalues deep in the upper half-plane.
    """
    q, t_left = _support_slice(sig)
    if q.size == 0:
        raise ValueError("cannot extract bound-state amplitudes of a zero signal")
    i_split = int(np.clip(round(-t_left / sig.dt), 0, q.size))
    if _zs_kernels.HAVE_NUMBA:
        v1, v2, f1 = _zs_kernels._forward_nb(q[:i_split], t_left, sig.dt, eigs)
        _, _, w1, w2, f2 = _zs_kernels._backward_nb(q, t_left, sig.dt, eigs, i_split)
    else:
        v1, v2, f1 = _zs_kernels._forward_py(q[:i_split], t_left, sig.dt, eigs)
        _, _, w1, w2, f2 = _zs_kernels._backward_py(q, t_left, sig.dt, eigs, i_split)
    if np.any(f1 | f2):
        raise ScatterOverflowError("bound-state extraction overflowed")
    if np.any(np.abs(w2) == 0):
        raise ScatterOverflowError("right Jost solution vanished at the meeting point")
    return v2 / w2


def discrete_amplitudes(sig: TimeSignal, eigs, cfg: ScatterConfig = _DEFAULT):
    """(lam, b, Qd) for each verified root, with Qd = b / (da/dlam).

    Under the forward scheme b is read off the plain forward pass; under
    the split scheme it comes from the matched bound-state pairing, which
    stays accurate for eigenvalues deep in the upper half-plane where the
    edge readout is swamped by the growing solution component.
    """
    eigs = np.asarray(eigs, dtype=np.complex128).ravel()
    if eigs.size == 0:
        return []
    h = cfg.fd_step
    stacked = np.concatenate([eigs, eigs + h, eigs - h])
    fwd_cfg = replace(cfg, scheme=SCHEME_FORWARD)
    a, b = scatter_many(sig, stacked, fwd_cfg)
    n = eigs.size
    da = (a[n : 2 * n] - a[2 * n :]) / (2.0 * h)
    if cfg.scheme == SCHEME_SPLIT:
        b_eig = _bound_state_b(sig, eigs)
    else:
        b_eig = b[:n]
    out = []
    for k in range(n):
        out.append((complex(eigs[k]), complex(b_eig[k]), complex(b_eig[k] / da[k])))
    return out


def energy_continuous(cs: ContinuousSpectrum, edge_tol: float = 1e-6) -> float:
    """Energy of the continuous part: -(1/pi) * integral of ln|a(w)|^2.

    The grid must reach the region where |a| -> 1; the requirement
    |ln|a|^2| < edge_tol at both edges guards against truncating the
    integrand (GridTooNarrowError otherwise).
    """
    log_a2 = np.log(np.abs(cs.a) ** 2)
    if max(abs(log_a2[0]), abs(log_a2[-1])) >= edge_tol:
        raise GridTooNarrowError(
            f"|ln|a|^2| = {max(abs(log_a2[0]), abs(log_a2[-1])):.3g} at a grid edge "
            f"(required < {edge_tol:g})"
        )
    return float(-np.trapezoid(log_a2, dx=cs.d_omega) / np.pi)


def compose_segments(
    left: JostPair,
    mid: JostPair,
    right: JostPair,
    left_conj: JostPair | None = None,
    mid_conj: JostPair | None = None,
    right_conj: JostPair | None = None,
) -> JostPair:
    """Jost pair of three concatenated disjoint-support segments.

    All pairs must be evaluated at the same spectral point.  The starred
    values a*(lam*), b*(lam*) of each segment enter the composition; for
    real lam they equal the plain complex conjugates, which is the default.
    At complex lam the caller must supply them explicitly (they are not
    computable from a(lam), b(lam) alone).
    """
    lc = left_conj or JostPair(np.conj(left.a), np.conj(left.b))
    mc = mid_conj or JostPair(np.conj(mid.a), np.conj(mid.b))
    rc = right_conj or JostPair(np.conj(right.a), np.conj(right.b))
    a = (
        left.a * mid.a * right.a
        - left.b * mc.b * right.a
        - left.a * mid.b * rc.b
        - left.b * mc.a * rc.b
    )
    b = (
        left.a * mid.a * right.b
        - left.b * mc.b * right.b
        + left.a * mid.b * rc.a
        + left.b * mc.a * rc.a
    )
    return JostPair(complex(a), complex(b))
