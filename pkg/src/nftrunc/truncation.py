"""Closed-form nonlinear spectra of symmetrically truncated multi-solitons.

A symmetric multi-soliton (pure imaginary eigenvalues j*sigma_k, unimodular
b-coefficients) truncated to |t| <= T sheds its exponential tails.  Each
tail is close to a shifted fundamental soliton, whose scattering problem is
solvable in closed form; composing tail and core spectra gives explicit
expressions for the truncated pulse's Jost coefficients, its perturbed
eigenvalues and their b-coefficients.  Everything here is deterministic and
cheap: no signal is ever sampled or integrated.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import (
    BranchAmbiguityError,
    DiscreteSpectrum,
    JostPair,
    NoConvergenceError,
    PoleError,
    StripError,
    require_finite,
)
from .synthesis import a_closed_form, tail_parameters

__all__ = [
    "TruncationModel",
    "alpha",
    "beta",
    "alpha_star",
    "beta_star",
    "tail_jost_left",
    "tail_jost_right",
    "truncated_jost_real",
    "truncated_jost_strip",
    "analytic_eigenvalues",
    "analytic_b_values",
]


@dataclass(frozen=True)
class TruncationModel:
    """Parameter pack for the closed-form truncation formulas.

    sigma1 is the smallest eigenvalue height (unique by construction), phi
    the phase of its b-coefficient, t0 the tail shift, T the truncation
    half-window and N the soliton count.  The formulas assume T > t0
    (``in_contract``); smaller windows still evaluate, with a warning,
    but the tail picture behind them has broken down.
    """

    sigma1: float
    phi: float
    t0: float
    T: float
    N: int
    eigenvalues: np.ndarray = field(repr=False)
    b1_phase: complex = field(repr=False)
    b_coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        require_finite("eigenvalues", self.eigenvalues)
        require_finite("b_coeffs", self.b_coeffs)
        if self.sigma1 <= 0:
            raise ValueError("sigma1 must be positive")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not (self.T > 0):
            raise ValueError("T must be positive")
        if not self.in_contract:
            warnings.warn(
                f"T = {self.T} does not exceed t0 = {self.t0:.6g}: "
                "closed forms are out of their validity regime",
                stacklevel=2,
            )
        if np.any(np.abs(self.eigenvalues.real) > 1e-12):
            raise ValueError("closed forms require pure imaginary eigenvalues")
        if np.any(np.abs(np.abs(self.b_coeffs) - 1.0) > 1e-6):
            raise ValueError("closed forms require unimodular b-coefficients")
        eig = np.array(self.eigenvalues, copy=True)
        eig.flags.writeable = False
        object.__setattr__(self, "eigenvalues", eig)
        bc = np.array(self.b_coeffs, copy=True)
        bc.flags.writeable = False
        object.__setattr__(self, "b_coeffs", bc)

    @classmethod
    def from_spectrum(cls, ds: DiscreteSpectrum, T: float) -> "TruncationModel":
        """Build the model from a symmetric discrete spectrum and window T."""
        if len(ds) == 0:
            raise ValueError("empty spectrum")
        tp = tail_parameters(ds)
        phi = float(np.angle(ds.b[0]))
        return cls(
            sigma1=tp.sigma1,
            phi=phi,
            t0=tp.t0,
            T=float(T),
            N=len(ds),
            eigenvalues=np.asarray(ds.eigenvalues, dtype=np.complex128),
            b1_phase=complex(np.exp(1j * phi)),
            b_coeffs=np.asarray(ds.b, dtype=np.complex128),
        )

    @classmethod
    def from_sigmas(cls, sigmas, phi: float, T: float) -> "TruncationModel":
        """Model from eigenvalue heights only; t0 and N are derived."""
        sig = np.sort(np.asarray(sigmas, dtype=np.float64))
        ds = DiscreteSpectrum(1j * sig, np.exp(1j * phi) * np.ones(sig.size))
        return cls.from_spectrum(ds, T)

    # -- serialization: {"sigmas": [...], "phi": .., "T": ..} --------------

    def to_json(self, path=None) -> str:
        doc = {
            "sigmas": [float(s) for s in self.eigenvalues.imag],
            "phi": self.phi,
            "T": self.T,
        }
        text = json.dumps(doc, indent=2, sort_keys=True)
        if path is not None:
            Path(path).write_text(text + "\n")
        return text

    @classmethod
    def from_json(cls, source) -> "TruncationModel":
        if isinstance(source, (str, Path)) and Path(str(source)).exists():
            doc = json.loads(Path(source).read_text())
        else:
            doc = json.loads(source)
        return cls.from_sigmas(doc["sigmas"], float(doc["phi"]), float(doc["T"]))

    # -- building blocks ----------------------------------------------------

    @property
    def in_contract(self) -> bool:
        """True when the window respects the validity regime T > t0."""
        return self.T > self.t0

    @property
    def _gap(self) -> float:
        return 2.0 * self.sigma1 * (self.T - self.t0)

    @property
    def _edge_weight(self) -> float:
        # sigmoid weight of the tail edge: e^-x / (e^-x + e^x)
        x = self._gap
        return float(np.exp(-x) / (np.exp(-x) + np.exp(x)))

    @property
    def _denom(self) -> float:
        x = self._gap
        return float(np.exp(-x) + np.exp(x))

    def soliton_a(self, lam):
        """a(lam) of the untruncated multi-soliton (Blaschke product)."""
        lam = np.asarray(lam, dtype=np.complex128)
        out = np.ones_like(lam)
        for lk in self.eigenvalues:
            out = out * (lam - lk) / (lam - np.conj(lk))
        return out if out.ndim else complex(out)


def _check_pole(lam, m: TruncationModel):
    lam = np.asarray(lam, dtype=np.complex128)
    if np.any(np.abs(lam + 1j * m.sigma1) < 1e-12):
        raise PoleError(f"pole at lam = -{m.sigma1}j")
    return lam


def alpha(lam, m: TruncationModel):
    """Tail a-coefficient: 1 - w * 2j sigma1/(lam + j sigma1)."""
    lam = _check_pole(lam, m)
    out = 1.0 - m._edge_weight * (2j * m.sigma1 / (lam + 1j * m.sigma1))
    return out if out.ndim else complex(out)


def beta(lam, m: TruncationModel):
    """Tail b-coefficient; grows like e^{2 Im(lam) T} below the real axis."""
    lam = _check_pole(lam, m)
    out = (
        np.exp(1j * (m.phi + m.N * np.pi))
        * (-2j * m.sigma1 / (lam + 1j * m.sigma1))
        * np.exp(2j * lam * m.T)
        / m._denom
    )
    return out if out.ndim else complex(out)


def alpha_star(lam, m: TruncationModel):
    """conj(alpha(conj(lam))): the starred coefficient entering the theorems."""
    lam = np.asarray(lam, dtype=np.complex128)
    if np.any(np.abs(lam - 1j * m.sigma1) < 1e-12):
        raise PoleError(f"pole at lam = {m.sigma1}j")
    out = 1.0 + m._edge_weight * (2j * m.sigma1 / (lam - 1j * m.sigma1))
    return out if out.ndim else complex(out)


def beta_star(lam, m: TruncationModel):
    """conj(beta(conj(lam)))."""
    lam = np.asarray(lam, dtype=np.complex128)
    if np.any(np.abs(lam - 1j * m.sigma1) < 1e-12):
        raise PoleError(f"pole at lam = {m.sigma1}j")
    out = (
        np.exp(-1j * (m.phi + m.N * np.pi))
        * (2j * m.sigma1 / (lam - 1j * m.sigma1))
        * np.exp(-2j * lam * m.T)
        / m._denom
    )
    return out if out.ndim else complex(out)


def tail_jost_left(lam, m: TruncationModel) -> JostPair:
    """Jost pair of the discarded left tail: (alpha, beta).

    Defined for Im(lam) > -sigma1 (the tail solution decays there).
    """
    lam_arr = np.asarray(lam, dtype=np.complex128)
    if np.any(lam_arr.imag <= -m.sigma1):
        raise StripError(f"tail coefficients require Im(lam) > -{m.sigma1}")
    return JostPair(alpha(lam, m), beta(lam, m))


def tail_jost_right(lam, m: TruncationModel) -> JostPair:
    """Jost pair of the discarded right tail: (alpha, e^{2j phi} beta*(lam*)).

    Valid in the strip |Im(lam)| < sigma1.
    """
    lam_arr = np.asarray(lam, dtype=np.complex128)
    if np.any(np.abs(lam_arr.imag) >= m.sigma1):
        raise StripError(f"right-tail form requires |Im(lam)| < {m.sigma1}")
    return JostPair(alpha(lam, m), np.exp(2j * m.phi) * beta_star(lam, m))


def truncated_jost_real(omega, m: TruncationModel) -> JostPair:
    """Closed-form (a_T, b_T) of the truncated pulse at real frequencies.

    a_T = a (alpha*)^2 - a* beta^2 e^{-2j phi}
    b_T = -(a* alpha beta + a alpha* beta* e^{2j phi})

    Accepts scalar or array omega; |a_T|^2 + |b_T|^2 = 1 by construction.
    """
    w = np.asarray(omega, dtype=np.float64)
    require_finite("omega", w)
    a = m.soliton_a(w.astype(np.complex128))
    al = alpha(w, m)
    be = beta(w, m)
    alc = np.conj(al)
    bec = np.conj(be)
    ac = np.conj(a)
    e2p = np.exp(2j * m.phi)
    a_t = a * alc**2 - ac * be**2 / e2p
    b_t = -(ac * al * be + a * alc * bec * e2p)
    if np.ndim(omega) == 0:
        return JostPair(complex(a_t), complex(b_t))
    return JostPair(a_t, b_t)


def truncated_jost_strip(lam, m: TruncationModel, b_fn=None) -> JostPair:
    """Closed-form (a_T, b_T) inside the strip |Im(lam)| < sigma1.

    Uses a*(lam*) = 1/a(lam), exact for the soliton Blaschke product.
    ``b_fn``, when given, must return the pair (b(lam), b*(lam*)) of the
    untruncated pulse; for an exact multi-soliton both vanish inside the
    strip, which is the default.  Outside the strip individual terms blow
    up without cancelling numerically, so the region is refused.
    """
    lam_arr = np.asarray(lam, dtype=np.complex128)
    require_finite("lam", lam_arr)
    if np.any(np.abs(lam_arr.imag) >= m.sigma1):
        raise StripError(f"strip form requires |Im(lam)| < {m.sigma1}")
    a = m.soliton_a(lam_arr)
    a_star = 1.0 / a
    al = alpha(lam_arr, m)
    als = alpha_star(lam_arr, m)
    be = beta(lam_arr, m)
    bes = beta_star(lam_arr, m)
    if b_fn is None:
        b = np.zeros_like(lam_arr)
        b_star = np.zeros_like(lam_arr)
    else:
        b, b_star = b_fn(lam_arr)
    e2p = np.exp(2j * m.phi)
    a_t = a * als**2 - a_star * be**2 / e2p + als * be * (b_star + b / e2p)
    b_t = -(a_star * al * be + a * als * bes * e2p) + al * als * b - be * bes * b_star * e2p
    if np.ndim(lam) == 0:
        return JostPair(complex(a_t), complex(b_t))
    return JostPair(a_t, b_t)


# --------------------------------------------------------------------------
# analytic eigenvalue search


def _h_factor(lam, m: TruncationModel):
    """a(lam) alpha*(lam*) with the (lam - j sigma1) pole/zero cancelled.

    Holomorphic in the upper half-plane; its zeros sit near each j sigma_k.
    """
    lam = np.asarray(lam, dtype=np.complex128)
    w = m._edge_weight
    s1 = m.sigma1
    out = (lam - 1j * s1 * (1.0 - 2.0 * w)) / (lam + 1j * s1)
    for lk in m.eigenvalues[1:]:
        out = out * (lam - lk) / (lam - np.conj(lk))
    return out


def _beta_reduced(lam, m: TruncationModel):
    """beta(lam) e^{-j phi}: the phase-free tail coupling of the zero search."""
    lam = np.asarray(lam, dtype=np.complex128)
    return (
        np.exp(1j * m.N * np.pi)
        * (-2j * m.sigma1 / (lam + 1j * m.sigma1))
        * np.exp(2j * lam * m.T)
        / m._denom
    )


def _newton_scalar(f, z0: complex, tol: float = 1e-13, max_iter: int = 60):
    """Plain complex Newton with a central-difference derivative.

    Stray iterates can leave the region where the objective is
    representable (e^{2j lam T} overflows deep below the axis); those
    evaluations are treated as failures of the current iterate, not errors.
    """
    z = complex(z0)
    h = 1e-7
    with np.errstate(over="ignore", invalid="ignore"):
        best, best_val = z, abs(f(z))
        for _ in range(max_iter):
            fz = f(z)
            if not np.isfinite(abs(fz)):
                break
            if abs(fz) < best_val:
                best, best_val = z, abs(fz)
            df = (f(z + h) - f(z - h)) / (2.0 * h)
            if df == 0 or not np.isfinite(abs(df)):
                break
            step = fz / df
            z = z - step
            if not np.isfinite(abs(z)):
                break
            if abs(step) < tol * max(1.0, abs(z)):
                fz = f(z)
                if np.isfinite(abs(fz)) and abs(fz) < best_val:
                    best, best_val = z, abs(fz)
                break
    return best, best_val


def _scan_imag_axis(f, lo: float, hi: float, step: float = 0.05):
    """Sign-change bracketing of a real-on-the-axis function f(jy)."""
    ys = np.arange(lo, hi + step, step)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.array([f(1j * y).real for y in ys])
    hits = []
    for i in range(len(ys) - 1):
        if np.isfinite(vals[i]) and np.isfinite(vals[i + 1]) and vals[i] * vals[i + 1] < 0:
            hits.append(0.5 * (ys[i] + ys[i + 1]))
    return hits


def analytic_eigenvalues(m: TruncationModel, seeds=None) -> list[complex]:
    """Perturbed eigenvalues of the truncated pulse from the closed forms.

    The zero search factorizes into h(lam) = +/- beta(lam) e^{-j phi} with
    h = a alpha* pole-cancelled; each original eigenvalue contributes one
    nearby root per sign.  Truncation removes energy, so per eigenvalue the
    root with the smaller imaginary part is returned.  The objective does
    not involve phi: the result depends only on the heights and T.
    """
    if seeds is None:
        seeds = [complex(lk) for lk in m.eigenvalues]
    seeds = [complex(s) for s in np.asarray(seeds, dtype=np.complex128).ravel()]
    if any(s.imag <= 0 for s in seeds):
        raise ValueError("seeds must lie in the open upper half-plane")

    # Collect the roots of both factors globally, then give each seed its
    # lowest assigned root.  Heavy truncation can drag the smallest
    # eigenvalue far from its seed, so Newton from the seeds alone is not
    # enough; a coarse bracketing sweep of the imaginary axis backs it up.
    y_hi = max(s.imag for s in seeds) + 0.5
    candidates: list[complex] = []
    for sign in (+1.0, -1.0):
        f = lambda z, s=sign: _h_factor(z, m) - s * _beta_reduced(z, m)
        guesses = list(seeds)
        guesses.extend(1j * y for y in _scan_imag_axis(f, 0.01, y_hi, step=0.02))
        for g in guesses:
            z, resid = _newton_scalar(f, g)
            if resid < 1e-8 and z.imag > 0:
                candidates.append(z)

    if not candidates:
        raise NoConvergenceError("zero search failed for every seed")
    unique: list[complex] = []
    for z in sorted(candidates, key=lambda z: z.imag):
        if all(abs(z - u) >= 1e-9 for u in unique):
            unique.append(z)

    roots: list[complex] = []
    for i, seed in enumerate(seeds):
        mine = [z for z in unique if np.argmin([abs(z - s) for s in seeds]) == i]
        if mine:
            roots.append(min(mine, key=lambda z: z.imag))
    if not roots:
        raise NoConvergenceError("no root could be assigned to any seed")
    roots.sort(key=lambda z: z.imag)
    return roots


def analytic_b_values(eigs, m: TruncationModel) -> list[complex]:
    """Closed-form b_T at each perturbed eigenvalue.

    Below sigma1 the untruncated b vanishes and the four-term product
    collapses to the first branch; above sigma1 the unknown b(lam~) is
    replaced by the original b(lam_k) of the nearest designed eigenvalue
    (with b*(lam_k*) = 1/b(lam_k) for a soliton).  A root within 1e-6 of
    sigma1 fits neither branch and is refused.
    """
    eigs = np.asarray(eigs, dtype=np.complex128).ravel()
    out = []
    e2p = np.exp(2j * m.phi)
    for lam in eigs:
        lam = complex(lam)
        if abs(lam.imag - m.sigma1) < 1e-6:
            raise BranchAmbiguityError(
                f"eigenvalue {lam} sits on the branch boundary Im = sigma1"
            )
        al = complex(alpha(lam, m))
        als = complex(alpha_star(lam, m))
        be = complex(beta(lam, m))
        bes = complex(beta_star(lam, m))
        if lam.imag < m.sigma1:
            a = complex(m.soliton_a(lam))
            b_t = -(al * be / a + a * als * bes * e2p)
        else:
            k = int(np.argmin(np.abs(m.eigenvalues - lam)))
            b_k = complex(m.b_coeffs[k])
            b_t = al * als * b_k - be * bes * e2p / b_k
        out.append(complex(b_t))
    return out
