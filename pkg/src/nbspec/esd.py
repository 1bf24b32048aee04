"""Empirical spectral measures and the distances used to compare them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closed_form import certified_cz
from .errors import HypothesisViolated
from .operators import OperatorBundle, e_operator_norm
from .spectral import ComplexSpectrum, svdvals

# bounded test functions standing in for "all bounded continuous f":
# Gaussian bumps on a 21 x 21 grid over [-2.5, 2.5]^2 at three widths
KERNEL_GRID = np.linspace(-2.5, 2.5, 21)
KERNEL_CENTERS = (KERNEL_GRID[None, :] + 1j * KERNEL_GRID[:, None]).ravel()
KERNEL_WIDTHS = (0.25, 0.5, 1.0)

_CHUNK = 2048


@dataclass(frozen=True, eq=False)
class EmpiricalSpectralMeasure:
    """Uniform probability measure on a finite multiset of complex points."""

    points: np.ndarray

    def __post_init__(self):
        if len(self.points) == 0:
            raise ValueError("empirical measure needs at least one point")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def weights(self) -> np.ndarray:
        return np.full(len(self.points), 1.0 / len(self.points))

    def integrate(self, f) -> float:
        return float(np.mean(f(self.points)))


def esd(spectrum) -> EmpiricalSpectralMeasure:
    values = spectrum.values if isinstance(spectrum, ComplexSpectrum) else spectrum
    return EmpiricalSpectralMeasure(np.asarray(values, dtype=complex).ravel())


def _points(x) -> np.ndarray:
    if isinstance(x, EmpiricalSpectralMeasure):
        return x.points
    return esd(x).points


def nearest_indices(target, reference) -> np.ndarray:
    """Index of the closest reference point for every target point."""
    t = _points(target)
    r = _points(reference)
    out = np.empty(len(t), dtype=np.intp)
    for s in range(0, len(t), _CHUNK):
        out[s:s + _CHUNK] = np.abs(t[s:s + _CHUNK, None] - r[None, :]).argmin(axis=1)
    return out


def nearest_distances(target, reference) -> np.ndarray:
    """For every target point, the distance to the closest reference point."""
    t = _points(target)
    r = _points(reference)
    return np.abs(t - r[nearest_indices(t, r)])


def spectral_variation(target, reference) -> float:
    """``max_j min_i |target_j - reference_i|``."""
    return float(nearest_distances(target, reference).max())


def semicircle_cdf(x):
    """CDF of the semicircle law on ``[-2, 2]``."""
    x = np.clip(np.asarray(x, dtype=float), -2.0, 2.0)
    return 0.5 + x * np.sqrt(4.0 - x * x) / (4.0 * np.pi) + np.arcsin(x / 2.0) / np.pi


def ks_vs_semicircle(values) -> float:
    """Kolmogorov-Smirnov distance between the sample and the semicircle law."""
    x = np.sort(np.asarray(values, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("empty sample")
    N = x.size
    F = semicircle_cdf(x)
    above = np.arange(1, N + 1) / N - F
    below = F - np.arange(N) / N
    return float(max(above.max(), below.max(), 0.0))


def remove_real_outliers(values, k: int = 2) -> np.ndarray:
    """Drop the ``k`` points farthest from the unit circle, ``||z| - 1|``.

    For these operators the two real outliers sit near ``sqrt(np)`` and
    ``1/sqrt(np)``; both are far from the circle while the bulk hugs it.
    """
    v = np.asarray(values, dtype=complex).ravel()
    score = np.abs(np.abs(v) - 1.0)
    keep = np.argsort(-score, kind="stable")[k:]
    return v[np.sort(keep)]


def kernel_integrals(points) -> np.ndarray:
    """``(len(KERNEL_WIDTHS), len(KERNEL_CENTERS))`` integrals of each test function."""
    pts = _points(points)
    out = np.zeros((len(KERNEL_WIDTHS), len(KERNEL_CENTERS)))
    for s in range(0, len(pts), _CHUNK):
        d2 = np.abs(pts[s:s + _CHUNK, None] - KERNEL_CENTERS[None, :]) ** 2
        for w, sigma in enumerate(KERNEL_WIDTHS):
            out[w] += np.exp(-d2 / (2.0 * sigma * sigma)).sum(axis=0)
    return out / len(pts)


def bl_distance(a, b) -> float:
    """Largest discrepancy of the two measures over the Gaussian test family."""
    return float(np.max(np.abs(kernel_integrals(a) - kernel_integrals(b))))


@dataclass(frozen=True)
class ReplacementDiagnostics:
    frob_H0: float
    frob_H: float
    e_opnorm: float
    sigma_min_at_z: dict = field(default_factory=dict)
    cz_at_z: dict = field(default_factory=dict)

    def resolvent_bound_holds(self, slack: float = 1e-9) -> dict:
        """Per ``z``: does ``sigma_min(tH0 - z)^2 >= C_z`` hold up to ``slack``?"""
        return {z: self.sigma_min_at_z[z] ** 2 >= self.cz_at_z[z] - slack for z in self.sigma_min_at_z}


def admissible(z: complex) -> bool:
    z = complex(z)
    return z.imag != 0.0 and abs(abs(z) - 1.0) > 1e-12


def replacement_diagnostics(bundle: OperatorBundle, z_list=()) -> ReplacementDiagnostics:
    two_n = 2 * bundle.n
    sig, cz = {}, {}
    eye = np.eye(two_n)
    for z in z_list:
        z = complex(z)
        if not admissible(z):
            raise HypothesisViolated(f"z = {z} needs Im z != 0 and |z| != 1")
        sig[z] = float(svdvals(bundle.tH0 - z * eye)[-1])
        cz[z] = certified_cz(z)
    return ReplacementDiagnostics(
        frob_H0=float(np.sum(bundle.tH0**2) / two_n),
        frob_H=float(np.sum(bundle.tH**2) / two_n),
        e_opnorm=e_operator_norm(bundle),
        sigma_min_at_z=sig,
        cz_at_z=cz,
    )


def frobenius_from_degrees(bundle: OperatorBundle) -> tuple[float, float]:
    """``(||tH0||_F^2, ||tH||_F^2) / 2n`` from the degree vector alone, O(n)."""
    n = bundle.n
    adj = 2.0 * bundle.graph.m / bundle.alpha
    upper = np.sum((bundle.e_diagonal - 1.0) ** 2)
    return (adj + 2.0 * n) / (2 * n), float(adj + upper + n) / (2 * n)
