"""Explicit formulas for the spectrum of tH0 = [[A/sqrt(alpha), -I], [I, 0]].

Everything here is written in terms of the eigenvalues ``lambda_i`` and
orthonormal eigenvectors ``v_i`` of ``A / sqrt(alpha)``. Each ``lambda_i``
contributes the two roots of ``x^2 - lambda_i x + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEigenvalue, DegenerateScale, HypothesisViolated, SingularY
from .spectral import SymmetricSpectrum

DEGENERACY_TOL = 1e-9
SINGULAR_Y_TOL = 1e-12
RADICAND_CLAMP = 1e-10


def h0_pair_from_lambda(lam: float) -> tuple[complex, complex]:
    """The two roots of ``x^2 - lam x + 1``.

    The first root carries the ``+sqrt`` branch; for ``lam^2 < 4`` that is the
    root in the upper half plane.
    """
    mu1, mu2 = h0_pairs(np.array([lam], dtype=float))
    return complex(mu1[0]), complex(mu2[0])


def h0_pairs(lambdas) -> tuple[np.ndarray, np.ndarray]:
    lam = np.asarray(lambdas, dtype=float)
    disc = lam * lam - 4.0
    real = disc >= 0
    mu1 = np.empty(lam.shape, dtype=complex)
    mu2 = np.empty(lam.shape, dtype=complex)

    # real roots: take the large-magnitude root directly and the other as
    # its reciprocal, avoiding cancellation in lam -/+ sqrt(disc)
    r = np.sqrt(np.where(real, disc, 0.0))
    big = (lam + np.copysign(r, lam)) / 2.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        small = np.where(big != 0, 1.0 / big, 0.0)
    pos = lam >= 0
    mu1.real = np.where(pos, big, small)
    mu2.real = np.where(pos, small, big)
    mu1.imag = 0.0
    mu2.imag = 0.0

    s = np.sqrt(np.where(real, 0.0, -disc))
    c = ~real
    mu1[c] = (lam[c] + 1j * s[c]) / 2.0
    mu2[c] = (lam[c] - 1j * s[c]) / 2.0
    return mu1, mu2


def interleave(mu1: np.ndarray, mu2: np.ndarray) -> np.ndarray:
    """``(mu_1, mu_2, ..., mu_{2n})`` with pair ``i`` at positions ``2i, 2i+1``."""
    out = np.empty(2 * len(mu1), dtype=complex)
    out[0::2] = mu1
    out[1::2] = mu2
    return out


def char_poly_eval(lambdas, x) -> complex:
    """``prod_i (x^2 - lambda_i x + 1)``, i.e. ``det(x I - tH0)``."""
    lam = np.asarray(lambdas, dtype=float)
    x = complex(x)
    return complex(np.prod(x * x - lam * x + 1.0))


@dataclass(frozen=True, eq=False)
class H0ClosedForm:
    lambdas: np.ndarray
    mu1: np.ndarray
    mu2: np.ndarray
    Y: np.ndarray
    X: np.ndarray

    @property
    def mu(self) -> np.ndarray:
        return interleave(self.mu1, self.mu2)

    @property
    def gamma(self) -> np.ndarray:
        """Off-diagonal entry of each 2x2 block of Y Y*."""
        return _gamma(self.mu1, self.mu2)

    @property
    def kappa(self) -> float:
        return condition_number_Y(self)


def _gamma(mu1, mu2):
    return (mu1 * np.conj(mu2) + 1.0) / np.sqrt((1.0 + np.abs(mu1) ** 2) * (1.0 + np.abs(mu2) ** 2))


def build_Y_X(spec: SymmetricSpectrum) -> H0ClosedForm:
    """Left eigenvector rows ``Y`` and right eigenvector columns ``X = Y^{-1}``.

    Row ``2i`` of ``Y`` is ``(-mu v_i^T, v_i^T) / sqrt(1 + |mu|^2)`` for the
    first root of pair ``i``, row ``2i + 1`` the same for the second root.
    """
    lam = np.asarray(spec.lambdas, dtype=float)
    V = np.asarray(spec.vectors, dtype=float)
    check_nondegenerate(lam)
    n = len(lam)
    mu1, mu2 = h0_pairs(lam)
    c1 = np.sqrt(1.0 + np.abs(mu1) ** 2)
    c2 = np.sqrt(1.0 + np.abs(mu2) ** 2)
    Vt = V.T

    Y = np.empty((2 * n, 2 * n), dtype=complex)
    Y[0::2, :n] = -(mu1 / c1)[:, None] * Vt
    Y[0::2, n:] = (1.0 / c1)[:, None] * Vt
    Y[1::2, :n] = -(mu2 / c2)[:, None] * Vt
    Y[1::2, n:] = (1.0 / c2)[:, None] * Vt

    X = np.empty((2 * n, 2 * n), dtype=complex)
    f1 = c1 / (mu2 - mu1)
    f2 = c2 / (mu1 - mu2)
    X[:n, 0::2] = V * f1
    X[n:, 0::2] = V * (f1 * mu2)
    X[:n, 1::2] = V * f2
    X[n:, 1::2] = V * (f2 * mu1)
    return H0ClosedForm(lam, mu1, mu2, Y, X)


def y_block_eigenvalues(form: H0ClosedForm) -> np.ndarray:
    """``(n, 2)`` array of the eigenvalues ``1 +/- |gamma_i|`` of the blocks of Y Y*."""
    return _block_eigenvalues(form.mu1, form.mu2)


def _block_eigenvalues(mu1, mu2) -> np.ndarray:
    g = np.abs(_gamma(mu1, mu2))
    return np.column_stack([1.0 + g, 1.0 - g])


def condition_number_Y(form: H0ClosedForm) -> float:
    """``||Y|| ||Y^{-1}||`` from the block eigenvalues of ``Y Y*``."""
    return _kappa(form.mu1, form.mu2)


def condition_number_from_lambdas(lambdas) -> float:
    """Same as :func:`condition_number_Y` without assembling Y."""
    lam = np.asarray(lambdas, dtype=float)
    check_nondegenerate(lam)
    return _kappa(*h0_pairs(lam))


def _kappa(mu1, mu2) -> float:
    ev = _block_eigenvalues(mu1, mu2)
    lo = ev.min()
    if lo <= SINGULAR_Y_TOL:
        raise SingularY(f"smallest eigenvalue of Y Y* is {lo:.3e}")
    return float(np.sqrt(ev.max() / lo))


def check_nondegenerate(lambdas) -> None:
    lam = np.asarray(lambdas, dtype=float)
    bad = np.nonzero(np.abs(lam * lam - 4.0) <= DEGENERACY_TOL)[0]
    if bad.size:
        raise DegenerateEigenvalue(int(bad[0]), float(lam[bad[0]]))


def singular_values_formula(lam: float, z: complex) -> tuple[float, float]:
    """The two singular values of ``tH0 - z I`` contributed by ``lam``.

    Squares are ``1 + |z|^2 + s/2 +/- sqrt(s^2 + 4(lam^2 - (z - conj z)^2)) / 2``
    with ``s = lam^2 - (z + conj z) lam``. The smaller square is recovered as
    ``|z^2 - lam z + 1|^2 / larger``, since the two multiply to that.
    """
    z = complex(z)
    a, b = z.real, z.imag
    s = lam * lam - 2.0 * a * lam
    inner = s * s + 4.0 * (lam * lam + 4.0 * b * b)
    if inner < 0:
        if inner < -RADICAND_CLAMP:
            raise ArithmeticError(f"negative radicand {inner}")
        inner = 0.0
    big = 1.0 + a * a + b * b + s / 2.0 + math.sqrt(inner) / 2.0
    prod = abs(z * z - lam * z + 1.0) ** 2
    small = prod / big if big > 0 else 0.0
    return math.sqrt(max(big, 0.0)), math.sqrt(max(small, 0.0))


def singular_values_all(lambdas, z: complex) -> np.ndarray:
    """Formula singular values over every ``lambda_i``, sorted descending."""
    vals = [s for lam in np.asarray(lambdas, dtype=float) for s in singular_values_formula(float(lam), z)]
    return np.sort(np.array(vals))[::-1]


def _check_hypotheses(a: float, gamma: float) -> None:
    if not gamma > 0:
        raise HypothesisViolated(f"gamma = Im(z)^2 must be positive, got {gamma}")
    if abs(a * a + gamma - 1.0) <= 1e-12:
        raise HypothesisViolated("|z| = 1 is excluded")


def g_eval(lam: float, a: float, gamma: float) -> float:
    """Squared smallest singular value for ``z = a + i sqrt(gamma)``.

    ``1 + a^2 + gamma + lam^2/2 - a lam - sqrt(((lam^2 - 2 a lam)/2)^2 + lam^2 + 4 gamma)``
    """
    _check_hypotheses(a, gamma)
    q = (lam * lam - 2.0 * a * lam) / 2.0
    return 1.0 + a * a + gamma + lam * lam / 2.0 - a * lam - math.sqrt(q * q + lam * lam + 4.0 * gamma)


def g_case(lam: float, a: float, gamma: float) -> int:
    """Which of the three regions (1, 2 or 3) of the lower-bound argument ``lam`` falls in."""
    q = (lam * lam - 2.0 * a * lam) / 2.0
    if q * q + lam * lam >= 4.0:
        return 1
    if abs(1.0 - lam * lam / 4.0 - gamma) >= abs(a * a + gamma - 1.0) / 2.0:
        return 2
    return 3


@dataclass(frozen=True)
class CzConstants:
    case1: float
    case2: float
    case3: float

    @property
    def cz(self) -> float:
        return min(self.case1, self.case2, self.case3)


def cz_case_constants(a: float, gamma: float) -> CzConstants:
    """Lower bounds on ``g`` in each region; their minimum is the certified C_z."""
    _check_hypotheses(a, gamma)
    k = abs(a * a + gamma - 1.0)
    case1 = (1.0 - 2.0 / math.sqrt(4.0 + 4.0 * gamma)) * gamma / 2.0
    case2 = min(1.0, k / 6.0) ** 2
    c2 = -1.0 + math.sqrt(1.0 + k / 2.0)
    case3 = min(15.0 / 16.0 * c2 * c2, c2**4 / 64.0)
    return CzConstants(case1, case2, case3)


def certified_cz(z: complex) -> float:
    z = complex(z)
    return cz_case_constants(z.real, z.imag**2).cz


def relative_entropy(p: float, q: float) -> float:
    """``RE(p || q)`` in nats for Bernoulli laws, with ``0 log 0 = 0``.

    Returns ``inf`` when ``p`` lies outside ``[0, 1]``: a sum of ``[0, 1]``
    variables cannot have such a mean, so the matching tail is empty.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if p < 0.0 or p > 1.0:
        return math.inf
    out = 0.0
    if p > 0.0:
        out += p * math.log(p / q)
    if p < 1.0:
        out += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return out


@dataclass(frozen=True)
class BoundsReport:
    n: int
    p: float
    e_norm_bound: float
    bauer_fike_R: float
    kappa_bound: float
    t: float
    chernoff_tails: tuple[float, float]


def bounds_report(n: int, p: float) -> BoundsReport:
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if not (n - 1) * p > 1.0:
        raise DegenerateScale(f"(n-1)p = {(n - 1) * p} <= 1")
    logn = math.log(n)
    t = 10.0 * math.sqrt(logn / (n * p))
    upper = math.exp(-relative_entropy(p + p * t, p) * n)
    lower = math.exp(-relative_entropy(p - p * t, p) * n)
    return BoundsReport(
        n=n,
        p=p,
        e_norm_bound=20.0 * math.sqrt(logn / (n * p)),
        bauer_fike_R=40.0 * math.sqrt(logn / (n * p * p)),
        kappa_bound=2.0 / math.sqrt(p),
        t=t,
        chernoff_tails=(upper, lower),
    )
