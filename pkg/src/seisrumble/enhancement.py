"""Spectrogram enhancement by ridge filtering and structure-tensor coherence.

Two stages:

* ``enhance_coherence`` ridge-filters the power spectrogram, converts it to
  dB and weights every pixel by ``1 + c`` where ``c`` is the local coherence.
* ``enhance_threshold`` pushes pixels up or down depending on which
  quartile they fall in, then applies a Gaussian blur.

``ssim`` scores how much structure an enhancement stage retained.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ._backend import kernels
from .dsp import DB_EPS, Scale, Spectrogram
from .errors import SizeError

GAUSS_TRUNCATE = 4.0
THRESHOLD_DELTAS = (5.0, 2.0, -2.0, -5.0)


@dataclass(frozen=True)
class StructureTensorField:
    j_tt: np.ndarray
    j_ff: np.ndarray
    j_tf: np.ndarray
    sigma: float


@dataclass(frozen=True)
class CoherenceMap:
    c: np.ndarray
    epsilon_guard: float


def _values(s) -> np.ndarray:
    return s.values if isinstance(s, Spectrogram) else np.asarray(s, dtype=np.float64)


def gaussian_smooth(m: np.ndarray, sigma: float) -> np.ndarray:
    """2-D Gaussian, reflect boundary, kernel truncated at 4 sigma."""
    if sigma <= 0:
        return np.array(m, dtype=np.float64, copy=True)
    return ndimage.gaussian_filter(np.asarray(m, dtype=np.float64), sigma,
                                   mode="reflect", truncate=GAUSS_TRUNCATE)


def gradients(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Central differences along time (axis 0) and frequency (axis 1)."""
    return np.gradient(m, axis=0), np.gradient(m, axis=1)


def ridge_measure(m: np.ndarray, sigma_r: float = 1.5) -> np.ndarray:
    """Negative-curvature ridge strength max(0, -lambda_min(Hessian))."""
    g = gaussian_smooth(m, sigma_r)
    gt, gf = gradients(g)
    h_tt = np.gradient(gt, axis=0)
    h_ff = np.gradient(gf, axis=1)
    h_tf = 0.5 * (np.gradient(gt, axis=1) + np.gradient(gf, axis=0))
    _, lam_min = kernels.tensor_eigenvalues(h_tt, h_ff, h_tf)
    return np.maximum(0.0, -lam_min)


def ridge_filter(s: Spectrogram, sigma_r: float = 1.5) -> Spectrogram:
    """Emphasize ridges by multiplicative blending with the ridge measure.

    out = s * (1 + R / max(R)); a spectrogram without any ridge response
    (e.g. all zeros or constant) is returned unchanged.
    """
    s.require_scale(Scale.POWER)
    r = ridge_measure(s.values, sigma_r)
    peak = r.max() if r.size else 0.0
    if not peak > 0:
        return s.replace(s.values)
    return s.replace(s.values * (1.0 + r / peak))


def structure_tensor(s, sigma: float = 1.5) -> StructureTensorField:
    m = _values(s)
    if m.ndim != 2 or min(m.shape) < 3:
        raise SizeError(f"structure tensor needs a matrix of at least 3x3, got {m.shape}")
    gt, gf = gradients(m)
    return StructureTensorField(
        j_tt=gaussian_smooth(gt * gt, sigma),
        j_ff=gaussian_smooth(gf * gf, sigma),
        j_tf=gaussian_smooth(gt * gf, sigma),
        sigma=sigma,
    )


def tensor_eigenvalues(t: StructureTensorField) -> tuple[np.ndarray, np.ndarray]:
    return kernels.tensor_eigenvalues(t.j_tt, t.j_ff, t.j_tf)


def coherence(l1: np.ndarray, l2: np.ndarray, eps: float = 1e-12) -> CoherenceMap:
    """(l1 - l2) / (l1 + l2), clamped to [0, 1]; 0 where l1 + l2 < eps."""
    return CoherenceMap(kernels.coherence(l1, l2, eps), eps)


def coherence_map(s, sigma: float = 1.5, eps: float = 1e-12) -> CoherenceMap:
    l1, l2 = tensor_eigenvalues(structure_tensor(s, sigma))
    return coherence(l1, l2, eps)


def enhance_coherence(s: Spectrogram, sigma: float = 1.5, sigma_r: float = 1.5,
                      eps: float = 1e-12) -> Spectrogram:
    """Ridge filter, then weight the dB ridge spectrogram by (1 + coherence).

    Coherence comes from the structure tensor of the unfiltered input.
    """
    s.require_scale(Scale.POWER)
    ridge = ridge_filter(s, sigma_r)
    c = coherence_map(s, sigma, eps).c
    out = 10.0 * np.log10(ridge.values + DB_EPS) * (1.0 + c)
    return s.replace(out, Scale.DECIBEL)


def quartile_thresholds(values: np.ndarray) -> tuple[float, float, float]:
    p25, p50, p75 = np.percentile(values, [25.0, 50.0, 75.0], method="linear")
    return float(p25), float(p50), float(p75)


def threshold_adjust(values: np.ndarray, deltas=THRESHOLD_DELTAS) -> np.ndarray:
    """Quartile-dependent offset before blurring (strict comparisons)."""
    values = np.asarray(values, dtype=np.float64)
    t1, t2, t3 = quartile_thresholds(values)
    return kernels.threshold_adjust(values, t1, t2, t3, tuple(float(d) for d in deltas))


def enhance_threshold(s1: Spectrogram, deltas=THRESHOLD_DELTAS,
                      blur_sigma: float = 1.0) -> Spectrogram:
    s1.require_scale(Scale.DECIBEL)
    adjusted = threshold_adjust(s1.values, deltas)
    return s1.replace(gaussian_smooth(adjusted, blur_sigma), Scale.DECIBEL)


def ssim(x, y, k1: float = 0.01, k2: float = 0.03) -> float:
    """Global (single-window) structural similarity of two equal-size images.

    The dynamic range L spans both images: max over both minus min over both.
    """
    a = _values(x).astype(np.float64, copy=False)
    b = _values(y).astype(np.float64, copy=False)
    if a.shape != b.shape:
        raise SizeError(f"SSIM needs equal shapes, got {a.shape} and {b.shape}")
    if a.size == 0:
        raise SizeError("SSIM of empty images is undefined")
    dyn = max(a.max(), b.max()) - min(a.min(), b.min())
    if dyn == 0:
        return 1.0
    c1 = (dyn * k1) ** 2
    c2 = (dyn * k2) ** 2
    mu_a = a.mean()
    mu_b = b.mean()
    da = a - mu_a
    db = b - mu_b
    var_a = np.mean(da * da)
    var_b = np.mean(db * db)
    cov = np.mean(da * db)
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(num / den)
