"""Image, segmentation and agreement metrics.

SSIM follows the reference formulation (11x11 Gaussian window, sigma 1.5,
K1=0.01, K2=0.03, statistics over 'valid' windows).  The block similarity
loss maps the real and imaginary components of complex blocks into [0, 1],
takes the per-frame 2D SSIM of each component, and returns one minus the
average.  The paired t-test p-value is computed from the regularized
incomplete beta function (Lentz continued fraction, |error| < 1e-10).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .errors import InputError

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_K1 = 0.01
_K2 = 0.03


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    x = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(x**2) / (2.0 * sigma**2))
    k = np.outer(g, g)
    return k / k.sum()


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean structural similarity of two images in [0, 1]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.ndim != 2:
        raise InputError("ssim expects 2D images")
    win = min(_SSIM_WINDOW, min(a.shape))
    if win % 2 == 0:
        win -= 1
    k = _gaussian_window(win, _SSIM_SIGMA)
    c1 = _K1**2
    c2 = _K2**2

    mu_a = fftconvolve(a, k, mode="valid")
    mu_b = fftconvolve(b, k, mode="valid")
    var_a = fftconvolve(a * a, k, mode="valid") - mu_a**2
    var_b = fftconvolve(b * b, k, mode="valid") - mu_b**2
    cov = fftconvolve(a * b, k, mode="valid") - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def avg_ssim_loss(y: np.ndarray, y_hat: np.ndarray) -> float:
    """One minus the mean per-frame SSIM of the remapped real/imag parts.

    Components are mapped via ``(x + 1) / 2``; values outside [-1, 1] are
    clamped with a warning.  Accepts single frames or (nframe, n, n) blocks.
    """
    y = np.asarray(y, dtype=np.complex128)
    y_hat = np.asarray(y_hat, dtype=np.complex128)
    if y.shape != y_hat.shape:
        raise InputError(f"shape mismatch {y.shape} vs {y_hat.shape}")
    if y.ndim == 2:
        y = y[None]
        y_hat = y_hat[None]

    def remap(x):
        comp = np.stack([x.real, x.imag])
        if comp.min() < -1.0 - 1e-9 or comp.max() > 1.0 + 1e-9:
            warnings.warn("components outside [-1, 1]; clamping", stacklevel=3)
            comp = np.clip(comp, -1.0, 1.0)
        return (comp + 1.0) / 2.0

    ya = remap(y)
    yb = remap(y_hat)
    scores = [ssim(ya[c, f], yb[c, f])
              for c in range(2) for f in range(y.shape[0])]
    return 1.0 - float(np.mean(scores))


def mae(a: np.ndarray, b: np.ndarray) -> float:
    """Mean modulus of the (possibly complex) difference."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.mean(np.abs(a - b)))


def psnr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical inputs."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    mse = float(np.mean(np.abs(a - b) ** 2))
    if mse == 0.0:
        return float("inf")
    return 10.0 * math.log10(peak**2 / mse)


def dice(a: np.ndarray, b: np.ndarray) -> float:
    """Overlap 2|A n B| / (|A| + |B|); 1.0 when both masks are empty."""
    a = np.asarray(a).astype(bool)
    b = np.asarray(b).astype(bool)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    total = a.sum() + b.sum()
    if total == 0:
        return 1.0
    return float(2.0 * np.logical_and(a, b).sum() / total)


def bce(p: np.ndarray, t: np.ndarray, clamp: float = 1e-7) -> float:
    """Mean binary cross-entropy of probabilities vs a binary target."""
    p = np.asarray(p, dtype=np.float64)
    t = np.asarray(t).astype(np.float64)
    if p.shape != t.shape:
        raise InputError(f"shape mismatch {p.shape} vs {t.shape}")
    p = np.clip(p, clamp, 1.0 - clamp)
    return float(-np.mean(t * np.log(p) + (1.0 - t) * np.log(1.0 - p)))


def focal_tversky(p: np.ndarray, t: np.ndarray, alpha: float = 0.7,
                  beta: float = 0.3, gamma: float = 0.75,
                  eps: float = 1e-7) -> float:
    """Focal Tversky loss with soft counts: ``(1 - TP/(TP + a*FN + b*FP + eps))^g``."""
    p = np.asarray(p, dtype=np.float64)
    t = np.asarray(t).astype(np.float64)
    if p.shape != t.shape:
        raise InputError(f"shape mismatch {p.shape} vs {t.shape}")
    tp = float((p * t).sum())
    fn = float(((1.0 - p) * t).sum())
    fp = float((p * (1.0 - t)).sum())
    ti = tp / (tp + alpha * fn + beta * fp + eps)
    return float((1.0 - ti) ** gamma)


# --- regularized incomplete beta, for the paired t-test ---

def _beta_cf(a: float, b: float, x: float) -> float:
    """Lentz continued fraction for the incomplete beta function."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return h


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def t_sf_two_sided(t_stat: float, df: int) -> float:
    """Two-sided p-value of a t statistic with ``df`` degrees of freedom."""
    if df < 1:
        raise InputError("degrees of freedom must be >= 1")
    x = df / (df + t_stat * t_stat)
    return betainc_reg(df / 2.0, 0.5, x)


@dataclass(frozen=True)
class AgreementReport:
    """Bland-Altman bias and limits of agreement plus a paired t-test."""

    bias: float
    sd: float
    loa_low: float
    loa_high: float
    t_statistic: float
    p_value: float
    n: int
    degenerate: bool = False


def bland_altman(a: np.ndarray, b: np.ndarray) -> AgreementReport:
    """Agreement of two paired series: bias = mean(a - b), LOA = bias -/+ 1.96 sd."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise InputError("series lengths differ")
    n = a.size
    if n < 2:
        raise InputError("need at least 2 pairs")
    d = a - b
    bias = float(np.mean(d))
    sd = float(np.std(d, ddof=1))
    if sd == 0.0:
        p = 1.0 if bias == 0.0 else 0.0
        return AgreementReport(bias, 0.0, bias, bias, float("nan"), p, n,
                               degenerate=True)
    t_stat = bias / (sd / math.sqrt(n))
    p = t_sf_two_sided(t_stat, n - 1)
    return AgreementReport(bias, sd, bias - 1.96 * sd, bias + 1.96 * sd,
                           t_stat, p, n)
