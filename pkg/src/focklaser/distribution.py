"""Photon-number distributions and shape diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["PhotonDistribution", "tv_distance", "find_modes"]


@dataclass(frozen=True)
class PhotonDistribution:
    """A normalized probability vector over photon number n = 0..n_max.

    Construct through :meth:`from_probs`, which validates positivity and
    normalization.  Mean/variance/Fano/entropy are derived on the fly and are
    consistent with ``probs`` by construction.
    """

    probs: np.ndarray

    # numerical slack allowed on the stored normalization
    NORM_TOL = 1e-12

    @classmethod
    def from_probs(cls, probs, renormalize: bool = True) -> "PhotonDistribution":
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValidationError("probs must be a non-empty 1-d array")
        if np.any(p < 0):
            neg = p.min()
            if neg < -1e-12 * max(p.max(), 1e-300):
                raise ValidationError(f"negative probability {neg:.3e}")
            p = np.clip(p, 0.0, None)
        s = p.sum()
        if s <= 0:
            raise ValidationError("probability vector sums to zero")
        if renormalize:
            p = p / s
        elif abs(s - 1.0) > cls.NORM_TOL:
            raise ValidationError(f"probabilities sum to {s!r}, not 1")
        p.flags.writeable = False
        return cls(p)

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.probs.size)

    @property
    def n_max(self) -> int:
        return self.probs.size - 1

    @property
    def mean(self) -> float:
        return float(np.dot(self.n, self.probs))

    @property
    def variance(self) -> float:
        m = self.mean
        return float(np.dot((self.n - m) ** 2, self.probs))

    @property
    def std(self) -> float:
        return float(np.sqrt(self.variance))

    @property
    def fano(self) -> float:
        """Variance/mean; NaN for the vacuum (mean = 0)."""
        m = self.mean
        return float(self.variance / m) if m > 0 else float("nan")

    @property
    def entropy(self) -> float:
        """Shannon entropy -sum p ln p (diagnostic)."""
        p = self.probs[self.probs > 0]
        return float(-np.dot(p, np.log(p)))

    def extended(self, n_max: int) -> np.ndarray:
        """probs zero-padded (or raising if truncating) to length n_max+1."""
        if n_max < self.n_max:
            tail = self.probs[n_max + 1:].sum()
            if tail > 1e-12:
                raise ValidationError(
                    f"cannot shorten distribution: tail mass {tail:.2e}")
            return self.probs[: n_max + 1]
        out = np.zeros(n_max + 1)
        out[: self.probs.size] = self.probs
        return out

    def __len__(self) -> int:
        return self.probs.size


def tv_distance(p: PhotonDistribution | np.ndarray,
                q: PhotonDistribution | np.ndarray) -> float:
    """Total-variation distance (1/2)*sum |p_n - q_n|, padding the shorter."""
    pa = p.probs if isinstance(p, PhotonDistribution) else np.asarray(p, float)
    qa = q.probs if isinstance(q, PhotonDistribution) else np.asarray(q, float)
    m = max(pa.size, qa.size)
    a = np.zeros(m)
    b = np.zeros(m)
    a[: pa.size] = pa
    b[: qa.size] = qa
    return 0.5 * float(np.abs(a - b).sum())


def find_modes(probs: np.ndarray, rel_height: float = 1e-3,
               min_separation: int = 5, min_prominence: float = 2.0) -> list[int]:
    """Indices of distinct local maxima of a probability vector.

    A candidate is a local maximum above ``rel_height`` of the global peak.
    Candidates closer than ``min_separation`` or not separated by a dip of at
    least ``min_prominence`` (peak/valley ratio on the shallow side) are
    merged into the taller one; this suppresses the fast Laguerre wiggles that
    decorate the anharmonic shoulder.
    """
    p = np.asarray(probs, float)
    if p.size == 0:
        return []
    pm = p / p.max()
    cand = [i for i in range(p.size)
            if pm[i] > rel_height
            and (i == 0 or pm[i] > pm[i - 1])
            and (i == p.size - 1 or pm[i] >= pm[i + 1])]
    cand.sort(key=lambda i: pm[i], reverse=True)
    kept: list[int] = []
    for i in cand:
        ok = True
        for j in kept:
            lo, hi = min(i, j), max(i, j)
            valley = pm[lo: hi + 1].min()
            if hi - lo < min_separation or valley * min_prominence > min(pm[i], pm[j]):
                ok = False
                break
        if ok:
            kept.append(i)
    return sorted(kept)
