# Standard Libraries
from dataclasses import dataclass
import logging

# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit._errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SupportSet:
    """
    Result of the two-cluster split of the learned variances.

    Parameters
    ----------
    indices: np.ndarray
        Sorted 0-based indices assigned to the larger centroid.
    centroids: tuple[float, float]
        (larger, smaller) cluster centroids.
    degenerate: bool
        True when every variance is equal and no split exists; `indices`
        then holds every coefficient.
    """

    indices: npt.NDArray[np.intp]
    centroids: tuple[float, float]
    degenerate: bool = False

    def __len__(self) -> int:
        return self.indices.size


def kmeans_support(lam: npt.ArrayLike, max_iters: int = 100) -> SupportSet:
    """
    Two-means clustering of a variance vector.

    Centroids start at max(lam) and min(lam). Each coefficient joins the
    cluster of the nearer centroid, ties going to the larger one, and each
    centroid moves to the mean of its own cluster until the assignment stops
    changing.
    """
    lam = np.asarray(lam, dtype=np.float64)
    if lam.ndim != 1 or lam.size < 2:
        raise DomainError(f"Need at least two variances ({lam.size})")
    if np.any(lam < 0) or np.any(~np.isfinite(lam)):
        raise DomainError("Variances must be finite and non-negative")

    high, low = float(lam.max()), float(lam.min())
    if high == low:
        logger.info("All variances equal; returning the full index set")
        return SupportSet(np.arange(lam.size), (high, low), degenerate=True)

    members = np.zeros(lam.size, dtype=bool)
    for _ in range(max_iters):
        assigned = np.abs(lam - high) <= np.abs(lam - low)
        if np.array_equal(assigned, members):
            break
        members = assigned
        high = float(lam[members].mean())
        if np.any(~members):
            low = float(lam[~members].mean())
    return SupportSet(np.flatnonzero(members), (high, low))
