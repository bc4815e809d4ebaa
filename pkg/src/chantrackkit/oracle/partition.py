# Dependencies
import numpy as np
import numpy.typing as npt


def exhaustive_two_means(lam: npt.ArrayLike) -> npt.NDArray[np.intp]:
    """
    Upper group of the threshold cut of sorted `lam` with the smallest
    within-cluster sum of squares.
    """
    lam = np.asarray(lam, dtype=np.float64)
    order = np.argsort(lam, kind="stable")
    values = lam[order]
    best_cut, best_sse = 1, np.inf
    for cut in range(1, values.size):
        low, high = values[:cut], values[cut:]
        sse = np.sum((low - low.mean()) ** 2) + np.sum((high - high.mean()) ** 2)
        if sse < best_sse:
            best_cut, best_sse = cut, sse
    return np.sort(order[best_cut:])
