# Dependencies
import numpy as np
import numpy.typing as npt
from scipy.linalg import block_diag

# Top-Level Imports
from chantrackkit.data_classes import ModelParams, PathObservations, QuantMode
from chantrackkit._errors import DimensionError, DomainError
from chantrackkit.em import PosteriorStats


class DenseGaussianPosterior:
    """
    Exact joint posterior of the stacked channel [h_1; ...; h_M].

    Parameters
    ----------
    mean: np.ndarray
        Length M*N posterior mean.
    cov: np.ndarray
        (M*N) x (M*N) Hermitian posterior covariance.
    num_blocks: int
        M.
    """

    def __init__(self, mean: npt.NDArray, cov: npt.NDArray, num_blocks: int):
        self.mean = np.asarray(mean, dtype=np.complex128)
        self.cov = np.asarray(cov, dtype=np.complex128)
        self.num_blocks = num_blocks
        self._validate()

    @property
    def num_coeffs(self) -> int:
        return self.mean.size // self.num_blocks

    def _block(self, m: int) -> slice:
        N = self.num_coeffs
        return slice(m * N, (m + 1) * N)

    def block_mean(self, m: int) -> npt.NDArray[np.complex128]:
        return self.mean[self._block(m)]

    def block_cov(self, m: int, n: int | None = None) -> npt.NDArray:
        n = m if n is None else n
        return self.cov[self._block(m), self._block(n)]

    @property
    def means(self) -> npt.NDArray[np.complex128]:
        return self.mean.reshape(self.num_blocks, -1)

    @property
    def variances(self) -> npt.NDArray[np.float64]:
        return np.real(np.diag(self.cov)).reshape(self.num_blocks, -1)

    def theta(self, m: int) -> npt.NDArray[np.complex128]:
        """Full second moment E[h_m h_m^H]."""
        h = self.block_mean(m)
        return self.block_cov(m) + np.outer(h, h.conj())

    def pi(self, m: int) -> npt.NDArray[np.complex128]:
        """Full cross moment E[h_{m-1} h_m^H]."""
        return self.block_cov(m - 1, m) + np.outer(
            self.block_mean(m - 1), self.block_mean(m).conj()
        )

    def posterior_stats(self) -> PosteriorStats:
        """Diagonal statistics in the form the M-step consumes."""
        pi = np.zeros_like(self.means)
        for m in range(1, self.num_blocks):
            pi[m] = np.diag(self.pi(m))
        return PosteriorStats(self.means, self.variances, pi)

    def _validate(self):
        if self.cov.shape != (self.mean.size, self.mean.size):
            raise DimensionError("Covariance does not match the mean")
        if self.mean.size % self.num_blocks:
            raise DimensionError("Mean length is not a multiple of num_blocks")


def ar_prior_covariance(params: ModelParams, num_blocks: int) -> npt.NDArray:
    """
    Covariance of the stacked stationary AR(1) path,
    alpha^|m - m'| Lambda in block (m, m').
    """
    idx = np.arange(num_blocks)
    temporal = params.alpha ** np.abs(idx[:, None] - idx[None, :])
    return np.kron(temporal, np.diag(params.lam))


def lmmse_posterior(
    y: npt.ArrayLike,
    B: npt.NDArray,
    prior_mean: npt.ArrayLike,
    prior_cov: npt.ArrayLike,
    noise_var: float,
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.complex128]]:
    """
    Posterior of x ~ CN(prior_mean, prior_cov) given y = B x + CN(0, noise_var I).
    A 1D `prior_cov` is read as a diagonal.
    """
    K = np.asarray(prior_cov)
    if K.ndim == 1:
        K = np.diag(K)
    mu = np.asarray(prior_mean, dtype=np.complex128)
    S = B @ K @ B.conj().T + noise_var * np.eye(B.shape[0])
    gain = np.linalg.solve(S, B @ K).conj().T
    mean = mu + gain @ (np.asarray(y) - B @ mu)
    cov = K - gain @ B @ K
    return mean, 0.5 * (cov + cov.conj().T)


def exact_gaussian_posterior(
    obs: PathObservations, params: ModelParams
) -> DenseGaussianPosterior:
    """
    Exact posterior of all blocks for unquantized observations, by direct
    conditioning of the joint Gaussian.
    """
    if obs.quantizer.mode != QuantMode.NONE:
        raise DomainError("The dense posterior exists only without quantization")
    M = obs.num_blocks
    K = ar_prior_covariance(params, M)
    H = block_diag(*obs.B)
    mean, cov = lmmse_posterior(
        obs.y.reshape(-1), H, np.zeros(K.shape[0]), K, obs.noise_var
    )
    return DenseGaussianPosterior(mean, cov, M)


def _kalman_filter(ys, Bs, params, noise_var):
    N = params.num_antennas
    F = params.alpha * np.eye(N)
    Q = (1 - params.alpha**2) * np.diag(params.lam)
    xs, Ps, xps, Pps = [], [], [], []
    x_pred = np.zeros(N, dtype=np.complex128)
    P_pred = np.diag(params.lam).astype(np.complex128)
    for m, (y, B) in enumerate(zip(ys, Bs)):
        if m > 0:
            x_pred = F @ xs[-1]
            P_pred = F @ Ps[-1] @ F.T + Q
        x, P = lmmse_posterior(y, B, x_pred, P_pred, noise_var)
        xps.append(x_pred)
        Pps.append(P_pred)
        xs.append(x)
        Ps.append(P)
    return np.array(xs), np.array(Ps), np.array(xps), np.array(Pps)


def forward_backward_smoother(
    obs: PathObservations, params: ModelParams
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.complex128]]:
    """
    Kalman filter followed by a Rauch-Tung-Striebel pass over the block
    chain. Requires lambda > 0 everywhere.

    Returns
    -------
    means: np.ndarray
        M x N smoothed means.
    covs: np.ndarray
        M x N x N smoothed covariances.
    """
    if obs.quantizer.mode != QuantMode.NONE:
        raise DomainError("The smoother needs unquantized observations")
    xs, Ps, xps, Pps = _kalman_filter(obs.y, obs.B, params, obs.noise_var)
    F = params.alpha * np.eye(params.num_antennas)
    x_s, P_s = xs.copy(), Ps.copy()
    for m in range(obs.num_blocks - 2, -1, -1):
        G = np.linalg.solve(Pps[m + 1].T, (Ps[m] @ F.T).T).T
        x_s[m] = xs[m] + G @ (x_s[m + 1] - xps[m + 1])
        P_s[m] = Ps[m] + G @ (P_s[m + 1] - Pps[m + 1]) @ G.conj().T
    return x_s, P_s


def kalman_filter_reduced(
    ys: npt.ArrayLike,
    A: npt.NDArray,
    params: ModelParams,
    noise_var: float,
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.float64]]:
    """
    Causal Kalman filter on the reduced model w_m = alpha w_{m-1} + u_m,
    y_m = A w_m + n_m with a fixed measurement matrix A.

    Returns
    -------
    means: np.ndarray
        M x K filtered means.
    variances: np.ndarray
        M x K diagonals of the filtered covariances.
    """
    ys = np.asarray(ys)
    xs, Ps, _, _ = _kalman_filter(ys, [A] * len(ys), params, noise_var)
    return xs, np.real(np.diagonal(Ps, axis1=1, axis2=2))
