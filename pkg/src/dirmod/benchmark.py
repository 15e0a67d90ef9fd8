"""Conventional ZF transmit precoding, the head-to-head baseline.

The transmitter applies W = H'(HH')^{-1} once per channel block and sends
W(beta s); users receive beta s + noise directly.  Because W depends only
on the channel, an eavesdropper with N_e >= N_U can invert the effective
channel H_E W and read the symbols too -- the property the symbol-level
designs are built to break.  beta plays the role sqrt(gamma) has there,
and matched comparisons couple beta^2 = gamma.
"""

from __future__ import annotations

import numpy as np

from .errors import CapabilityError, NumericalError
from .eavesdropper import mmse_gain

_RANK_TOL = 1e-10


def zf_transmit(h_users: np.ndarray) -> np.ndarray:
    """Right inverse W = H'(HH')^{-1} of the user channel."""
    h_users = np.asarray(h_users, dtype=complex)
    n_users, n_t = h_users.shape
    if n_t < n_users:
        raise CapabilityError(
            f"ZF transmit precoding needs N_t >= N_U (got {n_t} < {n_users})"
        )
    gram = h_users @ h_users.conj().T
    sig = np.linalg.svd(h_users, compute_uv=False)
    if sig[-1] <= _RANK_TOL * sig[0]:
        raise NumericalError(
            f"user channel is rank deficient (sigma_min/sigma_max = "
            f"{sig[-1] / sig[0]:.3e}); no right inverse"
        )
    return h_users.conj().T @ np.linalg.inv(gram)


def transmit(w_mat: np.ndarray, symbols: np.ndarray, beta: float) -> np.ndarray:
    """Antenna-domain signal W (beta s)."""
    return w_mat @ (beta * np.asarray(symbols, dtype=complex))


def bench_eve_zf(h_eve: np.ndarray, w_mat: np.ndarray,
                 y_e: np.ndarray) -> np.ndarray:
    """Eavesdropper ZF on the effective channel: recovers beta s directly.

    Unlike the symbol-level designs there is no w to estimate first --
    the block precoder is channel-only, so inverting H_E W exposes the
    symbols themselves.  Needs N_e >= N_U.
    """
    h_eve = np.asarray(h_eve, dtype=complex)
    effective = h_eve @ w_mat
    n_e, n_users = effective.shape
    if n_e < n_users:
        raise CapabilityError(
            f"benchmark eavesdropping needs N_e >= N_U (got {n_e} < {n_users})"
        )
    gram = effective.conj().T @ effective
    try:
        return np.linalg.solve(gram, effective.conj().T @ y_e)
    except np.linalg.LinAlgError:
        raise NumericalError(
            f"effective channel Gram singular (cond ~ {np.linalg.cond(gram):.3e})"
        ) from None


def bench_eve_mmse(h_eve, w_mat, y_e, c_w, sigma2: float,
                   form: str = "standard") -> np.ndarray:
    """MMSE on the effective channel H_E W; C_w here is N_U x N_U.

    Under i.i.d. uniform PSK symbols the transmitted vector beta s has
    covariance beta^2 I, so callers normally pass exactly that.
    """
    h_eve = np.asarray(h_eve, dtype=complex)
    c_w = np.asarray(c_w, dtype=complex)
    n_users = w_mat.shape[1]
    if c_w.shape != (n_users, n_users):
        raise ValueError(
            f"benchmark C_w must be N_U x N_U ({n_users}), got {c_w.shape}"
        )
    return mmse_gain(h_eve @ w_mat, c_w, sigma2, form=form) @ np.asarray(
        y_e, dtype=complex
    )
