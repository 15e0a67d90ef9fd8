"""Adversary strategies against the symbol-level transmitter.

The eavesdropper observes y_E = H_E w + n_E and knows both channels, so
estimating the users' symbols means estimating w itself and re-projecting
it through H_U.  Three estimators are implemented: zero-forcing (needs
N_e >= N_t), linear MMSE with an empirically estimated precoder
covariance, and exhaustive maximum likelihood over a per-channel lookup
table of all M^{N_U} precoders, plus operation-count models for comparing
the strategies' costs far beyond what can be executed.

A note on the MMSE operator: the printed source formula
(H'C_w^{-1}H + C_N^{-1})^{-1} H'C_w^{-1} places the precoder covariance
where the standard LMMSE derivation has the noise covariance; as printed
it only typechecks for scalar covariances or N_e = N_t, and it collapses
to zero as the noise vanishes instead of approaching the ZF estimate.
The default here is the standard operator; ``form="verbatim"`` evaluates
the printed one without correction so both behaviors stay observable.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import rayleigh
from .errors import CapabilityError, NumericalError, TableSizeError
from .modulation import Constellation, detect
from .precoder import DesignMode, design

TABLE_CAP = 4096


@dataclass(frozen=True)
class EveObservation:
    y_e: np.ndarray       # complex N_e
    h_eve: np.ndarray     # complex N_e x N_t
    h_users: np.ndarray   # complex N_U x N_t (known to E by assumption)
    sigma2: float

    def __post_init__(self):
        if self.y_e.shape != (self.h_eve.shape[0],):
            raise ValueError("observation length must match N_e")
        if self.h_eve.shape[1] != self.h_users.shape[1]:
            raise ValueError("eavesdropper and user channels disagree on N_t")


@dataclass(frozen=True)
class WCovariance:
    c_w: np.ndarray       # complex N_t x N_t, Hermitian PSD
    mean: np.ndarray
    sample_count: int


def zf_gain(h_eve: np.ndarray) -> np.ndarray:
    """G1 = (H'H)^{-1} H'.  Demands N_e >= N_t; w is unrecoverable below."""
    h_eve = np.asarray(h_eve, dtype=complex)
    n_e, n_t = h_eve.shape
    if n_e < n_t:
        raise CapabilityError(
            f"ZF estimation needs N_e >= N_t (got {n_e} < {n_t}); "
            "the Gram matrix cannot be inverted"
        )
    gram = h_eve.conj().T @ h_eve
    try:
        return np.linalg.solve(gram, h_eve.conj().T)
    except np.linalg.LinAlgError:
        raise NumericalError(
            f"eavesdropper Gram matrix singular (cond ~ {np.linalg.cond(gram):.3e})"
        ) from None


def zf_estimate(obs: EveObservation) -> np.ndarray:
    return zf_gain(obs.h_eve) @ obs.y_e


def map_to_users(h_users: np.ndarray, w_hat: np.ndarray) -> np.ndarray:
    """What the users would have received had w_hat been sent."""
    return np.asarray(h_users, dtype=complex) @ w_hat


def estimate_c_w(h_users, gamma, constellation: Constellation,
                 mode=DesignMode.POWER_FIXED, samples: int = 256,
                 seed=None, solver: str = "nnls",
                 channel_randomized: bool = False) -> WCovariance:
    """Empirical precoder covariance under random symbol draws.

    Averages the instantaneous w w' over independently drawn symbol
    vectors on the given (fixed) channel -- the attacker knows H_U, so
    symbol randomness is the only uncertainty.  channel_randomized=True
    additionally redraws the user channel each sample for the
    ensemble-averaged variant.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples for a covariance")
    h_users = np.asarray(h_users, dtype=complex)
    mode = DesignMode.parse(mode)
    rng = np.random.default_rng(seed)
    n_users, n_t = h_users.shape
    acc = np.zeros((n_t, n_t), dtype=complex)
    mean = np.zeros(n_t, dtype=complex)
    h = h_users
    for _ in range(samples):
        if channel_randomized:
            h = rayleigh(n_users, n_t, rng)
        symbols = constellation.points[rng.integers(0, constellation.order, n_users)]
        sol = design(h, symbols, gamma, mode, solver=solver,
                     constellation=constellation)
        acc += np.outer(sol.w, sol.w.conj())
        mean += sol.w
    c_w = acc / samples
    c_w = 0.5 * (c_w + c_w.conj().T)
    return WCovariance(c_w=c_w, mean=mean / samples, sample_count=samples)


def prepare_covariance(c_w: np.ndarray):
    """Hermitian-symmetrize and, if rank-deficient, load the diagonal.

    Returns (usable matrix, delta applied); delta = 1e-8 tr(C)/N when the
    smallest eigenvalue is not safely positive, else 0.
    """
    c_w = np.asarray(c_w, dtype=complex)
    c_w = 0.5 * (c_w + c_w.conj().T)
    n = c_w.shape[0]
    eigs = np.linalg.eigvalsh(c_w)
    trace = float(np.real(np.trace(c_w)))
    if eigs[0] <= 1e-12 * max(eigs[-1], 1e-300):
        delta = 1e-8 * trace / n if trace > 0 else 1e-8
        return c_w + delta * np.eye(n), delta
    return c_w, 0.0


def mmse_gain(h_eve, c_w, sigma2: float, form: str = "standard") -> np.ndarray:
    """Linear MMSE estimator of w from y_E = H_E w + n_E.

    form="standard": (H'C_N^{-1}H + C_w^{-1})^{-1} H'C_N^{-1}, the LMMSE
    operator; approaches ZF as the noise vanishes.
    form="verbatim": the printed operator order with the covariances
    swapped.  General covariances only conform when N_e = N_t; otherwise
    C_w acts through its scalar strength tr(C_w)/N_t, the one reading the
    printed formula defines.  Kept for comparison, not correction.
    """
    h_eve = np.asarray(h_eve, dtype=complex)
    n_e, n_t = h_eve.shape
    c_w, _delta = prepare_covariance(c_w)
    if c_w.shape != (n_t, n_t):
        raise ValueError(f"C_w must be N_t x N_t ({n_t}), got {c_w.shape}")
    sigma2 = float(sigma2)
    noise = max(sigma2, 1e-30)  # sigma2 = 0 would make C_N singular
    hh = h_eve.conj().T
    if form == "standard":
        system = hh @ h_eve / noise + np.linalg.inv(c_w)
        rhs = hh / noise
    elif form == "verbatim":
        if n_e == n_t:
            cw_inv = np.linalg.inv(c_w)
            system = hh @ cw_inv @ h_eve + np.eye(n_t) / noise
            rhs = hh @ cw_inv
        else:
            strength = float(np.real(np.trace(c_w))) / n_t
            strength = max(strength, 1e-30)
            system = hh @ h_eve / strength + np.eye(n_t) / noise
            rhs = hh / strength
    else:
        raise ValueError(f"unknown MMSE form {form!r}")
    try:
        gain = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError:
        raise NumericalError(
            f"MMSE system singular (cond ~ {np.linalg.cond(system):.3e})"
        ) from None
    return gain


def mmse_estimate(obs: EveObservation, c_w, form: str = "standard") -> np.ndarray:
    return mmse_gain(obs.h_eve, c_w, obs.sigma2, form=form) @ obs.y_e


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LookupTable:
    symbol_indices: np.ndarray   # (table, N_U) ints, lexicographic
    w_table: np.ndarray          # (table, N_t) complex
    y_table: np.ndarray          # (table, N_e) complex, H_E w_i
    channel_hash: str

    def __len__(self):
        return self.w_table.shape[0]


def channel_fingerprint(h_users, h_eve, gamma, mode, order) -> str:
    mode = DesignMode.parse(mode)
    digest = hashlib.sha256()
    for mat in (h_users, h_eve):
        digest.update(np.ascontiguousarray(mat).tobytes())
    digest.update(f"{mode.value}:{float(gamma)!r}:{order}".encode())
    return digest.hexdigest()


def build_lookup(h_users, h_eve, gamma, constellation: Constellation,
                 mode=DesignMode.POWER_FIXED, cap: int = TABLE_CAP,
                 solver: str = "nnls") -> LookupTable:
    """One precoder per symbol vector, enumerated lexicographically.

    The table is tied to the exact channel pair through a fingerprint, so
    stale tables are detectable after any channel change.
    """
    h_users = np.asarray(h_users, dtype=complex)
    h_eve = np.asarray(h_eve, dtype=complex)
    mode = DesignMode.parse(mode)
    n_users = h_users.shape[0]
    required = constellation.order ** n_users
    if required > cap:
        raise TableSizeError(required, cap)
    indices = np.array(
        list(itertools.product(range(constellation.order), repeat=n_users)),
        dtype=int,
    ).reshape(required, n_users)
    w_table = np.empty((required, h_users.shape[1]), dtype=complex)
    for row, idx in enumerate(indices):
        symbols = constellation.points[idx]
        sol = design(h_users, symbols, gamma, mode, solver=solver,
                     constellation=constellation)
        w_table[row] = sol.w
    return LookupTable(
        symbol_indices=indices,
        w_table=w_table,
        y_table=w_table @ h_eve.T,
        channel_hash=channel_fingerprint(h_users, h_eve, gamma, mode,
                                         constellation.order),
    )


def brute_force_ml(y_e: np.ndarray, table: LookupTable):
    """argmin_i ||y_E - H_E w_i||; ties resolve to the lowest index."""
    residual = table.y_table - np.asarray(y_e, dtype=complex)[np.newaxis, :]
    best = int(np.argmin(np.einsum("ij,ij->i", residual, residual.conj()).real))
    return table.w_table[best], table.symbol_indices[best]


# ---------------------------------------------------------------------------
# cost models (unit-constant operation counts, for trends not wall clocks)
# ---------------------------------------------------------------------------

def lookup_table_size(order: int, n_users: int) -> int:
    """Exact M^{N_U} as a python integer (arbitrary precision)."""
    return int(order) ** int(n_users)


def complexity_estimate(method: str, *, n_t=None, n_users=None, n_e=None,
                        order=None, eps: float = 1e-6):
    """Operation-count formulas with unit constants.

    interior-point   N_t^3 ln(1/eps)         one design solve
    gradient         N_t^2 / sqrt(eps)       first-order alternative
    norm             4 N_e n + 2 N_e n^1.465 one residual norm, n = N_t
    brute-force      M^{N_U} (norm + interior-point)
    benchmark        2 N_t N_U^2 + N_U^3 + N_t N_U
    lookup           exact integer M^{N_U}
    """
    if method == "lookup":
        return lookup_table_size(order, n_users)
    if method == "interior-point":
        return n_t**3 * math.log(1.0 / eps)
    if method == "gradient":
        return n_t**2 / math.sqrt(eps)
    if method == "norm":
        return 4.0 * n_e * n_t + 2.0 * n_e * n_t**1.465
    if method == "brute-force":
        per_entry = (
            complexity_estimate("norm", n_t=n_t, n_e=n_e)
            + complexity_estimate("interior-point", n_t=n_t, eps=eps)
        )
        return lookup_table_size(order, n_users) * per_entry
    if method == "benchmark":
        return 2.0 * n_t * n_users**2 + n_users**3 + n_t * n_users
    raise ValueError(f"unknown complexity method {method!r}")
