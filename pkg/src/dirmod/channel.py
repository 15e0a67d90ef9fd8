"""Channel generation, AWGN, and the real/imaginary stacking transform.

Every design problem in this package works on the real stack of the complex
downlink: for w~ = [Re(w); Im(w)],

    Re(H w) = H1 w~     with  H1 = [Re(H), -Im(H)]
    Im(H w) = H2 w~     with  H2 = [Im(H),  Re(H)]

and ||w~||^2 = ||w||^2, so solving in the 2*N_t real variables loses
nothing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DirmodError


def as_generator(seed) -> np.random.Generator:
    """Accept an int seed, a SeedSequence, a Generator, or None."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def rayleigh(rows: int, cols: int, seed=None) -> np.ndarray:
    """i.i.d. CN(0, 1) matrix: real and imaginary parts N(0, 1/2) each."""
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be >= 1, got {rows}x{cols}")
    rng = as_generator(seed)
    return (
        rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2.0)


def ula_los(angles_deg, n_t: int, spacing: float = 0.5) -> np.ndarray:
    """Line-of-sight rows for a uniform linear array.

    Row r is the steering vector exp(i*2*pi*spacing*k*cos(theta_r)),
    k = 0..n_t-1, with element spacing in wavelengths (default half).
    """
    if n_t < 1:
        raise ValueError(f"n_t must be >= 1, got {n_t}")
    if spacing <= 0:
        raise ValueError(f"element spacing must be > 0, got {spacing}")
    theta = np.deg2rad(np.asarray(angles_deg, dtype=float)).reshape(-1, 1)
    k = np.arange(n_t).reshape(1, -1)
    return np.exp(2j * np.pi * spacing * k * np.cos(theta))


def ring_los(angles_deg, n_t: int, radius: float = 0.5) -> np.ndarray:
    """Line-of-sight rows for a uniform circular (ring) array.

    Row r is exp(i*2*pi*radius*cos(theta_r - 2*pi*k/n_t)), k = 0..n_t-1,
    radius in wavelengths.  Unlike a linear array -- whose response is
    mirror-symmetric about the array axis, so angles theta and -theta are
    indistinguishable -- a ring resolves the full circle, which a
    multi-user azimuth scenario with users in all quadrants needs.
    """
    if n_t < 1:
        raise ValueError(f"n_t must be >= 1, got {n_t}")
    if radius <= 0:
        raise ValueError(f"ring radius must be > 0, got {radius}")
    theta = np.deg2rad(np.asarray(angles_deg, dtype=float)).reshape(-1, 1)
    phi = 2.0 * np.pi * np.arange(n_t).reshape(1, -1) / n_t
    return np.exp(2j * np.pi * radius * np.cos(theta - phi))


def awgn(x, sigma2: float, seed=None) -> np.ndarray:
    """Add circularly-symmetric complex Gaussian noise CN(0, sigma2)."""
    if sigma2 < 0:
        raise ValueError(f"noise variance must be >= 0, got {sigma2}")
    x = np.asarray(x, dtype=complex)
    if sigma2 == 0:
        return x.copy()
    rng = as_generator(seed)
    n = (
        rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
    ) * np.sqrt(sigma2 / 2.0)
    return x + n


@dataclass(frozen=True)
class StackedChannel:
    """Real stacking H1 = [Re(H), -Im(H)], H2 = [Im(H), Re(H)] of one H."""

    h1: np.ndarray
    h2: np.ndarray


def stack(h: np.ndarray) -> StackedChannel:
    h = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise ValueError("channel matrix has non-finite entries")
    h1 = np.hstack([h.real, -h.imag])
    h2 = np.hstack([h.imag, h.real])
    h1.setflags(write=False)
    h2.setflags(write=False)
    return StackedChannel(h1=h1, h2=h2)


def real_stack(w: np.ndarray) -> np.ndarray:
    """w -> w~ = [Re(w); Im(w)]."""
    w = np.asarray(w, dtype=complex).ravel()
    return np.concatenate([w.real, w.imag])


def complex_from_stack(w_tilde: np.ndarray) -> np.ndarray:
    """Inverse of real_stack."""
    w_tilde = np.asarray(w_tilde, dtype=float).ravel()
    if w_tilde.size % 2:
        raise ValueError(f"stacked vector length must be even, got {w_tilde.size}")
    n = w_tilde.size // 2
    return w_tilde[:n] + 1j * w_tilde[n:]


@dataclass(frozen=True)
class ChannelSet:
    """One quasi-static block: users' and eavesdropper's channels."""

    h_users: np.ndarray
    h_eve: np.ndarray
    user_antenna_counts: tuple = field(default=())
    seed: object = None

    def __post_init__(self):
        h_u = np.asarray(self.h_users, dtype=complex)
        h_e = np.asarray(self.h_eve, dtype=complex)
        if h_u.ndim != 2 or h_e.ndim != 2:
            raise ValueError("channel matrices must be 2-D")
        if h_u.shape[1] != h_e.shape[1]:
            raise ValueError(
                f"transmit-antenna mismatch: users see {h_u.shape[1]}, "
                f"eavesdropper sees {h_e.shape[1]}"
            )
        counts = tuple(int(c) for c in self.user_antenna_counts) or (h_u.shape[0],)
        if sum(counts) != h_u.shape[0]:
            raise ValueError(
                f"user antenna counts {counts} do not sum to {h_u.shape[0]} rows"
            )
        if not (np.all(np.isfinite(h_u)) and np.all(np.isfinite(h_e))):
            raise ValueError("channel matrices have non-finite entries")
        object.__setattr__(self, "h_users", h_u)
        object.__setattr__(self, "h_eve", h_e)
        object.__setattr__(self, "user_antenna_counts", counts)

    @property
    def n_t(self) -> int:
        return self.h_users.shape[1]

    @property
    def n_users(self) -> int:
        return self.h_users.shape[0]

    @property
    def n_eve(self) -> int:
        return self.h_eve.shape[0]


def draw_channel_set(n_t, n_e, user_antenna_counts, seed=None) -> ChannelSet:
    """Independent CN(0,1) blocks for users and eavesdropper."""
    counts = tuple(int(c) for c in user_antenna_counts)
    if not counts or any(c < 1 for c in counts):
        raise ValueError(f"antenna counts must be positive, got {counts}")
    rng = as_generator(seed)
    return ChannelSet(
        h_users=rayleigh(sum(counts), n_t, rng),
        h_eve=rayleigh(n_e, n_t, rng),
        user_antenna_counts=counts,
        seed=seed,
    )


def dump_channel_csv(h: np.ndarray, path) -> None:
    """Write a complex matrix as row-major re,im pairs (one row per line)."""
    h = np.asarray(h, dtype=complex)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in h:
            flat = []
            for z in row:
                flat.extend((repr(float(z.real)), repr(float(z.imag))))
            writer.writerow(flat)


def load_channel_csv(path) -> np.ndarray:
    """Inverse of dump_channel_csv."""
    rows = []
    with open(path, newline="") as fh:
        for line in csv.reader(fh):
            if not line:
                continue
            vals = [float(v) for v in line]
            if len(vals) % 2:
                raise DirmodError(f"{path}: odd number of columns, not re,im pairs")
            rows.append([complex(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)])
    if not rows:
        raise DirmodError(f"{path}: empty channel file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DirmodError(f"{path}: ragged rows")
    return np.array(rows, dtype=complex)
