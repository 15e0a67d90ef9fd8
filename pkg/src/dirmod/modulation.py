"""M-PSK constellations, per-antenna detection, and wedge geometry.

The precoder designs constrain each receive antenna's signal either to the
exact phase line of its target symbol or to the symbol's detection wedge
(the sector within +/- pi/M of the symbol phase).  Both constraint families
are built from tan() of symbol phases, so constellation construction must
keep every point away from +/- pi/2 where tan blows up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidOrderError, SingularPhaseError

# Angular distance to +/- pi/2 below which tan() is treated as singular.
SINGULAR_TOL = 1e-9


def _principal(angle):
    """Map angles to the principal branch (-pi, pi]."""
    a = np.mod(np.asarray(angle, dtype=float) + np.pi, 2 * np.pi) - np.pi
    a = np.where(a == -np.pi, np.pi, a)  # mod puts the seam at -pi; fold it back
    return float(a) if a.ndim == 0 else a


def _near_tan_singularity(angles) -> bool:
    """True if any angle is within SINGULAR_TOL of +pi/2 or -pi/2."""
    a = np.atleast_1d(np.asarray(angles, dtype=float))
    return bool(
        np.any(np.abs(a - np.pi / 2) < SINGULAR_TOL)
        | np.any(np.abs(a + np.pi / 2) < SINGULAR_TOL)
    )


@dataclass(frozen=True)
class Constellation:
    """An M-PSK constellation with unit-modulus points sorted by angle.

    ``phase_offset`` is the offset actually applied; it differs from the
    requested one when the requested grid had a point on a tan singularity
    (``offset_adjusted`` records that).
    """

    order: int
    phase_offset: float
    points: np.ndarray
    offset_adjusted: bool = False

    @property
    def angles(self) -> np.ndarray:
        return np.angle(self.points)

    def index_of(self, symbol: complex, tol: float = 1e-9) -> int:
        """Index of the constellation point equal to ``symbol`` (within tol)."""
        d = np.abs(self.points - symbol)
        k = int(np.argmin(d))
        if d[k] > tol:
            raise ValueError(f"{symbol!r} is not a constellation point")
        return k

    def symbols_from_indices(self, indices) -> np.ndarray:
        return self.points[np.asarray(indices, dtype=int)]


def build_constellation(order: int, requested_offset: float = 0.0) -> Constellation:
    """Construct an M-PSK constellation, dodging tan singularities.

    If any point of the requested grid lies within 1e-9 rad of +/- pi/2 the
    offset is incremented by ``pi/order`` (half the point spacing) and the
    adjustment recorded.  For a few pathological odd orders that shift can
    land a *different* point on the singular set, so the nudge is retried
    with ``pi/(2*order)`` before giving up.
    """
    if not isinstance(order, (int, np.integer)) or order < 2:
        raise InvalidOrderError(f"M-PSK order must be an integer >= 2, got {order!r}")
    order = int(order)

    offset = float(requested_offset)
    adjusted = False
    for step in (np.pi / order, np.pi / order, np.pi / (2 * order), np.pi / (2 * order)):
        angles = _principal(offset + 2 * np.pi * np.arange(order) / order)
        if not _near_tan_singularity(angles):
            break
        offset += step
        adjusted = True
    else:
        angles = _principal(offset + 2 * np.pi * np.arange(order) / order)
        if _near_tan_singularity(angles):
            raise SingularPhaseError(
                f"could not place {order}-PSK grid away from +/-pi/2 "
                f"(requested offset {requested_offset})"
            )

    sort = np.argsort(angles)
    points = np.exp(1j * angles[sort])
    points.setflags(write=False)
    return Constellation(
        order=order,
        phase_offset=_principal(offset),
        points=points,
        offset_adjusted=adjusted,
    )


def detect(y, constellation: Constellation):
    """Nearest-point detection; ties break toward the lower index.

    Accepts a scalar sample or an array of samples; returns int or an int
    array of the same shape.
    """
    y = np.asarray(y, dtype=complex)
    d = np.abs(y[..., np.newaxis] - constellation.points)
    idx = np.argmin(d, axis=-1)  # argmin returns the first (lowest) index on ties
    return int(idx) if idx.ndim == 0 else idx


def tan_of_phase(s):
    """tan(arg(s)) -- the per-antenna phase-constraint slope alpha.

    Satisfies Re(s) * alpha - Im(s) = 0 elementwise.  Raises if any arg(s)
    sits on the tan singularity; unreachable for symbols out of
    build_constellation.
    """
    phi = np.angle(s)
    if np.any(_near_tan_singularity(phi)):
        raise SingularPhaseError(
            f"arg(s) within {SINGULAR_TOL} of +/-pi/2 (tan undefined)"
        )
    out = np.tan(phi)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class RelaxedRegion:
    """Wedge-region constants for one reference symbol at SNR gamma.

    The region for received value v is the pair of half-planes

        Im(v) >= b1 * Re(v) + a1
        Im(v) <= b2 * Re(v) + a2

    i.e. the detection wedge of the reference symbol translated out to the
    sqrt(gamma) amplitude point.
    """

    a1: float
    a2: float
    b1: float
    b2: float
    c1: float
    c2: float
    phi0: float
    order: int
    gamma: float

    def slacks(self, v) -> np.ndarray:
        """Constraint slacks (>= 0 means satisfied) for sample(s) v.

        Returns an array with the two slack families stacked along the last
        axis: [Im - b1*Re - a1, b2*Re - Im + a2].
        """
        v = np.asarray(v, dtype=complex)
        lower = v.imag - self.b1 * v.real - self.a1
        upper = self.b2 * v.real - v.imag + self.a2
        return np.stack([lower, upper], axis=-1)

    def contains(self, v, tol: float = 0.0) -> bool:
        return bool(np.all(self.slacks(v) >= -tol))


def relaxed_region(s0: complex, order: int, gamma: float) -> RelaxedRegion:
    """Region constants for reference symbol s0 of an M-PSK constellation.

    Every quantity follows the same definition block:
        c1 = sqrt(g) sin(phi0)         c2 = sqrt(g) cos(phi0)
        b1 = tan(phi0 - pi/M)          b2 = tan(phi0 + pi/M)
        a1 = c1 - sqrt((cos^-2(phi0 - pi/M) - 1) c2^2)
        a2 = -b2 * (c2 - sqrt((sin^-2(phi0 + pi/M) - 1) c1^2))

    The square roots collapse to |tan| and |cot| of the edge angles, so the
    constants are the tight translated-cone values whenever the wedge sits
    in the first quadrant (the default constellation offset pi/M keeps the
    reference wedge there for every M >= 5; 8-PSK is the main path).
    """
    if order < 2:
        raise InvalidOrderError(f"M-PSK order must be >= 2, got {order}")
    if gamma < 0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    phi0 = float(np.angle(s0))
    lo = phi0 - np.pi / order
    hi = phi0 + np.pi / order
    if _near_tan_singularity([lo, hi]):
        raise SingularPhaseError(
            f"wedge edge of s0 (phi0 = {phi0}) sits on a tan singularity"
        )
    # a2 needs 1/sin^2(hi): guard hi near 0 or +/-pi the same way
    if min(abs(_principal(hi)), abs(abs(_principal(hi)) - np.pi)) < SINGULAR_TOL:
        raise SingularPhaseError(f"sin(phi0 + pi/M) vanishes (phi0 = {phi0})")

    root_g = math.sqrt(gamma)
    c1 = root_g * math.sin(phi0)
    c2 = root_g * math.cos(phi0)
    b1 = math.tan(lo)
    b2 = math.tan(hi)
    a1 = c1 - math.sqrt((1.0 / math.cos(lo) ** 2 - 1.0) * c2 * c2)
    a2 = -b2 * (c2 - math.sqrt((1.0 / math.sin(hi) ** 2 - 1.0) * c1 * c1))
    return RelaxedRegion(
        a1=a1, a2=a2, b1=b1, b2=b2, c1=c1, c2=c2,
        phi0=phi0, order=order, gamma=float(gamma),
    )
