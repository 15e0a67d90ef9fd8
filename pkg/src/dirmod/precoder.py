"""Symbol-level precoder designs for the multi-user MIMO downlink.

Three designs share one pipeline.  With per-antenna M-PSK targets s and
stacked real channel blocks H1 = [Re H, -Im H], H2 = [Im H, Re H]:

* power-min, fixed phase -- the received phase at every user antenna is
  pinned to its symbol's phase through A Re(Hw) - Im(Hw) = 0 with
  A = diag(tan arg s).  An orthonormal basis E of that matrix's null
  space reparameterizes w_tilde = E lam, leaving
      min ||lam||^2   s.t.   B lam >= sqrt(gamma) s_r,
  B = Re(S) H1 E,  s_r = Re(s) o Re(s).
* power-min, relaxed phase -- the received point may fall anywhere in its
  symbol's detection wedge (scaled by sqrt(gamma)); per-antenna phases are
  absorbed into the channel rows so a single wedge geometry serves all
  antennas, giving 2 N_U linear constraints directly on w_tilde.
* signal-level-min -- same constraint cone as fixed phase, but the
  objective ||H w||^2 (weight Q = E'(H1'H1 + H2'H2)E) minimizes what the
  users -- and hence any eavesdropper -- can overhear beyond the decoding
  threshold.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

from .channel import complex_from_stack, stack
from .errors import DirmodError, InfeasibleDesignError
from .modulation import Constellation, RelaxedRegion, relaxed_region, tan_of_phase
from . import solvers

_RANK_TOL = 1e-10
PHASE_TOL = 1e-6          # radians, feasibility verdict
SLACK_TOL_FACTOR = 1e-6   # x sqrt(gamma), feasibility verdict


class DesignMode(enum.Enum):
    POWER_FIXED = "fixed"
    POWER_RELAXED = "relaxed"
    SIGNAL_LEVEL = "signal-level"

    @classmethod
    def parse(cls, name) -> "DesignMode":
        if isinstance(name, cls):
            return name
        for mode in cls:
            if mode.value == name:
                return mode
        raise DirmodError(
            f"unknown design mode {name!r}; expected one of "
            f"{[m.value for m in cls]}"
        )


@dataclass(frozen=True)
class DesignProblem:
    """One symbol vector's design, reduced to  min x'Wx s.t. Gx >= t."""

    mode: DesignMode
    h_users: np.ndarray          # complex N_U x N_t
    symbols: np.ndarray          # complex N_U, unit modulus
    gamma: float                 # linear SNR threshold
    g_mat: np.ndarray            # constraint matrix (B or B1)
    target: np.ndarray           # right-hand side
    e_basis: np.ndarray          # null-space basis (identity when unused)
    rank: int                    # r' of the phase-equality matrix
    weight: np.ndarray | None = None        # Q, signal-level only
    region: RelaxedRegion | None = None     # wedge geometry, relaxed only
    reference: complex = 1.0 + 0.0j         # s0, relaxed only

    @property
    def n_t(self) -> int:
        return self.h_users.shape[1]

    @property
    def n_users(self) -> int:
        return self.h_users.shape[0]

    @property
    def free_dimensions(self) -> int:
        """2 N_t - r', the dimension the solver actually works in."""
        return self.e_basis.shape[1]


@dataclass(frozen=True)
class ConstraintReport:
    max_phase_error: float | None
    min_slack: float
    feasible: bool


@dataclass(frozen=True)
class PrecoderSolution:
    w: np.ndarray
    objective: float
    solver_used: str
    iterations: int
    report: ConstraintReport
    mode: DesignMode


def check_feasibility(n_t: int, rank: int) -> bool:
    """Null-space existence condition: 2 N_t - r' > 0."""
    return 2 * n_t - rank > 0


def null_basis(a_diag, h1, h2):
    """Orthonormal basis of null(diag(a) H1 - H2) and that matrix's rank.

    The rank r' counts singular values above 1e-10 x the largest; an empty
    null space means no precoder can pin all received phases and raises
    InfeasibleDesignError.
    """
    a_diag = np.asarray(a_diag, dtype=float)
    m = a_diag[:, np.newaxis] * h1 - h2
    _, sig, vt = np.linalg.svd(m, full_matrices=True)
    top = float(sig[0]) if sig.size else 0.0
    rank = int(np.sum(sig > _RANK_TOL * max(top, 1e-300)))
    n_t2 = h1.shape[1]
    if n_t2 - rank <= 0:
        raise InfeasibleDesignError(
            f"phase constraints leave no free directions "
            f"(2 N_t = {n_t2}, rank = {rank}); need N_t > rank/2"
        )
    return vt[rank:].T.copy(), rank


def _validated(h_users, symbols, gamma):
    h_users = np.asarray(h_users, dtype=complex)
    symbols = np.asarray(symbols, dtype=complex)
    if h_users.ndim != 2 or h_users.shape[0] == 0:
        raise ValueError("h_users must be a nonempty N_U x N_t matrix")
    if symbols.shape != (h_users.shape[0],):
        raise ValueError(
            f"need one symbol per user antenna: {symbols.shape} vs "
            f"{h_users.shape[0]} rows"
        )
    if np.max(np.abs(np.abs(symbols) - 1.0)) > 1e-9:
        raise ValueError("symbols must be unit modulus (PSK)")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    return h_users, symbols, float(gamma)


def build_power_min_fixed(h_users, symbols, gamma) -> DesignProblem:
    """Fixed-phase power minimization in reduced null-space form."""
    h_users, symbols, gamma = _validated(h_users, symbols, gamma)
    stacked = stack(h_users)
    alpha = tan_of_phase(symbols)
    e_basis, rank = null_basis(alpha, stacked.h1, stacked.h2)
    re_s = np.real(symbols)
    b_mat = (re_s[:, np.newaxis] * stacked.h1) @ e_basis
    s_r = re_s * re_s
    return DesignProblem(
        mode=DesignMode.POWER_FIXED,
        h_users=h_users,
        symbols=symbols,
        gamma=gamma,
        g_mat=b_mat,
        target=np.sqrt(gamma) * s_r,
        e_basis=e_basis,
        rank=rank,
    )


def build_signal_level_min(h_users, symbols, gamma) -> DesignProblem:
    """Same cone as fixed phase, objective ||H_U w||^2 (weight Q)."""
    base = build_power_min_fixed(h_users, symbols, gamma)
    stacked = stack(h_users)
    e_basis = base.e_basis
    gram = stacked.h1.T @ stacked.h1 + stacked.h2.T @ stacked.h2
    q = e_basis.T @ gram @ e_basis
    q = 0.5 * (q + q.T)
    return DesignProblem(
        mode=DesignMode.SIGNAL_LEVEL,
        h_users=base.h_users,
        symbols=base.symbols,
        gamma=base.gamma,
        g_mat=base.g_mat,
        target=base.target,
        e_basis=e_basis,
        rank=base.rank,
        weight=q,
    )


def build_power_min_relaxed(h_users, symbols, gamma,
                            constellation: Constellation) -> DesignProblem:
    """Relaxed-phase power minimization, wedge constraints on w_tilde.

    Each antenna's wedge is mapped onto the reference symbol's wedge by
    rotating its channel row: h_n <- h_n * s0 * conj(s_n).  The rotated
    received value then has to satisfy the two reference half-plane
    constraints, stacked as B1 w_tilde >= a.
    """
    h_users, symbols, gamma = _validated(h_users, symbols, gamma)
    s0 = np.exp(1j * constellation.phase_offset)
    region = relaxed_region(s0, constellation.order, gamma)
    rotated = h_users * (s0 * np.conj(symbols))[:, np.newaxis]
    stacked = stack(rotated)
    b1 = np.vstack([
        stacked.h2 - region.b1 * stacked.h1,
        region.b2 * stacked.h1 - stacked.h2,
    ])
    n_users = h_users.shape[0]
    a_vec = np.concatenate([
        np.full(n_users, region.a1),
        np.full(n_users, -region.a2),
    ])
    n_t2 = 2 * h_users.shape[1]
    return DesignProblem(
        mode=DesignMode.POWER_RELAXED,
        h_users=h_users,
        symbols=symbols,
        gamma=gamma,
        g_mat=b1,
        target=a_vec,
        e_basis=np.eye(n_t2),
        rank=0,
        region=region,
        reference=complex(s0),
    )


def assemble(lam, e_basis, n_t: int) -> np.ndarray:
    """w from solver output: w_tilde = E lam, then complex halves."""
    lam = np.asarray(lam, dtype=float)
    e_basis = np.asarray(e_basis, dtype=float)
    if lam.shape != (e_basis.shape[1],):
        raise ValueError(
            f"lambda length {lam.shape} does not match basis columns "
            f"{e_basis.shape[1]}"
        )
    w_tilde = e_basis @ lam
    if w_tilde.shape[0] != 2 * n_t:
        raise ValueError("basis rows must equal 2 N_t")
    return complex_from_stack(w_tilde)


def verify(w, h_users, symbols, gamma, mode, region=None, reference=1.0 + 0.0j,
           phase_tol: float = PHASE_TOL,
           slack_tol: float | None = None) -> ConstraintReport:
    """Constraint report for a candidate precoder.

    Fixed-phase and signal-level report the worst received-phase error and
    the least SNR-constraint slack; relaxed reports the least wedge slack
    (phase error is meaningless there and comes back as None).
    """
    mode = DesignMode.parse(mode)
    h_users = np.asarray(h_users, dtype=complex)
    symbols = np.asarray(symbols, dtype=complex)
    w = np.asarray(w, dtype=complex)
    gamma = float(gamma)
    if slack_tol is None:
        slack_tol = SLACK_TOL_FACTOR * np.sqrt(gamma)
    received = h_users @ w

    if mode is DesignMode.POWER_RELAXED:
        if region is None:
            raise ValueError("relaxed verification needs the wedge region")
        rotated = received * reference * np.conj(symbols)
        min_slack = float(np.min(region.slacks(rotated)))
        return ConstraintReport(
            max_phase_error=None,
            min_slack=min_slack,
            feasible=min_slack >= -slack_tol,
        )

    diff = np.angle(received * np.conj(symbols))
    max_phase = float(np.max(np.abs(diff), initial=0.0))
    re_s = np.real(symbols)
    slack = re_s * np.real(received) - np.sqrt(gamma) * re_s * re_s
    min_slack = float(np.min(slack, initial=0.0))
    return ConstraintReport(
        max_phase_error=max_phase,
        min_slack=min_slack,
        feasible=max_phase <= phase_tol and min_slack >= -slack_tol,
    )


def verify_problem(problem: DesignProblem, w, **kwargs) -> ConstraintReport:
    return verify(
        w, problem.h_users, problem.symbols, problem.gamma, problem.mode,
        region=problem.region, reference=problem.reference, **kwargs,
    )


_SOLVER_NAMES = ("nnls", "iterative", "oracle")


def solve_problem(problem: DesignProblem, solver: str = "nnls",
                  penalty_cfg: solvers.PenaltyConfig | None = None):
    """Run one solver on a built problem.  Returns (lam, iterations)."""
    if solver == "nnls":
        lam, _route = solvers.nnls_design_solve(
            problem.g_mat, problem.target, weight=problem.weight
        )
        return lam, 0
    if solver == "iterative":
        lam, trace = solvers.penalty_solve(
            problem.g_mat, problem.target, cfg=penalty_cfg,
            weight=problem.weight,
        )
        return lam, trace.iterations
    if solver == "oracle":
        lam = solvers.oracle_solve(
            problem.g_mat, problem.target, weight=problem.weight
        )
        return lam, 0
    raise DirmodError(f"unknown solver {solver!r}; expected {_SOLVER_NAMES}")


def design(h_users, symbols, gamma, mode=DesignMode.POWER_FIXED,
           solver: str = "nnls",
           constellation: Constellation | None = None,
           penalty_cfg: solvers.PenaltyConfig | None = None) -> PrecoderSolution:
    """Build, solve, assemble, and verify one precoder.

    The objective reported is the one each mode minimizes: transmit power
    ||w||^2 for the two power designs, received power ||H_U w||^2 for the
    signal-level design.
    """
    mode = DesignMode.parse(mode)
    if mode is DesignMode.POWER_RELAXED:
        if constellation is None:
            raise DirmodError("relaxed design needs the constellation")
        problem = build_power_min_relaxed(h_users, symbols, gamma, constellation)
    elif mode is DesignMode.SIGNAL_LEVEL:
        problem = build_signal_level_min(h_users, symbols, gamma)
    else:
        problem = build_power_min_fixed(h_users, symbols, gamma)

    lam, iterations = solve_problem(problem, solver=solver,
                                    penalty_cfg=penalty_cfg)
    w = assemble(lam, problem.e_basis, problem.n_t)
    report = verify_problem(problem, w)
    if mode is DesignMode.SIGNAL_LEVEL:
        objective = float(np.linalg.norm(problem.h_users @ w) ** 2)
    else:
        objective = float(np.linalg.norm(w) ** 2)
    return PrecoderSolution(
        w=w,
        objective=objective,
        solver_used=solver,
        iterations=iterations,
        report=report,
        mode=mode,
    )


# ---------------------------------------------------------------------------
# reduced-problem CSV round trip, for replaying instances against oracles
# ---------------------------------------------------------------------------

def dump_reduced_csv(problem: DesignProblem, path) -> None:
    """Reduced form (G, t, W) as labeled coordinate rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["section", "row", "col", "value"])
        writer.writerow(["mode", 0, 0, problem.mode.value])
        writer.writerow(["gamma", 0, 0, repr(problem.gamma)])
        for name, mat in (("g", problem.g_mat), ("weight", problem.weight)):
            if mat is None:
                continue
            for (i, j), val in np.ndenumerate(mat):
                writer.writerow([name, i, j, repr(float(val))])
        for i, val in enumerate(problem.target):
            writer.writerow(["target", i, 0, repr(float(val))])


def load_reduced_csv(path):
    """Inverse of dump_reduced_csv: (g, target, weight, mode, gamma)."""
    cells: dict[str, dict[tuple[int, int], float]] = {}
    mode = None
    gamma = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["section", "row", "col", "value"]:
            raise DirmodError(f"not a reduced-problem CSV: header {header}")
        for section, row, col, value in reader:
            if section == "mode":
                mode = DesignMode.parse(value)
            elif section == "gamma":
                gamma = float(value)
            else:
                cells.setdefault(section, {})[(int(row), int(col))] = float(value)

    def as_array(name):
        block = cells.get(name)
        if block is None:
            return None
        rows = 1 + max(i for i, _ in block)
        cols = 1 + max(j for _, j in block)
        out = np.zeros((rows, cols))
        for (i, j), val in block.items():
            out[i, j] = val
        return out

    g = as_array("g")
    target = as_array("target")
    if g is None or target is None or mode is None or gamma is None:
        raise DirmodError("reduced-problem CSV is missing sections")
    weight = as_array("weight")
    return g, target[:, 0], weight, mode, gamma
