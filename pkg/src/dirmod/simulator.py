"""Monte Carlo scenario orchestration.

One scenario point = many quasi-static channel blocks; per block the
precoder is redesigned for every drawn symbol vector (symbol-level
operation), users and eavesdropper receive their noisy observations, and
every configured attack runs on matched data.  Sweeps map a parameter
over a value list with per-point, per-trial seeded RNG streams so any row
of any CSV is bit-reproducible in isolation.

Conventions fixed here: gamma_linear = 10^(gamma_dB/10); noise variance
1 at users and eavesdropper unless overridden, so gamma_dB doubles as the
user-side SNR axis; infeasible instances are skipped and counted, never
silently resampled; the eavesdropper attempts the symbols of all users,
and its SER is averaged over all of those attempts (the same denominator
as the users' own SER, so the two are directly comparable).
"""

from __future__ import annotations

import dataclasses
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import benchmark as bench
from . import eavesdropper as eve
from .channel import awgn, draw_channel_set, ring_los, ula_los
from .errors import CapabilityError, ConfigError, DirmodError, InfeasibleDesignError
from .modulation import build_constellation, detect
from .precoder import DesignMode, design
from .solvers import PenaltyConfig

DESIGN_MODES = ("fixed", "relaxed", "signal-level", "benchmark")
SOLVERS = ("nnls", "iterative")
EVE_STRATEGIES = ("zf", "mmse", "brute-force")

CSV_COLUMNS = (
    "sweep_param", "sweep_value", "design_mode", "solver",
    "n_t", "n_users", "n_e", "order", "gamma_db", "beta2_db",
    "sigma2_users", "sigma2_eve", "channels", "symbols_per_channel",
    "designed", "infeasible", "eve_fallbacks",
    "mean_power", "mean_power_db", "mean_received_power",
    "ser_users", "ser_eve_zf", "ser_eve_mmse", "ser_eve_brute",
    "mean_iterations", "worst_phase_error", "worst_slack",
)


@dataclass(frozen=True)
class ScenarioConfig:
    n_t: int
    n_e: int
    user_antenna_counts: tuple = (1,)
    order: int = 8
    gamma_db: float = 15.56
    beta2_db: float | None = None          # defaults to gamma_db (fair coupling)
    sigma2_users: float = 1.0
    sigma2_eve: float = 1.0
    design_mode: str = "fixed"
    solver: str = "nnls"
    eve_strategies: tuple = ()
    trials: int = 200
    symbols_per_channel: int = 50
    base_seed: int = 0
    cov_samples: int = 64
    mmse_form: str = "standard"
    table_cap: int = eve.TABLE_CAP
    snr_trace: bool = False
    penalty: PenaltyConfig | None = None
    sweep_parameter: str | None = None
    sweep_values: tuple | None = None

    @property
    def n_users(self) -> int:
        return int(sum(self.user_antenna_counts))

    @property
    def gamma(self) -> float:
        return 10.0 ** (self.gamma_db / 10.0)

    @property
    def beta(self) -> float:
        db = self.gamma_db if self.beta2_db is None else self.beta2_db
        return float(np.sqrt(10.0 ** (db / 10.0)))

    def validate(self) -> "ScenarioConfig":
        if self.n_t < 1 or self.n_e < 1:
            raise ConfigError("antenna counts must be positive")
        if not self.user_antenna_counts or any(
            int(c) < 1 for c in self.user_antenna_counts
        ):
            raise ConfigError("user_antenna_counts must be positive integers")
        if self.order < 2:
            raise ConfigError("constellation order must be >= 2")
        if not np.isfinite(self.gamma_db):
            raise ConfigError("gamma_db must be finite")
        if self.sigma2_users < 0 or self.sigma2_eve < 0:
            raise ConfigError("noise variances must be nonnegative")
        if self.design_mode not in DESIGN_MODES:
            raise ConfigError(
                f"design_mode {self.design_mode!r} not in {DESIGN_MODES}"
            )
        if self.solver not in SOLVERS:
            raise ConfigError(f"solver {self.solver!r} not in {SOLVERS}")
        for strategy in self.eve_strategies:
            if strategy not in EVE_STRATEGIES:
                raise ConfigError(
                    f"eve strategy {strategy!r} not in {EVE_STRATEGIES}"
                )
        if self.trials < 1 or self.symbols_per_channel < 1:
            raise ConfigError("trials and symbols_per_channel must be >= 1")
        if "brute-force" in self.eve_strategies:
            if self.design_mode == "benchmark":
                raise ConfigError(
                    "brute force attacks the symbol-level designs; the "
                    "benchmark symbols are already exposed linearly"
                )
            required = eve.lookup_table_size(self.order, self.n_users)
            if required > self.table_cap:
                raise ConfigError(
                    f"brute force needs a {required}-entry table, cap is "
                    f"{self.table_cap}"
                )
        if self.cov_samples < 2:
            raise ConfigError("cov_samples must be >= 2")
        if bool(self.sweep_parameter) != bool(self.sweep_values):
            raise ConfigError(
                "sweep_parameter and sweep_values must be set together"
            )
        return self


@dataclass
class PointResult:
    config: ScenarioConfig
    sweep_param: str | None
    sweep_value: object
    designed: int = 0
    infeasible: int = 0
    eve_fallbacks: int = 0
    mean_power: float = 0.0
    mean_received_power: float = 0.0
    ser_users: float = 0.0
    ser_eve: dict = field(default_factory=dict)
    mean_iterations: float = 0.0
    worst_phase_error: float = 0.0
    worst_slack: float = np.inf
    snr_samples: np.ndarray | None = None

    @property
    def mean_power_db(self) -> float:
        if self.mean_power <= 0:
            return float("-inf")
        return float(10.0 * np.log10(self.mean_power))

    def to_row(self) -> dict:
        cfg = self.config
        row = {
            "sweep_param": self.sweep_param or "",
            "sweep_value": self.sweep_value if self.sweep_value is not None else "",
            "design_mode": cfg.design_mode,
            "solver": cfg.solver,
            "n_t": cfg.n_t,
            "n_users": cfg.n_users,
            "n_e": cfg.n_e,
            "order": cfg.order,
            "gamma_db": cfg.gamma_db,
            "beta2_db": cfg.gamma_db if cfg.beta2_db is None else cfg.beta2_db,
            "sigma2_users": cfg.sigma2_users,
            "sigma2_eve": cfg.sigma2_eve,
            "channels": cfg.trials,
            "symbols_per_channel": cfg.symbols_per_channel,
            "designed": self.designed,
            "infeasible": self.infeasible,
            "eve_fallbacks": self.eve_fallbacks,
            "mean_power": self.mean_power,
            "mean_power_db": self.mean_power_db,
            "mean_received_power": self.mean_received_power,
            "ser_users": self.ser_users,
            "ser_eve_zf": self.ser_eve.get("zf", ""),
            "ser_eve_mmse": self.ser_eve.get("mmse", ""),
            "ser_eve_brute": self.ser_eve.get("brute-force", ""),
            "mean_iterations": self.mean_iterations,
            "worst_phase_error": (self.worst_phase_error
                                  if np.isfinite(self.worst_phase_error)
                                  else ""),
            "worst_slack": self.worst_slack if np.isfinite(self.worst_slack) else "",
        }
        return row


def _trial_rngs(cfg: ScenarioConfig, salt: int, trial: int):
    seq = np.random.SeedSequence((cfg.base_seed, salt, trial))
    return [np.random.default_rng(child) for child in seq.spawn(5)]


def _eve_symbol_estimate(strategy, cfg, y_e, h_eve, h_users, w_true, cov,
                         table, constellation):
    """Detected symbol indices for one attack; (indices, used_fallback)."""
    if strategy == "brute-force":
        _w_hat, idx = eve.brute_force_ml(y_e, table)
        return idx, False
    obs = eve.EveObservation(y_e=y_e, h_eve=h_eve, h_users=h_users,
                             sigma2=cfg.sigma2_eve)
    fallback = False
    if strategy == "zf":
        try:
            w_hat = eve.zf_estimate(obs)
        except CapabilityError:
            # N_e < N_t: the Gram matrix is singular, w is unrecoverable in
            # general; the attacker's best effort is the least-norm estimate.
            w_hat = np.linalg.pinv(h_eve) @ y_e
            fallback = True
    else:
        w_hat = eve.mmse_estimate(obs, cov.c_w, form=cfg.mmse_form)
    mapped = eve.map_to_users(h_users, w_hat)
    return detect(mapped, constellation), fallback


def _run_directional(cfg: ScenarioConfig, salt: int) -> PointResult:
    constellation = build_constellation(cfg.order)
    mode = DesignMode.parse(cfg.design_mode)
    result = PointResult(config=cfg, sweep_param=cfg.sweep_parameter,
                         sweep_value=None)
    power_sum = 0.0
    received_sum = 0.0
    iter_sum = 0
    user_errors = 0
    eve_errors = {s: 0 for s in cfg.eve_strategies}
    snr_rows = [] if cfg.snr_trace else None
    last_reason = "no instances attempted"

    for trial in range(cfg.trials):
        r_ch, r_sym, r_nu, r_ne, r_cov = _trial_rngs(cfg, salt, trial)
        channels = draw_channel_set(cfg.n_t, cfg.n_e,
                                    cfg.user_antenna_counts, r_ch)
        h_u, h_e = channels.h_users, channels.h_eve
        cov = None
        if "mmse" in cfg.eve_strategies:
            cov = eve.estimate_c_w(h_u, cfg.gamma, constellation, mode,
                                   samples=cfg.cov_samples, seed=r_cov,
                                   solver=cfg.solver)
        table = None
        if "brute-force" in cfg.eve_strategies:
            table = eve.build_lookup(h_u, h_e, cfg.gamma, constellation,
                                     mode, cap=cfg.table_cap,
                                     solver=cfg.solver)
        for _ in range(cfg.symbols_per_channel):
            idx = r_sym.integers(0, cfg.order, cfg.n_users)
            symbols = constellation.points[idx]
            try:
                sol = design(h_u, symbols, cfg.gamma, mode,
                             solver=cfg.solver, constellation=constellation,
                             penalty_cfg=cfg.penalty)
            except InfeasibleDesignError as exc:
                result.infeasible += 1
                last_reason = str(exc)
                continue
            result.designed += 1
            clean = h_u @ sol.w
            power_sum += float(np.linalg.norm(sol.w) ** 2)
            received_sum += float(np.linalg.norm(clean) ** 2)
            iter_sum += sol.iterations
            if sol.report.max_phase_error is not None:
                result.worst_phase_error = max(result.worst_phase_error,
                                               sol.report.max_phase_error)
            result.worst_slack = min(result.worst_slack, sol.report.min_slack)
            if snr_rows is not None:
                snr_rows.append(np.abs(clean) ** 2
                                / max(cfg.sigma2_users, 1e-300))

            y_u = awgn(clean, cfg.sigma2_users, r_nu)
            user_errors += int(np.sum(detect(y_u, constellation) != idx))
            if cfg.eve_strategies:
                y_e = awgn(h_e @ sol.w, cfg.sigma2_eve, r_ne)
                for strategy in cfg.eve_strategies:
                    got, fell_back = _eve_symbol_estimate(
                        strategy, cfg, y_e, h_e, h_u, sol.w, cov, table,
                        constellation,
                    )
                    result.eve_fallbacks += int(fell_back)
                    eve_errors[strategy] += int(np.sum(got != idx))

    if result.designed == 0:
        raise DirmodError(
            f"every instance was infeasible or skipped; last reason: "
            f"{last_reason}"
        )
    result.mean_power = power_sum / result.designed
    result.mean_received_power = received_sum / result.designed
    result.ser_users = user_errors / (result.designed * cfg.n_users)
    result.ser_eve = {s: eve_errors[s] / (result.designed * cfg.n_users)
                      for s in cfg.eve_strategies}
    result.mean_iterations = iter_sum / result.designed
    if snr_rows is not None:
        result.snr_samples = np.vstack(snr_rows) if snr_rows else np.empty((0, cfg.n_users))
    return result


def _run_benchmark(cfg: ScenarioConfig, salt: int) -> PointResult:
    constellation = build_constellation(cfg.order)
    # no per-symbol design: phase-error and slack columns stay blank
    result = PointResult(config=cfg, sweep_param=cfg.sweep_parameter,
                         sweep_value=None, worst_phase_error=float("nan"))
    beta = cfg.beta
    power_sum = 0.0
    received_sum = 0.0
    user_errors = 0
    eve_errors = {s: 0 for s in cfg.eve_strategies}
    snr_rows = [] if cfg.snr_trace else None
    last_reason = "no instances attempted"
    c_w_bench = (beta**2) * np.eye(cfg.n_users)

    for trial in range(cfg.trials):
        r_ch, r_sym, r_nu, r_ne, _r_cov = _trial_rngs(cfg, salt, trial)
        channels = draw_channel_set(cfg.n_t, cfg.n_e,
                                    cfg.user_antenna_counts, r_ch)
        h_u, h_e = channels.h_users, channels.h_eve
        try:
            w_mat = bench.zf_transmit(h_u)
        except (CapabilityError, DirmodError) as exc:
            result.infeasible += cfg.symbols_per_channel
            last_reason = str(exc)
            continue
        for _ in range(cfg.symbols_per_channel):
            idx = r_sym.integers(0, cfg.order, cfg.n_users)
            symbols = constellation.points[idx]
            x = bench.transmit(w_mat, symbols, beta)
            result.designed += 1
            clean = h_u @ x
            power_sum += float(np.linalg.norm(x) ** 2)
            received_sum += float(np.linalg.norm(clean) ** 2)
            if snr_rows is not None:
                snr_rows.append(np.abs(clean) ** 2
                                / max(cfg.sigma2_users, 1e-300))
            y_u = awgn(clean, cfg.sigma2_users, r_nu)
            user_errors += int(np.sum(detect(y_u / beta, constellation) != idx))
            if cfg.eve_strategies:
                y_e = awgn(h_e @ x, cfg.sigma2_eve, r_ne)
                for strategy in cfg.eve_strategies:
                    fell_back = False
                    if strategy == "zf":
                        try:
                            sb = bench.bench_eve_zf(h_e, w_mat, y_e)
                        except CapabilityError:
                            sb = np.linalg.pinv(h_e @ w_mat) @ y_e
                            fell_back = True
                    else:
                        sb = bench.bench_eve_mmse(h_e, w_mat, y_e, c_w_bench,
                                                  cfg.sigma2_eve,
                                                  form=cfg.mmse_form)
                    got = detect(sb / beta, constellation)
                    result.eve_fallbacks += int(fell_back)
                    eve_errors[strategy] += int(np.sum(got != idx))

    if result.designed == 0:
        raise DirmodError(
            f"every benchmark instance was skipped; last reason: {last_reason}"
        )
    result.mean_power = power_sum / result.designed
    result.mean_received_power = received_sum / result.designed
    result.ser_users = user_errors / (result.designed * cfg.n_users)
    result.ser_eve = {s: eve_errors[s] / (result.designed * cfg.n_users)
                      for s in cfg.eve_strategies}
    if snr_rows is not None:
        result.snr_samples = np.vstack(snr_rows) if snr_rows else np.empty((0, cfg.n_users))
    return result


def run_point(cfg: ScenarioConfig, salt: int = 0,
              sweep_value=None) -> PointResult:
    """One scenario point; `salt` isolates RNG streams between sweep points."""
    cfg.validate()
    if cfg.design_mode == "benchmark":
        result = _run_benchmark(cfg, salt)
    else:
        result = _run_directional(cfg, salt)
    result.sweep_value = sweep_value
    return result


_SWEEP_ALIASES = {
    "nt": "n_t", "n_t": "n_t",
    "ne": "n_e", "n_e": "n_e",
    "nu": "n_users", "n_u": "n_users", "n_users": "n_users",
    "gamma": "gamma_db", "gamma_db": "gamma_db",
    "beta2_db": "beta2_db",
    "m": "order", "order": "order",
}


def apply_sweep_value(cfg: ScenarioConfig, parameter: str,
                      value) -> ScenarioConfig:
    key = _SWEEP_ALIASES.get(parameter.strip().lower())
    if key is None:
        raise ConfigError(
            f"unknown sweep parameter {parameter!r}; expected one of "
            f"{sorted(set(_SWEEP_ALIASES.values()))}"
        )
    if key == "n_users":
        # sweeping the user count means single-antenna users
        return dataclasses.replace(cfg,
                                   user_antenna_counts=(1,) * int(value))
    if key in ("gamma_db", "beta2_db"):
        return dataclasses.replace(cfg, **{key: float(value)})
    return dataclasses.replace(cfg, **{key: int(value)})


def sweep(cfg: ScenarioConfig, threads: int = 1) -> list:
    """run_point mapped over the sweep list (or the single point).

    threads > 1 runs sweep points concurrently; each point's trial loop
    stays serial with its own seeded streams, so the output is identical
    to the serial run regardless of scheduling.
    """
    cfg.validate()
    if not cfg.sweep_parameter or not cfg.sweep_values:
        return [run_point(cfg, salt=0)]
    jobs = [
        (apply_sweep_value(cfg, cfg.sweep_parameter, value), index, value)
        for index, value in enumerate(cfg.sweep_values)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda j: run_point(j[0], salt=j[1],
                                                     sweep_value=j[2]), jobs))
    return [run_point(sub, salt=index, sweep_value=value)
            for sub, index, value in jobs]


# ---------------------------------------------------------------------------
# ULA angular profile
# ---------------------------------------------------------------------------

ULA_USER_ANGLES = (10.0, 50.0, 110.0, 260.0, 310.0)


def ula_scenario(user_angles=ULA_USER_ANGLES, n_t: int = 5, order: int = 8,
                 gamma_db: float = 15.56, sigma2: float = 1.0,
                 design_mode: str = "signal-level", solver: str = "nnls",
                 symbol_vectors: int = 200, noise_draws: int = 50,
                 grid_step_deg: float = 1.0, base_seed: int = 0,
                 array: str = "ring"):
    """SER versus receiver angle for a line-of-sight transmit array.

    The channel is fixed by geometry, so each drawn symbol vector's
    precoder is designed once and evaluated at every probe angle; a probe
    at angle theta decodes the stream it hears best (min over users of
    that user's SER), which at a user's own angle is their stream.
    Returns (angles_deg, ser_per_angle, per-user-angle SER).

    array "ring" (default) resolves the full circle; "ula" is available
    but mirror-symmetric, and the reference five-user angle set puts two
    users on each other's mirror (cos 50 deg == cos 310 deg), which makes
    independent symbols for them infeasible -- rejected up front.
    """
    mode = DesignMode.parse(design_mode)
    constellation = build_constellation(order)
    gamma = 10.0 ** (gamma_db / 10.0)
    if array not in ("ring", "ula"):
        raise ConfigError(f"array {array!r} not in ('ring', 'ula')")
    steer = ring_los if array == "ring" else ula_los
    h_users = steer(user_angles, n_t)
    gram = np.abs(h_users @ h_users.conj().T) / n_t
    np.fill_diagonal(gram, 0.0)
    if gram.max() > 1.0 - 1e-9:
        i, j = np.unravel_index(int(np.argmax(gram)), gram.shape)
        raise InfeasibleDesignError(
            f"user angles {user_angles[i]} and {user_angles[j]} produce "
            f"parallel steering rows under the {array} array; independent "
            "symbols cannot be induced on both"
        )
    angles = np.arange(0.0, 360.0, grid_step_deg)
    probes = steer(angles, n_t)
    n_users = len(user_angles)

    seq = np.random.SeedSequence((base_seed, 14))
    r_sym, r_noise = [np.random.default_rng(c) for c in seq.spawn(2)]

    # error counts: angle x user
    errors = np.zeros((angles.size, n_users), dtype=np.int64)
    total = symbol_vectors * noise_draws
    for _ in range(symbol_vectors):
        idx = r_sym.integers(0, order, n_users)
        symbols = constellation.points[idx]
        sol = design(h_users, symbols, gamma, mode, solver=solver,
                     constellation=constellation)
        clean = probes @ sol.w   # one complex value per probe angle
        noise = (r_noise.standard_normal((angles.size, noise_draws))
                 + 1j * r_noise.standard_normal((angles.size, noise_draws)))
        noise *= np.sqrt(sigma2 / 2.0)
        received = clean[:, np.newaxis] + noise
        got = detect(received.ravel(), constellation).reshape(
            angles.size, noise_draws)
        for user in range(n_users):
            errors[:, user] += np.sum(got != idx[user], axis=1)

    ser_per_user = errors / total
    ser = ser_per_user.min(axis=1)
    at_users = {}
    for user, angle in enumerate(user_angles):
        nearest = int(np.argmin(np.abs(angles - angle)))
        at_users[angle] = float(ser_per_user[nearest, user])
    return angles, ser, at_users


# ---------------------------------------------------------------------------
# brute-force cost scaling
# ---------------------------------------------------------------------------

def brute_force_timing(order_counts, n_t: int = 8, gamma_db: float = 15.56,
                       queries: int = 32, base_seed: int = 0,
                       cap: int = eve.TABLE_CAP, max_redraws: int = 20):
    """Measured lookup-attack cost for growing table sizes (N_e = N_t).

    order_counts: iterable of (order, n_users) pairs.  Returns one row per
    pair: table size, table build seconds, mean seconds per ML query.
    Only the orderings are meaningful; absolute times are machine noise.
    A table needs every symbol combination to be feasible, so channels
    that fail on any combination are redrawn (bounded attempts).
    """
    gamma = 10.0 ** (gamma_db / 10.0)
    rows = []
    for salt, (order, n_users) in enumerate(order_counts):
        constellation = build_constellation(order)
        seq = np.random.SeedSequence((base_seed, 15, salt))
        r_ch, r_sym, r_noise = [np.random.default_rng(c) for c in seq.spawn(3)]
        table = None
        for _attempt in range(max_redraws):
            channels = draw_channel_set(n_t, n_t, (1,) * n_users, r_ch)
            t0 = time.perf_counter()
            try:
                table = eve.build_lookup(channels.h_users, channels.h_eve,
                                         gamma, constellation, cap=cap)
            except InfeasibleDesignError:
                continue
            break
        if table is None:
            raise InfeasibleDesignError(
                f"no channel with all {order}**{n_users} symbol combinations "
                f"feasible found in {max_redraws} draws (n_t={n_t})"
            )
        build_seconds = time.perf_counter() - t0
        t0 = time.perf_counter()
        for _ in range(queries):
            idx = r_sym.integers(0, order, n_users)
            sol = design(channels.h_users, constellation.points[idx], gamma)
            y_e = awgn(channels.h_eve @ sol.w, 1.0, r_noise)
            eve.brute_force_ml(y_e, table)
        query_seconds = (time.perf_counter() - t0) / queries
        rows.append({
            "order": order,
            "n_users": n_users,
            "table_size": len(table),
            "build_seconds": build_seconds,
            "query_seconds": query_seconds,
        })
    return rows


# ---------------------------------------------------------------------------
# figure-style presets (desk scale)
# ---------------------------------------------------------------------------

def preset_configs(name: str, trials: int | None = None,
                   symbols: int | None = None, base_seed: int = 0):
    """Scenario lists reproducing the reference figures at desk scale.

    Returns (kind, payload): kind "sweep" carries a list of ScenarioConfig
    (each with its own sweep), "ula" and "timing" carry kwargs for
    ula_scenario / brute_force_timing.
    """
    trials = trials if trials is not None else 50
    symbols = symbols if symbols is not None else 10
    common = dict(trials=trials, symbols_per_channel=symbols,
                  base_seed=base_seed)

    if name == "fig4":
        configs = []
        for n_users in (8, 10):
            for mode in ("fixed", "relaxed", "signal-level", "benchmark"):
                configs.append(ScenarioConfig(
                    n_t=16, n_e=16, user_antenna_counts=(1,) * n_users,
                    design_mode=mode, sweep_parameter="n_t",
                    sweep_values=(10, 12, 14, 16), **common))
        return "sweep", configs
    if name == "fig5":
        configs = [
            ScenarioConfig(n_t=16, n_e=15, user_antenna_counts=(1,) * 10,
                           design_mode=mode, eve_strategies=("zf",),
                           sweep_parameter="n_t",
                           sweep_values=(11, 12, 14, 16), **common)
            for mode in ("fixed", "relaxed", "signal-level", "benchmark")
        ]
        return "sweep", configs
    if name == "fig9":
        configs = [
            ScenarioConfig(n_t=16, n_e=18, user_antenna_counts=(1,) * 4,
                           design_mode=mode, eve_strategies=("zf",),
                           sweep_parameter="n_users",
                           sweep_values=(4, 6, 8, 10, 12, 14), **common)
            for mode in ("fixed", "relaxed", "signal-level", "benchmark")
        ]
        return "sweep", configs
    if name == "fig11":
        configs = [
            ScenarioConfig(n_t=20, n_e=20, user_antenna_counts=(1,) * 19,
                           design_mode=mode, sweep_parameter="gamma_db",
                           sweep_values=(5.0, 10.0, 15.0, 20.0, 25.0),
                           **common)
            for mode in ("fixed", "relaxed", "signal-level", "benchmark")
        ]
        return "sweep", configs
    if name == "fig14":
        return "ula", dict(base_seed=base_seed)
    if name == "fig15":
        pairs = [(2, k) for k in (2, 4, 6, 8)] + [(4, k) for k in (2, 3, 4, 5)]
        return "timing", dict(order_counts=pairs, base_seed=base_seed)
    raise ConfigError(
        f"unknown preset {name!r}; expected fig4, fig5, fig9, fig11, "
        "fig14 or fig15"
    )
