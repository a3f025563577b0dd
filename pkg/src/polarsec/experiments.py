"""Monte Carlo scenario runner for the four simulation studies.

Every sweep evaluates the Proposed, MRT, FPA, and Upper bound schemes on
bit-identical channel realizations (paired design) and aggregates per-trial
metrics into one CSV row per (sweep point, scheme).  Trials are keyed by
deterministic RNG streams, so results do not depend on scheduling and a rerun
with the same configuration and seed reproduces the CSV byte for byte.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .ao import solve_instance, solve_instance_fpa, solve_instance_mrt
from .beamforming import (
    mrt_beamformer,
    optimal_beamformer,
    quadratic_forms,
    quadratic_forms_mrc,
)
from .channel import (
    PURPOSE_CHANNEL_ERROR,
    circular_psv,
    effective_channel,
    gen_channel_set,
    perturb_eve_links,
    trial_stream,
)
from .metrics import cross_correlation, secrecy_rate, secrecy_rate_mrc

SCHEME_PROPOSED = "Proposed"
SCHEME_MRT = "MRT"
SCHEME_FPA = "FPA"
SCHEME_UPPER = "Upper bound"
SCHEMES = (SCHEME_PROPOSED, SCHEME_MRT, SCHEME_FPA, SCHEME_UPPER)

CSV_HEADER = (
    "scenario,sweep_param,sweep_value,scheme,"
    "mean_secrecy_rate,mean_eve_rate,mean_cross_corr,trials,master_seed"
)

DEFAULT_SNR_GRID_DB = (-10.0, -5.0, 0.0, 5.0, 10.0)
DEFAULT_ANTENNA_GRID = (2, 4, 6, 8)
DEFAULT_XI_GRID = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)
DEFAULT_EVE_ANTENNA_GRID = (1, 2, 3, 4)

SCENARIO_SNR = "snr"
SCENARIO_ANTENNAS = "antennas"
SCENARIO_CSI_ERROR = "csi-error"
SCENARIO_MULTI_EVE = "multi-eve"


class ConfigError(ValueError):
    """Invalid configuration file, key, or value."""


@dataclass(frozen=True)
class ScenarioConfig:
    """All experiment knobs; defaults follow the reference setup.

    The transmit power budget is normalized to 1, so the configured SNR in dB
    fixes the noise power as sigma2 = 10^(-snr_db/10).
    """

    n_bs: int = 4
    m_eve: int = 1
    snr_db: float = 0.0
    chi_user: float = 0.2
    chi_eve: float = 0.2
    g_user: tuple = (1 + 0j, 0j)
    g_eve: tuple = (1 + 0j, 0j)
    xi: float = 0.0
    trials: int = 500
    master_seed: int = 0
    epsilon: float = 1e-5
    rand_count: int = 200
    p_max: float = 1.0

    def __post_init__(self):
        if self.n_bs < 1 or self.m_eve < 1:
            raise ConfigError("n_bs and m_eve must be at least 1")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.epsilon <= 0.0:
            raise ConfigError("epsilon must be positive")
        if self.rand_count < 1:
            raise ConfigError("rand_count must be at least 1")
        if self.p_max <= 0.0:
            raise ConfigError("p_max must be positive")
        if self.chi_user < 0.0 or self.chi_eve < 0.0 or self.xi < 0.0:
            raise ConfigError("chi_user, chi_eve, and xi must be nonnegative")

    @property
    def sigma2(self) -> float:
        return 10.0 ** (-self.snr_db / 10.0)


_FIELD_PARSERS = {
    "n_bs": int,
    "m_eve": int,
    "snr_db": float,
    "chi_user": float,
    "chi_eve": float,
    "g_user": "cvec",
    "g_eve": "cvec",
    "xi": float,
    "trials": int,
    "master_seed": int,
    "epsilon": float,
    "rand_count": int,
    "p_max": float,
}


def _parse_complex_pair(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"expected two comma-separated complex entries, got {text!r}")
    try:
        return tuple(complex(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex entry in {text!r}: {exc}") from exc


def _parse_value(key: str, raw: str):
    if key not in _FIELD_PARSERS:
        raise ConfigError(f"unknown configuration key: {key!r}")
    parser = _FIELD_PARSERS[key]
    if parser == "cvec":
        return _parse_complex_pair(raw)
    try:
        return parser(raw)
    except ValueError as exc:
        raise ConfigError(f"cannot parse value for {key!r}: {raw!r}") from exc


def apply_overrides(cfg: ScenarioConfig, pairs) -> ScenarioConfig:
    """Apply repeatable ``key=value`` overrides (same keys as the config file)."""
    updates = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override must look like key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        key = key.strip()
        updates[key] = _parse_value(key, raw.strip())
    return replace(cfg, **updates)


def read_config(path) -> ScenarioConfig:
    """Read a ``key = value`` configuration file.

    Blank lines and lines starting with ``#`` are ignored; keys mirror the
    ScenarioConfig fields one to one, and unknown keys are rejected by name.
    """
    updates = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            updates.append(stripped)
    return apply_overrides(ScenarioConfig(), updates)


def config_keys() -> tuple:
    return tuple(f.name for f in fields(ScenarioConfig))


@dataclass(frozen=True)
class SweepRow:
    scenario: str
    sweep_param: str
    sweep_value: float
    scheme: str
    mean_secrecy_rate: float
    mean_eve_rate: float
    mean_cross_corr: float
    trials: int
    master_seed: int


@dataclass(frozen=True)
class SweepResult:
    """One row per (sweep point, scheme); means are over paired realizations."""

    rows: tuple

    def to_csv_text(self) -> str:
        lines = [CSV_HEADER]
        for row in self.rows:
            lines.append(
                ",".join(
                    (
                        row.scenario,
                        row.sweep_param,
                        _fmt(row.sweep_value),
                        row.scheme,
                        _fmt(row.mean_secrecy_rate),
                        _fmt(row.mean_eve_rate),
                        _fmt(row.mean_cross_corr),
                        str(row.trials),
                        str(row.master_seed),
                    )
                )
            )
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(self.to_csv_text())

    def scheme_series(self, scheme: str):
        """(sweep_value, mean_secrecy_rate) pairs of one scheme, in sweep order."""
        return [
            (row.sweep_value, row.mean_secrecy_rate)
            for row in self.rows
            if row.scheme == scheme
        ]


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


class SweepError(RuntimeError):
    """Solver failure inside a sweep, annotated with its (point, trial) context."""


# ---------------------------------------------------------------------------
# per-trial scheme evaluations


def _final_vector_metrics(channels, psv, w, sigma2):
    h_user = effective_channel(channels.user_links, channels.g_user, psv)
    h_eve = effective_channel(channels.eve_column(0), channels.g_eve, psv)
    rates = secrecy_rate(h_user, h_eve, w, sigma2)
    corr = cross_correlation(h_user, h_eve)
    return rates, corr


def eval_trial_baseline(cfg: ScenarioConfig, trial: int) -> dict:
    """Evaluate all four schemes on one shared channel realization."""
    stream = trial_stream(cfg.master_seed, trial)
    channels = gen_channel_set(cfg, stream)
    sigma2 = cfg.sigma2

    trace = solve_instance(channels, cfg, stream)
    rates, corr = _final_vector_metrics(channels, trace.final_psv, trace.final_w, sigma2)
    out = {
        SCHEME_PROPOSED: (rates.secrecy_rate, rates.eve_rate, corr),
        # the bound belongs to the proposed run; eve rate and correlation
        # mirror that run's operating point
        SCHEME_UPPER: (trace.final_upper_bound_rate, rates.eve_rate, corr),
    }

    trace_mrt = solve_instance_mrt(channels, cfg, stream)
    rates_mrt, corr_mrt = _final_vector_metrics(
        channels, trace_mrt.final_psv, trace_mrt.final_w, sigma2
    )
    out[SCHEME_MRT] = (rates_mrt.secrecy_rate, rates_mrt.eve_rate, corr_mrt)

    trace_fpa = solve_instance_fpa(channels, cfg)
    rates_fpa, corr_fpa = _final_vector_metrics(
        channels, trace_fpa.final_psv, trace_fpa.final_w, sigma2
    )
    out[SCHEME_FPA] = (rates_fpa.secrecy_rate, rates_fpa.eve_rate, corr_fpa)
    return out


def eval_trial_csi_error(cfg: ScenarioConfig, trial: int) -> dict:
    """Optimize phases against an imperfect eavesdropper estimate, score on truth.

    The phase optimization consumes perturbed eavesdropper links; the final
    beamformer is then recomputed from the true links at the optimized phases,
    and all rates are evaluated on the true channels.  FPA never touches the
    estimate, so its output is independent of the error variance.
    """
    stream = trial_stream(cfg.master_seed, trial)
    channels = gen_channel_set(cfg, stream)
    sigma2 = cfg.sigma2
    error_gen = stream.substream(PURPOSE_CHANNEL_ERROR).generator()
    estimated = channels.with_eve_links(
        perturb_eve_links(channels.eve_links, cfg.xi, error_gen)
    )

    trace = solve_instance(estimated, cfg, stream)
    psv = trace.final_psv
    h_user = effective_channel(channels.user_links, channels.g_user, psv)
    h_eve = effective_channel(channels.eve_column(0), channels.g_eve, psv)
    w = optimal_beamformer(quadratic_forms(h_user, h_eve, sigma2), cfg.p_max)
    rates = secrecy_rate(h_user, h_eve, w, sigma2)
    corr = cross_correlation(h_user, h_eve)
    out = {
        SCHEME_PROPOSED: (rates.secrecy_rate, rates.eve_rate, corr),
        # bound of the surrogate problem the optimizer actually solved
        SCHEME_UPPER: (trace.final_upper_bound_rate, rates.eve_rate, corr),
    }

    trace_mrt = solve_instance_mrt(estimated, cfg, stream)
    psv_mrt = trace_mrt.final_psv
    h_user_m = effective_channel(channels.user_links, channels.g_user, psv_mrt)
    h_eve_m = effective_channel(channels.eve_column(0), channels.g_eve, psv_mrt)
    w_mrt = mrt_beamformer(h_user_m, cfg.p_max)
    rates_mrt = secrecy_rate(h_user_m, h_eve_m, w_mrt, sigma2)
    out[SCHEME_MRT] = (
        rates_mrt.secrecy_rate,
        rates_mrt.eve_rate,
        cross_correlation(h_user_m, h_eve_m),
    )

    trace_fpa = solve_instance_fpa(channels, cfg)
    rates_fpa, corr_fpa = _final_vector_metrics(
        channels, trace_fpa.final_psv, trace_fpa.final_w, sigma2
    )
    out[SCHEME_FPA] = (rates_fpa.secrecy_rate, rates_fpa.eve_rate, corr_fpa)
    return out


def eval_trial_multi_eve(cfg: ScenarioConfig, trial: int) -> dict:
    """Single-antenna phase optimization scored against an M-antenna eavesdropper.

    Phases are optimized against the eavesdropper's first antenna; the
    beamformer is then updated with the full M-antenna quadratic form and the
    rates use maximum ratio combining at the eavesdropper.  With one antenna
    this reduces bit-exactly to the baseline evaluation.
    """
    if cfg.m_eve == 1:
        return eval_trial_baseline(cfg, trial)
    stream = trial_stream(cfg.master_seed, trial)
    channels = gen_channel_set(cfg, stream)
    sigma2 = cfg.sigma2

    def eve_matrix(psv):
        cols = [
            effective_channel(channels.eve_column(m), channels.g_eve, psv)
            for m in range(cfg.m_eve)
        ]
        return np.stack(cols, axis=1)

    trace = solve_instance(channels, cfg, stream)
    psv = trace.final_psv
    h_user = effective_channel(channels.user_links, channels.g_user, psv)
    h_mat = eve_matrix(psv)
    w = optimal_beamformer(quadratic_forms_mrc(h_user, h_mat, sigma2), cfg.p_max)
    rates = secrecy_rate_mrc(h_user, h_mat, w, sigma2)
    corr = cross_correlation(h_user, h_mat)
    out = {
        SCHEME_PROPOSED: (rates.secrecy_rate, rates.eve_rate, corr),
        # single-antenna relaxation bound, kept as a diagnostic column
        SCHEME_UPPER: (trace.final_upper_bound_rate, rates.eve_rate, corr),
    }

    trace_mrt = solve_instance_mrt(channels, cfg, stream)
    psv_mrt = trace_mrt.final_psv
    h_user_m = effective_channel(channels.user_links, channels.g_user, psv_mrt)
    h_mat_m = eve_matrix(psv_mrt)
    w_mrt = mrt_beamformer(h_user_m, cfg.p_max)
    rates_mrt = secrecy_rate_mrc(h_user_m, h_mat_m, w_mrt, sigma2)
    out[SCHEME_MRT] = (
        rates_mrt.secrecy_rate,
        rates_mrt.eve_rate,
        cross_correlation(h_user_m, h_mat_m),
    )

    psv_fpa = circular_psv(cfg.n_bs)
    h_user_f = effective_channel(channels.user_links, channels.g_user, psv_fpa)
    h_mat_f = eve_matrix(psv_fpa)
    w_fpa = optimal_beamformer(quadratic_forms_mrc(h_user_f, h_mat_f, sigma2), cfg.p_max)
    rates_fpa = secrecy_rate_mrc(h_user_f, h_mat_f, w_fpa, sigma2)
    out[SCHEME_FPA] = (
        rates_fpa.secrecy_rate,
        rates_fpa.eve_rate,
        cross_correlation(h_user_f, h_mat_f),
    )
    return out


_PROTOCOLS = {
    "baseline": eval_trial_baseline,
    "csi": eval_trial_csi_error,
    "multi": eval_trial_multi_eve,
}


def _trial_job(args):
    protocol, cfg, trial = args
    return _PROTOCOLS[protocol](cfg, trial)


# ---------------------------------------------------------------------------
# sweep drivers


def _run_point(protocol: str, cfg: ScenarioConfig, jobs) -> list:
    tasks = [(protocol, cfg, t) for t in range(cfg.trials)]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or cfg.trials == 1:
        return [_trial_job(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, cfg.trials)) as pool:
        chunk = max(1, cfg.trials // (4 * jobs))
        return list(pool.map(_trial_job, tasks, chunksize=chunk))


def _sweep(scenario, param, values, cfgs, protocol, jobs) -> SweepResult:
    rows = []
    for value, cfg in zip(values, cfgs):
        try:
            per_trial = _run_point(protocol, cfg, jobs)
        except Exception as exc:
            raise SweepError(
                f"scenario {scenario!r} failed at {param}={value}: {exc}"
            ) from exc
        for scheme in SCHEMES:
            data = np.array([trial[scheme] for trial in per_trial], dtype=np.float64)
            means = data.mean(axis=0)
            rows.append(
                SweepRow(
                    scenario=scenario,
                    sweep_param=param,
                    sweep_value=float(value),
                    scheme=scheme,
                    mean_secrecy_rate=float(means[0]),
                    mean_eve_rate=float(means[1]),
                    mean_cross_corr=float(means[2]),
                    trials=cfg.trials,
                    master_seed=cfg.master_seed,
                )
            )
    return SweepResult(tuple(rows))


def run_snr_sweep(cfg: ScenarioConfig, snr_list_db=DEFAULT_SNR_GRID_DB, jobs=None) -> SweepResult:
    """Secrecy and eavesdropper rates versus SNR on paired realizations."""
    values = [float(v) for v in snr_list_db]
    if not values:
        raise ConfigError("SNR sweep needs at least one point")
    cfgs = [replace(cfg, snr_db=v) for v in values]
    return _sweep(SCENARIO_SNR, "snr_db", values, cfgs, "baseline", jobs)


def run_antenna_sweep(cfg: ScenarioConfig, n_list=DEFAULT_ANTENNA_GRID, jobs=None) -> SweepResult:
    """Rates and channel cross-correlation versus transmit antenna count."""
    values = [int(v) for v in n_list]
    if not values:
        raise ConfigError("antenna sweep needs at least one point")
    cfgs = [replace(cfg, n_bs=v) for v in values]
    return _sweep(SCENARIO_ANTENNAS, "n_bs", values, cfgs, "baseline", jobs)


def run_csi_error_sweep(cfg: ScenarioConfig, xi_list=DEFAULT_XI_GRID, jobs=None) -> SweepResult:
    """Robustness to the eavesdropper-channel estimation error variance."""
    values = [float(v) for v in xi_list]
    if not values:
        raise ConfigError("CSI error sweep needs at least one point")
    cfgs = [replace(cfg, xi=v) for v in values]
    return _sweep(SCENARIO_CSI_ERROR, "xi", values, cfgs, "csi", jobs)


def run_multi_eve_sweep(cfg: ScenarioConfig, m_list=DEFAULT_EVE_ANTENNA_GRID, jobs=None) -> SweepResult:
    """Impact of the eavesdropper's antenna count under maximum ratio combining."""
    values = [int(v) for v in m_list]
    if not values:
        raise ConfigError("multi-eve sweep needs at least one point")
    cfgs = [replace(cfg, m_eve=v) for v in values]
    return _sweep(SCENARIO_MULTI_EVE, "m_eve", values, cfgs, "multi", jobs)


SWEEP_RUNNERS = {
    SCENARIO_SNR: run_snr_sweep,
    SCENARIO_ANTENNAS: run_antenna_sweep,
    SCENARIO_CSI_ERROR: run_csi_error_sweep,
    SCENARIO_MULTI_EVE: run_multi_eve_sweep,
}
