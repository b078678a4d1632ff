"""Command-line front end.

Every command reads a JSON scenario (strict: unknown fields are rejected),
dispatches to the computation modules and writes CSV or JSON.  Figure
commands can additionally render a PNG next to the delimited output.

Exit codes: 0 success, 2 scenario/validation error, 3 computation error
(insensitive operating point, inadequate truncation, ...).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import experiment as xp
from . import fisher, snri
from . import fock
from . import interferometer as itf
from .errors import TsuiError

_REQUIRED = object()


class Scenario:
    """Strict view over one JSON object: every field must be consumed."""

    def __init__(self, data: dict, context: str):
        if not isinstance(data, dict):
            raise ValueError(f"{context} must be a JSON object")
        self._data = dict(data)
        self._context = context

    def take(self, key: str, default=_REQUIRED, kind=float):
        if key not in self._data:
            if default is _REQUIRED:
                raise ValueError(f"{self._context}: missing required field {key!r}")
            return default
        value = self._data.pop(key)
        try:
            return kind(value) if kind is not None else value
        except (TypeError, ValueError):
            raise ValueError(f"{self._context}: field {key!r} has invalid value {value!r}") from None

    def block(self, key: str, required: bool = True):
        if key not in self._data:
            if required:
                raise ValueError(f"{self._context}: missing required block {key!r}")
            return None
        return Scenario(self._data.pop(key), f"{self._context}.{key}")

    def finish(self):
        if self._data:
            raise ValueError(
                f"{self._context}: unknown fields {sorted(self._data)} (strict parsing)"
            )


def parse_interferometer(block: Scenario) -> itf.InterferometerConfig:
    gain = block.take("gain", None)
    r = block.take("r", None)
    if (gain is None) == (r is None):
        raise ValueError(f"{block._context}: specify exactly one of 'gain' or 'r'")
    if gain is not None:
        if gain < 1.0:
            raise ValueError(f"{block._context}: gain must be >= 1, got {gain}")
        r = float(np.arccosh(np.sqrt(gain)))
    alpha2 = block.take("alpha2")
    eta = block.take("eta", None)
    etas = {name: block.take(name, None) for name in ("eta_p1", "eta_c1", "eta_p2", "eta_c2")}
    if eta is not None and any(v is not None for v in etas.values()):
        raise ValueError(f"{block._context}: 'eta' conflicts with per-arm transmissions")
    if eta is not None:
        etas = {"eta_p1": eta, "eta_c1": eta, "eta_p2": 1.0, "eta_c2": 1.0}
    else:
        etas = {k: (1.0 if v is None else v) for k, v in etas.items()}
    config = itf.InterferometerConfig(
        r=r,
        alpha2=alpha2,
        s=block.take("s", 0.0),
        phi=block.take("phi", 0.0),
        phi_p=block.take("phi_p", np.pi / 2),
        phi_c=block.take("phi_c", np.pi / 2),
        a_p=block.take("a_p", 1.0),
        a_c=block.take("a_c", 1.0),
        **etas,
    )
    block.finish()
    return config


def parse_modulation(block: Scenario, seed_override: int | None) -> xp.ModulationConfig:
    seed = block.take("seed", 0, kind=int)
    if seed_override is not None:
        seed = seed_override
    config = xp.ModulationConfig(
        delta_phi=block.take("delta_phi"),
        omega=block.take("omega"),
        sample_rate=block.take("sample_rate"),
        duration=block.take("duration"),
        rbw=block.take("rbw"),
        seed=seed,
    )
    block.finish()
    return config


def parse_calibration(block: Scenario) -> xp.CalibrationInputs:
    config = xp.CalibrationInputs(
        eta_coh=block.take("eta_coh"),
        responsivity=block.take("responsivity"),
        power=block.take("power"),
        bandwidth=block.take("bandwidth"),
    )
    block.finish()
    return config


_SCHEMES = {s.value: s for s in itf.DetectionScheme}


def parse_scheme(tag: str) -> itf.DetectionScheme:
    if tag not in _SCHEMES:
        raise ValueError(f"unknown scheme {tag!r}; choose from {sorted(_SCHEMES)}")
    return _SCHEMES[tag]


# ---------------------------------------------------------------------------
# Output helpers


def _fmt(x) -> str:
    return x if isinstance(x, str) else format(float(x), ".17g")


def write_csv(columns: list[str], rows, out_path: str | None) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)


def write_json(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)


def _flatten(payload: dict, prefix: str = "") -> list[tuple[str, object]]:
    items = []
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            items.extend(_flatten(value, f"{name}."))
        elif isinstance(value, (list, tuple)):
            for i, v in enumerate(value):
                items.append((f"{name}[{i}]", v))
        else:
            items.append((name, value))
    return items


def emit_table(columns: list[str], rows, args) -> None:
    """Write a table as CSV (default) or as a columns/rows JSON object."""
    if (args.format or "csv") == "csv":
        write_csv(columns, rows, args.out)
    else:
        write_json(
            {"columns": list(columns), "rows": [[float(v) for v in row] for row in rows]},
            args.out,
        )


def emit_report(payload: dict, args) -> None:
    """Write a report as JSON (default) or as flattened field,value CSV."""
    if (args.format or "json") == "json":
        write_json(payload, args.out)
    else:
        write_csv(["field", "value"], _flatten(payload), args.out)


def _workers() -> int | None:
    raw = os.environ.get("TSUI_THREADS")
    if raw is None:
        return None
    workers = int(raw)
    if workers < 1:
        raise ValueError(f"TSUI_THREADS must be a positive integer, got {raw!r}")
    return workers


def _probe_transmission(config: itf.InterferometerConfig) -> float:
    return config.eta_p1 * config.eta_p2


# ---------------------------------------------------------------------------
# Commands


def cmd_sensitivity(scenario: Scenario, args) -> None:
    scheme = parse_scheme(scenario.take("scheme", kind=str))
    config = parse_interferometer(scenario.block("interferometer"))
    optimize = scenario.take("optimize", False, kind=bool)
    scenario.finish()

    if optimize:
        phi_p, phi_c, report = itf.optimal_operating_point(config, scheme)
    else:
        report = itf.sensitivity_report(config, scheme)
        phi_p, phi_c = report.operating_point

    eta_eff = _probe_transmission(config)
    coh = snri.coherent_variance(eta_eff, config.gain, config.alpha2)
    payload = {
        "scheme": scheme.value,
        "phase_variance": report.phase_variance,
        "scaled_phase_variance": report.phase_variance * config.alpha2,
        "signal_slope": report.signal_slope,
        "noise_variance": report.noise_variance,
        "phi": report.phi,
        "operating_point": {"phi_p": phi_p, "phi_c": phi_c},
        "coherent_variance": coh,
        "snri_db": snri.snri_db(report.phase_variance, coh),
        "qfi": fisher.qfi(abs(config.r), config.alpha2),
    }
    if scheme.is_homodyne:
        cfg = scheme.configure(config)
        if optimize:
            cfg = dataclasses.replace(cfg, phi_p=phi_p, phi_c=phi_c)
        frep = fisher.cfi_homodyne(cfg)
        payload["fisher"] = {
            "qfi": frep.qfi,
            "cfi": frep.cfi,
            "snr_term": frep.snr_term,
            "dist_term": frep.dist_term,
        }
    emit_report(payload, args)


def cmd_figure2(scenario: Scenario, args) -> None:
    g_values = scenario.take("g_values", None, kind=None)
    if g_values is None:
        g_min = scenario.take("g_min", 1.0)
        g_max = scenario.take("g_max", 5.0)
        g_step = scenario.take("g_step", 0.1)
        if g_step <= 0 or g_max < g_min:
            raise ValueError("need g_step > 0 and g_max >= g_min")
        g_values = list(np.arange(g_min, g_max + g_step / 2, g_step))
    else:
        g_values = [float(g) for g in g_values]
    alpha2 = scenario.take("alpha2", 1e6)
    scheme_tags = scenario.take("schemes", None, kind=None)
    schemes = None if scheme_tags is None else [parse_scheme(t) for t in scheme_tags]
    scenario.finish()

    columns, rows = itf.gain_sweep_table(
        g_values, alpha2=alpha2, schemes=schemes, workers=_workers()
    )
    emit_table(columns, rows, args)
    if args.plot:
        from . import plotting

        plotting.plot_gain_sweep(columns, rows, args.plot)


def cmd_fig4b(scenario: Scenario, args) -> None:
    eta = scenario.take("eta", 0.65)
    gain = scenario.take("gain", 3.3)
    alpha2 = scenario.take("alpha2", 1e6)
    grid_deg = scenario.take("grid_deg", 1.0)
    phi_c = scenario.take("phi_c", np.pi / 2)
    scenario.finish()

    phi_p, curve = snri.snri_scan_phip(eta, gain, alpha2, phi_c=phi_c, grid_deg=grid_deg)
    coh = snri.coherent_variance(eta, gain, alpha2)
    r = float(np.arccosh(np.sqrt(gain)))
    base = itf.InterferometerConfig.equal_loss(r, eta, alpha2, phi_c=phi_c)
    limit = np.full_like(curve, np.nan)
    for i, pp in enumerate(phi_p):
        if not np.isfinite(curve[i]):
            continue
        rep = fisher.cfi_homodyne(dataclasses.replace(base, phi_p=pp))
        limit[i] = 10.0 * np.log10(rep.cfi * coh)
    emit_table(
        ["phi_p_rad", "snri_db", "snri_limit_db"],
        np.column_stack([phi_p, curve, limit]),
        args,
    )
    if args.plot:
        from . import plotting

        plotting.plot_snri_scan(phi_p, curve, limit, args.plot)


def cmd_figs2(scenario: Scenario, args) -> None:
    r = scenario.take("r", None)
    gain = scenario.take("gain", None)
    if (r is None) == (gain is None):
        raise ValueError("figs2: specify exactly one of 'r' or 'gain'")
    if r is None:
        r = float(np.arccosh(np.sqrt(gain)))
    eta = scenario.take("eta", 1.0)
    grid_deg = scenario.take("grid_deg", 1.0)
    scenario.finish()

    result = snri.snri_map(r, eta, grid_deg=grid_deg)
    pp, pc = np.meshgrid(result.phi_p, result.phi_c, indexing="ij")
    rows = np.column_stack(
        [
            pp.ravel(),
            pc.ravel(),
            result.snri_db.ravel(),
            np.repeat(result.probe_signal, len(result.phi_c)),
            np.tile(result.conjugate_signal, len(result.phi_p)),
        ]
    )
    emit_table(
        ["phi_p_rad", "phi_c_rad", "snri_db", "probe_signal", "conjugate_signal"],
        rows,
        args,
    )
    if args.plot:
        from . import plotting

        plotting.plot_snri_map(result, args.plot)


def cmd_fisher(scenario: Scenario, args) -> None:
    config = parse_interferometer(scenario.block("interferometer"))
    scenario.finish()
    rep = fisher.cfi_homodyne(config)
    report = itf.phase_variance_homodyne(config)
    emit_report(
        {
            "qfi": rep.qfi,
            "cfi": rep.cfi,
            "snr_term": rep.snr_term,
            "dist_term": rep.dist_term,
            "phase_variance": report.phase_variance,
            "inverse_phase_variance": 1.0 / report.phase_variance,
        },
        args,
    )


def cmd_oracle_check(scenario: Scenario, args) -> None:
    r_values = scenario.take("r_values", [0.1, 0.3, 0.6], kind=None)
    alpha_values = scenario.take("alpha_values", [0.0, 0.5, 1.0], kind=None)
    eta_values = scenario.take("eta_values", [1.0, 0.7], kind=None)
    cutoff = scenario.take("cutoff", 40, kind=int)
    phi = scenario.take("phi", 0.0)
    tolerance = scenario.take("tolerance", 1e-6)
    scenario.finish()

    report = fock.compare_to_gaussian(
        r_values=[float(v) for v in r_values],
        alpha_values=[float(v) for v in alpha_values],
        eta_values=[float(v) for v in eta_values],
        cutoff=cutoff,
        phi=phi,
        tolerance=tolerance,
    )
    emit_report(report.to_dict(), args)


def _write_samples(samples: np.ndarray, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(np.asarray(samples, dtype="<f8").tobytes())


def _write_periodogram(samples: np.ndarray, mod: xp.ModulationConfig, path: str) -> None:
    freqs, psd, _ = xp.averaged_periodogram(samples, mod.sample_rate, mod.rbw)
    with np.errstate(divide="ignore"):
        power_db = 10.0 * np.log10(psd)
    write_csv(["frequency_hz", "power_db"], np.column_stack([freqs, power_db]), path)


def _suffixed(path: str, suffix: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}_{suffix}{ext}"


def cmd_mc_experiment(scenario: Scenario, args) -> None:
    mode = scenario.take("mode", "paired", kind=str)
    if mode not in ("paired", "squeezed", "coherent"):
        raise ValueError(f"mode must be 'paired', 'squeezed' or 'coherent', got {mode!r}")
    mod = parse_modulation(scenario.block("modulation"), args.seed)
    cal_block = scenario.block("calibration", required=False)
    cal = parse_calibration(cal_block) if cal_block is not None else None
    config_block = scenario.block("interferometer", required=mode != "coherent")
    samples_path = scenario.take("samples_path", None, kind=str)
    periodogram_path = scenario.take("periodogram_path", None, kind=str)
    scenario.finish()

    if config_block is not None:
        config = parse_interferometer(config_block)
    else:
        if cal is None:
            raise ValueError("coherent mode needs either an interferometer or a calibration block")
        config = itf.InterferometerConfig(
            r=0.0,
            alpha2=xp.seed_photons_for_rate(cal, mod.sample_rate),
            eta_p1=cal.eta_coh,
            eta_c1=cal.eta_coh,
        )

    payload: dict = {"mode": mode, "seed": mod.seed}
    if mode == "paired":
        result = xp.paired_experiment(config, mod)
        payload.update(result)
        if samples_path or periodogram_path:
            runs = {
                "squeezed": (config, mod),
                "coherent": (
                    xp.coherent_twin(config),
                    dataclasses.replace(mod, seed=mod.seed + 1),
                ),
            }
            for label, (cfg, m) in runs.items():
                samples = xp.simulate_homodyne_timeseries(cfg, m)
                if samples_path:
                    _write_samples(samples, _suffixed(samples_path, label))
                if periodogram_path:
                    _write_periodogram(samples, m, _suffixed(periodogram_path, label))
    else:
        samples = xp.simulate_homodyne_timeseries(config, mod)
        payload.update(
            {
                "analytic_snr_db": xp.analytic_snr_db(config, mod),
                "estimated_snr_db": xp.estimate_snr(
                    samples, mod.sample_rate, mod.omega, mod.rbw
                ),
                "n_samples": mod.n_samples,
            }
        )
        if cal is not None:
            payload["expected_snr_db"] = xp.expected_coherent_snr_db(cal, mod.delta_phi)
            payload["n_p"] = xp.photons_from_power(cal)
        if samples_path:
            _write_samples(samples, samples_path)
        if periodogram_path:
            _write_periodogram(samples, mod, periodogram_path)
    if cal is not None and mode == "paired":
        payload["expected_coherent_snr_db"] = xp.expected_coherent_snr_db(cal, mod.delta_phi)
    emit_report(payload, args)


def cmd_calibrate_sql(scenario: Scenario, args) -> None:
    cal = parse_calibration(scenario.block("calibration"))
    delta_phi = scenario.take("delta_phi")
    scenario.finish()
    n_p = xp.photons_from_power(cal)
    emit_report(
        {
            "n_p": n_p,
            "sql_variance": snri.sql_variance(n_p),
            "expected_coherent_snr_db": xp.expected_coherent_snr_db(cal, delta_phi),
        },
        args,
    )


_COMMANDS = {
    "sensitivity": (cmd_sensitivity, "phase variance of one scheme at one operating point"),
    "figure2": (cmd_figure2, "lossless scheme comparison versus gain"),
    "fig4b": (cmd_fig4b, "SNRI versus probe homodyne phase"),
    "figs2": (cmd_figs2, "SNRI map over both homodyne phases"),
    "fisher": (cmd_fisher, "quantum/classical Fisher information report"),
    "oracle-check": (cmd_oracle_check, "Fock-space cross-check of the Gaussian pipeline"),
    "mc-experiment": (cmd_mc_experiment, "simulated modulation measurement and SNR estimate"),
    "calibrate-sql": (cmd_calibrate_sql, "photon-number calibration from detector parameters"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsui",
        description="Phase-sensitivity engine for seeded SU(1,1)-type interferometers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument(
            "--config",
            required=name not in ("figure2", "fig4b", "oracle-check"),
            help="scenario JSON path",
        )
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument(
            "--format",
            choices=("csv", "json"),
            default=None,
            help="output format (commands have a natural default)",
        )
        p.add_argument("--seed", type=int, default=None, help="override the scenario RNG seed")
        p.add_argument("--plot", default=None, help="also render a PNG figure to this path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn, _ = _COMMANDS[args.command]
    try:
        if args.config is None:
            scenario = Scenario({}, args.command)
        else:
            with open(args.config) as fh:
                scenario = Scenario(json.load(fh), args.command)
        fn(scenario, args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TsuiError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
