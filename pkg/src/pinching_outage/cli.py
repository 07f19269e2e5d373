"""
Command-line front end: ``sweep``, ``validate`` and ``reproduce``.

``sweep`` writes one long-format CSV row per (snr, system, scheme, user)::

    snr_db,system,scheme,user,op_analytic,op_asymptotic,op_mc,mc_stderr,mc_trials

``validate`` runs the self-check suites and prints a JSON summary.
``reproduce FIG`` writes the curves of one of the standard figures as a
wide CSV, optionally with an SVG chart.

Settings come from built-in defaults, then an optional ``--config`` file
of ``key = value`` lines, then the command-line flags (last one wins).

Exit codes: 0 success, 1 usage or configuration error, 2 failed
validation, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import RoomGeometry
from .link import AccessScheme, ChannelParams, InfeasibleSchemeError
from .montecarlo import McConfig, simulate_outage
from .outage import (
    OutageQuery,
    System,
    asymptotic_coefficient,
    db_to_linear,
    gap_u1,
    gap_u2_asymptotic,
    outage_probability,
)
from .validation import SUITES, run_validation

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "FIGURES",
    "SweepConfig",
    "cmd_reproduce",
    "cmd_sweep",
    "cmd_validate",
    "main",
    "reproduce_table",
    "sweep_rows",
]

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3

CSV_HEADER = ("snr_db", "system", "scheme", "user", "op_analytic", "op_asymptotic",
              "op_mc", "mc_stderr", "mc_trials")

# quadrature noise floor: anything smaller is written as an exact zero
_ZERO_FLOOR = 1e-12


class ConfigError(ValueError):
    """Bad flag, bad config-file entry or inconsistent settings (exit code 1)."""


@dataclass(frozen=True)
class SweepConfig:
    snr_start_db: float = 60.0
    snr_stop_db: float = 120.0
    snr_step_db: float = 1.0
    systems: tuple[str, ...] = ("CASS", "PASS")
    schemes: tuple[str, ...] = ("OMA", "NOMA")
    users: tuple[int, ...] = (1, 2)
    geometry: RoomGeometry = field(default_factory=RoomGeometry)
    channel: ChannelParams = field(default_factory=ChannelParams)
    alpha1: float = 0.1
    target_rate_bpshz: float = 1.0
    quadrature_order: int = 100
    mc_trials: int = 0
    mc_seed: int = 0
    output_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        if not self.snr_step_db > 0:
            raise ConfigError("snr step must be positive")
        if self.snr_start_db > self.snr_stop_db:
            raise ConfigError("snr start must not exceed snr stop")
        for name, allowed in (("systems", {"CASS", "PASS"}), ("schemes", {"OMA", "NOMA"}),
                              ("users", {1, 2})):
            values = getattr(self, name)
            if not values:
                raise ConfigError(f"{name} must not be empty")
            bad = set(values) - allowed
            if bad:
                raise ConfigError(f"unknown {name}: {sorted(map(str, bad))}")
        if self.quadrature_order < 1:
            raise ConfigError("quadrature order must be >= 1")
        if self.mc_trials < 0:
            raise ConfigError("trials must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not 0 <= self.mc_seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def snr_grid_db(self) -> np.ndarray:
        steps = math.floor((self.snr_stop_db - self.snr_start_db) / self.snr_step_db + 1e-9)
        return np.round(self.snr_start_db + self.snr_step_db * np.arange(steps + 1), 9)

    def scheme(self, name: str) -> AccessScheme:
        try:
            if name == "OMA":
                return AccessScheme.oma(self.target_rate_bpshz)
            return AccessScheme.noma(self.alpha1, self.target_rate_bpshz)
        except InfeasibleSchemeError as exc:
            raise ConfigError(f"infeasible NOMA split: {exc}") from None
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    if abs(value) < _ZERO_FLOOR:
        return "0"
    return format(value, ".15g")


def _fmt_snr(snr_db: float) -> str:
    return format(float(snr_db), ".12g")


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _mc(q: OutageQuery, trials: int, seed: int, workers: int):
    if trials <= 0:
        return None
    return simulate_outage(q, McConfig(trials=trials, seed=seed, workers=workers))


def sweep_rows(config: SweepConfig) -> list[tuple[str, ...]]:
    """The sweep table as rows of CSV cells, sorted by (snr, system, scheme, user)."""
    schemes = {name: config.scheme(name) for name in config.schemes}
    coeff = {
        (s, m): asymptotic_coefficient(System(s), schemes[m], config.geometry,
                                       config.channel, config.quadrature_order)
        for s in config.systems for m in config.schemes
    } if 2 in config.users else {}

    jobs = [(snr, s, m, u)
            for snr in config.snr_grid_db()
            for s in sorted(set(config.systems))
            for m in sorted(set(config.schemes))
            for u in sorted(set(config.users))]

    def row(job):
        snr, s, m, u = job
        rho = float(db_to_linear(snr))
        q = OutageQuery(System(s), schemes[m], u, rho, config.geometry, config.channel,
                        config.quadrature_order)
        op = outage_probability(q)
        asym = coeff[s, m] / rho if u == 2 else None
        est = _mc(q, config.mc_trials, config.mc_seed, 1)
        return (_fmt_snr(snr), s, m, str(u), _fmt(op), _fmt(asym),
                _fmt(est.p_hat) if est else "", _fmt(est.stderr) if est else "",
                str(est.trials) if est else "")

    # each row is a pure function of its job, so pool order never shows in the output
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            return list(pool.map(row, jobs))
    return [row(job) for job in jobs]


def _render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_sweep(config: SweepConfig) -> str:
    """Compute the sweep, write it to ``config.output_path`` (stdout if unset) and return it."""
    text = _render_csv(CSV_HEADER, sweep_rows(config))
    _emit(text, config.output_path)
    return text


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def cmd_validate(level: str = "quick", seed: int = 0, suites=SUITES, workers: int = 1,
                 output_path: str | None = None, **kwargs) -> tuple[bool, dict]:
    """Run the check suites; returns ``(all passed, JSON-ready summary)`` after writing it."""
    checks = run_validation(level, seed=seed, suites=suites, workers=workers, **kwargs)
    failed = [c.name for c in checks if not c.passed]
    summary = {
        "level": level,
        "seed": seed,
        "suites": list(suites),
        "passed": not failed,
        "n_checks": len(checks),
        "failed": failed,
        "checks": [c.as_dict() for c in checks],
    }
    _emit(json.dumps(summary, indent=2) + "\n", output_path)
    return not failed, summary


# ---------------------------------------------------------------------------
# reproduce
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Figure:
    """Curves of one figure. ``curves`` are ``(system, scheme, user, kind)``."""

    title: str
    curves: tuple[tuple[str, str, int, str], ...]
    snr_range_db: tuple[float, float, float]
    side_lengths_m: tuple[float, ...] = (20.0,)
    extras: tuple[str, ...] = ()


def _both_users(scheme: str) -> tuple:
    out = []
    for s in ("CASS", "PASS"):
        out += [(s, scheme, 1, "analytic"), (s, scheme, 1, "mc"),
                (s, scheme, 2, "analytic"), (s, scheme, 2, "mc")]
    return tuple(out) + (("CASS", scheme, 2, "asymptotic"), ("PASS", scheme, 2, "asymptotic"))


def _u1_gap(scheme: str) -> tuple:
    return tuple((s, scheme, 1, "analytic") for s in ("CASS", "PASS"))


def _u2_gap(scheme: str) -> tuple:
    return tuple((s, scheme, 2, kind) for kind in ("analytic", "asymptotic") for s in ("CASS", "PASS"))


FIGURES: dict[str, Figure] = {
    "fig2": Figure("CASS vs PASS with OMA", _both_users("OMA"), (60, 120, 1)),
    "fig3": Figure("CASS vs PASS with NOMA", _both_users("NOMA"), (60, 120, 1)),
    "fig4": Figure("OMA vs NOMA in PASS",
                   tuple(("PASS", m, u, k) for u in (1, 2) for m in ("OMA", "NOMA")
                         for k in ("analytic", "mc")),
                   (60, 120, 1)),
    "fig5": Figure("U1 outage gap, OMA", _u1_gap("OMA"), (60, 100, 0.5), (20.0, 30.0), ("delta1",)),
    "fig6": Figure("U2 high-SNR gap, OMA", _u2_gap("OMA"), (60, 120, 1), (20.0, 30.0),
                   ("delta2_asymptotic",)),
    "fig7": Figure("U1 outage gap, NOMA", _u1_gap("NOMA"), (60, 100, 0.5), (20.0, 30.0), ("delta1",)),
    "fig8": Figure("U2 high-SNR gap, NOMA", _u2_gap("NOMA"), (60, 120, 1), (20.0, 30.0),
                   ("delta2_asymptotic",)),
}


def _column(curve) -> list[str]:
    s, m, u, kind = curve
    base = f"{s.lower()}_{m.lower()}_u{u}"
    if kind == "mc":
        return [f"{base}_mc", f"{base}_mc_stderr"]
    return [f"{base}_{kind}"]


def reproduce_table(figure: str, config: SweepConfig,
                    snr_range_db: tuple[float, float, float] | None = None):
    """``(header, rows)`` of the wide CSV for ``figure``; one row per (D, snr)."""
    if figure not in FIGURES:
        raise ConfigError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    fig = FIGURES[figure]
    start, stop, step = snr_range_db or fig.snr_range_db
    grid = SweepConfig(start, stop, step).snr_grid_db()
    header = ["snr_db", "side_length_m"]
    for curve in fig.curves:
        header += _column(curve)
    header += list(fig.extras)

    rows = []
    for D in fig.side_lengths_m:
        geom = RoomGeometry(D, config.geometry.antenna_height_m)
        coeff = {}
        for s, m, u, kind in fig.curves:
            if kind == "asymptotic" and (s, m) not in coeff:
                coeff[s, m] = asymptotic_coefficient(System(s), config.scheme(m), geom,
                                                     config.channel, config.quadrature_order)
        scheme_name = fig.curves[0][1]
        for snr in grid:
            rho = float(db_to_linear(snr))
            cells = [_fmt_snr(snr), format(D, "g")]
            for s, m, u, kind in fig.curves:
                q = OutageQuery(System(s), config.scheme(m), u, rho, geom, config.channel,
                                config.quadrature_order)
                if kind == "analytic":
                    cells.append(_fmt(outage_probability(q)))
                elif kind == "asymptotic":
                    cells.append(_fmt(coeff[s, m] / rho))
                else:
                    est = _mc(q, config.mc_trials, config.mc_seed, config.workers)
                    cells += [_fmt(est.p_hat), _fmt(est.stderr)] if est else ["", ""]
            for extra in fig.extras:
                scheme = config.scheme(scheme_name)
                if extra == "delta1":
                    cells.append(_fmt(gap_u1(scheme, rho, geom, config.channel)))
                else:
                    cells.append(_fmt(gap_u2_asymptotic(scheme, rho, geom, config.channel,
                                                        config.quadrature_order)))
            rows.append(cells)
    return header, rows


def _write_chart(figure: str, header, rows, path: str):
    try:
        import matplotlib
        matplotlib.use("svg")
        import matplotlib.pyplot as plt
    except ImportError:
        raise ConfigError("--chart needs matplotlib (pip install 'artifact[charts]')") from None
    table = np.array([[float(c) if c else np.nan for c in r] for r in rows])
    fig, ax = plt.subplots(figsize=(7, 5))
    styles = ("-", "--", ":")
    for k, D in enumerate(np.unique(table[:, 1])):
        part = table[table[:, 1] == D]
        for j, name in enumerate(header[2:], start=2):
            if name.endswith("_stderr"):
                continue
            y = np.where(part[:, j] > 0, part[:, j], np.nan)
            if name.endswith("_mc"):
                ax.semilogy(part[:, 0], y, "o", ms=3, label=f"{name} D={D:g}")
            else:
                ax.semilogy(part[:, 0], y, styles[k % 3], label=f"{name} D={D:g}")
    ax.set_xlabel("transmit SNR (dB)")
    ax.set_ylabel("outage probability")
    ax.set_title(FIGURES[figure].title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=6)
    fig.savefig(path, format="svg")
    plt.close(fig)


def cmd_reproduce(figure: str, config: SweepConfig = SweepConfig(),
                  snr_range_db: tuple[float, float, float] | None = None,
                  chart_path: str | None = None) -> str:
    header, rows = reproduce_table(figure, config, snr_range_db)
    text = _render_csv(header, rows)
    _emit(text, config.output_path)
    if chart_path:
        _write_chart(figure, header, rows, chart_path)
    return text


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# flag -> (config key, parser); the same names are accepted in --config files
_SETTINGS = {
    "system": ("systems", lambda v: _split(v, str.upper)),
    "scheme": ("schemes", lambda v: _split(v, str.upper)),
    "user": ("users", lambda v: _split(v, int)),
    "snr_start_db": ("snr_start_db", float),
    "snr_stop_db": ("snr_stop_db", float),
    "snr_step_db": ("snr_step_db", float),
    "side_length": ("side_length", float),
    "height": ("height", float),
    "carrier_ghz": ("carrier_ghz", float),
    "pathloss_exp": ("pathloss_exp", float),
    "alpha1": ("alpha1", float),
    "rate": ("target_rate_bpshz", float),
    "quad_nodes": ("quadrature_order", int),
    "trials": ("mc_trials", int),
    "seed": ("mc_seed", int),
    "out": ("output_path", str),
    "workers": ("workers", int),
}


def _split(value: str, cast):
    return tuple(cast(v.strip()) for v in value.split(",") if v.strip())


def read_config_file(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment, dashes and underscores are interchangeable."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None
    out = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _SETTINGS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _build_config(raw: dict[str, str]) -> SweepConfig:
    """Turn merged string settings into a :class:`SweepConfig`."""
    values = {}
    for key, text in raw.items():
        name, cast = _SETTINGS[key]
        try:
            values[name] = cast(text)
        except ValueError:
            raise ConfigError(f"bad value for {key}: {text!r}") from None
    try:
        geometry = RoomGeometry(values.pop("side_length", 20.0), values.pop("height", 5.0))
        channel = ChannelParams(carrier_frequency_hz=values.pop("carrier_ghz", 10.0) * 1e9,
                                pathloss_exponent=values.pop("pathloss_exp", 6.0))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return SweepConfig(geometry=geometry, channel=channel, **values)


def _add_common(p: argparse.ArgumentParser, with_selection: bool):
    p.add_argument("--config", help="key = value file; flags override its entries")
    if with_selection:
        p.add_argument("--system", help="comma list of CASS, PASS (default both)")
        p.add_argument("--scheme", help="comma list of OMA, NOMA (default both)")
        p.add_argument("--user", help="comma list of 1, 2 (default both)")
    p.add_argument("--snr-start-db", help="first SNR point in dB")
    p.add_argument("--snr-stop-db", help="last SNR point in dB (inclusive)")
    p.add_argument("--snr-step-db", help="SNR spacing in dB")
    p.add_argument("--side-length", help="room side length D in m (default 20)")
    p.add_argument("--height", help="antenna height d in m (default 5)")
    p.add_argument("--carrier-ghz", help="carrier frequency in GHz (default 10)")
    p.add_argument("--pathloss-exp", help="NLoS path-loss exponent (default 6)")
    p.add_argument("--alpha1", help="NOMA power share of U1 (default 0.1)")
    p.add_argument("--rate", help="target rate in bit/s/Hz (default 1)")
    p.add_argument("--quad-nodes", help="Chebyshev-Gauss order per segment (default 100)")
    p.add_argument("--trials", help="Monte-Carlo trials per point, 0 to skip")
    p.add_argument("--seed", help="Monte-Carlo seed (default 0)")
    p.add_argument("--workers", help="threads for sweep points / simulation batches")
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pinching-outage",
                     description="Outage probabilities of two-user CASS/PASS links.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sweep = sub.add_parser("sweep", argument_default=argparse.SUPPRESS,
                           help="long-format CSV over an SNR grid")
    _add_common(sweep, with_selection=True)

    validate = sub.add_parser("validate", help="run the self-check suites")
    validate.add_argument("--level", choices=("quick", "full"), default="quick")
    validate.add_argument("--checks", default=",".join(SUITES),
                          help=f"comma list of suites ({', '.join(SUITES)})")
    validate.add_argument("--seed", type=int, default=0)
    validate.add_argument("--workers", type=int, default=1)
    validate.add_argument("--out", help="JSON summary file (default stdout)")

    rep = sub.add_parser("reproduce", argument_default=argparse.SUPPRESS,
                         help="wide CSV of one standard figure")
    rep.add_argument("figure", choices=tuple(FIGURES))
    _add_common(rep, with_selection=False)
    rep.add_argument("--chart", help="also write an SVG chart here (needs matplotlib)")
    return parser


_SNR_KEYS = ("snr_start_db", "snr_stop_db", "snr_step_db")


def _merged_settings(ns: argparse.Namespace) -> dict[str, str]:
    given = {k: v for k, v in vars(ns).items() if k in _SETTINGS}
    config_path = getattr(ns, "config", None)
    merged = read_config_file(config_path) if config_path else {}
    merged.update(given)
    return merged


def _run(argv) -> int:
    ns = build_parser().parse_args(argv)
    if ns.command == "validate":
        suites = _split(ns.checks, str.strip)
        if not suites or set(suites) - set(SUITES):
            raise ConfigError(f"--checks must name suites from {', '.join(SUITES)}")
        ok, summary = cmd_validate(ns.level, seed=ns.seed, suites=suites, workers=ns.workers,
                                   output_path=ns.out)
        for name in summary["failed"]:
            print(f"FAILED: {name}", file=sys.stderr)
        return EXIT_OK if ok else EXIT_VALIDATION

    settings = _merged_settings(ns)
    if ns.command == "sweep":
        cmd_sweep(_build_config(settings))
        return EXIT_OK

    fig = FIGURES[ns.figure]
    snr = dict(zip(_SNR_KEYS, map(str, fig.snr_range_db)))
    snr.update({k: settings.pop(k) for k in _SNR_KEYS if k in settings})
    settings.setdefault("trials", "100000")
    config = _build_config(settings)
    snr_range = tuple(float(snr[k]) for k in _SNR_KEYS)
    SweepConfig(*snr_range)  # same grid checks as sweep
    cmd_reproduce(ns.figure, config, snr_range, getattr(ns, "chart", None))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        return _run(argv)
    except SystemExit as exc:  # argparse: --help (0) or a usage error (1)
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except ConfigError as exc:
        print(f"pinching-outage: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pinching-outage: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
