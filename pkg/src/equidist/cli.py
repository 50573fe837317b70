"""Batch command-line front end.

Exit codes are the scripting contract: 0 means the requested check passed
(or the command is purely generative), 2 means a refutation verdict was
reached, and 1 means the run failed before producing a verdict.  Reports
embed the resolved config, the tool version, and the checkpoint grid, and
identical config plus master rng seed produces a byte-identical JSON
report for any worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import numpy as np

from . import __version__
from .arithmetic import SeedSampler
from .discrepancy import star_discrepancy_1d
from .errors import EquidistError
from .generators import (
    ArithmeticIndices,
    GeneratorSpec,
    WindowConfig,
    beta_stream,
    export_stream_csv,
)
from .stochastic import (
    GammaStream,
    _draw_seeds,
    _pmap,
    c_of_m_scan,
    default_bit_source,
    gamma_index,
    lemma3_check,
    wcud_check,
)
from .weyl import (
    MultiIndex,
    checkpoint_grid,
    criterion_scan,
    degenerate_m_multiplicative,
    degenerate_m_weyl,
)

COMMANDS = (
    "generate",
    "weyl",
    "discrepancy",
    "covariance",
    "wcud",
    "degenerate",
    "gamma",
)

FAMILY_ALIASES = {
    "weyl": "weyl_power",
    "weyl_power": "weyl_power",
    "multiplicative": "multiplicative",
    "factorial": "factorial",
    "self_power": "self_power",
    "self-power": "self_power",
    "linear": "linear_integer",
    "linear_integer": "linear_integer",
    "koksma": "koksma",
}


@dataclass
class RunConfig:
    """Flat, text-serializable description of one CLI run."""

    command: str = "weyl"
    family: str = "factorial"
    power: int = 1
    base: int = 2
    koksma_hi: str = "2"
    coeff_start: int = 1
    coeff_stride: int = 1
    d: int = 1
    h: int = 1
    o: int = 0
    construction: str = "sliding_bc"
    n_max: int = 10000
    m_radius: int = 2
    m_components: str = "1"
    big_h: int = 8
    n_seeds: int = 32
    seed_bits: int = 256
    master_rng_seed: int = 1
    count: int = 4
    bits: int = 32
    workers: int = 1
    flag_threshold: float = 0.9
    output_path: str = ""
    output_format: str = "json"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.family not in FAMILY_ALIASES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.output_format!r}")
        if self.construction not in ("sliding_bc", "interleaved_a"):
            raise ValueError(f"unknown construction {self.construction!r}")
        positives = (
            "power",
            "base",
            "d",
            "h",
            "n_max",
            "m_radius",
            "big_h",
            "n_seeds",
            "seed_bits",
            "count",
            "bits",
        )
        for name in positives:
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.o < 0:
            raise ValueError(f"o must be nonnegative, got {self.o}")
        if self.workers < 0:
            raise ValueError("workers must be 0 (auto) or positive")
        if self.flag_threshold <= 0:
            raise ValueError("flag_threshold must be positive")
        if Fraction(self.koksma_hi) <= 1:
            raise ValueError(f"koksma_hi must exceed 1, got {self.koksma_hi}")
        for piece in self.m_components.split(","):
            int(piece)  # raises ValueError with the offending text

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, str) and ("\n" in value or "=" in value):
                raise ValueError(f"{f.name} cannot be serialized: {value!r}")
            lines.append(f"{f.name}={value!r}" if isinstance(value, float) else f"{f.name}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        kinds = {f.name: f.type for f in fields(cls)}
        casts = {"int": int, "float": float, "str": str}
        values = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in kinds:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = casts[kinds[key]](val.strip())
        return cls(**values)

    def spec(self) -> GeneratorSpec:
        family = FAMILY_ALIASES[self.family]
        if family == "weyl_power":
            return GeneratorSpec.weyl(self.power)
        if family == "multiplicative":
            return GeneratorSpec.multiplicative(self.base)
        if family == "factorial":
            return GeneratorSpec.factorial()
        if family == "self_power":
            return GeneratorSpec.self_power()
        if family == "linear_integer":
            return GeneratorSpec.linear(
                ArithmeticIndices(self.coeff_start, self.coeff_stride)
            )
        return GeneratorSpec.koksma(Fraction(self.koksma_hi))

    def window(self) -> WindowConfig:
        return WindowConfig(d=self.d, h=self.h, o=self.o, construction=self.construction)

    def multi_index(self) -> MultiIndex:
        components = tuple(int(p) for p in self.m_components.split(","))
        if len(components) != self.d:
            raise ValueError(
                f"m has {len(components)} components but d={self.d}; pass --m with d entries"
            )
        return MultiIndex(components)

    def resolved_workers(self) -> int:
        if self.workers > 0:
            return self.workers
        probe = getattr(os, "process_cpu_count", os.cpu_count)()
        return probe or 1


# -- report plumbing ---------------------------------------------------------


def _report_path(cfg: RunConfig) -> str:
    if cfg.output_path:
        return cfg.output_path
    env_dir = os.environ.get("EQUIDIST_OUTPUT_DIR", "")
    if env_dir:
        return os.path.join(env_dir, f"{cfg.command}_report.{cfg.output_format}")
    return ""


def _write_report(cfg: RunConfig, payload: dict, csv_rows=None, csv_header=None) -> str:
    path = _report_path(cfg)
    if not path:
        return ""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    if cfg.output_format == "csv":
        if csv_rows is None:
            raise ValueError(f"{cfg.command} has no tabular export; use --format json")
        with open(path, "w") as fh:
            fh.write(",".join(csv_header) + "\n")
            for row in csv_rows:
                fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
        return path
    report = {
        "config": asdict(cfg),
        "version": __version__,
        "checkpoints": list(checkpoint_grid(cfg.n_max)),
    }
    report.update(payload)
    with open(path, "w") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return path


def _series_payload(scan) -> dict:
    out = {}
    for m, series in sorted(scan.series.items(), key=lambda kv: kv[0].components):
        out[str(m.components)] = {
            "checkpoints": list(series.checkpoints),
            "magnitudes": [float(v) for v in series.magnitudes],
        }
    return out


# -- commands ----------------------------------------------------------------


def _sample_scan_seed(cfg: RunConfig, spec: GeneratorSpec):
    sampler = SeedSampler(cfg.master_rng_seed, cfg.seed_bits)
    interval = spec.seed_interval()
    if cfg.construction == "interleaved_a":
        return [sampler.sample(interval) for _ in range(cfg.d)]
    return sampler.sample(interval)


def cmd_generate(cfg: RunConfig) -> int:
    spec = cfg.spec()
    seed = SeedSampler(cfg.master_rng_seed, cfg.seed_bits).sample(spec.seed_interval())
    stream = beta_stream(spec, seed, cfg.n_max)
    path = _report_path(cfg)
    if path and cfg.output_format == "csv":
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        export_stream_csv(path, stream)
        print(f"wrote {len(stream)} samples to {path}")
        return 0
    values = [s.as_float() for s in stream]
    payload = {
        "seed": str(seed),
        "values": values,
        "exact": all(s.exact for s in stream),
    }
    written = _write_report(cfg, payload)
    if written:
        print(f"wrote {len(stream)} samples to {written}")
    else:
        for k, v in enumerate(values, start=1):
            print(f"{k},{v!r}")
    return 0


def cmd_weyl(cfg: RunConfig) -> int:
    spec = cfg.spec()
    seed = _sample_scan_seed(cfg, spec)
    scan = criterion_scan(spec, seed, cfg.window(), cfg.m_radius, cfg.n_max)
    flagged = scan.flagged(cfg.flag_threshold)
    verdict = "refuted" if flagged else "pass"
    payload = {
        "seed": [str(s) for s in seed] if isinstance(seed, list) else str(seed),
        "series": _series_payload(scan),
        "worst_m": list(scan.worst_m.components),
        "worst_final_magnitude": scan.worst_final_magnitude,
        "flag_threshold": cfg.flag_threshold,
        "flagged": [list(m.components) for m in flagged],
        "verdict": verdict,
    }
    rows = []
    for m, series in sorted(scan.series.items(), key=lambda kv: kv[0].components):
        for n, mag in zip(series.checkpoints, series.magnitudes):
            rows.append((" ".join(map(str, m.components)), n, float(mag)))
    _write_report(cfg, payload, rows, ("m", "N", "magnitude"))
    for m in flagged:
        final = scan.series[m].final_magnitude
        print(f"flagged m={m} |W_N|={final:.6f}")
    print(f"weyl scan verdict: {verdict} (worst m={scan.worst_m}, |W_N|={scan.worst_final_magnitude:.6f})")
    return 2 if flagged else 0


def _star_job(job):
    spec, cps, seed = job
    stream = beta_stream(spec, seed, cps[-1])
    values = np.array([s.as_float() for s in stream])
    return [star_discrepancy_1d(values[:n]).value for n in cps]


def cmd_discrepancy(cfg: RunConfig) -> int:
    spec = cfg.spec()
    if cfg.d != 1:
        raise ValueError("the discrepancy trend command is 1-D; use the library for d > 1")
    cps = checkpoint_grid(cfg.n_max)
    seeds = _draw_seeds(spec, cfg.n_seeds, cfg.master_rng_seed, cfg.seed_bits)
    table = _pmap(_star_job, [(spec, cps, s) for s in seeds], cfg.resolved_workers())
    mat = np.array(table)  # (n_seeds, n_cps)
    med = np.median(mat, axis=0)
    q10 = np.quantile(mat, 0.1, axis=0)
    q90 = np.quantile(mat, 0.9, axis=0)
    payload = {
        "star_median": [float(v) for v in med],
        "star_q10": [float(v) for v in q10],
        "star_q90": [float(v) for v in q90],
        "final_fraction_below_005": float(np.mean(mat[:, -1] <= 0.05)),
    }
    rows = [
        (n, float(a), float(b), float(c))
        for n, a, b, c in zip(cps, med, q10, q90)
    ]
    written = _write_report(cfg, payload, rows, ("N", "median", "q10", "q90"))
    print(
        f"D* trend over {cfg.n_seeds} seeds: final median {float(med[-1]):.5f}"
        + (f" (report: {written})" if written else "")
    )
    return 0


def cmd_covariance(cfg: RunConfig) -> int:
    spec = cfg.spec()
    m = cfg.multi_index()
    payload = {}
    if spec.family != "koksma":
        scan = c_of_m_scan(spec, m)
        payload["c_of_m"] = {
            "c": scan.c,
            "conclusive": scan.conclusive,
            "zero_pairs": [list(p) for p in scan.zero_pairs],
            "max_lag": scan.max_lag,
            "probe": scan.probe,
        }
    check = lemma3_check(
        spec,
        cfg.window(),
        m,
        cfg.n_max,
        n_seeds=cfg.n_seeds,
        master_seed=cfg.master_rng_seed,
        bit_width=cfg.seed_bits,
        workers=cfg.resolved_workers(),
    )
    payload["far_pairs"] = {
        "n": check.n,
        "pairs": [list(p) for p in check.pairs],
        "estimates": list(check.estimates),
        "stderrs": list(check.stderrs),
        "empirical_max": check.empirical_max,
        "c_hat": check.c_hat,
        "implied_budget": check.implied_budget,
        "exact": check.exact,
    }
    payload["verdict"] = check.verdict
    _write_report(cfg, payload)
    print(
        f"far-pair covariance verdict: {check.verdict}"
        f" (max |cov| {check.empirical_max:.6f}, c_hat {check.c_hat:.6f})"
    )
    return 2 if check.verdict == "fail" else 0


def cmd_wcud(cfg: RunConfig) -> int:
    spec = cfg.spec()
    diag = wcud_check(
        spec,
        cfg.window(),
        cfg.multi_index(),
        cfg.n_max,
        n_seeds=cfg.n_seeds,
        master_seed=cfg.master_rng_seed,
        bit_width=cfg.seed_bits,
        workers=cfg.resolved_workers(),
    )
    verdict = diag.verdicts["wcud"]
    payload = {
        "checkpoints_used": list(diag.checkpoints),
        "s_over_n": list(diag.s_over_n),
        "s_over_n_stderr": list(diag.s_over_n_stderr),
        "verdict": verdict,
        "details": diag.details,
    }
    rows = [
        (n, v, e)
        for n, v, e in zip(diag.checkpoints, diag.s_over_n, diag.s_over_n_stderr)
    ]
    _write_report(cfg, payload, rows, ("N", "mean_abs_s_over_n", "stderr"))
    print(f"wcud verdict: {verdict} (final E|S_N|/N = {diag.s_over_n[-1]:.6f})")
    return 2 if verdict == "refuted" else 0


def cmd_degenerate(cfg: RunConfig) -> int:
    family = FAMILY_ALIASES[cfg.family]
    if family == "weyl_power":
        m = degenerate_m_weyl(cfg.power)
    elif family == "multiplicative":
        m = degenerate_m_multiplicative(cfg.base)
    else:
        raise ValueError("degenerate certificates exist for weyl and multiplicative families")
    payload = {"family": family, "m": list(m.components)}
    _write_report(cfg, payload)
    print(str(m))
    return 0


def cmd_gamma(cfg: RunConfig) -> int:
    table = [
        [gamma_index(i, j) for j in range(1, cfg.bits + 1)]
        for i in range(1, cfg.count + 1)
    ]
    source = default_bit_source(cfg.master_rng_seed, cfg.seed_bits)
    uniforms = GammaStream(source, cfg.bits).uniforms(cfg.count)
    payload = {
        "indices": table,
        "uniforms": [float(u) for u in uniforms],
        "mean": float(np.mean(uniforms)) if cfg.count else 0.0,
    }
    _write_report(cfg, payload)
    for row in table:
        print(" ".join(str(v) for v in row))
    return 0


_HANDLERS = {
    "generate": cmd_generate,
    "weyl": cmd_weyl,
    "discrepancy": cmd_discrepancy,
    "covariance": cmd_covariance,
    "wcud": cmd_wcud,
    "degenerate": cmd_degenerate,
    "gamma": cmd_gamma,
}


def run(cfg: RunConfig) -> int:
    """Validate and execute one run; returns the process exit code."""
    try:
        cfg.validate()
        return _HANDLERS[cfg.command](cfg)
    except (EquidistError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; our contract reserves 2 for refutations."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(p: _Parser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--save-config", help="write the resolved config to this path")
    p.add_argument("--family", help="generator family")
    p.add_argument("--p", dest="power", type=int, help="Weyl power exponent")
    p.add_argument("--M", dest="base", type=int, help="multiplicative base")
    p.add_argument("--hi", dest="koksma_hi", help="Koksma interval upper bound (fraction)")
    p.add_argument("--coeff-start", dest="coeff_start", type=int)
    p.add_argument("--coeff-stride", dest="coeff_stride", type=int)
    p.add_argument("--d", dest="d", type=int, help="window dimension")
    p.add_argument("--h", dest="h", type=int, help="window step")
    p.add_argument("--o", dest="o", type=int, help="window offset")
    p.add_argument("--construction", choices=("sliding_bc", "interleaved_a"))
    p.add_argument("--N", dest="n_max", type=int, help="sequence length")
    p.add_argument("--m-radius", dest="m_radius", type=int)
    p.add_argument("--m", dest="m_components", help="comma-separated multi-index")
    p.add_argument("--H", dest="big_h", type=int, help="ETK truncation radius")
    p.add_argument("--n-seeds", dest="n_seeds", type=int)
    p.add_argument("--seed-bits", dest="seed_bits", type=int)
    p.add_argument("--master-seed", dest="master_rng_seed", type=int)
    p.add_argument("--count", dest="count", type=int, help="uniforms to emit")
    p.add_argument("--bits", dest="bits", type=int, help="bits per uniform")
    p.add_argument("--workers", dest="workers", type=int, help="0 = all cores")
    p.add_argument("--flag-threshold", dest="flag_threshold", type=float)
    p.add_argument("--output", dest="output_path", help="report path")
    p.add_argument("--format", dest="output_format", choices=("json", "csv"))


def parse_args(argv) -> RunConfig:
    parser = _Parser(prog="equidist", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _add_common(sub.add_parser(name, help=f"{name} command"))
    ns = parser.parse_args(argv)
    if ns.config:
        with open(ns.config) as fh:
            cfg = RunConfig.from_text(fh.read())
    else:
        cfg = RunConfig()
    cfg.command = ns.command
    for f in fields(RunConfig):
        value = getattr(ns, f.name, None)
        if value is not None and f.name != "command":
            setattr(cfg, f.name, value)
    if ns.save_config:
        with open(ns.save_config, "w") as fh:
            fh.write(cfg.to_text())
    return cfg


def main(argv=None) -> None:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)
    raise SystemExit(run(cfg))


if __name__ == "__main__":
    main()
