"""Command-line front end.

Every command writes one CSV (default) or JSON document to --out or stdout.
Exit codes: 0 success, 1 check failure, 2 usage error, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from . import __version__
from .continuum import (
    EnergySystem,
    boltzmann_pdf,
    energy_grid,
    finite_n_energy_cdf,
    finite_n_energy_pdf,
    hyperplane_area,
    limit_convergence,
    moments,
    moments_by_summation,
    sample_energy_simplex_batch,
)
from .occupancy import (
    configurations,
    enumerate_level_states,
    gf_mean_occupancy,
    gf_total_configurations,
    level_pmf,
    mean_occupancy,
    most_probable_states,
    total_configurations,
)
from .partitions import partition_count, partition_integral, restricted_partition_count
from .quanta import count_states, cross_route_check, make_rng, quanta_pmf, sample_stats

SCHEMA = "quanta-stats/1"
COMMANDS = ("dist", "enumerate", "partition", "sample", "limit", "continuum", "check")

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    N: int | None = None
    s: int | None = None
    E: float | None = None
    mean: str | None = None
    seed: int = 0
    draws: int = 0
    ladder: int = 4
    output_format: str = "csv"
    output_path: str | None = None

    def require(self, *names: str) -> None:
        missing = [f"--{n}" for n in names if getattr(self, n) is None]
        if missing:
            raise UsageError(f"{self.command} needs {', '.join(missing)}")

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.N is not None and self.N < 1:
            raise UsageError("--N must be >= 1")
        if self.s is not None and self.s < 0:
            raise UsageError("--s must be >= 0")
        if self.draws < 0:
            raise UsageError("--draws must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must fit in 64 bits")
        if self.command in ("dist", "enumerate", "sample"):
            self.require("N", "s")
        elif self.command == "partition":
            self.require("s")
            if self.s < 1:
                raise UsageError("--s must be >= 1 for partition")
        elif self.command == "limit":
            self.require("mean")
            if self.ladder < 2:
                raise UsageError("--ladder needs at least 2 rungs")
            if self.N is not None and self.N < 2:
                raise UsageError("--N (ladder base) must be >= 2")
        elif self.command == "continuum":
            self.require("N")
            if self.N < 2:
                raise UsageError("--N must be >= 2 for continuum")
            if (self.E is None) == (self.mean is None):
                raise UsageError("continuum needs exactly one of --E, --mean")
            if self.E is not None and not self.E > 0:
                raise UsageError("--E must be positive")
        if self.command == "sample" and self.draws < 1:
            raise UsageError("sample needs --draws >= 1")
        if self.mean is not None:
            try:
                m = Fraction(self.mean)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--mean {self.mean!r} is not a number") from None
            if m <= 0:
                raise UsageError("--mean must be positive")


def thread_cap() -> int:
    raw = os.environ.get("QUANTA_STATS_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"QUANTA_STATS_THREADS={raw!r} is not an integer") from None
    if n < 1:
        raise UsageError("QUANTA_STATS_THREADS must be >= 1")
    return n


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj: dict) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2) + "\n"


def _frac_cells(p: Fraction) -> list[str]:
    return [str(p.numerator), str(p.denominator)]


def _float(x) -> str:
    return repr(float(x))


def cmd_dist(cfg: RunConfig):
    levels, quanta = level_pmf(cfg.N, cfg.s), quanta_pmf(cfg.N, cfg.s)
    equal = levels.same_values(quanta)
    if cfg.output_format == "json":
        text = _json_text({
            "command": "dist",
            "N": cfg.N,
            "s": cfg.s,
            "routes_equal": equal,
            "levels": levels.to_json_obj(),
            "quanta": quanta.to_json_obj(),
        })
    else:
        rows = [
            [k, *_frac_cells(a), *_frac_cells(b), _float(a), str(a == b).lower()]
            for k, (a, b) in enumerate(zip(levels.entries, quanta.entries))
        ]
        text = _csv_text(
            ["k", "levels_num", "levels_den", "quanta_num", "quanta_den", "float", "equal"],
            rows,
        )
    return (EXIT_OK if equal else EXIT_CHECK), text


def cmd_enumerate(cfg: RunConfig):
    N, s = cfg.N, cfg.s
    total = total_configurations(N, s)
    states = enumerate_level_states(N, s)
    best = {rec.state for rec in most_probable_states(N, s)}
    records = []
    for st in states:
        c = configurations(st)
        records.append((st, c, Fraction(c, total), st in best))
    if cfg.output_format == "json":
        text = _json_text({
            "command": "enumerate",
            "N": N,
            "s": s,
            "C_I": str(total),
            "S_I": len(states),
            "most_probable_unique": len(best) == 1,
            "states": [
                {
                    "n": list(st.occupancies),
                    "configurations": str(c),
                    "num": str(p.numerator),
                    "den": str(p.denominator),
                    "most_probable": flag,
                }
                for st, c, p, flag in records
            ],
        })
    else:
        header = [f"n_{k}" for k in range(s + 1)] + [
            "configurations", "num", "den", "float", "most_probable"]
        rows = [
            [*st.occupancies, c, *_frac_cells(p), _float(p), str(flag).lower()]
            for st, c, p, flag in records
        ]
        text = _csv_text(header, rows)
    return EXIT_OK, text


def cmd_partition(cfg: RunConfig):
    rep = partition_integral(cfg.s)
    exact = partition_count(cfg.s)
    fields = {
        "s": cfg.s,
        "p_s": str(exact),
        "integral": rep.value,
        "abs_error_estimate": rep.abs_error_estimate,
        "panels": rep.panels,
        "min_denominator_distance": rep.min_denominator_distance,
        "converged": rep.converged,
    }
    if cfg.output_format == "json":
        text = _json_text({"command": "partition", **fields})
    else:
        row = [
            cfg.s, exact, _float(rep.value), _float(rep.abs_error_estimate), rep.panels,
            _float(rep.min_denominator_distance), str(rep.converged).lower(),
        ]
        text = _csv_text(list(fields), [row])
    return (EXIT_OK if rep.converged else EXIT_NONCONVERGED), text


def _chi_square(observed: np.ndarray, probs: np.ndarray) -> tuple[float, int, float]:
    keep = probs > 0
    expected = probs[keep] * observed.sum()
    stat = float(((observed[keep] - expected) ** 2 / expected).sum())
    dof = int(keep.sum()) - 1
    return stat, dof, float(stats.chi2.sf(stat, dof)) if dof > 0 else 1.0


def cmd_sample(cfg: RunConfig):
    N, s = cfg.N, cfg.s
    st, state_counts, slot_counts = sample_stats(N, s, cfg.draws, cfg.seed)
    pmf = quanta_pmf(N, s)
    probs = np.array([float(p) for p in pmf.entries])
    pooled = np.array([st.hist.get(k, 0) for k in range(s + 1)], dtype=float)
    summary = {}
    if state_counts.size:
        n_states = count_states(N, s)
        stat, dof, pval = _chi_square(state_counts.astype(float), np.full(n_states, 1.0 / n_states))
        summary["state_chi2"] = {"statistic": stat, "dof": dof, "p_value": pval}
    # pooled slots are dependent; test the first particle's marginal only
    stat, dof, pval = _chi_square(slot_counts[0].astype(float), probs)
    summary["slot1_chi2"] = {"statistic": stat, "dof": dof, "p_value": pval}
    if cfg.output_format == "json":
        text = _json_text({"command": "sample", **st.to_json_obj(), "summary": summary})
    else:
        total = st.draws * N
        rows = [
            [k, int(pooled[k]), _float(pooled[k] / total), _float(probs[k])]
            for k in range(s + 1)
        ]
        text = _csv_text(["k", "count", "freq", "expected"], rows)
    print(json.dumps({"seed": cfg.seed, "draws": st.draws, **summary}), file=sys.stderr)
    return EXIT_OK, text


def cmd_limit(cfg: RunConfig):
    base = cfg.N if cfg.N is not None else 10
    ladder = [2**i for i in range(cfg.ladder)]
    rows = limit_convergence(Fraction(cfg.mean), ladder, base_N=base)
    tv = [r.tv_exponential for r in rows]
    decreasing = all(b < a for a, b in zip(tv, tv[1:]))
    if cfg.output_format == "json":
        text = _json_text({
            "command": "limit",
            "mean": str(Fraction(cfg.mean)),
            "strictly_decreasing": decreasing,
            "rows": [vars(r) for r in rows],
        })
    else:
        text = _csv_text(
            ["scale", "N", "s", "tv_exponential", "tv_bose"],
            [[r.scale, r.N, r.s, _float(r.tv_exponential), _float(r.tv_bose)] for r in rows],
        )
    return (EXIT_OK if decreasing else EXIT_CHECK), text


def cmd_continuum(cfg: RunConfig):
    E = cfg.E if cfg.E is not None else float(Fraction(cfg.mean)) * cfg.N
    sys_ = EnergySystem(cfg.N, E)
    grid = energy_grid(sys_.mean_energy)
    grid = grid[grid <= E]
    finite = finite_n_energy_pdf(sys_, grid)
    boltz = boltzmann_pdf(sys_.mean_energy, grid)
    extra = {"hyperplane_area": hyperplane_area(sys_)}
    if cfg.draws:
        x = sample_energy_simplex_batch(sys_, cfg.draws, make_rng(cfg.seed))[:, 0]
        ks = stats.kstest(x, lambda e: finite_n_energy_cdf(sys_, np.clip(e, 0, E)))
        extra["ks_statistic"] = float(ks.statistic)
        extra["ks_threshold_alpha_0.01"] = 1.63 / np.sqrt(cfg.draws)
    if cfg.output_format == "json":
        text = _json_text({
            "command": "continuum",
            "N": cfg.N,
            "E": E,
            "mean_energy": sys_.mean_energy,
            **extra,
            "grid": [
                {"eps": float(e), "pdf_finite": float(f), "pdf_boltzmann": float(b)}
                for e, f, b in zip(grid, finite, boltz)
            ],
        })
    else:
        text = _csv_text(
            ["eps", "pdf_finite", "pdf_boltzmann"],
            [[_float(e), _float(f), _float(b)] for e, f, b in zip(grid, finite, boltz)],
        )
    if cfg.draws:
        print(json.dumps({k: float(v) for k, v in extra.items()}), file=sys.stderr)
    return EXIT_OK, text


def check_case(N: int, s: int, enumerate_up_to: int = 8) -> dict:
    """All exact identities for one (N, s); returns the failures found."""
    failures = [*cross_route_check(N, s).failures]
    closed = total_configurations(N, s)
    if gf_total_configurations(N, s) != closed:
        failures.append("gf total configurations")
    if moments(N, s) != moments_by_summation(level_pmf(N, s)):
        failures.append("moments")
    if N >= 2:
        for k in range(s + 1):
            if gf_mean_occupancy(N, s, k) != mean_occupancy(N, s, k):
                failures.append(f"gf mean occupancy k={k}")
    info = []
    if N <= enumerate_up_to and s <= enumerate_up_to:
        states = enumerate_level_states(N, s)
        if len(states) != restricted_partition_count(s, min(N, s)):
            failures.append("level state count")
        if sum(configurations(st) for st in states) != closed:
            failures.append("enumerated configurations")
        ties = most_probable_states(N, s)
        if len(ties) > 1:
            info.append(
                f"most probable state not unique: {[list(r.state.occupancies) for r in ties]}"
            )
    return {"N": N, "s": s, "failures": failures, "info": info}


def _check_case_args(args):
    return check_case(*args)


def cmd_check(cfg: RunConfig):
    n_max = cfg.N if cfg.N is not None else 12
    s_max = cfg.s if cfg.s is not None else 12
    cases = [(N, s) for N in range(1, n_max + 1) for s in range(s_max + 1)]
    workers = thread_cap()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_case_args, cases, chunksize=8))
    else:
        results = [check_case(N, s) for N, s in cases]
    failing = [r for r in results if r["failures"]]
    informational = [r for r in results if r["info"]]
    if cfg.output_format == "csv":
        text = _csv_text(
            ["N", "s", "passed", "failures", "info"],
            [[r["N"], r["s"], str(not r["failures"]).lower(), "; ".join(r["failures"]),
              "; ".join(r["info"])] for r in results],
        )
    else:
        text = _json_text({
            "command": "check",
            "N_max": n_max,
            "s_max": s_max,
            "cases": len(results),
            "passed": not failing,
            "failures": failing,
            "informational": informational,
        })
    return (EXIT_CHECK if failing else EXIT_OK), text


HANDLERS = {
    "dist": cmd_dist,
    "enumerate": cmd_enumerate,
    "partition": cmd_partition,
    "sample": cmd_sample,
    "limit": cmd_limit,
    "continuum": cmd_continuum,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quanta-stats",
        description="Exact statistics of s quanta shared among N particles.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int)
    common.add_argument("--s", type=int)
    common.add_argument("--E", type=float)
    common.add_argument("--mean", type=str, help="mean quanta or mean energy")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--draws", type=int, default=0)
    common.add_argument("--ladder", type=int, default=4)
    common.add_argument("--format", dest="output_format", choices=("csv", "json"))
    common.add_argument("--out", dest="output_path")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "dist": "p(k) from both counting routes",
        "enumerate": "level states with configuration counts",
        "partition": "partition number by exact count and integral",
        "sample": "uniform state sampler histogram",
        "limit": "distance to the geometric limit along a doubling ladder",
        "continuum": "finite-N energy density against the Boltzmann law",
        "check": "sweep of exact identities (N <= --N, s <= --s)",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def run(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate()
    return HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.output_format or ("json" if args.command == "check" else "csv")
    cfg = RunConfig(
        command=args.command, N=args.N, s=args.s, E=args.E, mean=args.mean,
        seed=args.seed, draws=args.draws, ladder=args.ladder,
        output_format=fmt, output_path=args.output_path,
    )
    try:
        code, text = run(cfg)
    except (UsageError, ValueError) as exc:
        print(f"quanta-stats {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
