"""``nbspec-lab run --config FILE [overrides]``.

Exit status: 0 when every enabled check passes, 1 when one fails, 2 for a
rejected configuration or an output error.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..errors import ConfigInvalid, EmitError
from .config import load_config, make_config
from .experiments import run_trials, summarize
from .records import emit, write_scatter_csv


def _list_or_scalar(kind):
    def parse(text):
        parts = [s for s in text.replace(",", " ").split() if s]
        try:
            vals = [kind(s) for s in parts]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
        return vals if len(vals) > 1 else vals[0]
    return parse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nbspec-lab")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("--config", required=True)
    run.add_argument("--experiment")
    run.add_argument("--n", type=_list_or_scalar(int), help="one value or a comma list")
    run.add_argument("--p", type=_list_or_scalar(float), help="one value or a comma list")
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--out")
    run.add_argument("--workers", type=int)
    run.add_argument("--format", choices=("csv", "json", "both"), default="both")
    return ap


def run(cfg, fmt: str = "both") -> dict:
    """Run ``cfg``, write its outputs and return the summary."""
    records = run_trials(cfg)
    summary = summarize(cfg, records)
    files = emit(records, fmt, cfg.out, cfg.experiment, cfg.as_dict())
    if cfg.experiment == "figure1":
        for r in records:
            if r.ok:
                path = cfg.out / f"figure1_n{r.n}_p{r.p!r}_t{r.trial}.csv"
                partners = [r.eig_H0[i] for i in r.metrics["nearest_H0"]]
                files.append(write_scatter_csv(path, r.eig_H, partners, r.metrics["matched_distance"]))
    summary["files"] = [str(f) for f in files]
    return summary


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        values = load_config(args.config)
        for key in ("experiment", "n", "p", "trials", "seed", "out", "workers"):
            v = getattr(args, key)
            if v is not None:
                values[key] = v
        cfg = make_config(values)
        summary = run(cfg, args.format)
    except (ConfigInvalid, EmitError) as exc:
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 2
    print(json.dumps(summary, sort_keys=True))
    return 0 if summary["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
