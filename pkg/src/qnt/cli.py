"""Command-line front end.

    qnt star|sweep|spam-s|spam-m|etch|loss [options]

Common options: --topology FILE --s VAL --m VAL --m-samples LIST
--n-samples LIST --trials K --seed S --out FILE.  Sample lists accept
comma-separated values and start:stop:step ranges (inclusive stop).  The
seed falls back to the ``QNT_SEED`` environment variable, then to 12345.
Default grids are desk scale (step 1000, 100 trials); ``--full-scale``
restores the reference scale (step 100, 1000 trials).
"""

from __future__ import annotations

import argparse
import os
from typing import Optional, Sequence

from .experiments import ExperimentConfig, write_experiment


def parse_int_list(text: str) -> tuple[int, ...]:
    """Parse '100,200' or '100:1000:100' (or a mix, comma-separated)."""
    values: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" in chunk:
            parts = chunk.split(":")
            if len(parts) != 3:
                raise argparse.ArgumentTypeError(f"range must be start:stop:step, got {chunk!r}")
            start, stop, step = (int(p) for p in parts)
            if step <= 0:
                raise argparse.ArgumentTypeError("range step must be positive")
            values.extend(range(start, stop + 1, step))
        else:
            values.append(int(chunk))
    if not values:
        raise argparse.ArgumentTypeError(f"empty sample list {text!r}")
    return tuple(values)


def parse_float_list(text: str) -> tuple[float, ...]:
    values = tuple(float(chunk) for chunk in text.split(",") if chunk.strip())
    if not values:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return values


def parse_spam_grid(text: str) -> tuple[tuple[float, float], ...]:
    """Parse 's1:m1;s2:m2' pairs for the sweep experiment."""
    grid = []
    for pair in text.split(";"):
        pair = pair.strip()
        if not pair:
            continue
        s_text, m_text = pair.split(":")
        grid.append((float(s_text), float(m_text)))
    if not grid:
        raise argparse.ArgumentTypeError(f"empty SPAM grid {text!r}")
    return tuple(grid)


def _default_seed() -> int:
    env = os.environ.get("QNT_SEED")
    return int(env) if env else 12345


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qnt", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, help_text in (
        ("star", "merge-protocol MSE on a 3-link star over an (M, N) grid"),
        ("sweep", "star experiment swept over several SPAM settings"),
        ("spam-s", "preparation-error estimation MSE over an (M, N) grid"),
        ("spam-m", "measurement-error estimation MSE over an (M, N) grid"),
        ("etch", "progressive etching MSE per edge on a general topology"),
        ("loss", "lossy-fiber merge protocol with memory decoherence"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--topology", dest="topology_path", default=None,
                         help="topology file (etch; defaults to the bundled 19-edge network)")
        cmd.add_argument("--s", type=float, default=1.0, help="preparation parameter s")
        cmd.add_argument("--m", type=float, default=1.0, help="measurement parameter m")
        cmd.add_argument("--q", type=parse_float_list, default=None, dest="q_params",
                         help="channel q values, e.g. 0.5,0.25,0.35")
        cmd.add_argument("--m-samples", type=parse_int_list, default=None,
                         help="merge-side sample sizes (list or start:stop:step)")
        cmd.add_argument("--n-samples", type=parse_int_list, default=None,
                         help="unicast-side sample sizes")
        cmd.add_argument("--trials", type=int, default=100)
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--full-scale", action="store_true",
                         help="reference scale: step-100 grids and 1000 trials")
        cmd.add_argument("--out", dest="output_path", default=None, help="CSV output path")
        if name == "sweep":
            cmd.add_argument("--spam-grid", type=parse_spam_grid, default=None,
                             help="semicolon-separated s:m pairs, e.g. 1:1;0.9:0.9")
        if name == "loss":
            cmd.add_argument("--t-send", type=parse_float_list, default=None,
                             help="send intervals in seconds")
            cmd.add_argument("--t-cutoff", type=parse_float_list, default=None,
                             help="memory cutoffs in seconds")
            cmd.add_argument("--horizon", type=float, default=3600.0)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    kwargs = dict(
        experiment=args.experiment.replace("-", "_"),
        seed=args.seed if args.seed is not None else _default_seed(),
        trials=args.trials,
        s=args.s,
        m=args.m,
        topology_path=args.topology_path,
        full_scale=args.full_scale,
        output_path=args.output_path,
    )
    if args.m_samples:
        kwargs["m_samples"] = args.m_samples
    if args.n_samples:
        kwargs["n_samples"] = args.n_samples
    if args.q_params:
        kwargs["q_params"] = args.q_params
    if getattr(args, "spam_grid", None):
        kwargs["spam_grid"] = args.spam_grid
    if getattr(args, "t_send", None):
        kwargs["t_send_s"] = args.t_send
    if getattr(args, "t_cutoff", None):
        kwargs["t_cutoff_s"] = args.t_cutoff
    if getattr(args, "horizon", None):
        kwargs["horizon_s"] = args.horizon
    return ExperimentConfig(**kwargs)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    write_experiment(config_from_args(args))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
