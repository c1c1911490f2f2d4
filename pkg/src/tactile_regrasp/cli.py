"""Command-line entry point: ``tactile-regrasp <subcommand> [--config F] [--seed N] [--out P]``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import evaluation
from .config import load_config
from .core import DataError
from .model import cam, evaluate, train
from .persistence import load_dataset, load_model, save_dataset, save_model, write_pgm
from .synthworld import generate_dataset


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n\n{self.format_usage()}")


def _write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_gen_data(args, cfg):
    n = args.n_per_object or cfg.n_per_object
    records = generate_dataset(cfg.objects, n, cfg.geometry, cfg.shake, args.seed, cfg.noise_scale)
    save_dataset(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")


def cmd_train(args, cfg):
    records = load_dataset(args.data)
    model_cfg = cfg.model if args.epochs is None else replace(cfg.model, epochs=args.epochs)
    params, history = train(records, model_cfg, verbose=args.verbose)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_model(params, out)
    csv_path = Path(args.loss_csv) if args.loss_csv else out.with_suffix(".loss.csv")
    csv_path.write_text("epoch,loss\n" + "".join(f"{i + 1},{v!r}\n" for i, v in enumerate(history)))
    print(f"trained on {len(records)} records; final loss {history[-1]:.4f}; model -> {out}")


def cmd_eval_model(args, cfg):
    params = load_model(args.model)
    records = load_dataset(args.data)
    metrics = evaluate(params, records, boundary=args.boundary, input_size=cfg.model.input_size)
    _write_json(args.out, metrics)
    print(f"accuracy {metrics['accuracy']:.3f} on {metrics['count']} records")


def cmd_crossval(args, cfg):
    records = load_dataset(args.data)
    ids = list(dict.fromkeys(r.object_id for r in records))
    table = evaluation.leave_one_out(ids, records, cfg.model, epochs=args.epochs)
    _write_json(args.out, table)
    print(f"mean held-out-object accuracy {table['mean_accuracy']:.3f}")


def _policy_kwargs(cfg):
    return dict(geom=cfg.geometry, shake=cfg.shake, grid=cfg.grid,
                input_size=cfg.model.input_size, noise_scale=cfg.noise_scale)


def cmd_run_policy(args, cfg):
    params = None
    if args.policy == "tactile":
        if not args.model:
            raise UsageError("run-policy --policy tactile requires --model")
        params = load_model(args.model)
    n = cfg.n_grasps if args.n_grasps is None else args.n_grasps
    report = evaluation.run_policy_experiment(cfg.policy_objects, n, args.policy, params, args.seed,
                                              **_policy_kwargs(cfg))
    _write_json(args.out, report)
    print(f"{args.policy}: mean success {report['mean_success']}")


def cmd_compare(args, cfg):
    params = load_model(args.model)
    n = cfg.n_grasps if args.n_grasps is None else args.n_grasps
    result = evaluation.compare_baseline(cfg.policy_objects, n, params, args.seed, **_policy_kwargs(cfg))
    _write_json(args.out, {"table": result["table"]})
    for row in result["table"]:
        print(f"{row['policy']:9s} mean success {row['mean_success']}")


def cmd_cam(args, cfg):
    params = load_model(args.model)
    records = load_dataset(args.data)
    if not 0 <= args.index < len(records):
        raise DataError(f"record index {args.index} out of range (dataset has {len(records)})")
    record = records[args.index]
    left, right = cam(params, record.pair, cfg.model.input_size)
    prefix = Path(args.out)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_pgm(f"{prefix}_left.pgm", left)
    write_pgm(f"{prefix}_right.pgm", right)
    print(f"CAM heatmaps -> {prefix}_left.pgm, {prefix}_right.pgm")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON experiment config (defaults to the shipped suite)")
    common.add_argument("--seed", type=int, default=0, help="master seed (u64)")
    common.add_argument("--out", required=True, help="output path")

    parser = _Parser(prog="tactile-regrasp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-data", parents=[common], help="generate a labelled grasp dataset")
    p.add_argument("--n-per-object", type=int)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", parents=[common], help="train the quality model")
    p.add_argument("--data", required=True)
    p.add_argument("--epochs", type=int)
    p.add_argument("--loss-csv")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval-model", parents=[common], help="accuracy of a model on a dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--boundary", type=float, default=0.5)
    p.set_defaults(func=cmd_eval_model)

    p = sub.add_parser("crossval", parents=[common], help="leave-one-object-out accuracy table")
    p.add_argument("--data", required=True)
    p.add_argument("--epochs", type=int, default=evaluation.CROSSVAL_EPOCHS)
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("run-policy", parents=[common], help="closed-loop grasp trials for one policy")
    p.add_argument("--policy", choices=evaluation.POLICIES, required=True)
    p.add_argument("--model")
    p.add_argument("--n-grasps", type=int)
    p.set_defaults(func=cmd_run_policy)

    p = sub.add_parser("compare", parents=[common], help="none / centroid / tactile on paired seeds")
    p.add_argument("--model", required=True)
    p.add_argument("--n-grasps", type=int)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("cam", parents=[common], help="class activation heatmaps for one record")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--index", type=int, default=0)
    p.set_defaults(func=cmd_cam)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.seed < 0 or args.seed >= 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        cfg = load_config(args.config)
        args.func(args, cfg)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return 1
    except (DataError, FileNotFoundError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
