"""Batch front end: ``python -m scalargrad <command> [flags]``.

Commands: gen-data, train, eval, plot-loss, plot-spiral.
Exit codes: 0 success, 1 usage or config error, 2 data or checkpoint error.
"""
import argparse
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .data import DataFormatError, Sample, load_csv, save_csv
from .plot import emit_loss_plot, emit_scatter_plot
from .train import (
    CheckpointError,
    ConfigError,
    Experiment,
    ExperimentConfig,
    eval_dataset,
    load_checkpoint,
    save_checkpoint,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


def _parse_bool(s):
    v = s.strip().lower()
    if v in ("true", "1", "yes"):
        return True
    if v in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_sizes(s):
    return [int(t) for t in s.replace(" ", "").strip("{}[]").split(",") if t]


_PARSERS = {
    "seed": int,
    "train_n_per_class": int,
    "eval_n_per_class": int,
    "epochs": int,
    "batch_size": int,
    "lr_base": float,
    "lr_decay": float,
    "lr_horizon": int,
    "hidden_sizes": _parse_sizes,
    "checkpoint_path": str,
    "resume": _parse_bool,
}
assert set(_PARSERS) == {f.name for f in dataclasses.fields(ExperimentConfig)}


def parse_config_text(text, source="<config>"):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as e:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {e}") from None
    return ExperimentConfig(**values).validate()


def parse_config(path):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config_text(text, str(path))


def _seed_range(s):
    lo, sep, hi = s.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected a..b, got {s!r}")
    a, b = int(lo), int(hi)
    if b < a:
        raise argparse.ArgumentTypeError(f"empty seed range {s!r}")
    return list(range(a, b + 1))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--data", help="dataset CSV (x,y,label)")
    common.add_argument("--checkpoint", help="checkpoint path (overrides config)")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--resume", action="store_true", help="resume from the checkpoint")

    p = _Parser(prog="scalargrad", description="Scalar autograd spiral experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("gen-data", parents=[common], help="write train/eval spiral CSVs")
    t = sub.add_parser("train", parents=[common], help="train, checkpoint, then evaluate")
    t.add_argument("--seeds", type=_seed_range, help="sweep seeds a..b in parallel")
    t.add_argument("--jobs", type=int, default=None, help="worker processes for --seeds")
    sub.add_parser("eval", parents=[common], help="evaluate a checkpoint")
    sub.add_parser("plot-loss", parents=[common], help="loss curve from a checkpoint")
    sub.add_parser("plot-spiral", parents=[common], help="scatter of a dataset or predictions")
    return p


def load_config(args):
    cfg = parse_config(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.checkpoint:
        cfg.checkpoint_path = args.checkpoint
    if args.resume:
        cfg.resume = True
    return cfg.validate()


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_eval(report, out):
    (out / "eval.txt").write_text(report.summary() + "\n")
    save_csv([Sample(*p) for p in report.predictions], out / "predictions.csv")


def cmd_gen_data(cfg, args):
    out = _out_dir(args)
    exp = Experiment.build(cfg)
    save_csv(exp.train_data, out / "train.csv")
    save_csv(eval_dataset(cfg), out / "eval.csv")
    print(f"wrote {out / 'train.csv'} and {out / 'eval.csv'}")
    return EXIT_OK


def run_training(cfg, out, data_path=None, echo=print):
    """Train (or resume), save checkpoint and loss plot, then evaluate."""
    train_data = load_csv(data_path) if data_path else None
    exp = Experiment.build(cfg, train_data)
    ckpt_path = Path(cfg.checkpoint_path)
    if cfg.resume and ckpt_path.exists():
        echo(f"Resuming from {ckpt_path}")
        exp.resume_from(load_checkpoint(ckpt_path))
    if exp.complete:
        echo("Training already complete, running eval only")
    else:
        echo(f"Training for {cfg.epochs} epochs on a dataset of {len(exp.train_data)}")
        exp.run(lambda e, loss, lr: echo(f"Epoch {e} Loss {loss!r} LR {lr!r}"))
    if ckpt_path.parent != Path(""):
        ckpt_path.parent.mkdir(parents=True, exist_ok=True)
    save_checkpoint(ckpt_path, exp.checkpoint())
    if len(exp.log):
        emit_loss_plot(exp.log.entries, out / "loss.coords")
    report = exp.evaluate(eval_dataset(cfg))
    _write_eval(report, out)
    echo(report.summary())
    return exp, report


def _sweep_worker(job):
    cfg, out, data_path = job
    out.mkdir(parents=True, exist_ok=True)
    lines = []
    exp, report = run_training(cfg, out, data_path, echo=lines.append)
    (out / "train.log").write_text("\n".join(lines) + "\n")
    final = exp.log.entries[-1][1] if len(exp.log) else float("nan")
    return cfg.seed, report, final


def cmd_train(cfg, args):
    out = _out_dir(args)
    if not args.seeds:
        run_training(cfg, out, args.data)
        return EXIT_OK
    jobs = []
    for seed in args.seeds:
        sub = out / f"seed_{seed}"
        c = dataclasses.replace(cfg, seed=seed, checkpoint_path=str(sub / "checkpoint.txt"))
        jobs.append((c, sub, args.data))
    with ProcessPoolExecutor(max_workers=args.jobs or min(len(jobs), os.cpu_count() or 1)) as pool:
        for seed, report, final in pool.map(_sweep_worker, jobs):
            print(f"seed={seed} {report.summary()} final_loss={final!r}")
    return EXIT_OK


def cmd_eval(cfg, args):
    out = _out_dir(args)
    exp = Experiment.build(cfg)
    exp.resume_from(load_checkpoint(cfg.checkpoint_path))
    data = load_csv(args.data) if args.data else eval_dataset(cfg)
    report = exp.evaluate(data)
    _write_eval(report, out)
    print(report.summary())
    return EXIT_OK


def cmd_plot_loss(cfg, args):
    out = _out_dir(args)
    ckpt = load_checkpoint(cfg.checkpoint_path)
    entries = list(enumerate(ckpt.losses, 1))
    svg = emit_loss_plot(entries, out / "loss.coords")
    print(f"wrote {out / 'loss.coords'} and {svg}")
    return EXIT_OK


def cmd_plot_spiral(cfg, args):
    out = _out_dir(args)
    data = load_csv(args.data) if args.data else Experiment.build(cfg).train_data
    name = (Path(args.data).stem if args.data else "train") + ".svg"
    emit_scatter_plot(data, out / name)
    print(f"wrote {out / name}")
    return EXIT_OK


COMMANDS = {
    "gen-data": cmd_gen_data,
    "train": cmd_train,
    "eval": cmd_eval,
    "plot-loss": cmd_plot_loss,
    "plot-spiral": cmd_plot_spiral,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](cfg, args)
    except (DataFormatError, CheckpointError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
