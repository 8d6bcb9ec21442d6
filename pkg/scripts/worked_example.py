"""Worked example: 35 epochs on a 100-point spiral, then eval and figures.

    python3 scripts/worked_example.py --out runs/example [--seed 42] [--resume]

Writes the training scatter, the prediction scatter, the loss curve and a
one-row results table into --out.
"""
import argparse
from pathlib import Path

from scalargrad.cli import run_training
from scalargrad.data import load_csv
from scalargrad.plot import emit_scatter_plot
from scalargrad.train import ExperimentConfig, Experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/example")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--epochs", type=int, default=35)
    ap.add_argument("--resume", action="store_true")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = ExperimentConfig(seed=args.seed, epochs=args.epochs, resume=args.resume,
                           checkpoint_path=str(out / f"checkpoint{args.epochs}epochs.txt"))
    _, report = run_training(cfg, out)

    emit_scatter_plot(Experiment.build(cfg).train_data, out / "train.svg")
    emit_scatter_plot(load_csv(out / "predictions.csv"), out / "predictions.svg")
    table = (
        "Dataset size | Total correct | Accuracy\n"
        f"{report.n} | {report.correct} | {report.accuracy}\n"
    )
    (out / "table.txt").write_text(table)
    print(table, end="")


if __name__ == "__main__":
    main()
