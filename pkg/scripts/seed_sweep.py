"""Accuracy and final loss over consecutive seeds, optionally varying the
spiral sweep angle and hidden widths.

    python scripts/seed_sweep.py                       # seeds 42..51, 100 epochs
    python scripts/seed_sweep.py --sweep 1 1.5 2 3     # sweep in multiples of pi
    python scripts/seed_sweep.py --hidden 16 16 --epochs 2000 --lr-decay 0 --lr-base 0.3
"""
import argparse
import math
import time

from scalargrad.data import Rng, generate_spiral
from scalargrad.engine import GraphStore
from scalargrad.nn import new_mlp
from scalargrad.train import ExperimentConfig, Experiment, build_loss_graph


def run(seed, epochs, hidden, sweep, lr_base=1.0, lr_decay=0.9):
    cfg = ExperimentConfig(seed=seed, epochs=epochs, hidden_sizes=list(hidden),
                           lr_base=lr_base, lr_decay=lr_decay).validate()
    # same draw order as Experiment.build: weights first, then training data
    rng = Rng(seed)
    store = GraphStore()
    mlp = new_mlp(store, 2, list(hidden) + [1], rng)
    train_data = generate_spiral(cfg.train_n_per_class, rng, sweep)
    exp = Experiment(cfg, store, mlp, build_loss_graph(store, mlp, cfg.batch_size), train_data)
    exp.run()
    report = exp.evaluate(generate_spiral(cfg.eval_n_per_class, Rng(seed + 1), sweep))
    return report.accuracy, exp.log.entries[-1][1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--first", type=int, default=42)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--epochs", type=int, default=100)
    ap.add_argument("--hidden", type=int, nargs="+", default=[4, 4])
    ap.add_argument("--lr-base", type=float, default=1.0)
    ap.add_argument("--lr-decay", type=float, default=0.9)
    ap.add_argument("--sweep", type=float, nargs="+", default=[3.0],
                    help="spiral sweep angles, in multiples of pi")
    args = ap.parse_args()

    for k in args.sweep:
        t0 = time.perf_counter()
        rows = [(s, *run(s, args.epochs, args.hidden, k * math.pi, args.lr_base, args.lr_decay))
                for s in range(args.first, args.first + args.count)]
        good = sum(acc >= 0.9 and loss < 0.1 for _, acc, loss in rows)
        print(f"sweep={k}pi hidden={args.hidden} epochs={args.epochs} "
              f"passing={good}/{len(rows)} time={time.perf_counter() - t0:.1f}s")
        for seed, acc, loss in rows:
            print(f"  seed={seed} accuracy={acc} final_loss={loss:.4f}")


if __name__ == "__main__":
    main()
