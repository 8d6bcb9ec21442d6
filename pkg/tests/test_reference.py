"""Whole-run cross-check against a vectorised full-batch implementation."""
import pytest

from scalargrad.data import Rng, generate_spiral
from scalargrad.nn import get_parameters
from scalargrad.train import Experiment, ExperimentConfig, eval_dataset, lr_schedule

np = pytest.importorskip("numpy")


def numpy_run(cfg):
    rng = Rng(cfg.seed)
    sizes = [2] + list(cfg.hidden_sizes) + [1]
    Ws, bs = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        W, b = np.zeros((fan_out, fan_in)), np.zeros(fan_out)
        for j in range(fan_out):
            for i in range(fan_in):
                W[j, i] = rng.uniform(-1.0, 1.0)
            b[j] = rng.uniform(-1.0, 1.0)
        Ws.append(W)
        bs.append(b)
    data = generate_spiral(cfg.train_n_per_class, rng)
    X = np.array([[s.x, s.y] for s in data])
    T = np.array([s.label for s in data], dtype=float)

    def layers(X):
        hs = [X]
        for k, (W, b) in enumerate(zip(Ws, bs)):
            z = hs[-1] @ W.T + b
            hs.append(np.maximum(z, 0.0) if k < len(Ws) - 1 else z)
        return hs

    losses = []
    for epoch in range(1, cfg.epochs + 1):
        hs = layers(X)
        margin = 1.0 - T * hs[-1][:, 0]
        losses.append(np.maximum(margin, 0.0).sum() / cfg.batch_size)
        g = (np.where(margin > 0, -T, 0.0) / cfg.batch_size)[:, None]
        lr = lr_schedule(epoch, cfg)
        for k in reversed(range(len(Ws))):
            gW, gb, gh = g.T @ hs[k], g.sum(0), g @ Ws[k]
            if k > 0:
                gh = gh * (hs[k] > 0)
            Ws[k] -= lr * gW
            bs[k] -= lr * gb
            g = gh
    flat = []
    for W, b in zip(Ws, bs):
        for j in range(W.shape[0]):
            flat.extend(W[j])
            flat.append(b[j])
    E = eval_dataset(cfg)
    scores = layers(np.array([[s.x, s.y] for s in E]))[-1][:, 0]
    correct = int(np.sum(np.sign(scores) == np.array([s.label for s in E])))
    return flat, losses, correct


@pytest.mark.parametrize("seed", [42, 45, 7])
def test_matches_vectorised_full_batch(seed):
    cfg = ExperimentConfig(seed=seed, epochs=35)
    exp = Experiment.build(cfg)
    exp.run()
    flat, losses, correct = numpy_run(cfg)
    assert len(flat) == len(get_parameters(exp.mlp))
    assert exp.parameters() == pytest.approx(flat, rel=1e-9, abs=1e-12)
    assert exp.log.losses() == pytest.approx(losses, rel=1e-9, abs=1e-12)
    assert exp.evaluate(eval_dataset(cfg)).correct == correct
