"""Max-margin training on the spiral: loss graph, loop, eval and checkpoints."""
import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .data import Rng, generate_spiral
from .engine import GraphStore
from .nn import forward, get_parameters, make_binding, new_mlp


class ConfigError(ValueError):
    pass


class CheckpointError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    seed: int = 42
    train_n_per_class: int = 50
    eval_n_per_class: int = 50
    epochs: int = 35
    batch_size: int = 100
    lr_base: float = 1.0
    lr_decay: float = 0.9
    lr_horizon: int = 100
    hidden_sizes: list = field(default_factory=lambda: [4, 4])
    checkpoint_path: str = "checkpoint.txt"
    resume: bool = False

    def validate(self):
        for name in ("train_n_per_class", "eval_n_per_class", "epochs", "batch_size", "lr_horizon"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.hidden_sizes or any(h < 1 for h in self.hidden_sizes):
            raise ConfigError(f"hidden_sizes must be positive, got {self.hidden_sizes}")
        for name in ("lr_base", "lr_decay"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        last_lr = lr_schedule(self.epochs, self)
        if not last_lr > 0.0:
            raise ConfigError(
                f"learning rate reaches {last_lr!r} by epoch {self.epochs}; "
                "lower epochs or lr_decay"
            )
        n = 2 * self.train_n_per_class
        if n % self.batch_size:
            raise ConfigError(f"batch_size {self.batch_size} does not divide dataset size {n}")
        return self


@dataclass
class LossGraph:
    input_x_id: int
    input_y_id: int
    target_id: int
    multiplier_id: int
    bias_id: int
    batch_scale_id: int
    score_id: int
    loss_id: int
    binding: object
    score_binding: object


@dataclass
class EpochLossLog:
    entries: list = field(default_factory=list)

    def append(self, epoch, total_loss):
        if self.entries and epoch <= self.entries[-1][0]:
            raise ValueError(f"epoch {epoch} does not follow {self.entries[-1][0]}")
        self.entries.append((epoch, total_loss))

    def losses(self):
        return [loss for _, loss in self.entries]

    def __len__(self):
        return len(self.entries)


@dataclass
class Checkpoint:
    epochs_done: int
    losses: list
    params: list


@dataclass
class EvalReport:
    n: int
    correct: int
    accuracy: float
    predictions: list

    def summary(self):
        return f"n={self.n} correct={self.correct} accuracy={self.accuracy!r}"


def build_loss_graph(store, mlp, batch_size):
    """Hinge loss ``relu(1 - target * score) / batch_size`` on reusable leaves.

    Composed as ``((score * target) * -1 + 1) -> relu -> * (1/batch_size)``.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    x = store.create_value(0.0)
    y = store.create_value(0.0)
    target = store.create_value(0.0)
    score, score_binding = forward(store, mlp, [x, y])
    if isinstance(score, list):
        raise ValueError("hinge loss needs a single-output MLP")
    multiplier = store.create_value(-1.0)
    bias = store.create_value(1.0)
    scale = store.create_value(1.0 / batch_size)
    t1 = store.multiply(score, target)
    t2 = store.multiply(t1, multiplier)
    t3 = store.add(t2, bias)
    t4 = store.relu(t3)
    loss = store.multiply(t4, scale)
    binding = make_binding(store, [x, y], loss)
    return LossGraph(x, y, target, multiplier, bias, scale, score, loss, binding, score_binding)


def lr_schedule(epoch, cfg):
    return cfg.lr_base - cfg.lr_decay * (epoch - 1) / cfg.lr_horizon


def train(store, mlp, lg, dataset, cfg, start_epoch=1, log=None, on_epoch=None):
    """Full-pass training from ``start_epoch`` through ``cfg.epochs``.

    Samples are visited in dataset order every epoch. Parameter gradients
    accumulate across a batch; a descent step follows every ``batch_size``-th
    sample. ``on_epoch(epoch, total_loss, lr)`` is called after each epoch.
    """
    if log is None:
        log = EpochLossLog()
    if len(dataset) != 2 * cfg.train_n_per_class:
        raise ValueError(
            f"dataset has {len(dataset)} samples, config expects {2 * cfg.train_n_per_class}"
        )
    if len(dataset) % cfg.batch_size:
        raise ValueError(f"batch_size {cfg.batch_size} does not divide {len(dataset)}")
    if not 1 <= start_epoch <= cfg.epochs + 1:
        raise ValueError(f"start_epoch {start_epoch} outside 1..{cfg.epochs + 1}")

    xn, yn, tn = (store.node(i) for i in (lg.input_x_id, lg.input_y_id, lg.target_id))
    loss_node = store.node(lg.loss_id)
    root = lg.loss_id
    batch = cfg.batch_size
    reeval = lg.binding.reevaluate
    for epoch in range(start_epoch, cfg.epochs + 1):
        lr = lr_schedule(epoch, cfg)
        sample_losses = []
        for step, s in enumerate(dataset, 1):
            xn.data = s.x
            yn.data = s.y
            tn.data = float(s.label)
            reeval()
            sample_losses.append(loss_node.data)
            store.backward(root)
            store.zero_nonparam_grads(root)
            if step % batch == 0:
                store.step(root, lr)
                store.zero_grads(root)
        total = math.fsum(sample_losses)
        log.append(epoch, total)
        if on_epoch is not None:
            on_epoch(epoch, total, lr)
    return log


def _sign(v):
    return (v > 0) - (v < 0)


def round_accuracy(correct, n):
    q = (Decimal(correct) / Decimal(n)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    return float(q)


def evaluate(store, mlp, binding, dataset):
    """Classify by the sign of the score.

    A zero score is plotted as class +1 but never counted correct, since only
    an exact sign match with the target counts.
    """
    if len(dataset) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    xn, yn = (store.node(i) for i in binding.input_ids)
    score = store.node(binding.output_id)
    correct = 0
    preds = []
    for s in dataset:
        xn.data = s.x
        yn.data = s.y
        forward(store, mlp, binding.input_ids, binding)
        sign = _sign(score.data)
        preds.append((s.x, s.y, 1 if sign >= 0 else -1))
        if sign == s.label:
            correct += 1
    n = len(dataset)
    return EvalReport(n, correct, round_accuracy(correct, n), preds)


# -- checkpoints -----------------------------------------------------------


def _floats(values):
    return ",".join(repr(float(v)) for v in values)


def format_checkpoint(ckpt):
    return (
        f"epochs={ckpt.epochs_done}\n"
        f"losses={_floats(ckpt.losses)}\n"
        f"params={_floats(ckpt.params)}\n"
    )


def save_checkpoint(path, ckpt):
    with open(path, "w", newline="\n") as f:
        f.write(format_checkpoint(ckpt))


def parse_checkpoint(text):
    fields = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise CheckpointError(f"line {lineno}: expected key=value")
        key = key.strip()
        if key not in ("epochs", "losses", "params"):
            raise CheckpointError(f"line {lineno}: unknown key {key!r}")
        if key in fields:
            raise CheckpointError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = (lineno, value.strip())
    for key in ("epochs", "losses", "params"):
        if key not in fields:
            raise CheckpointError(f"missing key {key!r}")

    lineno, raw = fields["epochs"]
    try:
        epochs = int(raw)
    except ValueError:
        raise CheckpointError(f"line {lineno}: epochs: not an integer: {raw!r}") from None
    if epochs < 0:
        raise CheckpointError(f"line {lineno}: epochs must be >= 0")

    def floats(key):
        lineno, raw = fields[key]
        if not raw:
            return []
        out = []
        for i, tok in enumerate(raw.split(","), 1):
            try:
                out.append(float(tok))
            except ValueError:
                raise CheckpointError(f"line {lineno}: {key}[{i}]: bad number {tok!r}") from None
        return out

    losses, params = floats("losses"), floats("params")
    if len(losses) != epochs:
        raise CheckpointError(f"{len(losses)} losses recorded for {epochs} epochs")
    return Checkpoint(epochs, losses, params)


def load_checkpoint(path):
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise CheckpointError(f"cannot read {path}: {e}") from e
    return parse_checkpoint(text)


def make_checkpoint(store, mlp, log):
    params = [store.get_data(i) for i in get_parameters(mlp)]
    return Checkpoint(len(log), log.losses(), params)


def apply_checkpoint(store, mlp, log, ckpt):
    """Load parameters and loss history; return the next epoch to run."""
    ids = get_parameters(mlp)
    if len(ids) != len(ckpt.params):
        raise CheckpointError(
            f"checkpoint holds {len(ckpt.params)} parameters, network has {len(ids)}"
        )
    for i, v in zip(ids, ckpt.params):
        store.set_data(i, v)
    log.entries = [(e, loss) for e, loss in enumerate(ckpt.losses, 1)]
    return ckpt.epochs_done + 1


# -- experiment assembly ---------------------------------------------------


@dataclass
class Experiment:
    cfg: ExperimentConfig
    store: GraphStore
    mlp: object
    loss_graph: LossGraph
    train_data: object
    log: EpochLossLog = field(default_factory=EpochLossLog)
    start_epoch: int = 1

    @classmethod
    def build(cls, cfg, train_data=None):
        # the seed's stream feeds weight init and then the training set; a
        # loaded dataset or a checkpoint overrides the draws, never skips them
        rng = Rng(cfg.seed)
        store = GraphStore()
        mlp = new_mlp(store, 2, list(cfg.hidden_sizes) + [1], rng)
        generated = generate_spiral(cfg.train_n_per_class, rng)
        lg = build_loss_graph(store, mlp, cfg.batch_size)
        return cls(cfg, store, mlp, lg, generated if train_data is None else train_data)

    def resume_from(self, ckpt):
        self.start_epoch = apply_checkpoint(self.store, self.mlp, self.log, ckpt)
        return self.start_epoch

    @property
    def complete(self):
        return self.start_epoch > self.cfg.epochs

    def run(self, on_epoch=None):
        if self.start_epoch > self.cfg.epochs:
            return self.log
        train(self.store, self.mlp, self.loss_graph, self.train_data, self.cfg,
              self.start_epoch, self.log, on_epoch)
        self.start_epoch = self.cfg.epochs + 1
        return self.log

    def checkpoint(self):
        return make_checkpoint(self.store, self.mlp, self.log)

    def parameters(self):
        return [self.store.get_data(i) for i in get_parameters(self.mlp)]

    def evaluate(self, dataset):
        return evaluate(self.store, self.mlp, self.loss_graph.score_binding, dataset)


def eval_dataset(cfg):
    return generate_spiral(cfg.eval_n_per_class, Rng(cfg.seed + 1))
