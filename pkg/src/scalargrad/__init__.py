"""Scalar reverse-mode autodiff, tiny MLPs and a spiral training pipeline."""
from .data import Dataset, Rng, Sample, generate_spiral, load_csv, save_csv
from .engine import GraphStore, ValueNode
from .nn import ForwardBinding, MlpSpec, forward, get_parameters, new_mlp
from .train import (
    Checkpoint,
    EpochLossLog,
    EvalReport,
    Experiment,
    ExperimentConfig,
    apply_checkpoint,
    build_loss_graph,
    evaluate,
    load_checkpoint,
    lr_schedule,
    save_checkpoint,
    train,
)

__version__ = "0.1.0"
