"""Minibatch training with Adam and a cosine learning-rate schedule."""

import csv
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .data import TrainingSet
from .mlp import Mlp, Normalizer


class TrainingDivergedError(RuntimeError):
    """Loss became non-finite; carries the epoch and batch it happened in."""

    def __init__(self, epoch, batch, loss):
        super().__init__(
            "training diverged at epoch %d batch %d (loss=%r); "
            "lower the learning rate or check the data scaling" % (epoch, batch, loss)
        )
        self.epoch = epoch
        self.batch = batch
        self.loss = loss


@dataclass(frozen=True)
class TrainConfig:
    hidden_sizes: Tuple[int, ...] = (2048, 512, 128)
    epochs: int = 1400
    batch_size: int = 4096
    lr_start: float = 1e-3
    lr_min: float = 1e-4
    dropout: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        if self.lr_start <= 0 or self.lr_min <= 0 or self.lr_min > self.lr_start:
            raise ValueError("need 0 < lr_min <= lr_start")


def full_config(**overrides) -> TrainConfig:
    """Production-scale network."""
    return TrainConfig(**overrides)


def desk_config(**overrides) -> TrainConfig:
    """Small network that trains in seconds, for tests and CI."""
    defaults = dict(hidden_sizes=(64, 32, 16), epochs=300, batch_size=1024)
    defaults.update(overrides)
    return TrainConfig(**defaults)


class EpochStats(NamedTuple):
    epoch: int
    loss: float
    lr: float


@dataclass(frozen=True)
class TrainResult:
    model: Mlp
    history: List[EpochStats] = field(default_factory=list)

    @property
    def final_loss(self):
        return self.history[-1].loss if self.history else float("nan")


def cosine_lr(epoch: int, config: TrainConfig) -> float:
    """Half-cosine decay from lr_start to lr_min over the configured epochs."""
    if config.epochs == 1:
        return config.lr_start
    frac = epoch / (config.epochs - 1)
    return float(config.lr_min + 0.5 * (config.lr_start - config.lr_min) * (1.0 + np.cos(np.pi * frac)))


class _Adam:
    def __init__(self, model: Mlp, config: TrainConfig):
        self.c = config
        self.m = [(np.zeros_like(w), np.zeros_like(b)) for w, b in zip(model.weights, model.biases)]
        self.v = [(np.zeros_like(w), np.zeros_like(b)) for w, b in zip(model.weights, model.biases)]
        self.t = 0

    def step(self, model: Mlp, grads, lr: float):
        self.t += 1
        c = self.c
        bc1 = 1.0 - c.beta1**self.t
        bc2 = 1.0 - c.beta2**self.t
        for k, (dw, db) in enumerate(grads):
            for params, grad, slot in ((model.weights, dw, 0), (model.biases, db, 1)):
                m = self.m[k][slot]
                v = self.v[k][slot]
                m *= c.beta1
                m += (1.0 - c.beta1) * grad
                v *= c.beta2
                v += (1.0 - c.beta2) * grad * grad
                params[k] -= lr * (m / bc1) / (np.sqrt(v / bc2) + c.eps)


def train(train_set: TrainingSet, config: Optional[TrainConfig] = None) -> TrainResult:
    """Fit the network on a training set.

    Inputs and targets are standardized per column; the fitted constants are
    stored on the returned model so ``predict`` accepts raw positions.  A
    single seeded generator drives initialization, shuffling, and dropout, so
    the loss history is reproducible bit for bit.
    """
    config = config or TrainConfig()
    if len(train_set) < 2:
        raise ValueError("need at least two training rows")
    input_norm = Normalizer.fit(train_set.inputs)
    output_norm = Normalizer.fit(train_set.targets)
    x = input_norm.normalize(train_set.inputs)
    y = output_norm.normalize(train_set.targets)

    rng = np.random.default_rng(config.seed)
    sizes = [x.shape[1], *config.hidden_sizes, y.shape[1]]
    model = Mlp.create(sizes, rng, input_norm=input_norm, output_norm=output_norm)
    opt = _Adam(model, config)

    n = len(x)
    history = []
    for epoch in range(config.epochs):
        lr = cosine_lr(epoch, config)
        order = rng.permutation(n)
        total = 0.0
        for bi, start in enumerate(range(0, n, config.batch_size)):
            idx = order[start : start + config.batch_size]
            xb, yb = x[idx], y[idx]
            cache = []
            pred = model.forward(xb, dropout_rate=config.dropout, rng=rng, cache=cache)
            diff = pred - yb
            loss = float(np.mean(diff * diff))
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, bi, loss)
            grads = model.backward(cache, 2.0 * diff / diff.size)
            opt.step(model, grads, lr)
            total += loss * len(idx)
        history.append(EpochStats(epoch=epoch, loss=total / n, lr=lr))
    return TrainResult(model=model, history=history)


def write_history_csv(path, history) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("epoch", "loss", "lr"))
        for row in history:
            writer.writerow((row.epoch, repr(row.loss), repr(row.lr)))


def read_history_csv(path) -> list:
    with open(path, newline="") as fh:
        return [
            EpochStats(epoch=int(r["epoch"]), loss=float(r["loss"]), lr=float(r["lr"]))
            for r in csv.DictReader(fh)
        ]
