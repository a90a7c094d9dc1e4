"""Tuple classifiers: built-in logistic regression and an external process."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from findsum.errors import DegenerateData, DimensionMismatch
from findsum.procio import JsonLineProcess, ProcessError

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    learning_rate: float = 0.5
    epochs: int = 500
    l2: float = 1e-4
    seed: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        return cls(**{k: d[k] for k in ("learning_rate", "epochs", "l2", "seed") if k in d})


def undersample(labeled: Sequence, ratio: float = 10, seed: int = 0) -> list:
    """All positives plus at most ``ratio`` negatives per positive, in input order.

    Items are anything with a boolean ``label`` attribute.
    """
    if ratio < 1:
        raise ValueError("ratio must be >= 1")
    pos = [i for i, x in enumerate(labeled) if x.label]
    neg = [i for i, x in enumerate(labeled) if not x.label]
    quota = int(ratio * len(pos))
    if len(neg) > quota:
        neg = random.Random(seed).sample(neg, quota)
    return [labeled[i] for i in sorted(pos + neg)]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))), np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))


def _loss(w, b, x, y, l2) -> float:
    z = x @ w + b
    # log(1 + e^z) - y z, computed stably
    nll = np.logaddexp(0.0, z) - y * z
    return float(nll.mean() + 0.5 * l2 * (w @ w))


class LogisticModel:
    kind = "logistic-regression"

    def __init__(self, weights, bias: float, mean, scale, feature_config: Optional[dict] = None,
                 seed: int = 0, losses: Optional[list] = None):
        self.weights = np.asarray(weights, dtype=float)
        self.bias = float(bias)
        self.mean = np.asarray(mean, dtype=float)
        self.scale = np.asarray(scale, dtype=float)
        self.feature_config = feature_config or {}
        self.seed = seed
        self.losses = losses or []

    @property
    def dim(self) -> int:
        return len(self.weights)

    def predict_proba(self, features) -> np.ndarray:
        x = np.atleast_2d(np.asarray(features, dtype=float))
        if x.size == 0:
            return np.zeros(0)
        if x.shape[1] != self.dim:
            raise DimensionMismatch(f"model expects {self.dim} features, got {x.shape[1]}")
        return _sigmoid(((x - self.mean) / self.scale) @ self.weights + self.bias)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "weights": self.weights.tolist(), "bias": self.bias,
                "feature_config": self.feature_config, "seed": self.seed,
                "mean": self.mean.tolist(), "scale": self.scale.tolist()}

    def close(self) -> None:
        pass


def train_logistic(features, labels, config: Optional[TrainConfig] = None,
                   feature_config: Optional[dict] = None) -> LogisticModel:
    """Full-batch gradient descent on mean cross-entropy + L2 (bias unpenalized).

    Features are standardized internally.  A step that would raise the loss
    is retried at half the learning rate, so the recorded loss never rises.
    """
    cfg = config or TrainConfig()
    x = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(labels, dtype=float)
    if len(x) != len(y):
        raise ValueError(f"{len(x)} feature rows for {len(y)} labels")
    if len(y) == 0 or y.min() == y.max():
        raise DegenerateData("training data needs at least one example of each class")
    mean = x.mean(axis=0)
    scale = x.std(axis=0)
    scale[scale == 0] = 1.0
    xs = (x - mean) / scale
    rng = np.random.default_rng(cfg.seed)
    w = rng.normal(0.0, 0.01, size=x.shape[1])
    prior = y.mean()
    b = float(np.log(prior / (1 - prior)))
    lr = cfg.learning_rate
    loss = _loss(w, b, xs, y, cfg.l2)
    losses = [loss]
    for _ in range(cfg.epochs):
        err = _sigmoid(xs @ w + b) - y
        gw = xs.T @ err / len(y) + cfg.l2 * w
        gb = float(err.mean())
        while True:
            nw, nb = w - lr * gw, b - lr * gb
            new = _loss(nw, nb, xs, y, cfg.l2)
            if new <= loss or lr < 1e-12:
                break
            lr /= 2
        if new > loss:
            break
        w, b, loss = nw, nb, new
        losses.append(loss)
    return LogisticModel(w, b, mean, scale, feature_config, cfg.seed, losses)


class ExternalModel:
    """Classifier living in a child process speaking one JSON object per line.

    Training sends ``{"train": {"features": [[...]], "labels": [..]}}`` and
    expects ``{"status": "ok"}``; prediction sends ``{"features": [...]}``
    and expects ``{"proba": p}``.
    """

    kind = "external"

    def __init__(self, command, timeout: float = 60.0, feature_config: Optional[dict] = None, seed: int = 0):
        self.command = command
        self.feature_config = feature_config or {}
        self.seed = seed
        self.timeout = timeout
        self._proc = JsonLineProcess(command, timeout=timeout)

    def fit(self, features, labels) -> "ExternalModel":
        reply = self._proc.request({"train": {"features": np.asarray(features, dtype=float).tolist(),
                                              "labels": [int(v) for v in labels]}})
        if reply.get("status") != "ok":
            raise ProcessError(f"external classifier rejected training data: {reply}")
        return self

    def predict_proba(self, features) -> np.ndarray:
        x = np.atleast_2d(np.asarray(features, dtype=float))
        out = []
        for row in x if x.size else []:
            reply = self._proc.request({"features": row.tolist()})
            try:
                p = float(reply["proba"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ProcessError(f"external classifier reply lacks a numeric proba: {reply}") from exc
            if not 0.0 <= p <= 1.0:
                raise ProcessError(f"external classifier returned proba {p} outside [0, 1]")
            out.append(p)
        return np.asarray(out)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "command": self.command, "timeout": self.timeout,
                "feature_config": self.feature_config, "seed": self.seed,
                "weights": [], "bias": 0.0}

    def close(self) -> None:
        self._proc.close()


def train_classifier(features, labels, config: Optional[TrainConfig] = None, *,
                     kind: str = "logistic-regression", command=None,
                     feature_config: Optional[dict] = None):
    if kind == "logistic-regression":
        return train_logistic(features, labels, config, feature_config)
    if kind == "external":
        y = list(labels)
        if not y or len(set(bool(v) for v in y)) < 2:
            raise DegenerateData("training data needs at least one example of each class")
        if not command:
            raise ValueError("external classifier needs a command")
        seed = (config or TrainConfig()).seed
        return ExternalModel(command, feature_config=feature_config, seed=seed).fit(features, y)
    raise ValueError(f"unknown classifier kind {kind!r}")


def save_model(model, path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")


def model_from_dict(d: dict):
    if d.get("kind") == "logistic-regression":
        return LogisticModel(d["weights"], d["bias"], d["mean"], d["scale"],
                             d.get("feature_config"), d.get("seed", 0))
    if d.get("kind") == "external":
        # the child process keeps its own trained state only while alive
        log.warning("external classifier reloaded; the process starts untrained")
        return ExternalModel(d["command"], d.get("timeout", 60.0), d.get("feature_config"), d.get("seed", 0))
    raise ValueError(f"unknown classifier kind {d.get('kind')!r}")


def load_model(path):
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
