"""Learned perception-cost model: a small fully-connected network on relative pose.

Features are the object centroid and face normal expressed in the camera
frame plus a one-hot class code, so the network never sees absolute
coordinates. The scalar output passes through a logistic nonlinearity (raw
values therefore already live in [0, 1]) and a final clamp kept as a guard.
Training is plain mini-batch gradient descent with per-parameter adaptive
step sizes and no momentum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FileFormatError, PerceptionError
from .geometry import CameraPose, Configuration, RobotModel, cross3, forward_kinematics
from .perception import PerceptionSample
from .scenegraph import ObjectNode, SceneGraph

MODEL_FORMAT_VERSION = 1
ENCODER_NAME = "camera_frame_v1"

# Paper-scale preset: five hidden layers of 256 units. The desk-scale default
# below trains in seconds and is what the tests use.
PAPER_HIDDEN_SIZES = (256, 256, 256, 256, 256)


@dataclass(frozen=True)
class TrainingConfig:
    epochs: int = 300
    batch_size: int = 128
    learning_rate: float = 1e-3
    hidden_sizes: tuple[int, ...] = (64, 64, 64)
    holdout_fraction: float = 0.1
    rms_decay: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise PerceptionError("epochs and batch_size must be >= 1")
        if not 0.0 < self.holdout_fraction < 1.0:
            raise PerceptionError("holdout_fraction must lie in (0, 1)")
        if not self.hidden_sizes:
            raise PerceptionError("at least one hidden layer required")


@dataclass
class TrainingReport:
    train_mse: list[float] = field(default_factory=list)
    holdout_mse: list[float] = field(default_factory=list)

    @property
    def final_train_mse(self) -> float:
        return self.train_mse[-1] if self.train_mse else math.nan

    @property
    def final_holdout_mse(self) -> float:
        return self.holdout_mse[-1] if self.holdout_mse else math.nan


def encode_features(cam: CameraPose, obj: ObjectNode,
                    vocabulary: tuple[str, ...]) -> np.ndarray:
    """Centroid and face normal in camera coordinates, then a one-hot class."""
    try:
        class_idx = vocabulary.index(obj.class_name)
    except ValueError:
        raise PerceptionError(
            f"class '{obj.class_name}' not in model vocabulary {list(vocabulary)}")
    f = cam.optical_axis
    u = cam.up
    l = cross3(u, f)
    c = obj.centroid
    m = cam.center
    d = (c[0] - m[0], c[1] - m[1], c[2] - m[2])
    n = obj.face_normal
    feats = np.zeros(6 + len(vocabulary))
    feats[0] = f[0] * d[0] + f[1] * d[1] + f[2] * d[2]
    feats[1] = l[0] * d[0] + l[1] * d[1] + l[2] * d[2]
    feats[2] = u[0] * d[0] + u[1] * d[1] + u[2] * d[2]
    feats[3] = f[0] * n[0] + f[1] * n[1] + f[2] * n[2]
    feats[4] = l[0] * n[0] + l[1] * n[1] + l[2] * n[2]
    feats[5] = u[0] * n[0] + u[1] * n[1] + u[2] * n[2]
    feats[6 + class_idx] = 1.0
    return feats


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class _MlpCore:
    """Weights plus forward/backward passes. Kept separate from the encoder so
    gradient checks can poke raw parameters."""

    def __init__(self, weights: list[np.ndarray], biases: list[np.ndarray]):
        self.weights = weights
        self.biases = biases

    @classmethod
    def initialize(cls, sizes: list[int], rng: np.random.Generator) -> "_MlpCore":
        weights = []
        biases = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            scale = math.sqrt(2.0 / fan_in)
            weights.append(rng.normal(0.0, scale, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases)

    def forward(self, x: np.ndarray) -> np.ndarray:
        a = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ w + b
            a = _sigmoid(z) if i == last else np.maximum(z, 0.0)
        return a[:, 0]

    def loss_and_gradients(self, x: np.ndarray, y: np.ndarray):
        """Mean squared error and its gradients w.r.t. every weight and bias."""
        activations = [x]
        zs = []
        a = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ w + b
            zs.append(z)
            a = _sigmoid(z) if i == last else np.maximum(z, 0.0)
            activations.append(a)
        out = activations[-1][:, 0]
        err = out - y
        loss = float(np.mean(err * err))

        batch = x.shape[0]
        delta = (2.0 * err / batch)[:, None] * (out * (1.0 - out))[:, None]
        grads_w = [np.empty(0)] * len(self.weights)
        grads_b = [np.empty(0)] * len(self.biases)
        for i in range(last, -1, -1):
            grads_w[i] = activations[i].T @ delta
            grads_b[i] = delta.sum(axis=0)
            if i > 0:
                delta = (delta @ self.weights[i].T) * (zs[i - 1] > 0.0)
        return loss, grads_w, grads_b


class MlpCostmap:
    """Trained perception-cost backend with the camera-frame feature encoder."""

    def __init__(self, core: _MlpCore, vocabulary: tuple[str, ...],
                 robot: RobotModel, hidden_sizes: tuple[int, ...]):
        self._core = core
        self.class_vocabulary = vocabulary
        self.robot = robot
        self.hidden_sizes = hidden_sizes

    def predict_features(self, feats: np.ndarray) -> np.ndarray:
        raw = self._core.forward(np.atleast_2d(feats))
        return np.clip(raw, 0.0, 1.0)

    def pose_cost(self, cam: CameraPose, obj: ObjectNode) -> float:
        return float(self.predict_features(
            encode_features(cam, obj, self.class_vocabulary))[0])

    def object_cost(self, q: Configuration, obj: ObjectNode) -> float:
        return self.pose_cost(forward_kinematics(q, self.robot), obj)

    def pose_costs_matrix(self, cams, objects) -> np.ndarray:
        """len(cams) x len(objects) cost matrix in one forward pass."""
        cams = list(cams)
        objects = list(objects)
        if not cams or not objects:
            return np.zeros((len(cams), len(objects)))
        rows = [encode_features(cam, obj, self.class_vocabulary)
                for cam in cams for obj in objects]
        out = self.predict_features(np.stack(rows))
        return out.reshape(len(cams), len(objects))

    def save(self, path) -> None:
        doc = {
            "format": MODEL_FORMAT_VERSION,
            "encoder": ENCODER_NAME,
            "class_vocabulary": list(self.class_vocabulary),
            "hidden_sizes": list(self.hidden_sizes),
            "layers": [
                {"w": w.tolist(), "b": b.tolist()}
                for w, b in zip(self._core.weights, self._core.biases)
            ],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")


def load_model(path, robot: RobotModel) -> MlpCostmap:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"model file {path}: invalid JSON ({exc})") from exc
    if doc.get("format") != MODEL_FORMAT_VERSION:
        raise FileFormatError(f"unsupported model format {doc.get('format')!r}")
    if doc.get("encoder") != ENCODER_NAME:
        raise FileFormatError(f"unknown feature encoder {doc.get('encoder')!r}")
    weights = [np.array(layer["w"], dtype=float) for layer in doc["layers"]]
    biases = [np.array(layer["b"], dtype=float) for layer in doc["layers"]]
    return MlpCostmap(_MlpCore(weights, biases),
                      tuple(doc["class_vocabulary"]), robot,
                      tuple(doc["hidden_sizes"]))


def _rmsprop_step(params, grads, caches, lr: float, decay: float, eps: float = 1e-8):
    for p, g, c in zip(params, grads, caches):
        c *= decay
        c += (1.0 - decay) * g * g
        p -= lr * g / (np.sqrt(c) + eps)


def train_costmap(samples: list[PerceptionSample], scene: SceneGraph,
                  robot: RobotModel, config: TrainingConfig | None = None
                  ) -> tuple[MlpCostmap, TrainingReport]:
    """Fit the costmap to labeled samples; returns the model and loss history.

    The sample list is split (1 - holdout_fraction)/holdout_fraction by a
    seeded permutation; the report tracks both losses per epoch.
    """
    if not samples:
        raise PerceptionError("cannot train on an empty dataset")
    config = config or TrainingConfig()
    vocabulary = scene.class_vocabulary
    x = np.stack([
        encode_features(s.camera, scene.object_by_id(s.object_id), vocabulary)
        for s in samples
    ])
    y = np.array([s.label for s in samples])

    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(3,)))
    order = rng.permutation(len(samples))
    n_hold = max(1, int(round(len(samples) * config.holdout_fraction)))
    if n_hold >= len(samples):
        raise PerceptionError("dataset too small for the holdout split")
    hold_idx = order[:n_hold]
    train_idx = order[n_hold:]
    x_train, y_train = x[train_idx], y[train_idx]
    x_hold, y_hold = x[hold_idx], y[hold_idx]

    sizes = [x.shape[1], *config.hidden_sizes, 1]
    core = _MlpCore.initialize(sizes, rng)
    caches_w = [np.zeros_like(w) for w in core.weights]
    caches_b = [np.zeros_like(b) for b in core.biases]

    report = TrainingReport()
    n_train = len(x_train)
    for _ in range(config.epochs):
        perm = rng.permutation(n_train)
        for start in range(0, n_train, config.batch_size):
            idx = perm[start:start + config.batch_size]
            _, gw, gb = core.loss_and_gradients(x_train[idx], y_train[idx])
            _rmsprop_step(core.weights, gw, caches_w,
                          config.learning_rate, config.rms_decay)
            _rmsprop_step(core.biases, gb, caches_b,
                          config.learning_rate, config.rms_decay)
        train_pred = core.forward(x_train)
        hold_pred = core.forward(x_hold)
        report.train_mse.append(float(np.mean((train_pred - y_train) ** 2)))
        report.holdout_mse.append(float(np.mean((hold_pred - y_hold) ** 2)))

    model = MlpCostmap(core, vocabulary, robot, config.hidden_sizes)
    return model, report
