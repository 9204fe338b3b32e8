"""Case retrieval for warm-starting the coverage search.

A fully-connected autoencoder compresses a window's demand tensor into a
short latent vector; cosine similarity between latents ranks historical
planning windows, and the best-ranked stored decisions seed extra local
searches. The encoder/decoder stack, loss, gradients, and the adaptive-moment
optimizer are implemented directly on numpy arrays so every gradient can be
checked against finite differences.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .channel import GainTable, RadioConfig
from .geometry import NetworkLayout
from .power import PowerPlan
from .search import SearchResult, loscs
from .slicing import ScmDecision, SliceSpec
from .traffic import DtdInstance


class TrainingDiverged(RuntimeError):
    """Raised when the training loss stops being finite."""

    def __init__(self, history):
        super().__init__("training loss became non-finite")
        self.history = list(history)


def _act(name: str, z: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(z, 0.0)
    if name == "leaky_relu":
        return np.where(z > 0, z, 0.01 * z)
    if name == "tanh":
        return np.tanh(z)
    if name == "sigmoid":
        return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
    if name == "softplus":
        return np.logaddexp(0.0, z)
    if name == "linear":
        return z
    raise ValueError(f"unknown activation {name!r}")


def _act_grad(name: str, z: np.ndarray, a: np.ndarray) -> np.ndarray:
    if name == "relu":
        return (z > 0).astype(float)
    if name == "leaky_relu":
        return np.where(z > 0, 1.0, 0.01)
    if name == "tanh":
        return 1.0 - a * a
    if name == "sigmoid":
        return a * (1.0 - a)
    if name == "softplus":
        return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
    if name == "linear":
        return np.ones_like(z)
    raise ValueError(f"unknown activation {name!r}")


@dataclass
class Autoencoder:
    """Mirrored fully-connected encoder/decoder over flattened demand tensors.

    layer_sizes gives the encoder widths from input to latent; the decoder
    walks the same widths back up. activations has one entry per stack layer
    (encoder then decoder) and must end in sigmoid so reconstructions live in
    (0, 1). norm_lo/norm_hi min-max scale raw bits into [0, 1] and are fitted
    from the training set.
    """

    layer_sizes: tuple[int, ...]
    activations: tuple[str, ...]
    weights: list[np.ndarray] = field(repr=False)
    biases: list[np.ndarray] = field(repr=False)
    norm_lo: float = 0.0
    norm_hi: float = 1.0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 2:
            raise ValueError("need at least an input and a latent size")
        if sizes[-1] >= sizes[0]:
            raise ValueError("latent dimension must be smaller than the input")
        stack = self.stack_sizes
        if len(self.activations) != len(stack) - 1:
            raise ValueError(
                f"need {len(stack) - 1} activations for {len(stack)} stack sizes"
            )
        if self.activations[-1] != "sigmoid":
            raise ValueError("the output layer must be sigmoid")
        if len(self.weights) != len(stack) - 1 or len(self.biases) != len(stack) - 1:
            raise ValueError("one weight and bias array per stack layer required")
        for j, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (stack[j + 1], stack[j]) or b.shape != (stack[j + 1],):
                raise ValueError(f"layer {j}: bad parameter shape {w.shape}/{b.shape}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"layer {j}: non-finite parameters")
        object.__setattr__(self, "layer_sizes", sizes)

    @property
    def stack_sizes(self) -> tuple[int, ...]:
        return tuple(self.layer_sizes) + tuple(reversed(self.layer_sizes))[1:]

    @property
    def encoder_depth(self) -> int:
        return len(self.layer_sizes) - 1

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def latent_dim(self) -> int:
        return self.layer_sizes[-1]


def init_autoencoder(
    layer_sizes: Sequence[int],
    *,
    hidden_activation: str = "relu",
    seed: int = 0,
) -> Autoencoder:
    """Glorot-initialised mirrored stack with sigmoid output."""
    sizes = tuple(int(s) for s in layer_sizes)
    stack = sizes + tuple(reversed(sizes))[1:]
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for j in range(len(stack) - 1):
        fan_in, fan_out = stack[j], stack[j + 1]
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    acts = tuple([hidden_activation] * (len(stack) - 2) + ["sigmoid"])
    return Autoencoder(layer_sizes=sizes, activations=acts, weights=weights, biases=biases)


def _flatten(dtd) -> np.ndarray:
    if isinstance(dtd, DtdInstance):
        return dtd.loads_bits.ravel()
    return np.asarray(dtd, dtype=float).ravel()


def normalize_input(ae: Autoencoder, dtd) -> np.ndarray:
    """Min-max scale a flattened demand tensor into [0, 1]."""
    x = _flatten(dtd)
    if x.size != ae.input_dim:
        raise ValueError(f"input has {x.size} entries, the model expects {ae.input_dim}")
    span = ae.norm_hi - ae.norm_lo
    if span <= 0:
        return np.zeros_like(x)
    return np.clip((x - ae.norm_lo) / span, 0.0, 1.0)


def fit_normalization(ae: Autoencoder, dataset: Sequence) -> None:
    vals = np.concatenate([_flatten(d) for d in dataset])
    ae.norm_lo = float(vals.min())
    ae.norm_hi = float(vals.max())


def _forward(ae: Autoencoder, x: np.ndarray):
    """Full stack forward pass; returns pre-activations and activations."""
    zs, acts = [], [x]
    a = x
    for w, b, name in zip(ae.weights, ae.biases, ae.activations):
        z = a @ w.T + b
        a = _act(name, z)
        zs.append(z)
        acts.append(a)
    return zs, acts


def encode(ae: Autoencoder, dtd) -> np.ndarray:
    """Latent features of one demand tensor (deterministic forward pass)."""
    a = normalize_input(ae, dtd)[None, :]
    for j in range(ae.encoder_depth):
        z = a @ ae.weights[j].T + ae.biases[j]
        a = _act(ae.activations[j], z)
    out = a[0]
    if not np.all(np.isfinite(out)):
        raise ValueError("encoder produced non-finite latent features")
    return out


def _bce_from_logits(z: np.ndarray, y: np.ndarray) -> float:
    # mean over elements of -[y ln s(z) + (1-y) ln(1-s(z))]
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def reconstruction_loss(ae: Autoencoder, dtd) -> float:
    """Mean elementwise cross entropy between input and reconstruction."""
    y = normalize_input(ae, dtd)[None, :]
    zs, _ = _forward(ae, y)
    loss = _bce_from_logits(zs[-1], y)
    if not math.isfinite(loss):
        raise ValueError("reconstruction loss is non-finite")
    return loss


def loss_and_grads(ae: Autoencoder, batch: np.ndarray):
    """Loss plus analytic gradients for every weight and bias.

    batch rows are already-normalized inputs; they double as targets. The
    sigmoid output layer and cross-entropy combine into the usual
    (reconstruction - target) error at the last pre-activation.
    """
    y = np.atleast_2d(batch)
    zs, acts = _forward(ae, y)
    loss = _bce_from_logits(zs[-1], y)
    n_layers = len(ae.weights)
    grad_w = [None] * n_layers
    grad_b = [None] * n_layers
    delta = (_act("sigmoid", zs[-1]) - y) / y.size
    for j in range(n_layers - 1, -1, -1):
        grad_w[j] = delta.T @ acts[j]
        grad_b[j] = delta.sum(axis=0)
        if j > 0:
            delta = (delta @ ae.weights[j]) * _act_grad(
                ae.activations[j - 1], zs[j - 1], acts[j]
            )
    return loss, grad_w, grad_b


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


@dataclass(frozen=True)
class TrainReport:
    initial_loss: float
    epoch_losses: tuple[float, ...]


def train(
    ae: Autoencoder,
    dataset: Sequence,
    config: TrainConfig = TrainConfig(),
    seed: int = 0,
) -> TrainReport:
    """Mini-batch adaptive-moment training; seeded shuffling, in-place update.

    Normalization constants are fitted from the dataset before the first
    step. Raises TrainingDiverged as soon as a batch loss is non-finite.
    """
    if len(dataset) == 0:
        raise ValueError("training needs a nonempty dataset")
    fit_normalization(ae, dataset)
    X = np.stack([normalize_input(ae, d) for d in dataset])
    rng = np.random.default_rng(seed)
    m_w = [np.zeros_like(w) for w in ae.weights]
    v_w = [np.zeros_like(w) for w in ae.weights]
    m_b = [np.zeros_like(b) for b in ae.biases]
    v_b = [np.zeros_like(b) for b in ae.biases]
    initial_loss, _, _ = loss_and_grads(ae, X)
    step = 0
    history: list[float] = []
    for _ in range(config.epochs):
        order = rng.permutation(len(X))
        epoch_losses = []
        for start in range(0, len(X), config.batch_size):
            batch = X[order[start : start + config.batch_size]]
            loss, gw, gb = loss_and_grads(ae, batch)
            if not math.isfinite(loss):
                raise TrainingDiverged(history)
            epoch_losses.append(loss)
            step += 1
            corr1 = 1.0 - config.beta1**step
            corr2 = 1.0 - config.beta2**step
            for j in range(len(ae.weights)):
                for g, m, v, p in ((gw[j], m_w[j], v_w[j], ae.weights[j]),
                                   (gb[j], m_b[j], v_b[j], ae.biases[j])):
                    m *= config.beta1
                    m += (1 - config.beta1) * g
                    v *= config.beta2
                    v += (1 - config.beta2) * g * g
                    p -= config.learning_rate * (m / corr1) / (np.sqrt(v / corr2) + config.eps)
        history.append(float(np.mean(epoch_losses)))
    return TrainReport(initial_loss=float(initial_loss), epoch_losses=tuple(history))


def similarity(ae: Autoencoder, dtd_a, dtd_b) -> float:
    """Cosine similarity of two instances' latent features; 0 if either
    latent is the zero vector."""
    va = encode(ae, dtd_a)
    vb = encode(ae, dtd_b)
    na = np.linalg.norm(va)
    nb = np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(va, vb) / (na * nb))


def save_model(ae: Autoencoder, path: str | Path) -> None:
    """Persist layer sizes, activations, normalization, and raw parameters."""
    meta = {
        "layer_sizes": list(ae.layer_sizes),
        "activations": list(ae.activations),
        "norm_lo": ae.norm_lo,
        "norm_hi": ae.norm_hi,
    }
    arrays = {"meta": np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8)}
    for j, (w, b) in enumerate(zip(ae.weights, ae.biases)):
        arrays[f"w{j}"] = w
        arrays[f"b{j}"] = b
    with open(Path(path), "wb") as fh:
        np.savez(fh, **arrays)


def load_model(path: str | Path) -> Autoencoder:
    with np.load(Path(path)) as data:
        meta = json.loads(bytes(data["meta"]).decode())
        n_layers = 2 * (len(meta["layer_sizes"]) - 1)
        weights = [data[f"w{j}"].copy() for j in range(n_layers)]
        biases = [data[f"b{j}"].copy() for j in range(n_layers)]
    return Autoencoder(
        layer_sizes=tuple(meta["layer_sizes"]),
        activations=tuple(meta["activations"]),
        weights=weights,
        biases=biases,
        norm_lo=meta["norm_lo"],
        norm_hi=meta["norm_hi"],
    )


@dataclass(frozen=True)
class DataRecord:
    """One planned window: demand, decision, power plan, and objective."""

    dtd: DtdInstance
    scm: ScmDecision
    plan: PowerPlan
    objective: float


class RecordStore:
    """Bounded first-in-first-out collection of planned windows."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self.capacity = int(capacity)
        self.records: list[DataRecord] = []

    def __len__(self) -> int:
        return len(self.records)

    def insert(self, record: DataRecord) -> None:
        self.records.append(record)
        while len(self.records) > self.capacity:
            self.records.pop(0)

    def select_top_k(self, ae: Autoencoder, dtd, k: int) -> list[DataRecord]:
        """The k records most latent-similar to `dtd`, newest first on ties."""
        if k <= 0 or not self.records:
            return []
        sims = [similarity(ae, dtd, rec.dtd) for rec in self.records]
        order = sorted(range(len(self.records)), key=lambda j: (-sims[j], -j))
        return [self.records[j] for j in order[:k]]


def _record_to_obj(rec: DataRecord) -> dict:
    return {
        "dtd": {
            "loads_bits": rec.dtd.loads_bits.tolist(),
            "num_intervals": rec.dtd.num_intervals,
            "interval_duration_s": rec.dtd.interval_duration_s,
        },
        "scm": {
            "l_full": list(rec.scm.l_full),
            "l_reduced": list(rec.scm.l_reduced),
            "zoom": [list(row) for row in rec.scm.zoom],
        },
        "plan": {
            "power_w": rec.plan.power_w.tolist(),
            "feasible": rec.plan.feasible,
            "infeasibility_reason": rec.plan.infeasibility_reason,
        },
        "objective": rec.objective,
    }


def _record_from_obj(obj: dict) -> DataRecord:
    dtd = DtdInstance(
        loads_bits=np.asarray(obj["dtd"]["loads_bits"], dtype=float),
        num_intervals=obj["dtd"]["num_intervals"],
        interval_duration_s=obj["dtd"]["interval_duration_s"],
    )
    scm = ScmDecision(
        l_full=tuple(obj["scm"]["l_full"]),
        l_reduced=tuple(obj["scm"]["l_reduced"]),
        zoom=tuple(tuple(row) for row in obj["scm"]["zoom"]),
    )
    plan = PowerPlan(
        power_w=np.asarray(obj["plan"]["power_w"], dtype=float),
        feasible=obj["plan"]["feasible"],
        infeasibility_reason=obj["plan"]["infeasibility_reason"],
    )
    return DataRecord(dtd=dtd, scm=scm, plan=plan, objective=obj["objective"])


def save_store(store: RecordStore, path: str | Path) -> None:
    """One JSON record per line; append-friendly and bit-exact on floats."""
    with open(Path(path), "w") as fh:
        for rec in store.records:
            fh.write(json.dumps(_record_to_obj(rec)) + "\n")


def load_store(path: str | Path, capacity: int) -> RecordStore:
    store = RecordStore(capacity)
    with open(Path(path)) as fh:
        for line in fh:
            if line.strip():
                store.insert(_record_from_obj(json.loads(line)))
    return store


def ulscs(
    layout: NetworkLayout,
    dtd: DtdInstance,
    slice_spec: SliceSpec,
    radio: RadioConfig,
    ae: Autoencoder,
    store: RecordStore,
    k: int,
    seed: int = 0,
    *,
    gains: GainTable | None = None,
    power_solver: str = "grid",
    cz: bool = False,
    update_store: bool = True,
) -> SearchResult:
    """Local search refined by warm starts from the most similar records.

    The baseline run uses the default start and the given seed, so the result
    can never fall below plain `loscs` on the same inputs. Every selected
    record's stored decision seeds one extra run; the best outcome wins and
    (unless disabled) is appended to the store as a new record.
    """
    selected = store.select_top_k(ae, dtd, k)
    best = loscs(
        layout, dtd, slice_spec, radio, seed=seed, gains=gains,
        power_solver=power_solver, cz=cz,
    )
    evaluations = best.evaluations
    for rec in selected:
        warm = loscs(
            layout, dtd, slice_spec, radio, init=rec.scm, seed=seed, gains=gains,
            power_solver=power_solver, cz=cz,
        )
        evaluations += warm.evaluations
        if warm.objective > best.objective:
            best = warm
    result = SearchResult(
        scm=best.scm,
        plan=best.plan,
        objective=best.objective,
        trace=best.trace,
        evaluations=evaluations,
    )
    if update_store:
        store.insert(
            DataRecord(dtd=dtd, scm=result.scm, plan=result.plan, objective=result.objective)
        )
    return result
