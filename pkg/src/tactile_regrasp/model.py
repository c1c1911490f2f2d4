"""Tactile grasp-quality regressor written directly in numpy.

Both imprints go through one shared stack of strided 3x3 convolutions with
ReLU. Each branch is globally average pooled, the two pooled vectors are
concatenated, and a single sigmoid unit maps them to a quality in (0, 1).
Gradients are derived by hand; training uses Adam on soft-label
cross-entropy.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import ImagePair

KERNEL = 3
STRIDE = 2
LOSS_CLAMP = 1e-12


@dataclass(frozen=True)
class ModelConfig:
    input_size: int = 32
    conv_channels: tuple[int, ...] = (8, 16)
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 60
    batch_size: int = 32
    init_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "conv_channels", tuple(int(c) for c in self.conv_channels))
        if not self.conv_channels or min(self.conv_channels) < 1:
            raise ValueError("conv_channels must be a non-empty list of positive ints")
        if min(self.input_size, self.epochs, self.batch_size) < 1:
            raise ValueError("input_size, epochs and batch_size must be positive")
        if min(self.learning_rate, self.epsilon) <= 0 or not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ValueError("invalid optimizer hyperparameters")
        if self.final_size < 2:
            raise ValueError(
                f"{len(self.conv_channels)} conv layers reduce {self.input_size}px below 2x2"
            )

    @property
    def final_size(self) -> int:
        n = self.input_size
        for _ in self.conv_channels:
            n = (n - KERNEL) // STRIDE + 1
        return n


@dataclass
class QualityModelParams:
    """Shared-backbone kernels ``(out, in, 3, 3)``, biases, and the dense head."""

    kernels: list[np.ndarray]
    biases: list[np.ndarray]
    dense_w: np.ndarray
    dense_b: np.ndarray

    def __post_init__(self):
        if len(self.kernels) != len(self.biases) or not self.kernels:
            raise ValueError("need one bias vector per conv kernel")
        c_last = self.kernels[-1].shape[0]
        if self.dense_w.shape != (2 * c_last,):
            raise ValueError(f"dense weights must have length {2 * c_last}, got {self.dense_w.shape}")
        self.dense_b = np.asarray(self.dense_b).reshape(1)

    def arrays(self) -> list[np.ndarray]:
        out = []
        for k, b in zip(self.kernels, self.biases):
            out += [k, b]
        return out + [self.dense_w, self.dense_b]

    @classmethod
    def from_arrays(cls, arrays) -> QualityModelParams:
        arrays = list(arrays)
        if len(arrays) < 4 or len(arrays) % 2:
            raise ValueError(f"expected an even number (>= 4) of arrays, got {len(arrays)}")
        conv = arrays[:-2]
        return cls(list(conv[0::2]), list(conv[1::2]), arrays[-2], arrays[-1])

    def astype(self, dtype) -> QualityModelParams:
        return QualityModelParams.from_arrays([np.asarray(a, dtype=dtype) for a in self.arrays()])

    @property
    def channels(self) -> int:
        return self.kernels[-1].shape[0]


@dataclass
class AdamState:
    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0

    @classmethod
    def fresh(cls, params) -> AdamState:
        arrays = _as_arrays(params)
        return cls([np.zeros_like(a, dtype=np.float64) for a in arrays],
                   [np.zeros_like(a, dtype=np.float64) for a in arrays], 0)


@dataclass
class ForwardCache:
    x: np.ndarray                      # (B, 2, S, S) model inputs
    pre: list[np.ndarray]              # pre-activation per conv layer, (2B, C, h, w)
    acts: list[np.ndarray] = field(default_factory=list)  # layer inputs then outputs
    z: np.ndarray | None = None        # concatenated pooled features (B, 2C)
    q: np.ndarray | None = None

    @property
    def features(self) -> np.ndarray:
        return self.acts[-1]


def init_params(config: ModelConfig) -> QualityModelParams:
    rng = np.random.default_rng(config.init_seed)
    kernels, biases = [], []
    c_in = 1
    for c_out in config.conv_channels:
        fan_in = c_in * KERNEL * KERNEL
        kernels.append(rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(c_out, c_in, KERNEL, KERNEL)))
        biases.append(np.zeros(c_out))
        c_in = c_out
    dense_w = rng.normal(0.0, np.sqrt(1.0 / (2 * c_in)), size=2 * c_in)
    return QualityModelParams(kernels, biases, dense_w, np.zeros(1))


def _area_matrix(n_in: int, n_out: int) -> np.ndarray:
    # fraction of each input cell covered by each output cell, rows normalized
    edges_out = np.linspace(0.0, n_in, n_out + 1)
    lo = np.maximum(edges_out[:-1, None], np.arange(n_in)[None, :])
    hi = np.minimum(edges_out[1:, None], np.arange(1, n_in + 1)[None, :])
    a = np.clip(hi - lo, 0.0, None)
    return a / a.sum(axis=1, keepdims=True)


def resample(pixels: np.ndarray, size: int) -> np.ndarray:
    """Area-average a 2D grid to ``size x size``."""
    h, w = pixels.shape
    if h == size and w == size:
        return np.asarray(pixels, dtype=np.float64)
    return _area_matrix(h, size) @ pixels @ _area_matrix(w, size).T


def prepare(pairs, input_size: int) -> np.ndarray:
    """Stack pairs into a ``(B, 2, S, S)`` float64 batch."""
    if isinstance(pairs, ImagePair):
        pairs = [pairs]
    out = np.empty((len(pairs), 2, input_size, input_size))
    for i, p in enumerate(pairs):
        out[i, 0] = resample(p.left.pixels, input_size)
        out[i, 1] = resample(p.right.pixels, input_size)
    return out


def sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _patches(x: np.ndarray, ho: int, wo: int) -> np.ndarray:
    # (N, C, H, W) -> (N*ho*wo, C*9) im2col matrix
    win = np.lib.stride_tricks.sliding_window_view(x, (KERNEL, KERNEL), axis=(2, 3))
    win = win[:, :, :STRIDE * ho:STRIDE, :STRIDE * wo:STRIDE]
    n, c = x.shape[:2]
    return win.transpose(0, 2, 3, 1, 4, 5).reshape(n * ho * wo, c * KERNEL * KERNEL)


def _out_size(n: int) -> int:
    return (n - KERNEL) // STRIDE + 1


def _conv(x: np.ndarray, k: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    ho, wo = _out_size(x.shape[2]), _out_size(x.shape[3])
    out = _patches(x, ho, wo) @ k.reshape(k.shape[0], -1).T + b
    return out.reshape(n, ho, wo, k.shape[0]).transpose(0, 3, 1, 2)


def _conv_backward(x: np.ndarray, k: np.ndarray, dout: np.ndarray, need_dx: bool = True):
    n, o, ho, wo = dout.shape
    d = dout.transpose(0, 2, 3, 1).reshape(n * ho * wo, o)
    dk = (d.T @ _patches(x, ho, wo)).reshape(k.shape)
    if not need_dx:
        return dk, d.sum(axis=0), None
    dcols = (d @ k.reshape(o, -1)).reshape(n, ho, wo, k.shape[1], KERNEL, KERNEL)
    dx = np.zeros_like(x)
    for i in range(KERNEL):
        for j in range(KERNEL):
            dx[:, :, i:i + STRIDE * ho:STRIDE, j:j + STRIDE * wo:STRIDE] += dcols[..., i, j].transpose(0, 3, 1, 2)
    return dk, d.sum(axis=0), dx


def forward_batch(params: QualityModelParams, x: np.ndarray):
    """Run a prepared ``(B, 2, S, S)`` batch; returns (q of shape (B,), cache)."""
    b = x.shape[0]
    h = x.reshape(2 * b, 1, x.shape[2], x.shape[3])  # rows alternate left, right
    cache = ForwardCache(x=x, pre=[], acts=[h])
    for k, bias in zip(params.kernels, params.biases):
        pre = _conv(h, np.asarray(k, np.float64), np.asarray(bias, np.float64))
        h = np.maximum(pre, 0.0)
        cache.pre.append(pre)
        cache.acts.append(h)
    g = h.mean(axis=(2, 3))                       # (2B, C)
    z = g.reshape(b, 2 * g.shape[1])              # [g_L ; g_R]
    logit = z @ np.asarray(params.dense_w, np.float64) + float(params.dense_b[0])
    if not np.all(np.isfinite(logit)):
        bad = np.flatnonzero(~np.isfinite(logit))
        raise FloatingPointError(f"non-finite activation for batch items {bad.tolist()}")
    q = sigmoid(logit)
    cache.z, cache.q = z, q
    return q, cache


def forward(params: QualityModelParams, pair: ImagePair, input_size: int = 32):
    q, cache = forward_batch(params, prepare(pair, input_size))
    return float(q[0]), cache


def predict(params: QualityModelParams, pairs, input_size: int = 32, chunk: int = 256) -> np.ndarray:
    pairs = list(pairs)
    out = [forward_batch(params, prepare(pairs[i:i + chunk], input_size))[0] for i in range(0, len(pairs), chunk)]
    return np.concatenate(out) if out else np.zeros(0)


def loss(q, y):
    """Soft-label binary cross-entropy."""
    q = np.clip(q, LOSS_CLAMP, 1.0 - LOSS_CLAMP)
    return -(y * np.log(q) + (1.0 - y) * np.log(1.0 - q))


def loss_grad_q(q, y):
    q = np.clip(q, LOSS_CLAMP, 1.0 - LOSS_CLAMP)
    return -y / q + (1.0 - y) / (1.0 - q)


def backward(params: QualityModelParams, cache: ForwardCache, y, scale: float = 1.0) -> QualityModelParams:
    """Gradients of ``scale * mean_batch(loss)`` for every parameter.

    The shared backbone receives the sum of both branch contributions.
    """
    y = np.broadcast_to(np.asarray(y, dtype=np.float64), cache.q.shape)
    b = cache.q.shape[0]
    # sigmoid + cross-entropy: d loss / d logit = q - y
    dlogit = scale * (cache.q - y) / b
    w = np.asarray(params.dense_w, np.float64)
    dw = cache.z.T @ dlogit
    db = np.array([dlogit.sum()])
    dz = np.outer(dlogit, w)                       # (B, 2C)
    feats = cache.acts[-1]
    c, hh, ww = feats.shape[1:]
    dg = dz.reshape(2 * b, c)
    dh = np.broadcast_to(dg[:, :, None, None] / (hh * ww), feats.shape).copy()
    dks, dbs = [], []
    for layer in range(len(params.kernels) - 1, -1, -1):
        dpre = dh * (cache.pre[layer] > 0)
        dk, dbias, dh = _conv_backward(cache.acts[layer], np.asarray(params.kernels[layer], np.float64), dpre, layer > 0)
        dks.append(dk)
        dbs.append(dbias)
    return QualityModelParams(dks[::-1], dbs[::-1], dw, db)


def _as_arrays(params) -> list[np.ndarray]:
    return params.arrays() if isinstance(params, QualityModelParams) else [np.asarray(a) for a in params]


def adam_step(params, grads, state: AdamState, config: ModelConfig):
    """One bias-corrected Adam update.

    ``params``/``grads`` are both :class:`QualityModelParams` or both lists of
    arrays; the result has the same form. Inputs are not modified.
    """
    p_arr, g_arr = _as_arrays(params), _as_arrays(grads)
    if [a.shape for a in p_arr] != [g.shape for g in g_arr] or len(state.m) != len(p_arr):
        raise ValueError("parameter, gradient and state shapes disagree")
    t = state.t + 1
    b1, b2 = config.beta1, config.beta2
    new_p, new_m, new_v = [], [], []
    for p, g, m, v in zip(p_arr, g_arr, state.m, state.v):
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        m_hat = m / (1 - b1 ** t)
        v_hat = v / (1 - b2 ** t)
        new_p.append(np.asarray(p, np.float64) - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon))
        new_m.append(m)
        new_v.append(v)
    out = QualityModelParams.from_arrays(new_p) if isinstance(params, QualityModelParams) else new_p
    return out, AdamState(new_m, new_v, t)


def train(dataset, config: ModelConfig, verbose: bool = False):
    """Fit the model; returns (float32 params, per-epoch mean loss list).

    Deterministic given (dataset, config): shuffling and initialization both
    derive from ``config.init_seed``.
    """
    dataset = list(dataset)
    if not dataset:
        raise ValueError("cannot train on an empty dataset")
    x = prepare([r.pair for r in dataset], config.input_size)
    y = np.array([r.score.value for r in dataset])
    params = init_params(config)
    state = AdamState.fresh(params)
    rng = np.random.default_rng([config.init_seed, 7])
    history = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(dataset))
        total = 0.0
        for start in range(0, len(order), config.batch_size):
            idx = order[start:start + config.batch_size]
            q, cache = forward_batch(params, x[idx])
            total += float(loss(q, y[idx]).sum())
            params, state = adam_step(params, backward(params, cache, y[idx]), state, config)
        history.append(total / len(dataset))
        if verbose:
            print(f"epoch {epoch + 1:3d}  loss {history[-1]:.4f}")
    return params.astype(np.float32), history


def evaluate(params: QualityModelParams, dataset, boundary: float = 0.5, input_size: int = 32) -> dict:
    dataset = list(dataset)
    if not dataset:
        raise ValueError("cannot evaluate on an empty dataset")
    q = predict(params, [r.pair for r in dataset], input_size)
    return metrics_from_predictions(q, np.array([r.score.value for r in dataset]), boundary)


def metrics_from_predictions(q, labels, boundary: float = 0.5) -> dict:
    q, labels = np.asarray(q, float), np.asarray(labels, float)
    truth, pred = labels > boundary, q > boundary
    return {
        "accuracy": float(np.mean(truth == pred)),
        "true_positive": int(np.sum(truth & pred)),
        "false_positive": int(np.sum(~truth & pred)),
        "true_negative": int(np.sum(~truth & ~pred)),
        "false_negative": int(np.sum(truth & ~pred)),
        "mean_abs_error": float(np.mean(np.abs(q - labels))),
        "count": int(len(q)),
    }


def _bilinear(m: np.ndarray, size: int) -> np.ndarray:
    # pixel-center aligned, edge-clamped
    def axis_weights(n_in):
        pos = np.clip((np.arange(size) + 0.5) * n_in / size - 0.5, 0, n_in - 1)
        i0 = np.floor(pos).astype(int)
        i1 = np.minimum(i0 + 1, n_in - 1)
        return i0, i1, pos - i0

    r0, r1, fr = axis_weights(m.shape[0])
    c0, c1, fc = axis_weights(m.shape[1])
    rows = m[r0] * (1 - fr)[:, None] + m[r1] * fr[:, None]
    return rows[:, c0] * (1 - fc)[None, :] + rows[:, c1] * fc[None, :]


def _normalize(m: np.ndarray) -> np.ndarray:
    lo, hi = m.min(), m.max()
    if hi - lo <= 1e-12 * max(1.0, abs(hi)):
        return np.zeros_like(m)
    return (m - lo) / (hi - lo)


def cam(params: QualityModelParams, pair: ImagePair, input_size: int = 32, cache: ForwardCache | None = None):
    """Class activation maps for the left and right imprints, each in [0, 1]."""
    if cache is None:
        _, cache = forward(params, pair, input_size)
    feats = cache.features[:2]               # left, right branch of the first pair
    c = params.channels
    w = np.asarray(params.dense_w, np.float64)
    maps = []
    for side in range(2):
        raw = np.tensordot(w[side * c:(side + 1) * c], feats[side], axes=1)
        maps.append(_normalize(_bilinear(raw, input_size)))
    return maps[0], maps[1]


def with_dense(params: QualityModelParams, dense_w=None, dense_b=None) -> QualityModelParams:
    return replace(
        params,
        dense_w=params.dense_w if dense_w is None else np.asarray(dense_w),
        dense_b=params.dense_b if dense_b is None else np.asarray(dense_b),
    )
