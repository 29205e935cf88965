"""Learned frame alignment for canonicalized clouds, in plain numpy.

Architecture: a two-layer per-point attention head scores contour points
(softmax over the N points, per channel) and adds the scores onto the
coordinates; a shared per-point encoder with channelwise max-pooling
produces a global descriptor; a small decoder regresses a quaternion whose
rotation re-aligns the cloud.  The rotation preserves all pairwise
distances, so alignment never destroys geometry.

Forward and backward passes are hand-written and exact; ``grad_check``
validates every parameter's gradient against central finite differences.
A tiny PointNet-style classifier plus an end-to-end training loop
(``train_toy``) exercise the module on synthetic labeled shapes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contour import cat_transform
from .errors import ConfigError, InvalidQuaternion, TrainingDiverged
from .geometry import as_cloud, quat_to_rotation

ACTIVATIONS = ("relu", "none")

CHECKPOINT_VERSION = 1

# Channel maxima closer than this are considered tied; the pooled
# subgradient is then ambiguous and excluded from finite-difference checks.
MAXPOOL_TIE_TOL = 1e-12

# Denominator floor of the gradient-check relative error.  Some parameters
# have structurally zero gradient (a bias shifting a whole softmax column
# changes nothing), where central differences return pure rounding noise;
# the floor turns the comparison into an absolute one at the noise scale.
GRAD_CHECK_FLOOR = 1e-4


@dataclass
class MlpLayer:
    """Dense layer y = act(W x + b) with weights of shape (out_dim, in_dim)."""

    weights: np.ndarray
    bias: np.ndarray
    activation: str = "relu"

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        b = np.asarray(self.bias, dtype=float).reshape(-1)
        if w.ndim != 2 or w.shape[0] != b.shape[0]:
            raise ConfigError(f"weights {w.shape} do not match bias {b.shape}")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise ConfigError("layer parameters must be finite")
        if self.activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {self.activation!r}")
        self.weights = w
        self.bias = b

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]


def _init_layer(rng, in_dim, out_dim, activation, weight_scale=None) -> MlpLayer:
    if weight_scale is None:
        weight_scale = np.sqrt(2.0 / in_dim) if activation == "relu" else np.sqrt(1.0 / in_dim)
    return MlpLayer(
        weights=rng.normal(0.0, weight_scale, size=(out_dim, in_dim)),
        bias=np.zeros(out_dim),
        activation=activation,
    )


@dataclass
class FaParams:
    """Parameters of the alignment network.

    ``contour_enc1``/``contour_enc2`` form the attention head (3 -> H1 -> 3),
    ``encoder`` the shared per-point feature stack (3 -> H2 -> C), and
    ``decoder`` the quaternion head (C -> ... -> 4, final layer linear).
    """

    contour_enc1: MlpLayer
    contour_enc2: MlpLayer
    encoder: list = field(default_factory=list)
    decoder: list = field(default_factory=list)

    @classmethod
    def init(cls, rng: np.random.Generator, h1: int = 64, h2: int = 64, c: int = 128) -> "FaParams":
        """Random initialization; the quaternion head starts at the identity
        rotation (bias [1, 0, 0, 0], small weights) so early training steps
        leave clouds nearly unmoved."""
        head = _init_layer(rng, h2, 4, "none", weight_scale=1e-2)
        head.bias = np.array([1.0, 0.0, 0.0, 0.0])
        return cls(
            contour_enc1=_init_layer(rng, 3, h1, "relu"),
            contour_enc2=_init_layer(rng, h1, 3, "none"),
            encoder=[_init_layer(rng, 3, h2, "relu"), _init_layer(rng, h2, c, "relu")],
            decoder=[_init_layer(rng, c, h2, "relu"), head],
        )

    def named_layers(self):
        layers = [("contour_enc1", self.contour_enc1), ("contour_enc2", self.contour_enc2)]
        layers += [(f"encoder.{i}", l) for i, l in enumerate(self.encoder)]
        layers += [(f"decoder.{i}", l) for i, l in enumerate(self.decoder)]
        return layers


def _validate_params(params: FaParams):
    if params.contour_enc1.in_dim != 3 or params.contour_enc2.out_dim != 3:
        raise ConfigError("attention head must map 3 -> H1 -> 3")
    if params.contour_enc2.in_dim != params.contour_enc1.out_dim:
        raise ConfigError("attention head layers do not chain")
    if not params.encoder or not params.decoder:
        raise ConfigError("encoder and decoder must be non-empty")
    if params.encoder[0].in_dim != 3:
        raise ConfigError("encoder must consume 3 input channels")
    chain = params.encoder + params.decoder
    for prev, nxt in zip(chain, chain[1:]):
        if nxt.in_dim != prev.out_dim:
            raise ConfigError(
                f"layer dims do not chain: {prev.out_dim} -> {nxt.in_dim}"
            )
    if params.decoder[-1].out_dim != 4:
        raise ConfigError("decoder must end in 4 quaternion components")
    if params.decoder[-1].activation != "none":
        raise ConfigError("final decoder layer must be linear")


def _affine(layer: MlpLayer, x: np.ndarray) -> np.ndarray:
    return x @ layer.weights.T + layer.bias


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    return np.maximum(z, 0.0) if kind == "relu" else z


def _softmax_over_points(logits: np.ndarray) -> np.ndarray:
    """Column-wise softmax: each channel sums to 1 over the N points."""
    shifted = logits - logits.max(axis=0)
    e = np.exp(shifted)
    return e / e.sum(axis=0)


@dataclass
class _FaCache:
    p_in: np.ndarray
    z1: np.ndarray
    a1: np.ndarray
    logits: np.ndarray
    scores: np.ndarray
    p_aug: np.ndarray
    enc_caches: list
    encoded: np.ndarray
    pool_idx: np.ndarray
    dec_caches: list
    q_raw: np.ndarray
    q_norm: float
    q_hat: np.ndarray
    rotation: np.ndarray


def _contour_encode_fwd(p, params):
    z1 = _affine(params.contour_enc1, p)
    a1 = _activate(z1, params.contour_enc1.activation)
    logits = _affine(params.contour_enc2, a1)
    scores = _softmax_over_points(_activate(logits, params.contour_enc2.activation))
    return z1, a1, logits, scores, p + scores


def contour_encode(p_prime, params: FaParams) -> np.ndarray:
    """Augment a cloud with its attention scores.

    Per-point features ``relu(W1 p + b1)`` are projected back to 3 channels
    and passed through a softmax over the N points, per channel; the scores
    (each channel summing to 1) are added elementwise onto the input.

    Raises:
        ConfigError: if layer dimensions are inconsistent.
    """
    _validate_params(params)
    p = as_cloud(p_prime)
    *_, augmented = _contour_encode_fwd(p, params)
    return augmented


def _regress_fwd(p_aug, params):
    h = p_aug
    enc_caches = []
    for layer in params.encoder:
        z = _affine(layer, h)
        enc_caches.append((h, z))
        h = _activate(z, layer.activation)
    pool_idx = h.argmax(axis=0)
    g = h.max(axis=0)
    dec_caches = []
    for layer in params.decoder:
        z = _affine(layer, g)
        dec_caches.append((g, z))
        g = _activate(z, layer.activation)
    return enc_caches, h, pool_idx, dec_caches, g


def regress_frame(p_aug, params: FaParams) -> np.ndarray:
    """Regress the raw (unnormalized) alignment quaternion for a cloud.

    Shared per-point encoder, channelwise max over points, then the decoder.
    The max-pool makes the result exactly permutation-invariant.
    """
    _validate_params(params)
    *_, q = _regress_fwd(as_cloud(p_aug), params)
    return q


def _fa_forward(p, params):
    z1, a1, logits, scores, p_aug = _contour_encode_fwd(p, params)
    enc_caches, encoded, pool_idx, dec_caches, q = _regress_fwd(p_aug, params)
    q_norm = float(np.linalg.norm(q))
    rotation = quat_to_rotation(q)
    cache = _FaCache(
        p_in=p,
        z1=z1,
        a1=a1,
        logits=logits,
        scores=scores,
        p_aug=p_aug,
        enc_caches=enc_caches,
        encoded=encoded,
        pool_idx=pool_idx,
        dec_caches=dec_caches,
        q_raw=q,
        q_norm=q_norm,
        q_hat=q / q_norm,
        rotation=rotation,
    )
    return p @ rotation.T, cache


def fa_transform(p_prime, params: FaParams) -> np.ndarray:
    """Rotate a cloud by the regressed alignment rotation.

    The quaternion is normalized inside ``quat_to_rotation``, so the applied
    matrix is always in SO(3) and pairwise distances are preserved.
    """
    _validate_params(params)
    out, _ = _fa_forward(as_cloud(p_prime), params)
    return out


def cat_fa_transform(points, params: FaParams, tie_tol: float = 1e-9) -> np.ndarray:
    """Full pipeline: contour canonicalization followed by frame alignment."""
    return fa_transform(cat_transform(points, tie_tol=tie_tol).transformed, params)


def _rotation_quat_jacobian(q_hat: np.ndarray) -> np.ndarray:
    """d(rotation matrix)/d(unit quaternion), shape (4, 3, 3)."""
    w, x, y, z = q_hat
    return 2.0 * np.array(
        [
            [[0, -z, y], [z, 0, -x], [-y, x, 0]],
            [[0, y, z], [y, -2 * x, -w], [z, w, -2 * x]],
            [[-2 * y, x, w], [x, 0, z], [-w, z, -2 * y]],
            [[-2 * z, -w, x], [w, -2 * z, y], [x, y, 0]],
        ]
    )


def _zero_grads(named_layers) -> dict:
    return {
        name: (np.zeros_like(l.weights), np.zeros_like(l.bias))
        for name, l in named_layers
    }


def _fa_backward(d_out: np.ndarray, cache: _FaCache, params: FaParams) -> dict:
    """Gradients of a scalar loss w.r.t. every FA parameter.

    ``d_out`` is the loss gradient w.r.t. the rotated cloud.  Parameters
    influence the output only through the regressed rotation, so the chain
    runs rotation -> quaternion (through its normalization) -> decoder ->
    max-pool -> encoder -> attention head.
    """
    grads = {}

    d_rot = d_out.T @ cache.p_in
    d_qhat = np.einsum("jk,ijk->i", d_rot, _rotation_quat_jacobian(cache.q_hat))
    d_q = (d_qhat - cache.q_hat * float(cache.q_hat @ d_qhat)) / cache.q_norm

    g = d_q
    for i in reversed(range(len(params.decoder))):
        layer = params.decoder[i]
        inp, z = cache.dec_caches[i]
        if layer.activation == "relu":
            g = g * (z > 0)
        grads[f"decoder.{i}"] = (np.outer(g, inp), g.copy())
        g = layer.weights.T @ g

    d_encoded = np.zeros_like(cache.encoded)
    d_encoded[cache.pool_idx, np.arange(cache.encoded.shape[1])] = g

    g = d_encoded
    for i in reversed(range(len(params.encoder))):
        layer = params.encoder[i]
        inp, z = cache.enc_caches[i]
        if layer.activation == "relu":
            g = g * (z > 0)
        grads[f"encoder.{i}"] = (g.T @ inp, g.sum(axis=0))
        g = g @ layer.weights

    # g is now dL/d(augmented cloud); only the score branch carries params.
    d_scores = g
    s = cache.scores
    d_logits = s * (d_scores - np.sum(d_scores * s, axis=0))
    if params.contour_enc2.activation == "relu":
        d_logits = d_logits * (cache.logits > 0)
    grads["contour_enc2"] = (d_logits.T @ cache.a1, d_logits.sum(axis=0))
    d_a1 = d_logits @ params.contour_enc2.weights
    d_z1 = d_a1 * (cache.z1 > 0) if params.contour_enc1.activation == "relu" else d_a1
    grads["contour_enc1"] = (d_z1.T @ cache.p_in, d_z1.sum(axis=0))
    return grads


def _flatten(named_layers, table=None) -> np.ndarray:
    chunks = []
    for name, layer in named_layers:
        if table is None:
            chunks += [layer.weights.ravel(), layer.bias.ravel()]
        else:
            dw, db = table[name]
            chunks += [dw.ravel(), db.ravel()]
    return np.concatenate(chunks)


def _rebuild_params(params: FaParams, vec: np.ndarray) -> FaParams:
    """FaParams with the same structure but parameters taken from ``vec``."""
    layers = {}
    pos = 0
    for name, layer in params.named_layers():
        nw, nb = layer.weights.size, layer.bias.size
        layers[name] = MlpLayer(
            weights=vec[pos : pos + nw].reshape(layer.weights.shape).copy(),
            bias=vec[pos + nw : pos + nw + nb].copy(),
            activation=layer.activation,
        )
        pos += nw + nb
    return FaParams(
        contour_enc1=layers["contour_enc1"],
        contour_enc2=layers["contour_enc2"],
        encoder=[layers[f"encoder.{i}"] for i in range(len(params.encoder))],
        decoder=[layers[f"decoder.{i}"] for i in range(len(params.decoder))],
    )


def _probe_weights(shape) -> np.ndarray:
    # Anisotropic fixed weights; an unweighted sum of squares of a rotated
    # cloud is rotation-invariant and would carry no gradient signal.
    return np.linspace(0.5, 1.5, int(np.prod(shape))).reshape(shape)


def grad_check(params: FaParams, cloud, eps: float = 1e-5) -> float:
    """Max relative error between analytic and central-difference gradients.

    The probe loss is a fixed anisotropic weighted sum of squares of the
    aligned cloud.  Per-parameter relative error uses a denominator floor
    (GRAD_CHECK_FLOOR), so gradients below the floor are compared absolutely
    rather than against their own noise.  When a pooled channel's top two
    values tie within 1e-12 the subgradient is ambiguous; parameters
    upstream of the pool are then excluded from the comparison.
    """
    if not 1e-7 <= eps <= 1e-4:
        raise ValueError("eps must lie in [1e-7, 1e-4]")
    _validate_params(params)
    p = as_cloud(cloud)
    w = _probe_weights(p.shape)

    out, cache = _fa_forward(p, params)
    grads = _fa_backward(2.0 * w * out, cache, params)
    analytic = _flatten(params.named_layers(), grads)

    theta = _flatten(params.named_layers())
    numeric = np.empty_like(theta)
    for i in range(theta.size):
        bumped = theta.copy()
        bumped[i] = theta[i] + eps
        plus, _ = _fa_forward(p, _rebuild_params(params, bumped))
        bumped[i] = theta[i] - eps
        minus, _ = _fa_forward(p, _rebuild_params(params, bumped))
        numeric[i] = (float(np.sum(w * plus * plus)) - float(np.sum(w * minus * minus))) / (2 * eps)

    include = np.ones(theta.size, dtype=bool)
    if cache.encoded.shape[0] >= 2:
        top2 = np.sort(cache.encoded, axis=0)[-2:, :]
        if np.any(top2[1] - top2[0] < MAXPOOL_TIE_TOL):
            pos = 0
            for name, layer in params.named_layers():
                size = layer.weights.size + layer.bias.size
                if not name.startswith("decoder."):
                    include[pos : pos + size] = False
                pos += size

    rel = np.abs(analytic - numeric) / np.maximum.reduce(
        [np.abs(analytic), np.abs(numeric), np.full_like(analytic, GRAD_CHECK_FLOOR)]
    )
    return float(rel[include].max())


# ---------------------------------------------------------------------------
# Toy classifier and end-to-end training
# ---------------------------------------------------------------------------


@dataclass
class ClassifierParams:
    """PointNet-style classifier: shared MLP -> max-pool -> linear logits."""

    point_layers: list
    output: MlpLayer

    @classmethod
    def init(cls, rng, h2: int, c: int, num_classes: int) -> "ClassifierParams":
        return cls(
            point_layers=[
                _init_layer(rng, 3, h2, "relu"),
                _init_layer(rng, h2, c, "relu"),
            ],
            output=_init_layer(rng, c, num_classes, "none"),
        )

    def named_layers(self):
        layers = [(f"point.{i}", l) for i, l in enumerate(self.point_layers)]
        layers.append(("output", self.output))
        return layers


@dataclass
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 150
    batch_size: int = 10
    seed: int = 0
    h1: int = 16
    h2: int = 32
    c: int = 64

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ConfigError("learning_rate must be >= 0")
        for name in ("epochs", "batch_size", "h1", "h2", "c"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")


def _classifier_forward(points, clf: ClassifierParams):
    h = points
    caches = []
    for layer in clf.point_layers:
        z = _affine(layer, h)
        caches.append((h, z))
        h = _activate(z, layer.activation)
    pool_idx = h.argmax(axis=0)
    g = h.max(axis=0)
    logits = _affine(clf.output, g)
    return logits, (caches, h, pool_idx, g)


def classifier_logits(points, clf: ClassifierParams) -> np.ndarray:
    logits, _ = _classifier_forward(as_cloud(points), clf)
    return logits


def _classifier_backward(d_logits, cache, clf: ClassifierParams):
    caches, pooled_input, pool_idx, g = cache
    grads = {"output": (np.outer(d_logits, g), d_logits.copy())}
    d_g = clf.output.weights.T @ d_logits
    d_h = np.zeros_like(pooled_input)
    d_h[pool_idx, np.arange(pooled_input.shape[1])] = d_g
    g = d_h
    for i in reversed(range(len(clf.point_layers))):
        layer = clf.point_layers[i]
        inp, z = caches[i]
        if layer.activation == "relu":
            g = g * (z > 0)
        grads[f"point.{i}"] = (g.T @ inp, g.sum(axis=0))
        g = g @ layer.weights
    return grads, g


def _cross_entropy(logits, label):
    shifted = logits - logits.max()
    log_norm = float(np.log(np.sum(np.exp(shifted))))
    loss = log_norm - float(shifted[label])
    probs = np.exp(shifted - log_norm)
    d_logits = probs
    d_logits[label] -= 1.0
    return loss, d_logits


def _accumulate(total: dict, grads: dict):
    for name, (dw, db) in grads.items():
        total[name][0][...] += dw
        total[name][1][...] += db


def _step(named_layers, grads: dict, lr: float, scale: float):
    for name, layer in named_layers:
        dw, db = grads[name]
        layer.weights -= lr * scale * dw
        layer.bias -= lr * scale * db


def train_toy(dataset, cfg: TrainConfig, use_cat: bool = True, use_fa: bool = True):
    """Train the alignment network plus classifier with plain gradient descent.

    Clouds are canonicalized once up front when ``use_cat`` is set (the
    canonicalization has no parameters).  Deterministic for a fixed config:
    identical seeds give bitwise-identical parameters.  Returns
    ``(fa_params, classifier_params, history)`` where ``history`` has one
    ``{"epoch", "loss", "accuracy"}`` entry per epoch.

    Raises:
        TrainingDiverged: if the loss becomes non-finite.
    """
    clouds = list(dataset.clouds)
    labels = np.asarray(dataset.labels, dtype=int)
    if len(clouds) == 0:
        raise ValueError("dataset is empty")
    if dataset.num_classes < 2:
        raise ValueError("need at least two classes")

    rng = np.random.default_rng(cfg.seed)
    fa = FaParams.init(rng, cfg.h1, cfg.h2, cfg.c) if use_fa else None
    clf = ClassifierParams.init(rng, cfg.h2, cfg.c, dataset.num_classes)

    inputs = [
        cat_transform(c).transformed if use_cat else as_cloud(c) for c in clouds
    ]

    history = []
    n = len(inputs)
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        correct = 0
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            fa_grads = _zero_grads(fa.named_layers()) if use_fa else None
            clf_grads = _zero_grads(clf.named_layers())
            for i in batch:
                x = inputs[i]
                if use_fa:
                    try:
                        x, fa_cache = _fa_forward(x, fa)
                    except InvalidQuaternion as exc:
                        raise TrainingDiverged(
                            f"regressed quaternion became invalid at epoch {epoch}: {exc}"
                        ) from exc
                logits, clf_cache = _classifier_forward(x, clf)
                loss, d_logits = _cross_entropy(logits, labels[i])
                if not np.isfinite(loss):
                    raise TrainingDiverged(f"loss became non-finite at epoch {epoch}")
                epoch_loss += loss
                correct += int(np.argmax(logits) == labels[i])
                grads, d_input = _classifier_backward(d_logits, clf_cache, clf)
                _accumulate(clf_grads, grads)
                if use_fa:
                    _accumulate(fa_grads, _fa_backward(d_input, fa_cache, fa))
            scale = 1.0 / len(batch)
            _step(clf.named_layers(), clf_grads, cfg.learning_rate, scale)
            if use_fa:
                _step(fa.named_layers(), fa_grads, cfg.learning_rate, scale)
        history.append(
            {"epoch": epoch, "loss": epoch_loss / n, "accuracy": correct / n}
        )
    return fa, clf, history


def predict_labels(clouds, clf: ClassifierParams, fa: FaParams | None = None, use_cat: bool = True) -> np.ndarray:
    """Predicted class indices for a list of clouds."""
    out = []
    for cloud in clouds:
        x = cat_transform(cloud).transformed if use_cat else as_cloud(cloud)
        if fa is not None:
            x = fa_transform(x, fa)
        out.append(int(np.argmax(classifier_logits(x, clf))))
    return np.array(out, dtype=int)


def accuracy(predictions, labels) -> float:
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    return float(np.mean(predictions == labels))


# ---------------------------------------------------------------------------
# Checkpoints
# ---------------------------------------------------------------------------


def _pack_layers(prefix, named_layers, payload):
    for name, layer in named_layers:
        payload[f"{prefix}/{name}/weights"] = layer.weights
        payload[f"{prefix}/{name}/bias"] = layer.bias
        payload[f"{prefix}/{name}/activation"] = np.array(layer.activation)


def save_checkpoint(path, fa: FaParams | None = None, classifier: ClassifierParams | None = None):
    """Write parameters to an ``.npz`` checkpoint (bitwise round-trip).

    Layout: a ``format_version`` scalar plus, per layer, the keys
    ``{fa|classifier}/<layer-name>/{weights,bias,activation}`` with
    row-major float64 weight matrices of shape (out_dim, in_dim).
    """
    payload = {"format_version": np.array(CHECKPOINT_VERSION)}
    if fa is not None:
        _pack_layers("fa", fa.named_layers(), payload)
    if classifier is not None:
        _pack_layers("classifier", classifier.named_layers(), payload)
    np.savez(path, **payload)


def _unpack_layer(data, prefix, name) -> MlpLayer:
    return MlpLayer(
        weights=data[f"{prefix}/{name}/weights"],
        bias=data[f"{prefix}/{name}/bias"],
        activation=str(data[f"{prefix}/{name}/activation"]),
    )


def _layer_names(data, prefix):
    names = set()
    for key in data.files:
        if key.startswith(f"{prefix}/") and key.endswith("/weights"):
            names.add(key.split("/")[1])
    return names


def load_checkpoint(path):
    """Load ``(fa_params, classifier_params)``; either may be None."""
    data = np.load(path)
    version = int(data["format_version"])
    if version != CHECKPOINT_VERSION:
        raise ConfigError(f"unsupported checkpoint version {version}")

    fa = None
    fa_names = _layer_names(data, "fa")
    if fa_names:
        n_enc = sum(1 for n in fa_names if n.startswith("encoder."))
        n_dec = sum(1 for n in fa_names if n.startswith("decoder."))
        fa = FaParams(
            contour_enc1=_unpack_layer(data, "fa", "contour_enc1"),
            contour_enc2=_unpack_layer(data, "fa", "contour_enc2"),
            encoder=[_unpack_layer(data, "fa", f"encoder.{i}") for i in range(n_enc)],
            decoder=[_unpack_layer(data, "fa", f"decoder.{i}") for i in range(n_dec)],
        )

    clf = None
    clf_names = _layer_names(data, "classifier")
    if clf_names:
        n_point = sum(1 for n in clf_names if n.startswith("point."))
        clf = ClassifierParams(
            point_layers=[
                _unpack_layer(data, "classifier", f"point.{i}") for i in range(n_point)
            ],
            output=_unpack_layer(data, "classifier", "output"),
        )
    return fa, clf
