"""From-scratch transformer encoder for word-level label prediction.

A desk-size BERT-family encoder: learned positional embeddings,
post-layer-norm self-attention blocks, GELU feed-forward, and a 3-way
classification head on every position.  Forward and backward passes are
hand-written NumPy so analytic gradients can be verified against finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_CLASSES = 3

_GELU_K0 = float(np.sqrt(2.0 / np.pi))
_GELU_K1 = 0.044715
_NEG_INF = -1e30


@dataclass(frozen=True)
class TransformerConfig:
    vocab_size: int
    d_model: int = 128
    n_heads: int = 4
    n_layers: int = 4
    d_ff: int = 512
    max_positions: int = 256
    dropout: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.d_model % self.n_heads != 0:
            raise ValueError(f"d_model {self.d_model} not divisible by n_heads {self.n_heads}")

    def to_json(self) -> dict:
        return {
            "vocab_size": self.vocab_size,
            "d_model": self.d_model,
            "n_heads": self.n_heads,
            "n_layers": self.n_layers,
            "d_ff": self.d_ff,
            "max_positions": self.max_positions,
            "dropout": self.dropout,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, raw: dict) -> "TransformerConfig":
        return cls(**raw)


def _linear_forward(x, w, b):
    return x @ w + b


def _linear_backward(dy, x, w):
    dw = np.einsum("bti,bto->io", x, dy)
    db = dy.sum(axis=(0, 1))
    dx = dy @ w.T
    return dx, dw, db


def _layer_norm_forward(x, g, b, eps=1e-5):
    mu = x.mean(axis=-1, keepdims=True)
    xc = x - mu
    var = (xc**2).mean(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat = xc * inv
    return g * xhat + b, (xhat, inv, g)


def _layer_norm_backward(dy, cache):
    xhat, inv, g = cache
    dg = (dy * xhat).sum(axis=(0, 1))
    db = dy.sum(axis=(0, 1))
    dxhat = dy * g
    dx = inv * (
        dxhat
        - dxhat.mean(axis=-1, keepdims=True)
        - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True)
    )
    return dx, dg, db


def _gelu_forward(x):
    u = _GELU_K0 * (x + _GELU_K1 * x**3)
    t = np.tanh(u)
    return 0.5 * x * (1.0 + t), (x, t)


def _gelu_backward(dy, cache):
    x, t = cache
    du = _GELU_K0 * (1.0 + 3.0 * _GELU_K1 * x**2)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t**2) * du)


def _softmax(x):
    z = x - x.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _split_heads(x, n_heads):
    batch, length, dim = x.shape
    return x.reshape(batch, length, n_heads, dim // n_heads).transpose(0, 2, 1, 3)


def _merge_heads(x):
    batch, heads, length, dh = x.shape
    return x.transpose(0, 2, 1, 3).reshape(batch, length, heads * dh)


class _Dropout:
    """Inverted dropout driven by one generator; identity when p == 0."""

    def __init__(self, p: float, rng: np.random.Generator | None):
        self.p = p if rng is not None else 0.0
        self.rng = rng

    def forward(self, x):
        if self.p <= 0.0:
            return x, None
        keep = self.rng.random(x.shape) >= self.p
        scale = 1.0 / (1.0 - self.p)
        mask = keep * scale
        return x * mask, mask

    @staticmethod
    def backward(dy, mask):
        return dy if mask is None else dy * mask


class TransformerModel:
    """Parameter container plus forward/backward passes."""

    def __init__(self, config: TransformerConfig, params: dict[str, np.ndarray] | None = None):
        self.config = config
        self.params = params if params is not None else self._init_params()

    def _init_params(self) -> dict[str, np.ndarray]:
        cfg = self.config
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        scale = 0.02

        def normal(*shape):
            return rng.normal(0.0, scale, size=shape)

        params: dict[str, np.ndarray] = {
            "tok_emb": normal(cfg.vocab_size, cfg.d_model),
            "pos_emb": normal(cfg.max_positions, cfg.d_model),
            "emb_ln_g": np.ones(cfg.d_model),
            "emb_ln_b": np.zeros(cfg.d_model),
            "head_w": normal(cfg.d_model, N_CLASSES),
            "head_b": np.zeros(N_CLASSES),
        }
        for i in range(cfg.n_layers):
            pre = f"layers.{i}."
            for name in ("wq", "wk", "wv", "wo"):
                params[pre + name] = normal(cfg.d_model, cfg.d_model)
            for name in ("bq", "bk", "bv", "bo"):
                params[pre + name] = np.zeros(cfg.d_model)
            params[pre + "ffn_w1"] = normal(cfg.d_model, cfg.d_ff)
            params[pre + "ffn_b1"] = np.zeros(cfg.d_ff)
            params[pre + "ffn_w2"] = normal(cfg.d_ff, cfg.d_model)
            params[pre + "ffn_b2"] = np.zeros(cfg.d_model)
            params[pre + "ln1_g"] = np.ones(cfg.d_model)
            params[pre + "ln1_b"] = np.zeros(cfg.d_model)
            params[pre + "ln2_g"] = np.ones(cfg.d_model)
            params[pre + "ln2_b"] = np.zeros(cfg.d_model)
        return params

    def forward(
        self,
        ids: np.ndarray,
        valid: np.ndarray,
        dropout_rng: np.random.Generator | None = None,
    ) -> tuple[np.ndarray, dict]:
        """Logits (B, T, 3) for a padded id batch; ``valid`` marks real tokens.

        Pass ``dropout_rng`` only during training; inference is dropout-free.
        """
        cfg = self.config
        p = self.params
        batch, length = ids.shape
        if length > cfg.max_positions:
            raise ValueError(f"sequence length {length} exceeds max_positions {cfg.max_positions}")
        drop = _Dropout(cfg.dropout, dropout_rng)

        cache: dict = {"ids": ids, "valid": valid, "layers": []}
        x = p["tok_emb"][ids] + p["pos_emb"][:length][None, :, :]
        x, cache["emb_ln"] = _layer_norm_forward(x, p["emb_ln_g"], p["emb_ln_b"])
        x, cache["emb_drop"] = drop.forward(x)

        # additive attention bias: valid keys contribute, padded keys never do
        bias = np.where(valid[:, None, None, :], 0.0, _NEG_INF)

        for i in range(cfg.n_layers):
            pre = f"layers.{i}."
            lc: dict = {"x_in": x}
            q = _linear_forward(x, p[pre + "wq"], p[pre + "bq"])
            k = _linear_forward(x, p[pre + "wk"], p[pre + "bk"])
            v = _linear_forward(x, p[pre + "wv"], p[pre + "bv"])
            qh, kh, vh = (_split_heads(t, cfg.n_heads) for t in (q, k, v))
            dh = cfg.d_model // cfg.n_heads
            scores = qh @ kh.transpose(0, 1, 3, 2) / np.sqrt(dh) + bias
            probs = _softmax(scores)
            probs_d, lc["attn_drop"] = drop.forward(probs)
            ctx = probs_d @ vh
            merged = _merge_heads(ctx)
            attn_out = _linear_forward(merged, p[pre + "wo"], p[pre + "bo"])
            attn_out, lc["attn_out_drop"] = drop.forward(attn_out)
            lc.update(qh=qh, kh=kh, vh=vh, probs=probs, probs_d=probs_d, merged=merged)

            x1, lc["ln1"] = _layer_norm_forward(x + attn_out, p[pre + "ln1_g"], p[pre + "ln1_b"])
            lc["x1"] = x1
            ff_pre = _linear_forward(x1, p[pre + "ffn_w1"], p[pre + "ffn_b1"])
            ff_act, lc["gelu"] = _gelu_forward(ff_pre)
            lc["ff_act"] = ff_act
            ff_out = _linear_forward(ff_act, p[pre + "ffn_w2"], p[pre + "ffn_b2"])
            ff_out, lc["ffn_drop"] = drop.forward(ff_out)
            x, lc["ln2"] = _layer_norm_forward(x1 + ff_out, p[pre + "ln2_g"], p[pre + "ln2_b"])
            cache["layers"].append(lc)

        cache["h_final"] = x
        logits = _linear_forward(x, p["head_w"], p["head_b"])
        return logits, cache

    def loss_and_grads(
        self,
        ids: np.ndarray,
        valid: np.ndarray,
        loss_mask: np.ndarray,
        labels: np.ndarray,
        dropout_rng: np.random.Generator | None = None,
        weights: np.ndarray | None = None,
    ) -> tuple[float, dict[str, np.ndarray]]:
        """Weighted mean cross-entropy over loss-masked positions, with grads.

        ``loss_mask`` selects the positions that contribute (current-sentence
        words); context, separator, and padding positions are excluded.
        Optional per-position ``weights`` rescale each term (class weighting).
        """
        cfg = self.config
        p = self.params
        logits, cache = self.forward(ids, valid, dropout_rng)
        probs = _softmax(logits)

        w = loss_mask.astype(np.float64)
        if weights is not None:
            w = w * weights
        total_w = float(w.sum())
        if total_w <= 0.0:
            raise ValueError("loss mask selects no positions")
        safe_labels = np.where(loss_mask, labels, 0)
        picked = np.take_along_axis(probs, safe_labels[:, :, None], axis=2)[:, :, 0]
        loss = float(-(np.log(np.maximum(picked, 1e-300)) * w).sum() / total_w)

        dlogits = probs.copy()
        np.put_along_axis(
            dlogits,
            safe_labels[:, :, None],
            np.take_along_axis(dlogits, safe_labels[:, :, None], axis=2) - 1.0,
            axis=2,
        )
        dlogits *= w[:, :, None] / total_w

        grads = {key: np.zeros_like(val) for key, val in p.items()}
        dx, grads["head_w"], grads["head_b"] = _linear_backward(
            dlogits, cache["h_final"], p["head_w"]
        )

        for i in range(cfg.n_layers - 1, -1, -1):
            pre = f"layers.{i}."
            lc = cache["layers"][i]
            dh_dim = cfg.d_model // cfg.n_heads

            dres2, grads[pre + "ln2_g"], grads[pre + "ln2_b"] = _layer_norm_backward(dx, lc["ln2"])
            dff_out = _Dropout.backward(dres2, lc["ffn_drop"])
            dff_act, grads[pre + "ffn_w2"], grads[pre + "ffn_b2"] = _linear_backward(
                dff_out, lc["ff_act"], p[pre + "ffn_w2"]
            )
            dff_pre = _gelu_backward(dff_act, lc["gelu"])
            dx1, grads[pre + "ffn_w1"], grads[pre + "ffn_b1"] = _linear_backward(
                dff_pre, lc["x1"], p[pre + "ffn_w1"]
            )
            dx1 = dx1 + dres2

            dres1, grads[pre + "ln1_g"], grads[pre + "ln1_b"] = _layer_norm_backward(dx1, lc["ln1"])
            dattn_out = _Dropout.backward(dres1, lc["attn_out_drop"])
            dmerged, grads[pre + "wo"], grads[pre + "bo"] = _linear_backward(
                dattn_out, lc["merged"], p[pre + "wo"]
            )
            dctx = _split_heads(dmerged, cfg.n_heads)
            dprobs_d = dctx @ lc["vh"].transpose(0, 1, 3, 2)
            dvh = lc["probs_d"].transpose(0, 1, 3, 2) @ dctx
            dprobs = _Dropout.backward(dprobs_d, lc["attn_drop"])
            dscores = lc["probs"] * (
                dprobs - (dprobs * lc["probs"]).sum(axis=-1, keepdims=True)
            )
            dqh = dscores @ lc["kh"] / np.sqrt(dh_dim)
            dkh = dscores.transpose(0, 1, 3, 2) @ lc["qh"] / np.sqrt(dh_dim)
            dq, dk, dv = (_merge_heads(t) for t in (dqh, dkh, dvh))

            x_in = lc["x_in"]
            dxq, grads[pre + "wq"], grads[pre + "bq"] = _linear_backward(dq, x_in, p[pre + "wq"])
            dxk, grads[pre + "wk"], grads[pre + "bk"] = _linear_backward(dk, x_in, p[pre + "wk"])
            dxv, grads[pre + "wv"], grads[pre + "bv"] = _linear_backward(dv, x_in, p[pre + "wv"])
            dx = dres1 + dxq + dxk + dxv

        dx = _Dropout.backward(dx, cache["emb_drop"])
        dx, grads["emb_ln_g"], grads["emb_ln_b"] = _layer_norm_backward(dx, cache["emb_ln"])
        np.add.at(grads["tok_emb"], cache["ids"], dx)
        grads["pos_emb"][: ids.shape[1]] += dx.sum(axis=0)
        return loss, grads

    def predict_logits(self, ids: np.ndarray, valid: np.ndarray) -> np.ndarray:
        logits, _ = self.forward(ids, valid, dropout_rng=None)
        return logits
