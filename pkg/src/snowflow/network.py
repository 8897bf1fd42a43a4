"""Small fully connected tanh network: forward evaluation, exact batch
gradients, and heavy-ball momentum updates.

Everything in this module is a pure function over value types, so concurrent
use on distinct data is safe. Training loops live in
:mod:`snowflow.estimator`; this module only knows about one network and one
batch at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Network",
    "TrainingHyperparams",
    "GradientSet",
    "tanh_activation",
    "init_network",
    "forward",
    "forward_batch",
    "batch_loss",
    "batch_gradients",
    "momentum_step",
    "zero_gradients",
]


def tanh_activation(x: float) -> float:
    """Hyperbolic tangent of a finite scalar, the only activation used here."""
    return float(np.tanh(x))


@dataclass
class Network:
    """Fully connected layers with tanh applied at every non-input layer.

    ``weights[k]`` has shape ``(layer_sizes[k+1], layer_sizes[k])`` and acts
    on activations as ``W @ a + b``; ``biases[k]`` has length
    ``layer_sizes[k+1]``. All parameters must be finite.
    """

    layer_sizes: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activation: str = "tanh"

    def __post_init__(self):
        if len(self.layer_sizes) < 2:
            raise ValueError("need at least an input and an output layer")
        if any(int(s) <= 0 for s in self.layer_sizes):
            raise ValueError(f"layer sizes must be positive, got {self.layer_sizes}")
        if self.activation != "tanh":
            raise ValueError(f"unsupported activation {self.activation!r}")
        n_transitions = len(self.layer_sizes) - 1
        if len(self.weights) != n_transitions or len(self.biases) != n_transitions:
            raise ValueError("need one weight matrix and one bias vector per layer transition")
        for k, (W, b) in enumerate(zip(self.weights, self.biases)):
            expected = (self.layer_sizes[k + 1], self.layer_sizes[k])
            if W.shape != expected:
                raise ValueError(f"weight matrix {k}: shape {W.shape}, expected {expected}")
            if b.shape != (self.layer_sizes[k + 1],):
                raise ValueError(f"bias vector {k}: shape {b.shape}, expected ({self.layer_sizes[k + 1]},)")
            if not (np.isfinite(W).all() and np.isfinite(b).all()):
                raise ValueError(f"non-finite parameters in layer transition {k}")

    @property
    def n_parameters(self) -> int:
        return sum(W.size + b.size for W, b in zip(self.weights, self.biases))


@dataclass(frozen=True)
class TrainingHyperparams:
    """Knobs for the batch momentum loop.

    ``target_mse`` is an early-stop threshold on the normalized training MSE,
    not a guarantee; training also stops at ``max_epochs``.
    """

    learning_rate: float = 0.05
    momentum_coefficient: float = 0.9
    max_epochs: int = 20000
    target_mse: float = 2.72e-4
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.momentum_coefficient < 1.0:
            raise ValueError("momentum_coefficient must lie in [0, 1)")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be at least 1")
        if self.target_mse < 0:
            raise ValueError("target_mse must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class GradientSet:
    """Per-parameter partials (or momentum velocities) shaped like a Network."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]


def _check_congruent(net: Network, grads: GradientSet, name: str) -> None:
    ok = len(grads.weights) == len(net.weights) and len(grads.biases) == len(net.biases)
    if ok:
        ok = all(g.shape == W.shape for g, W in zip(grads.weights, net.weights)) and all(
            g.shape == b.shape for g, b in zip(grads.biases, net.biases)
        )
    if not ok:
        raise ValueError(f"{name} shapes do not match the network")


def init_network(layer_sizes: list[int], seed: int) -> Network:
    """Build a network with weights i.i.d. uniform on [-0.5, 0.5] and zero biases.

    The generator is seeded, and matrices are drawn in layer order, so
    identical ``(layer_sizes, seed)`` pairs yield bit-identical networks.
    """
    if len(layer_sizes) < 2:
        raise ValueError("need at least an input and an output layer")
    if any(int(s) <= 0 for s in layer_sizes):
        raise ValueError(f"layer sizes must be positive, got {layer_sizes}")
    rng = np.random.default_rng(seed)
    weights = [
        rng.uniform(-0.5, 0.5, size=(n_out, n_in))
        for n_in, n_out in zip(layer_sizes, layer_sizes[1:])
    ]
    biases = [np.zeros(n_out) for n_out in layer_sizes[1:]]
    return Network(list(layer_sizes), weights, biases)


def _activations(net: Network, X: np.ndarray) -> list[np.ndarray]:
    """All layer activations for a batch, input included, each (n, width)."""
    acts = [X]
    a = X
    for W, b in zip(net.weights, net.biases):
        a = np.tanh(a @ W.T + b)
        acts.append(a)
    return acts


def _as_batch(net: Network, rows, width: int, name: str) -> np.ndarray:
    X = np.atleast_2d(np.asarray(rows, dtype=float))
    if X.ndim != 2 or X.shape[1] != width:
        raise ValueError(f"{name} must be vectors of length {width}, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError(f"{name} contain non-finite values")
    return X


def forward(net: Network, input: np.ndarray) -> np.ndarray:
    """Evaluate the network on one input vector.

    Each layer computes ``tanh(W @ a + b)``; the returned output-layer
    activations therefore lie inside (-1, 1).
    """
    x = np.asarray(input, dtype=float)
    if x.shape != (net.layer_sizes[0],):
        raise ValueError(f"input has shape {x.shape}, expected ({net.layer_sizes[0]},)")
    if not np.isfinite(x).all():
        raise ValueError("input contains non-finite values")
    return _activations(net, x[np.newaxis, :])[-1][0]


def forward_batch(net: Network, inputs) -> np.ndarray:
    """Evaluate the network on a batch of input rows; returns (n, n_outputs)."""
    X = _as_batch(net, inputs, net.layer_sizes[0], "inputs")
    return _activations(net, X)[-1]


def batch_loss(net: Network, inputs, targets) -> float:
    """Mean over samples of the summed squared output error.

    This is the exact quantity :func:`batch_gradients` differentiates; with a
    single output node it coincides with the per-sample mean squared error.
    """
    X = _as_batch(net, inputs, net.layer_sizes[0], "inputs")
    T = _as_batch(net, targets, net.layer_sizes[-1], "targets")
    if X.shape[0] != T.shape[0]:
        raise ValueError("inputs and targets must have the same length")
    if X.shape[0] == 0:
        raise ValueError("batch is empty")
    pred = _activations(net, X)[-1]
    return float(np.mean(np.sum((pred - T) ** 2, axis=1)))


def batch_gradients(net: Network, inputs, targets) -> GradientSet:
    """Exact gradient of the batch loss with respect to every weight and bias.

    Standard backpropagation: with activations ``a_k`` and
    ``E = (1/N) * sum_n sum_j (a_L - t)^2``, the output delta is
    ``2 (a_L - t) (1 - a_L^2) / N`` and each earlier delta is
    ``(delta_{k+1} @ W_{k+1}) * (1 - a_k^2)``. Accumulated over the whole
    batch, so duplicating every sample leaves the gradient unchanged.
    """
    X = _as_batch(net, inputs, net.layer_sizes[0], "inputs")
    T = _as_batch(net, targets, net.layer_sizes[-1], "targets")
    if X.shape[0] != T.shape[0]:
        raise ValueError("inputs and targets must have the same length")
    if X.shape[0] == 0:
        raise ValueError("batch is empty")

    acts = _activations(net, X)
    n = X.shape[0]
    delta = 2.0 * (acts[-1] - T) * (1.0 - acts[-1] ** 2) / n
    grad_w: list[np.ndarray] = [np.empty(0)] * len(net.weights)
    grad_b: list[np.ndarray] = [np.empty(0)] * len(net.biases)
    for k in range(len(net.weights) - 1, -1, -1):
        grad_w[k] = delta.T @ acts[k]
        grad_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ net.weights[k]) * (1.0 - acts[k] ** 2)
    return GradientSet(grad_w, grad_b)


def zero_gradients(net: Network) -> GradientSet:
    """An all-zero GradientSet shaped like ``net``; the initial velocity."""
    return GradientSet(
        [np.zeros_like(W) for W in net.weights],
        [np.zeros_like(b) for b in net.biases],
    )


def momentum_step(
    net: Network,
    grads: GradientSet,
    velocity: GradientSet,
    hp: TrainingHyperparams,
) -> tuple[Network, GradientSet]:
    """One heavy-ball update; returns the new network and new velocity.

    ``v' = momentum_coefficient * v - learning_rate * g`` and
    ``w' = w + v'``. With momentum 0 this collapses to plain gradient
    descent. Inputs are not mutated.
    """
    _check_congruent(net, grads, "gradients")
    _check_congruent(net, velocity, "velocity")
    mu, lr = hp.momentum_coefficient, hp.learning_rate
    new_vw = [mu * v - lr * g for v, g in zip(velocity.weights, grads.weights)]
    new_vb = [mu * v - lr * g for v, g in zip(velocity.biases, grads.biases)]
    new_net = Network(
        list(net.layer_sizes),
        [W + v for W, v in zip(net.weights, new_vw)],
        [b + v for b, v in zip(net.biases, new_vb)],
        net.activation,
    )
    return new_net, GradientSet(new_vw, new_vb)
