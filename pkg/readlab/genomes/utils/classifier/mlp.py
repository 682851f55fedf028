import logging
from dataclasses import asdict, dataclass
from typing import Any, Optional

import numpy as np
from scipy.special import expit

from readlab.utils.base import Classifier, lowest_max

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RpropSettings:
    eta_plus: float = 1.2
    eta_minus: float = 0.5
    delta_init: float = 0.1
    delta_max: float = 50.0
    delta_min: float = 1e-6
    max_epochs: int = 10000
    threshold: float = 0.01


class NeuralNetClassifier(Classifier):
    """
    64 -> hidden -> K perceptron with logistic units, trained on summed squared
    error by resilient backpropagation with weight backtracking.

    A full step that would raise the training error is rejected and every step
    size is halved instead, so loss_history never increases.
    """

    def __init__(
        self,
        hidden: int = 3,
        rprop: Optional[RpropSettings] = None,
        rng: Optional[np.random.Generator] = None,
    ):
        self.hidden = hidden
        self.rprop = rprop or RpropSettings()
        self.rng = rng
        self.w1: Optional[np.ndarray] = None  # (64 + 1, hidden), last row is bias
        self.w2: Optional[np.ndarray] = None  # (hidden + 1, K)
        self.loss_history: list[float] = []
        self.epochs = 0
        self.converged = False

    @staticmethod
    def _with_bias(x: np.ndarray) -> np.ndarray:
        return np.hstack([x, np.ones((x.shape[0], 1))])

    def _unpack(self, w: np.ndarray, n_in: int, n_out: int):
        split = (n_in + 1) * self.hidden
        return (
            w[:split].reshape(n_in + 1, self.hidden),
            w[split:].reshape(self.hidden + 1, n_out),
        )

    def _forward(self, w1, w2, x_b):
        h = expit(x_b @ w1)
        h_b = self._with_bias(h)
        return h, h_b, expit(h_b @ w2)

    def _loss_grad(self, w, x_b, targets):
        w1, w2 = self._unpack(w, x_b.shape[1] - 1, targets.shape[1])
        h, h_b, y = self._forward(w1, w2, x_b)
        err = y - targets
        loss = 0.5 * float((err**2).sum())
        d_out = err * y * (1.0 - y)
        g2 = h_b.T @ d_out
        d_hidden = (d_out @ w2[:-1].T) * h * (1.0 - h)
        g1 = x_b.T @ d_hidden
        return loss, np.concatenate([g1.ravel(), g2.ravel()])

    def fit(self, features, valid_counts, labels, n_labels) -> None:
        rng = self.rng or np.random.default_rng(0)
        n_in = features.shape[1]
        x_b = self._with_bias(features)
        targets = np.eye(n_labels)[labels]
        size = (n_in + 1) * self.hidden + (self.hidden + 1) * n_labels
        w = rng.standard_normal(size)

        s = self.rprop
        delta = np.full(size, s.delta_init)
        prev_grad = np.zeros(size)
        prev_step = np.zeros(size)
        loss, grad = self._loss_grad(w, x_b, targets)
        history = [loss]
        converged = False
        epoch = 0
        for epoch in range(1, s.max_epochs + 1):
            if np.abs(grad).max() < s.threshold:
                converged = True
                break
            sign_change = grad * prev_grad
            grow, shrink = sign_change > 0, sign_change < 0
            delta = np.where(grow, np.minimum(delta * s.eta_plus, s.delta_max), delta)
            delta = np.where(shrink, np.maximum(delta * s.eta_minus, s.delta_min), delta)
            step = -np.sign(grad) * delta
            # backtrack weights whose gradient flipped sign
            step = np.where(shrink, -prev_step, step)
            used_grad = np.where(shrink, 0.0, grad)

            new_loss, new_grad = self._loss_grad(w + step, x_b, targets)
            if new_loss > loss:
                if delta.max() <= s.delta_min:
                    history.append(loss)
                    break
                delta = np.maximum(delta * s.eta_minus, s.delta_min)
                prev_grad = np.zeros(size)
                prev_step = np.zeros(size)
            else:
                w = w + step
                loss, grad = new_loss, new_grad
                prev_grad, prev_step = used_grad, step
            history.append(loss)

        self.w1, self.w2 = self._unpack(w, n_in, n_labels)
        self.loss_history = history
        self.epochs = epoch
        self.converged = converged
        if not converged:
            logger.warning(
                "Neural net stopped after %d epochs without reaching gradient threshold %g (SSE %.4f)",
                epoch,
                s.threshold,
                loss,
            )

    def outputs(self, features: np.ndarray) -> np.ndarray:
        _, _, y = self._forward(self.w1, self.w2, self._with_bias(features))
        return y

    def decide(self, features, valid_counts) -> np.ndarray:
        return lowest_max(self.outputs(features))

    def to_params(self) -> dict[str, Any]:
        return {
            "hidden": self.hidden,
            "rprop": asdict(self.rprop),
            "w1": self.w1.tolist(),
            "w2": self.w2.tolist(),
            "epochs": self.epochs,
            "converged": self.converged,
            "final_loss": self.loss_history[-1] if self.loss_history else None,
        }

    @classmethod
    def from_params(cls, params: dict[str, Any]) -> "NeuralNetClassifier":
        model = cls(hidden=params["hidden"], rprop=RpropSettings(**params["rprop"]))
        model.w1 = np.asarray(params["w1"], dtype=np.float64)
        model.w2 = np.asarray(params["w2"], dtype=np.float64)
        model.epochs = params.get("epochs", 0)
        model.converged = params.get("converged", False)
        if params.get("final_loss") is not None:
            model.loss_history = [params["final_loss"]]
        return model
