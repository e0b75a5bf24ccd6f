from typing import Callable, List, Tuple

import numpy as np

from app.api.schemas.solver import BbsConfig, SpsaSettings
from app.core.logging_config import setup_logging

logger = setup_logging()


class SpsaOptimizer:
    """
    Simultaneous perturbation stochastic approximation with the usual gain sequences
    a_k = a / (k + 1 + A)^alpha and c_k = c / (k + 1)^gamma.

    Reference: https://www.jhuapl.edu/spsa/PDF-SPSA/Spall_Implementation_of_the_Simultaneous.PDF
    """

    def __init__(self, a: float, c: float, alpha: float = 0.602, gamma: float = 0.101, stability: float = 0.0):
        self.a = a
        self.c = c
        self.alpha = alpha
        self.gamma = gamma
        self.stability = stability

    @classmethod
    def from_settings(cls, spsa: SpsaSettings, stability: float) -> "SpsaOptimizer":
        return cls(a=spsa.a, c=spsa.c, alpha=spsa.alpha, gamma=spsa.gamma, stability=stability)

    @classmethod
    def for_config(cls, config: BbsConfig) -> "SpsaOptimizer":
        return cls.from_settings(config.spsa, config.stability_offset())

    def gains(self, k: int) -> Tuple[float, float]:
        a_k = self.a / (k + 1 + self.stability) ** self.alpha
        c_k = self.c / (k + 1) ** self.gamma
        return a_k, c_k

    @staticmethod
    def perturbation(rng: np.random.Generator, dim: int) -> np.ndarray:
        """Rademacher direction, every entry +1 or -1."""
        return 2.0 * rng.integers(0, 2, size=dim) - 1.0

    @staticmethod
    def gradient(cost_plus: float, cost_minus: float, delta: np.ndarray, c_k: float) -> np.ndarray:
        return (cost_plus - cost_minus) / (2.0 * c_k) / delta

    def calibrate(self, gradient_magnitude: float, target_step: float) -> float:
        """
        Rescale `a` so the first update moves each parameter by about `target_step`,
        given the mean absolute gradient estimate measured at the starting point.
        A flat start (zero or non-finite magnitude) keeps the configured `a`.
        """
        if not np.isfinite(gradient_magnitude) or gradient_magnitude <= 0:
            logger.warning(f"SPSA calibration saw no gradient signal, keeping a={self.a}")
            return self.a
        self.a = target_step * (1 + self.stability) ** self.alpha / gradient_magnitude
        return self.a

    def step(self, params: np.ndarray, grad_estimate: np.ndarray, k: int) -> np.ndarray:
        a_k, _ = self.gains(k)
        return params - a_k * grad_estimate

    def minimize(
        self,
        fun: Callable[[np.ndarray], float],
        x0: np.ndarray,
        iterations: int,
        rng: np.random.Generator,
    ) -> Tuple[np.ndarray, List[float]]:
        """Plain SPSA on a deterministic objective; returns the last iterate and f per step."""
        x = np.asarray(x0, dtype=float).copy()
        history = [float(fun(x))]
        for k in range(iterations):
            _, c_k = self.gains(k)
            delta = self.perturbation(rng, x.size)
            grad = self.gradient(fun(x + c_k * delta), fun(x - c_k * delta), delta, c_k)
            x = self.step(x, grad, k)
            history.append(float(fun(x)))
        logger.debug(f"SPSA finished after {iterations} iterations: f={history[-1]:.6g}")
        return x, history


def spsa_step(params: np.ndarray, grad_estimate: np.ndarray, k: int, optimizer: SpsaOptimizer) -> np.ndarray:
    return optimizer.step(params, grad_estimate, k)
