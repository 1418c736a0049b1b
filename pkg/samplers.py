# -*- coding: utf-8 -*-
"""
Moment-matched samplers for the complexity estimation error.
Every sampler draws values with exactly the requested mean and standard
deviation; the validation harness picks them by name from SAMPLERS.
"""
import math
from typing import Callable, Dict, List

import numpy as np

from errors import PresetError

Sampler = Callable[..., np.ndarray]


class SamplerRegistry:
    """Named sampler functions with their default keyword parameters."""

    def __init__(self):
        self.samplers: Dict[str, Dict] = {}

    def register(self, name: str, func: Sampler, params: Dict = None):
        self.samplers[name] = {"function": func, "params": params or {}}

    def names(self) -> List[str]:
        return sorted(self.samplers)

    def get(self, name: str) -> Sampler:
        if name not in self.samplers:
            raise PresetError(f"unknown sampler '{name}', choose one of {', '.join(self.names())}")
        entry = self.samplers[name]

        def draw(rng: np.random.Generator, mu, sigma, size):
            return entry["function"](rng, mu, sigma, size, **entry["params"])

        return draw

    def sample(self, name: str, rng: np.random.Generator, mu, sigma, size) -> np.ndarray:
        return self.get(name)(rng, mu, sigma, size)


# Predefined samplers
def sample_gaussian(rng: np.random.Generator, mu, sigma, size) -> np.ndarray:
    """Normal with the given moments."""
    return rng.normal(mu, sigma, size)


def sample_uniform(rng: np.random.Generator, mu, sigma, size) -> np.ndarray:
    """Uniform on mu +- sqrt(3) sigma."""
    half = math.sqrt(3.0) * np.asarray(sigma, dtype=float)
    return rng.uniform(mu - half, mu + half, size)


def sample_two_point(rng: np.random.Generator, mu, sigma, size, p_upper: float = 0.5) -> np.ndarray:
    """Upper atom mu + sigma sqrt((1-p)/p) with mass p, lower atom
    mu - sigma sqrt(p/(1-p)) with mass 1-p."""
    if not 0.0 < p_upper < 1.0:
        raise PresetError("p_upper must lie in (0, 1)")
    upper = mu + sigma * math.sqrt((1.0 - p_upper) / p_upper)
    lower = mu - sigma * math.sqrt(p_upper / (1.0 - p_upper))
    return np.where(rng.random(size) < p_upper, upper, lower)


SAMPLERS = SamplerRegistry()
SAMPLERS.register("gaussian", sample_gaussian)
SAMPLERS.register("uniform", sample_uniform)
SAMPLERS.register("two_point", sample_two_point)
# extremal two-point law of the 95% worst case
SAMPLERS.register("two_point_tail", sample_two_point, {"p_upper": 0.05})
