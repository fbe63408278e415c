"""Average sample pressure for subshifts with single-coordinate
potentials, at cylinder-cover resolution, plus the classical pressure
baseline (log spectral radius of the weighted transfer matrix).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._masks import popcounts, product_table
from .coeffs import CoefficientSystem
from .errors import CapExceeded
from .sft import Sft, SubsetSpec, _as_subset
from .topo import DEFAULT_N_CAP

__all__ = ["Potential", "weighted_count", "asp_profile", "classical_pressure"]


@dataclass(frozen=True)
class Potential:
    """Real value per symbol of the original alphabet (nats)."""

    values: tuple[tuple[int, float], ...]

    @classmethod
    def from_dict(cls, d: dict) -> "Potential":
        """Input schema: {"values": {"0": 0.0, "1": 1.0, ...}}."""
        table = d["values"]
        return cls(tuple(sorted((int(k), float(v)) for k, v in table.items())))

    @classmethod
    def from_values(cls, values: dict[int, float]) -> "Potential":
        return cls(tuple(sorted((int(k), float(v)) for k, v in values.items())))

    def as_dict(self) -> dict[int, float]:
        return dict(self.values)

    def weight_vector(self, sft: Sft) -> np.ndarray:
        """exp(f) per vertex, reading each vertex's symbol label; raises
        if some symbol of the shift has no assigned value."""
        table = self.as_dict()
        missing = [s for s in sft.symbol_labels if s not in table]
        if missing:
            raise ValueError(f"potential does not cover symbols {sorted(set(missing))}")
        return np.exp(np.array([table[s] for s in sft.symbol_labels], dtype=float))


def weighted_count(sft: Sft, f: Potential, S, n: int | None = None) -> float:
    """Sum over the distinct patterns at the places of S of
    exp(sum of f over the pattern's symbols).  With f identically 0 this
    is exactly the pattern count; the empty set sums the single empty
    pattern, i.e. 1."""
    spec = _as_subset(S, n)
    if spec.mask == 0:
        return 1.0
    w = f.weight_vector(sft)
    v = w.copy()
    for g in reversed(spec.gaps):
        v = (sft.reach(g) * w[:, None]) @ v
    return float(v.sum())


def asp_profile(
    sft: Sft,
    f: Potential,
    coeffs: CoefficientSystem,
    n: int,
    n_cap: int = DEFAULT_N_CAP,
) -> float:
    """Average over all 2^n subsets of the log weighted pattern count,
    divided by n.  With f identically 0 this equals the asc column of
    finite_profile bit for bit."""
    if n < 1 or n > n_cap:
        raise CapExceeded(f"n={n} outside [1, {n_cap}]")
    w = f.weight_vector(sft)
    if n <= 22:
        table = product_table(n, w, lambda g: sft.reach(g) * w[:, None])
        logs = np.log(table)
        c = np.asarray(coeffs.weights_row(n))[popcounts(n)]
        return float(c @ logs) / n
    weights = coeffs.weights_row(n)
    total = 0.0
    for m in range(1, 1 << n):
        spec = SubsetSpec(n, m)
        total += weights[spec.size] * math.log(weighted_count(sft, f, spec.canonical()))
    return total / n


def classical_pressure(sft: Sft, f: Potential, tol: float = 1e-12, max_iter: int = 20000) -> float:
    """log spectral radius of adjacency * diag(exp f), by power iteration;
    the comparison baseline that the subset averages sit below."""
    w = f.weight_vector(sft)
    A = sft.adjacency.astype(float) * w[None, :]
    r = A.shape[0]
    v = np.full(r, 1.0 / r)
    lam = 0.0
    for _ in range(max_iter):
        u = A @ v
        s = u.sum()
        if s == 0:
            raise ValueError("weighted matrix drives every vector to zero")
        u /= s
        if abs(s - lam) <= tol * max(1.0, s) and np.max(np.abs(A @ u - s * u)) <= tol * max(1.0, s):
            return math.log(s)
        lam = s
        v = u
    warnings.warn(
        "pressure power iteration did not converge; returning last estimate",
        RuntimeWarning,
    )
    return math.log(lam)
