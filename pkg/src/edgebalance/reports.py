"""Result records shared by the optimizers, spectral heuristics, and CLI."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class BoundReport:
    """Approximation-ratio certificates computed from one run.

    Three progressively tighter lower bounds on the greedy guarantee
    exponent: I uses the optimal balance (when an oracle supplied it), II
    the algorithm's own final balance, III additionally a marginal-gain sum
    ``psi``. Each comes with the implied ``1 - exp(-gamma)`` factor.
    """

    budget: int
    delta_alg: int
    delta_opt: int | None = None
    psi: int | None = None
    gamma_i: float | None = None
    gamma_ii: float = 1.0
    gamma_iii: float | None = None

    def approx_i(self) -> float | None:
        return None if self.gamma_i is None else 1.0 - math.exp(-self.gamma_i)

    def approx_ii(self) -> float:
        return 1.0 - math.exp(-self.gamma_ii)

    def approx_iii(self) -> float | None:
        return None if self.gamma_iii is None else 1.0 - math.exp(-self.gamma_iii)

    def to_dict(self) -> dict:
        return {
            "budget": self.budget,
            "delta_alg": self.delta_alg,
            "delta_opt": self.delta_opt,
            "psi": self.psi,
            "gamma_i": self.gamma_i,
            "gamma_ii": self.gamma_ii,
            "gamma_iii": self.gamma_iii,
            "approx_i": self.approx_i(),
            "approx_ii": self.approx_ii(),
            "approx_iii": self.approx_iii(),
        }


@dataclass
class DeletedEdge:
    edge_id: int
    u: int
    v: int
    sign: int

    def to_dict(self) -> dict:
        return {"edge_id": self.edge_id, "u": self.u, "v": self.v, "sign": self.sign}


@dataclass
class SolutionReport:
    """Ordered deletions plus the per-step trajectory of one optimizer run."""

    algorithm: str
    budget: int
    seed: int | None = None
    deleted: list[DeletedEdge] = field(default_factory=list)
    delta_initial: int = 0
    delta_trajectory: list[int] = field(default_factory=list)
    gains: list[int] = field(default_factory=list)
    lambda_trajectory: list[float] | None = None
    zero_gain_steps: list[int] = field(default_factory=list)
    stopped_early: bool = False
    elapsed_seconds: float = 0.0
    bound: BoundReport | None = None

    @property
    def delta_final(self) -> int:
        return self.delta_trajectory[-1] if self.delta_trajectory else self.delta_initial

    def deleted_edge_ids(self) -> list[int]:
        return [d.edge_id for d in self.deleted]

    def deleted_edge_lines(self) -> str:
        """Deleted edges as reloadable edge-list lines, in deletion order."""
        return "".join(
            f"{d.u} {d.v} {'+1' if d.sign > 0 else '-1'}\n" for d in self.deleted
        )

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "algorithm": self.algorithm,
            "budget": self.budget,
            "seed": self.seed,
            "deleted": [d.to_dict() for d in self.deleted],
            "delta_initial": self.delta_initial,
            "delta_trajectory": list(self.delta_trajectory),
            "delta_final": self.delta_final,
            "gains": list(self.gains),
            "lambda_trajectory": self.lambda_trajectory,
            "zero_gain_steps": list(self.zero_gain_steps),
            "stopped_early": self.stopped_early,
            "bound": self.bound.to_dict() if self.bound is not None else None,
        }
        if timing:
            out["elapsed_seconds"] = self.elapsed_seconds
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), sort_keys=True, indent=2)
