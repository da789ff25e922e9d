"""Open-ended explorer: one reserved uniform population plus a growing set of
discovered regions, with repulsive points blacklisting dead areas.

Population index 0 never stores anything; it is the uniform-exploration
branch. Every positive score fed back through index 0 spawns a fresh
population around that configuration. Zero scores are explicit negative
signals: they only grow the repulsive set.
"""

from __future__ import annotations

import math

import numpy as np

from ..param_space import ParamSpec, clamp_unit
from .base import (
    Agent,
    Feedback,
    Proposal,
    DEFAULT_GAMMA,
    DEFAULT_SIGMA0,
    SIGMA_MIN,
    decay_sigma,
    new_rng,
)

_CONFIG_KEYS = {"gamma", "sigma0", "H_max", "r_rep", "max_attempts", "repulsive_cap"}


class OpenEndedAgent(Agent):
    name = "open_ended"

    def __init__(self, spec: ParamSpec, config=None, rng=None):
        super().__init__(spec, rng if rng is not None else new_rng(0))
        config = dict(config or {})
        unknown = set(config) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown open_ended config keys: {sorted(unknown)}")
        self.gamma = float(config.get("gamma", DEFAULT_GAMMA))
        if not (0.0 < self.gamma < 1.0):
            raise ValueError("gamma must be in (0, 1)")
        self.sigma0 = float(config.get("sigma0", DEFAULT_SIGMA0))
        self.h_max = int(config.get("H_max", 8))
        if self.h_max < 1:
            raise ValueError("H_max must be >= 1")
        self.r_rep = float(config.get("r_rep", 0.08))
        self.max_attempts = max(1, int(config.get("max_attempts", 64)))
        self.repulsive_cap = int(config.get("repulsive_cap", 512))
        # id -> {"history": [[point, score], ...], "sigma": float}; id 0 is
        # reserved for the uniform branch and never appears here.
        self.populations: dict[int, dict] = {}
        self.repulsive: list[np.ndarray] = []

    # ------------------------------------------------------------------

    def play(self) -> Proposal:
        ids = [0] + sorted(self.populations)
        index = ids[int(self.rng.integers(len(ids)))]
        if index == 0:
            point = self._sample_repelled()
        else:
            pop = self.populations[index]
            entry = pop["history"][int(self.rng.integers(len(pop["history"])))]
            point = clamp_unit(
                entry[0] + pop["sigma"] * self.rng.standard_normal(self.spec.d)
            )
        return Proposal(
            params=self.spec.decode(point),
            metadata={"agent": self.name, "population": str(index)},
        )

    def _sample_repelled(self) -> np.ndarray:
        """Uniform draw at normalized distance >= r_rep from every repulsive
        point; falls back to the farthest of max_attempts rejected draws."""
        if not self.repulsive:
            return self.rng.random(self.spec.d)
        rep = np.array(self.repulsive)
        root_d = math.sqrt(self.spec.d)
        best_point, best_dist = None, -1.0
        for _ in range(self.max_attempts):
            point = self.rng.random(self.spec.d)
            nearest = float(np.min(np.linalg.norm(rep - point, axis=1))) / root_d
            if nearest >= self.r_rep:
                return point
            if nearest > best_dist:
                best_point, best_dist = point, nearest
        return best_point

    # ------------------------------------------------------------------

    def _apply_feedback(self, fb: Feedback) -> None:
        point = self.spec.encode(fb.params)
        index = self._resolve_index(fb.metadata)
        if fb.score == 0:
            self.repulsive.append(point)
            if len(self.repulsive) > self.repulsive_cap:
                self.repulsive = self.repulsive[-self.repulsive_cap :]
            return
        if index == 0:
            new_id = max(self.populations, default=0) + 1
            self.populations[new_id] = {
                "history": [[point, float(fb.score)]],
                "sigma": self.sigma0,
            }
            return
        pop = self.populations[index]
        pop["history"].append([point, float(fb.score)])
        pop["sigma"] = max(SIGMA_MIN, pop["sigma"] * self.gamma)
        if len(pop["history"]) > self.h_max:
            pop["history"] = _subsample(pop["history"], self.h_max)

    def _resolve_index(self, metadata: dict) -> int:
        """Missing or unknown population indices count as manual discoveries
        and route through the uniform branch."""
        raw = metadata.get("population")
        try:
            index = int(raw)
        except (TypeError, ValueError):
            return 0
        return index if index in self.populations else 0

    # ------------------------------------------------------------------

    def time_warp(self, steps: int) -> None:
        for pop in self.populations.values():
            pop["sigma"] = decay_sigma(pop["sigma"], self.gamma, steps)

    def _payload(self) -> dict:
        return {
            "gamma": self.gamma,
            "sigma0": self.sigma0,
            "H_max": self.h_max,
            "r_rep": self.r_rep,
            "max_attempts": self.max_attempts,
            "repulsive_cap": self.repulsive_cap,
            "populations": {
                str(i): {
                    "history": [
                        {"point": [float(x) for x in p], "score": s}
                        for p, s in pop["history"]
                    ],
                    "sigma": pop["sigma"],
                }
                for i, pop in self.populations.items()
            },
            "repulsive": [[float(x) for x in p] for p in self.repulsive],
        }

    def _restore_payload(self, payload: dict) -> None:
        self.gamma = float(payload["gamma"])
        self.sigma0 = float(payload["sigma0"])
        self.h_max = int(payload["H_max"])
        self.r_rep = float(payload["r_rep"])
        self.max_attempts = int(payload["max_attempts"])
        self.repulsive_cap = int(payload["repulsive_cap"])
        self.populations = {
            int(i): {
                "history": [
                    [np.array(doc["point"], dtype=float), float(doc["score"])]
                    for doc in pop["history"]
                ],
                "sigma": float(pop["sigma"]),
            }
            for i, pop in payload["populations"].items()
        }
        self.repulsive = [np.array(p, dtype=float) for p in payload["repulsive"]]


def _subsample(history: list, h_max: int) -> list:
    """Shrink an overlong history to h_max entries.

    Keeps the ceil(h_max/2) best-scoring entries (older first among ties),
    then refills with the most recent remaining entries; original order is
    preserved so recency stays meaningful.
    """
    best_count = math.ceil(h_max / 2)
    by_score = sorted(range(len(history)), key=lambda i: (-history[i][1], i))
    keep = set(by_score[:best_count])
    for i in range(len(history) - 1, -1, -1):
        if len(keep) >= h_max:
            break
        keep.add(i)
    return [history[i] for i in sorted(keep)]
