"""Portfolio agent: isotropic Gaussian proposals around remembered winners.

Keeps a bounded portfolio of scored configurations, each tagged with one of k
internal modes. Proposals perturb a uniformly chosen entry with that mode's
decaying radius; when the portfolio overflows, a deterministic k-means pass
keeps only the best entry per cluster so no single region can dominate.
"""

from __future__ import annotations

import numpy as np

from ..param_space import ParamSpec, unit_distance, clamp_unit
from .base import (
    Agent,
    Feedback,
    Proposal,
    DEFAULT_GAMMA,
    DEFAULT_SIGMA0,
    SIGMA_MAX,
    SIGMA_MIN,
    decay_sigma,
    new_rng,
)

_CONFIG_KEYS = {"k", "gamma", "sigma0", "portfolio_max", "small_cluster_threshold"}
_KMEANS_MAX_ITER = 25


class GaussianAgent(Agent):
    name = "gaussian"

    def __init__(self, spec: ParamSpec, config=None, rng=None):
        super().__init__(spec, rng if rng is not None else new_rng(0))
        config = dict(config or {})
        unknown = set(config) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown gaussian config keys: {sorted(unknown)}")
        self.k = int(config.get("k", 5))
        if self.k < 1:
            raise ValueError("k must be >= 1")
        self.gamma = float(config.get("gamma", DEFAULT_GAMMA))
        if not (0.0 < self.gamma < 1.0):
            raise ValueError("gamma must be in (0, 1)")
        self.sigma0 = float(config.get("sigma0", DEFAULT_SIGMA0))
        self.portfolio_max = int(config.get("portfolio_max", 4 * self.k))
        self.small_cluster_threshold = int(config.get("small_cluster_threshold", 2))
        # Entries: [point ndarray, score, mode, provisional]. Provisional
        # entries are warm-up samples whose score placeholder awaits feedback.
        self.portfolio: list[list] = []
        self.sigmas: dict[int, float] = {}

    # ------------------------------------------------------------------

    def play(self) -> Proposal:
        if len(self.portfolio) < self.k:
            point = self.rng.random(self.spec.d)
            mode = len(self.sigmas)
            self.sigmas[mode] = self.sigma0
            self.portfolio.append([point, 0.0, mode, True])
        else:
            idx = int(self.rng.integers(len(self.portfolio)))
            center, _, mode, _ = self.portfolio[idx]
            sigma = self.sigmas[mode]
            point = clamp_unit(center + sigma * self.rng.standard_normal(self.spec.d))
        return Proposal(
            params=self.spec.decode(point),
            metadata={"agent": self.name, "mode": str(mode)},
        )

    def _apply_feedback(self, fb: Feedback) -> None:
        point = self.spec.encode(fb.params)
        mode, explicit = self._resolve_mode(fb.metadata, point)
        replaced = False
        if explicit:
            # the matching update for a warm-up sample overwrites its
            # provisional placeholder; manual attachments always append
            for entry in self.portfolio:
                if entry[3] and entry[2] == mode:
                    entry[0], entry[1], entry[3] = point, float(fb.score), False
                    replaced = True
                    break
        if not replaced:
            self.portfolio.append([point, float(fb.score), mode, False])
        self.sigmas[mode] = max(SIGMA_MIN, self.sigmas[mode] * self.gamma)
        if len(self.portfolio) > self.portfolio_max:
            self._reduce()

    def _resolve_mode(self, metadata: dict, point: np.ndarray) -> tuple[int, bool]:
        raw = metadata.get("mode")
        if raw is not None:
            try:
                mode = int(raw)
            except (TypeError, ValueError):
                mode = -1
            if mode in self.sigmas:
                return mode, True
        # Manual contribution (or a mode renumbered away): attach to the
        # nearest mode, measured to that mode's best entry.
        if not self.sigmas:
            self.sigmas[0] = self.sigma0
            return 0, False
        best_per_mode: dict[int, list] = {}
        for entry in self.portfolio:
            cur = best_per_mode.get(entry[2])
            if cur is None or entry[1] > cur[1]:
                best_per_mode[entry[2]] = entry
        candidates = []
        for mode in sorted(self.sigmas):
            entry = best_per_mode.get(mode)
            if entry is None:
                continue
            candidates.append((unit_distance(point, entry[0]), mode))
        if not candidates:
            return min(self.sigmas), False
        return min(candidates)[1], False

    # ------------------------------------------------------------------
    # portfolio reduction

    def _reduce(self) -> None:
        """Cluster encoded points into k groups, keep the best entry of each.

        k-means is seeded from the k best-scoring entries and capped at 25
        Lloyd iterations; all ties break toward the lowest index so replay is
        exact. Sparse clusters (<= small_cluster_threshold members) signal an
        unpromising region, so their radius is boosted by 1/gamma.
        """
        points = np.array([entry[0] for entry in self.portfolio])
        assignment, counts = _kmeans(points, self._seed_indices(), _KMEANS_MAX_ITER)
        kept: list[list] = []
        new_sigmas: dict[int, float] = {}
        for cluster in range(len(counts)):
            members = [i for i, a in enumerate(assignment) if a == cluster]
            if not members:
                continue
            best = max(members, key=lambda i: (self.portfolio[i][1], -i))
            entry = self.portfolio[best]
            sigma = self.sigmas[entry[2]]
            if counts[cluster] <= self.small_cluster_threshold:
                sigma = min(SIGMA_MAX, sigma / self.gamma)
            new_mode = len(kept)
            new_sigmas[new_mode] = sigma
            kept.append([entry[0], entry[1], new_mode, entry[3]])
        self.portfolio = kept
        self.sigmas = new_sigmas

    def _seed_indices(self) -> list[int]:
        order = sorted(
            range(len(self.portfolio)),
            key=lambda i: (-self.portfolio[i][1], i),
        )
        return order[: self.k]

    # ------------------------------------------------------------------

    def time_warp(self, steps: int) -> None:
        for mode in self.sigmas:
            self.sigmas[mode] = decay_sigma(self.sigmas[mode], self.gamma, steps)

    def _payload(self) -> dict:
        return {
            "k": self.k,
            "gamma": self.gamma,
            "sigma0": self.sigma0,
            "portfolio_max": self.portfolio_max,
            "small_cluster_threshold": self.small_cluster_threshold,
            "sigmas": {str(m): s for m, s in self.sigmas.items()},
            "portfolio": [
                {
                    "point": [float(x) for x in entry[0]],
                    "score": entry[1],
                    "mode": entry[2],
                    "provisional": entry[3],
                }
                for entry in self.portfolio
            ],
        }

    def _restore_payload(self, payload: dict) -> None:
        self.k = int(payload["k"])
        self.gamma = float(payload["gamma"])
        self.sigma0 = float(payload["sigma0"])
        self.portfolio_max = int(payload["portfolio_max"])
        self.small_cluster_threshold = int(payload["small_cluster_threshold"])
        self.sigmas = {int(m): float(s) for m, s in payload["sigmas"].items()}
        self.portfolio = [
            [
                np.array(doc["point"], dtype=float),
                float(doc["score"]),
                int(doc["mode"]),
                bool(doc["provisional"]),
            ]
            for doc in payload["portfolio"]
        ]


def _kmeans(
    points: np.ndarray, seed_indices: list[int], max_iter: int
) -> tuple[list[int], list[int]]:
    """Deterministic Lloyd iteration; returns (assignment, member counts).

    Empty clusters keep their previous centroid; equal distances assign to the
    lowest cluster index (argmin behavior).
    """
    centroids = points[seed_indices].copy()
    k = len(seed_indices)
    assignment = [-1] * len(points)
    for _ in range(max_iter):
        dists = np.linalg.norm(points[:, None, :] - centroids[None, :, :], axis=2)
        new_assignment = [int(i) for i in np.argmin(dists, axis=1)]
        if new_assignment == assignment:
            break
        assignment = new_assignment
        for cluster in range(k):
            members = points[[i for i, a in enumerate(assignment) if a == cluster]]
            if len(members):
                centroids[cluster] = members.mean(axis=0)
    counts = [assignment.count(cluster) for cluster in range(k)]
    return assignment, counts
