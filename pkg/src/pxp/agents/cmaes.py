"""Multi-population CMA-ES with mean-collision niching.

Each niche adapts a full search distribution (mean, step-size, covariance)
from ranked feedback. The per-call play/update interface is reconciled with
the generation-based math by buffering lambda scored samples per niche and
applying one standard update when the buffer fills. After a generation, any
pair of niche means closer than d_niche triggers a restart of the
higher-indexed niche, which keeps the sub-populations spread out.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..param_space import ParamSpec, clamp_unit, unit_distance
from .base import (
    Agent,
    Feedback,
    Proposal,
    DEFAULT_GAMMA,
    SIGMA_MIN,
    decay_sigma,
    new_rng,
)

logger = logging.getLogger(__name__)

_CONFIG_KEYS = {"n", "lambda", "d_niche", "sigma0", "gamma", "seed"}

SIGMA0_CMA = 0.3
SIGMA_MAX_CMA = 0.6
EIG_FLOOR = 1e-10


def _safe_eigh(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigendecompose a covariance matrix, falling back to identity once.

    Returns (eigenvalues, basis, matrix actually decomposed)."""
    for attempt in (0, 1):
        try:
            if not np.all(np.isfinite(cov)):
                raise np.linalg.LinAlgError("non-finite covariance")
            eigvals, basis = np.linalg.eigh(cov)
            return eigvals, basis, cov
        except np.linalg.LinAlgError:
            if attempt == 1:
                raise RuntimeError("covariance eigendecomposition failed twice")
            logger.warning("covariance decomposition failed; resetting to identity")
            cov = np.eye(len(cov))
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Strategy:
    """Static CMA-ES constants derived from dimension and population size.

    Weights follow w_i ~ ln(mu + 1/2) - ln(i), normalized to sum to one; the
    learning rates are the canonical defaults of cumulative step-size and
    rank-one/rank-mu covariance adaptation.
    """

    d: int
    lam: int
    mu: int
    weights: tuple[float, ...]
    mu_eff: float
    c_sigma: float
    d_sigma: float
    c_c: float
    c_1: float
    c_mu: float
    chi_d: float

    @classmethod
    def for_dimension(cls, d: int, lam: int | None = None) -> "Strategy":
        if lam is None:
            lam = 4 + int(math.floor(3 * math.log(d)))
        if lam < 2:
            raise ValueError("lambda must be >= 2")
        mu = lam // 2
        raw = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
        weights = raw / raw.sum()
        mu_eff = float(weights.sum() ** 2 / (weights**2).sum())
        c_sigma = (mu_eff + 2) / (d + mu_eff + 5)
        d_sigma = 1 + 2 * max(0.0, math.sqrt((mu_eff - 1) / (d + 1)) - 1) + c_sigma
        c_c = (4 + mu_eff / d) / (d + 4 + 2 * mu_eff / d)
        c_1 = 2 / ((d + 1.3) ** 2 + mu_eff)
        c_mu = min(1 - c_1, 2 * (mu_eff - 2 + 1 / mu_eff) / ((d + 2) ** 2 + mu_eff))
        chi_d = math.sqrt(d) * (1 - 1 / (4 * d) + 1 / (21 * d * d))
        return cls(
            d=d,
            lam=lam,
            mu=mu,
            weights=tuple(float(w) for w in weights),
            mu_eff=mu_eff,
            c_sigma=float(c_sigma),
            d_sigma=float(d_sigma),
            c_c=float(c_c),
            c_1=float(c_1),
            c_mu=float(c_mu),
            chi_d=chi_d,
        )


class _Niche:
    """One CMA-ES sub-population: distribution state plus a sample buffer."""

    def __init__(self, d: int, mean: np.ndarray, sigma: float):
        self.mean = np.asarray(mean, dtype=float)
        self.sigma = float(sigma)
        self.cov = np.eye(d)
        self.p_sigma = np.zeros(d)
        self.p_c = np.zeros(d)
        self.buffer: list[tuple[np.ndarray, np.ndarray, float]] = []  # (z, x_enc, score)
        self.generation = 0
        self._basis = np.eye(d)  # B
        self._scales = np.ones(d)  # D = sqrt(eigenvalues)

    def set_cov(self, cov: np.ndarray) -> None:
        """Install a covariance matrix: symmetrize, floor eigenvalues and
        rebuild the matrix from the floored spectrum so it stays positive
        definite."""
        cov = np.asarray(cov, dtype=float)
        cov = (cov + cov.T) / 2
        eigvals, basis, cov = _safe_eigh(cov)
        eigvals = np.maximum(eigvals, EIG_FLOOR)
        rebuilt = (basis * eigvals) @ basis.T
        self.cov = (rebuilt + rebuilt.T) / 2
        self.refresh_decomposition()

    def refresh_decomposition(self) -> None:
        """Cache the sampling decomposition, derived purely from the stored
        covariance bytes so a serialization round-trip samples identically."""
        eigvals, basis, cov = _safe_eigh(self.cov)
        self.cov = cov
        self._basis = basis
        self._scales = np.sqrt(np.maximum(eigvals, EIG_FLOOR))

    def sample(self, z: np.ndarray) -> np.ndarray:
        return self.mean + self.sigma * (self._basis @ (self._scales * z))

    def reconstruct_z(self, x_enc: np.ndarray) -> np.ndarray:
        """Invert the sampling map for contributions that lack a stored z."""
        return (self._basis.T @ (x_enc - self.mean)) / (self._scales * self.sigma)


class CmaesAgent(Agent):
    name = "cmaes"

    def __init__(self, spec: ParamSpec, config=None, rng=None):
        super().__init__(spec, rng if rng is not None else new_rng(0))
        config = dict(config or {})
        config.pop("seed", None)  # consumed by the registry
        unknown = set(config) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown cmaes config keys: {sorted(unknown)}")
        self.n = int(config.get("n", 4))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        self.d_niche = float(config.get("d_niche", 0.1))
        self.sigma0 = float(config.get("sigma0", SIGMA0_CMA))
        self.gamma = float(config.get("gamma", DEFAULT_GAMMA))
        lam = config.get("lambda")
        self.strategy = Strategy.for_dimension(spec.d, int(lam) if lam else None)
        self.play_count = 0
        self.niches = [self._fresh_niche() for _ in range(self.n)]

    def _fresh_niche(self) -> _Niche:
        return _Niche(self.spec.d, self.rng.random(self.spec.d), self.sigma0)

    # ------------------------------------------------------------------

    def play(self) -> Proposal:
        if self.play_count < self.n:
            j = self.play_count
        else:
            j = int(self.rng.integers(self.n))
        self.play_count += 1
        niche = self.niches[j]
        z = self.rng.standard_normal(self.spec.d)
        x_enc = clamp_unit(niche.sample(z))
        return Proposal(
            params=self.spec.decode(x_enc),
            metadata={
                "agent": self.name,
                "niche": str(j),
                "z": json.dumps([float(v) for v in z]),
                "x_enc": json.dumps([float(v) for v in x_enc]),
            },
        )

    # ------------------------------------------------------------------

    def _apply_feedback(self, fb: Feedback) -> None:
        x_enc = self._feedback_point(fb)
        j = self._resolve_niche(fb.metadata, x_enc)
        niche = self.niches[j]
        z = self._feedback_z(fb.metadata, niche, x_enc)
        niche.buffer.append((z, x_enc, float(fb.score)))
        if len(niche.buffer) >= self.strategy.lam:
            self._step_generation(niche)
            self._enforce_niching()

    def _feedback_point(self, fb: Feedback) -> np.ndarray:
        raw = fb.metadata.get("x_enc")
        if raw is not None:
            try:
                point = np.array(json.loads(raw), dtype=float)
                if point.shape == (self.spec.d,) and np.all(np.isfinite(point)):
                    return clamp_unit(point)
            except (ValueError, TypeError):
                pass
        return self.spec.encode(fb.params)

    def _resolve_niche(self, metadata: dict, x_enc: np.ndarray) -> int:
        raw = metadata.get("niche")
        if raw is not None:
            try:
                j = int(raw)
            except (TypeError, ValueError):
                j = -1
            if 0 <= j < self.n:
                return j
        # Manual contribution: attach to the niche whose mean is closest.
        dists = [unit_distance(x_enc, niche.mean) for niche in self.niches]
        return int(np.argmin(dists))

    def _feedback_z(
        self, metadata: dict, niche: _Niche, x_enc: np.ndarray
    ) -> np.ndarray:
        raw = metadata.get("z")
        if raw is not None:
            try:
                z = np.array(json.loads(raw), dtype=float)
                if z.shape == (self.spec.d,) and np.all(np.isfinite(z)):
                    return z
            except (ValueError, TypeError):
                pass
        return niche.reconstruct_z(x_enc)

    # ------------------------------------------------------------------

    def _step_generation(self, niche: _Niche) -> None:
        """One standard CMA-ES generation on a full buffer (maximization).

        Samples are ranked by score descending with ties broken by arrival
        order; recombination, the two evolution paths, the rank-one/rank-mu
        covariance update and cumulative step-size adaptation all use the
        stored pre-clamp z vectors. Only the mean is clamped back into the
        cube afterwards.
        """
        st = self.strategy
        order = sorted(
            range(len(niche.buffer)), key=lambda i: (-niche.buffer[i][2], i)
        )
        zs = np.array([niche.buffer[i][0] for i in order[: st.mu]])
        weights = np.array(st.weights)

        z_w = weights @ zs
        y_w = niche._basis @ (niche._scales * z_w)
        mean_raw = niche.mean + niche.sigma * y_w

        csn = math.sqrt(st.c_sigma * (2 - st.c_sigma) * st.mu_eff)
        niche.p_sigma = (1 - st.c_sigma) * niche.p_sigma + csn * (niche._basis @ z_w)

        niche.generation += 1
        ps_norm2 = float(niche.p_sigma @ niche.p_sigma)
        hsig_denom = 1 - (1 - st.c_sigma) ** (2 * niche.generation)
        hsig = 1.0 if ps_norm2 / st.d / hsig_denom < 2 + 4 / (st.d + 1) else 0.0

        ccn = math.sqrt(st.c_c * (2 - st.c_c) * st.mu_eff)
        niche.p_c = (1 - st.c_c) * niche.p_c + hsig * ccn * y_w

        ys = (niche._scales * zs) @ niche._basis.T  # row i = B (D z_i)
        rank_mu = ys.T @ (weights[:, None] * ys)
        cov = (
            (1 - st.c_1 - st.c_mu) * niche.cov
            + st.c_1
            * (
                np.outer(niche.p_c, niche.p_c)
                + (1 - hsig) * st.c_c * (2 - st.c_c) * niche.cov
            )
            + st.c_mu * rank_mu
        )

        niche.sigma *= math.exp(
            (st.c_sigma / st.d_sigma) * (math.sqrt(ps_norm2) / st.chi_d - 1)
        )
        niche.mean = clamp_unit(mean_raw)
        niche.set_cov(cov)
        niche.buffer = []

    def _enforce_niching(self) -> None:
        """Restart the higher-indexed niche of any pair of colliding means."""
        for a in range(self.n):
            for b in range(a + 1, self.n):
                dist = unit_distance(self.niches[a].mean, self.niches[b].mean)
                if dist < self.d_niche:
                    self.niches[b] = self._fresh_niche()

    # ------------------------------------------------------------------

    def time_warp(self, steps: int) -> None:
        for niche in self.niches:
            niche.sigma = decay_sigma(niche.sigma, self.gamma, steps, cap=SIGMA_MAX_CMA)

    def _payload(self) -> dict:
        return {
            "n": self.n,
            "lambda": self.strategy.lam,
            "d_niche": self.d_niche,
            "sigma0": self.sigma0,
            "gamma": self.gamma,
            "play_count": self.play_count,
            "niches": [
                {
                    "mean": [float(v) for v in niche.mean],
                    "sigma": niche.sigma,
                    "cov": [[float(v) for v in row] for row in niche.cov],
                    "p_sigma": [float(v) for v in niche.p_sigma],
                    "p_c": [float(v) for v in niche.p_c],
                    "generation": niche.generation,
                    "buffer": [
                        {
                            "z": [float(v) for v in z],
                            "x_enc": [float(v) for v in x],
                            "score": s,
                        }
                        for z, x, s in niche.buffer
                    ],
                }
                for niche in self.niches
            ],
        }

    def _restore_payload(self, payload: dict) -> None:
        self.n = int(payload["n"])
        self.d_niche = float(payload["d_niche"])
        self.sigma0 = float(payload["sigma0"])
        self.gamma = float(payload["gamma"])
        self.strategy = Strategy.for_dimension(self.spec.d, int(payload["lambda"]))
        self.play_count = int(payload["play_count"])
        self.niches = []
        for doc in payload["niches"]:
            niche = _Niche(
                self.spec.d, np.array(doc["mean"], dtype=float), float(doc["sigma"])
            )
            niche.p_sigma = np.array(doc["p_sigma"], dtype=float)
            niche.p_c = np.array(doc["p_c"], dtype=float)
            niche.generation = int(doc["generation"])
            niche.buffer = [
                (
                    np.array(b["z"], dtype=float),
                    np.array(b["x_enc"], dtype=float),
                    float(b["score"]),
                )
                for b in doc["buffer"]
            ]
            niche.cov = np.array(doc["cov"], dtype=float)
            niche.refresh_decomposition()
            self.niches.append(niche)
