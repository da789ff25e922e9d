"""Automated-feedback harness: synthetic scorers standing in for the human.

A run drives one agent against a scorer fixture for a fixed number of
iterations and reports which scorer peaks were discovered and when.
Everything is deterministic given (agent, fixture, seed), so reports can be
compared byte for byte.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .agents import Agent, Feedback, create_agent
from .param_space import ParamSpec


@dataclass(frozen=True)
class Peak:
    center: np.ndarray
    amplitude: float
    width: float


class PeakMixtureScorer:
    """Max of isotropic Gaussian bumps over the encoded cube, thresholded.

    The raw value is max_i amplitude_i * exp(-||x - center_i||^2 / (2 w_i^2)).
    Anything below the threshold scores 0, which emulates a rater who only
    marks images that clear their bar. Centers must be pairwise farther apart
    than 3x the largest width so peaks stay distinct.
    """

    def __init__(self, peaks: list[Peak], threshold: Optional[float] = None):
        self.peaks = list(peaks)
        if threshold is None:
            threshold = 0.5 * min((p.amplitude for p in self.peaks), default=0.0)
        if threshold < 0:
            raise ValueError("threshold must be non-negative")
        self.threshold = float(threshold)
        if self.peaks:
            max_width = max(p.width for p in self.peaks)
            for i in range(len(self.peaks)):
                for j in range(i + 1, len(self.peaks)):
                    gap = float(
                        np.linalg.norm(self.peaks[i].center - self.peaks[j].center)
                    )
                    if gap <= 3 * max_width:
                        raise ValueError(
                            f"peaks {i} and {j} are only {gap:.3f} apart; "
                            f"need > {3 * max_width:.3f} for a well-separated fixture"
                        )

    def score_encoded(self, x: np.ndarray) -> float:
        raw = 0.0
        for peak in self.peaks:
            dist2 = float(np.sum((x - peak.center) ** 2))
            raw = max(raw, peak.amplitude * math.exp(-dist2 / (2 * peak.width**2)))
        return raw if raw >= self.threshold else 0.0


class SphereScorer:
    """amplitude - ||x - center||^2, clipped at zero; a single smooth optimum."""

    def __init__(self, center: np.ndarray, amplitude: float):
        self.center = np.asarray(center, dtype=float)
        self.amplitude = float(amplitude)
        self.peaks: list[Peak] = []
        self.threshold = 0.0

    def score_encoded(self, x: np.ndarray) -> float:
        return max(0.0, self.amplitude - float(np.sum((x - self.center) ** 2)))


Scorer = Union[PeakMixtureScorer, SphereScorer]


@dataclass(frozen=True)
class SimFixture:
    spec: ParamSpec
    scorer: Scorer


def load_fixture(path: str | Path) -> SimFixture:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    spec = ParamSpec.from_json_dict(doc["spec"])
    scorer_doc = doc["scorer"]
    kind = scorer_doc.get("type")
    if kind == "peaks":
        peaks = [
            Peak(
                center=np.array(p["center"], dtype=float),
                amplitude=float(p["amplitude"]),
                width=float(p["width"]),
            )
            for p in scorer_doc["peaks"]
        ]
        for peak in peaks:
            if peak.center.shape != (spec.d,):
                raise ValueError("peak center dimension does not match the spec")
        scorer: Scorer = PeakMixtureScorer(peaks, scorer_doc.get("threshold"))
    elif kind == "sphere":
        center = np.array(scorer_doc["center"], dtype=float)
        if center.shape != (spec.d,):
            raise ValueError("sphere center dimension does not match the spec")
        scorer = SphereScorer(center, float(scorer_doc["amplitude"]))
    else:
        raise ValueError(f"unknown scorer type {kind!r}")
    return SimFixture(spec=spec, scorer=scorer)


@dataclass
class RunReport:
    agent: str
    seed: int
    iterations: int
    scores: list[float]
    first_hit: list[Optional[int]]
    negative_feedback: bool

    @property
    def peaks_discovered(self) -> int:
        return sum(1 for hit in self.first_hit if hit is not None)

    def to_json_dict(self) -> dict:
        return {
            "agent": self.agent,
            "seed": self.seed,
            "iterations": self.iterations,
            "negative_feedback": self.negative_feedback,
            "first_hit": self.first_hit,
            "peaks_discovered": self.peaks_discovered,
            "scores": self.scores,
        }


def run(
    agent: Union[str, Agent],
    fixture: SimFixture,
    iterations: int,
    seed: int = 0,
    negative_feedback: bool = False,
    agent_config: Optional[dict] = None,
) -> tuple[RunReport, Agent]:
    """Drive one agent against a scorer for `iterations` play/score rounds.

    Positive scores are always fed back; zero scores are fed back only when
    `negative_feedback` is set, otherwise the proposal is left unrated (no
    update at all). A peak counts as discovered at the first proposal that
    lands within its width of its center and clears the threshold.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if isinstance(agent, str):
        agent_name = agent
        agent = create_agent(agent, fixture.spec, agent_config, seed=seed)
    else:
        agent_name = agent.name
    scorer = fixture.scorer
    peaks = scorer.peaks
    first_hit: list[Optional[int]] = [None] * len(peaks)
    scores: list[float] = []
    for t in range(1, iterations + 1):
        proposal = agent.play()
        x = fixture.spec.encode(proposal.params)
        score = scorer.score_encoded(x)
        scores.append(score)
        for i, peak in enumerate(peaks):
            if first_hit[i] is None and score >= scorer.threshold:
                if float(np.linalg.norm(x - peak.center)) <= peak.width:
                    first_hit[i] = t
        if score > 0 or negative_feedback:
            agent.update(Feedback(proposal.params, score, proposal.metadata))
    report = RunReport(
        agent=agent_name,
        seed=seed,
        iterations=iterations,
        scores=scores,
        first_hit=first_hit,
        negative_feedback=negative_feedback,
    )
    return report, agent


def report_emit(report: RunReport, out_dir: str | Path) -> None:
    """Write report.json plus a scores.csv time series under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "report.json", "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out / "scores.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "score"])
        for t, score in enumerate(report.scores, start=1):
            writer.writerow([t, score])


def load_report(path: str | Path) -> RunReport:
    with open(Path(path) / "report.json", "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return RunReport(
        agent=doc["agent"],
        seed=doc["seed"],
        iterations=doc["iterations"],
        scores=doc["scores"],
        first_hit=doc["first_hit"],
        negative_feedback=doc["negative_feedback"],
    )
