"""Agent contract: play / update / time_warp plus state serialization.

Agents propose parameter vectors, receive scored feedback, and expose a
time-warp control that rescales their exploration radii. Every agent owns a
PCG64 generator whose state rides along in the serialized document, so a
round-trip through JSON reproduces the proposal stream exactly.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, field

import numpy as np

from ..param_space import ParamSpec, ParamVector

# Global radius bounds in normalized space, shared by every sigma-bearing
# agent: the floor prevents degenerate collapse, the cap keeps a radius from
# exceeding the cube under repeated backward time warps.
SIGMA_MIN = 1e-3
SIGMA_MAX = 0.5
DEFAULT_GAMMA = 0.97
DEFAULT_SIGMA0 = 0.25

# Payload schema version; deserialization rejects anything else.
PAYLOAD_FORMAT = 1


@dataclass(frozen=True)
class Proposal:
    """A parameter vector plus the provenance of the internal mode that made it."""

    params: ParamVector
    metadata: dict[str, str]


@dataclass(frozen=True)
class Feedback:
    """A scored parameter vector; metadata is the emitting proposal's, or empty
    for manual contributions."""

    params: ParamVector
    score: float
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not math.isfinite(self.score) or self.score < 0:
            raise ValueError(f"score must be finite and non-negative, got {self.score}")


class AgentStateError(ValueError):
    """Raised when a serialized agent state cannot be restored."""


def new_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


class Agent(abc.ABC):
    """Base class wiring spec, rng and the serialization envelope.

    Subclasses implement `play`, `_apply_feedback`, `time_warp` and the
    payload hooks. A single instance is not thread-safe; callers serialize
    access per instance.
    """

    name: str = ""

    def __init__(self, spec: ParamSpec, rng: np.random.Generator):
        self.spec = spec
        self.rng = rng
        self.update_count = 0

    # -- contract ------------------------------------------------------

    @abc.abstractmethod
    def play(self) -> Proposal:
        """Propose the next parameter vector to evaluate."""

    def update(self, fb: Feedback) -> None:
        self.spec.require_valid(fb.params)
        self._apply_feedback(fb)
        self.update_count += 1

    @abc.abstractmethod
    def _apply_feedback(self, fb: Feedback) -> None: ...

    def time_warp(self, steps: int) -> None:
        """Scale every exploration radius by gamma**steps; no-op by default."""

    # -- serialization -------------------------------------------------

    @abc.abstractmethod
    def _payload(self) -> dict:
        """Agent-specific state as a JSON-serializable document."""

    @abc.abstractmethod
    def _restore_payload(self, payload: dict) -> None: ...

    def serialize(self) -> dict:
        payload = self._payload()
        payload["format"] = PAYLOAD_FORMAT
        payload["dim"] = self.spec.d
        return {
            "agent_name": self.name,
            "version": self.update_count,
            "payload": payload,
            "rng_state": self.rng.bit_generator.state,
        }

    @classmethod
    def deserialize(cls, state: dict, spec: ParamSpec) -> "Agent":
        if state.get("agent_name") != cls.name:
            raise AgentStateError(
                f"state belongs to agent {state.get('agent_name')!r}, not {cls.name!r}"
            )
        payload = state.get("payload", {})
        if payload.get("format") != PAYLOAD_FORMAT:
            raise AgentStateError(
                f"unsupported state format {payload.get('format')!r}, "
                f"expected {PAYLOAD_FORMAT}"
            )
        if payload.get("dim") != spec.d:
            raise AgentStateError(
                f"state was saved for a {payload.get('dim')}-dimensional space, "
                f"this space has {spec.d} dimensions"
            )
        agent = cls.__new__(cls)
        Agent.__init__(agent, spec, new_rng(0))
        agent.rng.bit_generator.state = state["rng_state"]
        agent.update_count = int(state.get("version", 0))
        agent._restore_payload(payload)
        return agent


def decay_sigma(sigma: float, gamma: float, steps: int, cap: float = SIGMA_MAX) -> float:
    """sigma * gamma**steps clamped into [SIGMA_MIN, cap].

    Extreme step counts overflow float pow; both overflow directions land on
    the clamp anyway."""
    try:
        scaled = sigma * gamma**steps
    except OverflowError:
        scaled = math.inf if steps < 0 else 0.0
    return min(cap, max(SIGMA_MIN, scaled))
