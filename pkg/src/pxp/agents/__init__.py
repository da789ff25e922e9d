"""Agent registry: construct or restore agents by name."""

from __future__ import annotations

from ..param_space import ParamSpec
from .base import (
    Agent,
    AgentStateError,
    Feedback,
    Proposal,
    DEFAULT_GAMMA,
    DEFAULT_SIGMA0,
    SIGMA_MAX,
    SIGMA_MIN,
    new_rng,
)
from .cmaes import CmaesAgent
from .gaussian import GaussianAgent
from .open_ended import OpenEndedAgent
from .random_agent import RandomAgent

AGENT_CLASSES: dict[str, type[Agent]] = {
    cls.name: cls for cls in (RandomAgent, GaussianAgent, OpenEndedAgent, CmaesAgent)
}

AGENT_NAMES = tuple(AGENT_CLASSES)


def create_agent(
    name: str, spec: ParamSpec, config: dict | None = None, seed: int = 0
) -> Agent:
    """Build a fresh agent; a `seed` config key overrides the seed argument."""
    try:
        cls = AGENT_CLASSES[name]
    except KeyError:
        raise ValueError(
            f"unknown agent {name!r}; available agents: {', '.join(AGENT_NAMES)}"
        )
    config = dict(config or {})
    seed = int(config.pop("seed", seed))
    return cls(spec, config=config, rng=new_rng(seed))


def deserialize_agent(state: dict, spec: ParamSpec) -> Agent:
    name = state.get("agent_name")
    try:
        cls = AGENT_CLASSES[name]
    except KeyError:
        raise AgentStateError(
            f"state names unknown agent {name!r}; available agents: "
            f"{', '.join(AGENT_NAMES)}"
        )
    return cls.deserialize(state, spec)


__all__ = [
    "Agent",
    "AgentStateError",
    "AGENT_NAMES",
    "CmaesAgent",
    "Feedback",
    "GaussianAgent",
    "OpenEndedAgent",
    "Proposal",
    "RandomAgent",
    "create_agent",
    "deserialize_agent",
    "DEFAULT_GAMMA",
    "DEFAULT_SIGMA0",
    "SIGMA_MAX",
    "SIGMA_MIN",
    "new_rng",
]
