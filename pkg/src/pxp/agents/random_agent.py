"""Baseline agent: uniform proposals, learns nothing."""

from __future__ import annotations

from .base import Agent, Feedback, Proposal


class RandomAgent(Agent):
    """Samples uniformly within the declared bounds; feedback is ignored and
    does not advance the generator, so the proposal stream is invariant under
    any feedback history."""

    name = "random"

    def __init__(self, spec, config=None, rng=None):
        from .base import new_rng

        super().__init__(spec, rng if rng is not None else new_rng(0))
        config = dict(config or {})
        if config:
            raise ValueError(f"random agent takes no config keys, got {sorted(config)}")

    def play(self) -> Proposal:
        params = self.spec.sample_uniform(self.rng)
        return Proposal(params=params, metadata={"agent": self.name})

    def _apply_feedback(self, fb: Feedback) -> None:
        pass

    def _payload(self) -> dict:
        return {}

    def _restore_payload(self, payload: dict) -> None:
        pass
