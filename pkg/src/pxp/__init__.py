"""Interactive exploration of generative-art parameter spaces.

Agents propose parameter configurations, a human (or a simulated scorer)
rates the rendered results, and the agents adapt to uncover several distinct
high-scoring regions instead of a single optimum.
"""

from .param_space import ChoiceDim, FloatDim, IntDim, ParamSpec
from .agents import AGENT_NAMES, Feedback, Proposal, create_agent, deserialize_agent

__version__ = "0.1.0"

__all__ = [
    "AGENT_NAMES",
    "ChoiceDim",
    "Feedback",
    "FloatDim",
    "IntDim",
    "ParamSpec",
    "Proposal",
    "create_agent",
    "deserialize_agent",
    "__version__",
]
