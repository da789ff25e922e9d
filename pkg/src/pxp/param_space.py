"""Typed, bounded parameter spaces and their unit-cube embedding.

Every exploration strategy works in the normalized cube [0, 1]^d; this module
owns the mapping between user-facing parameter dicts (floats, ints, choices)
and that cube, plus uniform sampling and a normalized distance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

ParamValue = Union[float, int, str]
ParamVector = dict[str, ParamValue]


@dataclass(frozen=True)
class FloatDim:
    min: float
    max: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ValueError("float bounds must be finite")
        if self.min > self.max:
            raise ValueError(f"float bounds reversed: min={self.min} > max={self.max}")


@dataclass(frozen=True)
class IntDim:
    min: int
    max: int

    def __post_init__(self) -> None:
        if self.min > self.max:
            raise ValueError(f"int bounds reversed: min={self.min} > max={self.max}")


@dataclass(frozen=True)
class ChoiceDim:
    options: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.options) == 0:
            raise ValueError("choice dimension needs at least one option")
        if len(set(self.options)) != len(self.options):
            raise ValueError("choice options must be unique")


ParamKind = Union[FloatDim, IntDim, ChoiceDim]

_KIND_TAGS = {FloatDim: "float", IntDim: "int", ChoiceDim: "choice"}


class ParamSpec:
    """Ordered list of named, typed, bounded dimensions.

    Dimension order is fixed at construction and shared by every encoded
    vector, so encode/decode always agree on coordinate meaning.
    """

    def __init__(self, dims: Iterable[tuple[str, ParamKind]]):
        dims = tuple((str(name), kind) for name, kind in dims)
        if len(dims) == 0:
            raise ValueError("a parameter space needs at least one dimension")
        names = [name for name, _ in dims]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate dimension names: {dupes}")
        for name, kind in dims:
            if not isinstance(kind, (FloatDim, IntDim, ChoiceDim)):
                raise TypeError(f"dimension {name!r} has unsupported kind {kind!r}")
        self.dims = dims
        self._index = {name: i for i, (name, _) in enumerate(dims)}

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.dims)

    def kind(self, name: str) -> ParamKind:
        return self.dims[self._index[name]][1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParamSpec) and self.dims == other.dims

    def __repr__(self) -> str:
        return f"ParamSpec({list(self.names)!r})"

    # ------------------------------------------------------------------
    # validation

    def validate(self, v: ParamVector) -> list[str]:
        """Return a list of violations; empty means the vector is valid."""
        violations = []
        extra = set(v) - set(self.names)
        for name in sorted(extra):
            violations.append(f"{name}: not a dimension of this space")
        for name, kind in self.dims:
            if name not in v:
                violations.append(f"{name}: missing")
                continue
            val = v[name]
            if isinstance(kind, FloatDim):
                if not isinstance(val, (int, float)) or isinstance(val, bool):
                    violations.append(f"{name}: expected a number, got {val!r}")
                elif not math.isfinite(float(val)):
                    violations.append(f"{name}: non-finite value")
                elif not (kind.min <= float(val) <= kind.max):
                    violations.append(
                        f"{name}: {val} outside [{kind.min}, {kind.max}]"
                    )
            elif isinstance(kind, IntDim):
                if not isinstance(val, int) or isinstance(val, bool):
                    violations.append(f"{name}: expected an integer, got {val!r}")
                elif not (kind.min <= val <= kind.max):
                    violations.append(
                        f"{name}: {val} outside [{kind.min}, {kind.max}]"
                    )
            else:
                if val not in kind.options:
                    violations.append(f"{name}: unknown option {val!r}")
        return violations

    def require_valid(self, v: ParamVector) -> None:
        violations = self.validate(v)
        if violations:
            raise ValueError("invalid parameter vector: " + "; ".join(violations))

    # ------------------------------------------------------------------
    # unit-cube embedding

    def encode(self, v: ParamVector) -> np.ndarray:
        """Map a valid vector to [0, 1]^d.

        Floats and ints map affinely (degenerate min=max maps to 0.5); a
        choice with n options maps option i to the bucket center (i+0.5)/n,
        so uniform cube sampling induces uniform choice sampling.
        """
        self.require_valid(v)
        out = np.empty(self.d, dtype=float)
        for i, (name, kind) in enumerate(self.dims):
            val = v[name]
            if isinstance(kind, (FloatDim, IntDim)):
                span = kind.max - kind.min
                out[i] = 0.5 if span == 0 else (float(val) - kind.min) / span
            else:
                idx = kind.options.index(val)
                out[i] = (idx + 0.5) / len(kind.options)
        return out

    def decode(self, p: np.ndarray | Iterable[float]) -> ParamVector:
        """Map a unit point back to a parameter vector.

        Out-of-cube coordinates are clamped first. Int dimensions round half
        up; choice dimensions take the bucket floor(u*n), clamped to the last
        option at u=1.
        """
        p = np.asarray(p, dtype=float)
        if p.shape != (self.d,):
            raise ValueError(f"expected {self.d} coordinates, got shape {p.shape}")
        p = np.clip(p, 0.0, 1.0)
        out: ParamVector = {}
        for i, (name, kind) in enumerate(self.dims):
            u = float(p[i])
            if isinstance(kind, FloatDim):
                out[name] = kind.min + u * (kind.max - kind.min)
            elif isinstance(kind, IntDim):
                raw = kind.min + u * (kind.max - kind.min)
                out[name] = min(kind.max, max(kind.min, math.floor(raw + 0.5)))
            else:
                n = len(kind.options)
                out[name] = kind.options[min(n - 1, max(0, math.floor(u * n)))]
        return out

    def sample_uniform(self, rng: np.random.Generator) -> ParamVector:
        """Decode a point drawn uniformly from the unit cube."""
        return self.decode(rng.random(self.d))

    def distance(self, a: ParamVector, b: ParamVector) -> float:
        """Euclidean distance between encodings, normalized to [0, 1] by sqrt(d)."""
        return unit_distance(self.encode(a), self.encode(b))

    # ------------------------------------------------------------------
    # JSON document (the contract shared by server, UI and sketches)

    def to_json_dict(self) -> dict:
        dims = []
        for name, kind in self.dims:
            doc: dict = {"name": name, "kind": _KIND_TAGS[type(kind)]}
            if isinstance(kind, (FloatDim, IntDim)):
                doc["min"] = kind.min
                doc["max"] = kind.max
            else:
                doc["options"] = list(kind.options)
            dims.append(doc)
        return {"dims": dims}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ParamSpec":
        try:
            raw_dims = doc["dims"]
        except (TypeError, KeyError):
            raise ValueError("spec document must have a top-level 'dims' list")
        dims: list[tuple[str, ParamKind]] = []
        for entry in raw_dims:
            name = entry["name"]
            tag = entry["kind"]
            if tag == "float":
                kind: ParamKind = FloatDim(float(entry["min"]), float(entry["max"]))
            elif tag == "int":
                kind = IntDim(int(entry["min"]), int(entry["max"]))
            elif tag == "choice":
                kind = ChoiceDim(tuple(str(o) for o in entry["options"]))
            else:
                raise ValueError(f"unknown dimension kind {tag!r} for {name!r}")
            dims.append((name, kind))
        return cls(dims)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ParamSpec":
        return cls.from_json_dict(json.loads(text))


def unit_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Distance in [0, 1] between two unit points: ||a - b|| / sqrt(d)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("points have different dimension")
    return float(np.linalg.norm(a - b) / math.sqrt(a.shape[0]))


def clamp_unit(p: np.ndarray) -> np.ndarray:
    """Clamp a point into the unit cube (bound handling shared by all agents)."""
    return np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
