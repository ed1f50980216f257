"""Problem-instance configuration files.

A config is a YAML mapping (JSON is accepted too, being a YAML subset)::

    states: [1, 2, 3, 4, 5, 6, 7, 8]
    q: [[0.334, 0.215, ...], ...]     # or `matrix:` for a plain kernel
    beta: 0.5
    initial: stationary               # or a list of probabilities
    target: [8]
    n: 100
    c: 2                              # optional: epsilon, m, c, k_max, ...

Exactly one of ``matrix`` or ``q`` (with ``beta`` and ``target``) must be
present.
"""

from dataclasses import asdict, dataclass, field, fields

import numpy as np
import yaml

from .chains import build_erhardsson
from .stochastic import check_distribution, check_stochastic, stationary_distribution


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


@dataclass
class ChainSpec:
    states: list = None
    matrix: list = None
    q: list = None
    beta: float = None
    initial: object = "stationary"
    target: list = field(default_factory=list)
    n: int = 10
    epsilon: float = None
    m: int = None
    c: float = None
    k_max: int = None
    power: int = 1
    samples: int = None
    seed: int = None
    grid: dict = None

    def __post_init__(self):
        if (self.matrix is None) == (self.q is None):
            raise ConfigError("provide exactly one of 'matrix' or 'q'")
        if self.q is not None and self.beta is None:
            raise ConfigError("'q' requires 'beta'")
        if self.q is not None and not self.target:
            raise ConfigError("'q' requires a non-empty 'target'")
        size = len(self.matrix if self.matrix is not None else self.q)
        if self.states is None:
            self.states = list(range(1, size + 1))
        if len(self.states) != size or len({str(s) for s in self.states}) != size:
            raise ConfigError("'states' must list one distinct label per matrix row")
        if not isinstance(self.n, int) or self.n < 0:
            raise ConfigError("'n' must be a nonnegative integer")
        if isinstance(self.initial, str) and self.initial != "stationary":
            raise ConfigError("'initial' must be 'stationary' or a probability list")
        self.target_indices()

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping")
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    def to_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}

    def target_indices(self):
        lookup = {str(s): i for i, s in enumerate(self.states)}
        try:
            return [lookup[str(t)] for t in self.target]
        except KeyError as exc:
            raise ConfigError(f"target label {exc.args[0]} is not a state") from None

    def kernel(self, beta=None):
        """The transition matrix, built from ``q`` when given."""
        try:
            if self.q is not None:
                b = self.beta if beta is None else beta
                return build_erhardsson(self.q, b, self.target_indices())
            return check_stochastic(self.matrix)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def initial_distribution(self, p):
        if isinstance(self.initial, str):
            return stationary_distribution(p)
        try:
            return check_distribution(self.initial, size=p.shape[0])
        except ValueError as exc:
            raise ConfigError(f"initial: {exc}") from exc


def load_spec(path):
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return ChainSpec.from_dict(data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def dump_spec(spec, path):
    data = spec.to_dict()
    for key in ("matrix", "q", "initial"):
        if isinstance(data.get(key), np.ndarray):
            data[key] = data[key].tolist()
    with open(path, "w") as fh:
        yaml.safe_dump(data, fh, sort_keys=False)
