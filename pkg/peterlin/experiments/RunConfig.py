"""Configuration of convergence experiments: defaults, presets, JSON files and
command line overrides.
"""

import json
from dataclasses import asdict, dataclass, field, fields

from peterlin import config
from peterlin.decorators import convert_path_to_string
from peterlin.tools import convert_to_levels


# The three published parameter pairs.
PRESETS = {
    "diffusive": {"nu": 0.1, "eps": 0.1},
    "weakly-diffusive": {"nu": 0.1, "eps": 0.001},
    "non-diffusive": {"nu": 1.0, "eps": 0.0},
}


@dataclass
class RunConfig:
    """Settings of ``run``, ``plot`` and ``check``.

    Field names equal the command line flags with dashes replaced by
    underscores, except ``assert_bands`` which is set by ``--assert``.

    Parameters
    ----------

    levels : list of int
      Division numbers ``N``, strictly increasing.

    dt_ratio : float
      ``dt = dt_ratio / N``.
    """

    nu: float = 0.1
    eps: float = 0.1
    delta0: float = 1.0
    levels: list = field(default_factory=lambda: [32, 64, 128])
    dt_ratio: float = 0.5
    t_end: float = 0.5
    newton_tol: float = 1e-10
    newton_max_iter: int = 20
    out: str = "convergence.csv"
    plot_out: str = "convergence.svg"
    assert_bands: bool = False
    preset: str = None
    workers: int = config.WORKERS

    def __post_init__(self):
        self.levels = convert_to_levels(self.levels)
        if not isinstance(self.levels, list) or not self.levels:
            raise ValueError("'levels' should be a nonempty list of integers")
        if any(level < 1 for level in self.levels):
            raise ValueError("'levels' should be positive, got %s" % self.levels)
        if len(set(self.levels)) != len(self.levels):
            raise ValueError("'levels' should be distinct, got %s" % self.levels)
        if not self.dt_ratio > 0:
            raise ValueError("'dt_ratio' should be positive, got %r" % self.dt_ratio)
        if self.preset is not None and self.preset not in PRESETS:
            raise ValueError(
                "'preset' should be one of %s, got %r"
                % (", ".join(PRESETS), self.preset)
            )
        if int(self.workers) < 1:
            raise ValueError("'workers' should be at least 1, got %r" % self.workers)

    def dt(self, level):
        return self.dt_ratio / level

    def to_dict(self):
        return asdict(self)

    @classmethod
    def keys(cls):
        return [item.name for item in fields(cls)]

    @classmethod
    def resolve(cls, file_values=None, overrides=None):
        """Merges, by increasing priority: defaults, the preset, the values of
        a configuration file and explicit overrides (``None`` values ignored).
        """
        file_values = dict(file_values or {})
        overrides = {
            key: value for key, value in (overrides or {}).items() if value is not None
        }
        preset = overrides.get("preset", file_values.get("preset"))

        values = {}
        if preset is not None:
            if preset not in PRESETS:
                raise ValueError(
                    "'preset' should be one of %s, got %r"
                    % (", ".join(PRESETS), preset)
                )
            values.update(PRESETS[preset])
        values.update(file_values)
        values.update(overrides)

        unknown = sorted(set(values) - set(cls.keys()))
        if unknown:
            raise ValueError("Unknown configuration keys: %s" % ", ".join(unknown))
        return cls(**values)


@convert_path_to_string(["filename"])
def read_config_file(filename):
    """Loads a JSON configuration. Keys are flag names with dashes replaced by
    underscores; ``"assert"`` maps to ``assert_bands``.
    """
    with open(filename) as file:
        values = json.load(file)
    if not isinstance(values, dict):
        raise ValueError(f"{filename}: a JSON object is expected")
    values = {key.replace("-", "_"): value for key, value in values.items()}
    if "assert" in values:
        values["assert_bands"] = values.pop("assert")
    return values
