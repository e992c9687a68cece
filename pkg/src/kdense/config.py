"""Experiment configuration: a diff-friendly INI schema, no code execution.

One ``[body <name>]`` section per body, one ``[experiment <name>]`` section
per experiment, and an optional ``[output]`` section.  All sample counts
and seeds are explicit in the file so runs are reproducible.
"""

import configparser

import numpy as np

from . import bodies
from .errors import ConfigError

BODY_KINDS = ("ball", "ellipsoid", "superellipse", "fourier", "reuleaux",
              "difference", "dilate", "translate", "reflect", "minkowski_sum")
EXPERIMENT_KINDS = ("kdense", "asymptotic", "petty", "identities", "report")


class BodySpec:
    def __init__(self, name, kind, options):
        self.name = name
        self.kind = kind
        self.options = options


class ExperimentSpec:
    def __init__(self, name, kind, options):
        self.name = name
        self.kind = kind
        self.options = options

    def get(self, key, default=None):
        return self.options.get(key, default)

    def get_float(self, key, default):
        try:
            return float(self.options.get(key, default))
        except ValueError as e:
            raise ConfigError(f"experiment {self.name}: bad value for "
                              f"key '{key}'") from e

    def get_int(self, key, default):
        try:
            return int(self.options.get(key, default))
        except ValueError as e:
            raise ConfigError(f"experiment {self.name}: bad value for "
                              f"key '{key}'") from e

    def get_floats(self, key, default):
        raw = self.options.get(key)
        if raw is None:
            return list(default)
        try:
            return [float(tok) for tok in raw.split()]
        except ValueError as e:
            raise ConfigError(f"experiment {self.name}: bad value for "
                              f"key '{key}'") from e


class ExperimentConfig:
    def __init__(self, body_specs, experiment_specs, output_dir):
        self.body_specs = body_specs
        self.experiment_specs = experiment_specs
        self.output_dir = output_dir
        self._built = {}

    def body(self, name):
        if name not in self.body_specs:
            raise ConfigError(f"unknown body '{name}'")
        if name not in self._built:
            self._built[name] = _build_body(self.body_specs[name], self)
        return self._built[name]

    def resolve_k(self, spec, G):
        """The probe body of an experiment: a named body or 'difference'."""
        kname = spec.get("k", "difference")
        if kname == "difference":
            return bodies.difference_body(G)
        return self.body(kname)


def load_config(path):
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file '{path}'")
    body_specs = {}
    experiment_specs = []
    output_dir = "out"
    for section in parser.sections():
        opts = dict(parser.items(section))
        if section == "output":
            output_dir = opts.get("directory", output_dir)
            continue
        parts = section.split(None, 1)
        if len(parts) != 2 or parts[0] not in ("body", "experiment"):
            raise ConfigError(f"unrecognized section '[{section}]'")
        label, name = parts
        kind = opts.pop("kind", None)
        if kind is None:
            raise ConfigError(f"section '[{section}]' is missing the key 'kind'")
        if label == "body":
            if kind not in BODY_KINDS:
                raise ConfigError(f"body {name}: unknown kind '{kind}'")
            body_specs[name] = BodySpec(name, kind, opts)
        else:
            if kind not in EXPERIMENT_KINDS:
                raise ConfigError(f"experiment {name}: unknown kind '{kind}'")
            spec = ExperimentSpec(name, kind, opts)
            _validate_experiment(spec)
            experiment_specs.append(spec)
    cfg = ExperimentConfig(body_specs, experiment_specs, output_dir)
    # fail fast on dangling body references
    for spec in experiment_specs:
        cfg.body(spec.get("body")) if spec.get("body") else None
        k = spec.get("k", "difference")
        if k != "difference":
            cfg.body(k)
    return cfg


def _validate_experiment(spec):
    if spec.get("body") is None:
        raise ConfigError(f"experiment {spec.name}: missing key 'body'")
    for key in ("points", "qmc_points", "replicates", "directions", "rungs"):
        if key in spec.options and spec.get_int(key, 0) <= 0:
            raise ConfigError(f"experiment {spec.name}: key '{key}' must be "
                              "positive")
    if "seed" in spec.options:
        spec.get_int("seed", 0)


def _floats(text, name, key):
    try:
        return [float(tok) for tok in text.split()]
    except ValueError as e:
        raise ConfigError(f"body {name}: bad value for key '{key}'") from e


def _build_body(spec, cfg):
    name, kind, o = spec.name, spec.kind, spec.options
    try:
        if kind == "ball":
            center = _floats(o["center"], name, "center") if "center" in o else None
            dim = int(o.get("dimension", 2))
            return bodies.Ball(float(o.get("radius", 1.0)), center=center, dim=dim)
        if kind == "ellipsoid":
            if "semiaxes" not in o:
                raise ConfigError(f"body {name}: missing key 'semiaxes'")
            axes = _floats(o["semiaxes"], name, "semiaxes")
            center = _floats(o["center"], name, "center") if "center" in o else None
            return bodies.Ellipsoid.from_semiaxes(*axes, center=center)
        if kind == "superellipse":
            return bodies.Superellipse2D(float(o.get("exponent", 4.0)))
        if kind == "fourier":
            if "cos" not in o:
                raise ConfigError(f"body {name}: missing key 'cos'")
            cos = _floats(o["cos"], name, "cos")
            sin = _floats(o["sin"], name, "sin") if "sin" in o else None
            return bodies.FourierBody2D(cos, sin)
        if kind == "reuleaux":
            return bodies.ReuleauxTriangle2D(float(o.get("width", 1.0)))
        if kind == "difference":
            return bodies.difference_body(cfg.body(o["of"]))
        if kind == "dilate":
            return bodies.Dilate(cfg.body(o["of"]), float(o["factor"]))
        if kind == "translate":
            return bodies.Translate(cfg.body(o["of"]),
                                    _floats(o["vector"], name, "vector"))
        if kind == "reflect":
            return bodies.Reflect(cfg.body(o["of"]))
        if kind == "minkowski_sum":
            return bodies.MinkowskiSum(cfg.body(o["left"]), cfg.body(o["right"]))
    except KeyError as e:
        raise ConfigError(f"body {name}: missing key '{e.args[0]}'") from e
    except ValueError as e:
        raise ConfigError(f"body {name}: {e}") from e
    raise ConfigError(f"body {name}: unknown kind '{kind}'")


def direction_from(spec, dim, key="x_direction"):
    raw = spec.get(key)
    if raw is None:
        return None
    vals = np.array([float(t) for t in raw.split()])
    if vals.shape[0] != dim:
        raise ConfigError(f"experiment {spec.name}: key '{key}' has wrong "
                          "dimension")
    return vals / np.linalg.norm(vals)
