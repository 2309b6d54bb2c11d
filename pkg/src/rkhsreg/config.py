"""Experiment configuration: a YAML document with a fixed key schema.

Top-level keys::

    mode:           solve | verify | gram | probe          (required)
    rng_seed:       unsigned integer                       (default 0)
    kernel:         {family, input_dim, width | degree, offset}
    functionals:    list of {type: point_eval, point}
                            {type: expectation, atoms, weights}
                            {type: convolution, signal_grid, signal_values, eval_point}
    loss:           {type: squared, targets} | {type: hinge, labels}
                    | {type: kpca} | {type: scalar_f, name}
    regularizer:    {kind: radial, profile: square | power (p) | indicator_ball (radius)
                                   | monotone_table (knots, values)}
                    | {kind: anisotropic_quadratic, weights}
                    | {kind: shifted_norm, center}
    gamma:          nonnegative number or "inf"            (default 1.0)
    gamma_schedule: list of positive numbers               (default 2**0 .. 2**40)
    solver:         svm method, "dual" or "subgradient"    (default "dual")
    dimension:      model-space dimension for radial regularizers in verify/probe
    trials:         sampling trials per check               (default 10000)
    probe:          {name, x, y, n, level, samples, vectors, bounds}
    output:         {json, csv}
    tolerances:     {check, radius}

Unknown keys anywhere are errors.  Validation collects every error, each
with the dotted key path where it occurred.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import yaml

from .functionals import functional_from_dict
from .kernels import FAMILIES, Kernel
from .reduction import SCALAR_LOSSES, loss_from_dict
from .regularizers import regularizer_from_dict

MODES = ("solve", "verify", "gram", "probe")
PROBES = ("rotation_path", "min_n", "chain", "sublevel", "span", "necessity",
          "orthogonal", "ray", "equal_norm", "characterization")

TOP_KEYS = {"mode", "rng_seed", "kernel", "functionals", "loss", "regularizer", "gamma",
            "gamma_schedule", "solver", "dimension", "trials", "probe", "output", "tolerances"}
KERNEL_KEYS = {"family", "width", "degree", "offset", "input_dim"}
FUNCTIONAL_KEYS = {"type", "point", "atoms", "weights", "signal_grid", "signal_values", "eval_point"}
REGULARIZER_KEYS = {"kind", "profile", "p", "radius", "knots", "values", "weights", "center"}
LOSS_KEYS = {"type", "targets", "labels", "name"}
PROBE_KEYS = {"name", "x", "y", "n", "level", "samples", "vectors", "bounds"}
OUTPUT_KEYS = {"json", "csv"}
TOLERANCE_KEYS = {"check", "radius"}


class ConfigError(ValueError):
    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{path}: {msg}" if path else msg for path, msg in errors))


@dataclass
class ExperimentConfig:
    mode: str
    rng_seed: int = 0
    kernel: Optional[dict] = None
    functionals: list = field(default_factory=list)
    loss: Optional[dict] = None
    regularizer: Optional[dict] = None
    gamma: float = 1.0
    gamma_schedule: list = field(default_factory=lambda: [2.0 ** k for k in range(41)])
    solver: str = "dual"
    dimension: Optional[int] = None
    trials: int = 10_000
    probe: Optional[dict] = None
    output: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=lambda: {"check": 1e-9, "radius": 1e-3})

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["gamma"] = _num_out(self.gamma)
        return {k: v for k, v in d.items() if v is not None}

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)

    # built objects
    def build_kernel(self) -> Kernel:
        return Kernel.from_dict(self.kernel)

    def build_functionals(self):
        return [functional_from_dict(f) for f in self.functionals]

    def build_regularizer(self):
        return regularizer_from_dict(self.regularizer)

    def build_loss(self):
        return loss_from_dict(self.loss)


def _num_out(x: float):
    return "inf" if x == math.inf else x


def _number(value, path, errors, *, allow_inf=False, minimum=None, strict=False):
    if isinstance(value, str) and allow_inf and value.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append((path, f"expected a number, got {value!r}"))
        return None
    value = float(value)
    if math.isnan(value) or (math.isinf(value) and not allow_inf):
        errors.append((path, f"expected a finite number, got {value!r}"))
        return None
    if minimum is not None and (value <= minimum if strict else value < minimum):
        errors.append((path, f"must be {'>' if strict else '>='} {minimum}, got {value!r}"))
        return None
    return value


def _integer(value, path, errors, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append((path, f"expected an integer, got {value!r}"))
        return None
    if minimum is not None and value < minimum:
        errors.append((path, f"must be >= {minimum}, got {value!r}"))
        return None
    return value


def _mapping(value, path, keys, errors) -> Optional[dict]:
    if not isinstance(value, dict):
        errors.append((path, "expected a mapping"))
        return None
    for k in value:
        if k not in keys:
            errors.append((f"{path}.{k}" if path else str(k), "unknown key"))
    return value


def _build(factory, value, path, errors):
    try:
        factory(value)
    except (ValueError, TypeError, KeyError) as exc:
        msg = f"missing key {exc}" if isinstance(exc, KeyError) else str(exc)
        errors.append((path, msg))


def _check_kernel(d, errors):
    if _mapping(d, "kernel", KERNEL_KEYS, errors) is None:
        return
    if d.get("family") not in FAMILIES:
        errors.append(("kernel.family", f"must be one of {', '.join(FAMILIES)}"))
    if "input_dim" not in d:
        errors.append(("kernel.input_dim", "missing"))
    else:
        _integer(d["input_dim"], "kernel.input_dim", errors, minimum=1)
    if "width" in d:
        _number(d["width"], "kernel.width", errors, minimum=0.0, strict=True)
    if "degree" in d:
        _integer(d["degree"], "kernel.degree", errors, minimum=1)
    if "offset" in d:
        _number(d["offset"], "kernel.offset", errors, minimum=0.0)


def _check_regularizer(d, errors):
    if _mapping(d, "regularizer", REGULARIZER_KEYS, errors) is None:
        return
    if d.get("kind") == "radial" and d.get("profile") == "indicator_ball" and "radius" in d:
        _number(d["radius"], "regularizer.radius", errors, minimum=0.0, strict=True)
    _build(regularizer_from_dict, d, "regularizer", errors)


def _check_loss(d, errors):
    if _mapping(d, "loss", LOSS_KEYS, errors) is None:
        return
    if d.get("type") == "scalar_f" and d.get("name", "squared_at_one") not in SCALAR_LOSSES:
        errors.append(("loss.name", f"must be one of {', '.join(SCALAR_LOSSES)}"))
        return
    _build(loss_from_dict, d, "loss", errors)


def _check_probe(d, errors):
    if _mapping(d, "probe", PROBE_KEYS, errors) is None:
        return
    if d.get("name") not in PROBES:
        errors.append(("probe.name", f"must be one of {', '.join(PROBES)}"))
    for key in ("n", "samples"):
        if key in d:
            _integer(d[key], f"probe.{key}", errors, minimum=1)
    if "level" in d:
        _number(d["level"], "probe.level", errors)


def parse_config(data: Any) -> ExperimentConfig:
    """Validate an already-loaded document; raise :class:`ConfigError` on failure."""
    errors: list[tuple[str, str]] = []
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError([("", "top level must be a mapping")])
    _mapping(data, "", TOP_KEYS, errors)

    mode = data.get("mode")
    if mode is None:
        errors.append(("mode", "mode missing"))
    elif mode not in MODES:
        errors.append(("mode", f"must be one of {', '.join(MODES)}"))

    cfg = ExperimentConfig(mode=mode if mode in MODES else "solve")
    if "rng_seed" in data:
        seed = _integer(data["rng_seed"], "rng_seed", errors, minimum=0)
        if seed is not None:
            cfg.rng_seed = seed
    if "kernel" in data:
        _check_kernel(data["kernel"], errors)
        cfg.kernel = data["kernel"]
    if "functionals" in data:
        fs = data["functionals"]
        if not isinstance(fs, list):
            errors.append(("functionals", "expected a list"))
        else:
            for i, f in enumerate(fs):
                path = f"functionals[{i}]"
                if _mapping(f, path, FUNCTIONAL_KEYS, errors) is not None:
                    _build(functional_from_dict, f, path, errors)
            cfg.functionals = fs
    if "loss" in data:
        _check_loss(data["loss"], errors)
        cfg.loss = data["loss"]
    if "regularizer" in data:
        _check_regularizer(data["regularizer"], errors)
        cfg.regularizer = data["regularizer"]
    if "gamma" in data:
        g = _number(data["gamma"], "gamma", errors, allow_inf=True, minimum=0.0)
        if g is not None:
            cfg.gamma = g
    if "gamma_schedule" in data:
        gs = data["gamma_schedule"]
        if not isinstance(gs, list) or not gs:
            errors.append(("gamma_schedule", "expected a nonempty list"))
        else:
            vals = [_number(g, f"gamma_schedule[{i}]", errors, minimum=0.0, strict=True)
                    for i, g in enumerate(gs)]
            cfg.gamma_schedule = vals
    if "solver" in data:
        if data["solver"] not in ("dual", "subgradient"):
            errors.append(("solver", "must be 'dual' or 'subgradient'"))
        else:
            cfg.solver = data["solver"]
    if "dimension" in data:
        cfg.dimension = _integer(data["dimension"], "dimension", errors, minimum=1)
    if "trials" in data:
        t = _integer(data["trials"], "trials", errors, minimum=1)
        if t is not None:
            cfg.trials = t
    if "probe" in data:
        _check_probe(data["probe"], errors)
        cfg.probe = data["probe"]
    if "output" in data:
        if _mapping(data["output"], "output", OUTPUT_KEYS, errors) is not None:
            cfg.output = dict(data["output"])
    if "tolerances" in data:
        tol = _mapping(data["tolerances"], "tolerances", TOLERANCE_KEYS, errors)
        if tol is not None:
            for k, v in tol.items():
                if k in TOLERANCE_KEYS:
                    x = _number(v, f"tolerances.{k}", errors, minimum=0.0)
                    if x is not None:
                        cfg.tolerances[k] = x

    if mode in MODES:
        _check_mode(cfg, data, errors)
    if errors:
        raise ConfigError(errors)
    return cfg


def _check_mode(cfg: ExperimentConfig, data: dict, errors):
    def need(key):
        if key not in data:
            errors.append((key, f"required in mode {cfg.mode}"))

    if cfg.mode in ("gram", "solve"):
        need("kernel")
        need("functionals")
        if "functionals" in data and isinstance(data["functionals"], list) and not data["functionals"]:
            errors.append(("functionals", "at least one functional is required"))
    if cfg.mode == "solve":
        need("loss")
        need("regularizer")
        if isinstance(cfg.regularizer, dict) and cfg.regularizer.get("kind", "radial") != "radial":
            errors.append(("regularizer.kind", "solve needs a radial regularizer"))
    if cfg.mode == "verify":
        need("regularizer")
    if cfg.mode == "probe":
        need("probe")
        name = (cfg.probe or {}).get("name")
        if name not in ("rotation_path", "min_n"):
            need("regularizer")
        if name in ("rotation_path", "min_n", "chain", "necessity"):
            for key in ("x", "y"):
                if key not in (cfg.probe or {}):
                    errors.append((f"probe.{key}", f"required by probe {name}"))
        if name == "span":
            if "vectors" not in (cfg.probe or {}):
                errors.append(("probe.vectors", "required by probe span"))
            need("loss")
    if cfg.mode in ("verify", "probe") and isinstance(cfg.regularizer, dict) \
            and cfg.regularizer.get("kind") == "radial" and cfg.dimension is None:
        name = (cfg.probe or {}).get("name")
        if cfg.mode == "verify" or name in ("sublevel", "orthogonal", "ray", "equal_norm",
                                            "characterization"):
            errors.append(("dimension", "required for a radial regularizer"))


def validate_config(raw: str) -> ExperimentConfig:
    """Parse YAML text and validate it."""
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError([("", f"not valid YAML: {exc}")]) from None
    return parse_config(data)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return validate_config(fh.read())
