"""Experiment configuration: TOML parsing, validation, canonical emission.

Configs are plain TOML with complex numbers written as two-element
``[re, im]`` arrays. :func:`emit_config` produces a canonical rendering
with fixed key order and shortest round-tripping float repr, so
``emit -> parse -> emit`` is byte-identical. Unknown keys anywhere in
the document are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .impurity import ImpuritySpec
from .lattice import LatticeSpec, ModelParams, SolvableParams, build_lattice

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "emit_config",
           "load_config"]

ANALYSIS_KINDS = ("spectrum", "fd", "sensitivity", "greens", "nonbloch")


class ConfigError(ValueError):
    """Malformed or semantically invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment description (one run of the CLI)."""

    model: ModelParams
    shape: str                      # "rectangle" | "oblique"
    l_x: int
    l_y: int
    side: int
    tilt_deg: float
    bc_x: str
    bc_y: str
    impurities: ImpuritySpec
    kinds: Tuple[str, ...]
    epsilon: float                  # 0.0 -> default (0.02 x spectral diameter)
    target_energies: Tuple[complex, ...]
    ky_points: int
    theta_points: int
    margin: float
    out_dir: str

    def build_lattice(self) -> LatticeSpec:
        if self.shape == "rectangle":
            return build_lattice(("rectangle", self.l_x, self.l_y),
                                 self.bc_x, self.bc_y)
        return build_lattice(("oblique", self.side, self.tilt_deg),
                             self.bc_x, self.bc_y)

    def solvable_params(self) -> SolvableParams:
        """Reduce the model to the solvable parameterization, or fail."""
        m = self.model
        checks = (abs(m.omega0), abs(m.j_x), abs(m.j_y.real), abs(m.j_xy.real),
                  abs(m.delta0.imag), abs(m.delta_x.imag))
        if max(checks) > 1e-12:
            raise ConfigError(
                "greens/nonbloch analyses need solvable parameters "
                "(omega0 = j_x = 0, imaginary j_y and j_xy, real pairing); "
                f"got {m}")
        return SolvableParams(t_y=m.j_y.imag, t_xy=m.j_xy.imag,
                              delta0=m.delta0.real, delta_x=m.delta_x.real)


def _expect_table(doc: dict, key: str, required: bool = True) -> dict:
    if key not in doc:
        if required:
            raise ConfigError(f"missing [{key}] table")
        return {}
    value = doc[key]
    if not isinstance(value, dict):
        raise ConfigError(f"[{key}] must be a table")
    return value


def _reject_unknown(table: dict, allowed: Tuple[str, ...], where: str) -> None:
    unknown = set(table) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{where}]: {sorted(unknown)}")


def _as_complex(value, where: str) -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in value)):
        raise ConfigError(f"{where} must be a two-element [re, im] array")
    return complex(float(value[0]), float(value[1]))


def _as_int(value, where: str, minimum: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{where} must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where} must be >= {minimum}, got {value}")
    return value


def _as_float(value, where: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{where} must be a number")
    return float(value)


def _as_str(value, where: str, choices: Tuple[str, ...] | None = None) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{where} must be a string")
    if choices is not None and value not in choices:
        raise ConfigError(f"{where} must be one of {choices}, got {value!r}")
    return value


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a TOML experiment configuration."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML syntax error: {exc}") from exc
    _reject_unknown(doc, ("model", "lattice", "impurities", "analysis",
                          "output"), "top level")

    model_tab = _expect_table(doc, "model")
    _reject_unknown(model_tab, ("omega0", "j_x", "j_y", "j_xy", "delta0",
                                "delta_x"), "model")
    fields = {}
    for name in ("omega0", "j_x", "j_y", "j_xy", "delta0", "delta_x"):
        fields[name] = _as_complex(model_tab.get(name, [0.0, 0.0]),
                                   f"model.{name}")
    model = ModelParams(**fields)

    lat = _expect_table(doc, "lattice")
    shape = _as_str(lat.get("shape", "rectangle"), "lattice.shape",
                    ("rectangle", "oblique"))
    if shape == "rectangle":
        _reject_unknown(lat, ("shape", "l_x", "l_y", "bc_x", "bc_y"), "lattice")
        l_x = _as_int(lat.get("l_x", 1), "lattice.l_x", 1)
        l_y = _as_int(lat.get("l_y", 1), "lattice.l_y", 1)
        side, tilt = 0, 0.0
    else:
        _reject_unknown(lat, ("shape", "side", "tilt_deg", "bc_x", "bc_y"),
                        "lattice")
        side = _as_int(lat.get("side", 1), "lattice.side", 1)
        tilt = _as_float(lat.get("tilt_deg", 0.0), "lattice.tilt_deg")
        l_x, l_y = 0, 0
    bc_x = _as_str(lat.get("bc_x", "open"), "lattice.bc_x", ("open", "periodic"))
    bc_y = _as_str(lat.get("bc_y", "open"), "lattice.bc_y", ("open", "periodic"))
    if shape == "oblique" and (bc_x, bc_y) != ("open", "open"):
        raise ConfigError("oblique lattices support open boundaries only")

    imp = _expect_table(doc, "impurities", required=False)
    _reject_unknown(imp, ("onsite", "hopping"), "impurities")
    onsite = []
    for k, entry in enumerate(imp.get("onsite", [])):
        if not isinstance(entry, list) or len(entry) != 3:
            raise ConfigError(f"impurities.onsite[{k}] must be [x, y, v]")
        onsite.append(((_as_int(entry[0], "onsite x", 1),
                        _as_int(entry[1], "onsite y", 1)),
                       _as_float(entry[2], "onsite v")))
    hopping = []
    for k, entry in enumerate(imp.get("hopping", [])):
        if not isinstance(entry, list) or len(entry) != 5:
            raise ConfigError(
                f"impurities.hopping[{k}] must be [x1, y1, x2, y2, t_p]")
        hopping.append(((_as_int(entry[0], "hopping x1", 1),
                         _as_int(entry[1], "hopping y1", 1)),
                        (_as_int(entry[2], "hopping x2", 1),
                         _as_int(entry[3], "hopping y2", 1)),
                        _as_float(entry[4], "hopping t_p")))
    try:
        impurities = ImpuritySpec(onsite=tuple(onsite), hopping=tuple(hopping))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    ana = _expect_table(doc, "analysis", required=False)
    _reject_unknown(ana, ("kinds", "epsilon", "target_energies", "ky_points",
                          "theta_points", "margin"), "analysis")
    kinds_raw = ana.get("kinds", ["spectrum"])
    if not isinstance(kinds_raw, list) or not kinds_raw:
        raise ConfigError("analysis.kinds must be a nonempty array of strings")
    kinds = tuple(_as_str(k, "analysis.kinds entry", ANALYSIS_KINDS)
                  for k in kinds_raw)
    if len(set(kinds)) != len(kinds):
        raise ConfigError("analysis.kinds contains duplicates")
    epsilon = _as_float(ana.get("epsilon", 0.0), "analysis.epsilon")
    if epsilon < 0:
        raise ConfigError(f"analysis.epsilon must be >= 0, got {epsilon}")
    targets = tuple(_as_complex(e, f"analysis.target_energies[{k}]")
                    for k, e in enumerate(ana.get("target_energies", [])))
    ky_points = _as_int(ana.get("ky_points", 256), "analysis.ky_points", 2)
    theta_points = _as_int(ana.get("theta_points", 256),
                           "analysis.theta_points", 2)
    margin = _as_float(ana.get("margin", 0.05), "analysis.margin")

    out = _expect_table(doc, "output", required=False)
    _reject_unknown(out, ("out_dir",), "output")
    out_dir = _as_str(out.get("out_dir", "out"), "output.out_dir")

    return ExperimentConfig(
        model=model, shape=shape, l_x=l_x, l_y=l_y, side=side, tilt_deg=tilt,
        bc_x=bc_x, bc_y=bc_y, impurities=impurities, kinds=kinds,
        epsilon=epsilon, target_energies=targets, ky_points=ky_points,
        theta_points=theta_points, margin=margin, out_dir=out_dir)


def _toml_str(s: str) -> str:
    escaped = (s.replace("\\", "\\\\").replace('"', '\\"')
               .replace("\n", "\\n").replace("\t", "\\t"))
    return f'"{escaped}"'


def _toml_float(x: float) -> str:
    out = repr(float(x))
    # repr may produce 'inf'/'nan'; configs never contain those
    if "inf" in out or "nan" in out:
        raise ConfigError(f"non-finite float {x} cannot be emitted")
    return out


def _toml_complex(z: complex) -> str:
    return f"[{_toml_float(z.real)}, {_toml_float(z.imag)}]"


def emit_config(cfg: ExperimentConfig) -> str:
    """Canonical TOML rendering of a resolved configuration."""
    lines = ["[model]"]
    for name in ("omega0", "j_x", "j_y", "j_xy", "delta0", "delta_x"):
        lines.append(f"{name} = {_toml_complex(getattr(cfg.model, name))}")
    lines += ["", "[lattice]", f"shape = {_toml_str(cfg.shape)}"]
    if cfg.shape == "rectangle":
        lines += [f"l_x = {cfg.l_x}", f"l_y = {cfg.l_y}"]
    else:
        lines += [f"side = {cfg.side}", f"tilt_deg = {_toml_float(cfg.tilt_deg)}"]
    lines += [f"bc_x = {_toml_str(cfg.bc_x)}", f"bc_y = {_toml_str(cfg.bc_y)}"]
    lines += ["", "[impurities]"]
    onsite = ", ".join(f"[{x}, {y}, {_toml_float(v)}]"
                       for (x, y), v in cfg.impurities.onsite)
    hopping = ", ".join(
        f"[{x1}, {y1}, {x2}, {y2}, {_toml_float(t)}]"
        for (x1, y1), (x2, y2), t in cfg.impurities.hopping)
    lines += [f"onsite = [{onsite}]", f"hopping = [{hopping}]"]
    lines += ["", "[analysis]"]
    kinds = ", ".join(_toml_str(k) for k in cfg.kinds)
    targets = ", ".join(_toml_complex(e) for e in cfg.target_energies)
    lines += [f"kinds = [{kinds}]",
              f"epsilon = {_toml_float(cfg.epsilon)}",
              f"target_energies = [{targets}]",
              f"ky_points = {cfg.ky_points}",
              f"theta_points = {cfg.theta_points}",
              f"margin = {_toml_float(cfg.margin)}"]
    lines += ["", "[output]", f"out_dir = {_toml_str(cfg.out_dir)}", ""]
    return "\n".join(lines)


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
