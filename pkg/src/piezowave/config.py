"""Run and sweep configuration files.

Flat INI sections, parsed with configparser.  A run config fully describes
one simulation: material constants, exponents, grid, integrator settings,
sine-mode initial data and output paths.  A sweep config is a run config
plus a [sweep] section and a [sweep.axes] section whose keys are
"section.option" paths with comma-separated override values.

Initial data are coefficient lists of the modes sin((k - 1/2) pi x / L),
which satisfy the clamped end and the zero-slope end exactly on any grid.
"""
from __future__ import annotations

import configparser
import itertools
from dataclasses import dataclass, replace
from typing import Optional

from .errors import ConfigParse
from .grid import Grid1D, State, state_from_modes
from .integrator import SCHEMES, StepConfig
from .params import Exponents, MaterialParams, make_params, validate_exponents

FLOAT_FMT = "%.17g"


@dataclass
class RunConfig:
    rho: float = 1.0
    alpha: float = 2.0
    beta: float = 1.0
    gamma: float = 1.0
    mu: float = 1.0
    m1: float = 1.0
    m2: float = 1.0
    n1: float = 2.0
    n2: float = 2.0
    L: float = 1.0
    nx: int = 201
    dt: float = 1e-3
    scheme: str = "semi-implicit"
    newton_tol: float = 1e-12
    newton_max_iter: int = 60
    blowup_cutoff: float = 1e6
    damping: bool = True
    sources: bool = True
    v0: tuple = (0.1,)
    p0: tuple = (0.0,)
    v1: tuple = (0.0,)
    p1: tuple = (0.0,)
    t_end: float = 1.0
    record_every: int = 1
    seed: int = 0
    outdir: str = "out"
    fit_model: Optional[str] = None
    fit_C: float = 2.0

    # ---- constructed objects -------------------------------------------
    def material(self) -> MaterialParams:
        return make_params(self.rho, self.alpha, self.beta, self.gamma,
                           self.mu)

    def exponents(self, mode: str = "general") -> Exponents:
        return validate_exponents(self.m1, self.m2, self.n1, self.n2, mode)

    def grid(self) -> Grid1D:
        return Grid1D(self.L, self.nx)

    def step_config(self) -> StepConfig:
        return StepConfig(dt=self.dt, scheme=self.scheme,
                          newton_tol=self.newton_tol,
                          newton_max_iter=self.newton_max_iter,
                          blowup_cutoff=self.blowup_cutoff,
                          damping_on=self.damping, sources_on=self.sources)

    def initial_state(self) -> State:
        return state_from_modes(self.grid(), self.v0, self.p0,
                                self.v1, self.p1)


@dataclass
class SweepConfig:
    base: RunConfig
    axes: dict                # {"section.option": [values...]} sorted keys
    max_parallel: int = 4
    cap: int = 10_000


_FLOAT_KEYS = {
    "material": ("rho", "alpha", "beta", "gamma", "mu"),
    "exponents": ("m1", "m2", "n1", "n2"),
    "grid": ("L",),
    "integrator": ("dt", "newton_tol", "blowup_cutoff"),
    "run": ("t_end",),
    "fit": ("C",),
}
_INT_KEYS = {
    "grid": ("nx",),
    "integrator": ("newton_max_iter",),
    "run": ("record_every", "seed"),
}
_BOOL_KEYS = {"integrator": ("damping", "sources")}
_LIST_KEYS = {"initial": ("v0", "p0", "v1", "p1")}
_STR_KEYS = {"integrator": ("scheme",), "output": ("outdir",),
             "fit": ("model",)}

_SECTION_ATTR = {
    ("material", "rho"): "rho", ("material", "alpha"): "alpha",
    ("material", "beta"): "beta", ("material", "gamma"): "gamma",
    ("material", "mu"): "mu",
    ("exponents", "m1"): "m1", ("exponents", "m2"): "m2",
    ("exponents", "n1"): "n1", ("exponents", "n2"): "n2",
    ("grid", "L"): "L", ("grid", "nx"): "nx",
    ("integrator", "dt"): "dt", ("integrator", "scheme"): "scheme",
    ("integrator", "newton_tol"): "newton_tol",
    ("integrator", "newton_max_iter"): "newton_max_iter",
    ("integrator", "blowup_cutoff"): "blowup_cutoff",
    ("integrator", "damping"): "damping",
    ("integrator", "sources"): "sources",
    ("initial", "v0"): "v0", ("initial", "p0"): "p0",
    ("initial", "v1"): "v1", ("initial", "p1"): "p1",
    ("run", "t_end"): "t_end", ("run", "record_every"): "record_every",
    ("run", "seed"): "seed",
    ("output", "outdir"): "outdir",
    ("fit", "model"): "model",
    ("fit", "C"): "C",
}


def _parse_value(section: str, key: str, raw: str):
    try:
        if key in _FLOAT_KEYS.get(section, ()):
            return float(raw)
        if key in _INT_KEYS.get(section, ()):
            return int(raw)
        if key in _BOOL_KEYS.get(section, ()):
            low = raw.strip().lower()
            if low in ("on", "true", "yes", "1"):
                return True
            if low in ("off", "false", "no", "0"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if key in _LIST_KEYS.get(section, ()):
            return tuple(float(tok) for tok in raw.split(",") if tok.strip())
        if key in _STR_KEYS.get(section, ()):
            return raw.strip()
    except ValueError as exc:
        raise ConfigParse(f"[{section}] {key} = {raw!r}: {exc}") from None
    raise ConfigParse(f"unknown option [{section}] {key}")


def _read_ini(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str        # case-sensitive keys (L vs l)
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh, source=path)
    except OSError as exc:
        raise ConfigParse(f"cannot read {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigParse(str(exc)) from None
    return cp


def load_run_config(path: str) -> RunConfig:
    cp = _read_ini(path)
    return _run_config_from_parser(cp)


def _run_config_from_parser(cp: configparser.ConfigParser) -> RunConfig:
    cfg = RunConfig()
    for section in cp.sections():
        if section.startswith("sweep"):
            continue
        for key, raw in cp.items(section):
            attr_key = (section, key)
            if attr_key not in _SECTION_ATTR:
                raise ConfigParse(f"unknown option [{section}] {key}")
            value = _parse_value(section, key, raw)
            attr = _SECTION_ATTR[attr_key]
            if section == "fit":
                attr = {"model": "fit_model", "C": "fit_C"}[key]
            setattr(cfg, attr, value)
    # fail fast on inconsistent physics
    cfg.material()
    cfg.exponents()
    cfg.grid()
    cfg.step_config()
    if cfg.fit_model is not None and cfg.fit_model not in ("exp", "poly",
                                                           "log"):
        raise ConfigParse(f"fit model must be exp/poly/log, "
                          f"got {cfg.fit_model!r}")
    return cfg


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "on" if value else "off"
    if isinstance(value, float):
        return FLOAT_FMT % value
    if isinstance(value, tuple):
        return ", ".join(FLOAT_FMT % v for v in value)
    return str(value)


def write_run_config(cfg: RunConfig, path: str) -> None:
    """Serialize in normalized form; load(write(cfg)) == cfg."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    layout = (
        ("material", ("rho", "alpha", "beta", "gamma", "mu")),
        ("exponents", ("m1", "m2", "n1", "n2")),
        ("grid", ("L", "nx")),
        ("integrator", ("dt", "scheme", "newton_tol", "newton_max_iter",
                        "blowup_cutoff", "damping", "sources")),
        ("initial", ("v0", "p0", "v1", "p1")),
        ("run", ("t_end", "record_every", "seed")),
        ("output", ("outdir",)),
    )
    for section, keys in layout:
        cp[section] = {}
        for key in keys:
            cp[section][key] = _fmt(getattr(cfg, key))
    if cfg.fit_model is not None:
        cp["fit"] = {"model": cfg.fit_model, "C": _fmt(cfg.fit_C)}
    with open(path, "w", encoding="utf-8") as fh:
        cp.write(fh)


def load_sweep_config(path: str) -> SweepConfig:
    cp = _read_ini(path)
    base = _run_config_from_parser(cp)
    if not cp.has_section("sweep.axes"):
        raise ConfigParse("sweep config needs a [sweep.axes] section")
    axes = {}
    for key, raw in cp.items("sweep.axes"):
        if "." not in key:
            raise ConfigParse(f"axis {key!r} must be 'section.option'")
        section, option = key.split(".", 1)
        if (section, option) not in _SECTION_ATTR:
            raise ConfigParse(f"unknown axis [{section}] {option}")
        values = [_parse_value(section, option, tok.strip())
                  for tok in raw.split(";") if tok.strip()] \
            if option in _LIST_KEYS.get(section, ()) else \
            [_parse_value(section, option, tok.strip())
             for tok in raw.split(",") if tok.strip()]
        if not values:
            raise ConfigParse(f"axis {key!r} has no values")
        axes[key] = values
    max_parallel = 4
    cap = 10_000
    if cp.has_section("sweep"):
        for key, raw in cp.items("sweep"):
            if key == "max_parallel":
                max_parallel = int(raw)
            elif key == "cap":
                cap = int(raw)
            else:
                raise ConfigParse(f"unknown option [sweep] {key}")
    size = 1
    for values in axes.values():
        size *= len(values)
    if size > cap:
        raise ConfigParse(f"sweep size {size} exceeds cap {cap}")
    return SweepConfig(base=base, axes=dict(sorted(axes.items())),
                       max_parallel=max_parallel, cap=cap)


def expand_sweep(sweep: SweepConfig):
    """Deterministic cross-product of override combinations.

    Yields (overrides, RunConfig) with overrides a dict of axis -> value,
    in lexicographic order of the sorted axis names.
    """
    names = list(sweep.axes.keys())
    for combo in itertools.product(*(sweep.axes[n] for n in names)):
        overrides = dict(zip(names, combo))
        cfg = replace(sweep.base)
        for key, value in overrides.items():
            section, option = key.split(".", 1)
            attr = _SECTION_ATTR[(section, option)]
            if section == "fit":
                attr = {"model": "fit_model", "C": "fit_C"}[option]
            setattr(cfg, attr, value)
        yield overrides, cfg
