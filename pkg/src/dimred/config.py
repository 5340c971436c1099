"""Run configuration: INI files (sections of ``key = value``) into a RunConfig.

Lengths are dimensionless, in units of the longitudinal trap length unless
stated otherwise.  A sweep holds g fixed and sets, for each listed a/r,

    r = (a/r) * 8 pi ||b||_4^4 / g,   a = (a/r) * r,   ell = r / (r/ell) or given.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .oracle3d import MeshPolicy
from .reduction import GeometryParams
from .scattering import PotentialKind, PotentialSpec, calibrate_unit_scattering_length, smooth_barrier
from .transverse import TransverseGrid, TransversePotential

__all__ = ["ConfigError", "RunConfig", "SweepRule", "load_config", "parse_config"]


class ConfigError(ValueError):
    """Validation failure; ``field`` names the offending ``section.key``."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class SweepRule:
    g: float
    a_over_r: tuple[float, ...]
    r_over_ell: tuple[float, ...] = ()
    ell: float = 1.0

    def geometries(self, n: int, mode) -> list[GeometryParams]:
        out = []
        ratios = self.r_over_ell or (None,)
        for rl in ratios:
            for ar in self.a_over_r:
                r = ar * 8 * math.pi * mode.norm4_4 / self.g
                ell = self.ell if rl is None else r / rl
                out.append(GeometryParams(n, r, ell, ar * r))
        return out


@dataclass(frozen=True)
class RunConfig:
    potential: PotentialSpec
    transverse: TransversePotential = TransversePotential()
    transverse_grid: TransverseGrid = TransverseGrid()
    trap: str = "harmonic"
    geometry: Optional[GeometryParams] = None
    coupling: Optional[float] = None  # g given instead of a
    sweep: Optional[SweepRule] = None
    C: float = 1.0
    D: float = 1.0
    schedule: dict = field(default_factory=dict)
    mesh: MeshPolicy = MeshPolicy()
    k_max: int = 4
    basis_size: int = 200
    ladder: int = 4
    g_values: tuple[float, ...] = ()
    kernel_R: float = 10.0  # kernel cutoff in units of the potential range
    workers: int = 1
    output: Path = Path("out")

    def fragment(self, *parts: str) -> dict:
        """JSON-able subset of the config, used as a cache key."""
        full = {
            "potential": self.potential.to_dict(),
            "transverse": {"kind": self.transverse.kind.value, "cells": self.transverse_grid.cells,
                           "sectors": list(self.transverse_grid.sectors)},
            "trap": self.trap,
            "geometry": asdict(self.geometry) if self.geometry else None,
            "coupling": self.coupling,
            "sweep": asdict(self.sweep) if self.sweep else None,
            "constants": [self.C, self.D],
            "schedule": dict(sorted(self.schedule.items())),
            "mesh": self.mesh.to_dict(),
            "spectrum": {"k_max": self.k_max, "basis_size": self.basis_size, "ladder": self.ladder,
                         "g_values": list(self.g_values)},
            "kernel_R": self.kernel_R,
        }
        return {k: full[k] for k in parts} if parts else full


def _floats(text: str, where: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.replace(";", ",").split(",") if x.strip())
    except ValueError:
        raise ConfigError(where, f"expected a comma-separated list of numbers, got {text!r}") from None


def _get(cp, section, key, kind=float, default=None):
    where = f"{section}.{key}"
    if not cp.has_option(section, key):
        return default
    raw = cp.get(section, key).strip()
    try:
        if kind is bool:
            return cp.getboolean(section, key)
        if kind is float and raw.lower() in ("inf", "infinity"):
            return math.inf
        return kind(raw)
    except ValueError:
        raise ConfigError(where, f"cannot parse {raw!r} as {kind.__name__}") from None


def _potential(cp, base: Path) -> PotentialSpec:
    s = "potential"
    if not cp.has_section(s):
        raise ConfigError(s, "missing section")
    kind = cp.get(s, "kind", fallback="smooth_barrier").strip()
    R0 = _get(cp, s, "range_R0", float, 1.0)
    v0 = _get(cp, s, "strength_v0", float, None)
    try:
        if kind == "smooth_barrier":
            spec = smooth_barrier(10.0 if v0 is None else v0, R0)
        elif kind == PotentialKind.HARD_CORE.value:
            spec = PotentialSpec(kind, R0)
        elif kind == PotentialKind.SQUARE_BARRIER.value:
            if v0 is None:
                raise ConfigError(f"{s}.strength_v0", "required for square_barrier")
            spec = PotentialSpec(kind, R0, v0)
        elif kind == PotentialKind.TABULATED_RADIAL.value:
            path = cp.get(s, "table_file", fallback=None)
            if path is None:
                raise ConfigError(f"{s}.table_file", "required for tabulated_radial")
            rows = _read_table(base / path, f"{s}.table_file")
            spec = PotentialSpec(kind, R0, 1.0 if v0 is None else v0, rows)
        else:
            raise ConfigError(f"{s}.kind", f"unknown potential kind {kind!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(s, str(exc)) from None
    if _get(cp, s, "calibrate", bool, True) and not spec.is_zero:
        spec = calibrate_unit_scattering_length(spec)
    return spec


def _read_table(path: Path, where: str):
    try:
        lines = [ln.split("#")[0].replace(",", " ").split() for ln in path.read_text().splitlines()]
        rows = [tuple(map(float, ln)) for ln in lines if ln]
    except (OSError, ValueError) as exc:
        raise ConfigError(where, f"cannot read table: {exc}") from None
    if any(len(r) != 2 for r in rows):
        raise ConfigError(where, "table rows need exactly two columns")
    return tuple(r[0] for r in rows), tuple(r[1] for r in rows)


def parse_config(text: str, base: Path = Path(".")) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("file", str(exc)) from None
    kw = {"potential": _potential(cp, base)}

    if cp.has_section("transverse"):
        kind = cp.get("transverse", "kind", fallback="harmonic").strip()
        if kind == "harmonic":
            kw["transverse"] = TransversePotential()
        elif kind == "tabulated_radial":
            kw["transverse"] = TransversePotential(kind, _read_table(
                base / cp.get("transverse", "profile_file"), "transverse.profile_file"))
        else:
            raise ConfigError("transverse.kind", f"unknown transverse kind {kind!r}")
        cells = _get(cp, "transverse", "cells", int, TransverseGrid.cells)
        if cells < 50:
            raise ConfigError("transverse.cells", "need at least 50 cells")
        kw["transverse_grid"] = TransverseGrid(cells=cells)

    if cp.has_section("longitudinal"):
        trap = cp.get("longitudinal", "trap", fallback="harmonic").strip()
        if trap not in ("harmonic", "periodic"):
            raise ConfigError("longitudinal.trap", f"expected harmonic or periodic, got {trap!r}")
        kw["trap"] = trap

    if cp.has_section("geometry"):
        s = "geometry"
        n = _get(cp, s, "n", int, 2)
        r = _get(cp, s, "r", float, 0.1)
        ell = _get(cp, s, "ell", float, 1.0)
        a = _get(cp, s, "a", float, None)
        g = _get(cp, s, "g", float, None)
        if a is not None and g is not None:
            raise ConfigError(s, "give either a or g, not both")
        if g is not None:
            if g < 0:
                raise ConfigError(f"{s}.g", "must be non-negative")
            kw["coupling"] = g
            a = 0.0  # fixed once the transverse mode is known
        try:
            kw["geometry"] = GeometryParams(n, r, ell, 0.0 if a is None else a)
        except ValueError as exc:
            raise ConfigError(s, str(exc)) from None

    if cp.has_section("sweep"):
        s = "sweep"
        g = _get(cp, s, "g", float, None)
        if g is None or not g > 0:
            raise ConfigError(f"{s}.g", "a positive coupling is required")
        ar = _floats(cp.get(s, "a_over_r", fallback=""), f"{s}.a_over_r")
        if not ar or min(ar) <= 0:
            raise ConfigError(f"{s}.a_over_r", "need positive values")
        rl = _floats(cp.get(s, "r_over_ell", fallback=""), f"{s}.r_over_ell")
        kw["sweep"] = SweepRule(g, ar, rl, _get(cp, s, "ell", float, 1.0))

    if cp.has_section("constants"):
        for key in ("C", "D"):
            val = _get(cp, "constants", key, float, 1.0)
            if not val > 0:
                raise ConfigError(f"constants.{key}", "must be positive")
            kw[key] = val

    if cp.has_section("schedule"):
        allowed = {"R_upper", "R_lower", "delta", "eps", "eta", "kappa"}
        sched = {}
        for key in cp.options("schedule"):
            name = next((a for a in allowed if a.lower() == key), None)
            if name is None:
                raise ConfigError(f"schedule.{key}", f"unknown key; allowed {sorted(allowed)}")
            sched[name] = _get(cp, "schedule", key, float)
        kw["schedule"] = sched

    if cp.has_section("mesh"):
        s = "mesh"
        d = MeshPolicy().to_dict()
        for key in d:
            if cp.has_option(s, key):
                d[key] = _get(cp, s, key, type(d[key]))
        unknown = set(cp.options(s)) - {k.lower() for k in d}
        if unknown:
            raise ConfigError(f"{s}.{sorted(unknown)[0]}", "unknown key")
        if d["core_cells"] < 20:
            raise ConfigError(f"{s}.core_cells", "need at least 20 cells across the interaction range")
        if not d["growth"] >= 1:
            raise ConfigError(f"{s}.growth", "must be >= 1")
        kw["mesh"] = MeshPolicy(**d)

    if cp.has_section("spectrum"):
        s = "spectrum"
        kw["k_max"] = _get(cp, s, "k_max", int, 4)
        kw["basis_size"] = _get(cp, s, "basis_size", int, 200)
        kw["ladder"] = _get(cp, s, "ladder", int, 4)
        if cp.has_option(s, "g_values"):
            kw["g_values"] = _floats(cp.get(s, "g_values"), f"{s}.g_values")
        if kw["k_max"] < 1:
            raise ConfigError(f"{s}.k_max", "must be >= 1")
        if kw["ladder"] < 1:
            raise ConfigError(f"{s}.ladder", "must be >= 1")

    if cp.has_section("scatter"):
        kw["kernel_R"] = _get(cp, "scatter", "kernel_R_over_range", float, 10.0)
        if not kw["kernel_R"] > 1:
            raise ConfigError("scatter.kernel_R_over_range", "must exceed 1")

    if cp.has_section("run"):
        kw["workers"] = max(1, _get(cp, "run", "workers", int, 1))
        if cp.has_option("run", "output"):
            kw["output"] = Path(cp.get("run", "output"))
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("file", f"cannot read {path}: {exc}") from None
    return parse_config(text, path.parent)
