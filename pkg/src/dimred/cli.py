"""Command-line driver: ``dimred <subcommand> --config <path> [--out dir] [--workers N] [--no-cache]``.

Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 acceptance failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence

from . import acceptance, report
from .cache import Cache, NullCache, digest
from .config import ConfigError, RunConfig, load_config
from .lieb_liniger import (BetheError, excitation_branches, ll_spectrum_periodic,
                           ll_spectrum_trapped)
from .oracle3d import OracleError, TwoBodyConfig, assemble_spectrum, solve_relative, com_separation
from .reduction import (GeometryParams, a_for_coupling, effective_g, explicit_chains,
                        theorem1_envelope, theorem2_bound)
from .scattering import ScatteringError, build_jastrow, kernel_bounds, kernels, solve_zero_energy
from .transverse import TransverseError, solve_transverse

log = logging.getLogger("dimred")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_ACCEPTANCE = 0, 1, 2, 3
NUMERICAL_ERRORS = (BetheError, OracleError, ScatteringError, TransverseError,
                    ArpackNoConvergence, np.linalg.LinAlgError, FloatingPointError)
SUBCOMMANDS = ("scatter", "transverse", "ll-spectrum", "branches", "bounds", "verify-2body",
               "sweep", "accept")


class Context:
    def __init__(self, cfg: Optional[RunConfig], out: Path, cache: Cache, workers: int):
        self.cfg, self.out, self.cache, self.workers = cfg, out, cache, workers
        self._mode = None

    @property
    def mode(self):
        if self._mode is None:
            self._mode = solve_transverse(self.cfg.transverse, self.cfg.transverse_grid)
        return self._mode

    @property
    def config_hash(self) -> Optional[str]:
        return digest(self.cfg.fragment()) if self.cfg else None

    def geometry(self) -> GeometryParams:
        geom = self.cfg.geometry
        if geom is None:
            raise ConfigError("geometry", "this subcommand needs a [geometry] section")
        if self.cfg.coupling is not None:
            geom = replace(geom, a=a_for_coupling(self.cfg.coupling, geom.r, self.mode))
        return geom

    def coupling(self) -> float:
        if self.cfg.coupling is not None:
            return self.cfg.coupling
        return effective_g(self.geometry(), self.mode)

    def emit(self, name: str, doc) -> Path:
        path = report.write_json(self.out / f"{name}.json", doc)
        print(path)
        return path


# ------------------------------------------------------------------ chains

def envelopes(E_1d, geom, mode, cfg: RunConfig):
    R0 = cfg.potential.range_R0
    upper, lower, notes = explicit_chains(geom, mode, R0, cfg.schedule)
    eta_L = lower.eta_L if lower is not None else math.inf
    eta_U = upper.eta_U if upper.vacuous is None else math.inf
    explicit = theorem1_envelope(E_1d, geom, mode, eta_L=min(eta_L, 1.0), eta_U=min(eta_U, 1.0),
                                 notes=notes)
    lower_valid = [bool(v and eta_L < 1) for v in explicit.valid_lower]
    power = theorem1_envelope(E_1d, geom, mode, C=cfg.C, D=cfg.D)
    power_lower_valid = [bool(v and power.eta_L < 1) for v in power.valid_lower]
    chains = {
        "upper": {"R": upper.R, "factor": upper.factor, "norm": upper.norm, "eta_U": upper.eta_U,
                  "induced_C": upper.induced_C, "terms": upper.terms, "vacuous": upper.vacuous},
        "lower": None if lower is None else {
            "params": vars(lower.params), "g": lower.g, "g_prime": lower.g_prime,
            "g_dprime": lower.g_dprime, "kinetic_factor": lower.kinetic_factor,
            "factors": lower.factors, "eta_L": lower.eta_L, "eta_L_additive": lower.eta_L_additive,
            "U_height": lower.U_height, "vacuous": lower.vacuous},
    }
    return {"explicit": explicit, "explicit_lower_valid": lower_valid, "power_law": power,
            "power_law_lower_valid": power_lower_valid, "chains": chains,
            "eta": (eta_L, eta_U)}


def _envelope_rows(env, lower_valid):
    for (k, E, lo, up, _, vu), vl in zip(env.rows(), lower_valid):
        yield k, E, lo, up, vl, vu


# -------------------------------------------------------------- subcommands

def cmd_scatter(ctx: Context) -> int:
    cfg = ctx.cfg
    sol = solve_zero_energy(cfg.potential)
    R = cfg.kernel_R * sol.edge
    k = kernels(build_jastrow(sol, R))
    doc = {"potential": cfg.potential.to_dict(), "scattering_length": sol.scattering_length,
           "residual": sol.residual, "edge": sol.edge,
           "kernels": {"R": R, "integral_h": k.integral_h, "integral_m": k.integral_m,
                       "sup_m": k.sup_m, "quad_error": k.quad_error},
           "bounds": kernel_bounds(sol.scattering_length, R)}
    sol.write_csv(ctx.out / "scattering_f0.csv")
    ctx.emit("scatter", report.make_report("scatter", doc, ctx.config_hash))
    return EXIT_OK


def cmd_transverse(ctx: Context) -> int:
    mode = ctx.mode
    mode.write_csv(ctx.out / "transverse_mode.csv")
    ctx.emit("transverse", report.make_report("transverse", mode.to_dict(), ctx.config_hash))
    return EXIT_OK


def _ll_values(ctx: Context):
    return ctx.cfg.g_values or (ctx.coupling(),)


def _ll(ctx: Context, g: float):
    geom = ctx.cfg.geometry
    if ctx.cfg.trap == "periodic":
        return ll_spectrum_periodic(geom.n, geom.ell, g, ctx.cfg.k_max)
    return ll_spectrum_trapped(geom.n, geom.ell, g, basis_size=ctx.cfg.basis_size,
                               k_max=ctx.cfg.k_max, ladder=ctx.cfg.ladder,
                               seed=int(ctx.config_hash[:8], 16))


def cmd_ll_spectrum(ctx: Context) -> int:
    if ctx.cfg.geometry is None:
        raise ConfigError("geometry", "ll-spectrum needs [geometry] n and ell")
    results = []
    for g in _ll_values(ctx):
        spec = _ll(ctx, g)
        spec.write_csv(ctx.out / f"spectrum_g{g:g}.csv")
        results.append(spec.to_dict())
    ctx.emit("ll_spectrum", report.make_report("ll-spectrum", results, ctx.config_hash))
    return EXIT_OK


def cmd_branches(ctx: Context) -> int:
    geom = ctx.cfg.geometry
    if geom is None:
        raise ConfigError("geometry", "branches needs [geometry] n and ell")
    results = []
    for g in _ll_values(ctx):
        br = excitation_branches(geom.n, geom.ell, g)
        br.write_csv(ctx.out / f"branches_g{g:g}.csv")
        results.append({"g": g, "n": geom.n, "ell": geom.ell, "ground": br.ground,
                        "p": br.p, "eps_I": br.eps_I, "eps_II": br.eps_II})
    ctx.emit("branches", report.make_report("branches", results, ctx.config_hash))
    return EXIT_OK


def cmd_bounds(ctx: Context) -> int:
    geom = ctx.geometry()
    g = effective_g(geom, ctx.mode)
    spec = _ll(ctx, g)
    env = envelopes(spec.energies, geom, ctx.mode, ctx.cfg)
    eta_L, eta_U = env["eta"]
    overlap = theorem2_bound(spec.energies, 1, geom, ctx.mode, eta_L=eta_L, eta_U=eta_U) \
        if len(spec.energies) > 1 else None
    report.write_csv(ctx.out / "envelope_explicit.csv", "envelope",
                     _envelope_rows(env["explicit"], env["explicit_lower_valid"]))
    report.write_csv(ctx.out / "envelope_power_law.csv", "envelope",
                     _envelope_rows(env["power_law"], env["power_law_lower_valid"]))
    doc = {"geometry": vars(geom), "g": g, "E_1d": spec.energies,
           "explicit": env["explicit"].to_dict(), "explicit_lower_valid": env["explicit_lower_valid"],
           "power_law": env["power_law"].to_dict(),
           "power_law_lower_valid": env["power_law_lower_valid"], "chains": env["chains"],
           "theorem2_ground": overlap.to_dict() if overlap else None}
    ctx.emit("bounds", report.make_report("bounds", doc, ctx.config_hash))
    return EXIT_OK


def _two_body(cfg: RunConfig, geom: GeometryParams, mode, seed_hash: str, dump: Optional[Path] = None) -> dict:
    t0 = time.perf_counter()
    if cfg.trap != "harmonic" or cfg.transverse.kind.value != "harmonic":
        raise ConfigError("longitudinal.trap", "the two-body oracle needs harmonic traps")
    tb = TwoBodyConfig(geom, cfg.potential, cfg.mesh, k_max=cfg.k_max, seed=int(seed_hash[:8], 16))
    spec = assemble_spectrum(tb, mode)
    env = envelopes(spec.E_1d, geom, mode, cfg)
    if dump is not None:
        op = com_separation(tb)[1]
        solve_relative(op, tb.rel_levels, cfg.mesh, cfg.potential.range_R0, tb.rng_seed).dump(dump)
    eta_L, eta_U = env["eta"]
    t2 = theorem2_bound(spec.E_1d, 1, geom, mode, eta_L=eta_L, eta_U=eta_U)
    return {"geometry": vars(geom), "spectrum": spec.to_dict(),
            "envelope": env["explicit"].to_dict(), "lower_valid": env["explicit_lower_valid"],
            "chains": env["chains"], "theorem2_ground": t2.to_dict(),
            "elapsed": time.perf_counter() - t0}


def cmd_verify_2body(ctx: Context, dump: bool = False) -> int:
    geom = ctx.geometry()
    if geom.n != 2:
        raise ConfigError("geometry.n", "verify-2body needs n = 2")
    key = {"verify-2body": ctx.cfg.fragment("potential", "transverse", "trap", "mesh", "spectrum",
                                            "schedule"), "geometry": vars(geom)}
    dump_path = ctx.out / "relative_vectors.npz" if dump else None
    res = ctx.cache.get_or_compute(key, lambda: _two_body(ctx.cfg, geom, ctx.mode, ctx.config_hash, dump_path))
    sp = res["spectrum"]
    report.write_csv(ctx.out / "oracle_levels.csv", "oracle",
                     ((k + 1, sp["total"][k], sp["excess"][k], sp["E_1d"][k], sp["overlaps"][k],
                       sp["grid_defect"][k]) for k in range(len(sp["total"]))))
    ctx.emit("verify_2body", report.make_report("verify-2body", res, ctx.config_hash))
    return EXIT_OK


def _sweep_worker(args):
    cfg, geom, mode, seed_hash = args
    try:
        return _two_body(cfg, geom, mode, seed_hash)
    except NUMERICAL_ERRORS + (ValueError,) as exc:
        return {"geometry": vars(geom), "failed": True, "error": f"{type(exc).__name__}: {exc}"}


def cmd_sweep(ctx: Context) -> int:
    cfg = ctx.cfg
    if cfg.sweep is None:
        raise ConfigError("sweep", "missing [sweep] section")
    n = cfg.geometry.n if cfg.geometry else 2
    geoms = cfg.sweep.geometries(n, ctx.mode)
    keys = [{"verify-2body": cfg.fragment("potential", "transverse", "trap", "mesh", "spectrum",
                                          "schedule"), "geometry": vars(g)} for g in geoms]
    results = [ctx.cache.get(digest(k)) for k in keys]
    todo = [i for i, r in enumerate(results) if r is None]
    jobs = [(cfg, geoms[i], ctx.mode, ctx.config_hash) for i in todo]
    if ctx.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(ctx.workers) as pool:
            computed = list(pool.map(_sweep_worker, jobs))
    else:
        computed = [_sweep_worker(j) for j in jobs]
    for i, res in zip(todo, computed):
        results[i] = res
        if not res.get("failed"):
            ctx.cache.put(digest(keys[i]), res)
    rows = []
    for geom, res in zip(geoms, results):
        if res.get("failed"):
            rows.append((geom.a_over_r, "nan", "nan", "nan", "nan", "nan", "nan"))
            continue
        sp, env = res["spectrum"], res["envelope"]
        lo = env["lower_k"][0] if res["lower_valid"][0] else "-inf"
        rows.append((geom.a_over_r, sp["excess"][0], sp["E_1d"][0], sp["excess"][0] / sp["E_1d"][0],
                     lo, env["upper_k"][0], sp["overlaps"][0]))
    report.write_csv(ctx.out / "sweep.csv", "sweep", rows)
    failed = sum(bool(r.get("failed")) for r in results)
    ctx.emit("sweep", report.make_report("sweep", results, ctx.config_hash, failed_points=failed))
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_accept(ctx: Context, only=None) -> int:
    results = acceptance.run_all(only, ctx.cache, ctx.workers, echo=print)
    report.write_csv(ctx.out / "acceptance.csv", "acceptance",
                     ((r.number, r.title, "PASS" if r.passed else "FAIL", r.elapsed, r.budget)
                      for r in results))
    ctx.emit("acceptance", report.make_report("accept", [r.to_dict() for r in results], ctx.config_hash,
                                              all_passed=all(r.passed for r in results)))
    return EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPTANCE


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dimred", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", type=Path, help="INI run configuration")
    p.add_argument("--out", type=Path, default=None, help="output directory (default: from config or ./out)")
    p.add_argument("--workers", type=int, default=None, help="parallel sweep points")
    p.add_argument("--no-cache", action="store_true", help="always recompute")
    p.add_argument("--cache-dir", type=Path, default=None, help="cache location (default: <out>/.cache)")
    p.add_argument("--criteria", type=str, default=None, help="accept: comma-separated subset, e.g. 1,2,10")
    p.add_argument("--dump-vectors", action="store_true", help="verify-2body: write relative eigenvectors (npz)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config) if args.config else None
        if cfg is None and args.subcommand != "accept":
            raise ConfigError("--config", f"{args.subcommand} needs a configuration file")
        out = args.out or (cfg.output if cfg else Path("out"))
        workers = args.workers or (cfg.workers if cfg else 1)
        if workers < 1:
            raise ConfigError("--workers", "must be >= 1")
        cache = NullCache() if args.no_cache else Cache(args.cache_dir or out / ".cache")
        ctx = Context(cfg, out, cache, workers)
        out.mkdir(parents=True, exist_ok=True)
        if args.subcommand == "accept":
            only = None
            if args.criteria:
                try:
                    only = [int(x) for x in args.criteria.split(",")]
                except ValueError:
                    raise ConfigError("--criteria", "expected integers") from None
                bad = [c for c in only if c not in acceptance.CRITERIA]
                if bad:
                    raise ConfigError("--criteria", f"unknown criteria {bad}")
            return cmd_accept(ctx, only)
        if args.subcommand == "verify-2body":
            return cmd_verify_2body(ctx, args.dump_vectors)
        handler = {"scatter": cmd_scatter, "transverse": cmd_transverse,
                   "ll-spectrum": cmd_ll_spectrum, "branches": cmd_branches,
                   "bounds": cmd_bounds, "sweep": cmd_sweep}[args.subcommand]
        return handler(ctx)
    except ConfigError as exc:
        print(f"dimred: configuration error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NUMERICAL_ERRORS as exc:
        print(f"dimred: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"dimred: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
