"""Command-line batch front end.

Every run is driven by one JSON config; a few scalar flags override it.
Outputs are assembled in memory and written with write-then-rename once
the whole command has succeeded, so a failing run leaves no partial files.

Exit codes: 0 success, 1 configuration error, 2 solver failure,
3 internal failure, 4 verification ran but a pass flag is false.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .asymptotics import (f_recurrence, order_estimate, phi_hat_norm, phi_of_sigma,
                          rate_fit, remainders, report_dumps, S_quadrature,
                          thm41_alphas, thm51_check, window_increment)
from .errors import AdmissibilityError, SolverError
from .galerkin import assemble, oracle_spectrum
from .potential import (PotentialSpec, constant_q, delta_q, from_dict, sample_ball,
                        to_dict)
from .prufer import (DIRICHLET, DIRICHLET_NEUMANN, SpectralProblem, eigenvalues,
                     normalize_bc)
from .sensitivity import asymptotic_gap, eigenvalue_derivative, fd_check

EXIT_CONFIG, EXIT_SOLVER, EXIT_INTERNAL, EXIT_FAILED = 1, 2, 3, 4
THEOREMS = ("main", "thm21", "thm41", "thm51")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    potential: PotentialSpec | None = None
    ensemble: dict | None = None
    bcs: tuple = (DIRICHLET, DIRICHLET_NEUMANN)
    n_max: int = 20
    theorem: str = "main"
    theta: float = 1.0
    m: int = 2
    abs_tol: float = 1e-11
    rel_tol: float = 1e-11
    oracle_tol: float = 1e-10
    out: str = "out"
    use_galerkin: bool = False
    dump_matrix: bool = False
    rho: tuple = (40.0, 80.0)
    k_list: tuple = (1, 2, 3)
    direction: PotentialSpec | None = None
    fd_step: float = 1e-4
    r_sweep: tuple = ()

    def members(self) -> list[tuple[str, PotentialSpec]]:
        """Named potentials: the single one, or the ensemble samples."""
        if self.ensemble is None:
            return [("spectrum", self.potential)]
        e = self.ensemble
        return [(f"member{i:03d}_seed{e['seed'] + i}",
                 sample_ball(e["theta"], e["R"], K=e.get("K", 64), seed=e["seed"] + i))
                for i in range(e["count"])]


def _potential_from(d) -> PotentialSpec:
    if isinstance(d, str):
        d = {"kind": d}
    if not isinstance(d, dict):
        raise ConfigError("potential must be an object")
    kind = d.get("kind")
    if kind == "zero":
        return PotentialSpec.zero()
    if kind == "constant_q":
        return constant_q(float(d["c"]))
    if kind == "delta_q":
        return delta_q(float(d["c"]), float(d.get("x0", np.pi / 2)))
    return from_dict(d)


def parse_config(raw: dict, args=None) -> RunConfig:
    """Validate a config mapping and apply command-line overrides."""
    try:
        cfg = RunConfig()
        if "ensemble" in raw:
            e = dict(raw["ensemble"])
            e = {"theta": float(e["theta"]), "R": float(e["R"]), "count": int(e["count"]),
                 "seed": int(e.get("seed", 0)), "K": int(e.get("K", 64))}
            if e["count"] < 1:
                raise ConfigError("ensemble count must be >= 1")
            cfg.ensemble = e
        elif "potential" in raw:
            cfg.potential = _potential_from(raw["potential"])
        else:
            raise ConfigError("config needs 'potential' or 'ensemble'")
        bc = raw.get("bc", [DIRICHLET, DIRICHLET_NEUMANN])
        cfg.bcs = tuple(normalize_bc(b) for b in ([bc] if isinstance(bc, str) else bc))
        cfg.n_max = int(raw.get("n_max", cfg.n_max))
        cfg.theorem = raw.get("theorem", cfg.theorem)
        cfg.theta = float(raw.get("theta", cfg.ensemble["theta"] if cfg.ensemble else 1.0))
        cfg.m = int(raw.get("m", cfg.m))
        tol = raw.get("tolerances", {})
        cfg.abs_tol = float(tol.get("abs_tol", cfg.abs_tol))
        cfg.rel_tol = float(tol.get("rel_tol", cfg.rel_tol))
        cfg.oracle_tol = float(tol.get("oracle_tol", cfg.oracle_tol))
        cfg.out = raw.get("out", cfg.out)
        cfg.use_galerkin = bool(raw.get("galerkin", False))
        cfg.dump_matrix = bool(raw.get("dump_matrix", False))
        cfg.rho = tuple(float(r) for r in raw.get("rho", cfg.rho))
        cfg.k_list = tuple(int(k) for k in raw.get("k_list", cfg.k_list))
        if "direction" in raw:
            cfg.direction = _potential_from(raw["direction"])
        cfg.fd_step = float(raw.get("fd_step", cfg.fd_step))
        cfg.r_sweep = tuple(float(r) for r in raw.get("R_sweep", ()))
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    if args is not None:
        if args.nmax is not None:
            cfg.n_max = args.nmax
        if args.out is not None:
            cfg.out = args.out
        if args.bc is not None:
            cfg.bcs = tuple(normalize_bc(b) for b in args.bc.split(","))
        if args.seed is not None:
            if cfg.ensemble is None:
                raise ConfigError("--seed needs an ensemble config")
            cfg.ensemble["seed"] = args.seed
    if cfg.n_max < 1:
        raise ConfigError("n_max must be >= 1")
    if cfg.theorem not in THEOREMS:
        raise ConfigError(f"theorem must be one of {THEOREMS}")
    if min(cfg.abs_tol, cfg.rel_tol, cfg.oracle_tol) <= 0:
        raise ConfigError("tolerances must be positive")
    return cfg


# -- per-member work (top level so worker processes can import it) ----------


def _problem(cfg: RunConfig, sigma, bc) -> SpectralProblem:
    return SpectralProblem(sigma, bc, cfg.abs_tol, cfg.rel_tol)


def _spectrum(cfg: RunConfig, sigma, bc, force_oracle=False):
    p = _problem(cfg, sigma, bc)
    if force_oracle or cfg.use_galerkin or sigma.complex_valued:
        return oracle_spectrum(p, cfg.n_max, cfg.oracle_tol)
    return eigenvalues(p, cfg.n_max)


def _both(cfg, sigma):
    return (_spectrum(cfg, sigma, DIRICHLET), _spectrum(cfg, sigma, DIRICHLET_NEUMANN))


def _solve_member(args):
    cfg, name, sigma, oracle = args
    files = {}
    for bc in cfg.bcs:
        s = _spectrum(cfg, sigma, bc, force_oracle=oracle)
        stem = f"{'oracle_' if oracle else ''}{name}_{bc}"
        files[stem + ".csv"] = s.to_csv()
        d = s.to_dict()
        d["potential"] = to_dict(sigma)
        files[stem + ".json"] = json.dumps(d, sort_keys=True)
        if oracle and cfg.dump_matrix:
            m = assemble(_problem(cfg, sigma, bc), int(s.meta["N"]))
            files[stem + "_matrix.csv"] = m.to_csv()
    return files


def _phi_member(args):
    cfg, sigma = args
    d, dn = _both(cfg, sigma)
    r = remainders(d, dn, cfg.theta)
    norm, h = phi_hat_norm(sigma, r, cfg.theta)
    return norm, [h.fit_lo, h.fit_hi], phi_of_sigma(sigma, r)


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(i) for i in items]


# -- subcommands ------------------------------------------------------------


def cmd_solve(cfg: RunConfig, jobs: int = 1, oracle: bool = False) -> tuple[dict, bool]:
    files = {}
    for out in _map(_solve_member, [(cfg, n, s, oracle) for n, s in cfg.members()], jobs):
        files.update(out)
    return files, True


def cmd_oracle(cfg: RunConfig, jobs: int = 1):
    return cmd_solve(cfg, jobs, oracle=True)


def _verify_main(cfg, members, jobs):
    out = _map(_phi_member, [(cfg, s) for _, s in members], jobs)
    rows = [{"member": n, "hat_norm": v, "fit_window": w} for (n, _), (v, w, _) in zip(members, out)]
    finite = all(np.isfinite(r["hat_norm"]) for r in rows)
    return {"results": rows, "pass_flags": {"phi_norms_finite": bool(finite)}}


def _verify_thm21(cfg, members, jobs):
    out = _map(_phi_member, [(cfg, s) for _, s in members], jobs)
    rows, good = [], 0
    K = 2 * cfg.n_max
    for (name, _), (_, _, phi) in zip(members, out):
        lo = window_increment(phi, 2 * cfg.theta, K // 4, K // 2)
        hi = window_increment(phi, 2 * cfg.theta, K // 2, K)
        good += hi < lo
        rows.append({"member": name, "windows": [[K // 4, K // 2], [K // 2, K]],
                     "increments": [lo, hi], "decreasing": bool(hi < lo)})
    frac = good / len(rows)
    return {"results": rows, "fraction_decreasing": frac,
            "pass_flags": {"window_increments_decrease": bool(frac >= 0.9)}}


def _verify_thm41(cfg, members, jobs):
    rows, flags = [], []
    for name, sigma in members:
        d, dn = _both(cfg, sigma)
        alpha = thm41_alphas(sigma, d, dn)
        lo = max(1, len(alpha) // 10)
        slope, _ = rate_fit(alpha, lo, len(alpha))
        flags.append(slope <= -0.5)
        rows.append({"member": name, "slope": slope, "fit_window": [lo, len(alpha)],
                     "alpha_l2": float(np.linalg.norm(alpha)), "alpha": alpha})
    return {"results": rows, "pass_flags": {"alpha_slope_le_-0.5": bool(all(flags))}}


def _verify_thm51(cfg, members, jobs):
    rows, flags = [], []
    for name, sigma in members:
        d, dn = _both(cfg, sigma)
        rep = thm51_check(sigma, d, dn, cfg.m)
        rep["member"] = name
        flags.append(all(rep["pass_flags"].values()))
        rows.append(rep)
    return {"results": rows, "pass_flags": {"all_members": bool(all(flags))}}


def cmd_verify(cfg: RunConfig, jobs: int = 1):
    members = cfg.members()
    body = {"main": _verify_main, "thm21": _verify_thm21, "thm41": _verify_thm41,
            "thm51": _verify_thm51}[cfg.theorem](cfg, members, jobs)
    report = {"theorem": cfg.theorem,
              "inputs": {"n_max": cfg.n_max, "theta": cfg.theta, "m": cfg.m,
                         "ensemble": cfg.ensemble,
                         "potential": None if cfg.potential is None else to_dict(cfg.potential)},
              **body}
    ok = all(report["pass_flags"].values())
    return {f"verify_{cfg.theorem}.json": report_dumps(report)}, ok


def cmd_ensemble(cfg: RunConfig, jobs: int = 1):
    if cfg.ensemble is None:
        raise ConfigError("ensemble command needs an ensemble config")

    def stats(c):
        norms = [v for v, _, _ in _map(_phi_member, [(c, s) for _, s in c.members()], jobs)]
        half = norms[: max(1, len(norms) // 2)]
        return {"norms": norms, "max": max(norms), "mean": float(np.mean(norms)),
                "max_first_half": max(half),
                "max_ratio_half_to_full": max(half) / max(norms) if max(norms) else 1.0}

    report = {"ensemble": cfg.ensemble, "n_max": cfg.n_max, "theta": cfg.theta,
              "result": stats(cfg)}
    if cfg.r_sweep:
        sweep = []
        for R in cfg.r_sweep:
            c = parse_config({"ensemble": {**cfg.ensemble, "R": R}, "n_max": cfg.n_max,
                              "theta": cfg.theta})
            sweep.append({"R": R, "max": stats(c)["max"]})
        report["R_sweep"] = sweep
        maxes = [s["max"] for s in sweep]
        report["pass_flags"] = {"max_nondecreasing_in_R":
                                bool(all(a <= b for a, b in zip(maxes, maxes[1:])))}
    return {"ensemble.json": report_dumps(report)}, True


def cmd_expand(cfg: RunConfig, jobs: int = 1):
    sigma = cfg.potential
    if sigma is None:
        raise ConfigError("expand needs a single potential")
    est = order_estimate(sigma, cfg.m, cfg.rho)
    quad = {str(r): [S_quadrature(sigma, r, n) for n in range(cfg.m + 2)] for r in cfg.rho}
    table = f_recurrence(sigma, cfg.m)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = sorted(table.values)
    w.writerow(["x"] + [f"f_{p}_{j}" for p, j in keys])
    for i, x in enumerate(table.grid_x):
        w.writerow([f"{x:.17g}"] + [f"{float(np.real(table.values[k][i])):.17g}" for k in keys])
    report = {"m": cfg.m, "order_estimate": est, "S_quadrature": quad,
              "pass_flags": {"order_ge_m_plus_1.5": bool(est["order"] >= cfg.m + 1.5)}}
    return {"expand.json": report_dumps(report), "ftable.csv": buf.getvalue()}, True


def cmd_sensitivity(cfg: RunConfig, jobs: int = 1):
    sigma = cfg.potential
    if sigma is None:
        raise ConfigError("sensitivity needs a single potential")
    h = cfg.direction if cfg.direction is not None else PotentialSpec.fourier(0.0, [], [0.0, 1.0])
    rows = []
    for bc in cfg.bcs:
        for k in cfg.k_list:
            d, ds = eigenvalue_derivative(sigma, h, k, bc)
            err = fd_check(sigma, h, k, cfg.fd_step, bc)
            rows.append({"bc": bc, "k": k, "dlambda": d, "ds": ds, "fd_error": err})
    gaps = {bc: asymptotic_gap(_problem(cfg, sigma, bc), cfg.theta, cfg.k_list)
            for bc in cfg.bcs}
    report = {"direction": to_dict(h), "fd_step": cfg.fd_step, "derivatives": rows,
              "gaps": gaps}
    return {"sensitivity.json": report_dumps(report)}, True


COMMANDS = {"solve": cmd_solve, "oracle": cmd_oracle, "verify": cmd_verify,
            "ensemble": cmd_ensemble, "expand": cmd_expand, "sensitivity": cmd_sensitivity}


# -- plumbing ---------------------------------------------------------------


def write_atomic(directory: str, files: dict) -> None:
    os.makedirs(directory, exist_ok=True)
    for name in sorted(files):
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(files[name])
            os.replace(tmp, os.path.join(directory, name))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slspec", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("config", help="path to a JSON run config")
        sp.add_argument("--nmax", type=int)
        sp.add_argument("--out")
        sp.add_argument("--bc", help="comma-separated: dirichlet,dirichlet_neumann")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--jobs", type=int, default=int(os.environ.get("SLSPEC_JOBS", "1")))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
        cfg = parse_config(raw, args)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        files, ok = COMMANDS[args.command](cfg, max(1, args.jobs))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, AdmissibilityError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        print(f"internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    write_atomic(cfg.out, files)
    return 0 if ok else EXIT_FAILED


def main_exit() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
