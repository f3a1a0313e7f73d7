"""Command line: validate, code, pressure, free-energy, spectrum, delta.

Results go to CSV or JSON files with a schema header (column names, cap,
tolerances, timestamp); the spectrum command additionally emits a
deterministic two-panel SVG.  Exit codes: 0 success, 1 computational
error, 2 configuration error; errors are written to stderr as a
machine-readable JSON object.

Groups with a cusp at infinity work directly (the engine evaluates
boundary derivatives in a chart covering the whole circle); if a
presentation with all-finite data is preferred, conjugate it first with
cuspwind.fuchsian.conjugate_config.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys

import numpy as np

from . import gdms, spectrum as sp
from .coding import (
    arc_decomposition,
    code_point,
    log_plus,
    poincare_divergence_probe,
    random_block_word,
)
from .config import ConfigError, RunConfig, config_from_preset, load_config
from .errors import CuspwindError
from .figures import emit_figure
from .fuchsian import build_group
from .induced import conjugacy_check, fuchsian_system, primitivity_witness
from .presets import PRESETS


def _common(parser):
    parser.add_argument("--config", help="path to a run configuration file")
    parser.add_argument("--preset", choices=sorted(PRESETS),
                        help="built-in presentation")
    parser.add_argument("--cap", type=int, help="parabolic exponent cap")
    parser.add_argument("--beta-min", type=float)
    parser.add_argument("--beta-max", type=float)
    parser.add_argument("--beta-steps", type=int)
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--format", choices=("csv", "json"), dest="fmt")


def build_parser():
    p = argparse.ArgumentParser(
        prog="cuspwind",
        description="Cusp-winding multifractal spectra of free Fuchsian groups")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("validate", "run the presentation and coding invariant suite"),
        ("code", "print the block coding of a boundary point"),
        ("pressure", "pressure grid over (t, beta)"),
        ("free-energy", "free energy curve t(beta)"),
        ("spectrum", "spectrum curve f(alpha) plus SVG figure"),
        ("delta", "limit-set dimension delta and bounded-type delta_c"),
    ):
        q = sub.add_parser(name, help=helptext)
        _common(q)
        if name == "code":
            q.add_argument("--point", type=float, required=True)
            q.add_argument("--blocks", type=int, default=6)
        if name == "pressure":
            q.add_argument("--t-min", type=float, default=0.6)
            q.add_argument("--t-max", type=float, default=1.4)
            q.add_argument("--t-steps", type=int, default=9)
    return p


def resolve_config(args) -> RunConfig:
    if args.config and args.preset:
        raise ConfigError("give either --config or --preset, not both")
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        cfg = config_from_preset(args.preset)
    else:
        raise ConfigError("need --config PATH or --preset NAME")
    for attr, key in (("cap", "cap"), ("beta_min", "beta_min"),
                      ("beta_max", "beta_max"), ("beta_steps", "beta_steps"),
                      ("seed", "seed"), ("fmt", "out_format")):
        val = getattr(args, attr, None)
        if val is not None:
            setattr(cfg, key, val)
    cfg.out_dir = args.out
    return cfg.validate()


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {
        "group": cfg.name,
        "cap": cfg.cap,
        "pressure_tol": cfg.pressure_tol,
        "seed": cfg.seed,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    meta.update(extra)
    return meta


def write_csv(path: str, meta: dict, columns: dict) -> None:
    names = list(columns)
    rows = len(columns[names[0]])
    with open(path, "w", encoding="utf-8") as fh:
        for k, v in meta.items():
            fh.write("# %s = %s\n" % (k, v))
        fh.write(",".join(names) + "\n")
        for i in range(rows):
            fh.write(",".join("%.17g" % float(columns[n][i]) for n in names))
            fh.write("\n")


def write_json(path: str, meta: dict, data: dict) -> None:
    def clean(obj):
        if isinstance(obj, np.ndarray):
            return [clean(float(x)) for x in obj]
        if isinstance(obj, (np.floating, np.integer)):
            obj = float(obj)
        if isinstance(obj, float) and not math.isfinite(obj):
            return repr(obj)  # strict-JSON friendly: "inf" / "-inf" / "nan"
        if isinstance(obj, list):
            return [clean(v) for v in obj]
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()}
        return obj

    payload = {"meta": meta, "data": {k: clean(v) for k, v in data.items()}}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def write_result(cfg: RunConfig, stem: str, meta: dict, columns: dict) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    if cfg.out_format == "json":
        path = os.path.join(cfg.out_dir, stem + ".json")
        write_json(path, meta, columns)
    else:
        path = os.path.join(cfg.out_dir, stem + ".csv")
        write_csv(path, meta, columns)
    return path


# --- commands ---------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> int:
    pres = build_group(cfg.group_config())
    rng = np.random.default_rng(cfg.seed)
    checks = []
    checks.append(("build+markov+horoballs", True, "validated by construction"))

    c0 = pres.constant_c0(64).value
    upper_const = math.log(4.0) + c0
    violations = 0
    worst = math.inf
    for _ in range(100):
        w = random_block_word(pres, rng, int(rng.integers(3, 12)))
        dec = arc_decomposition(pres, w)
        if not (sum(dec.lengths) <= dec.total + 1e-9
                and dec.total <= sum(dec.lengths) + c0 + 1e-9):
            violations += 1
        for k, (l, a) in enumerate(zip(dec.lengths, dec.windings)):
            if k >= 1 and l < 2.0 * log_plus(a) + pres.c1 - 1e-9:
                violations += 1
            if a >= 2 and l < 2.0 * math.log(a) + math.log(3.0) - 1e-9:
                violations += 1
            if l > 2.0 * math.log(a + 1) + upper_const + 1e-9:
                violations += 1
            worst = min(worst, 2.0 * math.log(a + 1) + upper_const - l)
    checks.append(("arc sandwich and winding bounds", violations == 0,
                   "%d violations over 100 words" % violations))

    rep = conjugacy_check(pres, samples=40, letters_each=8, seed=cfg.seed)
    checks.append(("induced conjugacy", rep.ok,
                   "%d mismatches" % len(rep.mismatches)))
    ell, n_pairs = primitivity_witness(pres)
    checks.append(("finite irreducibility witness", ell is not None,
                   "connector length %s over %d pairs" % (ell, n_pairs)))

    ok = all(c[1] for c in checks)
    for name, passed, detail in checks:
        print("%-36s %s (%s)" % (name, "ok" if passed else "FAIL", detail))
    print("C0 = %.6f  C1 = %.6f  C2 = %.6f"
          % (c0, pres.c1, pres.constant_c2()))
    return 0 if ok else 1


def cmd_code(cfg: RunConfig, point: float, blocks: int) -> int:
    pres = build_group(cfg.group_config())
    word = code_point(pres, point, blocks)
    winds = word.windings(pres)
    print("point %.12g -> %d blocks" % (point, len(word)))
    for (label, exp), a in zip(word.blocks, winds):
        print("  %s^%d  winding %d" % (label, exp, a))
    print("windings:", list(winds))
    return 0


def cmd_pressure(cfg: RunConfig, t_min, t_max, t_steps) -> int:
    pres = build_group(cfg.group_config())
    sysm = fuchsian_system(pres, cfg.cap)
    ts, bs, ps, series = [], [], [], []
    betas = np.linspace(cfg.beta_min, cfg.beta_max, cfg.beta_steps)
    for beta in betas:
        for t in np.linspace(t_min, t_max, t_steps):
            res = gdms.pressure(sysm, float(t), float(beta), method="collapsed")
            ts.append(t)
            bs.append(beta)
            ps.append(res.value)
            series.append(res.letter_series)
    path = write_result(cfg, "pressure", _meta(cfg),
                        {"t": ts, "beta": bs, "pressure": ps,
                         "letter_series_log": series})
    print(path)
    return 0


def _curve(cfg: RunConfig):
    pres = build_group(cfg.group_config())
    sysm = fuchsian_system(pres, cfg.cap)
    curve = gdms.free_energy_curve(sysm, cfg.betas(), tol=cfg.pressure_tol)
    curve.validate()
    return pres, sysm, curve


def cmd_free_energy(cfg: RunConfig) -> int:
    _, _, curve = _curve(cfg)
    path = write_result(cfg, "free_energy", _meta(cfg),
                        {"beta": curve.betas, "t": curve.t, "r": curve.r,
                         "residual": curve.residuals})
    print(path)
    return 0


def cmd_spectrum(cfg: RunConfig) -> int:
    pres, sysm, curve = _curve(cfg)
    spec = sp.spectrum(curve)
    spec.validate()
    restricted = fuchsian_system(pres, 2, restricted=True)
    delta_c = gdms.free_energy(restricted, 0.0, tail=False).t
    path = write_result(
        cfg, "spectrum",
        _meta(cfg, delta_c=delta_c, alpha0=spec.alpha0, f0=spec.f0,
              f1=spec.f1),
        {"alpha": spec.alphas, "f": spec.f, "beta_source": spec.beta_source,
         "residual": spec.residuals})
    svg_path = os.path.join(cfg.out_dir, "spectrum.svg")
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(emit_figure(curve, spec, delta_c, title=cfg.name))
    print(path)
    print(svg_path)
    return 0


def cmd_delta(cfg: RunConfig) -> int:
    pres = build_group(cfg.group_config())
    sysm = fuchsian_system(pres, cfg.cap)
    delta = gdms.free_energy(sysm, 0.0, tol=cfg.pressure_tol).t
    restricted = fuchsian_system(pres, 2, restricted=True)
    delta_c = gdms.free_energy(restricted, 0.0, tail=False).t
    below = poincare_divergence_probe(pres, delta - 0.05)
    above = poincare_divergence_probe(pres, delta + 0.05)
    probe = {
        "s_below": below["s"], "ratio_below": below["ratio"],
        "extrapolated_below": below["extrapolated"],
        "s_above": above["s"], "ratio_above": above["ratio"],
        "extrapolated_above": above["extrapolated"],
    }
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, "delta.json")
    write_json(path, _meta(cfg), {
        "delta": delta, "delta_c": delta_c, "poincare_probe": probe,
        "delta_minus_delta_c": delta - delta_c,
    })
    print(path)
    print(json.dumps({"delta": delta, "delta_c": delta_c}))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "code":
            return cmd_code(cfg, args.point, args.blocks)
        if args.command == "pressure":
            return cmd_pressure(cfg, args.t_min, args.t_max, args.t_steps)
        if args.command == "free-energy":
            return cmd_free_energy(cfg)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "delta":
            return cmd_delta(cfg)
        raise ConfigError("unknown command %r" % args.command)
    except (ConfigError, KeyError, FileNotFoundError) as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    except CuspwindError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
