"""Batch command-line surface: every subcommand reads a config (JSON file
plus overriding flags), runs one experiment family, writes JSON reports and
CSV curves (optionally SVG plots) into --out-dir, and exits 0 only if all
enabled assertions pass.  A FAILED marker is left behind on any failure so
partial runs are recognizable."""
from __future__ import annotations

import argparse
import json
import math
import sys
import traceback
from pathlib import Path

import numpy as np

from . import __version__
from ._par import par_map, thread_cap
from .democracy import (AlphaScanReport, alpha_exponent, besov_democracy_exact,
                        block_family, block_norm_closed_form, converse_alpha_scan,
                        democracy_ratio, lemma31_check, random_index_set,
                        sample_point_in, unit_atom_sum)
from .demo import decay_demo
from .frame import (ShearletSystem2D, analyze, grid_norm2, parseval_defect,
                    random_bandlimited, synthesize)
from .gridio import fmt, read_coeffs, read_grid, write_coeffs, write_csv_grid
from .indices import IndexSet
from .interpolate import (SpacePair, besov_space, block_norm_interpolation_check,
                          identical_pair_constant, interp_norm, k_envelope,
                          envelope_value, scheme_interpolation_check)
from .rnla import (ApproxParams, jackson_bernstein_check, sigma_curve,
                   single_atom_ratios)
from .spaces import SpaceParams, besov_norm, canonical_weight, lorentz_norm, tl_norm


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "__dict__"):
        return obj.__dict__
    return str(obj)


def write_json(path: Path, payload):
    path.write_text(json.dumps(payload, sort_keys=True, indent=1,
                               default=_json_default) + "\n")


def write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(x) if isinstance(x, float) else str(x)
                              for x in row))
    path.write_text("\n".join(lines) + "\n")


def maybe_plot(out_dir: Path, name: str, curves, xlabel: str, ylabel: str,
               enabled: bool, logscale: bool = True):
    if not enabled:
        return None
    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(5, 4))
    for label, xs, ys in curves:
        ax.plot(xs, ys, marker="o", markersize=3, label=label)
    if logscale:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    path = out_dir / f"{name}.svg"
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
    return str(path)


def _rand_coeff_corpus(seed: int, count: int, size_lo: int, size_hi: int,
                       j_max: int = 4, complex_amp: bool = True):
    rng = np.random.default_rng(seed)
    corpus = []
    for _ in range(count):
        gam = random_index_set(rng, int(rng.integers(size_lo, size_hi + 1)),
                               j_max=j_max)
        if complex_amp:
            corpus.append({i: complex(rng.normal(), rng.normal()) for i in gam})
        else:
            corpus.append({i: float(rng.normal()) for i in gam})
    return corpus


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_frame_check(cfg, out):
    n, j_max = cfg["n"], cfg["jmax"]
    system = ShearletSystem2D(n, j_max, cfg["order"], close_top=not cfg["open_top"])
    rep = parseval_defect(system)
    rng = np.random.default_rng(cfg["seed"])
    worst_rt, worst_energy = 0.0, 0.0
    for _ in range(cfg["trials"]):
        f = random_bandlimited(system, rng)
        co = analyze(f, system)
        g = synthesize(co)
        nf = grid_norm2(f)
        worst_rt = max(worst_rt, math.sqrt(grid_norm2(f - g) / nf))
        worst_energy = max(worst_energy, abs(co.energy() - nf) / nf)
    ok = (rep.overall <= cfg["parseval_tol"] and worst_rt <= cfg["roundtrip_tol"]
          and worst_energy <= cfg["roundtrip_tol"])
    payload = {
        "n": n, "j_max": j_max, "order": cfg["order"],
        "close_top": not cfg["open_top"],
        "resolvable_bound": system.resolvable_bound,
        "parseval_defect": rep.overall, "interior_defect": rep.interior,
        "seam_defect": rep.seam, "beyond_resolvable": rep.beyond,
        "roundtrip_rel_error_max": worst_rt,
        "energy_rel_error_max": worst_energy,
        "trials": cfg["trials"], "passed": ok,
    }
    write_json(out / "frame_check.json", payload)
    return ok


def cmd_transform(cfg, out):
    img = read_grid(cfg["input"])
    n = img.shape[0]
    if img.shape != (n, n):
        raise ValueError("input grid must be square")
    system = ShearletSystem2D(n, cfg["jmax"], cfg["order"])
    coeffs = analyze(img, system)
    sparse = coeffs.to_sparse(cfg["threshold"])
    write_coeffs(out / "coefficients.txt", sparse)
    payload = {"n": n, "j_max": cfg["jmax"], "kept": len(sparse),
               "total": coeffs.total_count(), "threshold": cfg["threshold"],
               "input_norm2": grid_norm2(img), "passed": True}
    write_json(out / "transform.json", payload)
    return True


def cmd_norms(cfg, out):
    seq = read_coeffs(cfg["coeffs"]) if cfg.get("coeffs") else {}
    par = SpaceParams(cfg["s"], cfg["p"], cfg["q"])
    records = []
    b = besov_norm(seq, par)
    records.append({"space": "block", "params": [par.s, par.p, par.q],
                    "value": b, "method": "direct", "defect": 0.0})
    if par.p != math.inf:
        cone_count = sum(1 for idx in seq if idx.kind != "coarse")
        method = "exact_overlay" if cone_count <= 5000 else "grid"
        f_val = tl_norm(seq, par, method=method, grid_m=cfg["grid_m"])
        f_grid = tl_norm(seq, par, method="grid", grid_m=cfg["grid_m"]) if seq else 0.0
        records.append({"space": "integral", "params": [par.s, par.p, par.q],
                        "value": f_val, "method": method,
                        "defect": abs(f_val - f_grid) / max(f_val, 1e-300)})
    u = canonical_weight(cfg["s"], cfg["p"])
    lz = lorentz_norm(seq, u, cfg["beta"], cfg["p"], cfg["mu"])
    records.append({"space": "lorentz", "params": [cfg["p"], cfg["mu"], cfg["beta"]],
                    "value": lz, "method": "rearrangement", "defect": 0.0})
    write_json(out / "norms.json", {"records": records, "passed": True})
    return True


def cmd_democracy(cfg, out):
    par1 = SpaceParams(cfg["s1"], cfg["p1"], cfg["q1"])
    par2 = SpaceParams(cfg["s2"], cfg["p2"], cfg["q2"])
    rows = []
    ok = True

    # exact identity on the p=q scale
    rng = np.random.default_rng(cfg["seed"])
    worst = 0.0
    par1_exact = SpaceParams(cfg["s1"], cfg["p1"], cfg["p1"])
    for _ in range(cfg["corpus"]):
        gam = random_index_set(rng, int(rng.integers(3, cfg["max_size"] + 1)))
        _, _, defect = besov_democracy_exact(gam, par1_exact, par2)
        worst = max(worst, defect)
    ok &= worst <= 1e-10

    # block family closed form
    block_worst = 0.0
    for j in range(0, 3):
        for nn in (1, 2, 3):
            blk = block_family(j, min(1, 2 ** j), nn)
            norm = tl_norm(unit_atom_sum(blk, par2), par1)
            ref = block_norm_closed_form(j, nn, par1, par2)
            block_worst = max(block_worst, abs(norm - ref) / ref)
    ok &= block_worst <= 1e-6

    # calibrated two-sided band, held-out stability
    def band(seed):
        r = np.random.default_rng(seed)
        lo, hi = math.inf, 0.0
        for _ in range(cfg["corpus"]):
            gam = random_index_set(r, int(r.integers(3, cfg["max_size"] + 1)))
            rep = democracy_ratio(gam, par1, par2)
            rows.append(rep.__dict__)
            lo = min(lo, rep.lower_ratio)
            hi = max(hi, rep.upper_ratio)
        return lo, hi

    if par1.p != par1.q:
        cal_lo, cal_hi = band(cfg["seed"])
        hold_lo, hold_hi = band(cfg["seed"] + 1)
        drift = max(cal_lo / hold_lo, hold_lo / cal_lo,
                    cal_hi / hold_hi, hold_hi / cal_hi)
        ok &= drift <= 1.10
    else:
        cal_lo = cal_hi = hold_lo = hold_hi = drift = 1.0

    scan = converse_alpha_scan(par1 if par1.p != par1.q else SpaceParams(cfg["s1"], cfg["p1"], 2 * cfg["p1"]), par2)
    (out / "democracy_corpus.jsonl").write_text(
        "\n".join(json.dumps(r, sort_keys=True, default=_json_default) for r in rows) + "\n")
    payload = {
        "alpha": alpha_exponent(par1, par2),
        "exact_identity_worst_defect": worst,
        "block_closed_form_worst": block_worst,
        "band_calibration": [cal_lo, cal_hi],
        "band_holdout": [hold_lo, hold_hi],
        "band_drift": drift,
        "alpha_window": [scan.window_lo, scan.window_hi],
        "passed": bool(ok),
    }
    write_json(out / "democracy.json", payload)
    return ok


def cmd_lemma31(cfg, out):
    rng = np.random.default_rng(cfg["seed"])
    gammas = cfg["gammas"]
    results = []
    ok = True
    for gexp in gammas:
        total_viol = 0
        checked = 0
        for _ in range(cfg["sets"]):
            gam = random_index_set(rng, int(rng.integers(5, cfg["max_size"] + 1)))
            members = list(gam)
            pts = [sample_point_in(members[int(rng.integers(0, len(members)))], rng)
                   for _ in range(cfg["samples"])]
            rep = lemma31_check(gam, gexp, pts)
            total_viol += len(rep.violations)
            checked += rep.samples
        results.append({"gamma": gexp, "samples": checked,
                        "violations": total_viol, "constant": rep.constant})
        ok &= total_viol == 0
    write_json(out / "lemma31.json", {"cases": results, "passed": bool(ok)})
    return ok


def cmd_rnla(cfg, out):
    par1 = SpaceParams(cfg["s1"], cfg["p1"], cfg["q1"])
    par2 = SpaceParams(cfg["s2"], cfg["p2"], cfg["q2"])
    err_space = SpaceParams(cfg["s1"], cfg["p1"], cfg["p1"])
    corpus = _rand_coeff_corpus(cfg["seed"], cfg["corpus"], 3, cfg["max_size"])
    beta = alpha_exponent(par1, par2)
    method = cfg["oracle"]
    rows = []
    for i, s in enumerate(corpus[:cfg["curves"]]):
        curve = sigma_curve(s, err_space, beta, method)
        for t, e in zip(curve.budgets, curve.errors):
            rows.append((i, float(t), float(e), curve.method))
    write_csv(out / "sigma_curves.csv", ["element", "t", "sigma", "method"], rows)

    rep_a = jackson_bernstein_check(corpus, par1, par2, cfg["xi"], cfg["mu"],
                                    "center", method)
    hold = _rand_coeff_corpus(cfg["seed"] + 1, cfg["corpus"], 3, cfg["max_size"])
    rep_b = jackson_bernstein_check(hold, par1, par2, cfg["xi"], cfg["mu"],
                                    "center", method)
    jk_drift = max(rep_a.jackson_sup / rep_b.jackson_sup,
                   rep_b.jackson_sup / rep_a.jackson_sup)
    bn_drift = max(rep_a.bernstein_sup / rep_b.bernstein_sup,
                   rep_b.bernstein_sup / rep_a.bernstein_sup)
    single = single_atom_ratios(cfg["xi"], cfg["mu"], cfg["p1"])
    ok = (math.isfinite(rep_a.jackson_sup) and math.isfinite(rep_a.bernstein_sup)
          and jk_drift <= 1.10 and bn_drift <= 1.10)
    payload = {
        "beta": rep_a.beta, "r": rep_a.r, "xi": cfg["xi"], "mu": cfg["mu"],
        "jackson_sup": rep_a.jackson_sup, "jackson_holdout": rep_b.jackson_sup,
        "bernstein_sup": rep_a.bernstein_sup, "bernstein_holdout": rep_b.bernstein_sup,
        "single_atom_jackson": single[0], "single_atom_bernstein": single[1],
        "passed": bool(ok),
    }
    write_json(out / "rnla.json", payload)
    return ok


def cmd_interp(cfg, out):
    err_space = SpaceParams(cfg["s1"], cfg["p1"], cfg["p1"])
    par2 = SpaceParams(cfg["s2"], cfg["p2"], cfg["q2"])
    corpus = _rand_coeff_corpus(cfg["seed"], cfg["corpus"], 3, cfg["max_size"])

    # degenerate identical-space case: the scalar constant must sit in the band
    X = besov_space(err_space)
    pair = SpacePair(X, X)
    s0 = corpus[0]
    band0 = interp_norm(s0, cfg["theta"], cfg["mu"], pair)
    cst = identical_pair_constant(cfg["theta"], cfg["mu"]) * X.norm(s0)
    ok = band0.lower <= cst <= band0.upper

    rep = block_norm_interpolation_check(corpus, SpaceParams(cfg["s1"], cfg["p1"], cfg["p1"]),
                                         par2, cfg["xi0"], cfg["xi1"], cfg["theta"])
    hold = _rand_coeff_corpus(cfg["seed"] + 1, cfg["corpus"], 3, cfg["max_size"])
    rep_h = block_norm_interpolation_check(hold, SpaceParams(cfg["s1"], cfg["p1"], cfg["p1"]),
                                           par2, cfg["xi0"], cfg["xi1"], cfg["theta"])
    ok &= rep.band_width <= 10.0 and rep_h.band_width <= 10.0

    # K profile of the first element for plotting
    env = k_envelope(s0, pair)
    ts = np.geomspace(1e-3, 1e3, 49)
    write_csv(out / "k_profile.csv", ["t", "K"],
              [(float(t), envelope_value(env, float(t))) for t in ts])
    maybe_plot(out, "k_profile", [("K(t)", ts, [envelope_value(env, float(t)) for t in ts])],
               "t", "K", cfg["plots"])
    payload = {
        "identical_band": [band0.lower, band0.upper], "identical_exact": cst,
        "reiteration_band": [rep.ratio_lo, rep.ratio_hi],
        "reiteration_width": rep.band_width,
        "holdout_band": [rep_h.ratio_lo, rep_h.ratio_hi],
        "holdout_width": rep_h.band_width,
        "passed": bool(ok),
    }
    write_json(out / "interp.json", payload)
    return ok


def cmd_decay_demo(cfg, out):
    rep = decay_demo(cfg["n"], cfg["jmax"],
                     [2 ** k for k in range(cfg["budget_lo"], cfg["budget_hi"] + 1)])
    rows = []
    for b, se, he in zip(rep.budgets, rep.shear_errors, rep.haar_errors):
        rows.append((b, float(se), float(he)))
    write_csv(out / "decay_curves.csv", ["budget", "directional_err2", "separable_err2"], rows)
    maybe_plot(out, "decay_curves",
               [("directional", rep.budgets, rep.shear_errors),
                ("separable", rep.budgets, rep.haar_errors)],
               "kept coefficients", "squared L2 error", cfg["plots"])
    ok = (rep.shear_monotone and rep.haar_monotone
          and rep.full_budget_error <= cfg["endpoint_tol"])
    payload = {
        "n": cfg["n"], "budgets": rep.budgets,
        "directional_slope": rep.shear_slope, "separable_slope": rep.haar_slope,
        "monotone": [rep.shear_monotone, rep.haar_monotone],
        "full_budget_error": rep.full_budget_error,
        "passed": bool(ok),
    }
    write_json(out / "decay_demo.json", payload)
    return ok


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

DEFAULTS = {
    "frame-check": dict(n=256, jmax=3, order=3, open_top=False, seed=1,
                        trials=20, parseval_tol=1e-10, roundtrip_tol=1e-8),
    "transform": dict(input=None, jmax=3, order=3, threshold=0.0),
    "norms": dict(coeffs=None, s=0.0, p=2.0, q=2.0, beta=0.0, mu=2.0, grid_m=512),
    "democracy": dict(seed=7, corpus=200, max_size=20, s1=0.0, p1=1.0, q1=2.0,
                      s2=0.5, p2=2.0, q2=2.0),
    "lemma31": dict(seed=7, sets=20, samples=50, max_size=25, gammas=[0.2, 0.6]),
    "rnla": dict(seed=7, corpus=60, max_size=10, curves=4, oracle="exact",
                 s1=0.0, p1=1.0, q1=1.0, s2=0.5, p2=2.0, q2=2.0, xi=0.5,
                 mu=2.0 / 3.0),
    "interp": dict(seed=7, corpus=25, max_size=9, s1=0.0, p1=1.0, s2=0.5,
                   p2=2.0, q2=2.0, xi0=0.25, xi1=1.0, theta=0.4, mu=1.0),
    "decay-demo": dict(n=256, jmax=3, budget_lo=5, budget_hi=13,
                       endpoint_tol=1e-12),
}

COMMANDS = {
    "frame-check": cmd_frame_check,
    "transform": cmd_transform,
    "norms": cmd_norms,
    "democracy": cmd_democracy,
    "lemma31": cmd_lemma31,
    "rnla": cmd_rnla,
    "interp": cmd_interp,
    "decay-demo": cmd_decay_demo,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="anisoframe",
        description="directional frame, sequence-space and approximation experiments")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, defaults in DEFAULTS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None,
                       help="JSON config file; flags override its entries")
        p.add_argument("--out-dir", type=str, default="out")
        p.add_argument("--plots", action="store_true")
        for key, val in defaults.items():
            flag = "--" + key.replace("_", "-")
            if isinstance(val, bool):
                p.add_argument(flag, action="store_true", default=None)
            elif isinstance(val, list):
                p.add_argument(flag, type=str, default=None,
                               help="comma-separated list")
            elif isinstance(val, int):
                p.add_argument(flag, type=int, default=None)
            elif isinstance(val, float):
                p.add_argument(flag, type=float, default=None)
            else:
                p.add_argument(flag, type=str, default=None)
    return ap


def resolve_config(args) -> dict:
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        file_cfg = json.loads(Path(args.config).read_text())
        unknown = set(file_cfg) - set(cfg)
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        cfg.update(file_cfg)
    for key, default in DEFAULTS[args.command].items():
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            if isinstance(default, list):
                val = [float(x) for x in str(val).split(",") if x]
            cfg[key] = val
    cfg["plots"] = bool(args.plots)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    failed_marker = out / "FAILED"
    if failed_marker.exists():
        failed_marker.unlink()
    try:
        cfg = resolve_config(args)
    except Exception as exc:
        print(json.dumps({"error": "config", "detail": str(exc)}), file=sys.stderr)
        return 2
    try:
        ok = COMMANDS[args.command](cfg, out)
    except Exception as exc:
        failed_marker.write_text(f"{type(exc).__name__}: {exc}\n")
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc),
                          "trace": traceback.format_exc()}), file=sys.stderr)
        return 2
    if not ok:
        failed_marker.write_text("assertions failed\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
