"""Command line entry point: ``holoqutrit {calibrate,gate,sweep,check,config}``."""

import argparse
import logging
import math
import os
import sys

import numpy as np

from holoqutrit import holonomy, qcore, twophoton
from holoqutrit.harness import checks, output
from holoqutrit.harness.config import SCENARIOS, ConfigError, default_config_text, load_config
from holoqutrit.pulseshape import calibrate_2pi

EXIT_OK = 0
EXIT_UNKNOWN_SCENARIO = 3
EXIT_BAD_CONFIG = 4
EXIT_CALIBRATION = 5
EXIT_INVARIANT = 6

log = logging.getLogger("holoqutrit")


def _matrix_str(m):
    return np.array2string(np.round(m, 6) + 0.0, precision=6, suppress_small=True,
                           max_line_width=120)


def cmd_calibrate(args):
    td = args.td_ns * 1e-9
    omega = calibrate_2pi(td)
    print(f"td = {args.td_ns:g} ns: Omega_2pi = {omega * 1e-9:.6f} rad/ns "
          f"({omega / (2 * math.pi) / 1e6:.3f} MHz)")
    if not args.two_photon:
        return EXIT_OK
    cfg = load_config(None, args.config)
    from holoqutrit.harness.scenarios import calibrate
    cal = calibrate(cfg, ladder=True, cache_path=args.cache)
    for c in (cal.ladder_pi, cal.ladder_pi2):
        print(f"two-photon {c.target.value}: Omega0 = {c.omega0 * 1e-9:.6f} rad/ns, "
              f"detuning = {c.detuning / (2 * math.pi) / 1e6:.3f} MHz, p2 = {c.p2:.5f}, "
              f"p1 = {c.p1:.2e}, max p1 = {c.max_p1:.4f}")
    print(f"composition phase = {cal.composition_phase:.6f} rad")
    return EXIT_OK


def cmd_gate(args):
    if args.name:
        g = holonomy.GateSpec.named(args.name, args.phi)
    else:
        g = holonomy.GateSpec(args.theta, args.phi)
    u2 = holonomy.holonomic_unitary2(g)
    u3 = holonomy.holonomic_unitary3(holonomy.ab_from_angles(g))
    print(f"theta = {g.theta:.7f} rad, phi = {g.phi:.7f} rad, n = {np.round(g.axis, 7)}")
    print("U on (|0>, |2>):")
    print(_matrix_str(u2))
    print("U on (|0>, |1>, |2>):")
    print(_matrix_str(u3))
    ok = True
    inv = qcore.frobenius(u2 @ u2, np.eye(2))
    if inv < 1e-12:
        print("involution OK")
    else:
        print(f"involution FAILED ({inv:.2e})")
        ok = False
    emb = qcore.frobenius(qcore.block_02(u3), u2)
    print(f"embedding {'OK' if emb < 1e-12 else 'FAILED'} ({emb:.1e})")
    ok &= emb < 1e-12
    if args.simulate:
        u, _ = checks.simulate_gate(g, dt=args.dt_ps * 1e-12)
        err = qcore.frobenius(u, u3)
        print(f"propagated pulse pair vs closed form: Frobenius error {err:.2e}")
        ok &= err < 1e-6
    return EXIT_OK if ok else EXIT_INVARIANT


def _overrides(args):
    sim, sweep = {}, {}
    if args.decoherence is not None:
        sim["decoherence"] = args.decoherence == "on"
    if args.two_photon is not None:
        sim["two_photon"] = args.two_photon
    if args.dt_ps is not None:
        # one flag for both integrators; the config file can still set them apart
        sim["dt_ps"] = sim["dt_lindblad_ps"] = args.dt_ps
    if args.workers is not None:
        sim["workers"] = args.workers
    if args.seed is not None:
        sim["seed"] = args.seed
    if args.points is not None:
        sweep["points"] = args.points
    out = {}
    if sim:
        out["simulation"] = sim
    if sweep:
        out["sweep"] = sweep
    return out


def cmd_sweep(args):
    from holoqutrit.harness import scenarios

    if args.scenario not in SCENARIOS:
        print(f"unknown scenario {args.scenario!r}; choose from {', '.join(SCENARIOS)}",
              file=sys.stderr)
        return EXIT_UNKNOWN_SCENARIO
    cfg = load_config(args.scenario, args.config, _overrides(args))
    out_dir = args.out or os.path.join("runs", args.scenario)
    os.makedirs(out_dir, exist_ok=True)
    cache = args.cache or os.path.join(out_dir, "calibration_cache.json")
    ladder = cfg.two_photon == "ladder" or args.scenario == "rabi-ramsey"
    cal = scenarios.calibrate(cfg, ladder=ladder, cache_path=cache)
    result = scenarios.run_scenario(cfg, cal)
    files = output.write_result(result, out_dir, trajectories=not args.no_trajectories)
    if not args.no_figures:
        from holoqutrit.harness import plotting
        files += plotting.plot_result(result, out_dir)
    breaches = sweep_breaches(cfg, result)
    manifest = os.path.join(out_dir, "manifest.json")
    output.write_manifest(manifest, cfg, result, cal, files,
                          {"invariant_breaches": breaches})
    print(f"{args.scenario}: {len(result.axis)} points -> {out_dir}")
    for k, v in result.fit.items():
        print(f"  {k} = {v:.6g}")
    for b in breaches:
        print(f"  INVARIANT BREACH: {b}", file=sys.stderr)
    return EXIT_INVARIANT if breaches else EXIT_OK


def sweep_breaches(cfg, result):
    """Invariants every sweep must satisfy regardless of model choices."""
    out = []
    for i, rec in enumerate(result.records):
        total = rec.populations.sum(axis=1)
        if not cfg.decoherence and np.max(np.abs(total - 1)) > 1e-8:
            out.append(f"point {i}: population not conserved ({np.max(np.abs(total - 1)):.2e})")
        if cfg.decoherence and rec.monitors.get("min_eigenvalue", 0.0) < -1e-8:
            out.append(f"point {i}: density matrix lost positivity")
    if result.scenario == "fig6":
        for key in ("p2_i_corrected", "p2_f_corrected"):
            v = result.extras[key]
            if np.any(v < -1e-8) or np.any(v > 1 + 1e-8):
                out.append(f"{key} outside [0, 1]")
    return out


def cmd_check(args):
    results = checks.run_checks()
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_INVARIANT if failed else EXIT_OK


def cmd_config(args):
    sys.stdout.write(default_config_text())
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="holoqutrit", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("calibrate", help="2*pi amplitude of the holonomic pulses")
    c.add_argument("--td-ns", type=float, default=6.5)
    c.add_argument("--two-photon", action="store_true", help="also calibrate the ladder pulses")
    c.add_argument("--config")
    c.add_argument("--cache")
    c.set_defaults(func=cmd_calibrate)

    g = sub.add_parser("gate", help="print U(theta, phi) and check its invariants")
    g.add_argument("--theta", type=float, default=math.pi / 2)
    g.add_argument("--phi", type=float, default=0.0)
    g.add_argument("--name", choices=["NOT", "HADAMARD", "not", "hadamard"])
    g.add_argument("--simulate", action="store_true", help="also propagate the pulse pair")
    g.add_argument("--dt-ps", type=float, default=1.0)
    g.set_defaults(func=cmd_gate)

    s = sub.add_parser("sweep", help="run a scenario sweep and write CSV, figures, manifest")
    s.add_argument("scenario", help=" | ".join(SCENARIOS))
    s.add_argument("--config")
    s.add_argument("--out")
    s.add_argument("--cache")
    s.add_argument("--decoherence", choices=["on", "off"])
    s.add_argument("--two-photon", choices=["ideal", "ladder"])
    s.add_argument("--dt-ps", type=float)
    s.add_argument("--points", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--seed", type=int, help="reserved; all models are deterministic")
    s.add_argument("--no-figures", action="store_true")
    s.add_argument("--no-trajectories", action="store_true")
    s.set_defaults(func=cmd_sweep)

    k = sub.add_parser("check", help="run the invariant suite")
    k.set_defaults(func=cmd_check)

    f = sub.add_parser("config", help="print the default configuration")
    f.set_defaults(func=cmd_config)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except twophoton.CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        if exc.sweep:
            for amp, val in exc.sweep:
                print(f"  omega0 = {amp:.4g} rad/s -> {val:.4f}", file=sys.stderr)
        return EXIT_CALIBRATION


if __name__ == "__main__":
    sys.exit(main())
