"""CSV and manifest writers for sweep results."""

import csv
import json
import os

import numpy as np

import holoqutrit
from holoqutrit.harness.config import manifest_dict


def _fmt(x):
    return repr(float(x))


def sweep_header(result):
    return [result.axis_name, "p0", "p1", "p2", *result.extras, "fit_residual"]


def write_sweep_csv(result, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(sweep_header(result))
        for i, x in enumerate(result.axis):
            row = [x, *result.final[i], *(v[i] for v in result.extras.values()),
                   result.fit_residual[i]]
            w.writerow([_fmt(v) for v in row])


def write_table(header, rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_result(result, out_dir, trajectories=True):
    """Write the sweep CSV, auxiliary tables and per-point trajectories; return the paths."""
    os.makedirs(out_dir, exist_ok=True)
    files = []
    main = os.path.join(out_dir, f"{result.scenario}.csv")
    write_sweep_csv(result, main)
    files.append(main)
    for name, (header, rows) in result.tables.items():
        path = os.path.join(out_dir, f"{result.scenario}_{name}.csv")
        write_table(header, rows, path)
        files.append(path)
    if trajectories:
        tdir = os.path.join(out_dir, "trajectories")
        os.makedirs(tdir, exist_ok=True)
        for i, rec in enumerate(result.records):
            path = os.path.join(tdir, f"{result.scenario}_pt{i:03d}.csv")
            rec.to_csv(path)
            files.append(path)
    return files


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    return x


def write_manifest(path, cfg, result=None, calibrations=None, files=(), extra=None):
    """Run manifest: resolved config, grid, integrator settings and code version."""
    man = {
        "code_version": holoqutrit.__version__,
        "scenario": cfg.scenario,
        "config": manifest_dict(cfg),
        "integrator": {
            "closed_system": "midpoint piecewise-constant, spectral exp(-iH dt)",
            "open_system": "midpoint piecewise-constant, exp(L dt) of the Lindblad superoperator",
            "dt_s": cfg.step,
            "record_every_s": cfg.record_every,
        },
        "files": [os.path.relpath(f, os.path.dirname(path)) for f in files],
    }
    if result is not None:
        man["grid"] = {"axis": result.axis_name, "values": result.axis.tolist()}
        man["fit"] = result.fit
        man["monitors"] = _merge_monitors(result.records)
    if calibrations is not None:
        man["calibrations"] = {
            "omega_2pi_rad_per_s": calibrations.omega_2pi,
            "ladder_pi": _dc(calibrations.ladder_pi),
            "ladder_pi2": _dc(calibrations.ladder_pi2),
            "composition_phase_rad": calibrations.composition_phase,
        }
    if extra:
        man.update(extra)
    with open(path, "w") as fh:
        json.dump(_jsonable(man), fh, indent=2, sort_keys=True)
    return path


def _dc(c):
    if c is None:
        return None
    d = dict(vars(c))
    d["target"] = c.target.value
    return d


def _merge_monitors(records):
    out = {}
    for rec in records:
        for k, v in rec.monitors.items():
            if k in out:
                out[k] = max(out[k], v) if "error" in k else min(out[k], v)
            else:
                out[k] = v
    return out
