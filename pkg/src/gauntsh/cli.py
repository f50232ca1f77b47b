"""Command-line front end: table generation, verification sweeps, demos.

Results go to stdout, progress to stderr.  Exit codes: 0 success, 1
verification tolerance breach, 2 I/O failure, 3 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_IO = 2
EXIT_CONFIG = 3

MAX_ORDER_DEFAULT = 30

DEMO_NAMES = ("translate", "intensity", "energy-vector", "window",
              "beamform", "diffuse-scm")


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsht",
        description="Gaunt coupling tables for spherical harmonics: "
                    "generation, verification, and application demos.")
    sub = parser.add_subparsers(dest="command")

    p_tab = sub.add_parser("tables", help="build and write a coupling table")
    p_tab.add_argument("--n1", type=int, default=4, help="first factor order")
    p_tab.add_argument("--n2", type=int, default=4, help="second factor order")
    p_tab.add_argument("--basis", choices=("complex", "real", "both"),
                       default="real")
    p_tab.add_argument("-o", "--output", help="output file path")
    p_tab.add_argument("--format", choices=("binary", "json"), default="binary")
    p_tab.add_argument("--factorial-path", choices=("exact", "fast"),
                       default="exact")
    p_tab.add_argument("--allow-large", action="store_true",
                       help="permit orders above 30")

    p_ver = sub.add_parser("verify", help="run verification sweeps")
    p_ver.add_argument("--n1", type=int, default=3)
    p_ver.add_argument("--n2", type=int, default=3)
    p_ver.add_argument("--tolerance", type=float, default=1e-11)
    p_ver.add_argument("--grid-band", type=int, default=None,
                       help="oracle grid degree (default 3*(n1+n2))")
    p_ver.add_argument("--suite", action="append", default=None,
                       help="suite name, repeatable (default: all)")
    p_ver.add_argument("--factorial-path", choices=("exact", "fast"),
                       default="exact")
    p_ver.add_argument("--allow-large", action="store_true")

    p_demo = sub.add_parser("demo", help="run an application demo")
    p_demo.add_argument("name", help="one of: " + ", ".join(DEMO_NAMES))
    p_demo.add_argument("--order", type=int, default=2,
                        help="density/field order")
    p_demo.add_argument("--direction", default="0.5,1.2",
                        help="theta,phi in radians")
    p_demo.add_argument("--kd", type=float, default=1.0,
                        help="wavenumber-distance product")
    p_demo.add_argument("--expansion", type=int, default=None,
                        help="phase-term expansion order")
    p_demo.add_argument("--spacing", type=float, default=0.1,
                        help="sensor spacing in meters (diffuse-scm)")
    p_demo.add_argument("--freq", type=float, default=1000.0,
                        help="frequency in Hz (diffuse-scm)")
    p_demo.add_argument("--json", action="store_true",
                        help="machine-readable output")
    return parser


def _check_orders(args) -> str | None:
    if args.n1 < 0 or args.n2 < 0:
        return "orders must be non-negative"
    limit_ok = getattr(args, "allow_large", False)
    if not limit_ok and max(args.n1, args.n2) > MAX_ORDER_DEFAULT:
        return f"orders above {MAX_ORDER_DEFAULT} need --allow-large"
    return None


def _cmd_tables(args) -> int:
    from .gaunt import build_table
    from .tableio import save_table, tables_to_json

    err = _check_orders(args)
    if err is None and not args.output:
        err = "tables needs an output path (-o)"
    if err is None and args.basis == "both" and args.format != "json":
        err = "--basis both is only available with --format json"
    if err:
        _progress(f"error: {err}")
        return EXIT_CONFIG

    fast = args.factorial_path == "fast"
    bases = ("complex", "real") if args.basis == "both" else (args.basis,)
    dense_bytes = ((args.n1 + args.n2 + 1) ** 2 * (args.n1 + 1) ** 2
                   * (args.n2 + 1) ** 2 * 8)
    if dense_bytes > 4 << 30:
        _progress(f"warning: the in-memory stack at these orders needs about "
                  f"{dense_bytes / (1 << 30):.0f} GiB")
    t0 = time.perf_counter()
    tables = []
    for basis in bases:
        _progress(f"building {basis} table ({args.n1},{args.n2}) ...")
        tables.append(build_table(basis, args.n1, args.n2, fast=fast))
    elapsed = time.perf_counter() - t0
    try:
        if args.format == "json":
            with open(args.output, "w", encoding="ascii") as fh:
                fh.write(tables_to_json(tables))
        else:
            save_table(tables[0], args.output, fmt="binary")
    except OSError as exc:
        _progress(f"error writing {args.output}: {exc}")
        return EXIT_IO
    entries = sum(t.n_targets * t.matrices[0].data.size for t in tables)
    nonzeros = sum(int(np.count_nonzero(m.data))
                   for t in tables for m in t.matrices)
    print(f"wrote {args.output}: basis={args.basis} n1={args.n1} n2={args.n2} "
          f"entries={entries} nonzeros={nonzeros} seconds={elapsed:.2f}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import SUITES, run_suites

    err = _check_orders(args)
    if err is None and args.tolerance <= 0:
        err = "tolerance must be positive"
    names = args.suite or list(SUITES)
    if err is None:
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            err = f"unknown suite(s): {', '.join(unknown)}; " \
                  f"available: {', '.join(SUITES)}"
    if err:
        _progress(f"error: {err}")
        return EXIT_CONFIG

    fast = args.factorial_path == "fast"
    all_ok = True
    for name in names:
        _progress(f"running suite {name} ...")
        (_, worst), = run_suites([name], args.n1, args.n2,
                                 grid_band=args.grid_band, fast=fast)
        ok = worst <= args.tolerance
        all_ok = all_ok and ok
        print(f"{name}: max error {worst:.3e} "
              f"(tolerance {args.tolerance:g}) {'PASS' if ok else 'FAIL'}")
    print("verification " + ("PASSED" if all_ok else "FAILED"))
    return EXIT_OK if all_ok else EXIT_VERIFY_FAIL


def _parse_direction(text: str):
    from .sh import Direction
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("direction must be theta,phi")
    return Direction(float(parts[0]), float(parts[1]))


def _demo_report(args, payload: dict) -> int:
    if args.json:
        print(json.dumps(payload))
    else:
        for key, val in payload.items():
            print(f"{key}: {val}")
    return EXIT_OK


def _demo_translate(args) -> int:
    from .acoustics import recommended_expansion_order, translate_coeffs
    from .quadrature import build_grid, forward_sht, inverse_sht
    from .basis import CoeffVector

    n = args.order
    n_exp = args.expansion or recommended_expansion_order(args.kd)
    k = 1.0
    rng = np.random.default_rng(0)
    a = rng.standard_normal((n + 1) ** 2)
    x = np.array([0.6, -0.3, 0.74])
    x *= args.kd / (k * np.linalg.norm(x))
    closed = translate_coeffs(a, k, x, n_exp)
    grid = build_grid(3 * (n + n_exp))
    u = np.stack([np.sin(grid.theta) * np.cos(grid.phi),
                  np.sin(grid.theta) * np.sin(grid.phi),
                  np.cos(grid.theta)], axis=1)
    av = inverse_sht(CoeffVector("real", a), grid.theta, grid.phi)
    oracle = forward_sht(grid, av * np.exp(1j * k * (u @ x)),
                         "real", n + n_exp).data
    rel = float(np.max(np.abs(closed - oracle)) / np.max(np.abs(oracle)))
    return _demo_report(args, {
        "demo": "translate", "order": n, "kd": args.kd, "expansion": n_exp,
        "closed_form_first_coeffs": [f"{v:.6g}" for v in closed[:4]],
        "oracle_first_coeffs": [f"{v:.6g}" for v in oracle[:4]],
        "relative_discrepancy": rel,
    })


def _demo_intensity(args) -> int:
    from .acoustics import intensity_at, recommended_expansion_order
    from .quadrature import build_grid, inverse_sht
    from .basis import CoeffVector

    n = args.order
    n_exp = args.expansion or max(n + 1, recommended_expansion_order(args.kd))
    k = 1.0
    rng = np.random.default_rng(1)
    a = rng.standard_normal((n + 1) ** 2)
    x = np.array([0.2, 0.5, -0.4])
    x *= args.kd / (k * np.linalg.norm(x))
    closed = intensity_at(a, k, x, n_exp=n_exp)
    grid = build_grid(3 * (n + n_exp) + 12)
    u = np.stack([np.sin(grid.theta) * np.cos(grid.phi),
                  np.sin(grid.theta) * np.sin(grid.phi),
                  np.cos(grid.theta)], axis=1)
    av = inverse_sht(CoeffVector("real", a), grid.theta, grid.phi)
    pw = np.exp(1j * k * (u @ x))
    p_ref = np.sum(grid.weights * av * pw)
    v_ref = -(1.0 / (343.0 * 1.2)) * (grid.weights * av * pw) @ u
    oracle = 0.5 * np.conj(p_ref) * v_ref
    disc = float(np.max(np.abs(closed - oracle)))
    return _demo_report(args, {
        "demo": "intensity", "order": n, "kd": args.kd, "expansion": n_exp,
        "closed_form": [str(v) for v in closed],
        "oracle": [str(v) for v in oracle],
        "discrepancy": disc,
    })


def _demo_energy_vector(args) -> int:
    from .acoustics import energy_vector
    from .quadrature import build_grid, inverse_sht
    from .basis import CoeffVector
    from .sh import sh_vector

    if args.order < 1:
        _progress("error: energy-vector needs order >= 1")
        return EXIT_CONFIG
    u0 = _parse_direction(args.direction)
    n = args.order
    a = sh_vector("real", n, u0.theta, u0.phi)
    e = energy_vector(a)
    grid = build_grid(3 * n + 2)
    av = inverse_sht(CoeffVector("real", a), grid.theta, grid.phi)
    u = np.stack([np.sin(grid.theta) * np.cos(grid.phi),
                  np.sin(grid.theta) * np.sin(grid.phi),
                  np.cos(grid.theta)], axis=1)
    oracle = ((grid.weights * av ** 2) @ u) / np.sum(grid.weights * av ** 2)
    angle = math.acos(min(1.0, max(-1.0, float(
        np.dot(u0.unit_vector, e / np.linalg.norm(e))))))
    return _demo_report(args, {
        "demo": "energy-vector", "order": n,
        "direction": [u0.theta, u0.phi],
        "energy_vector": list(map(float, e)),
        "oracle": list(map(float, oracle)),
        "alignment_angle_rad": angle,
        "discrepancy": float(np.max(np.abs(e - oracle))),
    })


def _demo_window(args) -> int:
    from .acoustics import steer_axisymmetric, window_matrix
    from .quadrature import build_grid, forward_sht, inverse_sht
    from .basis import CoeffVector

    u0 = _parse_direction(args.direction)
    n = args.order
    rng = np.random.default_rng(2)
    a = rng.standard_normal((n + 1) ** 2)
    # first-order cardioid-style weighting aimed at u0
    zonal = np.array([0.5 * math.sqrt(4 * math.pi),
                      0.5 * math.sqrt(4 * math.pi / 3)])
    w = steer_axisymmetric(zonal, u0)
    out = window_matrix(w, n).T @ a
    grid = build_grid(3 * (n + 1) + 2)
    prod = (inverse_sht(CoeffVector("real", a), grid.theta, grid.phi)
            * inverse_sht(CoeffVector("real", w), grid.theta, grid.phi))
    oracle = forward_sht(grid, prod, "real", n + 1).data
    return _demo_report(args, {
        "demo": "window", "order": n, "window_order": 1,
        "direction": [u0.theta, u0.phi],
        "windowed_first_coeffs": [f"{v:.6g}" for v in out[:4]],
        "oracle_first_coeffs": [f"{v:.6g}" for v in oracle[:4]],
        "discrepancy": float(np.max(np.abs(out - oracle))),
    })


def _demo_beamform(args) -> int:
    from .acoustics import (binaural_beam_matrices, binaural_beamform,
                            steer_axisymmetric)
    from .quadrature import build_grid, inverse_sht
    from .basis import CoeffVector
    from .sh import sh_matrix

    u0 = _parse_direction(args.direction)
    n = args.order
    rng = np.random.default_rng(3)
    a = rng.standard_normal((n + 1) ** 2)
    H = rng.standard_normal((2, (n + 1) ** 2))
    zonal = np.sqrt(4 * np.pi / (2 * np.arange(n + 1) + 1))
    w = steer_axisymmetric(zonal, u0)
    beams = binaural_beam_matrices(H, n)
    b = binaural_beamform(beams, a, w)
    grid = build_grid(3 * 3 * n + 2)
    av = inverse_sht(CoeffVector("real", a), grid.theta, grid.phi)
    wv = inverse_sht(CoeffVector("real", w), grid.theta, grid.phi)
    hv = sh_matrix("real", n, grid.theta, grid.phi) @ H.T
    oracle = (grid.weights[:, None] * (av * wv)[:, None] * hv).sum(axis=0)
    return _demo_report(args, {
        "demo": "beamform", "order": n, "direction": [u0.theta, u0.phi],
        "left_right": list(map(float, b)),
        "oracle": list(map(float, oracle)),
        "discrepancy": float(np.max(np.abs(b - oracle))),
    })


def _demo_diffuse_scm(args) -> int:
    from .acoustics import DEFAULT_SOUND_SPEED, scm_spaced_isotropic

    n = args.order
    k = 2 * math.pi * args.freq / DEFAULT_SOUND_SPEED
    x = np.array([0.0, 0.0, args.spacing])
    kd = k * args.spacing
    scm = scm_spaced_isotropic(1.0, k, x, n, max(12, 2 * n))
    coherence = float(scm[0, 0].real)
    sinc = math.sin(kd) / kd if kd else 1.0
    return _demo_report(args, {
        "demo": "diffuse-scm", "order": n, "spacing_m": args.spacing,
        "freq_hz": args.freq, "kd": kd,
        "omni_pair_coherence": coherence,
        "sinc_kd": sinc,
        "discrepancy": abs(coherence - sinc),
    })


_DEMOS = {
    "translate": _demo_translate,
    "intensity": _demo_intensity,
    "energy-vector": _demo_energy_vector,
    "window": _demo_window,
    "beamform": _demo_beamform,
    "diffuse-scm": _demo_diffuse_scm,
}


def _cmd_demo(args) -> int:
    if args.name not in _DEMOS:
        _progress(f"error: unknown demo {args.name!r}; "
                  f"available: {', '.join(DEMO_NAMES)}")
        return EXIT_CONFIG
    try:
        _parse_direction(args.direction)
    except ValueError as exc:
        _progress(f"error: {exc}")
        return EXIT_CONFIG
    if args.order < 0:
        _progress("error: order must be non-negative")
        return EXIT_CONFIG
    return _DEMOS[args.name](args)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "tables":
        return _cmd_tables(args)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "demo":
        return _cmd_demo(args)
    parser.print_help(sys.stderr)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
