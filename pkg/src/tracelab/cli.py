"""Command-line driver.

Subcommands:

    kloosterman   dump a hyper-Kloosterman table as CSV
    dual6         max deviation of one of the dual-transform identities
    correlate     square-root-cancellation scan, CSV report + summary
    twisted       one twisted sum s_total(K, X) as a JSON record
    scaling       |s_total| at X = p^3 across primes, CSV + fitted slope

Trace functions are named by the spec grammar of `tracezoo`
("kl3", "psi:2", "chi:5", "ap:3", "sym:2,4", "prod(kl2,chi:1)",
"scale:5(kl3)", "invscale:2(kl2)").

Every command is deterministic given its flags and --seed: randomized scans
draw from a counter-based generator, floats are printed with 17 significant
digits, and repeated invocations produce identical bytes.  Exit codes:
0 success / within tolerance, 1 tolerance exceeded, 2 usage or parameter
error.  TRACELAB_CACHE (or --cache-dir) points the eigenvalue-table cache
somewhere persistent.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import correlation, dual6, hecke, tracezoo, twisted
from .errors import TracelabError
from .ffield import make_field
from .kloosterman import kl_all

DEFAULT_TOLS = {"kl2": 1e-8, "psi": 1e-8, "ap": 1e-10}


@dataclass
class RunConfig:
    seed: int = 0
    cache_dir: Path = dc_field(default_factory=lambda: Path(".tracelab-cache"))
    p_cap: int = 10**6
    tolerances: dict = dc_field(default_factory=dict)
    parallel: bool = False
    output: str = "csv"


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_kloosterman(args, cfg: RunConfig) -> int:
    f = make_field(args.p, cap=cfg.p_cap)
    table = kl_all(args.k, f)
    buf = io.StringIO()
    buf.write("n,re,im,abs\n")
    for n, v in enumerate(table.values):
        buf.write(f"{n},{fmt(v.real)},{fmt(v.imag)},{fmt(abs(v))}\n")
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_dual6(args, cfg: RunConfig) -> int:
    f = make_field(args.p, cap=cfg.p_cap)
    if args.check == "kl2":
        dev = dual6.identity_kl2(f)
    elif args.check == "psi":
        dev = dual6.identity_psi(args.a, f)
    else:
        dev = dual6.identity_ap(args.a, f)
    tol = cfg.tolerances.get(args.check, DEFAULT_TOLS[args.check])
    print(f"dual6 {args.check} p={args.p}: max deviation = {fmt(dev)} (tolerance {fmt(tol)})")
    return 0 if dev <= tol else 1


_CORR_SCHEMA = ("p,kind,delta,alpha,beta,gamma,alphap,betap,gammap,"
                "re,im,abs,ratio_sqrtq,diagonal_flag\n")


def _corr_row_values(p, kind, row):
    return (f"{p},{kind},{row.delta},{row.alpha},{row.beta},1,"
            f"{row.alphap},{row.betap},1,"
            f"{fmt(row.value.real)},{fmt(row.value.imag)},{fmt(abs(row.value))},"
            f"{fmt(row.ratio_sqrtp)},{int(row.diagonal)}\n")


def _scan_tuples(p: int, trials: int, seed: int):
    rng = np.random.default_rng(np.random.Philox(seed))
    n_diag = max(1, trials // 10) if trials else 0
    return rng, trials, n_diag


def cmd_correlate(args, cfg: RunConfig) -> int:
    f = make_field(args.p, cap=cfg.p_cap)
    K = tracezoo.realize(tracezoo.parse_spec(args.K), f)
    Kp = tracezoo.realize(tracezoo.parse_spec(args.Kp), f)
    buf = io.StringIO()
    buf.write(_CORR_SCHEMA)
    if args.trials == 0:
        _emit(buf.getvalue(), args.out)
        print("# summary: no trials requested")
        return 0
    rng, trials, n_diag = _scan_tuples(args.p, args.trials, args.seed)
    if cfg.parallel:
        report = _parallel_scan(args, trials, n_diag)
    else:
        report = correlation.sqrt_cancel_scan(K, Kp, rng, n_offdiag=trials,
                                              n_diag=n_diag, threshold=args.threshold)
    for row in report.rows:
        buf.write(_corr_row_values(args.p, report.kind, row))
    _emit(buf.getvalue(), args.out)
    print(f"# summary: max offdiag |corr|/sqrt(p) = {fmt(report.max_offdiag_ratio)} "
          f"(threshold {fmt(report.threshold)}); "
          f"max diagonal |corr - c*p| = {fmt(report.max_diag_dev)}")
    if not report.offdiag_ok:
        worst = report.worst_offdiag()
        print(f"# offending tuple: delta={worst.delta} alpha={worst.alpha} "
              f"beta={worst.beta} alphap={worst.alphap} betap={worst.betap}")
        return 1
    return 0


_WORKER_STATE: dict = {}


def _scan_worker_init(p: int, kspec: str, kpspec: str):
    f = make_field(p)
    _WORKER_STATE["K"] = tracezoo.realize(tracezoo.parse_spec(kspec), f)
    _WORKER_STATE["Kp"] = tracezoo.realize(tracezoo.parse_spec(kpspec), f)


def _scan_worker(job):
    idx, delta, a, b, ap_, bp_ = job
    K, Kp = _WORKER_STATE["K"], _WORKER_STATE["Kp"]
    f = K.field
    z = correlation.z_func(K, a, b, f)
    zp = correlation.z_func(Kp, ap_, bp_, f)
    return idx, correlation.corr(z, zp, delta)


def _parallel_scan(args, trials: int, n_diag: int) -> correlation.ScanReport:
    """Same draws as the serial scan, dispatched tuple-by-tuple to a pool.

    Results are reassembled in draw order, so the report (and its CSV) is
    byte-identical to the serial run.
    """
    p = args.p
    rng = np.random.default_rng(np.random.Philox(args.seed))
    jobs = []
    meta = []
    for i in range(trials):
        d = int(rng.integers(1, p))
        a, b, ap_, bp_ = (int(rng.integers(1, p)) for _ in range(4))
        jobs.append((i, d, a, b, ap_, bp_))
        meta.append((d, a, b, ap_, bp_, False))
    for i in range(n_diag):
        a, b = int(rng.integers(1, p)), int(rng.integers(1, p))
        jobs.append((trials + i, 0, a, b, a, b))
        meta.append((0, a, b, a, b, True))
    report = correlation.ScanReport(p=p, kind=f"{args.K}|{args.Kp}",
                                    threshold=args.threshold)
    values = [0j] * len(jobs)
    with ProcessPoolExecutor(max_workers=min(4, os.cpu_count() or 1),
                             initializer=_scan_worker_init,
                             initargs=(p, args.K, args.Kp)) as pool:
        for idx, val in pool.map(_scan_worker, jobs, chunksize=4):
            values[idx] = val
    for (d, a, b, ap_, bp_, diag), val in zip(meta, values):
        c_fit = val / abs(val) if (diag and abs(val) > 0) else (1.0 if diag else 0.0)
        report.rows.append(correlation.ScanRow(
            d, a, b, ap_, bp_, val, abs(val) / math.sqrt(p), diag, complex(c_fit)))
    off = [r.ratio_sqrtp for r in report.rows if not r.diagonal]
    diag_dev = [abs(r.value - r.c_fit * p) for r in report.rows if r.diagonal]
    report.max_offdiag_ratio = max(off) if off else 0.0
    report.max_diag_dev = max(diag_dev) if diag_dev else 0.0
    return report


def _load_gl2(n_needed: int, cfg: RunConfig) -> hecke.HeckeGL2:
    from .cache import load_or_build_tau

    tau = load_or_build_tau(n_needed, cfg.cache_dir)
    ns = np.arange(n_needed + 1, dtype=np.float64)
    lam = np.zeros(n_needed + 1)
    lam[1:] = np.array([float(t) for t in tau[1:]]) / ns[1:] ** 5.5
    return hecke.HeckeGL2(N=n_needed, tau=tau, lam=lam)


def cmd_twisted(args, cfg: RunConfig) -> int:
    f = make_field(args.p, cap=cfg.p_cap)
    K = tracezoo.realize(tracezoo.parse_spec(args.K), f)
    V = twisted.make_window(args.Z)
    X = args.X
    if X < 1:
        record = {"p": args.p, "X": X, "Z": args.Z, "S_re": 0.0, "S_im": 0.0,
                  "S_abs": 0.0, "envelope": 0.0}
    else:
        gl2 = _load_gl2(math.ceil(2 * X) + 1, cfg)
        gl3 = hecke.sym2_table(R=math.isqrt(2 * int(X)) + 1, N=2 * int(X) + 1,
                               gl2=gl2, bound=2 * int(X) + 1, validate=False)
        val, env = twisted.s_total(K, float(X), V, gl2, gl3,
                                   r_max=args.r_max, with_envelope=True)
        record = {"p": args.p, "X": X, "Z": args.Z, "S_re": val.real,
                  "S_im": val.imag, "S_abs": abs(val), "envelope": env}
    text = json.dumps({k: (fmt(v) if isinstance(v, float) else v)
                       for k, v in record.items()}, sort_keys=True) + "\n"
    _emit(text, args.out)
    return 0


def cmd_scaling(args, cfg: RunConfig) -> int:
    primes = [int(t) for t in args.primes.split(",") if t]
    spec = tracezoo.parse_spec(args.K)
    V = twisted.make_window(args.Z)
    n_needed = 2 * max(primes) ** 3 + 1 if primes else 1
    gl2 = _load_gl2(n_needed, cfg)
    report = twisted.scaling_experiment(spec, primes, V, gl2)
    buf = io.StringIO()
    buf.write(f"# scaling report for K = {report.kind}, Z = {fmt(report.Z)}\n")
    buf.write(f"# {report.note}\n")
    buf.write("p,X,abs_S,abs_S_over_X,log_ratio,envelope\n")
    for row in report.rows:
        buf.write(f"{row.p},{row.X},{fmt(row.abs_s)},{fmt(row.ratio)},"
                  f"{fmt(row.log_ratio)},{fmt(row.envelope)}\n")
    buf.write(f"# fitted_slope,{fmt(report.slope) if report.rows else 'nan'}\n")
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tracelab",
        description="Trace functions over prime fields: tables, identities, scans.",
        epilog='Trace function specs: "kl3", "psi:2", "chi:5", "ap:3", '
               '"sym:2,4", "prod(kl2,chi:1)", "scale:5(kl3)", "invscale:2(kl2)".')
    ap.add_argument("--cache-dir", default=None,
                    help="table cache directory (default $TRACELAB_CACHE or ./.tracelab-cache)")
    ap.add_argument("--p-cap", type=int, default=10**6)
    ap.add_argument("--parallel", action="store_true",
                    help="dispatch per-tuple scan work to a process pool")
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kloosterman", help="dump Kl_k table as CSV")
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--k", type=int, default=2)
    k.add_argument("--out", default=None)

    d = sub.add_parser("dual6", help="dual-transform identity deviation")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--check", choices=("kl2", "psi", "ap"), required=True)
    d.add_argument("--a", type=int, default=1)
    d.add_argument("--tol", type=float, default=None)

    c = sub.add_parser("correlate", help="square-root cancellation scan")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--K", required=True)
    c.add_argument("--Kp", required=True)
    c.add_argument("--trials", type=int, default=50)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--threshold", type=float, default=10.0)
    c.add_argument("--out", default=None)

    t = sub.add_parser("twisted", help="one twisted sum as JSON")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--K", required=True)
    t.add_argument("--X", type=float, required=True)
    t.add_argument("--Z", type=float, default=1.0)
    t.add_argument("--r-max", type=int, default=None)
    t.add_argument("--out", default=None)

    s = sub.add_parser("scaling", help="twisted sums at X = p^3 across primes")
    s.add_argument("--primes", required=True, help="comma-separated list")
    s.add_argument("--K", required=True)
    s.add_argument("--Z", type=float, default=1.0)
    s.add_argument("--out", default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cache_dir = args.cache_dir or os.environ.get("TRACELAB_CACHE") or ".tracelab-cache"
    cfg = RunConfig(cache_dir=Path(cache_dir), p_cap=args.p_cap,
                    parallel=args.parallel)
    if getattr(args, "tol", None) is not None:
        cfg.tolerances[args.check] = args.tol
    handlers = {"kloosterman": cmd_kloosterman, "dual6": cmd_dual6,
                "correlate": cmd_correlate, "twisted": cmd_twisted,
                "scaling": cmd_scaling}
    try:
        return handlers[args.command](args, cfg)
    except TracelabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
