"""Command-line frontend for the experiment suite.

Each subcommand runs one experiment and writes two artifacts: a CSV with a
fixed column order (byte-reproducible for a fixed config and seed) and a
JSON metadata sidecar carrying the config echo, seed, package version and
wall time (the only place timestamps appear).

Exit codes: 0 success, 2 config/usage error, 3 numeric guard tripped,
4 insufficient orbit or window data.

Defaults can be supplied in an INI config file with one section per
subcommand (keys match the long flag names); command-line flags override.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys
import time

import numpy as np

from . import __version__
from . import counterexample as cex
from . import nilfunc as nf
from . import systems as sysm
from . import uniformity as unif
from . import wwengine as ww
from .groups import GroupError, parse_group

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_DATA = 4

_DATA_ERROR_HINTS = ("cover", "shorter", "samples", "window K", "too large",
                     "margin")


def parse_schedule(spec: str):
    """Window schedules like '1024:65536:x2' (geometric) or '10:50:+10'."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad schedule {spec!r}; want start:stop:x2 or +k")
    start, stop, step = int(parts[0]), int(parts[1]), parts[2]
    out = []
    n = start
    if step.startswith("x"):
        q = int(step[1:])
        if q < 2 or start < 1:
            raise ValueError("geometric schedule needs x>=2 and start>=1")
        while n <= stop:
            out.append(n)
            n *= q
    elif step.startswith("+"):
        d = int(step[1:])
        if d < 1:
            raise ValueError("arithmetic schedule needs +k with k>=1")
        while n <= stop:
            out.append(n)
            n += d
    else:
        raise ValueError(f"bad schedule step {step!r}")
    if not out:
        raise ValueError("empty schedule")
    return out


def _make_system(name: str, alpha: float):
    if name == "rotation":
        return sysm.Rotation((alpha,)), [0.0]
    if name == "anzai":
        return sysm.AnzaiSkew(alpha), [0.0, 0.0]
    raise ValueError(f"unknown system {name!r}")


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, complex):
        return repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# experiment runners: each returns (header, rows, metadata)


def run_ww_run(args):
    system, x0 = _make_system(args.system, args.alpha)
    phi = sysm.interval_windows(parse_schedule(args.schedule))
    f = sysm.Character(tuple(int(v) for v in args.freqs.split(",")))
    length = args.orbit_length or phi.required_length()
    fo = sysm.orbit(system, x0, f, length)
    n = np.arange(len(fo))
    if args.weight == "resonant":
        w = np.exp(-2j * np.pi * ((args.alpha * n) % 1.0))
    elif args.weight == "none":
        w = np.ones(len(fo))
    elif args.weight.startswith("linear:"):
        beta = float(args.weight.split(":", 1)[1])
        w = np.exp(2j * np.pi * ((beta * n) % 1.0))
    else:
        raise ValueError(f"unknown weight {args.weight!r}")
    rep = ww.weighted_average(fo, w, phi)
    rows = [(r["N"], r["b"], r["value"].real, r["value"].imag,
             abs(r["value"])) for r in rep.rows]
    return ["N", "b", "re", "im", "abs"], rows, {"system": args.system}


def run_ww_sup(args):
    system, x0 = _make_system(args.system, args.alpha)
    phi = sysm.interval_windows(parse_schedule(args.schedule))
    f = sysm.Character(tuple(int(v) for v in args.freqs.split(",")))
    fo = sysm.orbit(system, x0, f, phi.required_length())
    rep = ww.uniform_sup_linear(fo, phi, pad=args.pad)
    rows = [(r["N"], r["value"], r["correction_bound"]) for r in rep.rows]
    return ["N", "sup", "correction_bound"], rows, {"system": args.system}


def run_vdc_check(args):
    rng = np.random.default_rng(args.seed)
    rows = []
    for trial in range(args.trials):
        u = (rng.uniform(-1, 1, args.n + args.k) +
             1j * rng.uniform(-1, 1, args.n + args.k))
        lhs, rhs, rem = ww.van_der_corput_check(u, args.n, args.k)
        rows.append((trial, lhs, rhs, rem, 2 * rhs + rem - lhs))
    return (["trial", "lhs", "rhs_main", "remainder", "slack"], rows,
            {"N": args.n, "K": args.k})


def run_gowers(args):
    rng = np.random.default_rng(args.seed)
    n = args.n
    if args.seq == "random":
        vals = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    elif args.seq == "character":
        vals = np.exp(2j * np.pi * args.freq * np.arange(n) / n)
    elif args.seq == "indicator":
        vals = np.zeros(n)
        vals[0] = 1.0
    else:
        raise ValueError(f"unknown sequence kind {args.seq!r}")
    f = unif.cyclic(vals)
    if args.gowers_method == "brute":
        est = unif.gowers_norm_brute(f, args.k)
    elif args.gowers_method == "fft":
        if args.k != 2:
            raise ValueError("the FFT method is level 2 only")
        est = unif.gowers_u2_fft(f)
    else:
        est = unif.gowers_norm_cyclic(f, args.k)
    return (["method", "k", "N", "K", "value"], [est.row()],
            {"sequence": args.seq})


def run_bessel_check(args):
    rng = np.random.default_rng(args.seed)
    F = None
    for _ in range(args.modes):
        m = int(rng.integers(-3, 4))
        if m == 0:
            part = nf.heisenberg_trig(
                {(int(rng.integers(-2, 3)), int(rng.integers(-2, 3))):
                 complex(rng.standard_normal(), rng.standard_normal())})
        else:
            part = nf.heisenberg_theta(
                m, c=complex(rng.standard_normal(), rng.standard_normal()),
                k=int(rng.integers(-2, 3)), t0=float(rng.uniform()),
                x0=float(rng.uniform()))
        F = part if F is None else F + part
    rows = []
    for p in (int(v) for v in args.p.split(",")):
        lhs, rhs = nf.bessel_check(F, p, M=args.quad)
        rows.append((p, lhs, rhs, rhs - lhs))
    return ["p", "lhs", "rhs", "slack"], rows, {"modes": args.modes}


def run_sobolev(args):
    group = parse_group(args.group)
    k = ww.sobolev_order(group)
    if args.group.startswith("abelian"):
        F = nf.trig_polynomial(group, {(1,) * group.dim: 1.0})
    elif args.group == "heisenberg3":
        F = nf.heisenberg_theta(1)
    else:
        raise ValueError("sample functions exist for abelian/heisenberg3 only")
    norm = nf.sobolev_norm(F, args.j, args.p, M=args.quad,
                           method=args.method)
    return (["group", "order_k", "j", "p", "method", "norm"],
            [(args.group, k, args.j, args.p, args.method, norm)], {})


def run_counterexample(args):
    schedule = parse_schedule(args.n_schedule)
    seeds = ([int(s) for s in args.seed_list.split(",")] if args.seed_list
             else list(range(args.seeds)))
    rows_raw, medians = cex.growth_experiment(schedule, seeds, args.profile)
    rows = [(r["N"], r["seed"], r["l2sq"], r["u2"], r["sup"], r["ratio"])
            for r in rows_raw]
    return (["N", "seed", "l2sq", "u2", "sup", "ratio"], rows,
            {"medians": medians, "profile": args.profile,
             "generator": "numpy default_rng (PCG64)"})


def run_multi_avg(args):
    phi = sysm.interval_windows(parse_schedule(args.schedule))
    rot = sysm.Rotation((args.alpha,))
    wseq = sysm.orbit(rot, [0.0], sysm.Character((1,)),
                      phi.required_length())
    polys = [tuple(int(c) for c in p.split(",")) for p in
             args.polys.split(";")]
    freqs = [int(m) for m in args.freqs.split(",")]
    rep = ww.weighted_multiple_average(wseq, args.beta, polys, freqs, phi,
                                       M=args.grid)
    rows = [(r["N"], r["coefficient"].real, r["coefficient"].imag,
             "" if np.isnan(r["value"]) else r["value"]) for r in rep.rows]
    return (["N", "coeff_re", "coeff_im", "cauchy_l2"], rows,
            {"beta": args.beta, "polys": args.polys, "freqs": args.freqs})


REGISTRY = {
    "ww-run": ("weighted averages along interval windows "
               "(plain, resonant or linear-phase weights)", run_ww_run),
    "ww-sup": ("sup over all linear phase weights per window via padded FFT",
               run_ww_sup),
    "vdc-check": ("finite-N van der Corput inequality on random sequences",
                  run_vdc_check),
    "gowers": ("cyclic Gowers norms (brute / fft / recursive)", run_gowers),
    "bessel-check": ("vertical-mode Bessel inequality on random functions",
                     run_bessel_check),
    "sobolev": ("Sobolev norms and the filtration derivative order",
                run_sobolev),
    "counterexample": ("random trig polynomial growth experiment",
                       run_counterexample),
    "multi-avg": ("weighted multiple averages over a rotation target",
                  run_multi_avg),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilergodic",
        description="numerical experiments with nilsequences and "
                    "uniformity norms")
    parser.add_argument("--config", help="INI file with per-subcommand "
                        "defaults")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    def add(name, **kwargs):
        p = sub.add_parser(name, help=REGISTRY[name][0], **kwargs)
        p.add_argument("--out", default=name, help="output path prefix")
        return p

    p = add("ww-run")
    p.add_argument("--system", default="rotation",
                   choices=["rotation", "anzai"])
    p.add_argument("--alpha", type=float, default=np.sqrt(2) - 1)
    p.add_argument("--freqs", default="1")
    p.add_argument("--weight", default="none")
    p.add_argument("--schedule", default="1024:65536:x2")
    p.add_argument("--orbit-length", type=int, default=0,
                   help="cap the sampled orbit (0 = cover all windows)")

    p = add("ww-sup")
    p.add_argument("--system", default="anzai",
                   choices=["rotation", "anzai"])
    p.add_argument("--alpha", type=float, default=np.sqrt(2) - 1)
    p.add_argument("--freqs", default="0,1")
    p.add_argument("--schedule", default="8192:131072:x2")
    p.add_argument("--pad", type=int, default=4)

    p = add("vdc-check")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--k", type=int, default=50)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = add("gowers")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--gowers-method", default="recursive",
                   choices=["brute", "fft", "recursive"])
    p.add_argument("--seq", default="random",
                   choices=["random", "character", "indicator"])
    p.add_argument("--freq", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    p = add("bessel-check")
    p.add_argument("--modes", type=int, default=4)
    p.add_argument("--p", default="2,4,8")
    p.add_argument("--quad", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)

    p = add("sobolev")
    p.add_argument("--group", default="heisenberg3")
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--quad", type=int, default=32)
    p.add_argument("--method", default="analytic",
                   choices=["analytic", "fd"])

    p = add("counterexample")
    p.add_argument("--n-schedule", default="1024:65536:x2")
    p.add_argument("--seeds", type=int, default=8,
                   help="number of seeds 0..s-1")
    p.add_argument("--seed-list", default="",
                   help="explicit comma-separated seeds (overrides --seeds)")
    p.add_argument("--profile", default="default",
                   choices=sorted(cex.PROFILES))

    p = add("multi-avg")
    p.add_argument("--alpha", type=float, default=np.sqrt(2) - 1)
    p.add_argument("--beta", type=float, default=(np.sqrt(5) - 1) / 2)
    p.add_argument("--polys", default="0,1;0,0,1",
                   help="';'-separated ascending coefficient lists")
    p.add_argument("--freqs", default="1,1")
    p.add_argument("--schedule", default="1024:65536:x2")
    p.add_argument("--grid", type=int, default=512)

    p = sub.add_parser("list", help="print the experiment registry")
    p.add_argument("--json", action="store_true")
    return parser


def _apply_config(parser, argv):
    """Pre-scan for --config and fold the matching section into defaults."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    try:
        path = argv[i + 1]
    except IndexError:
        parser.error("--config needs a path")
    cfg = configparser.ConfigParser()
    read = cfg.read(path)
    if not read:
        parser.error(f"cannot read config file {path}")
    command = next((a for a in argv if not a.startswith("-")
                    and a in REGISTRY), None)
    if command and cfg.has_section(command):
        section = {k.replace("-", "_"): v for k, v in cfg[command].items()}
        for action in parser._subparsers._group_actions[0].choices[
                command]._actions:
            if action.dest in section:
                raw = section[action.dest]
                action.default = (action.type(raw) if action.type else raw)
    return argv


def _write_outputs(prefix, header, rows, meta, args, started):
    csv_path = f"{prefix}.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    sidecar = {
        "experiment": args.command,
        "version": __version__,
        "config": {k: v for k, v in sorted(vars(args).items())
                   if k not in ("command",)},
        "metadata": meta,
        "wall_time_s": time.time() - started,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    with open(f"{prefix}.meta.json", "w") as fh:
        json.dump(sidecar, fh, indent=2, default=str)
    return csv_path


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    argv = _apply_config(parser, argv)
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage()
        return EXIT_CONFIG
    if args.command == "list":
        if args.json:
            print(json.dumps({k: v[0] for k, v in REGISTRY.items()},
                             indent=2))
        else:
            for name, (desc, _) in REGISTRY.items():
                print(f"{name:16s} {desc}")
        return 0
    runner = REGISTRY[args.command][1]
    started = time.time()
    try:
        header, rows, meta = runner(args)
    except GroupError as exc:
        print(json.dumps({"error": "config", "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        kind = (EXIT_DATA if any(h in str(exc) for h in _DATA_ERROR_HINTS)
                else EXIT_NUMERIC)
        print(json.dumps({"error": "data" if kind == EXIT_DATA
                          else "numeric", "detail": str(exc)}),
              file=sys.stderr)
        return kind
    csv_path = _write_outputs(args.out, header, rows, meta, args, started)
    print(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
