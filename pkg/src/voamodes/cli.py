"""Command-line front end: verify / tables / intertwiner.

Exit codes: 0 all checks pass, 1 at least one suite failed, 2 bad
configuration, 3 the configured truncation bounds are too tight for a
requested computation.  JSON output is deterministic byte-for-byte for a
fixed configuration and seed; timing is printed to the console only.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace as _dc_replace

from .correspondence import rho_n
from .errors import TruncationOverflow
from .fock import FockModule, fock_intertwiner
from .heisenberg import FockVector, Heisenberg
from .matrices import left_entry, right_entry
from .series import rat, rat_str
from .suites import ConfigError, RunConfig, SUITE_NAMES, run_suites

REPORT_SCHEMA = "voa-modes-report/1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_TRUNCATION = 3


def _parse_charges(text: str):
    return tuple(rat(part) for part in text.split(",") if part.strip())


def _parse_pair(text: str):
    bits = [b for b in text.replace("..", ",").split(",") if b.strip()]
    if len(bits) != 2:
        raise ConfigError(f"expected two integers, got {text!r}")
    return (int(bits[0]), int(bits[1]))


def load_config_file(path: str) -> dict:
    """Flat key = value lines; '#' comments; rationals as p/q."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


_CONFIG_KEYS = {
    "N": ("n", int),
    "L_max": ("l_max", int),
    "charges": ("charges", _parse_charges),
    "p_window": ("p_window", _parse_pair),
    "max_v_weight": ("max_v_weight", int),
    "suites": ("suites", lambda s: tuple(x.strip() for x in s.split(",") if x.strip())),
    "seed": ("seed", int),
    "workers": ("workers", int),
}


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            field, conv = _CONFIG_KEYS[key]
            try:
                cfg = _replace(cfg, field, conv(value))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"bad value for {key}: {value!r} ({exc})")
    if getattr(args, "N", None) is not None:
        cfg = _replace(cfg, "n", args.N)
    if getattr(args, "lmax", None) is not None:
        cfg = _replace(cfg, "l_max", args.lmax)
    if getattr(args, "seed", None) is not None:
        cfg = _replace(cfg, "seed", args.seed)
    if getattr(args, "max_v_weight", None) is not None:
        cfg = _replace(cfg, "max_v_weight", args.max_v_weight)
    if getattr(args, "charges", None):
        cfg = _replace(cfg, "charges", _parse_charges(args.charges))
    if getattr(args, "workers", None) is not None:
        cfg = _replace(cfg, "workers", args.workers)
    if getattr(args, "suite", None):
        cfg = _replace(cfg, "suites", tuple(args.suite))
    return cfg.validate()


def _replace(cfg: RunConfig, field: str, value) -> RunConfig:
    return _dc_replace(cfg, **{field: value})


def _vec_json(vec: FockVector) -> dict:
    return {_partition_str(p): rat_str(c) for p, c in sorted(vec.terms.items())}


def _partition_str(p: tuple) -> str:
    return ",".join(str(x) for x in p)


def _dump_json(payload, path) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    def echo(report):
        status = "PASS" if report.ok else "FAIL"
        line = (f"{report.suite:<20} {status}  cases={report.cases}"
                f"  [{report.wall_ms:.0f} ms]")
        print(line)
        if not report.ok:
            print(f"  first failure: {report.first_failure}")

    try:
        reports = run_suites(cfg, echo=echo)
    except TruncationOverflow as exc:
        print(f"truncation overflow: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    payload = {
        "schema": REPORT_SCHEMA,
        "config": cfg.echo(),
        "suites": [r.row() for r in reports],
        "pass": all(r.ok for r in reports),
    }
    if args.json:
        _dump_json(payload, args.json)
    return EXIT_OK if payload["pass"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# tables


def cmd_tables(args) -> int:
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.target not in ("algebra", "bimodule"):
        print("target must be 'algebra' or 'bimodule'", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = _table_rows(cfg, args.target)
    except TruncationOverflow as exc:
        print(f"truncation overflow: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["action", "charge", "k", "n", "l", "left",
                             "right", "result", "coeff"])
            for row in rows:
                writer.writerow(row)
    else:
        payload = {
            "schema": "voa-modes-tables/1",
            "target": args.target,
            "config": cfg.echo(),
            "rows": [dict(zip(("action", "charge", "k", "n", "l", "left",
                               "right", "result", "coeff"), row))
                     for row in rows],
        }
        _dump_json(payload, args.json)
    return EXIT_OK


def _table_rows(cfg: RunConfig, target: str):
    voa = Heisenberg(weight_cap=max(cfg.l_max, 2 * cfg.max_v_weight + 2 * cfg.n))
    vb = voa.basis_upto(cfg.max_v_weight)
    rows = []
    idx = range(cfg.n + 1)
    if target == "algebra":
        for u in vb:
            pu = next(iter(u.terms))
            for v in vb:
                pv = next(iter(v.terms))
                for k in idx:
                    for n in idx:
                        for l in idx:
                            entry = left_entry(u, v, k, n, l)
                            for p, c in sorted(entry.terms.items()):
                                rows.append(("product", "0", k, n, l,
                                             _partition_str(pu),
                                             _partition_str(pv),
                                             _partition_str(p), rat_str(c)))
        return rows
    for charge in cfg.charges:
        M = FockModule(charge, cfg.l_max)
        for v in vb:
            pv = next(iter(v.terms))
            for lw in range(cfg.n + 1):
                for w in M.basis(lw):
                    pw = next(iter(w.terms))
                    for k in idx:
                        for n in idx:
                            for l in idx:
                                entry = left_entry(v, w, k, n, l)
                                for p, c in sorted(entry.terms.items()):
                                    rows.append(("left", rat_str(charge), k, n,
                                                 l, _partition_str(pv),
                                                 _partition_str(pw),
                                                 _partition_str(p), rat_str(c)))
                                entry = right_entry(w, v, k, n, l)
                                for p, c in sorted(entry.terms.items()):
                                    rows.append(("right", rat_str(charge), k, n,
                                                 l, _partition_str(pw),
                                                 _partition_str(pv),
                                                 _partition_str(p), rat_str(c)))
    return rows


# ---------------------------------------------------------------------------
# intertwiner


def cmd_intertwiner(args) -> int:
    try:
        cfg = build_config(args)
        lam1 = rat(args.l1)
        lam2 = rat(args.l2)
    except (ConfigError, ValueError, ZeroDivisionError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        Y = fock_intertwiner(lam1, lam2, cfg.l_max)
        table = rho_n(Y, cfg.n, w1_levels=cfg.l_max)
    except TruncationOverflow as exc:
        print(f"truncation overflow: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    entries = []
    for key in table.sorted_keys():
        k, l, nu, mu = key
        entries.append({
            "k": k,
            "l": l,
            "w1": _partition_str(nu),
            "w2": _partition_str(mu),
            "value": _vec_json(table.entries[key]),
        })
    payload = {
        "schema": "voa-modes-intertwiner/1",
        "lam1": rat_str(lam1),
        "lam2": rat_str(lam2),
        "lam3": rat_str(lam1 + lam2),
        "lowest_weights": {
            "h1": rat_str(lam1 * lam1 / 2),
            "h2": rat_str(lam2 * lam2 / 2),
            "h3": rat_str((lam1 + lam2) * (lam1 + lam2) / 2),
        },
        "h_shift": rat_str(Y.h_shift()),
        "leading_exponent": rat_str(lam1 * lam2),
        "N": cfg.n,
        "entries": entries,
    }
    _dump_json(payload, args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voa-modes",
        description="Exact verification of matrix-mode algebra identities "
                    "on free-boson Fock modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value configuration file")
        p.add_argument("--N", type=int, help="matrix index bound")
        p.add_argument("--lmax", type=int, help="level truncation bound")
        p.add_argument("--seed", type=int, help="seed for randomized grids")
        p.add_argument("--max-v-weight", dest="max_v_weight", type=int,
                       help="largest algebra weight in the grids")
        p.add_argument("--charges", help="comma-separated rational charges")
        p.add_argument("--workers", type=int, help="concurrent suite count")

    pv = sub.add_parser("verify", help="run verification suites")
    common(pv)
    pv.add_argument("--suite", action="append", choices=SUITE_NAMES,
                    help="run only the named suite (repeatable)")
    pv.add_argument("--json", help="write the JSON report here ('-' = stdout)")
    pv.set_defaults(func=cmd_verify)

    pt = sub.add_parser("tables", help="emit structure-constant tables")
    common(pt)
    pt.add_argument("--target", required=True, choices=("algebra", "bimodule"))
    pt.add_argument("--json", help="JSON output path ('-' = stdout)")
    pt.add_argument("--csv", help="CSV output path (overrides --json)")
    pt.set_defaults(func=cmd_tables)

    pi = sub.add_parser("intertwiner", help="emit an intertwiner map table")
    common(pi)
    pi.add_argument("--l1", required=True, help="first charge, as p/q")
    pi.add_argument("--l2", required=True, help="second charge, as p/q")
    pi.add_argument("--json", help="JSON output path ('-' = stdout)")
    pi.set_defaults(func=cmd_intertwiner)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
