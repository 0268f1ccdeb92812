"""``verify``: run identity checks and write a JSON report.

Exit status is 0 when every executed check passes, 1 when any check fails and
2 on configuration errors (unknown ids, malformed config, bad tolerance).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .identities import (AMBIENT_CHECKS, DEFAULT_TARGETS, REGISTRY, ConfigError, RunConfig, Target,
                         build_immersion, run_suite, space_n)
from .spaces import FACTOR_FAMILIES, IMMERSION_IDS

CONFIG_KEYS = {"spaces", "factors", "immersions", "targets", "checks", "samples", "probes", "seed", "tol", "report",
               "threads"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description=__doc__.splitlines()[0])
    p.add_argument("--space", action="append", help="e.g. sasakian:n=2 (repeatable)")
    p.add_argument("--factor", action="append", help="e.g. linear_z:a=0.3 or quad:c=0.1 (repeatable)")
    p.add_argument("--immersion", action="append", help="catalog id, e.g. invariant_1_in_2 (repeatable)")
    p.add_argument("--checks", help="comma-separated check ids, or 'all'")
    p.add_argument("--samples", type=int)
    p.add_argument("--probes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--report", help="path of the JSON report")
    p.add_argument("--config", help="JSON file with the same keys; flags take precedence")
    p.add_argument("--list", action="store_true", help="print check ids and catalog ids")
    return p


def load_config_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def _as_list(v) -> list:
    if v is None:
        return []
    return [v] if isinstance(v, str) else list(v)


def _parse_checks(v) -> tuple:
    if v is None:
        return ("all",)
    items = [c.strip() for c in (v.split(",") if isinstance(v, str) else v) if c.strip()]
    for c in items:
        if c != "all" and c not in REGISTRY:
            raise ConfigError(f"unknown check id {c!r}")
    return tuple(items)


def merge(args: argparse.Namespace) -> tuple:
    """Combine the config file and flags into (RunConfig, report path)."""
    data = load_config_file(args.config) if args.config else {}
    flags = {"spaces": args.space, "factors": args.factor, "immersions": args.immersion, "checks": args.checks,
             "samples": args.samples, "probes": args.probes, "seed": args.seed, "tol": args.tol,
             "report": args.report}
    data.update({k: v for k, v in flags.items() if v is not None})
    checks = _parse_checks(data.get("checks"))
    if "targets" in data and not any(flags[k] for k in ("spaces", "factors", "immersions")):
        targets = [Target(t.get("space", "sasakian:n=1"), t.get("factor", "const:c=0"), t.get("immersion"),
                          _parse_checks(t.get("checks", list(checks)))) for t in data["targets"]]
    else:
        targets = cartesian_targets(_as_list(data.get("spaces")), _as_list(data.get("factors")),
                                    _as_list(data.get("immersions")), checks)
    try:
        cfg = RunConfig(targets, samples=int(data.get("samples", 8)), probes=int(data.get("probes", 4)),
                        seed=int(data.get("seed", 0)), tol=float(data.get("tol", 1e-7)),
                        threads=data.get("threads"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config value: {exc}") from exc
    cfg.validate()
    return cfg, data.get("report")


def cartesian_targets(spaces: list, factors: list, immersions: list, checks: tuple) -> list:
    if not spaces and not factors and not immersions:
        return default_targets_for(checks)
    factors = factors or ["const:c=0"]
    # With immersions present the bare spaces only carry the ambient checks.
    ambient = checks if not immersions or "all" in checks else tuple(c for c in checks if c in AMBIENT_CHECKS)
    out = []
    for s in (spaces or (["sasakian:n=1"] if not immersions else [])) if ambient else []:
        for f in factors:
            out.append(Target(s, f, None, ambient))
    for imm in immersions:
        n = build_immersion(imm)[1]
        matching = [s for s in spaces if space_n(s) in (None, n)] if spaces else [f"sasakian:n={n}"]
        if not matching:
            raise ConfigError(f"immersion {imm!r} needs an n={n} space; none of {spaces} matches")
        for s in matching:
            for f in factors:
                out.append(Target(s, f, imm, checks))
    return out


def default_targets_for(checks: tuple) -> list:
    if checks == ("all",):
        return list(DEFAULT_TARGETS)
    out = []
    for t in DEFAULT_TARGETS:
        allowed = set(checks) if "all" in t.checks else set(checks) & set(t.checks)
        if t.immersion is None:
            allowed &= set(AMBIENT_CHECKS)
        keep = tuple(c for c in checks if c in allowed)
        if keep:
            out.append(Target(t.space, t.factor, t.immersion, keep))
    return out


def print_listing(out=None) -> None:
    out = out or sys.stdout
    print("checks:", file=out)
    for cid, c in REGISTRY.items():
        kind = "submanifold" if c.needs_immersion else "ambient"
        print(f"  {cid:8s} {kind:11s} {c.title}", file=out)
    print("immersions:", file=out)
    for i in IMMERSION_IDS:
        print(f"  {i}", file=out)
    print("factor families:", file=out)
    for k, v in FACTOR_FAMILIES.items():
        print(f"  {k:9s} {v}", file=out)
    print("spaces:\n  sasakian:n=<1|2|3>[,phi_scale=<s>][,metric_eps=<e>]", file=out)


def _fmt(v) -> str:
    return "-" if v is None else f"{v:.2e}"


def print_summary(report: dict, out=None) -> None:
    out = out or sys.stdout
    for r in report["checks"]:
        extra = r["reason"] or (("errata: " + ", ".join(r["errata"])) if r["errata"] else "")
        print(f"{r['status']:17s} {r['id']:8s} rel={_fmt(r['relative_residual'])} {r['space']} "
              f"{r['immersion'] or ''} {extra}".rstrip(), file=out)
    s = report["summary"]
    print(f"pass={s['pass']} pass_with_erratum={s['pass_with_erratum']} fail={s['fail']} "
          f"not_applicable={s['not_applicable']}", file=out)


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list:
        print_listing()
        return 0
    try:
        cfg, report_path = merge(args)
        report = run_suite(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if report["checks"] and report_path:
        Path(report_path).write_text(json.dumps(report, indent=2) + "\n")
    print_summary(report)
    return 0 if report["summary"]["fail"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
