"""Command-line sweep runner.

Exit codes: 0 success, 1 some points failed, 2 config error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .sweep import ConfigError, SweepConfig, run_sweep, write_output

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _f_grid(text: str):
    # "start:stop:count" or a comma list
    if ":" in text:
        start, stop, count = text.split(":")
        return {"start": float(start), "stop": float(stop), "count": int(count)}
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shearbounds",
        description="Sweep upper and lower bounds on the effective shear speed of periodic composites.",
    )
    ap.add_argument("--config", required=True, help="sweep config (JSON)")
    ap.add_argument("--N", help="truncation orders, e.g. 0,1,2 or 0-5")
    ap.add_argument("--f-grid", help="filling fractions: start:stop:count or a comma list")
    ap.add_argument("--method", choices=("pwe", "mm", "both"))
    ap.add_argument("--backend", choices=("auto", "piecewise_exp", "product", "peano"))
    ap.add_argument("--steps", type=int, help="product-rule steps per unit length")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--out", help="output path ('-' for stdout)")
    ap.add_argument("--oracle-mode", action="store_true", default=None, help="skip the cubic-symmetry gate")
    ap.add_argument("--workers", type=int, help="parallel worker processes")
    return ap


def load_config(args) -> SweepConfig:
    with open(args.config, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    try:
        if args.N is not None:
            data["N"] = _int_list(args.N)
        if args.f_grid is not None:
            data["f_grid"] = _f_grid(args.f_grid)
    except ValueError as exc:
        raise ConfigError(f"bad command-line value: {exc}") from None
    flags = {
        "method": args.method,
        "backend": args.backend,
        "steps": args.steps,
        "format": args.format,
        "output": args.out,
        "oracle_mode": args.oracle_mode,
        "workers": args.workers,
    }
    data.update({k: v for k, v in flags.items() if v is not None})
    return SweepConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    results = run_sweep(config)
    try:
        write_output(results, config.format, config.output)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    failed = [r for r in results if r.error]
    for r in failed:
        print(f"point f={r.f!r} N={r.N} method={r.method} failed: {r.error}", file=sys.stderr)
    return EXIT_PARTIAL if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
