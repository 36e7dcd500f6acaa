"""Command-line front end.

Subcommands build surface files, compute distances and minimum-weight
counts, run Monte Carlo cells and threshold scans, evaluate the closed-form
failure bound, emit the overhead table, and check the twist identities.
Randomized commands either take --seed or print the seed they chose, so any
run can be replayed bit for bit; --jobs (or the HYPSC_JOBS environment
variable) only changes wall time, never the numbers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import dehn, experiments
from .builders import catalog_names, from_catalog, hyperbolic_45, rotated_toric, semi_hyperbolic, toric
from .decoder import NoiseParams
from .distance import count_min_weight
from .surface import CssCode, TiledSurface, derive_code


def _default_jobs() -> int:
    raw = os.environ.get("HYPSC_JOBS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"HYPSC_JOBS must be an integer, got {raw!r}")


def _load_surface(path: str) -> TiledSurface:
    p = Path(path)
    if not p.is_file():
        raise ValueError(f"no such code file: {path}")
    return TiledSurface.from_json(p.read_text())


def _load_code(path: str) -> CssCode:
    return derive_code(_load_surface(path))


def _sidecar_path(code_path: str) -> Path:
    p = Path(code_path)
    return p.with_name(p.name + ".distances.json")


def _read_sidecar(code_path: str) -> dict:
    p = _sidecar_path(code_path)
    if p.is_file():
        try:
            data = json.loads(p.read_text())
            if isinstance(data, dict):
                return data
        except (OSError, json.JSONDecodeError):
            pass
    return {}


def _write_sidecar(code_path: str, updates: dict) -> None:
    data = _read_sidecar(code_path)
    data.update(updates)
    try:
        _sidecar_path(code_path).write_text(json.dumps(data, sort_keys=True) + "\n")
    except OSError:
        pass  # the cache is an optimization, never a requirement


def _resolve_rounds(spec: str, code_path: str, code: CssCode) -> int:
    if spec != "auto":
        t = int(spec)
        if t < 1:
            raise ValueError(f"--rounds must be positive, got {t}")
        return t
    cached = _read_sidecar(code_path).get("d_z")
    if isinstance(cached, int) and cached > 0:
        code.d_z = cached
        return cached
    d_z = experiments.z_distance(code)
    _write_sidecar(code_path, {"d_z": d_z})
    return d_z


def _parse_q(spec: str, p: float) -> float:
    if spec == "equal":
        return p
    return float(spec)


def _pick_seed(explicit: int | None, *, echo_to: str) -> int:
    """Use the given seed, or draw one and announce it."""
    if explicit is not None:
        return explicit
    seed = int.from_bytes(os.urandom(8), "big")
    stream = sys.stderr if echo_to == "stderr" else sys.stdout
    print(f"seed={seed}", file=stream)
    return seed


def _cmd_build(args) -> int:
    family = args.family
    if family == "toric":
        surf = toric(int(args.param))
    elif family == "rotated-toric":
        surf = rotated_toric(int(args.param))
    elif family == "hyperbolic-45":
        surf = hyperbolic_45(args.param)
    elif family == "semi-hyperbolic":
        if not args.base:
            raise ValueError("--family semi-hyperbolic needs --base <code.json|catalog>")
        base_path = Path(args.base)
        if base_path.is_file():
            base = TiledSurface.from_json(base_path.read_text())
        elif args.base in catalog_names():
            base = from_catalog(args.base)
        else:
            raise ValueError(f"--base {args.base!r} is neither a file nor a catalog name")
        surf = semi_hyperbolic(base, int(args.param))
    else:
        raise ValueError(f"unknown family {family!r}")
    Path(args.out).write_text(surf.to_json() + "\n")
    print(
        f"wrote {args.out}: name={surf.name} n={len(surf.edges)} "
        f"vertices={surf.vertex_count} faces={len(surf.faces)} genus={surf.genus()}"
    )
    return 0


def _cmd_distance(args) -> int:
    code = _load_code(args.code)
    sides = ["z", "x"] if args.side == "both" else [args.side]
    dists, counts = [], []
    cache: dict = {}
    for side in sides:
        if args.count:
            d, n_d = count_min_weight(code, side)
            counts.append(f"n_d_{side}={n_d}")
            cache[f"n_d_{side}"] = n_d
        else:
            d = experiments.z_distance(code) if side == "z" else experiments.x_distance(code)
        dists.append(f"d_{side}={d}")
        cache[f"d_{side}"] = d
    print(" ".join(dists + counts))
    _write_sidecar(args.code, cache)
    return 0


def _cmd_simulate(args) -> int:
    code = _load_code(args.code)
    T = _resolve_rounds(args.rounds, args.code, code)
    q = _parse_q(args.q, args.p)
    noise = NoiseParams(p=args.p, q=q, T=T)
    seed = _pick_seed(args.seed, echo_to="stderr" if args.out is None else "stdout")
    result = experiments.estimate(
        code, noise, args.samples, seed, side=args.side, jobs=args.jobs
    )
    if args.out is None:
        experiments.scan_to_csv([result], sys.stdout)
    else:
        experiments.scan_to_csv([result], args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_threshold(args) -> int:
    cfg_path = Path(args.config)
    if not cfg_path.is_file():
        raise ValueError(f"no such config: {args.config}")
    result = experiments.run_config(cfg_path, jobs=args.jobs, base_dir=cfg_path.parent)
    experiments.scan_to_csv(result.rows, args.out)
    print(f"wrote {args.out} ({len(result.rows)} rows)")
    for (a, b), p in result.crossings.items():
        where = "none" if p is None else repr(p)
        print(f"crossing {a} | {b}: {where}")
    for label, p_prev, p_next in result.monotone_violations:
        print(
            f"warning: P-bar for {label} drops between p={p_prev} and p={p_next}",
            file=sys.stderr,
        )
    return 0


def _cmd_pmax(args) -> int:
    code = _load_code(args.code)
    T = None if args.rounds == "auto" else int(args.rounds)
    seed = 0
    if args.mode == "mc":
        seed = _pick_seed(args.seed, echo_to="stdout")
    value = experiments.p_max(
        code,
        args.target,
        args.mode,
        quantity=args.quantity,
        side=args.side,
        T=T,
        seed=seed,
        jobs=args.jobs,
    )
    print(f"p_max={value!r}")
    return 0


def _cmd_overhead(args) -> int:
    cfg_path = Path(args.config)
    if not cfg_path.is_file():
        raise ValueError(f"no such config: {args.config}")
    cfg = json.loads(cfg_path.read_text())
    if "codes" not in cfg:
        raise ValueError("overhead config needs a 'codes' list")
    codes = [experiments.resolve_code_entry(e, cfg_path.parent) for e in cfg["codes"]]
    rows = experiments.overhead_table(
        codes,
        float(cfg.get("target_p_round", 1e-8)),
        side=cfg.get("side", "z"),
        both_sides=bool(cfg.get("both_sides", False)),
    )
    experiments.overhead_to_csv(rows, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_dehn_verify(args) -> int:
    code = _load_code(args.code) if args.code else None
    results = dehn.run_checks(args.genus, code=code)
    failed = 0
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name} ({detail})")
        failed += 0 if ok else 1
    if failed:
        print(f"{failed} of {len(results)} checks failed", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypsc",
        description="Surface-code construction, distances, decoding experiments and twist checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a code file")
    p.add_argument("--family", required=True,
                   choices=["toric", "rotated-toric", "hyperbolic-45", "semi-hyperbolic"])
    p.add_argument("--param", required=True,
                   help="lattice size L, subdivision l, or qubit count for hyperbolic-45")
    p.add_argument("--base", help="base surface for semi-hyperbolic (file or catalog name)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("distance", help="exact distances, optionally with operator counts")
    p.add_argument("code")
    p.add_argument("--count", action="store_true")
    p.add_argument("--side", choices=["z", "x", "both"], default="both")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of one noise cell")
    p.add_argument("code")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", default="equal", help="'equal' for q=p, or an explicit value")
    p.add_argument("--rounds", default="auto", help="'auto' for T = d_Z, or an explicit count")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--side", choices=["z", "x", "both"], default="both")
    p.add_argument("--out", help="CSV path; stdout when omitted")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("threshold", help="run a threshold scan config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("pmax", help="highest p meeting a failure target")
    p.add_argument("code")
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--mode", choices=["mc", "formula"], required=True)
    p.add_argument("--quantity", choices=["pbar", "p_round"], default="pbar")
    p.add_argument("--side", choices=["z", "x"], default="z")
    p.add_argument("--rounds", default="auto")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.set_defaults(func=_cmd_pmax)

    p = sub.add_parser("overhead", help="rate-versus-p_max table for a code list")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_overhead)

    p = sub.add_parser("dehn-verify", help="check twist identities and one circuit twist")
    p.add_argument("--code", help="verify a circuit-level twist on this code file")
    p.add_argument("--genus", type=int, default=2)
    p.set_defaults(func=_cmd_dehn_verify)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
