"""Monte Carlo campaigns and the closed-form failure estimates around them.

The pieces fit together like this: `estimate` wraps the decoder's failure
counter into an `McResult` (point estimate, Wilson interval, per-round
conversion); `threshold_scan` runs a grid of (code, p) cells and reads off
pairwise curve crossings; `p_max` inverts either the Monte Carlo estimate or
the low-p approximation formula to find the largest tolerable physical error
rate; `overhead_table` combines rates and p_max into one comparison table.

Scan results serialize to CSV with the fixed column set in `CSV_COLUMNS`.
Experiment configs are plain JSON:

    { "codes": [<file or catalog name or family:param>, ...],
      "p_grid": [...], "q_mode": "equal" | <float>,
      "T": "auto" | <int>, "samples": <int>, "seed": <int> }

Every randomized entry point is deterministic in (seed, parameters) and
independent of the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .builders import (
    catalog_names,
    from_catalog,
    rotated_toric,
    semi_hyperbolic,
    toric,
)
from .decoder import NoiseParams, mc_failures
from .distance import count_min_weight, min_weight_logical
from .surface import CssCode, TiledSurface, derive_code

CSV_COLUMNS = (
    "code",
    "n",
    "k",
    "d_z",
    "d_x",
    "p",
    "q",
    "T",
    "samples",
    "failures",
    "pbar",
    "pbar_lo",
    "pbar_hi",
    "p_round",
)

# two-sided 95% normal quantile, for Wilson scores
_Z95 = 1.959963984540054


def wilson_interval(
    failures: int, samples: int, z: float = _Z95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if samples <= 0:
        raise ValueError("need at least one sample")
    if not 0 <= failures <= samples:
        raise ValueError("failure count outside [0, samples]")
    phat = failures / samples
    denom = 1.0 + z * z / samples
    center = (phat + z * z / (2 * samples)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / samples + z * z / (4.0 * samples * samples))
        / denom
    )
    lo = 0.0 if failures == 0 else max(0.0, center - half)
    hi = 1.0 if failures == samples else min(1.0, center + half)
    return lo, hi


def p_round_from_pbar(pbar: float, T: int) -> float:
    """Per-round failure rate implied by the run-level rate after T rounds."""
    if not 0.0 <= pbar <= 1.0:
        raise ValueError("pbar outside [0, 1]")
    if T == 1:
        return pbar
    return 1.0 - (1.0 - pbar) ** (1.0 / T)


def pbar_from_p_round(p_round: float, T: int) -> float:
    return 1.0 - (1.0 - p_round) ** T


def z_distance(code: CssCode) -> int:
    """Z-side distance, cached on the code object."""
    if code.d_z is None:
        code.d_z = min_weight_logical(code, "z")[0]
    return code.d_z


def x_distance(code: CssCode) -> int:
    if code.d_x is None:
        code.d_x = min_weight_logical(code, "x")[0]
    return code.d_x


def min_weight_stats(code: CssCode, side: str) -> tuple[int, int]:
    """(distance, count of minimum-weight logicals) for one side, cached."""
    cache = code.meta.setdefault("min_weight", {})
    if side not in cache:
        cache[side] = count_min_weight(code, side)
        d = cache[side][0]
        if side == "z" and code.d_z is None:
            code.d_z = d
        if side == "x" and code.d_x is None:
            code.d_x = d
    return cache[side]


def resolve_rounds(code: CssCode, noise: NoiseParams) -> NoiseParams:
    """Fill in T = d_Z when the round count was left open."""
    if noise.T is not None:
        return noise
    return NoiseParams(noise.p, noise.q, z_distance(code))


@dataclass(frozen=True)
class McResult:
    """One Monte Carlo cell: code label and parameters, counts, the P-bar
    estimate with its 95% Wilson interval, and the per-round rate."""

    label: str
    n: int
    k: int
    d_z: int | None
    d_x: int | None
    p: float
    q: float
    T: int
    samples: int
    failures: int
    pbar: float
    pbar_lo: float
    pbar_hi: float
    p_round: float

    def csv_row(self) -> list:
        return [
            self.label,
            self.n,
            self.k,
            "" if self.d_z is None else self.d_z,
            "" if self.d_x is None else self.d_x,
            repr(self.p),
            repr(self.q),
            self.T,
            self.samples,
            self.failures,
            repr(self.pbar),
            repr(self.pbar_lo),
            repr(self.pbar_hi),
            repr(self.p_round),
        ]


def estimate(
    code: CssCode,
    noise: NoiseParams,
    samples: int,
    seed: int = 0,
    *,
    side: str = "both",
    jobs: int = 1,
    variants: int | None = None,
    label: str | None = None,
) -> McResult:
    """Estimate the logical failure rate of one (code, noise) cell.

    A noise spec with T=None gets T = d_Z. The result is identical for any
    `jobs` value.
    """
    noise = resolve_rounds(code, noise)
    failures, samples = mc_failures(
        code, noise, samples, seed, side=side, jobs=jobs, variants=variants
    )
    pbar = failures / samples
    lo, hi = wilson_interval(failures, samples)
    return McResult(
        label=label if label is not None else code.name,
        n=code.n,
        k=code.k,
        d_z=code.d_z,
        d_x=code.d_x,
        p=noise.p,
        q=noise.q,
        T=noise.T,
        samples=samples,
        failures=failures,
        pbar=pbar,
        pbar_lo=lo,
        pbar_hi=hi,
        p_round=p_round_from_pbar(pbar, noise.T),
    )


def approx_logical_error(
    n_d: int, d: int, T: int, p: float, noisy: bool = True
) -> float:
    """Leading-order failure estimate from the minimum-weight census.

    Half of the N_d weight-d logical classes survive decoding when d is
    even (ties), all contribute at odd d via weight-ceil(d/2) majorities;
    the dominant failures sit inside a single time slice, so noisy records
    scale the single-slice value by T.
    """
    half = math.ceil(d / 2)
    prefactor = 0.75 - 0.25 * (-1) ** d
    value = n_d * prefactor * math.comb(d, half) * p**half
    return T * value if noisy else value


def p_max(
    code: CssCode,
    target: float,
    mode: str = "formula",
    *,
    quantity: str = "pbar",
    side: str = "z",
    both_sides: bool = False,
    q_mode: str | float = "equal",
    T: int | None = None,
    seed: int = 0,
    samples_budget: int = 400_000,
    jobs: int = 1,
    p_hi: float = 0.2,
    rel_width: float = 0.05,
) -> float:
    """Largest physical error rate keeping the chosen failure quantity at
    or below `target`.

    `quantity` selects run-level "pbar" or per-round "p_round". Formula
    mode inverts the closed-form low-p value using the Z-side census by
    default (`both_sides` takes the minimum over Z and X). MC mode bisects
    in log p, re-estimating each probe with a growing sample count until
    the Wilson half-width drops under 20% of the target or the budget per
    probe is spent; it raises if `p_hi` does not bracket the target.
    """
    if quantity not in ("pbar", "p_round"):
        raise ValueError(f"unknown quantity {quantity!r}")
    if not 0.0 < target <= 1.0:
        raise ValueError("target must lie in (0, 1]")
    if target == 1.0:
        return p_hi
    if mode == "formula":
        sides = ("z", "x") if both_sides else (side,)
        best = None
        for s in sides:
            d, n_d = min_weight_stats(code, s)
            rounds = z_distance(code) if T is None else T
            coeff = approx_logical_error(
                n_d, d, rounds, 1.0, noisy=(quantity == "pbar")
            )
            value = (target / coeff) ** (1.0 / math.ceil(d / 2))
            best = value if best is None else min(best, value)
        return best
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}")

    mc_side = "both" if both_sides else side

    def probe(p: float) -> tuple[float, float, float]:
        q = p if q_mode == "equal" else float(q_mode)
        noise = resolve_rounds(code, NoiseParams(p, q, T))
        n = 4000
        while True:
            res = estimate(
                code, noise, n, seed, side=mc_side, jobs=jobs
            )
            if quantity == "pbar":
                val, lo, hi = res.pbar, res.pbar_lo, res.pbar_hi
            else:
                val = res.p_round
                lo = p_round_from_pbar(res.pbar_lo, noise.T)
                hi = p_round_from_pbar(res.pbar_hi, noise.T)
            if (hi - lo) / 2 < 0.2 * target or n >= samples_budget:
                return val, lo, hi
            n = min(2 * n, samples_budget)

    val_hi, _, _ = probe(p_hi)
    if val_hi < target:
        raise ValueError(
            f"target {target} not bracketed: value at p={p_hi} is {val_hi}"
        )
    lo_p, hi_p = p_hi / 4096.0, p_hi
    while hi_p / lo_p > 1.0 + rel_width:
        mid = math.sqrt(lo_p * hi_p)
        val, _, _ = probe(mid)
        if val > target:
            hi_p = mid
        else:
            lo_p = mid
    return math.sqrt(lo_p * hi_p)


@dataclass(frozen=True)
class ScanResult:
    """Grid of Monte Carlo cells plus pairwise crossing estimates.

    `crossings` maps (label_a, label_b) to the p where the two log P-bar
    curves intersect (linear interpolation between adjacent grid points;
    None when the curves keep one order over the whole grid).
    `monotone_violations` lists (label, p_prev, p_next) where P-bar drops
    by more than the intervals allow as p grows.
    """

    rows: list[McResult]
    crossings: dict[tuple[str, str], float | None]
    monotone_violations: list[tuple[str, float, float]]


def _log_pbar(row: McResult) -> float:
    # zero-failure cells enter the interpolation with half a failure so the
    # logarithm stays finite; the CSV keeps the raw zero
    pbar = row.pbar if row.failures > 0 else 0.5 / row.samples
    return math.log(pbar)


def _pair_crossing(
    rows_a: list[McResult], rows_b: list[McResult]
) -> float | None:
    grid = [r.p for r in rows_a]
    diff = [_log_pbar(a) - _log_pbar(b) for a, b in zip(rows_a, rows_b)]
    for i in range(len(grid) - 1):
        d0, d1 = diff[i], diff[i + 1]
        if d0 == 0.0:
            return grid[i]
        if (d0 > 0.0) != (d1 > 0.0):
            return grid[i] + (grid[i + 1] - grid[i]) * d0 / (d0 - d1)
    return None


def threshold_scan(
    codes: list[CssCode],
    p_grid: list[float],
    *,
    q_mode: str | float = "equal",
    T: int | None = None,
    samples: int = 10_000,
    seed: int = 0,
    side: str = "both",
    jobs: int = 1,
    variants: int | None = None,
) -> ScanResult:
    """Sweep every code over the p grid and estimate pairwise crossings.

    q_mode "equal" sets q = p per cell; a number fixes q (0.0 gives
    noiseless checks, a single decoding round per sample when T=1).
    T=None resolves to each code's d_Z. Cells get disjoint seed streams
    derived from (seed, code index, grid index).
    """
    if len(codes) < 2:
        raise ValueError("a scan needs at least two codes")
    if sorted(p_grid) != list(p_grid):
        raise ValueError("p grid must be sorted ascending")
    by_code: list[list[McResult]] = []
    for ci, code in enumerate(codes):
        z_distance(code)
        x_distance(code)
        rows = []
        for pi, p in enumerate(p_grid):
            q = p if q_mode == "equal" else float(q_mode)
            noise = resolve_rounds(code, NoiseParams(p, q, T))
            cell_seed = int(
                np.random.SeedSequence([seed, ci, pi]).generate_state(
                    1, dtype=np.uint64
                )[0]
            )
            rows.append(
                estimate(
                    code,
                    noise,
                    samples,
                    cell_seed,
                    side=side,
                    jobs=jobs,
                    variants=variants,
                )
            )
        by_code.append(rows)

    crossings: dict[tuple[str, str], float | None] = {}
    for i in range(len(codes)):
        for j in range(i + 1, len(codes)):
            key = (by_code[i][0].label, by_code[j][0].label)
            crossings[key] = _pair_crossing(by_code[i], by_code[j])

    violations = []
    for rows in by_code:
        for prev, nxt in zip(rows, rows[1:]):
            if nxt.pbar_hi < prev.pbar_lo:
                violations.append((prev.label, prev.p, nxt.p))

    return ScanResult(
        rows=[r for rows in by_code for r in rows],
        crossings=crossings,
        monotone_violations=violations,
    )


def scan_to_csv(rows: list[McResult], out) -> None:
    """Write scan rows with the fixed column set. `out` is a path or a
    text stream."""
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            scan_to_csv(rows, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_row())


def scan_csv_text(rows: list[McResult]) -> str:
    buf = io.StringIO()
    scan_to_csv(rows, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class OverheadRow:
    label: str
    n: int
    k: int
    rate: float
    d_z: int
    d_x: int
    n_d: int
    p_max: float


OVERHEAD_COLUMNS = ("code", "n", "k", "rate", "d_z", "d_x", "n_d", "p_max")


def overhead_table(
    codes: list[CssCode],
    target_p_round: float = 1e-8,
    *,
    side: str = "z",
    both_sides: bool = False,
) -> list[OverheadRow]:
    """Encoding rate against the formula-mode p_max at a fixed per-round
    failure target, one row per code."""
    rows = []
    for code in codes:
        d, n_d = min_weight_stats(code, side)
        value = p_max(
            code,
            target_p_round,
            mode="formula",
            quantity="p_round",
            side=side,
            both_sides=both_sides,
        )
        rows.append(
            OverheadRow(
                label=code.name,
                n=code.n,
                k=code.k,
                rate=code.k / code.n,
                d_z=z_distance(code),
                d_x=x_distance(code),
                n_d=n_d,
                p_max=value,
            )
        )
    return rows


def overhead_to_csv(rows: list[OverheadRow], out) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            overhead_to_csv(rows, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(OVERHEAD_COLUMNS)
    for r in rows:
        writer.writerow(
            [r.label, r.n, r.k, repr(r.rate), r.d_z, r.d_x, r.n_d, repr(r.p_max)]
        )


def resolve_code_entry(entry: str, base_dir: str | Path = ".") -> CssCode:
    """Turn one config `codes` entry into a code.

    Accepted forms: a path to a surface JSON file, a catalog name, or the
    family shorthands "toric:<L>", "rotated-toric:<L>" and
    "semi-hyperbolic:<base>:<l>" (base itself a file or catalog name).
    """
    path = Path(base_dir) / entry
    if entry.endswith(".json") and path.is_file():
        return derive_code(TiledSurface.from_json(path.read_text()))
    if entry in catalog_names():
        return derive_code(from_catalog(entry))
    head, _, rest = entry.partition(":")
    if head == "toric" and rest:
        return derive_code(toric(int(rest)))
    if head == "rotated-toric" and rest:
        return derive_code(rotated_toric(int(rest)))
    if head == "semi-hyperbolic" and rest:
        base_name, _, l_text = rest.rpartition(":")
        if not base_name:
            raise ValueError(
                "semi-hyperbolic entries look like semi-hyperbolic:<base>:<l>"
            )
        base_path = Path(base_dir) / base_name
        if base_name.endswith(".json") and base_path.is_file():
            base = TiledSurface.from_json(base_path.read_text())
        elif base_name in catalog_names():
            base = from_catalog(base_name)
        else:
            raise ValueError(f"unknown base surface {base_name!r}")
        return derive_code(semi_hyperbolic(base, int(l_text)))
    raise ValueError(f"cannot resolve code entry {entry!r}")


def load_config(source) -> dict:
    """Load an experiment config from a dict, JSON text, or file path."""
    if isinstance(source, dict):
        cfg = dict(source)
    else:
        text = (
            Path(source).read_text()
            if isinstance(source, (str, Path)) and Path(source).is_file()
            else str(source)
        )
        cfg = json.loads(text)
    missing = {"codes", "p_grid"} - cfg.keys()
    if missing:
        raise ValueError(f"config is missing {sorted(missing)}")
    cfg.setdefault("q_mode", "equal")
    cfg.setdefault("T", "auto")
    cfg.setdefault("samples", 10_000)
    cfg.setdefault("seed", 0)
    cfg.setdefault("side", "both")
    return cfg


def run_config(
    source, *, jobs: int = 1, base_dir: str | Path = "."
) -> ScanResult:
    """Run a threshold scan described by a JSON config."""
    cfg = load_config(source)
    codes = [resolve_code_entry(e, base_dir) for e in cfg["codes"]]
    T = cfg["T"]
    return threshold_scan(
        codes,
        [float(p) for p in cfg["p_grid"]],
        q_mode=cfg["q_mode"],
        T=None if T == "auto" else int(T),
        samples=int(cfg["samples"]),
        seed=int(cfg["seed"]),
        side=cfg["side"],
        jobs=jobs,
    )
