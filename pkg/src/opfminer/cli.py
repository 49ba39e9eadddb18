"""Command-line front end: mine, bench, features, eval.

Exit codes: 0 success, 2 configuration error, 3 input parse error,
4 presets disagreed on a bench cell.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import InvalidConfig, InvalidInput, TimeSeries
from .evaluation import FeatureMatrix, evaluate, extract_features, zscore
from .miner import PRESETS, MiningConfig, MiningError, MiningResult, mine, mine_dataset

EXIT_OK, EXIT_CONFIG, EXIT_PARSE, EXIT_MISMATCH = 0, 2, 3, 4
SUPPORT_DECIMALS = 6


class ParseError(ValueError):
    pass


# --- dataset files ---------------------------------------------------------

def parse_dataset(text: str) -> list[TimeSeries]:
    """One series per line, comma-separated; optional leading ``id=<label>``."""
    series = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = [tok.strip() for tok in line.split(",")]
        if not any(tokens):
            continue
        sid = None
        if tokens[0].startswith("id="):
            sid = tokens.pop(0)[3:]
        try:
            values = [float(tok) for tok in tokens if tok]
        except ValueError as e:
            raise ParseError(f"line {lineno}: {e}") from None
        if not values:
            raise ParseError(f"line {lineno}: no values")
        if not all(math.isfinite(v) for v in values):
            raise ParseError(f"line {lineno}: non-finite value")
        series.append(TimeSeries(tuple(values), id=sid or str(len(series) + 1)))
    if not series:
        raise ParseError("dataset contains no series")
    return series


def read_dataset(path) -> list[TimeSeries]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    return parse_dataset(text)


# --- reports ---------------------------------------------------------------

def pattern_str(p) -> str:
    return "-".join(str(r) for r in p)


def parse_pattern(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split("-"))


def report_dict(results: list[MiningResult], config: MiningConfig,
                emit_occurrences: bool = False) -> dict:
    out = {"artifact": "opfminer", "version": __version__, "config": config.to_dict(),
           "series": []}
    for res in results:
        pats = []
        for rec in res.records:
            entry = {"pattern": list(rec.pattern), "group": rec.group.name,
                     "support": round(rec.support, SUPPORT_DECIMALS), "count": len(rec.occ)}
            if emit_occurrences:
                entry["occurrences"] = list(rec.occ)
            pats.append(entry)
        out["series"].append({
            "id": res.series_id, "n": res.n, "k": res.k, "patterns": pats,
            "metrics": {**res.metrics.counters(), "wall_time": res.metrics.wall_time},
        })
    return out


def render_report(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series_id", "length", "pattern", "group", "support", "count"])
    for s in report["series"]:
        for p in s["patterns"]:
            w.writerow([s["id"], len(p["pattern"]), pattern_str(p["pattern"]), p["group"],
                        f"{p['support']:.{SUPPORT_DECIMALS}f}", p["count"]])
    return buf.getvalue()


def parse_report(text: str, fmt: str = "json") -> dict[str, dict[tuple, float]]:
    """Series id -> {pattern: support} from a rendered report."""
    out: dict[str, dict[tuple, float]] = {}
    if fmt == "json":
        data = json.loads(text)
        for s in data["series"]:
            out[s["id"]] = {tuple(p["pattern"]): p["support"] for p in s["patterns"]}
        return out
    for row in csv.DictReader(io.StringIO(text)):
        out.setdefault(row["series_id"], {})[parse_pattern(row["pattern"])] = float(row["support"])
    return out


# --- feature matrices ------------------------------------------------------

def render_features(fm: FeatureMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["series_id"] + [pattern_str(p) for p in fm.vocabulary])
    for sid, row in zip(fm.series_ids, fm.rows):
        w.writerow([sid] + [f"{x:.{SUPPORT_DECIMALS}f}" for x in row])
    return buf.getvalue()


def parse_features(text: str) -> FeatureMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if len(rows) < 2:
        raise ParseError("feature file needs a header and at least one row")
    header = rows[0]
    try:
        vocab = [parse_pattern(h) for h in header[1:]]
        ids, data = [], []
        for r in rows[1:]:
            if len(r) != len(header):
                raise ParseError(f"row {r[0]!r} has {len(r)} fields, header has {len(header)}")
            ids.append(r[0])
            data.append([float(x) for x in r[1:]])
    except ValueError as e:
        raise ParseError(str(e)) from None
    return FeatureMatrix(vocabulary=vocab, rows=np.array(data, dtype=float).reshape(len(ids), len(vocab)),
                         series_ids=ids)


# --- argument handling -----------------------------------------------------

def _floats(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def _add_mining_flags(p: argparse.ArgumentParser, minsup_required=True):
    p.add_argument("--input", required=True)
    if minsup_required:
        p.add_argument("--minsup", type=float, required=True)
    k = p.add_mutually_exclusive_group()
    k.add_argument("--k-coeff", type=float, default=None, help="k = c / n (default c = 1)")
    k.add_argument("--k-abs", type=float, default=None)
    p.add_argument("--preset", default=None, help=f"one of {', '.join(PRESETS)}")
    p.add_argument("--candidate-gen", choices=["gp_fusion", "plain_fusion", "enumeration"])
    p.add_argument("--priority", choices=["max", "min", "none"])
    p.add_argument("--support", choices=["scf", "naive_match"])
    p.add_argument("--prune", choices=["both", "prefix_only", "suffix_only", "same_suffix", "none"])
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--output", default=None)


def _config(args, minsup=None, k_coeff=None, preset=None) -> MiningConfig:
    minsup = args.minsup if minsup is None else minsup
    k = {"k_abs": args.k_abs} if args.k_abs is not None else \
        {"k_coeff": k_coeff if k_coeff is not None else (args.k_coeff or 1.0)}
    if args.k_coeff is not None and args.k_coeff <= 0:
        raise InvalidConfig(f"k coefficient must be > 0, got {args.k_coeff}")
    axes = {name: getattr(args, attr) for name, attr in
            (("candidate_gen", "candidate_gen"), ("priority", "priority"),
             ("support_method", "support"), ("prune", "prune"))
            if getattr(args, attr, None) is not None}
    preset = preset or args.preset
    if preset is None and not axes:
        preset = "opf-miner"
    if preset is not None:
        base = MiningConfig.from_preset(preset, minsup, max_length=args.max_length, **k)
        if not axes:
            return base
        fields = {**base.to_dict(), **axes, "preset": None}
        return MiningConfig(**fields)
    return MiningConfig(minsup=minsup, max_length=args.max_length, **axes, **k)


def _emit(text: str, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_mine(args) -> int:
    config = _config(args)
    series = read_dataset(args.input)
    results = mine_dataset(series, config)
    report = report_dict(results, config, emit_occurrences=args.emit_occurrences)
    _emit(render_report(report, args.format), args.output)
    return EXIT_OK


def _replicate(t: TimeSeries, times: int) -> TimeSeries:
    return TimeSeries(t.values * times, id=t.id)


def run_bench(series, presets, minsups, k_coeffs, replicates, max_length=None, k_abs=None):
    """Grid of runs; returns (rows, mismatches).

    Each row sums counters over all series in the dataset.
    """
    rows, mismatches = [], []
    ks = [None] if k_abs is not None else k_coeffs
    for rep in replicates:
        data = [_replicate(t, rep) for t in series]
        for kc in ks:
            for ms in minsups:
                reference = None
                for name in presets:
                    kw = {"k_abs": k_abs} if k_abs is not None else {"k_coeff": kc}
                    cfg = MiningConfig.from_preset(name, ms, max_length=max_length, **kw)
                    results = [mine(t, cfg) for t in data]
                    found = [r.supports() for r in results]
                    if reference is None:
                        reference = (name, found)
                    elif found != reference[1]:
                        mismatches.append(_diff(reference, (name, found), rep, kc, ms))
                    rows.append({
                        "preset": name, "replicate": rep, "n": sum(len(t) for t in data),
                        "k_coeff": kc if k_abs is None else "", "k_abs": k_abs if k_abs else "",
                        "minsup": ms,
                        "frequent": sum(len(f) for f in found),
                        "candidates": sum(r.metrics.candidates for r in results),
                        "fusions": sum(r.metrics.fusions for r in results),
                        "support_calcs": sum(r.metrics.support_calcs for r in results),
                        "wall_time": sum(r.metrics.wall_time for r in results),
                    })
    return rows, mismatches


def _diff(ref, other, rep, kc, ms) -> str:
    (a_name, a), (b_name, b) = ref, other
    lines = [f"replicate={rep} k_coeff={kc} minsup={ms}: {a_name} != {b_name}"]
    for i, (x, y) in enumerate(zip(a, b)):
        for p in sorted(set(x) ^ set(y)):
            lines.append(f"  series #{i + 1}: {pattern_str(p)} only in "
                         f"{a_name if p in x else b_name}")
        for p in sorted(set(x) & set(y)):
            if x[p] != y[p]:
                lines.append(f"  series #{i + 1}: {pattern_str(p)} support {x[p]} vs {y[p]}")
    return "\n".join(lines)


def cmd_bench(args) -> int:
    presets = [p.strip().lower() for p in args.presets.split(",") if p.strip()]
    for p in presets:
        if p not in PRESETS:
            raise InvalidConfig(f"unknown preset {p!r}")
    minsups = _floats(args.minsup_list)
    for ms in minsups:
        MiningConfig(minsup=ms)
    k_coeffs = _floats(args.k_coeff_list)
    replicates = _ints(args.replicate)
    if not replicates or min(replicates) < 1:
        raise InvalidConfig("--replicate needs positive integers")
    series = read_dataset(args.input)
    rows, mismatches = run_bench(series, presets, minsups, k_coeffs, replicates,
                                 args.max_length, args.k_abs)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({**r, "wall_time": f"{r['wall_time']:.6f}"})
    _emit(buf.getvalue(), args.output)
    if mismatches:
        print("frequent sets differ between presets:", file=sys.stderr)
        for m in mismatches:
            print(m, file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_features(args) -> int:
    config = _config(args)
    series = read_dataset(args.input)
    fm = extract_features(series, config, binary=args.binary)
    _emit(render_features(fm), args.output)
    return EXIT_OK


def _fmt_index(x):
    if x is None:
        return None
    if math.isinf(x):
        return "inf"
    return x


def cmd_eval(args) -> int:
    try:
        text = Path(args.features).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {args.features}: {e}") from None
    fm = parse_features(text)
    X = zscore(fm.rows) if args.zscore else fm.rows
    ks = _ints(args.K_list) if args.K_list else [args.K]
    if not ks or ks[0] is None:
        raise InvalidConfig("give --K or --K-list")
    runs = []
    for K in ks:
        res = evaluate(X, K, args.seed)
        runs.append({"K": K, "seed": args.seed, "sc": _fmt_index(res.sc),
                     "chi": _fmt_index(res.chi), "iterations": res.n_iter,
                     "empty_cluster_repairs": res.n_repairs,
                     "assignments": dict(zip(fm.series_ids, res.assignments.tolist()))})
    report = {"artifact": "opfminer", "version": __version__, "features": str(args.features),
              "zscore": bool(args.zscore), "runs": runs}
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="opfminer", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine frequent patterns from a dataset file")
    _add_mining_flags(p)
    p.add_argument("--emit-occurrences", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("bench", help="grid of presets x minsup x k x replication")
    p.add_argument("--input", required=True)
    p.add_argument("--presets", default="opf-miner")
    p.add_argument("--minsup-list", required=True)
    p.add_argument("--k-coeff-list", default="1")
    p.add_argument("--k-abs", type=float, default=None)
    p.add_argument("--replicate", default="1")
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("features", help="pattern-support feature matrix")
    _add_mining_flags(p)
    p.add_argument("--binary", action="store_true", help="presence instead of support")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("eval", help="k-means + silhouette / Calinski-Harabasz")
    p.add_argument("--features", required=True)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--K-list", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--zscore", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_eval)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidConfig, MiningError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, InvalidInput) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
