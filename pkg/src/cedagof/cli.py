"""Command-line entry point.

Exit codes: 0 success, 2 usage or input error, 3 computation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__, bindiff, classical, render
from .binning import BinningError, choose_k
from .hcluster import cluster_values
from .ingest import SampleError, dump_sample, housefly_path, load_sample, summarize, synthetic_left_skewed
from .mimicry import DISTRIBUTIONS, MimicryConfig
from .treepv import run_ceda

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE = 0, 2, 3
OUT_ENV = "CEDAGOF_OUT"
BUILTINS = {"builtin:housefly": housefly_path}


class InputError(Exception):
    pass


def _read_input(path: str, column):
    if path in BUILTINS:
        path = BUILTINS[path]()
    p = Path(path)
    if not p.is_file():
        raise InputError(f"input file not found: {path}")
    raw = p.read_bytes()
    try:
        s = load_sample(raw, column=column, label=p.stem)
    except SampleError as exc:
        raise InputError(f"{path}: {exc}") from None
    return s, raw, p.name


def analyze(args) -> tuple[dict, dict[str, str], list[str]]:
    """Run everything; return the report, file contents by name, and stdout lines."""
    s, raw, name = _read_input(args.input, args.column)
    st = summarize(s)
    if st.sd <= 0:
        raise ValueError("sample has zero variance")

    data_tree = cluster_values(s.values)
    if args.k is None:
        K, kdist = choose_k(s, data_tree)
        k_source = "auto"
    else:
        K, kdist, k_source = args.k, None, "user"
        if not 2 <= K <= s.n:
            raise InputError(f"--k must be in [2, {s.n}]")

    cfg = MimicryConfig.from_stats(st, m=args.sims, seed=args.seed, dist=args.dist)
    res = run_ceda(s, K, cfg, data_tree=data_tree, boundary_rule=args.boundary_rule)
    signs = bindiff.sign_threshold(bindiff.bin_diff(res.counts, flip=args.flip_sign))
    sign_tree = bindiff.cluster_signs(signs)

    tests = []
    warnings = []
    if 3 <= s.n <= 5000:
        tests.append(classical.shapiro_wilk(s))
    else:
        warnings.append(f"shapiro-wilk skipped: n={s.n} outside [3, 5000]")
    tests.append(classical.pearson_chisq(s, df_correction=args.df_correction))
    tests.append(classical.ks_test(s))
    qq = classical.qq_data(s, envelope_sims=args.qq_sims, seed=args.seed)
    outside = None
    if qq.lo is not None:
        outside = int(((qq.sample < qq.lo) | (qq.sample > qq.hi)).sum())

    labels = res.intervals.labels()
    files = {
        "intervals.csv": res.intervals.to_csv(),
        "counts.csv": res.counts.to_csv(),
        "p0.csv": res.p0.to_csv(),
        "signs.csv": bindiff.signs_to_csv(signs, labels),
        "qq.csv": qq.to_csv(),
        "heatmap_p0.svg": render.render_heatmap(
            res.p0.values, res.dendrogram, render.FigureSpec("heatmap-p0", title=f"P0 rows, K={K}, m={cfg.m}"), labels
        ),
        "heatmap_signs.svg": render.render_heatmap(
            signs, sign_tree, render.FigureSpec("heatmap-signs", title=f"Bin count signs, K={K}, m={cfg.m}"), labels
        ),
        "histogram.svg": render.render_histogram(
            s, res.intervals, st.mean, st.sd, render.FigureSpec("histogram", 640, 420, None, s.label)
        ),
        "qq.svg": render.render_qq(qq, render.FigureSpec("qq", 520, 520, None, f"Normal Q-Q: {s.label}")),
        "dendrogram.svg": render.render_dendrogram(
            data_tree, K, render.FigureSpec("dendrogram", 900, 420, None, f"Ward.D2 tree of {s.label}")
        ),
    }

    report = {
        "schema": 1,
        "tool": {"name": "cedagof", "version": __version__},
        "input": {"file": name, "column": args.column, "label": s.label, "n": s.n, "sha256": hashlib.sha256(raw).hexdigest()},
        "config": {
            "K": K,
            "K_source": k_source,
            "K_edf_distance": kdist,
            "sims": cfg.m,
            "seed": cfg.seed,
            "dist": cfg.dist,
            "boundary_rule": args.boundary_rule,
            "flip_sign": args.flip_sign,
            "df_correction": args.df_correction,
            "qq_envelope_sims": args.qq_sims,
            "sign_convention": "observed - mimicry" if args.flip_sign else "mimicry - observed",
        },
        "summary": st.as_dict(),
        "ceda": res.to_json(),
        "classical": {t.name: t.to_json() for t in tests},
        "qq": {"plotting_position": "(i - 0.5) / n", "points_outside_envelope": outside},
        "warnings": warnings,
        "figures": sorted(f for f in files if f.endswith(".svg")),
    }
    files["report.json"] = json.dumps(report, indent=2, sort_keys=True) + "\n"

    lines = [f"ceda: p-value={res.p_value:.4g} K={K} m={cfg.m} seed={cfg.seed}"]
    for t in tests:
        extra = f" df={t.aux:g}" if t.name == "pearson-chisq" else ""
        extra += f" D*={t.aux:.6g}" if t.name == "kolmogorov-smirnov" else ""
        flags = f" warning={'; '.join(t.warnings)}" if t.warnings else ""
        lines.append(f"{t.name}: statistic={t.statistic:.6g} p-value={t.p_value:.4g}{extra}{flags}")
    return report, files, lines


def write_atomically(out: Path, files: dict[str, str]) -> None:
    """Write every file under a temporary name, then rename them all into place."""
    out.mkdir(parents=True, exist_ok=True)
    tmp = {}
    try:
        for name, content in files.items():
            t = out / f".{name}.tmp-{os.getpid()}"
            t.write_text(content, encoding="utf-8")
            tmp[name] = t
    except BaseException:
        for t in tmp.values():
            t.unlink(missing_ok=True)
        raise
    for name, t in tmp.items():
        os.replace(t, out / name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cedagof", description="Tree-based goodness-of-fit analysis against a fitted Normal.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the tree-based test, bin-sign heatmap and classical tests")
    a.add_argument("input", help="CSV or newline-delimited numbers; 'builtin:housefly' for the bundled data")
    a.add_argument("--column", default=None, help="column name or zero-based index (default: first)")
    a.add_argument("--k", type=int, default=None, help="number of bins (default: smallest K in 3..15 fitting the EDF)")
    a.add_argument("--sims", type=int, default=100, help="number of mimicries m (default 100)")
    a.add_argument("--seed", type=int, default=1)
    a.add_argument("--dist", default="normal", choices=sorted(DISTRIBUTIONS))
    a.add_argument("--out", default=None, help=f"output directory (default: ${OUT_ENV} or ./cedagof-out)")
    a.add_argument("--flip-sign", action="store_true", help="use observed minus mimicry counts")
    a.add_argument("--df-correction", action="store_true", help="chi-squared df K-3 instead of K-1")
    a.add_argument("--boundary-rule", default="midpoint", choices=["midpoint", "left"])
    a.add_argument("--qq-sims", type=int, default=100, help="simulations for the Q-Q envelope (0 disables)")

    g = sub.add_parser("synth", help="write the left-skewed synthetic stand-in sample")
    g.add_argument("output")
    g.add_argument("--n", type=int, default=2432)
    g.add_argument("--seed", type=int, default=2017)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "synth":
        s = synthetic_left_skewed(n=args.n, seed=args.seed)
        with open(args.output, "w", encoding="utf-8") as fh:
            dump_sample(s, fh, header="speed")
        return EXIT_OK

    if args.sims < 1:
        parser.error("--sims must be at least 1")
    out = Path(args.out or os.environ.get(OUT_ENV) or "cedagof-out")
    try:
        report, files, lines = analyze(args)
        write_atomically(out, files)
    except InputError as exc:
        print(f"cedagof: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, BinningError, ArithmeticError) as exc:
        print(f"cedagof: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    for ln in lines:
        print(ln)
    print(f"wrote {len(files)} files to {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
