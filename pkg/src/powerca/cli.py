"""Command line interface: ``powerca <subcommand> table.csv [options]``.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import analyses, transform
from .errors import NoConvergence, PowerCAError, ValidationError
from .io import decomposition_dict, read_table, write_decomposition, write_table
from .svgmap import emit_map
from .tables import ContingencyTable

log = logging.getLogger("powerca")

SUBCOMMANDS = ("transform", "ca", "tca", "lra", "mfca", "zero-column", "converge", "merge", "stats")
EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


@dataclass
class RunConfig:
    subcommand: str
    input_path: Optional[Path] = None
    alpha: Optional[float] = None
    weights: str = "uniform"
    method: str = "svd"
    k: Optional[int] = None
    algorithm: str = "auto"
    output_dir: Optional[Path] = None
    format: str = "json"
    emit_map: bool = False
    map_axes: tuple = (1, 2)
    drop_empty: bool = False
    # None means auto-detect
    has_header: Optional[bool] = None
    has_row_labels: Optional[bool] = None
    indicator: bool = False
    log: bool = False
    merge_rows: bool = True
    merge_cols: bool = True
    alphas: tuple = analyses.DEFAULT_ALPHAS
    zero_column_args: tuple = field(default=())

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValidationError(f"unknown subcommand {self.subcommand!r}")
        needs_input = self.subcommand != "zero-column" or not self.zero_column_args
        if needs_input and self.input_path is None:
            raise ValidationError(f"{self.subcommand} needs an input table")
        if self.alpha is not None and not self.alpha > 0:
            raise ValidationError("--alpha must be positive")
        if self.subcommand == "transform" and sum(
            [self.alpha is not None, self.indicator, self.log]
        ) != 1:
            raise ValidationError("transform needs exactly one of --alpha, --indicator, --log")
        if self.method not in ("svd", "taxicab"):
            raise ValidationError(f"unknown method {self.method!r}")
        if self.algorithm not in ("auto", "exhaustive", "ascent"):
            raise ValidationError(f"unknown algorithm {self.algorithm!r}")
        if self.weights not in ("uniform", "marginal"):
            raise ValidationError(f"unknown weights {self.weights!r}")
        if self.format not in ("json", "csv"):
            raise ValidationError(f"unknown format {self.format!r}")
        if self.k is not None and self.k < 0:
            raise ValidationError("--k must be nonnegative")
        if self.emit_map and self.output_dir is None:
            raise ValidationError("--map needs --output-dir")
        if self.subcommand == "zero-column" and self.zero_column_args and len(self.zero_column_args) != 3:
            raise ValidationError("zero-column needs --I, --J and --m together")


def _parse_axes(text: str) -> tuple:
    if text.startswith("axes="):
        text = text[len("axes="):]
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad axis list {text!r}") from None


def _parse_alphas(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powerca",
        description="Correspondence, taxicab and log-ratio analysis of "
        "power-transformed contingency tables.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, input_required=True):
        p.add_argument("input", type=Path, nargs=None if input_required else "?",
                       help="CSV table (comma-delimited, optional header/labels)")
        p.add_argument("--no-header", action="store_true", help="first line is data")
        p.add_argument("--no-row-labels", action="store_true", help="first column is data")
        p.add_argument("--drop-empty", action="store_true",
                       help="remove all-zero rows and columns before analysis")
        p.add_argument("--output-dir", type=Path, help="write reports here (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    def analysis(p, method=False, weights=False):
        p.add_argument("--alpha", type=float, help="analyze the table raised to this power")
        p.add_argument("--k", type=int, help="number of axes (default: all)")
        p.add_argument("--algorithm", choices=("auto", "exhaustive", "ascent"), default="auto",
                       help="taxicab axis search")
        if method:
            p.add_argument("--method", choices=("svd", "taxicab"), default="svd")
        if weights:
            p.add_argument("--weights", choices=("uniform", "marginal"), default="uniform")
        p.add_argument("--map", type=_parse_axes, metavar="axes=1,2",
                       help="also write map.svg for these axes")

    p = sub.add_parser("transform", help="power, indicator or log transform")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha", type=float)
    g.add_argument("--indicator", action="store_true")
    g.add_argument("--log", action="store_true")

    for name, kw, text in (
        ("ca", {}, "correspondence analysis"),
        ("tca", {}, "taxicab correspondence analysis"),
        ("lra", {"method": True, "weights": True}, "log-ratio analysis"),
        ("mfca", {"method": True}, "marginal-free correspondence analysis"),
    ):
        p = sub.add_parser(name, help=text)
        common(p)
        analysis(p, **kw)

    p = sub.add_parser("zero-column", help="closed forms for one zero column")
    common(p, input_required=False)
    p.add_argument("--I", type=int, dest="I")
    p.add_argument("--J", type=int, dest="J")
    p.add_argument("--m", type=int, dest="m")

    p = sub.add_parser("converge", help="convergence of CA of N**alpha to LRA")
    common(p)
    p.add_argument("--alphas", type=_parse_alphas, default=analyses.DEFAULT_ALPHAS,
                   help="comma-separated powers")

    p = sub.add_parser("merge", help="merge proportional rows and columns")
    common(p)
    p.add_argument("--rows-only", action="store_true")
    p.add_argument("--cols-only", action="store_true")

    p = sub.add_parser("stats", help="zero-cell statistics")
    common(p)
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(
        subcommand=args.subcommand,
        input_path=args.input,
        output_dir=args.output_dir,
        format=args.format,
        drop_empty=args.drop_empty,
    )
    for name in ("alpha", "k", "algorithm", "method", "weights", "alphas"):
        if getattr(args, name, None) is not None:
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "map", None):
        cfg.emit_map = True
        cfg.map_axes = args.map
    cfg.indicator = getattr(args, "indicator", False)
    cfg.log = getattr(args, "log", False)
    if getattr(args, "rows_only", False):
        cfg.merge_cols = False
    if getattr(args, "cols_only", False):
        cfg.merge_rows = False
    counts = tuple(getattr(args, n, None) for n in ("I", "J", "m"))
    if any(v is not None for v in counts):
        cfg.zero_column_args = tuple(v for v in counts if v is not None)
    if args.no_header:
        cfg.has_header = False
    if args.no_row_labels:
        cfg.has_row_labels = False
    return cfg


def _load(cfg: RunConfig) -> ContingencyTable:
    table = read_table(cfg.input_path, cfg.has_row_labels, cfg.has_header)
    if cfg.drop_empty:
        table = table.drop_empty()
    return table


def _emit_json(obj, cfg: RunConfig, name: str, out):
    text = json.dumps(obj, indent=2) + "\n"
    if cfg.output_dir is None:
        out.write(text)
        return
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.output_dir / name).write_text(text, encoding="utf-8")


def _run_analysis(cfg: RunConfig, table: ContingencyTable, out):
    if cfg.alpha is not None:
        table = transform.power_transform(table, cfg.alpha)
    if cfg.subcommand == "ca":
        d = analyses.ca(table, cfg.k)
    elif cfg.subcommand == "tca":
        d = analyses.tca(table, cfg.k, cfg.algorithm)
    elif cfg.subcommand == "lra":
        d = analyses.lra(table, cfg.weights, cfg.method, cfg.k, cfg.algorithm)
    else:
        d = analyses.mfca(table, cfg.method, cfg.k, cfg.algorithm)

    if cfg.output_dir is None:
        out.write(json.dumps(decomposition_dict(d), indent=2) + "\n")
    else:
        target = cfg.output_dir / "report.json" if cfg.format == "json" else cfg.output_dir
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        write_decomposition(d, cfg.format, target)
        if cfg.emit_map:
            emit_map(d, cfg.map_axes, cfg.output_dir / "map.svg")


def _stats_dict(s) -> dict:
    return {
        "total_cells": s.total_cells,
        "zero_cells": s.zero_cells,
        "zero_percent": s.zero_percent,
        "per_column_zeros": list(s.per_column_zeros),
    }


def run(cfg: RunConfig, out=None) -> None:
    cfg.validate()
    if out is None:
        out = sys.stdout
    if cfg.subcommand == "zero-column":
        if cfg.zero_column_args:
            I, J, m = cfg.zero_column_args
        else:
            table = _load(cfg)
            zs = transform.zero_stats(table)
            cols = [j for j, z in enumerate(zs.per_column_zeros) if z]
            if len(cols) != 1:
                raise ValidationError(
                    f"zero-column needs zeros in exactly one column, found {len(cols)} columns"
                )
            (I, J), m = table.shape, zs.zero_cells
        R = transform.one_zero_column_reduction(I, J, m)
        _emit_json(
            {
                "I": I, "J": J, "m": m,
                "reduced_table": [[int(x) for x in row] for row in R.values],
                "ca_inertia": analyses.zero_column_ca_inertia(m, I, J),
                "tca_dispersion": analyses.zero_column_tca_dispersion(m, I, J),
            },
            cfg, "zero_column.json", out,
        )
        return

    table = _load(cfg)
    if cfg.subcommand in ("ca", "tca", "lra", "mfca"):
        _run_analysis(cfg, table, out)
    elif cfg.subcommand == "transform":
        if cfg.indicator:
            result = transform.indicator(table)
        elif cfg.log:
            result = table.with_values(transform.log_transform(table))
        else:
            result = transform.power_transform(table, cfg.alpha)
        if cfg.output_dir is None:
            write_table(result, out)
        else:
            cfg.output_dir.mkdir(parents=True, exist_ok=True)
            write_table(result, cfg.output_dir / "transformed.csv")
    elif cfg.subcommand == "converge":
        rows = analyses.convergence_sweep(table, cfg.alphas)
        _emit_json([r.__dict__ for r in rows], cfg, "convergence.json", out)
    elif cfg.subcommand == "merge":
        rep = transform.merge_proportional(table, cfg.merge_rows, cfg.merge_cols)
        summary = {
            "shape": list(rep.merged.shape),
            "row_groups": [list(g) for g in rep.row_groups],
            "col_groups": [list(g) for g in rep.col_groups],
        }
        if cfg.output_dir is None:
            out.write(json.dumps(summary, indent=2) + "\n")
        else:
            _emit_json(summary, cfg, "merge.json", out)
            write_table(rep.merged, cfg.output_dir / "merged.csv")
    elif cfg.subcommand == "stats":
        merged = transform.merge_proportional(table).merged
        ind_merged = transform.merge_proportional(transform.indicator(table)).merged
        _emit_json(
            {
                "shape": list(table.shape),
                "zeros": _stats_dict(transform.zero_stats(table)),
                "merged_shape": list(merged.shape),
                "merged_zeros": _stats_dict(transform.zero_stats(merged)),
                "indicator_merged_shape": list(ind_merged.shape),
                "indicator_merged_zeros": _stats_dict(transform.zero_stats(ind_merged)),
            },
            cfg, "stats.json", out,
        )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        run(config_from_args(args))
    except ValidationError as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    except NoConvergence as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except PowerCAError as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
