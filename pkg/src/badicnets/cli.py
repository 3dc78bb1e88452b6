"""Command-line front end for reproducible desk-scale experiments.

Subcommands: gen | quality | disc | bound | plot | selftest.  Every command
is deterministic given its configuration; the thread-count knob never changes
output bytes.  Exit codes: 0 ok, 2 configuration error, 3 violated math
precondition, 4 desk-scale guard exceeded.

Input digit vectors are least-significant-first; output points are digit
matrices read most-significant-first (see the sequence grammar in
`badicnets.inputseq`).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import discrepancy, engine, genmatrix, quality
from ._backend import backend_name
from .errors import (BadicNetsError, GuardExceeded, SchemaError,
                     SpecGrammarError)
from .field import make_field
from .inputseq import AffineSequence, NaturalSequence, parse_sequence_spec
from .quality import TProfile

BUILTIN_MATRICES = ("identity", "pairs", "stirling")

_DEFAULTS: dict[str, dict] = {
    "gen": {"field": 2, "field_ext": 1, "matrix": "identity", "seq": "natural",
            "s": 1, "m": 4, "n": 8, "start": 0, "out": "-", "format": "csv",
            "mode": "exact", "threads": 1, "bijections": None},
    "quality": {"field": 2, "field_ext": 1, "matrix": "identity", "s": 1,
                "m_max": 8, "seq": None, "m": None, "blocks": "0:4",
                "out": "-", "threads": 1},
    "disc": {"field": 3, "field_ext": 1, "matrix": "identity", "seq": "natural",
             "s": 1, "m": 12, "n_list": "1,3,9,27,81", "with_bound": False,
             "out": "-", "threads": 1},
    "bound": {"field": 3, "s": 1, "alpha": "0", "t": 0, "n": 9, "out": "-"},
    "plot": {"field": 5, "field_ext": 1, "matrix": "stirling", "s": 2, "m": 8,
             "n": 500, "seqs": "natural;alt;affine:a=1/2,c=-1/4",
             "out": "scatter", "format": "svg", "threads": 1},
    "selftest": {"criteria": None},
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved command configuration; round-trips to a canonical string."""

    command: str
    options: tuple[tuple[str, str], ...]

    @classmethod
    def from_options(cls, command: str, options: dict) -> "RunConfig":
        items = tuple(sorted((k, "" if v is None else str(v))
                             for k, v in options.items()))
        return cls(command, items)

    def canonical_string(self) -> str:
        body = " ".join(f"{k}={v}" for k, v in self.options)
        return f"{self.command} {body}".strip()

    @classmethod
    def from_canonical(cls, text: str) -> "RunConfig":
        parts = text.split()
        if not parts:
            raise SpecGrammarError("empty configuration string")
        options = {}
        for item in parts[1:]:
            key, eq, value = item.partition("=")
            if not eq:
                raise SpecGrammarError(f"expected key=value, got {item!r}")
            options[key] = value
        return cls.from_options(parts[0], options)

    def get(self, key: str) -> str:
        return dict(self.options)[key]


def _resolve(args: argparse.Namespace, command: str) -> RunConfig:
    """Merge CLI flags over --config file values over hard defaults."""
    defaults = _DEFAULTS[command]
    file_cfg = {}
    if getattr(args, "config", None):
        try:
            file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"cannot read config file: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise SchemaError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(defaults)
        if unknown:
            raise SchemaError(f"unknown config keys: {sorted(unknown)}")
    resolved = {}
    for key, hard_default in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            resolved[key] = flag
        elif key in file_cfg:
            resolved[key] = file_cfg[key]
        else:
            resolved[key] = hard_default
    return RunConfig.from_options(command, resolved)


def _open_out(path: str):
    if path in ("-", ""):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _build_matrix_set(cfg: RunConfig, depth: int):
    name = cfg.get("matrix")
    s = int(cfg.get("s"))
    if name not in BUILTIN_MATRICES:
        mset = genmatrix.load_matrix_set(name)
        if s and mset.s != s:
            raise SpecGrammarError(
                f"matrix file has s={mset.s}, requested s={s}")
        return mset
    field = make_field(int(cfg.get("field")), int(cfg.get("field_ext")))
    if name == "identity":
        return genmatrix.identity_matrix_set(field, s, depth)
    if name == "pairs":
        if field.q != 2:
            raise SpecGrammarError("the pairs matrix is a base-2 construction")
        if s != 1:
            raise SpecGrammarError("the pairs matrix is one-dimensional")
        return genmatrix.MatrixSet(field, [genmatrix.pairs_matrix(depth)],
                                   convention="pairs")
    return genmatrix.stirling_matrix_set(field, s, depth)


def _bijections(cfg: RunConfig, q: int) -> engine.BijectionFamily:
    path = cfg.get("bijections") if "bijections" in dict(cfg.options) else ""
    if path:
        return engine.BijectionFamily.from_json(path, q)
    return engine.BijectionFamily.identity(q)


# -- subcommand handlers -------------------------------------------------------

def cmd_gen(cfg: RunConfig) -> int:
    m = int(cfg.get("m"))
    count = int(cfg.get("n"))
    start = int(cfg.get("start"))
    mset = _build_matrix_set(cfg, depth=m)
    seq = parse_sequence_spec(cfg.get("seq"), mset.field.q)
    bij = _bijections(cfg, mset.field.q)
    block = engine.generate_block(mset, bij, seq, start, count, m,
                                  threads=int(cfg.get("threads")))
    out, close = _open_out(cfg.get("out"))
    try:
        if cfg.get("format") == "json":
            engine.write_points_json(block, out, n_start=start)
        else:
            engine.write_points_csv(block, out, mode=cfg.get("mode"), n_start=start)
    finally:
        if close:
            out.close()
    return 0


def cmd_quality(cfg: RunConfig) -> int:
    m_max = int(cfg.get("m_max"))
    seq_spec = cfg.get("seq")
    depth = max(m_max, int(cfg.get("m") or 0))
    mset = _build_matrix_set(cfg, depth=depth)
    payload: dict = {"backend": backend_name()}
    profile = quality.t_profile(mset, m_max)
    payload["t_profile"] = profile.to_json_obj()
    if seq_spec:
        m = int(cfg.get("m") or m_max)
        lo, _, hi = cfg.get("blocks").partition(":")
        seq = parse_sequence_spec(seq_spec, mset.field.q)
        bij = engine.BijectionFamily.identity(mset.field.q)
        reports = quality.verify_T_sequence(mset, bij, seq, m,
                                            range(int(lo), int(hi)),
                                            profile=profile,
                                            threads=int(cfg.get("threads")))
        payload["net_reports"] = [r.to_json_obj() for r in reports]
    out, close = _open_out(cfg.get("out"))
    try:
        json.dump(payload, out, sort_keys=True, indent=2)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_disc(cfg: RunConfig) -> int:
    n_list = [int(v) for v in str(cfg.get("n_list")).split(",") if v]
    if not n_list:
        raise SpecGrammarError("empty N list")
    m = int(cfg.get("m"))
    mset = _build_matrix_set(cfg, depth=max(m, 1))
    seq = parse_sequence_spec(cfg.get("seq"), mset.field.q)
    bij = _bijections(cfg, mset.field.q)
    with_bound = str(cfg.get("with_bound")).lower() in ("true", "1", "yes")
    if with_bound:
        rows = discrepancy.empirical_vs_bound(mset, bij, seq, n_list)
    else:
        n_max = max(n_list)
        block = engine.generate_block(mset, bij, seq, 0, n_max, m,
                                      threads=int(cfg.get("threads")))
        pts = [block[i].rationals() for i in range(n_max)]
        rows = []
        for n_pts in sorted(n_list):
            prefix = pts[:n_pts]
            if mset.s == 1:
                res = discrepancy.star_discrepancy_1d([p[0] for p in prefix])
            else:
                res = discrepancy.star_discrepancy_exact(prefix)
            rows.append(discrepancy.BoundTableRow(n_pts, res.value * n_pts, 0, True))
    out, close = _open_out(cfg.get("out"))
    try:
        import csv as _csv

        writer = _csv.writer(out, lineterminator="\n")
        writer.writerow(["N", "ND_star_exact", "ND_star_float", "bound", "ratio"])
        for row in rows:
            writer.writerow([row.n_points, str(row.nd_star), float(row.nd_star),
                             row.bound or "", row.ratio if row.bound else ""])
    finally:
        if close:
            out.close()
    return 0


def cmd_bound(cfg: RunConfig) -> int:
    q = int(cfg.get("field"))
    s = int(cfg.get("s"))
    n_points = int(cfg.get("n"))
    t = int(cfg.get("t"))
    alpha_frac = Fraction(cfg.get("alpha"))
    from .badic import from_rational

    alpha = from_rational(alpha_frac, q)
    r = 0
    while q ** (r + 1) <= n_points:
        r += 1
    profile = TProfile.constant(t, r)
    breakdown = discrepancy.prop2_bound(alpha, profile, q, s, n_points)
    out, close = _open_out(cfg.get("out"))
    try:
        json.dump(breakdown.to_json_obj(), out, sort_keys=True, indent=2)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0


def _svg_panels(panels: list[tuple[str, list[tuple[Fraction, Fraction]]]]) -> str:
    """Deterministic multi-panel scatter SVG (fixed-precision coordinates)."""
    side, margin, gap = 300.0, 34.0, 26.0
    width = margin * 2 + side * len(panels) + gap * (len(panels) - 1)
    height = margin * 2 + side + 18.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for idx, (title, pts) in enumerate(panels):
        x0 = margin + idx * (side + gap)
        y0 = margin
        parts.append(f'<g stroke="black" fill="none" stroke-width="1">'
                     f'<rect x="{x0:.1f}" y="{y0:.1f}" width="{side:.1f}" '
                     f'height="{side:.1f}"/></g>')
        parts.append(f'<text x="{x0 + side / 2:.1f}" y="{y0 - 10:.1f}" '
                     f'font-family="monospace" font-size="12" '
                     f'text-anchor="middle">{title}</text>')
        dots = []
        for x, y in pts:
            cx = x0 + float(x) * side
            cy = y0 + side - float(y) * side
            dots.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="1.4"/>')
        parts.append('<g fill="black">' + "".join(dots) + "</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot(cfg: RunConfig) -> int:
    seq_specs = [tok for tok in cfg.get("seqs").split(";") if tok]
    m = int(cfg.get("m"))
    count = int(cfg.get("n"))
    mset = _build_matrix_set(cfg, depth=m)
    if mset.s != 2:
        raise SpecGrammarError("plot needs a two-dimensional matrix set")
    bij = engine.BijectionFamily.identity(mset.field.q)
    panels = []
    blocks = []
    for spec in seq_specs:
        seq = parse_sequence_spec(spec, mset.field.q)
        block = engine.generate_block(mset, bij, seq, 0, count, m,
                                      threads=int(cfg.get("threads")))
        blocks.append((spec, block))
        panels.append((spec, [(block[i].coordinate_rational(1),
                               block[i].coordinate_rational(2))
                              for i in range(count)]))
    base = cfg.get("out")
    fmt = cfg.get("format")
    if fmt in ("svg", "both"):
        path = base if base.endswith(".svg") else base + ".svg"
        Path(path).write_text(_svg_panels(panels), encoding="utf-8")
        print(path)
    if fmt in ("csv", "both"):
        stem = base[:-4] if base.endswith(".svg") else base
        for idx, (spec, block) in enumerate(blocks, start=1):
            path = f"{stem}-{idx}.csv"
            with open(path, "w", encoding="utf-8", newline="") as fh:
                engine.write_points_csv(block, fh, mode="float")
            print(path)
    return 0


def cmd_selftest(cfg: RunConfig) -> int:
    from . import acceptance

    wanted = cfg.get("criteria")
    numbers = [int(v) for v in wanted.split(",")] if wanted else None
    results = acceptance.run_criteria(numbers)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.number:2d} {res.name:32s} {res.seconds:7.2f}s  {res.detail}")
        failed += not res.passed
    print(f"{len(results) - failed}/{len(results)} criteria passed "
          f"(backend: {backend_name()})")
    return 0 if failed == 0 else 1


_HANDLERS = {"gen": cmd_gen, "quality": cmd_quality, "disc": cmd_disc,
             "bound": cmd_bound, "plot": cmd_plot, "selftest": cmd_selftest}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="badicnets",
        description=("Digital (t, m, s)-net generation from b-adic integer "
                     "index sequences, with exact quality verification."))
    sub = parser.add_subparsers(dest="command", required=True)

    seq_help = ("sequence spec: natural | neg | alt | affine:a=U/V,c=U/V | "
                "rat:v=INT,alpha=U/V | quad:a=..,c=..,d=.. | "
                "beatty:p=INT,q=INT,nmax=INT  (rationals in lowest terms; "
                "input digits are least-significant-first)")

    def add_common(p, *names):
        p.add_argument("--config", help="JSON file with option defaults")
        if "field" in names:
            p.add_argument("--field", type=int, help="field characteristic p")
            p.add_argument("--field-ext", dest="field_ext", type=int,
                           help="field extension degree e (q = p^e)")
        if "matrix" in names:
            p.add_argument("--matrix",
                           help="identity | pairs | stirling | path to a "
                                "matrix-set JSON file")
            p.add_argument("--s", type=int, help="dimension s")
        if "threads" in names:
            p.add_argument("--threads", type=int,
                           help="worker threads (never changes output bytes)")
        if "out" in names:
            p.add_argument("--out", help="output path ('-' = stdout)")

    p = sub.add_parser("gen", help="generate points and export them")
    add_common(p, "field", "matrix", "threads", "out")
    p.add_argument("--seq", help=seq_help)
    p.add_argument("--m", type=int, help="output precision (digits per coordinate)")
    p.add_argument("--N", dest="n", type=int, help="number of points")
    p.add_argument("--start", type=int, help="first index n")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--mode", choices=("exact", "float"),
                   help="exact a/b^m strings or float mirrors")
    p.add_argument("--bijections", help="JSON file with psi/lambda permutation tables")

    p = sub.add_parser("quality", help="T profile and optional block net checks")
    add_common(p, "field", "matrix", "threads", "out")
    p.add_argument("--m-max", dest="m_max", type=int, help="profile depth")
    p.add_argument("--seq", help="verify blocks of this sequence; " + seq_help)
    p.add_argument("--m", type=int, help="block precision for --seq checks")
    p.add_argument("--blocks", help="block index range LO:HI (half-open)")

    p = sub.add_parser("disc", help="exact star discrepancy table (s <= 3)")
    add_common(p, "field", "matrix", "threads", "out")
    p.add_argument("--seq", help=seq_help)
    p.add_argument("--m", type=int, help="truncation precision for point values")
    p.add_argument("--N-list", dest="n_list", help="comma-separated prefix sizes")
    p.add_argument("--with-bound", dest="with_bound", action="store_const",
                   const=True, help="add the shifted-sequence bound column "
                                    "(identity matrices, s_n = n + alpha)")

    p = sub.add_parser("bound", help="composite discrepancy bound breakdown")
    p.add_argument("--config", help="JSON file with option defaults")
    p.add_argument("--field", type=int, help="base q (> 2)")
    p.add_argument("--s", type=int, help="dimension s")
    p.add_argument("--alpha", help="shift alpha as a rational U/V")
    p.add_argument("--t", type=int, help="constant quality parameter t")
    p.add_argument("--N", dest="n", type=int, help="number of points")
    p.add_argument("--out", help="output path ('-' = stdout)")

    p = sub.add_parser("plot", help="scatter panels for a trio of input sequences")
    add_common(p, "field", "matrix", "threads", "out")
    p.add_argument("--seqs", help="semicolon-separated sequence specs")
    p.add_argument("--m", type=int, help="precision")
    p.add_argument("--N", dest="n", type=int, help="points per panel")
    p.add_argument("--format", choices=("svg", "csv", "both"))

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--config", help="JSON file with option defaults")
    p.add_argument("--criteria", help="comma-separated criterion numbers")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args, args.command)
        return _HANDLERS[args.command](cfg)
    except (SpecGrammarError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (BadicNetsError, ZeroDivisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
