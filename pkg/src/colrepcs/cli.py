"""Command-line interface: construct, analyze, resize, compare, simulate."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import io as mio
from .colrep import PatternMatrix
from .errors import ColrepError, ConfigError
from .recovery import (
    ExperimentConfig,
    build_matrix,
    gaussian_matrix,
    run_recovery_vs_sparsity,
    run_snr_sweep,
)
from .resize import (
    compare_vs_kronecker,
    construct_example3,
    construct_example4,
    kronecker,
    resize_theorem4,
)
from .sensing import analyze_coherence, construct_example1, construct_example2, rip_estimate

SEED_ENV = "COLREPCS_SEED"

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["matrices", "scenarios"],
    "additionalProperties": False,
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
        "threshold": {"type": "number", "exclusiveMinimum": 0},
        "stop_tol": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "matrices": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": ["example1", "example2", "example3", "example4", "gaussian", "file"]},
                    "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
                    "p": {"type": "integer"},
                    "q": {"type": "integer"},
                    "k": {"type": "integer"},
                    "m": {"type": "integer", "minimum": 1},
                    "n": {"type": "integer", "minimum": 1},
                    "seed": {"type": "integer", "minimum": 0},
                    "path": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "scenarios": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["type"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
                    "type": {"enum": ["sparsity", "snr"]},
                    "sparsity": {"$ref": "#/$defs/axis"},
                    "k": {"type": "integer", "minimum": 1},
                    "snr_db": {"anyOf": [{"type": "null"}, {"type": "number"}, {"$ref": "#/$defs/axis"}]},
                    "trials": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
    "$defs": {
        "axis": {
            "anyOf": [
                {"type": "array", "items": {"type": "number"}},
                {
                    "type": "object",
                    "required": ["start", "stop"],
                    "additionalProperties": False,
                    "properties": {
                        "start": {"type": "number"},
                        "stop": {"type": "number"},
                        "step": {"type": "number", "exclusiveMinimum": 0},
                    },
                },
            ]
        }
    },
}


class UsageError(ColrepError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    return f"{x:.6f}"


def _summary(S, rep) -> str:
    parts = [f"{S.m}x{S.n}", f"mu={_fmt(rep.exact)}", f"welch={_fmt(rep.welch)}",
             f"ratio={rep.ratio_to_welch:.3f}"]
    if S.claimed_coherence is not None:
        parts.append(f"claimed={_fmt(S.claimed_coherence)}")
    parts.append(f"method={rep.method}")
    rip = rip_estimate(rep.exact)
    parts.append("rip_kmax=unbounded" if rip.unbounded else f"rip_kmax={rip.k_max}")
    return " ".join(parts)


def _write_matrix(S, out, fmt):
    if out is None:
        return
    if fmt == "csv":
        mio.save_matrix_csv(S, out)
    else:
        mio.save_matrix(S, out)


def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    return int(env) if env is not None else args.seed


def cmd_construct(args) -> int:
    kind = args.kind
    rep = None
    if kind in ("example1", "example2"):
        if args.p is None:
            raise UsageError(f"{kind} needs --p")
        S = (construct_example1 if kind == "example1" else construct_example2)(args.p)
    elif kind == "example3":
        if args.q is None or args.k is None:
            raise UsageError("example3 needs --q and --k")
        S, rrep = construct_example3(args.q, args.k, row_seed=args.rows_seed,
                                     max_pairs=args.max_pairs, samples=args.samples, seed=_seed(args))
        rep = rrep.coherence
    elif kind == "example4":
        if args.p is None:
            raise UsageError("example4 needs --p")
        S, rrep = construct_example4(args.p, max_pairs=args.max_pairs, samples=args.samples,
                                     seed=_seed(args))
        rep = rrep.coherence
    else:
        if args.m is None or args.n is None:
            raise UsageError("gaussian needs --m and --n")
        S = gaussian_matrix(args.m, args.n, np.random.default_rng(_seed(args)))
    if rep is None:
        rep = analyze_coherence(S, args.max_pairs, args.samples, _seed(args))
    _write_matrix(S, args.out, args.format)
    print(_summary(S, rep))
    return 0


def cmd_analyze(args) -> int:
    S = mio.load_matrix(args.matrix)
    rep = analyze_coherence(S, args.max_pairs, args.samples, _seed(args))
    d = rep.to_dict()
    d.update(m=S.m, n=S.n, claimed_coherence=S.claimed_coherence,
             rip_k_max=rip_estimate(rep.exact).k_max)
    # 1-based column indices for display
    d["pair"] = [i + 1 for i in rep.pair]
    if args.out:
        mio.write_json(d, args.out)
    print(_summary(S, rep))
    return 0


def cmd_resize(args) -> int:
    if args.mode == "kronecker":
        if len(args.inputs) != 2:
            raise UsageError("kronecker needs two matrix files")
        A, B = (mio.load_matrix(f) for f in args.inputs)
        S = kronecker(A, B)
        rep = analyze_coherence(S, args.max_pairs, args.samples, _seed(args))
        report = {"coherence": rep.to_dict(), "bound": max(
            analyze_coherence(A).exact, analyze_coherence(B).exact)}
    elif args.mode == "pattern":
        if len(args.inputs) != 2:
            raise UsageError("pattern needs a matrix file and a pattern file")
        A = mio.load_matrix(args.inputs[0])
        with open(args.inputs[1]) as fh:
            pat = json.load(fh)
        entries = np.asarray(pat["entries"] if isinstance(pat, dict) else pat, dtype=np.int64)
        if isinstance(pat, dict) and pat.get("one_based"):
            entries = entries - 1
        S, rrep = resize_theorem4(A, PatternMatrix(entries, A.n), max_pairs=args.max_pairs,
                                  samples=args.samples, seed=_seed(args))
        rep, report = rrep.coherence, rrep.to_dict()
    else:
        if args.p is None:
            raise UsageError("example4 needs --p")
        S, rrep = construct_example4(args.p, max_pairs=args.max_pairs, samples=args.samples,
                                     seed=_seed(args))
        rep, report = rrep.coherence, rrep.to_dict()
    _write_matrix(S, args.out, args.format)
    if args.report:
        mio.write_json(report, args.report)
    print(_summary(S, rep) + f" bound={_fmt(report['bound'])}")
    return 0


def cmd_compare(args) -> int:
    rows = [compare_vs_kronecker(p) for p in args.p]
    for c in rows:
        print(f"p={c.p} column_replacement={_fmt(c.column_replacement)} "
              f"kronecker={_fmt(c.kronecker)} winner={c.winner}")
    if args.out:
        mio.write_json([c.to_dict() for c in rows], args.out)
    return 0


def _axis(spec) -> list[float]:
    if isinstance(spec, list):
        return spec
    step = spec.get("step", 1)
    n = int(round((spec["stop"] - spec["start"]) / step)) + 1
    return [spec["start"] + i * step for i in range(max(n, 0))]


def _matrix_name(src: dict) -> str:
    if "name" in src:
        return src["name"]
    kind = src["kind"]
    if kind in ("example1", "example2", "example4"):
        return f"{kind}_p{src.get('p')}"
    if kind == "example3":
        return f"example3_q{src.get('q')}_k{src.get('k')}"
    if kind == "gaussian":
        return f"gaussian_{src.get('m')}x{src.get('n')}"
    return Path(src.get("path", "matrix")).stem


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{path}: {where}: {exc.message}") from None
    return cfg


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    seed = int(os.environ.get(SEED_ENV, cfg.get("seed", 0)))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary = {"config": cfg, "seed": seed, "results": []}
    matrices = [(src, _matrix_name(src), build_matrix({k: v for k, v in src.items() if k != "name"}, seed))
                for src in cfg["matrices"]]
    for si, sc in enumerate(cfg["scenarios"]):
        name = sc.get("name", f"scenario{si + 1}_{sc['type']}")
        snr = sc.get("snr_db")
        for src, mname, A in matrices:
            common = dict(matrix=src, trials=sc.get("trials", cfg.get("trials", 500)), seed=seed,
                          threshold=cfg.get("threshold", 1e-3), stop_tol=cfg.get("stop_tol"),
                          workers=args.threads)
            if sc["type"] == "sparsity":
                if "sparsity" not in sc:
                    raise ConfigError(f"scenario {name}: missing sparsity range")
                ks = [int(k) for k in _axis(sc["sparsity"])]
                snr_grid = None if snr is None else [float(snr)]
                res = run_recovery_vs_sparsity(ExperimentConfig(sparsities=ks, snr_db=snr_grid, **common), A)
            else:
                if "k" not in sc or snr is None or isinstance(snr, (int, float)):
                    raise ConfigError(f"scenario {name}: an SNR sweep needs k and an snr_db grid")
                res = run_snr_sweep(ExperimentConfig(k=sc["k"], snr_db=_axis(snr), **common), A)
            csv_path = out / f"{name}_{mname}.csv"
            csv_path.write_text(res.to_csv())
            summary["results"].append({"scenario": name, "matrix": mname, "csv": csv_path.name,
                                       **res.to_dict()})
            print(f"{name} {mname} -> {csv_path}")
    mio.write_json(summary, out / "summary.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="colrepcs", description=__doc__)
    parser.add_argument("--threads", type=int, default=1, help="worker cap for simulations")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_coherence_opts(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-pairs", type=int, default=10**6,
                       help="enumerate all pairs up to this many, else sample")
        p.add_argument("--samples", type=int, default=10**6)

    def add_out_opts(p):
        p.add_argument("--out", help="matrix output path")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("construct", help="build a sensing matrix")
    p.add_argument("kind", choices=["example1", "example2", "example3", "example4", "gaussian"])
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--rows-seed", type=int, help="example3: random row choice")
    add_out_opts(p)
    add_coherence_opts(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="coherence report of a matrix file")
    p.add_argument("matrix")
    p.add_argument("--out")
    add_coherence_opts(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("resize", help="Kronecker or column-replacement resizing")
    p.add_argument("mode", choices=["kronecker", "pattern", "example4"])
    p.add_argument("inputs", nargs="*")
    p.add_argument("--p", type=int)
    p.add_argument("--report", help="resize report JSON path")
    add_out_opts(p)
    add_coherence_opts(p)
    p.set_defaults(func=cmd_resize)

    p = sub.add_parser("compare", help="column replacement vs Kronecker coherence")
    p.add_argument("--p", type=int, nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="run OMP recovery experiments from a JSON config")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except (ColrepError, OSError, KeyError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
