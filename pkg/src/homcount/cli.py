"""Command-line interface: patterns, hom, gen, embed, eval, bench.

Exit codes: 0 success, 1 usage error, 2 data or validation error. Every
output artifact embeds the resolved configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import datasets, embedding, evaluate, patterns
from .hom import PhiFunction, hom
from .patterns import (
    Pattern,
    custom_pattern,
    cycle_graph,
    load_pattern_file,
    path_graph,
    resolve_family,
    single_edge,
    star_graph,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; this artifact reserves 2 for data
    # errors and uses 1 for usage.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _resolve_pattern(spec: str) -> Pattern:
    name, _, arg = spec.partition(":")
    name = name.lower()
    if name == "edge":
        return custom_pattern(single_edge())
    if name == "cycle":
        return patterns.Pattern(cycle_graph(int(arg)), "cycle", int(arg),
                                patterns.canonical_adjacency_code(cycle_graph(int(arg))))
    if name == "path":
        g = path_graph(int(arg))
        return patterns.Pattern(g, "path", int(arg), patterns.canonical_tree_code(g))
    if name == "star":
        g = star_graph(int(arg) - 1)
        return patterns.Pattern(g, "star", int(arg), patterns.canonical_tree_code(g))
    if name == "file":
        path, _, index = arg.partition("#")
        graphs = load_pattern_file(path)
        return custom_pattern(graphs[int(index) if index else 0])
    raise ValueError(f"unknown pattern spec {spec!r}")


def _load_bundle(args) -> datasets.DatasetBundle:
    if getattr(args, "generate", None):
        kind = args.generate
        if kind == "csl":
            return datasets.gen_csl(seed=args.seed)
        if kind == "bipartite":
            return datasets.gen_bipartite_er(seed=args.seed)
        if kind == "paulus":
            return datasets.load_paulus(seed=args.seed)
        raise ValueError(f"unknown generator {kind!r}")
    directory = Path(args.dataset)
    name = args.name or datasets.find_tud_name(directory)
    return datasets.parse_tud(directory, name)


def _phi_set(args, bundle):
    if args.phi == "constant":
        return [PhiFunction.constant_one()]
    return None  # auto: embedding picks the default for the bundle


def _family_spec(args) -> str:
    if ":" in args.family or args.family.startswith("file"):
        return args.family
    if args.max_size is None:
        raise ValueError(f"family {args.family!r} needs --max-size or a :size suffix")
    return f"{args.family}:{args.max_size}"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="homcount", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_pat = sub.add_parser("patterns", help="print a pattern catalog as JSON")
    p_pat.add_argument("--family", required=True,
                       help="trees|cycles|stars|paths (optionally name:size) or file:PATH")
    p_pat.add_argument("--max-size", type=int, default=None)
    p_pat.add_argument("--out", default=None)

    p_hom = sub.add_parser("hom", help="compute one homomorphism count")
    p_hom.add_argument("--pattern", required=True,
                       help="edge | cycle:K | path:N | star:N | file:PATH[#i]")
    p_hom.add_argument("--graph", required=True, help="graph file (n line, then 'u v' lines)")
    p_hom.add_argument("--weighted", action="store_true",
                       help="real-valued mode with unit vertex weights")
    p_hom.add_argument("--density", action="store_true")
    p_hom.add_argument("--out", default=None)

    p_gen = sub.add_parser("gen", help="generate a synthetic dataset in TU format")
    p_gen.add_argument("kind", choices=["csl", "bipartite", "paulus"])
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--copies-per-class", type=int, default=15)
    p_gen.add_argument("--num-vertices", type=int, default=41, help="csl only")
    p_gen.add_argument("--skips", default=None, help="csl only, comma-separated")
    p_gen.add_argument("--total", type=int, default=200, help="bipartite only")
    p_gen.add_argument("--paulus-file", default=None)

    def add_eval_args(p, with_out=True):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--dataset", help="TU-format directory")
        group.add_argument("--generate", choices=["csl", "bipartite", "paulus"])
        p.add_argument("--name", default=None, help="dataset name if ambiguous")
        p.add_argument("--family", required=True, help="e.g. trees:6 or cycles:8")
        p.add_argument("--max-size", type=int, default=None)
        p.add_argument("--phi", choices=["auto", "constant"], default="auto")
        p.add_argument("--density", action="store_true")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        if with_out:
            p.add_argument("--out", default=None)

    p_emb = sub.add_parser("embed", help="write an embedding matrix as CSV")
    add_eval_args(p_emb, with_out=False)
    p_emb.add_argument("--log1p", action="store_true")
    p_emb.add_argument("--out", required=True, help="output CSV path")

    p_eval = sub.add_parser("eval", help="repeated stratified k-fold cross-validation")
    add_eval_args(p_eval)
    p_eval.add_argument("--k", type=int, default=10)
    p_eval.add_argument("--repeats", type=int, default=10)
    p_eval.add_argument("--l2", type=float, default=evaluate.Hyper().l2)
    p_eval.add_argument("--lr", type=float, default=evaluate.Hyper().lr)
    p_eval.add_argument("--epochs", type=int, default=evaluate.Hyper().epochs)

    p_bench = sub.add_parser("bench", help="time the embed and train/predict phases")
    add_eval_args(p_bench)
    p_bench.add_argument("--k", type=int, default=10)
    p_bench.add_argument("--repeats", type=int, default=1)
    p_bench.add_argument("--l2", type=float, default=evaluate.Hyper().l2)
    p_bench.add_argument("--lr", type=float, default=evaluate.Hyper().lr)
    p_bench.add_argument("--epochs", type=int, default=evaluate.Hyper().epochs)

    return parser


def _cmd_patterns(args) -> int:
    spec = _family_spec(args)
    catalog = resolve_family(spec)
    payload = {
        "config": {"family": spec},
        "patterns": [
            {
                "family": p.family,
                "size": p.size,
                "edges": [list(e) for e in p.graph.edges()],
                "canonical_code": p.canonical_code,
            }
            for p in catalog
        ],
    }
    _emit(payload, args.out)
    return 0


def _cmd_hom(args) -> int:
    pattern = _resolve_pattern(args.pattern)
    graphs = load_pattern_file(args.graph)
    if not graphs:
        raise ValueError(f"no graph found in {args.graph}")
    g = graphs[0]
    if args.weighted:
        import numpy as np

        from .graphs import FeaturedGraph

        fg = FeaturedGraph(g, np.ones((g.num_vertices, 1)))
        value = hom(pattern, fg, phi=PhiFunction.affine((1.0,), 0.0))
    else:
        value = hom(pattern, g)
    out_value = float(value) if args.density or value.mode == "real" else value.value
    if args.density:
        out_value = out_value / float(g.num_vertices**pattern.graph.num_vertices)
    payload = {
        "config": {
            "pattern": args.pattern,
            "graph": args.graph,
            "weighted": args.weighted,
            "density": args.density,
        },
        "value": out_value,
        "mode": "real" if (args.density or value.mode == "real") else "exact",
        "promoted": value.promoted,
    }
    _emit(payload, args.out)
    return 0


def _cmd_gen(args) -> int:
    if args.kind == "csl":
        skips = (
            tuple(int(s) for s in args.skips.split(","))
            if args.skips
            else datasets.DEFAULT_CSL_SKIPS
        )
        bundle = datasets.gen_csl(
            num_vertices=args.num_vertices,
            skips=skips,
            copies_per_class=args.copies_per_class,
            seed=args.seed,
        )
    elif args.kind == "bipartite":
        bundle = datasets.gen_bipartite_er(total=args.total, seed=args.seed)
    else:
        bundle = datasets.load_paulus(
            file=args.paulus_file, copies_per_class=args.copies_per_class, seed=args.seed
        )
    out = Path(args.out)
    datasets.write_tud(bundle, out)
    config = {"config": vars(args) | {"command": "gen"}, "provenance": bundle.provenance}
    config["config"].pop("out", None)
    (out / f"{bundle.name}_config.json").write_text(json.dumps(config, indent=2) + "\n")
    print(f"wrote {len(bundle.graphs)} graphs ({bundle.num_classes} classes) to {out}")
    return 0


def _cmd_embed(args) -> int:
    bundle = _load_bundle(args)
    spec = _family_spec(args)
    matrix = embedding.embed(
        bundle,
        spec,
        phi_set=_phi_set(args, bundle),
        density=args.density,
        log1p=args.log1p,
        threads=args.threads,
    )
    config = {
        "family": spec,
        "phi": args.phi,
        "density": args.density,
        "log1p": args.log1p,
        "seed": args.seed,
        "dataset": bundle.name,
    }
    embedding.write_embedding_csv(matrix, bundle, args.out, config=config)
    print(f"wrote {matrix.values.shape[0]}x{matrix.values.shape[1]} embedding to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    bundle = _load_bundle(args)
    spec = _family_spec(args)
    hyper = evaluate.Hyper(l2=args.l2, lr=args.lr, epochs=args.epochs)
    report = evaluate.cross_validate(
        bundle,
        spec,
        phi_set=_phi_set(args, bundle),
        density=args.density,
        hyper=hyper,
        k=args.k,
        seed=args.seed,
        repeats=args.repeats,
        threads=args.threads,
    )
    payload = report.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    print(
        f"{bundle.name} {spec}: mean={report.mean:.4f} std={report.stddev:.4f} "
        f"(k={args.k}, repeats={args.repeats}, seed={args.seed})"
    )
    return 0


def _cmd_bench(args) -> int:
    bundle = _load_bundle(args)
    spec = _family_spec(args)
    hyper = evaluate.Hyper(l2=args.l2, lr=args.lr, epochs=args.epochs)
    timing = evaluate.bench_runtime(
        bundle,
        spec,
        phi_set=_phi_set(args, bundle),
        density=args.density,
        hyper=hyper,
        k=args.k,
        seed=args.seed,
        repeats=args.repeats,
        threads=args.threads,
    )
    _emit(timing, args.out)
    return 0


_COMMANDS = {
    "patterns": _cmd_patterns,
    "hom": _cmd_hom,
    "gen": _cmd_gen,
    "embed": _cmd_embed,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
