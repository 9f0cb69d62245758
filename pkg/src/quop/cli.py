"""``quop`` command line.

Exit codes: 0 success, 1 usage, 2 input data error, 3 numeric guard
(pad size cap or eigensolver failure).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .baseline import DEFAULT_DIM, DEFAULT_ITERATION_WEIGHTS, cosine, fastrp_embed, read_embedding_csv
from .errors import NumericGuardError, QuopError
from .graph import HermAdjParam, erdos_renyi_weighted, karate_club, load_graph, save_graph
from .kernels import KernelConfig
from .pipeline import (
    MAX_PADSIZE,
    quop_pairwise,
    read_similarity_csv,
    write_dense_csv,
    write_pgm,
    write_similarity_json,
)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(out, command, args, argv, inputs) -> None:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    manifest = {
        "command": command,
        "argv": list(argv),
        "parameters": params,
        "inputs": {str(p): _digest(p) for p in inputs if p is not None and Path(p).is_file()},
        "version": __version__,
    }
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def _load(args):
    if args.graph == "karate":
        return karate_club()
    return load_graph(args.graph, args.format, directed=args.directed, normalize=args.normalize)


def _graph_input(args):
    return None if args.graph == "karate" else args.graph


def _int_list(text, name):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"{name} must be 'all' or a comma separated list of node ids") from None


def _pairs(text):
    out = []
    for chunk in text.split():
        ids = _int_list(chunk, "--pairs")
        if len(ids) != 2:
            raise UsageError(f"--pairs entries look like 'u,v', got {chunk!r}")
        out.append(tuple(ids))
    if not out:
        raise UsageError("--pairs is empty")
    return out


def cmd_gen(args, argv):
    if args.nodes < 1:
        raise UsageError("--nodes must be >= 1")
    if not 0.0 <= args.edge_prob <= 1.0:
        raise UsageError("--edge-prob must lie in [0, 1]")
    g = erdos_renyi_weighted(args.nodes, args.edge_prob, args.seed)
    save_graph(g, args.out)
    _write_manifest(args.out, "gen", args, argv, [])
    print(f"nodes={g.n_nodes} edges={g.n_edges}")


def cmd_similarity(args, argv):
    if args.hops < 1:
        raise UsageError("--hops must be >= 1")
    if args.mode == "sampled" and args.shots < 1:
        raise UsageError("--shots must be >= 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    try:
        alpha = HermAdjParam.from_parts(args.alpha_re, args.alpha_im)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = _load(args)
    nodes = None if args.nodes == "all" else _int_list(args.nodes, "--nodes")
    if args.batch == "all":
        batch = None  # whole graph
    elif args.batch == "nodes":
        batch = nodes
    else:
        batch = _int_list(args.batch, "--batch")
    cfg = KernelConfig(args.kernel, args.mode, args.shots, args.seed, args.clamp)
    sim = quop_pairwise(
        g, nodes, args.hops, alpha, cfg, batch, args.ordering, args.jobs, args.max_padsize
    )
    Path(args.out).write_text(sim.to_csv())
    if args.json:
        write_similarity_json(sim, args.json)
    _write_manifest(args.out, "similarity", args, argv, [_graph_input(args)])
    print(f"nodes={len(sim.node_ids)} pairs={len(sim.node_ids) * (len(sim.node_ids) + 1) // 2} padded_dim={sim.padded_dim}")


def cmd_heatmap(args, argv):
    ids, dense = read_similarity_csv(args.input)
    write_dense_csv(ids, dense, args.csv)
    write_pgm(dense, args.pgm)
    _write_manifest(args.pgm, "heatmap", args, argv, [args.input])
    print(f"{len(ids)}x{len(ids)} heat map written")


def cmd_fastrp(args, argv):
    if args.dim < 1:
        raise UsageError("--dim must be >= 1")
    weights = [float(x) for x in args.iteration_weights.split(",") if x]
    g = _load(args)
    emb = fastrp_embed(g, args.dim, weights, args.seed)
    Path(args.out).write_text(emb.to_csv())
    _write_manifest(args.out, "fastrp", args, argv, [_graph_input(args)])
    print(f"nodes={len(emb.node_ids)} dim={emb.dim}")


def cmd_cosine(args, argv):
    pairs = _pairs(args.pairs)
    if args.embeddings:
        emb = read_embedding_csv(args.embeddings)
    elif args.graph:
        weights = [float(x) for x in args.iteration_weights.split(",") if x]
        emb = fastrp_embed(_load(args), args.dim, weights, args.seed)
    else:
        raise UsageError("give --embeddings or --graph")
    quop = None
    if args.similarity:
        ids, dense = read_similarity_csv(args.similarity)
        quop = (ids, dense)
    rows = []
    for u, v in pairs:
        try:
            row = [u, v, cosine(emb.vector(u), emb.vector(v))]
        except ValueError:
            raise QuopError(f"pair ({u}, {v}) is not in the embedding") from None
        if quop is not None:
            ids, dense = quop
            if u not in ids or v not in ids:
                raise QuopError(f"pair ({u}, {v}) is not in {args.similarity}")
            row.append(float(dense[ids.index(u), ids.index(v)]))
        rows.append(row)
    header = ["u", "v", "fastrp"] + (["quop"] if quop is not None else [])
    print("  ".join(f"{h:>8}" for h in header))
    for r in rows:
        print("  ".join([f"{r[0]:>8}", f"{r[1]:>8}"] + [f"{x:>8.3f}" for x in r[2:]]))
    if args.out:
        lines = [",".join(header)] + [",".join(str(x) if i < 2 else repr(x) for i, x in enumerate(r)) for r in rows]
        Path(args.out).write_text("\n".join(lines) + "\n")
        _write_manifest(
            args.out, "cosine", args, argv, [args.embeddings, args.similarity, args.graph if args.graph != "karate" else None]
        )


def cmd_replay(args, argv):
    manifest = json.loads(Path(args.manifest).read_text())
    return main(manifest["argv"])


def _add_graph_flags(p, required=True):
    p.add_argument("--graph", required=required, help="graph file, or 'karate' for the built-in fixture")
    p.add_argument("--format", choices=("json", "edgelist"), help="default: by file extension")
    p.add_argument("--directed", action="store_true", help="edge lists only")
    p.add_argument("--normalize", action="store_true", help="divide weights by the largest weight")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quop", description="Quantum-operator node embeddings and similarity.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a weighted Erdos-Renyi graph")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edge-prob", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("similarity", help="pairwise operator similarity")
    _add_graph_flags(p)
    p.add_argument("--hops", type=int, default=1)
    p.add_argument("--kernel", choices=("fidelity", "swap"), default="fidelity")
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clamp", action="store_true", help="clip sampled SWAP scores to [0, 1]")
    p.add_argument("--alpha-re", type=float, default=0.0)
    p.add_argument("--alpha-im", type=float, default=1.0)
    p.add_argument("--nodes", default="all", help="'all' or comma separated ids")
    p.add_argument("--batch", default="all", help="padding batch: 'all', 'nodes' or comma separated ids")
    p.add_argument("--ordering", choices=("canonical", "id"), default="canonical")
    p.add_argument("--max-padsize", type=int, default=MAX_PADSIZE)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", help="also write the matrix as JSON")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("heatmap", help="dense CSV and P5 graymap from a similarity CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("--pgm", required=True)
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("fastrp", help="FastRP baseline embeddings")
    _add_graph_flags(p)
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iteration-weights", default=",".join(map(str, DEFAULT_ITERATION_WEIGHTS)))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fastrp)

    p = sub.add_parser("cosine", help="cosine similarity table for node pairs")
    _add_graph_flags(p, required=False)
    p.add_argument("--embeddings", help="embedding CSV from 'quop fastrp'")
    p.add_argument("--dim", type=int, default=DEFAULT_DIM)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iteration-weights", default=",".join(map(str, DEFAULT_ITERATION_WEIGHTS)))
    p.add_argument("--pairs", required=True, help="space separated 'u,v' pairs")
    p.add_argument("--similarity", help="QuOp similarity CSV for a side-by-side column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cosine)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.func(args, argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"quop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericGuardError as exc:
        print(f"quop: numeric guard: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (QuopError, OSError, ValueError) as exc:
        print(f"quop: input error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
