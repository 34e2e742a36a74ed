"""Command-line front end: stage-wise subcommands plus a one-shot ``pipeline``.

Exit codes: 0 success, 2 usage error, 3 input/parse error, 4 empty result.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .extract import DEFAULT_STOPWORDS, TermSet, read_lemma_map, read_word_list, retrieve_terms, tokenize
from .kb import KnowledgeBase, load_kb
from .kbforge import EmptyCorpusError, forge, write_embedding_kb
from .layout import LayoutConfig, layout_graph
from .render import RENDERERS, from_json, to_json
from .semnet import BackboneConfig, backbone, build_similarity_matrix, graph_stats

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_EMPTY = 0, 2, 3, 4
DEFAULT_SEED = 42
FORMATS = ("json", "graphml", "dot", "svg")


class EmptyResult(Exception):
    pass


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


def _read_text(path) -> str:
    with open(path, encoding="utf-8", errors="strict") as fh:
        return fh.read()


def _write(path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _formats(value: str) -> list[str]:
    fmts = [f.strip() for f in value.split(",") if f.strip()]
    bad = [f for f in fmts if f not in FORMATS]
    if bad or not fmts:
        raise argparse.ArgumentTypeError(f"formats must be a subset of {','.join(FORMATS)}")
    return fmts


# stage bodies, shared by the subcommands and the pipeline

def _load_kb(args) -> KnowledgeBase:
    return load_kb(args.kb, args.kb_type)


def stage_extract(args, kb: KnowledgeBase) -> TermSet:
    text = _read_text(args.text)
    stopwords = read_word_list(args.stopwords) if args.stopwords else DEFAULT_STOPWORDS
    lemma_map = read_lemma_map(args.lemmas) if args.lemmas else None
    terms = retrieve_terms(tokenize(text), kb, args.max_n, stopwords, lemma_map)
    if terms.n_terms == 0:
        raise EmptyResult("no lexicon terms found")
    terms.meta = {"kb": kb.name, "kb_type": kb.kind, "max_n": args.max_n, "tool_version": __version__}
    return terms


def stage_build(args, kb: KnowledgeBase, terms: TermSet):
    if terms.n_terms == 0:
        raise EmptyResult("no lexicon terms found")
    matrix = build_similarity_matrix(terms, kb)
    meta = {"kb": kb.name, "kb_type": kb.kind, "seed": args.seed, "tool_version": __version__}
    return backbone(matrix, BackboneConfig(args.multiplier), meta)


def _layout_config(args, graph) -> LayoutConfig:
    seed = args.seed if args.seed is not None else graph.meta.get("seed", DEFAULT_SEED)
    return LayoutConfig(
        iterations=args.iterations, seed=int(seed), k_r=args.k_r, k_g=args.k_g,
        delta=args.delta, tolerance=args.tolerance,
    )


def stage_layout(args, graph) -> str:
    config = _layout_config(args, graph)
    layout = layout_graph(graph, config)
    layout_meta = {
        "seed": config.seed, "iterations": config.iterations, "k_r": config.k_r,
        "k_g": config.k_g, "delta": config.delta, "tolerance": config.tolerance,
    }
    return to_json(graph, layout, layout_meta)


def stage_render(doc: str, prefix: str, formats) -> list[str]:
    graph, layout = from_json(doc)
    if layout is None:
        raise ValueError("render needs a layout file (nodes without x/y)")
    written = []
    for fmt in formats:
        path = f"{prefix}.{fmt}"
        _write(path, RENDERERS[fmt](graph, layout))
        written.append(path)
    return written


def _summary(terms: TermSet) -> str:
    c = terms.ngram_counts()
    return f"N={terms.n_terms} unigrams={c[1]} bigrams={c[2]} trigrams={c[3]}"


def cmd_extract(args) -> int:
    kb = _load_kb(args)
    terms = stage_extract(args, kb)
    _write(args.out, terms.to_json())
    _say(args, _summary(terms))
    return EXIT_OK


def cmd_build(args) -> int:
    kb = _load_kb(args)
    terms = TermSet.from_json(_read_text(args.input))
    graph = stage_build(args, kb, terms)
    _write(args.out, to_json(graph))
    _say(args, f"nodes={graph.n} edges={len(graph.edges)}")
    return EXIT_OK


def cmd_layout(args) -> int:
    graph, _ = from_json(_read_text(args.input))
    doc = stage_layout(args, graph)
    _write(args.out, doc)
    info = json.loads(doc)["meta"]["layout"]
    _say(args, f"iterations_run={info['iterations_run']} converged={str(info['converged']).lower()}")
    return EXIT_OK


def cmd_render(args) -> int:
    for path in stage_render(_read_text(args.input), args.out_prefix, args.format):
        _say(args, f"wrote {path}")
    return EXIT_OK


def cmd_stats(args) -> int:
    graph, _ = from_json(_read_text(args.input))
    stats = graph_stats(graph)
    if args.out:
        _write(args.out, json.dumps(stats, indent=2) + "\n")
    _say(args, " ".join(f"{k}={v}" for k, v in stats.items() if k != "degree_histogram"))
    return EXIT_OK


def cmd_pipeline(args) -> int:
    prefix = args.out_prefix

    def run(stage, fn, *a):
        try:
            return fn(*a)
        except EmptyResult:
            raise
        except (OSError, ValueError, LookupError) as exc:
            raise StageError(stage, exc) from exc

    kb = run("load-kb", _load_kb, args)
    terms = run("extract", stage_extract, args, kb)
    _write(f"{prefix}.terms.json", terms.to_json())
    _say(args, _summary(terms))
    graph = run("build", stage_build, args, kb, terms)
    graph_doc = to_json(graph)
    _write(f"{prefix}.graph.json", graph_doc)
    # re-read through the serializer so the result matches the stage-wise path
    graph, _ = from_json(graph_doc)
    layout_doc = run("layout", stage_layout, args, graph)
    _write(f"{prefix}.json", layout_doc)
    formats = [f for f in args.format if f != "json"]
    for path in run("render", stage_render, layout_doc, prefix, formats):
        _say(args, f"wrote {path}")
    _say(args, f"nodes={graph.n} edges={len(graph.edges)}")
    return EXIT_OK


def cmd_forge(args) -> int:
    text = "\n".join(_read_text(p) for p in args.corpus)
    phrases = None
    if args.phrases:
        phrases = [ln.strip() for ln in _read_text(args.phrases).splitlines() if ln.strip() and not ln.startswith("#")]
    vocab, matrix = forge(text, args.window, phrases, args.min_count, args.dims, args.seed)
    dropped = write_embedding_kb(vocab, matrix, args.out)
    _say(args, f"vocab={len(vocab) - dropped} dims={matrix.shape[1]} dropped={dropped}")
    return EXIT_OK


def _add_kb(p):
    p.add_argument("--kb", required=True, help="knowledge-base file")
    p.add_argument("--kb-type", choices=("embedding", "taxonomy"), default="embedding")


def _add_extract(p):
    p.add_argument("--text", required=True, help="design description (UTF-8)")
    p.add_argument("--stopwords", help="stopword file overriding the built-in list")
    p.add_argument("--lemmas", help="tab-separated surface->lemma map")
    p.add_argument("--max-n", type=int, default=3)


def _add_build(p):
    p.add_argument("--multiplier", type=float, default=2.0)


def _add_layout(p):
    p.add_argument("--iterations", type=int, default=600)
    p.add_argument("--k-r", type=float, default=2.0)
    p.add_argument("--k-g", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="suppress the stdout summary")

    parser = argparse.ArgumentParser(prog="designnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[common], help="retrieve lexicon terms from a text")
    _add_kb(p)
    _add_extract(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("build", parents=[common], help="TermSet JSON -> backbone graph JSON")
    p.add_argument("input")
    _add_kb(p)
    _add_build(p)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("layout", parents=[common], help="graph JSON -> layout JSON")
    p.add_argument("input")
    _add_layout(p)
    p.add_argument("--seed", type=int, default=None, help="defaults to the seed recorded in the graph")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("render", parents=[common], help="layout JSON -> json/graphml/dot/svg")
    p.add_argument("input")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--format", type=_formats, default=["svg"])
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("stats", parents=[common], help="summary statistics of a graph file")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("pipeline", parents=[common], help="text -> terms -> graph -> layout -> renders")
    _add_kb(p)
    _add_extract(p)
    _add_build(p)
    _add_layout(p)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--format", type=_formats, default=list(FORMATS))
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("forge", parents=[common], help="build an embedding KB from a corpus")
    p.add_argument("corpus", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--dims", type=int, default=None)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--phrases")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_forge)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors this way
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (EmptyResult, EmptyCorpusError) as exc:
        print(f"designnet {args.command}: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except StageError as exc:
        print(f"designnet {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, LookupError) as exc:
        print(f"designnet {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
