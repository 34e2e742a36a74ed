"""Build, lay out and render one semantic network per bundled KB.

    python3 scripts/build_networks.py OUT_DIR [--seed 42]

Writes <kb>.{terms.json,graph.json,json,graphml,dot,svg} per KB and prints the
graph statistics.
"""
import argparse
import json
import sys
from pathlib import Path

from designnet.cli import main as cli
from designnet.render import from_json
from designnet.semnet import graph_stats

DATA = Path(__file__).resolve().parents[1] / "src" / "designnet" / "data"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    forged = args.out_dir / "forged.kb"
    rc = cli(["forge", str(DATA / "forge_corpus.txt"), "--phrases", str(DATA / "forge_phrases.txt"),
              "--out", str(forged), "--quiet"])
    if rc:
        sys.exit(rc)

    runs = {
        "embedding": ["--kb", str(DATA / "fixture_embedding.kb")],
        "taxonomy": ["--kb", str(DATA / "fixture_taxonomy.tsv"), "--kb-type", "taxonomy",
                     "--lemmas", str(DATA / "lemmas.tsv")],
        "forged": ["--kb", str(forged)],
    }
    for name, kb_args in runs.items():
        prefix = args.out_dir / name
        rc = cli(["pipeline", *kb_args, "--text", str(DATA / "spherical_robot.txt"),
                  "--seed", str(args.seed), "--out-prefix", str(prefix), "--quiet"])
        if rc:
            sys.exit(rc)
        graph, _ = from_json(Path(f"{prefix}.json").read_text(encoding="utf-8"))
        stats = graph_stats(graph)
        print(name, json.dumps({k: v for k, v in stats.items() if k != "degree_histogram"}))


if __name__ == "__main__":
    main()
