"""Print the unigram/bigram/trigram breakdown of a text against several KBs.

    python3 scripts/retrieval_counts.py [--text PATH] [--forge-corpus PATH]

The bundled embedding and taxonomy fixtures are always used; a KB forged from
the bundled corpus is added as a third column.
"""
import argparse
import tempfile
from pathlib import Path

from designnet.extract import read_lemma_map, retrieve_terms, tokenize
from designnet.kb import load_kb
from designnet.kbforge import forge, write_embedding_kb

DATA = Path(__file__).resolve().parents[1] / "src" / "designnet" / "data"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--text", type=Path, default=DATA / "spherical_robot.txt")
    ap.add_argument("--forge-corpus", type=Path, default=DATA / "forge_corpus.txt")
    args = ap.parse_args()

    sentences = tokenize(args.text.read_text(encoding="utf-8"))
    lemmas = read_lemma_map(DATA / "lemmas.tsv")
    phrases = (DATA / "forge_phrases.txt").read_text(encoding="utf-8").splitlines()

    with tempfile.TemporaryDirectory() as tmp:
        forged = Path(tmp) / "forged.kb"
        write_embedding_kb(*forge(args.forge_corpus.read_text(encoding="utf-8"), phrases=phrases), forged)
        kbs = [
            ("fixture embedding", load_kb(DATA / "fixture_embedding.kb"), None),
            ("fixture taxonomy", load_kb(DATA / "fixture_taxonomy.tsv", "taxonomy"), lemmas),
            ("forged (PPMI+SVD)", load_kb(forged), None),
        ]
        print(f"{'KB':<20}{'N':>5}{'uni':>6}{'bi':>6}{'tri':>6}")
        for name, kb, lm in kbs:
            terms = retrieve_terms(sentences, kb, lemma_map=lm)
            c = terms.ngram_counts()
            print(f"{name:<20}{terms.n_terms:>5}{c[1]:>6}{c[2]:>6}{c[3]:>6}")


if __name__ == "__main__":
    main()
