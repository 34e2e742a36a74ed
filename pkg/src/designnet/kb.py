"""Knowledge-base loading and term similarity.

Two on-disk formats are supported:

* embedding KB: ``"<count> <dims>"`` header followed by ``"<term> <c1> ... <cD>"``
  lines, multiword terms joined with ``_``;
* taxonomy KB: tab-separated ``S<TAB>id<TAB>lemma|lemma`` synset records and
  ``E<TAB>parent<TAB>child`` IS-A edges.

Both are wrapped by :class:`KnowledgeBase`, which answers ``contains`` and
``similarity`` queries regardless of backend.
"""
from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SEPARATOR = "_"
MIN_NORM = 1e-12


class KBFormatError(ValueError):
    """Malformed knowledge-base file; carries the offending line number."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class TermNotFoundError(LookupError):
    def __init__(self, term: str):
        self.term = term
        super().__init__(f"term not in lexicon: {term!r}")


@dataclass(frozen=True)
class EmbeddingKB:
    terms: tuple[str, ...]
    vectors: np.ndarray  # (count, dims), row i belongs to terms[i]
    index: dict[str, int] = field(repr=False)
    norms: np.ndarray = field(repr=False)

    @property
    def dims(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def count(self) -> int:
        return len(self.terms)

    @classmethod
    def from_vectors(cls, terms, vectors) -> "EmbeddingKB":
        vectors = np.asarray(vectors, dtype=np.float64)
        terms = tuple(terms)
        if vectors.ndim != 2 or vectors.shape[0] != len(terms):
            raise ValueError("vectors must be a (len(terms), dims) array")
        index: dict[str, int] = {}
        for i, t in enumerate(terms):
            if t in index:
                raise ValueError(f"duplicate term {t!r}")
            index[t] = i
        norms = np.sqrt(np.einsum("ij,ij->i", vectors, vectors))
        if not np.all(np.isfinite(vectors)):
            raise ValueError("non-finite vector component")
        if np.any(norms < MIN_NORM):
            raise ValueError("zero-norm vector")
        vectors.setflags(write=False)
        norms.setflags(write=False)
        return cls(terms, vectors, index, norms)

    def cosine(self, a: str, b: str) -> float:
        i, j = self.index[a], self.index[b]
        # elementwise products are identical for (a, b) and (b, a), so the
        # result is exactly symmetric
        dot = float(np.dot(self.vectors[i], self.vectors[j]))
        return dot / (float(self.norms[i]) * float(self.norms[j]))


@dataclass(frozen=True)
class TaxonomyKB:
    synsets: dict[str, tuple[str, ...]]  # synset id -> lemmas, declaration order
    lemma_index: dict[str, frozenset[str]]
    isa_edges: frozenset[tuple[str, str]]
    neighbours: dict[str, tuple[str, ...]] = field(repr=False)

    @classmethod
    def build(cls, synsets: dict[str, tuple[str, ...]], edges) -> "TaxonomyKB":
        lemma_index: dict[str, set[str]] = {}
        for sid, lemmas in synsets.items():
            if not lemmas:
                raise ValueError(f"synset {sid!r} has no lemmas")
            for lemma in lemmas:
                lemma_index.setdefault(lemma, set()).add(sid)
        adj: dict[str, set[str]] = {sid: set() for sid in synsets}
        edge_set = set()
        for parent, child in edges:
            for sid in (parent, child):
                if sid not in synsets:
                    raise ValueError(f"edge references unknown synset {sid!r}")
            if parent == child:
                raise ValueError(f"self-loop on synset {parent!r}")
            edge_set.add((parent, child))
            adj[parent].add(child)
            adj[child].add(parent)
        return cls(
            dict(synsets),
            {k: frozenset(v) for k, v in lemma_index.items()},
            frozenset(edge_set),
            {k: tuple(sorted(v)) for k, v in adj.items()},
        )

    def path_distance(self, a: str, b: str) -> int | None:
        """Shortest undirected IS-A distance between any synset of ``a`` and any of ``b``."""
        sources = self.lemma_index[a]
        targets = self.lemma_index[b]
        if sources & targets:
            return 0
        dist = {s: 0 for s in sources}
        queue = deque(sorted(sources))
        while queue:
            node = queue.popleft()
            d = dist[node] + 1
            for nb in self.neighbours[node]:
                if nb in dist:
                    continue
                if nb in targets:
                    return d
                dist[nb] = d
                queue.append(nb)
        return None


@dataclass(eq=False)
class KnowledgeBase:
    """Immutable, thread-safe view over one loaded knowledge base."""

    backend: EmbeddingKB | TaxonomyKB
    name: str
    max_ngram: int
    _memo: dict = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    @property
    def kind(self) -> str:
        return "embedding" if isinstance(self.backend, EmbeddingKB) else "taxonomy"

    def lexicon(self) -> list[str]:
        if isinstance(self.backend, EmbeddingKB):
            return list(self.backend.terms)
        return sorted(self.backend.lemma_index)

    def contains(self, term: str) -> bool:
        if isinstance(self.backend, EmbeddingKB):
            return term in self.backend.index
        return term in self.backend.lemma_index

    def similarity(self, a: str, b: str) -> float:
        for t in (a, b):
            if not self.contains(t):
                raise TermNotFoundError(t)
        key = (a, b) if a <= b else (b, a)
        with self._lock:
            cached = self._memo.get(key)
        if cached is not None:
            return cached
        value = self._compute(*key)
        with self._lock:
            self._memo.setdefault(key, value)
        return value

    def _compute(self, a: str, b: str) -> float:
        if a == b:
            return 1.0
        if isinstance(self.backend, EmbeddingKB):
            return min(1.0, max(0.0, self.backend.cosine(a, b)))
        d = self.backend.path_distance(a, b)
        return 0.0 if d is None else 1.0 / (1.0 + d)


def contains(kb: KnowledgeBase, term: str) -> bool:
    return kb.contains(term)


def similarity(kb: KnowledgeBase, a: str, b: str) -> float:
    return kb.similarity(a, b)


def _ngram_len(term: str) -> int:
    return len(term.split(SEPARATOR))


def _max_ngram(terms) -> int:
    return max((_ngram_len(t) for t in terms), default=1)


def embedding_kb(terms, vectors, name: str = "embedding") -> KnowledgeBase:
    backend = EmbeddingKB.from_vectors(terms, vectors)
    return KnowledgeBase(backend, name, _max_ngram(backend.terms))


def taxonomy_kb(synsets: dict[str, tuple[str, ...]], edges, name: str = "taxonomy") -> KnowledgeBase:
    backend = TaxonomyKB.build(synsets, edges)
    return KnowledgeBase(backend, name, _max_ngram(backend.lemma_index))


def load_embedding_kb(path, name: str | None = None) -> KnowledgeBase:
    path = Path(path)
    name = name or path.stem
    src = str(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise KBFormatError("empty file, expected '<count> <dims>' header", src, 1)
    header = lines[0].split(" ")
    try:
        if len(header) != 2:
            raise ValueError
        count, dims = int(header[0]), int(header[1])
    except ValueError:
        raise KBFormatError(f"malformed header {lines[0]!r}", src, 1) from None
    if count < 0 or dims < 1:
        raise KBFormatError(f"malformed header {lines[0]!r}", src, 1)

    terms: list[str] = []
    seen: set[str] = set()
    vectors = np.empty((count, dims), dtype=np.float64)
    body = lines[1:]
    if len(body) > count:
        raise KBFormatError(f"header declares {count} terms, found more", src, count + 2)
    for offset, line in enumerate(body):
        lineno = offset + 2
        parts = line.split(" ")
        term, comps = parts[0], parts[1:]
        if not term:
            raise KBFormatError("missing term", src, lineno)
        if term != term.lower():
            raise KBFormatError(f"term {term!r} is not lowercase", src, lineno)
        if len(comps) != dims:
            raise KBFormatError(f"expected {dims} components, got {len(comps)}", src, lineno)
        try:
            row = [float(c) for c in comps]
        except ValueError:
            raise KBFormatError("unparseable component", src, lineno) from None
        if not all(math.isfinite(c) for c in row):
            raise KBFormatError("non-finite component", src, lineno)
        if math.sqrt(math.fsum(c * c for c in row)) < MIN_NORM:
            raise KBFormatError(f"zero vector for {term!r}", src, lineno)
        if term in seen:
            raise KBFormatError(f"duplicate term {term!r}", src, lineno)
        seen.add(term)
        terms.append(term)
        vectors[offset] = row
    if len(body) < count:
        raise KBFormatError(f"header declares {count} terms, file has {len(body)}", src, len(body) + 2)
    return embedding_kb(terms, vectors, name)


def load_taxonomy_kb(path, name: str | None = None) -> KnowledgeBase:
    path = Path(path)
    name = name or path.stem
    src = str(path)
    synsets: dict[str, tuple[str, ...]] = {}
    edges: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[0] not in ("S", "E"):
                raise KBFormatError(f"malformed record {line!r}", src, lineno)
            kind, a, b = parts
            if kind == "S":
                if a in synsets:
                    raise KBFormatError(f"duplicate synset {a!r}", src, lineno)
                lemmas = tuple(x for x in b.split("|") if x)
                if not lemmas:
                    raise KBFormatError(f"synset {a!r} has no lemmas", src, lineno)
                if any(x != x.lower() for x in lemmas):
                    raise KBFormatError(f"synset {a!r} has a non-lowercase lemma", src, lineno)
                synsets[a] = lemmas
            else:
                for sid in (a, b):
                    if sid not in synsets:
                        raise KBFormatError(f"edge references unknown synset {sid!r}", src, lineno)
                if a == b:
                    raise KBFormatError(f"self-loop on synset {a!r}", src, lineno)
                edges.append((a, b))
    return taxonomy_kb(synsets, edges, name)


def load_kb(path, kind: str = "embedding", name: str | None = None) -> KnowledgeBase:
    if kind == "embedding":
        return load_embedding_kb(path, name)
    if kind == "taxonomy":
        return load_taxonomy_kb(path, name)
    raise ValueError(f"unknown kb type {kind!r}")


def save_kb(kb: KnowledgeBase, path) -> None:
    """Write ``kb`` in its native file format (floats use round-trip repr)."""
    out = []
    backend = kb.backend
    if isinstance(backend, EmbeddingKB):
        out.append(f"{backend.count} {backend.dims}")
        for term, row in zip(backend.terms, backend.vectors):
            out.append(" ".join([term, *(repr(float(c)) for c in row)]))
    else:
        for sid, lemmas in backend.synsets.items():
            out.append(f"S\t{sid}\t{'|'.join(lemmas)}")
        for parent, child in sorted(backend.isa_edges):
            out.append(f"E\t{parent}\t{child}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
