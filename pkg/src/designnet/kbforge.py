"""Forge a small embedding KB from raw text: windowed counts, PPMI, truncated SVD."""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse

from .extract import tokenize
from .kb import MIN_NORM, SEPARATOR

log = logging.getLogger(__name__)


@dataclass
class CooccurrenceCounts:
    vocab: list[str]
    pair_counts: dict[tuple[int, int], int]  # symmetric; both orientations stored
    token_counts: list[int]
    total: int


@dataclass
class PPMIVectors:
    vocab: list[str]
    rows: sparse.csr_matrix


def corpus_sentences(text: str) -> list[list[str]]:
    return [[t.normalized for t in sent] for sent in tokenize(text)]


def _phrase_key(phrase: str) -> tuple[str, ...]:
    phrase = phrase.replace(SEPARATOR, " ")
    return tuple(t.normalized for sent in tokenize(phrase) for t in sent)


def join_phrases(sentences: list[list[str]], phrases) -> list[list[str]]:
    """Greedy longest-match merge of multiword ``phrases`` into single ``a_b_c`` tokens."""
    keys = {k for k in (_phrase_key(p) for p in phrases) if len(k) > 1}
    if not keys:
        return [list(s) for s in sentences]
    longest = max(len(k) for k in keys)
    out = []
    for sent in sentences:
        merged, i = [], 0
        while i < len(sent):
            for k in range(min(longest, len(sent) - i), 1, -1):
                window = tuple(sent[i:i + k])
                if window in keys:
                    merged.append(SEPARATOR.join(window))
                    i += k
                    break
            else:
                merged.append(sent[i])
                i += 1
        out.append(merged)
    return out


def count_cooccurrences(corpus, window: int = 2, phrases=None, min_count: int = 1) -> CooccurrenceCounts:
    """Symmetric, sentence-bounded co-occurrence counts.

    ``corpus`` is raw text or a list of tokenized sentences. Each pair of
    in-vocabulary tokens at distance 1..window adds one count to both
    orientations. Tokens rarer than ``min_count`` keep their positions but
    never pair.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    sentences = corpus_sentences(corpus) if isinstance(corpus, str) else [list(s) for s in corpus]
    if phrases:
        sentences = join_phrases(sentences, phrases)
    freq = Counter(t for s in sentences for t in s)
    vocab: list[str] = []
    index: dict[str, int] = {}
    for s in sentences:
        for t in s:
            if t not in index and freq[t] >= min_count:
                index[t] = len(vocab)
                vocab.append(t)
    pairs: Counter = Counter()
    for s in sentences:
        ids = [index.get(t) for t in s]
        for p, a in enumerate(ids):
            if a is None:
                continue
            for b in ids[p + 1:p + 1 + window]:
                if b is None:
                    continue
                pairs[(a, b)] += 1
                pairs[(b, a)] += 1
    token_counts = [0] * len(vocab)
    for (a, _), c in pairs.items():
        token_counts[a] += c
    return CooccurrenceCounts(vocab, dict(pairs), token_counts, sum(pairs.values()))


def ppmi(counts: CooccurrenceCounts) -> PPMIVectors:
    if counts.total <= 0:
        raise ValueError("no co-occurrences to weight")
    n = len(counts.vocab)
    rows, cols, vals = [], [], []
    tc = counts.token_counts
    for (w, c), k in sorted(counts.pair_counts.items()):
        num, den = counts.total * k, tc[w] * tc[c]
        if k > 0 and num > den:
            rows.append(w)
            cols.append(c)
            vals.append(math.log(num / den))
    mat = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=np.float64)
    return PPMIVectors(list(counts.vocab), mat)


def randomized_svd(matrix, rank: int, seed: int = 0, oversample: int = 8, power_iters: int = 2):
    """Rank-``rank`` SVD via a Gaussian sketch; returns ``(U, S, Vt)``."""
    m = sparse.csr_matrix(matrix) if not sparse.issparse(matrix) else matrix.tocsr()
    n_rows, n_cols = m.shape
    width = min(rank + oversample, n_rows, n_cols)
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((n_cols, width))
    q, _ = np.linalg.qr(m @ omega)
    for _ in range(power_iters):
        q, _ = np.linalg.qr(m.T @ q)
        q, _ = np.linalg.qr(m @ q)
    b = np.asarray((m.T @ q).T)
    ub, s, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ ub
    return u[:, :rank], s[:rank], vt[:rank]


def reduce(vectors: PPMIVectors, dims: int, seed: int = 0) -> np.ndarray:
    n = len(vectors.vocab)
    if not 1 <= dims <= n:
        raise ValueError(f"dims must be in [1, {n}], got {dims}")
    u, s, _ = randomized_svd(vectors.rows, dims, seed)
    return u * s


def write_embedding_kb(vocab, matrix, path) -> int:
    """Write rows as an embedding KB file; zero rows are dropped. Returns the drop count."""
    if isinstance(matrix, PPMIVectors):
        matrix = matrix.rows
    if sparse.issparse(matrix):
        matrix = matrix.toarray()
    matrix = np.asarray(matrix, dtype=np.float64)
    if len(vocab) == 0 or matrix.shape[0] != len(vocab):
        raise ValueError("need one row per vocabulary entry")
    norms = np.linalg.norm(matrix, axis=1)
    keep = [i for i in range(len(vocab)) if norms[i] >= MIN_NORM]
    dropped = len(vocab) - len(keep)
    if not keep:
        raise ValueError("all vectors are zero; nothing to write")
    if dropped:
        log.warning("dropped %d zero vector(s)", dropped)
    lines = [f"{len(keep)} {matrix.shape[1]}"]
    for i in keep:
        term = SEPARATOR.join(str(vocab[i]).lower().split())
        lines.append(" ".join([term, *(repr(float(c)) for c in matrix[i])]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return dropped


DEFAULT_DIMS = 50


class EmptyCorpusError(ValueError):
    pass


def forge(corpus, window: int = 2, phrases=None, min_count: int = 1, dims: int | None = None, seed: int = 0):
    """Full chain; returns ``(vocab, vectors)``.

    ``dims=None`` means ``min(50, |vocab|)``.
    """
    counts = count_cooccurrences(corpus, window, phrases, min_count)
    if not counts.vocab or counts.total == 0:
        raise EmptyCorpusError("corpus yields an empty vocabulary")
    vectors = ppmi(counts)
    if dims is None:
        dims = min(DEFAULT_DIMS, len(vectors.vocab))
    return vectors.vocab, reduce(vectors, dims, seed)
