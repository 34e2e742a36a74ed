"""Tokenization and greedy longest-match retrieval of lexicon terms."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .kb import SEPARATOR, KnowledgeBase

_TOKEN_RE = re.compile(r"(?:[^\W_]|['’-])+")
_BOUNDARY_RE = re.compile(r"[.!?;](?=\s|$)")
_EDGE_PUNCT = "'’-"


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    sentence_index: int
    token_index: int
    char_span: tuple[int, int]  # UTF-8 byte offsets into the input


@dataclass(frozen=True)
class TermOccurrence:
    term: str
    n: int
    sentence_index: int
    first_token_index: int
    char_span: tuple[int, int]
    n_tokens: int = 1  # tokens consumed; differs from n for hyphen splits

    def to_dict(self) -> dict:
        return {
            "term": self.term,
            "n": self.n,
            "sentence": self.sentence_index,
            "token": self.first_token_index,
            "tokens": self.n_tokens,
            "span": [self.char_span[0], self.char_span[1]],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TermOccurrence":
        return cls(
            d["term"], int(d["n"]), int(d["sentence"]), int(d["token"]),
            (int(d["span"][0]), int(d["span"][1])), int(d.get("tokens", 1)),
        )


@dataclass
class TermSet:
    terms: list[str]
    occurrences: list[TermOccurrence]
    meta: dict = field(default_factory=dict)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def ngram_counts(self) -> dict[int, int]:
        """Unique terms per token length, keyed 1..3 (Table-2 style breakdown)."""
        counts = {1: 0, 2: 0, 3: 0}
        for t in self.terms:
            n = len(t.split(SEPARATOR))
            counts[n] = counts.get(n, 0) + 1
        return counts

    def to_json(self) -> str:
        doc = {
            "n_terms": self.n_terms,
            "terms": list(self.terms),
            "occurrences": [o.to_dict() for o in self.occurrences],
        }
        if self.meta:
            doc["meta"] = self.meta
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TermSet":
        doc = json.loads(text)
        try:
            terms = [str(t) for t in doc["terms"]]
            occ = [TermOccurrence.from_dict(o) for o in doc["occurrences"]]
            n = int(doc["n_terms"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"not a TermSet document: missing {exc}") from None
        if n != len(terms) or len(set(terms)) != n:
            raise ValueError("TermSet n_terms does not match its unique term list")
        return cls(terms, occ, dict(doc.get("meta", {})))


def _byte_offsets(text: str) -> list[int]:
    """offsets[i] = UTF-8 byte offset of character i (length len(text)+1)."""
    out = [0]
    total = 0
    for ch in text:
        total += len(ch.encode("utf-8"))
        out.append(total)
    return out


def tokenize(text: str) -> list[list[Token]]:
    """Split ``text`` into sentences of word tokens.

    Sentences end at ``. ! ? ;`` followed by whitespace or end of text;
    tokens are maximal runs of letters, digits, hyphens and apostrophes.
    Sentences without any token are dropped.
    """
    if not text:
        return []
    offsets = _byte_offsets(text)
    bounds = [m.end() for m in _BOUNDARY_RE.finditer(text)]
    sentences: list[list[Token]] = []
    start = 0
    for end in [*bounds, len(text)]:
        chunk: list[Token] = []
        for m in _TOKEN_RE.finditer(text, start, end):
            s, e = m.span()
            while s < e and text[s] in _EDGE_PUNCT:
                s += 1
            while e > s and text[e - 1] in _EDGE_PUNCT:
                e -= 1
            if s == e:
                continue
            surface = text[s:e]
            chunk.append(Token(surface, surface.lower(), len(sentences), len(chunk), (offsets[s], offsets[e])))
        if chunk:
            sentences.append(chunk)
        start = end
    return sentences


def _candidates(joined: str, lemma_map: dict[str, str] | None):
    forms = [joined]
    if "-" in joined:
        forms.append(joined.replace("-", SEPARATOR))
    yield from forms
    if lemma_map:
        for f in forms:
            if f in lemma_map:
                yield lemma_map[f]


def retrieve_terms(
    sentences: list[list[Token]],
    kb: KnowledgeBase,
    max_n: int = 3,
    stopwords=None,
    lemma_map: dict[str, str] | None = None,
) -> TermSet:
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if stopwords is None:
        stopwords = DEFAULT_STOPWORDS
    width = min(max_n, kb.max_ngram)
    terms: list[str] = []
    seen: set[str] = set()
    occurrences: list[TermOccurrence] = []
    for sentence in sentences:
        i = 0
        while i < len(sentence):
            hit = None
            for k in range(min(width, len(sentence) - i), 0, -1):
                window = sentence[i:i + k]
                joined = SEPARATOR.join(t.normalized for t in window)
                for cand in _candidates(joined, lemma_map):
                    parts = len(cand.split(SEPARATOR))
                    if parts <= max_n and kb.contains(cand):
                        hit = (cand, k, parts)
                        break
                if hit:
                    break
            if hit is None:
                i += 1
                continue
            term, k, parts = hit
            if k == 1 and (sentence[i].normalized in stopwords or term in stopwords):
                i += 1
                continue
            window = sentence[i:i + k]
            occurrences.append(TermOccurrence(
                term, parts, window[0].sentence_index, i,
                (window[0].char_span[0], window[-1].char_span[1]), k,
            ))
            if term not in seen:
                seen.add(term)
                terms.append(term)
            i += k
    return TermSet(terms, occurrences)


def read_word_list(path) -> set[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return words


def read_lemma_map(path) -> dict[str, str]:
    mapping = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"{path}:{lineno}: expected '<surface>\\t<lemma>'")
        mapping[parts[0].strip().lower()] = parts[1].strip().lower()
    return mapping


DEFAULT_STOPWORDS = frozenset(
    read_word_list(resources.files("designnet") / "data" / "stopwords.txt")
)
