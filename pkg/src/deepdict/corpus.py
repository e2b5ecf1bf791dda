"""Corpus ingestion, candidate n-gram enumeration, and equivalence classes.

Documents are interned over a symbol table (single characters in char mode,
whitespace-delimited tokens in token mode).  Candidate n-grams are all
distinct substrings up to a maximum length that occur at least a minimum
number of times across the corpus; substrings never cross document
boundaries.  Candidates are enumerated per document with a suffix automaton
and merged, so ids are deterministic: sorted by length, then by symbol ids.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import EmptyCorpus, EmptyDocument, InvalidParam

CHAR = "char"
TOKEN = "token"


@dataclass(frozen=True)
class SymbolTable:
    """Immutable mapping between atomic symbols and dense integer ids."""

    symbols: tuple[str, ...]
    mode: str

    def id_of(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class Document:
    id: int
    symbols: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class Corpus:
    docs: tuple[Document, ...]
    table: SymbolTable

    @property
    def total_symbols(self) -> int:
        return sum(len(d) for d in self.docs)

    def render(self, symbols) -> str:
        """Turn a symbol-id sequence back into text."""
        sep = "" if self.table.mode == CHAR else " "
        return sep.join(self.table.symbols[s] for s in symbols)

    def doc_text(self, doc_id: int) -> str:
        return self.render(self.docs[doc_id].symbols)


def ingest(texts: list[str], mode: str = CHAR) -> Corpus:
    """Intern raw document strings into a Corpus.

    Char mode treats every unicode character as a symbol; token mode splits
    on whitespace.  No other normalization is applied.
    """
    if mode not in (CHAR, TOKEN):
        raise InvalidParam(f"unknown mode {mode!r}")
    if not texts:
        raise EmptyCorpus("no documents given")
    ids: dict[str, int] = {}
    symbols: list[str] = []
    docs: list[Document] = []
    for k, text in enumerate(texts):
        raw = list(text) if mode == CHAR else text.split()
        if not raw:
            raise EmptyDocument(f"document {k} has no symbols")
        seq = []
        for sym in raw:
            sid = ids.get(sym)
            if sid is None:
                sid = len(symbols)
                ids[sym] = sid
                symbols.append(sym)
            seq.append(sid)
        docs.append(Document(k, tuple(seq)))
    return Corpus(tuple(docs), SymbolTable(tuple(symbols), mode))


def read_corpus(path: str, mode: str = CHAR) -> Corpus:
    """Load a corpus from a file (one document per line) or a directory
    (one UTF-8 file per document, filename order)."""
    if os.path.isdir(path):
        names = sorted(os.listdir(path))
        texts = []
        for name in names:
            with open(os.path.join(path, name), encoding="utf-8") as fh:
                content = fh.read()
            if content.endswith("\n"):
                content = content[:-1]
            texts.append(content)
    else:
        with open(path, encoding="utf-8") as fh:
            texts = fh.read().splitlines()
    return ingest(texts, mode)


def write_corpus(corpus: Corpus, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.docs:
            fh.write(corpus.doc_text(doc.id))
            fh.write("\n")


@dataclass
class CandidateSet:
    """The candidate n-gram universe with occurrence and substring indexes.

    strings[i] is a symbol-id tuple; occurrences[i] lists (doc id, 1-based
    start) pairs; substring_index[i] lists (candidate id, 1-based start)
    pairs for every occurrence of a proper substring of length >= 2 inside
    strings[i] (length-1 occurrences are the per-position character slots
    and are not indexed here).
    """

    strings: list[tuple[int, ...]]
    occurrences: list[list[tuple[int, int]]]
    substring_index: list[list[tuple[int, int]]]
    max_len: int
    min_count: int
    index: dict[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {s: i for i, s in enumerate(self.strings)}

    def __len__(self) -> int:
        return len(self.strings)

    def length(self, cid: int) -> int:
        return len(self.strings[cid])

    def count(self, cid: int) -> int:
        return len(self.occurrences[cid])

    def unigram_id(self, symbol: int) -> int:
        cid = self.index.get((symbol,))
        if cid is None:
            raise InvalidParam(f"symbol {symbol} is not a candidate unigram")
        return cid


class _SuffixAutomaton:
    """Suffix automaton over one symbol sequence, with end positions."""

    def __init__(self, seq) -> None:
        self.next: list[dict[int, int]] = [{}]
        self.link: list[int] = [-1]
        self.length: list[int] = [0]
        self.endpos: list[list[int]] = [[]]
        last = 0
        for i, sym in enumerate(seq):
            cur = self._new_state(self.length[last] + 1)
            self.endpos[cur].append(i)
            p = last
            while p >= 0 and sym not in self.next[p]:
                self.next[p][sym] = cur
                p = self.link[p]
            if p == -1:
                self.link[cur] = 0
            else:
                q = self.next[p][sym]
                if self.length[p] + 1 == self.length[q]:
                    self.link[cur] = q
                else:
                    clone = self._new_state(self.length[p] + 1)
                    self.next[clone] = dict(self.next[q])
                    self.link[clone] = self.link[q]
                    while p >= 0 and self.next[p].get(sym) == q:
                        self.next[p][sym] = clone
                        p = self.link[p]
                    self.link[q] = clone
                    self.link[cur] = clone
            last = cur
        self._aggregate_endpos()

    def _new_state(self, length: int) -> int:
        self.next.append({})
        self.link.append(-1)
        self.length.append(length)
        self.endpos.append([])
        return len(self.next) - 1

    def _aggregate_endpos(self) -> None:
        # propagate end positions up the suffix-link tree, longest first
        order = sorted(range(1, len(self.next)), key=lambda s: -self.length[s])
        for st in order:
            parent = self.link[st]
            if parent > 0:
                self.endpos[parent].extend(self.endpos[st])
        for st in range(1, len(self.next)):
            self.endpos[st].sort()


def enumerate_candidates(corpus: Corpus, max_len: int, min_count: int) -> CandidateSet:
    """All distinct substrings of length <= max_len occurring >= min_count
    times in the corpus, with full occurrence lists."""
    if max_len < 1:
        raise InvalidParam("max_len must be >= 1")
    if min_count < 1:
        raise InvalidParam("min_count must be >= 1")
    occs: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for doc in corpus.docs:
        sam = _SuffixAutomaton(doc.symbols)
        # walk the substring trie: every transition path is a distinct substring
        queue: list[tuple[int, tuple[int, ...]]] = [(0, ())]
        while queue:
            state, path = queue.pop()
            if len(path) >= max_len:
                continue
            for sym in sorted(sam.next[state]):
                nxt = sam.next[state][sym]
                sub = path + (sym,)
                starts = occs.setdefault(sub, [])
                depth = len(sub)
                for end in sam.endpos[nxt]:
                    starts.append((doc.id, end - depth + 2))
                queue.append((nxt, sub))
    kept = sorted((s for s, o in occs.items() if len(o) >= min_count),
                  key=lambda s: (len(s), s))
    strings = list(kept)
    index = {s: i for i, s in enumerate(strings)}
    occurrences = [sorted(occs[s]) for s in strings]
    substring_index: list[list[tuple[int, int]]] = []
    for s in strings:
        subs: list[tuple[int, int]] = []
        longest_sub = min(len(s) - 1, max_len)
        for start in range(len(s)):
            for sub_len in range(2, longest_sub + 1):
                if start + sub_len > len(s):
                    break
                cid = index.get(s[start:start + sub_len])
                if cid is not None:
                    subs.append((cid, start + 1))
        substring_index.append(subs)
    return CandidateSet(strings, occurrences, substring_index, max_len, min_count)


@dataclass
class EquivalenceClasses:
    """Partition of candidates into right-extension equivalence classes.

    Two candidates share a class exactly when their occurrence (doc, start)
    sets are identical; members of a class form a chain of single-symbol
    right extensions and the representative is the longest member.
    """

    classes: list[list[int]]
    representative: list[int]
    class_of: list[int]

    def multi_member(self) -> list[list[int]]:
        return [c for c in self.classes if len(c) >= 2]


def equivalence_classes(candidates: CandidateSet, corpus: Corpus) -> EquivalenceClasses:
    groups: dict[tuple[tuple[int, int], ...], list[int]] = {}
    for cid in range(len(candidates)):
        key = tuple(candidates.occurrences[cid])
        groups.setdefault(key, []).append(cid)
    classes = sorted(groups.values(), key=lambda members: members[0])
    class_of = [0] * len(candidates)
    reps = []
    for ci, members in enumerate(classes):
        members.sort()
        for cid in members:
            class_of[cid] = ci
        reps.append(max(members, key=candidates.length))
    return EquivalenceClasses(classes, reps, class_of)
