"""Bounded closure of a word congruence over a finite alphabet.

Words of length ``1..max_len`` are encoded as integers: a word of length
``k`` with letters ``l_0..l_{k-1}`` has code ``sum l_i m^(k-1-i)`` and node id
``offset[k] + code``. Two kinds of generating pairs are supported:

* products: ``p q ~ P[p, q]`` for each table ``P`` (``-1`` = no relation);
* letter moves: ``p ~ sigma[p]`` applied at any position.

Edges join a word to its one-step reduct (or moved word); connected
components are the bounded closure.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components


class WordGraph:
    def __init__(
        self,
        num_letters: int,
        products: Sequence[np.ndarray],
        max_len: int,
        moves: Sequence[np.ndarray] = (),
    ):
        if max_len < 1:
            raise ValueError("max_len must be at least 1")
        self.m = int(num_letters)
        self.max_len = int(max_len)
        self.products = [np.asarray(p, dtype=np.int64) for p in products]
        self.moves = [np.asarray(s, dtype=np.int64) for s in moves]
        self.offset = [0, 0]
        for k in range(1, max_len + 1):
            self.offset.append(self.offset[-1] + self.m**k)
        self.num_nodes = self.offset[max_len + 1]
        self._build()

    def _letters(self, codes: np.ndarray, k: int, i: int) -> np.ndarray:
        return (codes // self.m ** (k - 1 - i)) % self.m

    def _build(self) -> None:
        m = self.m
        src, dst = [], []
        for k in range(1, self.max_len + 1):
            codes = np.arange(m**k, dtype=np.int64)
            for i in range(k):
                li = self._letters(codes, k, i)
                if i + 1 < k:
                    lj = self._letters(codes, k, i + 1)
                    prefix = codes // m ** (k - i)
                    suffix = codes % m ** (k - 2 - i)
                    for P in self.products:
                        prod = P[li, lj]
                        ok = prod >= 0
                        red = (prefix[ok] * m + prod[ok]) * m ** (k - 2 - i) + suffix[ok]
                        src.append(self.offset[k] + codes[ok])
                        dst.append(self.offset[k - 1] + red)
                for sigma in self.moves:
                    img = sigma[li]
                    ok = (img >= 0) & (img != li)
                    moved = codes[ok] + (img[ok] - li[ok]) * m ** (k - 1 - i)
                    src.append(self.offset[k] + codes[ok])
                    dst.append(self.offset[k] + moved)
        if src:
            s = np.concatenate(src)
            d = np.concatenate(dst)
        else:
            s = d = np.zeros(0, dtype=np.int64)
        self.num_edges = len(s)
        self.graph = coo_matrix(
            (np.ones(len(s), dtype=np.int8), (s, d)), shape=(self.num_nodes, self.num_nodes)
        ).tocsr()
        _, self.labels = connected_components(self.graph, directed=False)

    def node(self, word: Sequence[int]) -> int:
        code = 0
        for a in word:
            code = code * self.m + int(a)
        return self.offset[len(word)] + code

    def word(self, node: int) -> tuple[int, ...]:
        k = 1
        while self.offset[k + 1] <= node:
            k += 1
        code = node - self.offset[k]
        out = []
        for _ in range(k):
            out.append(code % self.m)
            code //= self.m
        return tuple(reversed(out))

    def letter_components(self) -> np.ndarray:
        return self.labels[: self.m]

    def neighbours(self, word: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Words one generating step away, in a fixed order."""
        out = []
        k = len(word)
        for i in range(k - 1):
            for P in self.products:
                p = int(P[word[i], word[i + 1]])
                if p >= 0:
                    out.append(word[:i] + (p,) + word[i + 2 :])
        if k + 1 <= self.max_len:
            for i in range(k):
                for P in self.products:
                    hits = np.argwhere(P == word[i])
                    for a, b in hits:
                        out.append(word[:i] + (int(a), int(b)) + word[i + 1 :])
        for i in range(k):
            for sigma in self.moves:
                img = int(sigma[word[i]])
                if img >= 0 and img != word[i]:
                    out.append(word[:i] + (img,) + word[i + 1 :])
                pre = np.flatnonzero(sigma == word[i])
                for a in pre:
                    if a != word[i]:
                        out.append(word[:i] + (int(a),) + word[i + 1 :])
        return list(dict.fromkeys(out))

    def path(self, start: tuple[int, ...], goal: tuple[int, ...]) -> list[tuple[int, ...]] | None:
        """A shortest chain of words from ``start`` to ``goal``.

        Breadth-first search over the stored graph; ties are broken by node
        order in the sparse matrix, so the chain is deterministic.
        """
        s, t = self.node(start), self.node(goal)
        if self.labels[s] != self.labels[t]:
            return None
        _, pred = breadth_first_order(self.graph, s, directed=False, return_predecessors=True)
        chain = [t]
        while chain[-1] != s:
            p = int(pred[chain[-1]])
            if p < 0:
                raise AssertionError("components say connected but BFS found no path")
            chain.append(p)
        return [self.word(v) for v in reversed(chain)]
