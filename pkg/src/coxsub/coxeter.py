"""Finite Coxeter systems through the geometric representation.

A Coxeter system is encoded by its Coxeter matrix m, with m[i][i] = 1 and
m[i][j] = m[j][i] >= 2 the order of s_i s_j.  Generators act on the span
of the simple roots via the bilinear form B(a_i, a_j) = -cos(pi/m[i][j]),
realizing the group faithfully by n x n reflection matrices.  Matrix
entries of group elements are compared on a fixed rounding grid (1e-6 by
default); for the groups admitted here the true entries sit far from the
midpoints of that grid, so equality and descent tests are exact.

Conventions used throughout the package:
  * generators are 1-based integers 1..n,
  * a word is a tuple of generator indices, read left to right,
  * words multiply left to right: element_of((i, j)) is s_i followed by
    s_j, acting on the right,
  * s is a right descent of g iff g sends alpha_s to a negative root; in
    matrix terms, column s of g has no entry above tol.

Only finite groups are supported.  Construction rejects any Coxeter
matrix whose bilinear form is not positive definite; positive
definiteness is the classical finiteness criterion and carves out
exactly the A/B/D/E6/E7/E8/F4/H3/H4/I2(m) catalog.
"""

from __future__ import annotations

import json
import math
import re
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .backend import active as _K

Word = tuple[int, ...]

MAX_WORD_LETTERS = 62  # position sets are packed into int64 bitmasks


def _as_word(letters: Iterable[int]) -> Word:
    word = tuple(int(x) for x in letters)
    return word


class CoxeterMatrix:
    """Validated symmetric Coxeter matrix of a finite group."""

    __slots__ = ("m", "rank", "name")

    def __init__(self, rows: Sequence[Sequence[int]], name: str | None = None):
        m = np.asarray(rows, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("Coxeter matrix must be square")
        n = m.shape[0]
        if n == 0:
            raise ValueError("Coxeter matrix must have positive rank")
        for i in range(n):
            if m[i, i] != 1:
                raise ValueError("diagonal entries must be 1")
            for j in range(i + 1, n):
                if m[i, j] != m[j, i]:
                    raise ValueError("Coxeter matrix must be symmetric")
                if m[i, j] < 2:
                    raise ValueError("off-diagonal entries must be >= 2")
        gram = -np.cos(np.pi / m.astype(np.float64))
        eigs = np.linalg.eigvalsh(gram)
        if eigs[0] <= 1e-8:
            raise ValueError(
                "Coxeter matrix does not define a finite group "
                "(bilinear form is not positive definite)"
            )
        m.setflags(write=False)
        self.m = m
        self.rank = n
        self.name = name

    def __repr__(self) -> str:
        return f"CoxeterMatrix({self.name or self.m.tolist()})"

    @staticmethod
    def named(name: str) -> "CoxeterMatrix":
        """Build a matrix from a type name: A3, B4, D5, E6..E8, F4, H3, H4, I2:m."""
        name = name.strip()
        im = re.fullmatch(r"[Ii]2[:(]?(\d+)\)?", name)
        if im:
            order = int(im.group(1))
            if order < 2:
                raise ValueError("I2(m) needs m >= 2")
            return CoxeterMatrix([[1, order], [order, 1]], name=f"I2:{order}")
        tm = re.fullmatch(r"([ABDEFHabdefh])(\d+)", name)
        if not tm:
            raise ValueError(f"unrecognized group name {name!r}")
        family, rank = tm.group(1).upper(), int(tm.group(2))
        edges: dict[tuple[int, int], int] = {}
        if family == "A":
            if rank < 1:
                raise ValueError("A_n needs n >= 1")
            edges = {(i, i + 1): 3 for i in range(1, rank)}
        elif family == "B":
            if rank < 2:
                raise ValueError("B_n needs n >= 2")
            edges = {(i, i + 1): 3 for i in range(1, rank - 1)}
            edges[(rank - 1, rank)] = 4
        elif family == "D":
            if rank < 4:
                raise ValueError("D_n needs n >= 4")
            edges = {(i, i + 1): 3 for i in range(1, rank - 1)}
            edges[(rank - 2, rank)] = 3
        elif family == "E":
            if rank not in (6, 7, 8):
                raise ValueError("E_n needs n in {6, 7, 8}")
            chain = [1, 3, 4, 5, 6, 7, 8][: rank - 1]
            edges = {(a, b): 3 for a, b in zip(chain, chain[1:])}
            edges[(2, 4)] = 3
        elif family == "F":
            if rank != 4:
                raise ValueError("only F4 exists")
            edges = {(1, 2): 3, (2, 3): 4, (3, 4): 3}
        elif family == "H":
            if rank not in (3, 4):
                raise ValueError("H_n needs n in {3, 4}")
            edges = {(1, 2): 5}
            edges.update({(i, i + 1): 3 for i in range(2, rank)})
        rows = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
        for (a, b), order in edges.items():
            rows[a - 1][b - 1] = order
            rows[b - 1][a - 1] = order
        return CoxeterMatrix(rows, name=family + str(rank))

    @staticmethod
    def from_spec(spec) -> "CoxeterMatrix":
        """Accept a name, a JSON string, or a dict with 'type'/'matrix'."""
        if isinstance(spec, CoxeterMatrix):
            return spec
        if isinstance(spec, str):
            text = spec.strip()
            if text.startswith("{"):
                return CoxeterMatrix.from_spec(json.loads(text))
            return CoxeterMatrix.named(text)
        if isinstance(spec, dict):
            if "matrix" in spec:
                return CoxeterMatrix(spec["matrix"])
            if "type" in spec:
                family = str(spec["type"])
                if family.upper().startswith("I2"):
                    return CoxeterMatrix.named(f"I2:{spec['m']}")
                rank = spec.get("rank")
                if rank is None:
                    digits = re.search(r"\d+", family)
                    if not digits:
                        raise ValueError("named type needs a rank")
                    return CoxeterMatrix.named(family)
                return CoxeterMatrix.named(f"{family}{rank}")
        raise ValueError(f"cannot interpret group spec {spec!r}")


class GroupElement:
    """Group element as its matrix in the simple-root basis.

    Equality and hashing go through a key obtained by rounding every
    entry to the system's grid, so elements coming from different words
    compare correctly.
    """

    __slots__ = ("mat", "_key")

    def __init__(self, mat: np.ndarray, key: bytes):
        self.mat = mat
        self._key = key

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"GroupElement({self.mat.shape[0]}x{self.mat.shape[0]}, {hash(self) & 0xFFFFFF:#08x})"


class CoxeterSystem:
    """A finite Coxeter system (W, S) with cached reflection matrices."""

    def __init__(self, matrix, tol: float = 1e-6, size_guard: int = 10**7):
        cm = CoxeterMatrix.from_spec(matrix) if not isinstance(matrix, CoxeterMatrix) else matrix
        self.coxeter_matrix = cm
        self.m = cm.m
        self.rank = cm.rank
        self.name = cm.name
        self.tol = float(tol)
        self.size_guard = int(size_guard)
        n = self.rank
        gram = -np.cos(np.pi / self.m.astype(np.float64))
        refl = np.empty((n, n, n), dtype=np.float64)
        for s in range(n):
            refl[s] = np.eye(n)
            refl[s][s, :] -= 2.0 * gram[s, :]
        refl.setflags(write=False)
        self.refl = refl
        self._id_key = self._key_of(np.eye(n))
        self.identity = GroupElement(np.eye(n), self._id_key)
        self._len_cache: dict[bytes, int] = {self._id_key: 0}

    # -- element plumbing ------------------------------------------------

    def _key_of(self, mat: np.ndarray) -> bytes:
        return np.rint(mat / self.tol).astype(np.int64).tobytes()

    def _element(self, mat: np.ndarray) -> GroupElement:
        return GroupElement(mat, self._key_of(mat))

    def generator(self, s: int) -> GroupElement:
        self._check_letter(s)
        return self._element(self.refl[s - 1].copy())

    def _check_letter(self, s: int) -> None:
        if not (isinstance(s, (int, np.integer)) and 1 <= s <= self.rank):
            raise ValueError(f"generator index {s!r} out of range 1..{self.rank}")

    def _word_array(self, word: Iterable[int]) -> np.ndarray:
        w = _as_word(word)
        for s in w:
            self._check_letter(s)
        if len(w) > MAX_WORD_LETTERS:
            raise ValueError(f"words are limited to {MAX_WORD_LETTERS} letters")
        return np.asarray([s - 1 for s in w], dtype=np.int64)

    def element_of(self, word: Iterable[int]) -> GroupElement:
        mat = np.eye(self.rank)
        for s in _as_word(word):
            self._check_letter(s)
            mat = mat @ self.refl[s - 1]
        return self._element(mat)

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self._element(g.mat @ h.mat)

    def inverse(self, g: GroupElement) -> GroupElement:
        return self._element(np.linalg.inv(g.mat))

    def is_identity(self, g: GroupElement) -> bool:
        return g._key == self._id_key

    # -- descents and length ---------------------------------------------

    def _col_negative(self, mat: np.ndarray, s: int) -> bool:
        # image of alpha_s is column s-1; roots have all coords of one sign
        return bool(np.all(mat[:, s - 1] <= self.tol))

    def right_descents(self, g: GroupElement) -> frozenset[int]:
        return frozenset(s for s in range(1, self.rank + 1) if self._col_negative(g.mat, s))

    def left_descents(self, g: GroupElement) -> frozenset[int]:
        return self.right_descents(self.inverse(g))

    def length(self, g: GroupElement) -> int:
        cached = self._len_cache.get(g._key)
        if cached is not None:
            return cached
        mat = g.mat
        steps = 0
        while True:
            key = self._key_of(mat)
            if key == self._id_key:
                break
            hit = self._len_cache.get(key)
            if hit is not None:
                steps += hit
                break
            for s in range(1, self.rank + 1):
                if self._col_negative(mat, s):
                    mat = mat @ self.refl[s - 1]
                    steps += 1
                    break
            else:
                raise ValueError("matrix is not a group element: no descent found")
            if steps > self.size_guard:
                raise ValueError("length computation exceeded size guard")
        self._len_cache[g._key] = steps
        return steps

    def is_reduced(self, word: Iterable[int]) -> bool:
        """True iff every prefix extension of the word is a length ascent."""
        mat = np.eye(self.rank)
        for s in _as_word(word):
            self._check_letter(s)
            if self._col_negative(mat, s):
                return False
            mat = mat @ self.refl[s - 1]
        return True

    # -- word operations ---------------------------------------------------

    def demazure_product(self, word: Iterable[int]) -> GroupElement:
        """Greedy fold keeping only the length-increasing letters."""
        mat = np.eye(self.rank)
        for s in _as_word(word):
            self._check_letter(s)
            if not self._col_negative(mat, s):
                mat = mat @ self.refl[s - 1]
        return self._element(mat)

    def word_of(self, g: GroupElement) -> Word:
        """A reduced word for g, deterministic (smallest descent stripped last)."""
        mat = g.mat
        out: list[int] = []
        while self._key_of(mat) != self._id_key:
            for s in range(1, self.rank + 1):
                if self._col_negative(mat, s):
                    mat = mat @ self.refl[s - 1]
                    out.append(s)
                    break
            else:
                raise ValueError("matrix is not a group element: no descent found")
            if len(out) > self.size_guard:
                raise ValueError("word extraction exceeded size guard")
        return tuple(reversed(out))

    def nil_reduce(self, word: Iterable[int]) -> Word:
        """A reduced word for element_of(word)."""
        return self.word_of(self.element_of(word))

    def braid_move_positions(self, word: Iterable[int]) -> tuple[int, ...]:
        """1-based positions where a braid move window starts."""
        w = _as_word(word)
        out = []
        for pos in range(1, len(w)):
            if self._braid_window(w, pos) is not None:
                out.append(pos)
        return tuple(out)

    def _braid_window(self, w: Word, pos: int):
        """Window (i, j, order) if a braid move applies at 1-based pos."""
        if not (1 <= pos <= len(w) - 1):
            return None
        i, j = w[pos - 1], w[pos]
        if i == j:
            return None
        order = int(self.m[i - 1, j - 1])
        if pos + order - 1 > len(w):
            return None
        for t in range(order):
            if w[pos - 1 + t] != (i if t % 2 == 0 else j):
                return None
        return i, j, order

    def apply_braid_move(self, word: Iterable[int], pos: int) -> Word:
        """Replace the alternating window of length m(i,j) starting at pos.

        pos is 1-based; the window letters are read off the word itself.
        """
        w = _as_word(word)
        for s in w:
            self._check_letter(s)
        window = self._braid_window(w, pos)
        if window is None:
            raise ValueError(f"no braid move applies at position {pos} of {w}")
        i, j, order = window
        flipped = tuple(j if t % 2 == 0 else i for t in range(order))
        return w[: pos - 1] + flipped + w[pos - 1 + order :]

    def reduced_words(self, g: GroupElement, cap: int = 100_000) -> tuple[Word, ...]:
        """All reduced words of g, via braid-move closure from one of them.

        Raises if the count exceeds cap.
        """
        seed = self.word_of(g)
        seen = {seed}
        queue = deque([seed])
        while queue:
            w = queue.popleft()
            for pos in self.braid_move_positions(w):
                nxt = self.apply_braid_move(w, pos)
                if nxt not in seen:
                    if len(seen) >= cap:
                        raise ValueError(f"more than {cap} reduced words")
                    seen.add(nxt)
                    queue.append(nxt)
        return tuple(sorted(seen))

    def longest_element(self) -> GroupElement:
        mat = np.eye(self.rank)
        steps = 0
        while True:
            for s in range(1, self.rank + 1):
                if not self._col_negative(mat, s):
                    mat = mat @ self.refl[s - 1]
                    steps += 1
                    break
            else:
                return self._element(mat)
            if steps > self.size_guard:
                raise ValueError("longest element exceeded size guard")

    def c_sorting_word(self, c: Iterable[int], g: GroupElement) -> Word:
        """Lexicographically first reduced word of g as a subword of c^infinity.

        c must be a reduced word using every generator exactly once.
        """
        cw = _as_word(c)
        if sorted(cw) != list(range(1, self.rank + 1)):
            raise ValueError("c must contain each generator exactly once")
        u = np.eye(self.rank)
        vinv = np.linalg.inv(g.mat)  # (u^{-1} g)^{-1}, updated as g^{-1} u
        remaining = self.length(g)
        out: list[int] = []
        while remaining > 0:
            took_any = False
            for s in cw:
                # descend toward g while keeping the prefix reduced
                if self._col_negative(vinv, s) and not self._col_negative(u, s):
                    u = u @ self.refl[s - 1]
                    vinv = vinv @ self.refl[s - 1]
                    out.append(s)
                    remaining -= 1
                    took_any = True
                    if remaining == 0:
                        break
            if not took_any:
                raise ValueError("sorting word stalled; element unreachable")
        return tuple(out)

    # -- reduced subwords ---------------------------------------------------

    def reduced_subword_masks(self, word: Iterable[int], pi: GroupElement) -> np.ndarray:
        """Sorted int64 bitmasks of positions carrying a reduced word of pi."""
        w = self._word_array(word)
        n = self.rank
        pi_inv = np.ascontiguousarray(np.linalg.inv(pi.mat))
        pi_len = self.length(pi)
        cap = 1024
        while True:
            out = np.empty(cap, dtype=np.int64)
            count = int(
                _K.reduced_subword_masks(self.refl, w, pi_inv, pi_len, self.tol, out, 2**62)
            )
            if count <= cap:
                return np.sort(out[:count])
            cap = count

    def contains_reduced(self, word: Iterable[int], pi: GroupElement) -> bool:
        """True iff some subword of word is a reduced word of pi."""
        w = self._word_array(word)
        pi_inv = np.ascontiguousarray(np.linalg.inv(pi.mat))
        pi_len = self.length(pi)
        out = np.empty(1, dtype=np.int64)
        return int(_K.reduced_subword_masks(self.refl, w, pi_inv, pi_len, self.tol, out, 1)) > 0
