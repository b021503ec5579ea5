"""Labeled simplicial complexes with bitset faces.

A complex carries an ordered tuple of vertex labels (any hashable) and
its facets as int64 bitmasks over that order.  Two degenerate complexes
are distinguished on purpose:

  * the void complex has no faces at all: no facets, no empty face;
  * the complex {()} has the single facet (), i.e. only the empty face.

The void complex arises when a word contains no reduced expression of
the target element, the second when the word itself is one.  Counting
conventions: a complex with facets of size n has dimension n - 1,
f-vector (f_0, .., f_{n-1}), h-vector (h_0, .., h_n) defined through
sum_i f_{i-1} (s-1)^{n-i} = sum_k h_k s^{n-k}, homogenized as
H(a, t) = sum_k h_k a^k t^{n-k}.  For palindromic h this peels into
H = sum_k gamma_k (at)^k (a+t)^{n-2k}, the gamma vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .backend import active as _K

Label = Hashable


def _label_key(v):
    if isinstance(v, (int, np.integer)):
        return (0, int(v), "")
    return (1, 0, str(v))


def _mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class HPoly:
    """Homogeneous two-variable h-polynomial, coeffs h_0..h_n."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError("h-polynomial needs n+1 coefficients")

    def monomials(self) -> dict[tuple[int, int], int]:
        """Nonzero coefficients keyed by (alpha exponent, t exponent)."""
        return {(k, self.n - k): c for k, c in enumerate(self.coeffs) if c != 0}

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]


@dataclass(frozen=True)
class GammaPoly:
    """Gamma vector gamma_0..gamma_{floor(n/2)}; () is the zero polynomial."""

    coeffs: tuple[int, ...]

    def __bool__(self) -> bool:
        return any(self.coeffs)


class LabeledComplex:
    """Immutable simplicial complex over labeled vertices."""

    __slots__ = ("vertices", "facets", "_index", "_faces", "_face_labels")

    def __init__(self, vertices: Sequence[Label], facet_masks: Iterable[int]):
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("vertex labels must be distinct")
        if len(vertices) > 62:
            raise ValueError("complexes are limited to 62 vertices")
        masks = sorted(set(int(f) for f in facet_masks))
        full = (1 << len(vertices)) - 1
        for f in masks:
            if f & ~full:
                raise ValueError("facet mask uses unknown vertices")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "facets", tuple(masks))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(vertices)})
        object.__setattr__(self, "_faces", None)
        object.__setattr__(self, "_face_labels", None)

    def __setattr__(self, *a):  # immutability by convention
        raise AttributeError("LabeledComplex is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def from_facets(facets: Iterable[Iterable[Label]],
                    vertex_order: Sequence[Label] | None = None) -> "LabeledComplex":
        """Build from facet label sets; prunes non-maximal entries.

        Vertices not on any facet are dropped.  vertex_order fixes the
        order of the kept labels; by default they are sorted.
        """
        fsets = [frozenset(f) for f in facets]
        maximal = [f for f in fsets if not any(f < g for g in fsets)]
        used: set[Label] = set().union(*maximal) if maximal else set()
        if vertex_order is None:
            vertices = tuple(sorted(used, key=_label_key))
        else:
            vertices = tuple(v for v in vertex_order if v in used)
            if set(vertices) != used:
                raise ValueError("vertex_order is missing labels used by facets")
        index = {v: i for i, v in enumerate(vertices)}
        return LabeledComplex(vertices, {_mask_of(index[v] for v in f) for f in maximal})

    @staticmethod
    def from_faces(faces: Iterable[Iterable[Label]],
                   vertex_order: Sequence[Label] | None = None) -> "LabeledComplex":
        """Downward closure of a face family (its maximal members as facets)."""
        return LabeledComplex.from_facets(faces, vertex_order)

    @staticmethod
    def void() -> "LabeledComplex":
        return LabeledComplex((), ())

    @staticmethod
    def empty_face_only() -> "LabeledComplex":
        return LabeledComplex((), (0,))

    # -- basic queries -----------------------------------------------------

    @property
    def is_void(self) -> bool:
        return len(self.facets) == 0

    @property
    def dim(self) -> int | None:
        """Dimension, or None for the void complex."""
        if self.is_void:
            return None
        return max(f.bit_count() for f in self.facets) - 1

    @property
    def is_pure(self) -> bool:
        sizes = {f.bit_count() for f in self.facets}
        return len(sizes) <= 1

    def facet_label_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(self.vertices[i] for i in _bits(f)) for f in self.facets)

    def faces_masks(self) -> np.ndarray:
        """Sorted masks of every face, the empty face included (unless void)."""
        if self._faces is None:
            if self.is_void:
                faces = np.empty(0, dtype=np.int64)
            else:
                total = sum(1 << f.bit_count() for f in self.facets)
                if total > 1 << 22:
                    raise ValueError("face enumeration too large")
                buf = np.empty(total, dtype=np.int64)
                count = int(_K.fill_submasks(np.asarray(self.facets, dtype=np.int64), buf))
                faces = np.unique(buf[:count])
            object.__setattr__(self, "_faces", faces)
        return self._faces

    def face_label_sets(self) -> frozenset[frozenset]:
        if self._face_labels is None:
            verts = self.vertices
            out = frozenset(
                frozenset(verts[i] for i in _bits(int(m))) for m in self.faces_masks()
            )
            object.__setattr__(self, "_face_labels", out)
        return self._face_labels

    def _mask_of_labels(self, labels: Iterable[Label]) -> int:
        try:
            return _mask_of(self._index[v] for v in labels)
        except KeyError as err:
            raise ValueError(f"label {err.args[0]!r} is not a vertex") from None

    def has_face(self, labels: Iterable[Label]) -> bool:
        labels = tuple(labels)
        if not all(v in self._index for v in labels):
            return False
        mask = self._mask_of_labels(labels)
        return any(mask & f == mask for f in self.facets)

    def __eq__(self, other) -> bool:
        """Equality as face sets over labels; vertex order is irrelevant."""
        if not isinstance(other, LabeledComplex):
            return NotImplemented
        if self.is_void or other.is_void:
            return self.is_void and other.is_void
        return self.face_label_sets() == other.face_label_sets()

    def __hash__(self):
        return hash(self.face_label_sets())

    def __repr__(self) -> str:
        if self.is_void:
            return "LabeledComplex(void)"
        return f"LabeledComplex({len(self.vertices)} vertices, {len(self.facets)} facets)"

    # -- derived complexes ---------------------------------------------------

    def link(self, face: Iterable[Label]) -> "LabeledComplex":
        face = tuple(face)
        if not self.has_face(face):
            raise ValueError(f"{face!r} is not a face")
        mask = self._mask_of_labels(face)
        sub = [f & ~mask for f in self.facets if f & mask == mask]
        return LabeledComplex.from_facets(
            [frozenset(self.vertices[i] for i in _bits(f)) for f in sub],
            vertex_order=self.vertices,
        )

    def star(self, face: Iterable[Label]) -> "LabeledComplex":
        face = tuple(face)
        if not self.has_face(face):
            raise ValueError(f"{face!r} is not a face")
        mask = self._mask_of_labels(face)
        keep = [f for f in self.facets if f & mask == mask]
        return LabeledComplex.from_facets(
            [frozenset(self.vertices[i] for i in _bits(f)) for f in keep],
            vertex_order=self.vertices,
        )

    def boundary_star(self, face: Iterable[Label]) -> "LabeledComplex":
        """Faces of the star that do not contain the whole of `face`."""
        face = tuple(face)
        star = self.star(face)
        mask = star._mask_of_labels(face)
        gen = []
        for f in star.facets:
            for i in _bits(mask):
                gen.append(frozenset(star.vertices[b] for b in _bits(f & ~(1 << i))))
        return LabeledComplex.from_facets(gen, vertex_order=star.vertices)

    def relabel(self, mapping: Mapping[Label, Label]) -> "LabeledComplex":
        new_vertices = tuple(mapping.get(v, v) for v in self.vertices)
        return LabeledComplex(new_vertices, self.facets)

    def edge_subdivide(self, edge: Iterable[Label], fresh: Label) -> "LabeledComplex":
        """Subdivide along an edge: facets containing it split at a new vertex."""
        s, t = tuple(edge)
        if not self.has_face((s, t)):
            raise ValueError(f"{{{s!r}, {t!r}}} is not an edge of the complex")
        if fresh in self._index:
            raise ValueError(f"fresh label {fresh!r} is already a vertex")
        sbit = 1 << self._index[s]
        tbit = 1 << self._index[t]
        ebits = sbit | tbit
        rbit = 1 << len(self.vertices)
        out = []
        for f in self.facets:
            if f & ebits == ebits:
                out.append((f & ~sbit) | rbit)
                out.append((f & ~tbit) | rbit)
            else:
                out.append(f)
        return LabeledComplex(self.vertices + (fresh,), out)

    # -- enumerative invariants ---------------------------------------------

    def f_vector(self) -> tuple[int, ...]:
        """(f_0, .., f_{dim}); empty for the void complex and for {()}."""
        faces = self.faces_masks()
        if faces.size == 0:
            return ()
        counts = np.zeros(faces.size, dtype=np.int64)
        _K.popcounts(faces, counts)
        top = int(counts.max())
        if top == 0:
            return ()
        hist = np.bincount(counts, minlength=top + 1)
        return tuple(int(x) for x in hist[1:])

    def h_vector(self) -> tuple[int, ...]:
        if self.is_void:
            raise ValueError("the void complex has no h-vector")
        if not self.is_pure:
            raise ValueError("h-vector requires a pure complex")
        f = (1,) + self.f_vector()  # f[i] = f_{i-1}
        n = self.dim + 1
        return tuple(
            sum((-1) ** (k - i) * comb(n - i, k - i) * f[i] for i in range(k + 1))
            for k in range(n + 1)
        )

    def h_poly(self) -> HPoly:
        h = self.h_vector()
        return HPoly(len(h) - 1, h)

    def gamma(self) -> GammaPoly:
        """Gamma vector of a palindromic h-vector; zero for the void complex."""
        if self.is_void:
            return GammaPoly(())
        h = list(self.h_vector())
        if h != h[::-1]:
            raise ValueError("h-vector is not palindromic; gamma is undefined")
        n = len(h) - 1
        out = []
        for k in range(n // 2 + 1):
            c = h[k]
            out.append(c)
            for i in range(k, n - k + 1):
                h[i] -= c * comb(n - 2 * k, i - k)
        assert not any(h), "palindromic peel left a remainder"
        return GammaPoly(tuple(out))

    def is_flag(self) -> bool:
        """True iff every clique of the 1-skeleton is a face."""
        faces = set(int(m) for m in self.faces_masks())
        adj = [0] * len(self.vertices)
        for m in faces:
            if m.bit_count() == 2:
                a, b = _bits(m)
                adj[a] |= 1 << b
                adj[b] |= 1 << a
        stack = []
        for m in faces:
            if m.bit_count() == 2:
                a, b = _bits(m)
                stack.append((m, adj[a] & adj[b] & ~((1 << (b + 1)) - 1)))
        while stack:
            cmask, cand = stack.pop()
            while cand:
                v = (cand & -cand).bit_length() - 1
                cand &= cand - 1
                nm = cmask | (1 << v)
                if nm not in faces:
                    return False
                stack.append((nm, cand & adj[v]))
        return True


def join(x: LabeledComplex, y: LabeledComplex) -> LabeledComplex:
    """Simplicial join; labels must be disjoint.  Void absorbs the join."""
    if set(x.vertices) & set(y.vertices):
        raise ValueError("join requires disjoint vertex labels")
    if x.is_void or y.is_void:
        return LabeledComplex.void()
    shift = len(x.vertices)
    facets = [fx | (fy << shift) for fx in x.facets for fy in y.facets]
    return LabeledComplex(x.vertices + y.vertices, facets)


def k_subdivide(x: LabeledComplex, edge: Sequence[Label], k: int,
                fresh: Sequence[Label]) -> LabeledComplex:
    """Iterated edge subdivision.

    The edge (s, t) is ordered: the i-th step subdivides {r_{i-1}, t}
    with the new vertex r_i, starting from r_0 = s.  fresh supplies
    r_1..r_k.
    """
    s, t = edge
    if len(fresh) != k:
        raise ValueError("need exactly k fresh labels")
    cur = x
    prev = s
    for r in fresh:
        cur = cur.edge_subdivide((prev, t), r)
        prev = r
    return cur


def family_is_downward_closed(faces: Iterable[frozenset]) -> bool:
    fam = set(frozenset(f) for f in faces)
    for f in fam:
        for v in f:
            if f - {v} not in fam:
                return False
    return True


def is_isomorphic_constrained(
    x: LabeledComplex,
    y: LabeledComplex,
    fixed: Mapping[Label, Label] | None = None,
    free: tuple[Iterable[Label], Iterable[Label]] | None = None,
) -> dict | None:
    """Search for a facet-set-preserving vertex bijection x -> y.

    The bijection must extend `fixed` and map the first `free` label set
    onto the second; vertices in neither pool are matched among
    themselves.  Returns the mapping or None.
    """
    if x.is_void or y.is_void:
        return {} if (x.is_void and y.is_void) else None
    vx, vy = x.vertices, y.vertices
    if len(vx) != len(vy) or len(x.facets) != len(y.facets):
        return None
    if sorted(f.bit_count() for f in x.facets) != sorted(f.bit_count() for f in y.facets):
        return None

    fixed = dict(fixed or {})
    free_x = set(free[0]) if free else set()
    free_y = set(free[1]) if free else set()
    for k, v in fixed.items():
        if k not in x._index or v not in y._index:
            return None
    if len(set(fixed.values())) != len(fixed):
        return None
    rest_x = [v for v in vx if v not in fixed and v not in free_x]
    rest_y = set(vy) - set(fixed.values()) - free_y
    if len(free_x & set(vx)) != len(free_y & set(vy)) or len(rest_x) != len(rest_y):
        return None

    def signature(c: LabeledComplex, v) -> tuple:
        bit = 1 << c._index[v]
        sizes = sorted(f.bit_count() for f in c.facets if f & bit)
        return (len(sizes), tuple(sizes))

    sig_x = {v: signature(x, v) for v in vx}
    sig_y = {v: signature(y, v) for v in vy}

    def pool(v):
        if v in fixed:
            cands = [fixed[v]]
        elif v in free_x:
            cands = sorted(free_y & set(vy), key=_label_key)
        else:
            cands = sorted(rest_y, key=_label_key)
        return [w for w in cands if sig_y[w] == sig_x[v]]

    order = sorted(vx, key=lambda v: (len(pool(v)), _label_key(v)))
    y_facets = set(y.facets)
    assign: dict = {}
    used: set = set()

    def backtrack(idx: int) -> bool:
        if idx == len(order):
            for f in x.facets:
                mapped = _mask_of(y._index[assign[x.vertices[i]]] for i in _bits(f))
                if mapped not in y_facets:
                    return False
            return True
        v = order[idx]
        for w in pool(v):
            if w in used:
                continue
            assign[v] = w
            used.add(w)
            if backtrack(idx + 1):
                return True
            used.discard(w)
            del assign[v]
        return False

    return dict(assign) if backtrack(0) else None
