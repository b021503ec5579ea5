"""Subword complexes Delta(Q; pi) of a Coxeter system.

The faces of Delta(Q; pi) are the position sets T such that the complement
of T in Q still contains a reduced expression of pi; the facets are exactly
the complements of reduced expressions.  Positions are the vertex
candidates: two positions are distinct vertices even when they carry the
same letter.  A position that lies in no facet is not a vertex of the
complex and is dropped from its vertex set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import MAX_WORD_LETTERS, CoxeterSystem, GroupElement, Word
from .simplicial import LabeledComplex


@dataclass(frozen=True)
class SubwordDescriptor:
    """A word in the generators together with a target group element.

    ``labels`` names the positions of ``word``; the default is 1-based
    position numbers.  Labels must be pairwise distinct and hashable.
    """

    system: CoxeterSystem
    word: Word
    pi: GroupElement
    labels: tuple = ()

    def __post_init__(self):
        word = tuple(int(a) for a in self.word)
        object.__setattr__(self, "word", word)
        n = self.system.rank
        for a in word:
            if not 1 <= a <= n:
                raise ValueError(f"letter {a} out of range for rank {n}")
        if len(word) > MAX_WORD_LETTERS:
            raise ValueError(f"words are limited to {MAX_WORD_LETTERS} letters")
        labels = tuple(self.labels) if self.labels else tuple(range(1, len(word) + 1))
        if len(labels) != len(word):
            raise ValueError("need exactly one label per position")
        if len(set(labels)) != len(labels):
            raise ValueError("position labels must be pairwise distinct")
        object.__setattr__(self, "labels", labels)

    def position_of(self, label) -> int:
        """0-based position carrying the given label."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown position label {label!r}") from None


def build(d: SubwordDescriptor) -> LabeledComplex:
    """The subword complex of ``d``, VOID when no reduced expression fits."""
    masks = d.system.reduced_subword_masks(d.word, d.pi)
    if len(masks) == 0:
        return LabeledComplex.void()
    full = (1 << len(d.word)) - 1
    facet_masks = sorted({full ^ int(mk) for mk in masks})
    facets = [tuple(d.labels[p] for p in range(len(d.word)) if fm >> p & 1)
              for fm in facet_masks]
    used = 0
    for fm in facet_masks:
        used |= fm
    order = tuple(d.labels[p] for p in range(len(d.word)) if used >> p & 1)
    return LabeledComplex.from_facets(facets, vertex_order=order)


def is_face(d: SubwordDescriptor, face) -> bool:
    """Whether the label set ``face`` is a face of the subword complex.

    Works directly from the definition, so it does not require building
    the whole complex; unknown labels raise.
    """
    drop = {d.position_of(lab) for lab in face}
    rest = tuple(d.word[p] for p in range(len(d.word)) if p not in drop)
    return d.system.contains_reduced(rest, d.pi)


def is_spherical(d: SubwordDescriptor) -> bool:
    """Demazure criterion: the complex is a sphere iff dem(Q) = pi."""
    return d.system.demazure_product(d.word) == d.pi


def link_oracle_check(d: SubwordDescriptor, face) -> bool:
    """Compare Lk(face) against the complex of the word with ``face`` deleted.

    The two complexes share their labels, so the comparison is literal
    face-set equality.  Raises when ``face`` is not a face.
    """
    x = build(d)
    face = tuple(face)
    drop = {d.position_of(lab) for lab in face}
    if not x.has_face(face):
        raise ValueError(f"{face!r} is not a face")
    keep = [p for p in range(len(d.word)) if p not in drop]
    shortened = SubwordDescriptor(
        d.system,
        tuple(d.word[p] for p in keep),
        d.pi,
        labels=tuple(d.labels[p] for p in keep),
    )
    return x.link(face) == build(shortened)


def complex_json(d: SubwordDescriptor) -> dict:
    """JSON-ready summary; facets index into the ``vertices`` array."""
    x = build(d)
    spherical = is_spherical(d)
    index = {v: k for k, v in enumerate(x.vertices)}
    facets = sorted(sorted(index[v] for v in fs) for fs in x.facet_label_sets())
    out = {
        "word": list(d.word),
        "vertices": [str(v) for v in x.vertices],
        "facets": facets,
        "f_vector": list(x.f_vector()),
        "spherical": spherical,
        "flag": x.is_flag(),
        "h_vector": None,
        "gamma": None,
    }
    if not x.is_void:
        out["h_vector"] = list(x.h_vector())
        if spherical:
            out["gamma"] = list(x.gamma().coeffs)
    return out
