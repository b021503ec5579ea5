import random

import pytest

from conftest import brute_facets, brute_is_face, random_descriptor, system
from coxsub.simplicial import LabeledComplex
from coxsub.subword import (SubwordDescriptor, build, complex_json, is_face,
                            is_spherical, link_oracle_check)


def test_descriptor_validation():
    A2 = system("A2")
    w0 = A2.longest_element()
    with pytest.raises(ValueError):
        SubwordDescriptor(A2, (1, 3), w0)  # letter out of range
    with pytest.raises(ValueError):
        SubwordDescriptor(A2, (1, 2), w0, labels=("a",))  # wrong label count
    with pytest.raises(ValueError):
        SubwordDescriptor(A2, (1, 2), w0, labels=("a", "a"))
    d = SubwordDescriptor(A2, (1, 2, 1), w0, labels=("p", "q", "r"))
    assert d.position_of("q") == 1  # 0-based slot in the word
    with pytest.raises(KeyError):
        d.position_of("z")
    # default labels are the 1-based positions
    assert SubwordDescriptor(A2, (1, 2), w0).labels == (1, 2)


def test_pentagon():
    A2 = system("A2")
    w0 = A2.longest_element()
    d = SubwordDescriptor(A2, (1, 2, 1, 2, 1), w0)
    x = build(d)
    assert x.f_vector() == (5, 5)
    assert x.h_vector() == (1, 3, 1)
    assert x.gamma().coeffs == (1, 1)
    assert x.is_flag()
    assert is_spherical(d)
    assert set(x.facet_label_sets()) == {
        frozenset(f) for f in ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5))}


def test_duplicated_word_square():
    # doubled letters make antipodal pairs: the complex is the square boundary
    A2 = system("A2")
    w0 = A2.longest_element()
    d = SubwordDescriptor(A2, (1, 1, 2, 2, 1), w0)
    x = build(d)
    assert x.f_vector() == (4, 4)
    assert set(x.vertices) == {1, 2, 3, 4}  # position 5 is in every facet complement
    assert not x.has_face((1, 2)) and not x.has_face((3, 4))
    assert x.has_face((1, 3)) and x.has_face((2, 4))
    assert is_spherical(d)


def test_single_empty_face():
    A2 = system("A2")
    w0 = A2.longest_element()
    d = SubwordDescriptor(A2, (1, 2, 1), w0)
    x = build(d)
    assert x == LabeledComplex.empty_face_only()
    assert x.h_vector() == (1,) and x.gamma().coeffs == (1,)


def test_void():
    A2 = system("A2")
    w0 = A2.longest_element()
    d = SubwordDescriptor(A2, (1, 2), w0)  # too short to contain pi
    x = build(d)
    assert x.is_void
    assert not is_face(d, ())
    assert not is_spherical(d)


def test_spherical_iff_demazure():
    rng = random.Random(6)
    for _ in range(60):
        d = random_descriptor(rng)
        assert is_spherical(d) == (d.system.demazure_product(d.word) == d.pi)
        x = build(d)
        if is_spherical(d) and not x.is_void:
            h = x.h_vector()
            assert h == h[::-1]  # sphere: palindromic by Dehn-Sommerville


def test_is_face_matches_brute():
    rng = random.Random(7)
    for _ in range(40):
        d = random_descriptor(rng, max_len=8)
        x = build(d)
        for _ in range(6):
            k = rng.randrange(0, len(d.word) + 1)
            probe = tuple(sorted(rng.sample(range(1, len(d.word) + 1), k)))
            want = brute_is_face(d.system, d.word, d.pi, probe)
            assert is_face(d, probe) == want
            if not x.is_void:
                assert x.has_face(probe) == want


def test_facets_match_brute():
    rng = random.Random(8)
    for _ in range(40):
        d = random_descriptor(rng, max_len=8)
        x = build(d)
        want = brute_facets(d.system, d.word, d.pi)
        if x.is_void:
            assert want == set()
        else:
            got = set(x.facet_label_sets())
            # brute facets include non-vertex positions explicitly
            assert got == want


def test_custom_labels_flow_through():
    A2 = system("A2")
    w0 = A2.longest_element()
    d = SubwordDescriptor(A2, (1, 2, 1, 2, 1), w0,
                          labels=("a", "b", "c", "d", "e"))
    x = build(d)
    assert set(x.vertices) == {"a", "b", "c", "d", "e"}
    assert x.has_face(("a", "b"))
    assert is_face(d, ("a", "e"))


def test_link_oracle():
    rng = random.Random(9)
    checked = 0
    while checked < 40:
        d = random_descriptor(rng, max_len=8)
        x = build(d)
        if x.is_void or not x.vertices:
            continue
        fs = sorted(x.face_label_sets(), key=lambda f: (len(f), sorted(map(str, f))))
        face = tuple(fs[rng.randrange(len(fs))])
        assert link_oracle_check(d, face)
        checked += 1


def test_complex_json():
    A2 = system("A2")
    w0 = A2.longest_element()
    out = complex_json(SubwordDescriptor(A2, (1, 2, 1, 2, 1), w0))
    assert out["word"] == [1, 2, 1, 2, 1]
    assert out["f_vector"] == [5, 5]
    assert out["h_vector"] == [1, 3, 1]
    assert out["gamma"] == [1, 1]
    assert out["spherical"] and out["flag"]
    assert sorted(out["vertices"]) == ["1", "2", "3", "4", "5"]
    assert all(len(f) == 2 for f in out["facets"])
    void = complex_json(SubwordDescriptor(A2, (1, 2), w0))
    assert void["facets"] == [] and void["h_vector"] is None
    assert void["gamma"] is None
