import json
from fractions import Fraction

import pytest

from tropcay.formats import (
    cells_to_text,
    config_digest,
    config_from_dict,
    config_to_dict,
    marked_cell_text,
    parse_triangulation_line,
    polynomial_terms_from_dict,
    polynomial_to_dict,
    text_to_cells,
    triangulation_line,
    weights_from_dict,
    weights_to_dict,
)
from tropcay.geometry import (
    WeightVector,
    cayley_config,
    simplex_lattice_points,
)


def cayley22():
    f = simplex_lattice_points(3, 2)
    return cayley_config(f, f)


def test_config_roundtrip_preserves_everything():
    cfg = cayley22()
    back = config_from_dict(config_to_dict(cfg))
    assert back == cfg
    assert config_digest(back) == config_digest(cfg)


def test_config_digest_changes_with_contents():
    a = simplex_lattice_points(2, 2)
    b = simplex_lattice_points(2, 3)
    assert config_digest(a) != config_digest(b)


def test_weights_roundtrip_with_puiseux_entries():
    w = WeightVector.of(["1/2", 3, "7/3", 0])
    doc = weights_to_dict(w)
    assert doc["heights"] == ["1/2", "3", "7/3", "0"]
    assert weights_from_dict(doc) == w


def test_polynomial_roundtrip():
    terms = {(0, 0, 0): Fraction(3, 2), (1, 0, 0): Fraction(0), (0, 1, 0): Fraction(2), (0, 0, 1): Fraction(1)}
    doc = polynomial_to_dict(1, terms)
    degree, back = polynomial_terms_from_dict(doc)
    assert degree == 1 and back == terms


def test_cell_text_roundtrip():
    cfg = cayley22()
    cells = [(0, 2, 4, 10, 12), (1, 3, 5, 11, 13)]
    text = cells_to_text(cfg, cells)
    assert text == "ACEac,BDFbd"
    assert text_to_cells(cfg, text) == tuple(sorted(tuple(sorted(c)) for c in cells))


def test_triangulation_line_roundtrip():
    cfg = cayley22()
    cells = ((0, 1, 2, 10, 11), (3, 4, 5, 12, 13))
    line = triangulation_line(cfg, cells)
    doc = json.loads(line)
    assert doc["format"] == "tropcay/triangulation/1"
    assert parse_triangulation_line(cfg, line) == cells
    # text-only lines parse too
    text_only = json.dumps({"text": doc["text"]})
    assert parse_triangulation_line(cfg, text_only) == cells


def test_marked_cell_text_tags_toblerones():
    cfg = cayley22()
    marked = marked_cell_text(cfg, [(0, 1, 2, 10, 11), (0, 1, 10, 11, 12), (0, 1, 2, 3, 10)])
    # cells are emitted in sorted order: 4+1 untagged, 3+2 blue, 2+3 red
    assert marked == "ABCDa,ABCab(b),ABabc(r)"


def test_rejects_wrong_format_field():
    with pytest.raises(ValueError):
        config_from_dict({"format": "something/else", "ambient_dim": 1, "points": [[0]], "labels": ["A"]})
    with pytest.raises(ValueError):
        weights_from_dict({"format": "nope", "heights": []})


def test_extended_labels_parse_back():
    from tropcay.geometry import PointConfiguration, block_labels

    labels = block_labels(28)
    pts = tuple((i,) for i in range(28))
    cfg = PointConfiguration(1, pts, labels)
    text = cells_to_text(cfg, [(26, 27)])
    assert text == "A1B1"
    assert text_to_cells(cfg, text) == ((26, 27),)
