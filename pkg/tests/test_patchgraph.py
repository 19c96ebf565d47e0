from pathlib import Path

import numpy as np
import pytest

from packages.core.errors import DegenerateParameterError, DocumentError, InvalidGraphError
from packages.core.model import (
    PatchGraph,
    build_chessboard,
    build_cycle_pipeline,
    build_motif,
    build_periodic_array,
    build_star,
    build_two_patch,
    is_primitive,
    lump,
    mean_matrix,
    reference_source,
    require_valid,
    validate,
)
from packages.core.model.documents import graph_document, graph_from_document, load_model, parse_json

MODELS = Path(__file__).resolve().parent.parent / "config" / "models"


def test_two_patch_is_valid():
    g = build_two_patch(M=2, m=0.5, p=0.5, q=0.5)
    assert validate(g).valid
    assert g.habitat_of == (1, 2)
    assert reference_source(g) == 0


def test_mean_matrix_two_patch():
    a = mean_matrix(build_two_patch(M=2, m=0.5, p=0.5, q=0.5)).array
    assert np.allclose(a, [[1.0, 1.0], [0.25, 0.25]])


def test_validate_reports_every_violation():
    g = PatchGraph.from_arrays([1, 2], [[0.5, 0.6], [0.5, 0.5]], {1: 2.0, 2: -0.1})
    codes = validate(g).codes()
    assert "row_stochastic" in codes
    assert "mean_negative" in codes
    with pytest.raises(InvalidGraphError) as err:
        require_valid(g)
    assert err.value.report is not None


def test_periodic_dispersal_is_not_primitive():
    g = PatchGraph.from_arrays([1, 2], [[0.0, 1.0], [1.0, 0.0]], {1: 2.0, 2: 0.5})
    assert validate(g).codes() == ["primitive"]
    assert not is_primitive(g.D)
    assert is_primitive(np.array([[0.5, 0.5], [1.0, 0.0]]))


def test_cycle_pipeline_orientation_and_rows():
    n, p, L, R = 4, 0.3, 0.25, 0.75
    g = build_cycle_pipeline(n=n, p=p, L=L, R=R, s=0.2, l=0.5, r=0.3, M=2, m=0.5)
    d = g.D
    assert g.num_patches == n + 1
    assert np.allclose(d.sum(axis=1), 1.0)
    assert d[0, 1] == pytest.approx(p * R)
    assert d[0, n] == pytest.approx(p * L)
    assert d[1, 0] == pytest.approx(0.5)
    assert d[n, 0] == pytest.approx(0.3)
    assert validate(g).valid


def test_single_sink_pipeline_lumps_both_ends():
    g = build_cycle_pipeline(n=1, p=0.4, L=0.5, R=0.5, s=0.2, l=0.4, r=0.4, M=2, m=0.5)
    assert np.allclose(g.D, [[0.6, 0.4], [0.8, 0.2]])


def test_motifs():
    board = build_chessboard(M=1.6, m=0.6)
    assert np.allclose(board.D, [[0.2, 0.8], [0.8, 0.2]])
    star = build_star(d=2, n=3, p=0.4, s=0.2, l=0.4, r=0.4, M=2.5, m=0.7)
    assert star.num_patches == 7
    assert np.allclose(star.D.sum(axis=1), 1.0)
    for end in (1, 3, 4, 6):
        assert star.D[0, end] == pytest.approx(0.1)
    row = build_periodic_array(["source", "sink", "sink"], 0.2, 0.4, 0.4, {1: 2.0, 2: 0.5})
    assert row.habitat_of == (1, 2, 2)
    assert validate(row).valid
    assert build_motif("chessboard", M=1.6, m=0.6, sigma=0.2) == board


def test_lump_sums_weights_per_class():
    d = lump(2, {0: [(0, 0.25), (1, 0.25), (1, 0.5)], 1: [(0, 1.0)]})
    assert np.allclose(d, [[0.25, 0.75], [1.0, 0.0]])


def test_builders_reject_degenerate_parameters():
    with pytest.raises(DegenerateParameterError):
        build_two_patch(M=2, m=0.5, p=0.0, q=0.5)
    with pytest.raises(DegenerateParameterError):
        build_cycle_pipeline(n=3, p=0.3, L=0.5, R=0.6, s=0.2, l=0.4, r=0.4, M=2, m=0.5)
    with pytest.raises(DegenerateParameterError):
        build_motif("hexagonal")


def test_documents():
    g = graph_from_document({"builder": {"family": "two_patch", "M": 2, "m": 0.5, "p": 0.5, "q": 0.5}})
    assert g == build_two_patch(M=2, m=0.5, p=0.5, q=0.5)
    assert graph_from_document(graph_document(g)) == g
    assert load_model(MODELS / "two_patch.json") == g
    assert validate(load_model(MODELS / "two_patch_explicit.json")).valid


def test_unknown_document_key_is_rejected():
    with pytest.raises(DocumentError):
        graph_from_document({"builder": {"family": "two_patch", "M": 2, "m": 0.5, "p": 0.5, "q": 0.5, "x": 1}})
    with pytest.raises(DocumentError):
        graph_from_document({"patches": [1], "dispersal": [[1.0]], "mean_offspring": {"1": 2}, "note": ""})


def test_malformed_json_carries_position():
    with pytest.raises(DocumentError) as err:
        parse_json(b'{\n  "patches": [1, 2],,\n}')
    assert err.value.line == 2
    assert err.value.column is not None
