import pytest

import forge

PERFECT = {
    "states": [0, 1],
    "start": 0,
    "edges": [[0, 0], [0, 1], [1, 0], [1, 1]],
    "k0_states": [0],
    "k0_edges": [[0, 0]],
}


def test_figure_eight():
    g = forge.figure_eight()
    assert forge.validate(g) == []
    assert forge.betti(g) == 2
    assert len(g["vertices"]) == 3 and len(g["edges"]) == 4


def test_broken_graph_reports_problems():
    g = forge.figure_eight()
    g["edges"].pop()
    assert forge.validate(g)


def test_pieces_and_hash():
    hashes = {forge.graph_hash(forge.basic_piece(p)) for p in ("h2", "s", "H4piece")}
    assert len(hashes) == 3
    with pytest.raises(forge.ForgeError):
        forge.basic_piece("nope")


def test_dot():
    assert forge.emit_dot(forge.figure_eight(), "f8").startswith("graph f8 {")


def test_condition_star():
    assert forge.condition_star(PERFECT)
    assert forge.k1_infinite(PERFECT)


def test_pipeline_is_deterministic(tmp_path):
    a = forge.run_pipeline(PERFECT, depth=3, tower_floors=2, out=tmp_path / "a")
    b = forge.run_pipeline(PERFECT, depth=3, tower_floors=2, out=tmp_path / "b")
    assert a == b
    assert a["audit"] == []
    assert forge.verify_dir(tmp_path / "a") == []
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_finite_ends_pipeline():
    r = forge.run_pipeline(finite_ends=3, depth=3, tower_floors=1)
    assert r["finite_ends"] == 3
    assert r["model"]["ends"]["branches"] == 3


def test_vertex_cap():
    with pytest.raises(forge.ResourceError):
        forge.run_pipeline(PERFECT, depth=3, tower_floors=3, max_vertices=100)
