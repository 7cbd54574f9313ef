import numpy as np
import pytest

from gqlab import io
from gqlab.constructions import heisenberg, symplectic_quadrangle, w3_kantor_family
from gqlab.errors import FormatError
from gqlab.symmetry import automorphism_group, canonical_hash


def test_group_roundtrip(tmp_path):
    H = heisenberg(1, 3)
    p = tmp_path / "h.grp"
    io.write_text(p, io.format_group(H))
    G = io.read_group(p)
    assert (G.mul == H.mul).all() and G.labels == H.labels and G.name == "h"


def test_geometry_roundtrip_keeps_hash(tmp_path, W3):
    p = tmp_path / "w3.geo"
    io.write_text(p, io.format_geometry(W3))
    g = io.read_geometry(p)
    assert g == W3
    assert canonical_hash(g) == canonical_hash(W3)


def test_no_silent_overwrite(tmp_path):
    p = tmp_path / "x.geo"
    io.write_text(p, "a")
    with pytest.raises(FileExistsError):
        io.write_text(p, "b")
    io.write_text(p, "b", force=True)
    assert p.read_text() == "b"


def test_kantor_roundtrip(tmp_path):
    fam = w3_kantor_family(3)
    io.write_text(tmp_path / "h.grp", io.format_group(fam.group))
    io.write_text(tmp_path / "f.kf", io.format_kantor(fam, "h.grp"))
    G, members, gfile = io.read_kantor(tmp_path / "f.kf")
    assert gfile == "h.grp"
    assert [(a.members, b.members) for a, b in members] == [(a.members, b.members) for a, b in fam.members]


def test_aut_roundtrip(W2):
    aut = automorphism_group(W2)
    text = io.format_aut(aut.generator_pairs(), aut.geometry_order)
    pairs, order = io.parse_aut(text)
    assert order == 720
    for (p, L), (p2, L2) in zip(aut.generator_pairs(), pairs):
        assert (p == p2).all() and (L == L2).all()


@pytest.mark.parametrize(
    "text",
    [
        "",
        "geometry 3\n0 1\n",
        "geometry 3 2\n0 1\n",
        "geometry 3 1\n1 0\n",
        "geometry 3 1\n0 x\n",
        "geometry 3 1\n0 1\nbogus trailer here\n",
        "geometry 3 1\n0 7\n",
    ],
)
def test_geometry_format_errors(text):
    with pytest.raises(FormatError):
        io.parse_geometry(text)


@pytest.mark.parametrize(
    "text",
    ["", "group\n", "group 2\n0 1\n", "group 2\n1 0\n0 1\n", "group 2\n0 1\n1 q\n"],
)
def test_group_format_errors(text):
    with pytest.raises(FormatError):
        io.parse_group(text)


def test_kantor_format_errors(tmp_path):
    io.write_text(tmp_path / "g.grp", io.format_group(heisenberg(1, 2)))
    with pytest.raises(FormatError):
        io.parse_kantor("kantor g.grp\n", tmp_path)
    with pytest.raises(FormatError):
        io.parse_kantor("kantor g.grp 2\nE0: 0 1\nE0*: 0 1 2 3\n", tmp_path)
    with pytest.raises(FormatError):
        io.parse_kantor("kantor g.grp 1\nE0: 0 99\nE0*: 0 1\n", tmp_path)


def test_aut_format_errors():
    with pytest.raises(FormatError):
        io.parse_aut("aut 1 2\n0 1 2\n")  # no '|' and no point count
    with pytest.raises(FormatError):
        io.parse_aut("aut 2 2\n0 1 | 0\n")
    pairs, _ = io.parse_aut("aut 1 2\n1 0 0\n", n_points=2)
    assert (pairs[0][0] == np.array([1, 0])).all()


def test_manifest_format():
    text = io.format_manifest([{"file": "a.kf", "hash": "00ff"}], complete=False)
    assert text.splitlines()[0] == "manifest 1 complete=no"
    assert "file=a.kf hash=00ff" in text
