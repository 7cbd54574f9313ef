import pytest

from gqlab.algebra.iso import groups_isomorphic
from gqlab.catalog import CATALOG_ORDERS, EXPECTED_COUNTS, catalog_groups, generate_groups, write_catalog
from gqlab.io import read_group


@pytest.mark.parametrize("n", CATALOG_ORDERS)
def test_bundled_counts(n):
    assert len(catalog_groups(n)) == EXPECTED_COUNTS[n]


@pytest.mark.parametrize("n", CATALOG_ORDERS)
def test_regeneration_matches_bundled_files(n):
    fresh = generate_groups(n)
    bundled = catalog_groups(n)
    assert len(fresh) == len(bundled)
    for a, b in zip(fresh, bundled):
        assert (a.mul == b.mul).all()


def test_write_catalog(tmp_path):
    counts = write_catalog(orders=(8,), directory=tmp_path)
    assert counts == {8: 5}
    files = sorted(tmp_path.glob("g008_*.grp"))
    for f, G in zip(files, catalog_groups(8)):
        assert groups_isomorphic(read_group(f), G) is not None


def test_order_48_highlights():
    groups = catalog_groups(48)
    abelian = [G for G in groups if G.is_abelian]
    assert len(abelian) == 5  # C48, C24xC2, C12xC2xC2, C6xC2^3, C4xC4xC3
    centerless = [G for G in groups if len(G.center) == 1]
    assert centerless  # e.g. C2^4 : C3
