import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gqlab.errors import BudgetExceeded
from gqlab.symmetry.engine import Graph, automorphism_chain, canonical_labeling, fnv1a64, refine, verify_chain


def _graph(nxg):
    nxg = nx.convert_node_labels_to_integers(nxg)
    return Graph(nxg.number_of_nodes(), list(nxg.edges()))


def _aut_count_by_networkx(nxg) -> int:
    return sum(1 for _ in nx.isomorphism.GraphMatcher(nxg, nxg).isomorphisms_iter())


@pytest.mark.parametrize(
    "nxg",
    [nx.petersen_graph(), nx.cycle_graph(7), nx.complete_graph(5), nx.hypercube_graph(3), nx.path_graph(6),
     nx.complete_bipartite_graph(2, 3), nx.heawood_graph()],
    ids=["petersen", "c7", "k5", "q3", "p6", "k23", "heawood"],
)
def test_group_order_matches_networkx(nxg):
    g = _graph(nxg)
    chain = automorphism_chain(g, np.zeros(g.n, dtype=np.int64))
    assert chain.order == _aut_count_by_networkx(nx.convert_node_labels_to_integers(nxg))
    assert chain.verified and verify_chain(g, chain, np.zeros(g.n, dtype=np.int64))


def test_elements_are_distinct_automorphisms():
    g = _graph(nx.petersen_graph())
    chain = automorphism_chain(g, np.zeros(g.n, dtype=np.int64))
    E = chain.elements()
    assert (E[0] == np.arange(g.n)).all()
    assert len({row.tobytes() for row in E}) == 120
    assert all(g.is_automorphism(h) for h in E)
    with pytest.raises(BudgetExceeded):
        chain.elements(limit=10)


def test_colours_restrict_the_group():
    g = _graph(nx.cycle_graph(6))
    colors = np.zeros(6, dtype=np.int64)
    colors[0] = 1
    assert automorphism_chain(g, colors).order == 2


def test_refine_is_equitable():
    g = _graph(nx.petersen_graph())
    c, inv = refine(g, np.zeros(g.n, dtype=np.int64))
    assert len(set(c.tolist())) == 1 and isinstance(inv, bytes)


def test_deadline():
    g = _graph(nx.hypercube_graph(4))
    with pytest.raises(BudgetExceeded):
        automorphism_chain(g, np.zeros(g.n, dtype=np.int64), deadline=0.0)


def test_fnv_reference_values():
    # published FNV-1a 64 test vectors
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def _relabelled_key(g, perm):
    edges = perm[g.edges]
    h = Graph(g.n, edges)
    canon = canonical_labeling(h, np.zeros(g.n, dtype=np.int64))
    return canon.key


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["petersen", "heawood", "q3"]), st.randoms(use_true_random=False))
def test_canonical_key_relabel_invariant(name, rnd):
    nxg = {"petersen": nx.petersen_graph(), "heawood": nx.heawood_graph(), "q3": nx.hypercube_graph(3)}[name]
    g = _graph(nxg)
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert _relabelled_key(g, np.array(perm)) == _relabelled_key(g, np.arange(g.n))


def test_canonical_key_separates():
    a = _graph(nx.petersen_graph())
    # the Petersen graph and the 5-prism are both cubic on 10 vertices
    b = _graph(nx.circular_ladder_graph(5))
    z = np.zeros(10, dtype=np.int64)
    assert canonical_labeling(a, z).key != canonical_labeling(b, z).key
