"""The worked example hypergraph and its expected line graphs."""

from hyperline import Hypergraph

EXAMPLE_EDGES = [["a", "b", "c"], ["b", "c", "d"], ["a", "b", "c", "d", "e"], ["e", "f"]]
EXAMPLE_VERTICES = list("abcdef")

# expected L_s edge and node sets in edge labels 1..4
EXAMPLE_LINE_GRAPHS = {
    1: ({(1, 2), (1, 3), (2, 3), (3, 4)}, {1, 2, 3, 4}),
    2: ({(1, 2), (1, 3), (2, 3)}, {1, 2, 3, 4}),
    3: ({(1, 3), (2, 3)}, {1, 2, 3}),
    4: (set(), {3}),
}

EXAMPLE_TSV = "".join(f"{e + 1}\t{EXAMPLE_VERTICES.index(v)}\n" for e, mem in enumerate(EXAMPLE_EDGES) for v in mem)


def example_hypergraph() -> Hypergraph:
    lists = [[EXAMPLE_VERTICES.index(v) for v in mem] for mem in EXAMPLE_EDGES]
    return Hypergraph.from_edge_lists(lists, num_vertices=6, edge_labels=[1, 2, 3, 4],
                                      vertex_labels=EXAMPLE_VERTICES)
