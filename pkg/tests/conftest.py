import numpy as np
import pytest

from fracembed.graphs import Graph, LabeledDataset, laplacian
from fracembed.spectral import decompose


def star(n):
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def gaussian_clusters(rng, centers, n_per, sigma):
    """Rows/labels for well-separated synthetic classes."""
    rows, labels = [], []
    for c, center in enumerate(centers):
        rows.append(rng.normal(center, sigma, (n_per, len(center))))
        labels += [c] * n_per
    return np.vstack(rows), np.asarray(labels)


@pytest.fixture
def p3():
    return path(3)


@pytest.fixture
def p3_dec(p3):
    return decompose(laplacian(p3))


@pytest.fixture
def toy_dataset():
    """Stars vs cycles of mixed sizes: structurally separable, 2 classes."""
    graphs = [star(n) for n in (5, 6, 7, 8)] * 5 + [cycle(n) for n in (5, 6, 7, 8)] * 5
    return LabeledDataset(graphs, [0] * 20 + [1] * 20, name="toy")


@pytest.fixture
def toy_decs(toy_dataset):
    return [decompose(laplacian(g)) for g in toy_dataset.graphs]


def write_tud_fixture(root, name="TOY"):
    """Two graphs: P3 and a single edge, with bidirectional duplicates."""
    (root / f"{name}_A.txt").write_text(
        "1, 2\n2, 1\n2, 3\n3, 2\n4, 5\n5, 4\n")
    (root / f"{name}_graph_indicator.txt").write_text("1\n1\n1\n2\n2\n")
    (root / f"{name}_graph_labels.txt").write_text("0\n1\n")
    return root


GXL_GRAPH = """<?xml version="1.0"?>
<gxl>
  <graph id="{gid}" edgeids="false" edgemode="undirected">
{nodes}
{edges}
  </graph>
</gxl>
"""

GXL_NODE = ('    <node id="{nid}"><attr name="x"><float>{x}</float></attr>'
            '<attr name="y"><float>{y}</float></attr></node>')
GXL_EDGE = '    <edge from="{a}" to="{b}"/>'


def write_gxl_graph(path, gid, n_nodes, edges):
    nodes = "\n".join(GXL_NODE.format(nid=f"_{i}", x=float(i), y=float(2 * i))
                      for i in range(n_nodes))
    edge_xml = "\n".join(GXL_EDGE.format(a=f"_{a}", b=f"_{b}") for a, b in edges)
    path.write_text(GXL_GRAPH.format(gid=gid, nodes=nodes, edges=edge_xml))


def write_gxl_fixture(root):
    """Four letter-style graphs in two classes with a single index file."""
    entries = [
        ("g0.gxl", "A", 3, [(0, 1), (1, 2)]),
        ("g1.gxl", "A", 4, [(0, 1), (1, 2), (2, 3)]),
        ("g2.gxl", "B", 3, [(0, 1), (1, 2), (0, 2)]),
        ("g3.gxl", "B", 4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
    ]
    for fname, _, n, edges in entries:
        write_gxl_graph(root / fname, fname[:-4], n, edges)
    prints = "\n".join(f'  <print file="{f}" class="{c}"/>' for f, c, _, _ in entries)
    (root / "index.cxl").write_text(
        f'<?xml version="1.0"?>\n<GraphCollection>\n<fingerprints count="4">\n'
        f"{prints}\n</fingerprints>\n</GraphCollection>\n")
    return root
