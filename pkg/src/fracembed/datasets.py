"""Dataset parsers: TUDataset flat files, GXL/CXL collections, and JSONL interchange.

All parsers reject inconsistent input with file/line diagnostics instead of
truncating; node attributes (letter positions, atom labels) are parsed and
carried on the dataset but never used by the embedding pipeline.
"""

from __future__ import annotations

import json
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataFormatError
from .graphs import Graph, LabeledDataset

log = logging.getLogger(__name__)

_WEIGHT_ATTRS = {"weight", "w", "value", "cost"}


@dataclass
class DatasetManifest:
    """Where a dataset lives and what it must contain."""

    name: str
    format: str  # tud | gxl | jsonl
    root: Path
    splits: list = None  # gxl only: index files; default = all *.cxl
    expected_graphs: int = None
    expected_classes: int = None

    def __post_init__(self):
        if self.format not in ("tud", "gxl", "jsonl"):
            raise ValueError(f"unknown dataset format {self.format!r}")
        self.root = Path(self.root)


def load_dataset(manifest: DatasetManifest) -> LabeledDataset:
    """Parse per the manifest and verify expected graph/class counts."""
    if manifest.format == "tud":
        ds = parse_tudataset(manifest.root, manifest.name)
    elif manifest.format == "gxl":
        ds = parse_gxl_dataset(manifest.root, manifest.splits)
        ds.name = manifest.name or ds.name
    else:
        ds = parse_jsonl(manifest.root)
        if manifest.name:
            ds.name = manifest.name
    if manifest.expected_graphs is not None and len(ds) != manifest.expected_graphs:
        raise DataFormatError(
            f"{ds.name}: expected {manifest.expected_graphs} graphs, parsed {len(ds)}")
    if manifest.expected_classes is not None and ds.class_count != manifest.expected_classes:
        raise DataFormatError(
            f"{ds.name}: expected {manifest.expected_classes} classes, parsed {ds.class_count}")
    return ds


def _read_int_lines(path: Path, what: str) -> list:
    values = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise DataFormatError(
                    f"{path.name}:{ln}: expected an integer {what}, got {line!r}") from None
    return values


def parse_tudataset(root, name: str) -> LabeledDataset:
    """Flat-file layout: <DS>_A.txt edge list (1-based, comma separated),
    <DS>_graph_indicator.txt (graph id per node), <DS>_graph_labels.txt.

    Bidirectional duplicate edges are merged; self-loops are dropped (with a
    warning count); edges crossing graph boundaries are errors.
    """
    root = Path(root)
    a_path = root / f"{name}_A.txt"
    ind_path = root / f"{name}_graph_indicator.txt"
    lab_path = root / f"{name}_graph_labels.txt"
    for p in (a_path, ind_path, lab_path):
        if not p.exists():
            raise DataFormatError(f"missing dataset file {p}")

    indicator = _read_int_lines(ind_path, "graph id")
    if not indicator:
        raise DataFormatError(f"{ind_path.name}: no nodes")
    if min(indicator) < 1:
        raise DataFormatError(f"{ind_path.name}: graph ids must be 1-based positive")
    graph_count = max(indicator)
    node_graph = [g - 1 for g in indicator]
    node_counts = [0] * graph_count
    local_index = []
    for g in node_graph:
        local_index.append(node_counts[g])
        node_counts[g] += 1
    empty = [g + 1 for g, c in enumerate(node_counts) if c == 0]
    if empty:
        raise DataFormatError(
            f"{ind_path.name}: graph ids {empty[:5]} have no nodes assigned")

    edge_lists = [[] for _ in range(graph_count)]
    dropped_loops = 0
    with open(a_path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DataFormatError(
                    f"{a_path.name}:{ln}: expected 'node, node', got {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise DataFormatError(
                    f"{a_path.name}:{ln}: non-integer node id in {line!r}") from None
            if not (1 <= a <= len(node_graph)) or not (1 <= b <= len(node_graph)):
                raise DataFormatError(
                    f"{a_path.name}:{ln}: node id out of range in {line!r}")
            if a == b:
                dropped_loops += 1
                continue
            ga, gb = node_graph[a - 1], node_graph[b - 1]
            if ga != gb:
                raise DataFormatError(
                    f"{a_path.name}:{ln}: edge {a}-{b} crosses graphs {ga + 1} and {gb + 1}")
            edge_lists[ga].append((local_index[a - 1], local_index[b - 1]))
    if dropped_loops:
        log.warning("%s: dropped %d self-loop entries", a_path.name, dropped_loops)

    labels = _read_int_lines(lab_path, "graph label")
    if len(labels) != graph_count:
        raise DataFormatError(
            f"{lab_path.name}: {len(labels)} labels for {graph_count} graphs")

    graphs = [Graph.from_edges(node_counts[g], edge_lists[g]) for g in range(graph_count)]
    return LabeledDataset(graphs, np.asarray(labels, dtype=np.int64), name=name)


def _parse_gxl_file(path: Path):
    """One GXL graph: node order of appearance, undirected deduplicated edges."""
    try:
        tree = ET.parse(path)
    except (ET.ParseError, OSError) as exc:
        raise DataFormatError(f"{path.name}: {exc}") from None
    node_ids = []
    attrs = {}
    for node in tree.iter("node"):
        nid = node.get("id")
        if nid is None:
            raise DataFormatError(f"{path.name}: <node> without id")
        if nid in attrs:
            raise DataFormatError(f"{path.name}: duplicate node id {nid!r}")
        node_ids.append(nid)
        fields = {}
        for attr in node.iter("attr"):
            aname = attr.get("name")
            child = next(iter(attr), None)
            if aname and child is not None and child.text is not None:
                fields[aname] = child.text.strip()
        attrs[nid] = fields
    index = {nid: i for i, nid in enumerate(node_ids)}
    edges = []
    for edge in tree.iter("edge"):
        src, dst = edge.get("from"), edge.get("to")
        if src is None or dst is None:
            raise DataFormatError(f"{path.name}: <edge> missing from/to")
        if src not in index or dst not in index:
            raise DataFormatError(f"{path.name}: edge {src!r}-{dst!r} references unknown node")
        for attr in edge.iter("attr"):
            if (attr.get("name") or "").lower() in _WEIGHT_ATTRS:
                raise DataFormatError(
                    f"{path.name}: weighted edges are not supported ({src!r}-{dst!r})")
        if src == dst:
            raise DataFormatError(f"{path.name}: self-loop on node {src!r}")
        edges.append((index[src], index[dst]))
    graph = Graph.from_edges(max(len(node_ids), 1), edges)
    return graph, [attrs[nid] for nid in node_ids]


def parse_gxl_dataset(root, split_files=None) -> LabeledDataset:
    """GXL graphs listed by one or more CXL index files (<print file=... class=...>)."""
    root = Path(root)
    if split_files is None:
        split_files = sorted(p.name for p in root.glob("*.cxl"))
    if not split_files:
        raise DataFormatError(f"{root}: no .cxl index files found")
    entries = []
    for split in split_files:
        path = root / split
        try:
            tree = ET.parse(path)
        except (ET.ParseError, OSError) as exc:
            raise DataFormatError(f"{path.name}: {exc}") from None
        count = 0
        for pr in tree.iter("print"):
            fname, cls = pr.get("file"), pr.get("class")
            if fname is None or cls is None:
                raise DataFormatError(f"{path.name}: <print> missing file or class attribute")
            entries.append((fname, cls))
            count += 1
        if count == 0:
            raise DataFormatError(f"{path.name}: no <print> entries")
    graphs, classes, attributes = [], [], []
    for fname, cls in entries:
        graph, attrs = _parse_gxl_file(root / fname)
        graphs.append(graph)
        classes.append(cls)
        attributes.append(attrs)
    label_names = sorted(set(classes))
    label_of = {c: i for i, c in enumerate(label_names)}
    labels = np.asarray([label_of[c] for c in classes], dtype=np.int64)
    return LabeledDataset(graphs, labels, name=root.name,
                          label_names=label_names, node_attributes=attributes)


def parse_jsonl(path) -> LabeledDataset:
    """One JSON object per line: {"n": nodes, "edges": [[a, b], ...], "label": int}."""
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"missing dataset file {path}")
    graphs, labels = [], []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{path.name}:{ln}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise DataFormatError(f"{path.name}:{ln}: expected an object")
            missing = {"n", "edges", "label"} - obj.keys()
            if missing:
                raise DataFormatError(f"{path.name}:{ln}: missing fields {sorted(missing)}")
            n, edges, label = obj["n"], obj["edges"], obj["label"]
            if not isinstance(n, int) or n < 1:
                raise DataFormatError(f"{path.name}:{ln}: 'n' must be a positive integer")
            if not isinstance(label, int):
                raise DataFormatError(f"{path.name}:{ln}: 'label' must be an integer")
            if not isinstance(edges, list) or not all(
                    isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)
                    for e in edges):
                raise DataFormatError(f"{path.name}:{ln}: 'edges' must be pairs of integers")
            try:
                graphs.append(Graph.from_edges(n, edges))
            except ValueError as exc:
                raise DataFormatError(f"{path.name}:{ln}: {exc}") from None
            labels.append(label)
    if not graphs:
        raise DataFormatError(f"{path.name}: no graphs")
    return LabeledDataset(graphs, np.asarray(labels, dtype=np.int64), name=path.stem)


def write_jsonl(dataset: LabeledDataset, path) -> None:
    """JSONL export; round-trips structure and labels losslessly."""
    with open(path, "w", encoding="utf-8") as fh:
        for graph, label in zip(dataset.graphs, dataset.labels):
            obj = {"n": graph.node_count,
                   "edges": [list(e) for e in graph.sorted_edges()],
                   "label": int(label)}
            fh.write(json.dumps(obj, separators=(",", ":")) + "\n")


DATASET_SOURCES = {
    "NCI1": {
        "format": "tud", "graphs": 4110, "classes": 2,
        "url": "https://www.chrsmrrs.com/graphkerneldatasets/NCI1.zip",
    },
    "PROTEINS": {
        "format": "tud", "graphs": 1113, "classes": 2,
        "url": "https://www.chrsmrrs.com/graphkerneldatasets/PROTEINS.zip",
    },
    "IMDB-MULTI": {
        "format": "tud", "graphs": 1500, "classes": 3,
        "url": "https://www.chrsmrrs.com/graphkerneldatasets/IMDB-MULTI.zip",
    },
    # The IAM letter sets require registration; download manually and place the
    # GXL/CXL files under <dest>/<name>/.
    "Letter-low": {
        "format": "gxl", "graphs": 2250, "classes": 15, "manual": True,
        "url": "https://fki.tic.heia-fr.ch/databases/iam-graph-database",
    },
    "Letter-med": {
        "format": "gxl", "graphs": 2250, "classes": 15, "manual": True,
        "url": "https://fki.tic.heia-fr.ch/databases/iam-graph-database",
    },
    "Letter-high": {
        "format": "gxl", "graphs": 2250, "classes": 15, "manual": True,
        "url": "https://fki.tic.heia-fr.ch/databases/iam-graph-database",
    },
}
