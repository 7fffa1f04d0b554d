import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracembed.datasets import (DatasetManifest, load_dataset, parse_gxl_dataset,
                                parse_jsonl, parse_tudataset, write_jsonl)
from fracembed.errors import DataFormatError
from fracembed.graphs import LabeledDataset, random_graph

from conftest import write_gxl_fixture, write_tud_fixture


def test_tud_fixture(tmp_path):
    write_tud_fixture(tmp_path)
    ds = parse_tudataset(tmp_path, "TOY")
    assert len(ds) == 2
    assert ds.graphs[0].node_count == 3
    assert ds.graphs[0].edges == frozenset({(0, 1), (1, 2)})
    assert ds.graphs[1].node_count == 2
    assert ds.graphs[1].edges == frozenset({(0, 1)})
    assert ds.labels.tolist() == [0, 1]


def test_tud_two_line_single_edge(tmp_path):
    (tmp_path / "T_A.txt").write_text("1, 2\n2, 1\n")
    (tmp_path / "T_graph_indicator.txt").write_text("1\n1\n")
    (tmp_path / "T_graph_labels.txt").write_text("0\n")
    ds = parse_tudataset(tmp_path, "T")
    assert ds.graphs[0].node_count == 2
    assert ds.graphs[0].edges == frozenset({(0, 1)})


def test_tud_drops_self_loops_with_warning(tmp_path, caplog):
    (tmp_path / "T_A.txt").write_text("1, 1\n1, 2\n2, 1\n")
    (tmp_path / "T_graph_indicator.txt").write_text("1\n1\n")
    (tmp_path / "T_graph_labels.txt").write_text("0\n")
    with caplog.at_level("WARNING"):
        ds = parse_tudataset(tmp_path, "T")
    assert "1 self-loop" in caplog.text
    assert ds.graphs[0].edges == frozenset({(0, 1)})


def test_tud_malformed_line_reports_position(tmp_path):
    write_tud_fixture(tmp_path)
    (tmp_path / "TOY_A.txt").write_text("1, 2\nbroken\n")
    with pytest.raises(DataFormatError, match=r"TOY_A\.txt:2"):
        parse_tudataset(tmp_path, "TOY")


def test_tud_cross_graph_edge(tmp_path):
    write_tud_fixture(tmp_path)
    (tmp_path / "TOY_A.txt").write_text("1, 4\n")
    with pytest.raises(DataFormatError, match="crosses"):
        parse_tudataset(tmp_path, "TOY")


def test_tud_label_count_mismatch(tmp_path):
    write_tud_fixture(tmp_path)
    (tmp_path / "TOY_graph_labels.txt").write_text("0\n")
    with pytest.raises(DataFormatError, match="labels"):
        parse_tudataset(tmp_path, "TOY")


def test_tud_missing_file(tmp_path):
    with pytest.raises(DataFormatError, match="missing"):
        parse_tudataset(tmp_path, "NOPE")


def test_tud_node_id_out_of_range(tmp_path):
    write_tud_fixture(tmp_path)
    (tmp_path / "TOY_A.txt").write_text("1, 9\n")
    with pytest.raises(DataFormatError, match="out of range"):
        parse_tudataset(tmp_path, "TOY")


def test_tud_empty_graph_id_gap(tmp_path):
    (tmp_path / "T_A.txt").write_text("1, 2\n")
    (tmp_path / "T_graph_indicator.txt").write_text("1\n1\n3\n")
    (tmp_path / "T_graph_labels.txt").write_text("0\n1\n0\n")
    with pytest.raises(DataFormatError, match="no nodes"):
        parse_tudataset(tmp_path, "T")


def test_gxl_fixture(tmp_path):
    write_gxl_fixture(tmp_path)
    ds = parse_gxl_dataset(tmp_path)
    assert len(ds) == 4
    assert ds.class_count == 2
    assert ds.label_names == ["A", "B"]
    assert ds.graphs[0].edges == frozenset({(0, 1), (1, 2)})  # P3
    assert ds.node_attributes[0][0]["x"] == "0.0"


def test_gxl_explicit_splits(tmp_path):
    write_gxl_fixture(tmp_path)
    ds = parse_gxl_dataset(tmp_path, ["index.cxl"])
    assert len(ds) == 4


def test_gxl_missing_class_attribute(tmp_path):
    write_gxl_fixture(tmp_path)
    (tmp_path / "index.cxl").write_text(
        '<GraphCollection><fingerprints><print file="g0.gxl"/>'
        "</fingerprints></GraphCollection>")
    with pytest.raises(DataFormatError, match="class"):
        parse_gxl_dataset(tmp_path)


def test_gxl_dangling_edge(tmp_path):
    write_gxl_fixture(tmp_path)
    (tmp_path / "g0.gxl").write_text(
        '<gxl><graph id="g"><node id="_0"/><edge from="_0" to="_9"/></graph></gxl>')
    with pytest.raises(DataFormatError, match="unknown node"):
        parse_gxl_dataset(tmp_path)


def test_gxl_malformed_xml(tmp_path):
    write_gxl_fixture(tmp_path)
    (tmp_path / "g1.gxl").write_text("<gxl><graph id=oops")
    with pytest.raises(DataFormatError, match=r"g1\.gxl"):
        parse_gxl_dataset(tmp_path)


def test_gxl_rejects_weighted_edges(tmp_path):
    write_gxl_fixture(tmp_path)
    (tmp_path / "g0.gxl").write_text(
        '<gxl><graph id="g"><node id="_0"/><node id="_1"/>'
        '<edge from="_0" to="_1"><attr name="weight"><float>2.0</float></attr></edge>'
        "</graph></gxl>")
    with pytest.raises(DataFormatError, match="weighted"):
        parse_gxl_dataset(tmp_path)


def test_gxl_no_index_files(tmp_path):
    with pytest.raises(DataFormatError, match="cxl"):
        parse_gxl_dataset(tmp_path)


def test_jsonl_example_line(tmp_path):
    path = tmp_path / "d.jsonl"
    path.write_text('{"n":3,"edges":[[0,1],[1,2]],"label":0}\n')
    ds = parse_jsonl(path)
    assert ds.graphs[0].node_count == 3
    assert ds.graphs[0].edges == frozenset({(0, 1), (1, 2)})
    assert ds.labels.tolist() == [0]


def test_jsonl_empty_file(tmp_path):
    path = tmp_path / "d.jsonl"
    path.write_text("")
    with pytest.raises(DataFormatError, match="no graphs"):
        parse_jsonl(path)


@pytest.mark.parametrize("line,msg", [
    ("not json", "invalid JSON"),
    ('{"edges":[],"label":0}', "missing fields"),
    ('{"n":0,"edges":[],"label":0}', "positive"),
    ('{"n":2,"edges":[[0,1]],"label":"x"}', "integer"),
    ('{"n":2,"edges":[[0,0]],"label":1}', "self-loop"),
    ('{"n":2,"edges":[[0,1,2]],"label":1}', "pairs"),
])
def test_jsonl_schema_violations(tmp_path, line, msg):
    path = tmp_path / "d.jsonl"
    path.write_text(line + "\n")
    with pytest.raises(DataFormatError, match=msg) as err:
        parse_jsonl(path)
    assert ":1:" in str(err.value)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 16))
def test_jsonl_round_trip(seed):
    rng = np.random.default_rng(seed)
    graphs = [random_graph(int(rng.integers(1, 9)), 0.5, rng) for _ in range(4)]
    labels = rng.integers(0, 3, 4)
    ds = LabeledDataset(graphs, labels, name="rt")
    import tempfile
    from pathlib import Path
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "rt.jsonl"
        write_jsonl(ds, path)
        back = parse_jsonl(path)
    assert [g.edges for g in back.graphs] == [g.edges for g in graphs]
    assert [g.node_count for g in back.graphs] == [g.node_count for g in graphs]
    assert back.labels.tolist() == labels.tolist()


def test_manifest_count_checks(tmp_path):
    write_tud_fixture(tmp_path)
    ok = DatasetManifest("TOY", "tud", tmp_path, expected_graphs=2, expected_classes=2)
    assert len(load_dataset(ok)) == 2
    bad = DatasetManifest("TOY", "tud", tmp_path, expected_graphs=5)
    with pytest.raises(DataFormatError, match="expected 5 graphs"):
        load_dataset(bad)
    bad2 = DatasetManifest("TOY", "tud", tmp_path, expected_classes=3)
    with pytest.raises(DataFormatError, match="expected 3 classes"):
        load_dataset(bad2)


def test_manifest_rejects_unknown_format(tmp_path):
    with pytest.raises(ValueError, match="format"):
        DatasetManifest("x", "csv", tmp_path)
