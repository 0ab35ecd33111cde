import json

import numpy as np
import pytest

from hyperline import ConfigError, ResourceLimitError, sclique_graph
from hyperline.io import read_edge_list, read_idmap
from hyperline.pipeline import PipelineConfig, run_pipeline

from worked_example import EXAMPLE_LINE_GRAPHS

STAGES = ("preprocessing", "s_overlap", "squeeze", "metrics", "total")


def run(tsv, **kw):
    return run_pipeline(PipelineConfig(input=tsv, **kw))


def test_example_components_and_timing(example_tsv, tmp_path):
    timing = tmp_path / "t.json"
    res = run(example_tsv, s=2, algorithm="hashmap", metrics=("cc",), timing_json=timing)
    comps = res.metrics["cc"]["2"]["components"]
    assert sorted(sorted(c) for c in comps) == [[1, 2, 3], [4]]
    doc = json.loads(timing.read_text())
    assert all(k in doc for k in STAGES)
    assert doc["set_intersections"] == 0
    t = res.timing
    assert t.total >= t.preprocessing + t.s_overlap + t.squeeze + t.metrics - 1e-3


def test_ensemble_writes_one_file_per_s(example_tsv, tmp_path):
    run(example_tsv, s_list=[1, 2, 3, 4], algorithm="ensemble", out_dir=tmp_path)
    for s, (edges, nodes) in EXAMPLE_LINE_GRAPHS.items():
        got, meta = read_edge_list(tmp_path / f"linegraph_s{s}.tsv")
        assert {tuple(p) for p in got.tolist()} == edges
        assert int(meta["nodes"]) == len(nodes)


def test_squeeze_sidecar_round_trips(example_tsv, tmp_path):
    plain = run(example_tsv, s=3)
    res = run(example_tsv, s=3, squeeze=True, out_dir=tmp_path)
    edges, _ = read_edge_list(tmp_path / "linegraph_s3.tsv")
    forward = read_idmap(tmp_path / "idmap_s3.tsv")
    assert {(forward[a], forward[b]) for a, b in edges.tolist()} == EXAMPLE_LINE_GRAPHS[3][0]
    # squeezing composes back to the unsqueezed edge set
    assert res.linegraphs[3].edge_set() == plain.linegraphs[3].edge_set()


def test_empty_hypergraph(tmp_path):
    empty = tmp_path / "empty.tsv"
    empty.write_text("")
    res = run(empty, s=1, metrics=("cc", "bc", "pr", "ac", "dist"), out_dir=tmp_path / "out")
    assert res.linegraphs[1].num_edges == 0
    got, meta = read_edge_list(tmp_path / "out" / "linegraph_s1.tsv")
    assert got.size == 0 and meta["edges"] == "0"


def test_outputs_deterministic(example_tsv, tmp_path):
    cfg = dict(s_list=[1, 2, 3], algorithm="ensemble", metrics=("cc", "bc", "pr", "ac", "dist"))
    run(example_tsv, out_dir=tmp_path / "a", workers=1, **cfg)
    run(example_tsv, out_dir=tmp_path / "b", workers=3, partition="cyclic", **cfg)
    files = sorted(p.name for p in (tmp_path / "a").iterdir() if p.name != "timing.json")
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir() if p.name != "timing.json")
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("algorithm", ["naive", "intersection", "hashmap", "spgemm"])
@pytest.mark.parametrize("relabel", ["none", "asc", "desc"])
def test_algorithms_and_relabels_agree(example_tsv, algorithm, relabel):
    res = run(example_tsv, s=2, algorithm=algorithm, relabel=relabel)
    assert res.linegraphs[2].edge_set(res.labels) == EXAMPLE_LINE_GRAPHS[2][0]
    assert res.linegraphs[2].node_set(res.labels) == EXAMPLE_LINE_GRAPHS[2][1]


def test_toplex_stage(example_tsv):
    res = run(example_tsv, s=1, toplex=True)
    assert res.linegraphs[1].edge_set(res.labels) == {(3, 4)}
    assert res.linegraphs[1].node_set(res.labels) == {3, 4}


def test_sclique_uses_vertex_ids(example, example_tsv):
    res = run(example_tsv, s=2, algorithm="sclique")
    assert res.linegraphs[2].edge_set(res.labels) == sclique_graph(example, 2).edge_set()


def test_metric_files(example_tsv, tmp_path):
    res = run(example_tsv, s=3, metrics=("bc", "dist"), dist_source=1, out_dir=tmp_path)
    lines = (tmp_path / "metrics_s3_bc.tsv").read_text().splitlines()
    assert lines == ["1\t0.0", "2\t0.0", "3\t1.0"]
    assert res.metrics["dist"]["3"]["values"] == {1: 0, 3: 1, 2: 2}
    doc = json.loads((tmp_path / "metrics.json").read_text())
    assert set(doc) == {"bc", "dist"}


def test_unknown_distance_source(example_tsv):
    with pytest.raises(ConfigError):
        run(example_tsv, s=3, metrics=("dist",), dist_source=4)


@pytest.mark.parametrize("kw", [
    dict(algorithm="ensemble", s=2),
    dict(algorithm="hashmap", s_list=[1, 2]),
    dict(algorithm="hashmap"),
    dict(algorithm="magic", s=1),
    dict(s=1, workers=0),
    dict(s=0),
    dict(algorithm="ensemble", s_list=[3, 2]),
    dict(s=1, metrics=("xx",)),
    dict(s=1, chunk=0),
])
def test_config_conflicts(example_tsv, kw):
    with pytest.raises(ConfigError):
        run(example_tsv, **kw)


def test_resource_error_propagates(example_tsv):
    with pytest.raises(ResourceLimitError):
        run(example_tsv, s=1, algorithm="spgemm", spgemm_cap=1)


def test_in_memory_hypergraph(example):
    res = run_pipeline(PipelineConfig(hypergraph=example, s=1, relabel="desc"))
    assert res.linegraphs[1].edge_set(res.labels) == EXAMPLE_LINE_GRAPHS[1][0]
    assert np.array_equal(res.labels, example.edge_labels)
