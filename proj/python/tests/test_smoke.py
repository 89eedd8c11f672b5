import json
import math
import os
from pathlib import Path

import pytest

import sketchsearch as ss

DATA = Path(os.environ.get("SKETCHSEARCH_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    assert ss.generate_corpus(seed=3, n=40, out=out) == 40
    return out


@pytest.fixture(scope="module")
def index(corpus):
    return ss.Index.build(corpus / "screens", DATA / "label_fix_rules.json")


def test_class_vocabularies():
    assert len(ss.doodle_classes()) == 23
    assert len(ss.element_classes()) == 24
    assert "text_button" in ss.element_classes()


def test_stroke5():
    rows = ss.normalize_strokes([[(0, 0), (100, 0)]], (200, 400))
    assert rows == [(0.0, 0.0, 1, 0, 0), (0.25, 0.0, 0, 0, 1)]


def test_recognizer_replays_templates():
    rec = ss.Recognizer(DATA / "templates.json")
    doc = json.loads((DATA / "templates.json").read_text())
    strokes = [[tuple(p) for p in s] for s in doc["classes"]["star"][0]["strokes"]]
    ranking = rec.classify(strokes, (256, 256))
    assert len(ranking) == 23
    assert ranking[0][0] == "star"
    assert math.isclose(sum(c for _, c in ranking), 1.0)


def test_index_query_and_round_trip(index, corpus, tmp_path):
    assert index.screen_count == 40
    manifest = json.loads((corpus / "manifest.json").read_text())
    target = manifest["screens"][7]
    sketch = json.dumps({"elements": target["elements"]})
    results = index.query(sketch, top=5)
    assert results and results[0][0] == target["id"]
    assert all(a[1] >= b[1] for a, b in zip(results, results[1:]))

    path = tmp_path / "idx.bin"
    index.save(path)
    assert ss.Index.load(path) == index


def test_sketch_pairs_and_merge(index):
    merged = ss.parse_sketch([("square", (0.1, 0.1, 0.4, 0.1)), ("squiggle", (0.2, 0.12, 0.2, 0.05))])
    assert merged == [("text_button", (0.1, 0.1, 0.4, 0.1))]
    assert isinstance(index.query([("menu", (0.0, 0.0, 0.1, 0.05))], top=3), list)


def test_hand_trace_idf(index):
    assert index.idf("text") == pytest.approx(math.log(1 + 40 / index.df("text")))


def test_errors(index):
    with pytest.raises(ss.SketchSearchError, match="UnknownClass"):
        index.query([("banana", (0, 0, 0.1, 0.1))])
    with pytest.raises(ss.SketchSearchError, match="InvalidN"):
        index.query([("menu", (0, 0, 0.1, 0.1))], top=0)
    with pytest.raises(ss.SketchSearchError, match="InvalidArgument"):
        ss.Hyperparams.parse("1,2")


def test_evaluate_and_tune(index, corpus, tmp_path):
    manifest = json.loads((corpus / "manifest.json").read_text())
    pairs = tmp_path / "pairs.jsonl"
    pairs.write_text(
        "".join(json.dumps({"sketch": {"elements": s["elements"]}, "target_id": s["id"]}) + "\n"
                for s in manifest["screens"][:5]))
    summary = ss.evaluate_search(index, pairs, k=10)
    assert summary["total"] == 5 and summary["accuracy"] == 1.0

    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"p1": [0, 39], "p2": [0, 8], "p3": [0], "delta_w": [0], "c_w": [0]}))
    best, report = ss.tune(index, pairs, grid)
    assert best != ss.Hyperparams(0, 0, 0, 0, 0)
    assert len(report.strip().splitlines()) == 5
