"""CLI subcommands: outputs, exit codes, file round trips."""

import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from salsa_eval.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = str(FIXTURES / "corpus_tiny.json")
ANNOTATIONS = str(FIXTURES / "annotations_tiny.json")
SELECTIONS = str(FIXTURES / "selection_three.json")


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_score_tsv_output(capsys):
    code, out = run(capsys, "score", "--corpus", CORPUS, "--annotations", ANNOTATIONS)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].split("\t")[:4] == ["pair", "annotator", "system", "total"]
    rows = {line.split("\t")[0]: line.split("\t") for line in lines[1:]}
    assert set(rows) == {"p1", "p2", "p3"}
    # p2 has no edits: scores exactly 0
    assert rows["p2"][3] == "0"
    # p1: single generalization, rating 2, length factor exp(11/42)
    expected = 2 * math.exp(11 / 42)
    assert float(rows["p1"][3]) == pytest.approx(expected, abs=1e-6)


def test_score_json_includes_per_edit(capsys):
    code, out = run(
        capsys,
        "score",
        "--corpus",
        CORPUS,
        "--annotations",
        ANNOTATIONS,
        "--format",
        "json",
        "--per-edit",
    )
    assert code == 0
    doc = json.loads(out)
    by_pair = {row["pair"]: row for row in doc["rows"]}
    assert by_pair["p3"]["per_edit"][2]["contribution"] == 0.0  # trivial edit


def test_agreement_table(capsys):
    code, out = run(
        capsys,
        "agreement",
        "--corpus",
        CORPUS,
        "--annotations",
        SELECTIONS,
        "--class",
        "deletion",
    )
    assert code == 0
    header, row = out.strip().split("\n")
    assert header.split("\t") == ["class", "alpha", "pct_two", "pct_three", "units"]
    fields = row.split("\t")
    assert fields[0] == "deletion"
    alpha = float(fields[1])
    assert 0 < alpha < 1  # a3 disagrees on one token
    assert fields[2] == "1"  # every selected token has >= 2 IN votes
    assert float(fields[3]) < 1


def test_agreement_error_table(capsys):
    # single-coder input cannot form an agreement matrix: domain error, exit 1
    code, out = run(
        capsys, "agreement", "--corpus", CORPUS, "--annotations", ANNOTATIONS, "--errors"
    )
    assert code == 1
    assert out == ""
    # three coders (selections carry no error marks): frequencies 0, alpha blank
    code, out = run(
        capsys,
        "agreement",
        "--corpus",
        CORPUS,
        "--annotations",
        SELECTIONS,
        "--errors",
        "--format",
        "json",
    )
    assert code == 0
    rows = json.loads(out)["rows"]
    assert {row["type"] for row in rows} == {
        "bad_deletion",
        "coreference",
        "repetition",
        "contradiction",
        "factual_error",
        "irrelevant",
        "bad_word_reorder",
        "bad_component_reorder",
        "bad_structure",
        "bad_sentence_split",
        "complex_wording",
        "information_rewrite",
    }
    assert all(row["frequency"] == 0.0 and row["alpha"] is None for row in rows)


def test_agreement_confusion_matrix(capsys):
    code, out = run(
        capsys,
        "agreement",
        "--corpus",
        CORPUS,
        "--annotations",
        SELECTIONS,
        "--confusion",
        "--format",
        "json",
    )
    assert code == 0
    doc = json.loads(out)
    # "quick" unanimous deletion; "brown" 2-1 deletion vs NONE
    assert doc["counts"]["deletion|deletion"] == 1
    assert doc["counts"]["deletion|NONE"] == 1
    assert doc["no_majority"] == 0


def test_stats_json(capsys):
    code, out = run(capsys, "stats", "--corpus", CORPUS, "--annotations", ANNOTATIONS)
    assert code == 0
    doc = json.loads(out)
    assert doc["systems"]["sys-a"]["pairs"] == 2
    assert doc["systems"]["sys-b"]["edit_counts"]["elaboration"] == 1
    assert doc["split_frequency"]["overall"] == 0.0
    assert "generalization" in doc["edit_sizes"]


def test_stats_plot_data(tmp_path, capsys):
    code, _ = run(
        capsys,
        "stats",
        "--corpus",
        CORPUS,
        "--annotations",
        ANNOTATIONS,
        "--plot-data",
        str(tmp_path / "plots"),
        "--out",
        str(tmp_path / "stats.json"),
    )
    assert code == 0
    assert (tmp_path / "plots" / "split_frequency.csv").exists()
    assert (tmp_path / "plots" / "composite_breakdown.csv").exists()


def test_export_qe_jsonl(capsys):
    code, out = run(capsys, "export-qe", "--corpus", CORPUS, "--annotations", ANNOTATIONS)
    assert code == 0
    lines = [json.loads(line) for line in out.strip().split("\n")]
    assert lines[0]["record"] == "header"
    by_pair = {line["pair"]: line for line in lines[1:]}
    assert by_pair["p3"]["ratings"][3] == 1  # "down" inserted by elaboration rated 1
    assert by_pair["p3"]["labels"][2] == "ERROR"  # "sat" in complex_wording error
    assert by_pair["p2"]["ratings"] == [0, 0, 0, 0]


def test_validate_clean_corpus(capsys):
    code, out = run(capsys, "validate", "--corpus", CORPUS, "--annotations", ANNOTATIONS)
    assert code == 0
    assert json.loads(out)["violations"] == []


def test_validate_catches_bad_annotations(tmp_path, capsys):
    bad = {
        "annotations": [
            {
                "pair": "p1",
                "annotator": "gold",
                "edits": [
                    {
                        "id": "bad",
                        "operation": "deletion",
                        "spans": [{"side": "simplified", "start": 0, "end": 3}],
                    }
                ],
            }
        ]
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad), encoding="utf-8")
    code, out = run(capsys, "validate", "--corpus", CORPUS, "--annotations", str(path))
    assert code == 1
    report = json.loads(out)
    assert report["violations"][0]["code"] == "operation.sides"


def test_fit_weights_roundtrip(tmp_path, capsys):
    # synthetic corpus large enough to fit: reuse the generator from conftest
    import random

    from conftest import random_classified_edit, random_pair
    from salsa_eval.scoring import WEIGHT_KEYS
    from salsa_eval.serialization import edit_to_dict, pair_to_dict
    from test_fit_weights import PLANTED, oracle_features

    rng = random.Random(6)
    pairs = []
    entries = []
    gold_lines = []
    for i in range(40):
        pair = random_pair(rng, f"w{i}")
        edits = [random_classified_edit(rng, pair, f"w{i}/e{j}") for j in range(rng.randint(1, 4))]
        pairs.append(pair_to_dict(pair))
        entries.append(
            {"pair": pair.id, "annotator": "gold", "edits": [edit_to_dict(e) for e in edits]}
        )
        row = oracle_features(pair, edits)
        gold = sum(row[key] * PLANTED[key] for key in WEIGHT_KEYS)
        gold_lines.append(f"{pair.id}\t{gold}")
    (tmp_path / "corpus.json").write_text(json.dumps({"pairs": pairs}), encoding="utf-8")
    (tmp_path / "annotations.json").write_text(
        json.dumps({"annotations": entries}), encoding="utf-8"
    )
    (tmp_path / "gold.tsv").write_text("\n".join(gold_lines) + "\n", encoding="utf-8")

    code, out = run(
        capsys,
        "fit-weights",
        "--corpus",
        str(tmp_path / "corpus.json"),
        "--annotations",
        str(tmp_path / "annotations.json"),
        "--gold",
        str(tmp_path / "gold.tsv"),
        "--out",
        str(tmp_path / "weights.json"),
    )
    assert code == 0
    doc = json.loads((tmp_path / "weights.json").read_text("utf-8"))
    assert doc["provenance"] == "fitted"
    assert doc["weights"]["syntactic.error"] == pytest.approx(-5.0, abs=1e-6)
    assert doc["weights"]["lexical.quality"] == pytest.approx(3.0, abs=1e-6)
    assert doc["diagnostics"]["r_squared"] == pytest.approx(1.0, abs=1e-6)

    # the fitted file is directly consumable by `score`
    code, _ = run(
        capsys,
        "score",
        "--corpus",
        str(tmp_path / "corpus.json"),
        "--annotations",
        str(tmp_path / "annotations.json"),
        "--weights",
        str(tmp_path / "weights.json"),
    )
    assert code == 0


def test_store_import_and_export_dataset(tmp_path, capsys):
    store_dir = tmp_path / "store"
    code, out = run(capsys, "import", "--store", str(store_dir), CORPUS)
    assert code == 0
    assert json.loads(out) == {"id": "tiny", "pairs": 3}
    code, out = run(capsys, "export-dataset", "--store", str(store_dir))
    assert code == 0
    doc = json.loads(out)
    assert doc["corpora"][0]["id"] == "tiny"
    assert len(doc["tasks"]) == 3


def test_store_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SALSA_STORE", str(tmp_path / "envstore"))
    code, out = run(capsys, "import", CORPUS)
    assert code == 0


def test_config_file_mirrors_flags(tmp_path, capsys):
    config = {"corpus": CORPUS, "annotations": ANNOTATIONS}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    code, out = run(capsys, "--config", str(path), "score", "--corpus", CORPUS, "--annotations", ANNOTATIONS)
    assert code == 0


def test_usage_error_exit_code_2():
    result = subprocess.run(
        [sys.executable, "-m", "salsa_eval", "score", "--nonsense"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 2
    assert "usage" in result.stderr


def test_missing_file_exit_code_1(capsys):
    code = main(["score", "--corpus", "/nope.json", "--annotations", "/nope2.json"])
    assert code == 1
