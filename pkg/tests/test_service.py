"""End-to-end HTTP flows and the endpoint-vs-store parity harness."""

import json

import pytest
from fastapi.testclient import TestClient

from salsa_eval.service.app import create_app
from salsa_eval.store import Store
from salsa_eval.workflow import Stage

CORPUS = {
    "id": "demo",
    "pairs": [
        {
            "id": "p1",
            "system": "sys-a",
            "complex": {"text": "The quick brown fox jumped."},
            "simplified": {"text": "The fox jumped. It was fast."},
        },
        {
            "id": "p2",
            "system": "sys-b",
            "complex": {"text": "He is very tall."},
            "simplified": {"text": "He is tall."},
        },
    ],
}

ANNOTATORS = ["a1", "a2", "a3"]

SELECTION_EDITS = [
    {
        "id": "e1",
        "operation": "deletion",
        "spans": [{"side": "complex", "start": 4, "end": 15}],
    }
]

CLASSIFICATION = [
    {
        "edit_id": "final-1",
        "information_change": "less",
        "classification": {"polarity": "quality", "quality_type": "generalization", "rating": 2},
    }
]

STAMP = "2024-05-01T10:00:00+00:00"


@pytest.fixture
def client(tmp_path):
    store = Store(tmp_path / "store")
    app = create_app(store)
    return TestClient(app)


def drive_flow(client, pair_id="p1"):
    assert client.post("/corpora", json=CORPUS).status_code == 201
    client.post(f"/tasks/{pair_id}/assignment", json={"stage": "selection", "annotators": ANNOTATORS})
    for annotator in ANNOTATORS:
        response = client.post(
            f"/tasks/{pair_id}/selection",
            json={"revision": 1, "submitted_at": STAMP, "edits": SELECTION_EDITS},
            headers={"X-Annotator": annotator},
        )
        assert response.status_code == 200, response.text
    client.post(f"/tasks/{pair_id}/assignment", json={"stage": "adjudication", "annotators": ["a4"]})
    response = client.post(
        f"/tasks/{pair_id}/adjudication",
        json={
            "revision": 1,
            "submitted_at": STAMP,
            "edits": [
                {
                    "id": "final-1",
                    "operation": "deletion",
                    "spans": [{"side": "complex", "start": 4, "end": 15}],
                }
            ],
        },
        headers={"X-Annotator": "a4"},
    )
    assert response.status_code == 200, response.text
    client.post(
        f"/tasks/{pair_id}/assignment", json={"stage": "classification", "annotators": []}
    )
    for annotator in ANNOTATORS:
        response = client.post(
            f"/tasks/{pair_id}/classification",
            json={"revision": 1, "submitted_at": STAMP, "classifications": CLASSIFICATION},
            headers={"X-Annotator": annotator},
        )
        assert response.status_code == 200, response.text
    return response.json()


def test_corpus_import_and_listing(client):
    response = client.post("/corpora", json=CORPUS)
    assert response.status_code == 201
    assert response.json() == {"id": "demo", "pairs": 2}
    listing = client.get("/corpora").json()
    assert listing == [{"id": "demo", "pairs": 2, "systems": ["sys-a", "sys-b"]}]


def test_typology_served_as_data(client):
    doc = client.get("/typology").json()
    assert len(doc["types"]) == 21
    assert doc["decision_tree"]["question"] == "operation"


def test_next_task_for_annotator_with_split_shells(client):
    client.post("/corpora", json=CORPUS)
    client.post("/tasks/p1/assignment", json={"stage": "selection", "annotators": ANNOTATORS})
    tasks = client.get("/tasks", params={"annotator": "a1"}).json()
    assert [t["pair"] for t in tasks] == ["p1"]
    view = client.get("/tasks/p1").json()
    assert view["state"] == "selecting"
    # simplified side has two sentences -> one auto-detected split shell
    assert len(view["split_shells"]) == 1
    assert view["split_shells"][0]["operation"] == "split"
    assert view["pair_data"]["simplified"]["tokens"][0]["surface"] == "The"


def test_selection_conflict_on_identical_repost(client):
    client.post("/corpora", json=CORPUS)
    client.post("/tasks/p1/assignment", json={"stage": "selection", "annotators": ANNOTATORS})
    body = {"revision": 1, "submitted_at": STAMP, "edits": SELECTION_EDITS}
    first = client.post("/tasks/p1/selection", json=body, headers={"X-Annotator": "a1"})
    assert first.status_code == 200
    assert first.json()["task"]["selection"]["received"] == ["a1"]
    second = client.post("/tasks/p1/selection", json=body, headers={"X-Annotator": "a1"})
    assert second.status_code == 409
    assert second.json()["error"] == "RevisionConflictError"


def test_validation_violations_are_machine_readable(client):
    client.post("/corpora", json=CORPUS)
    client.post("/tasks/p1/assignment", json={"stage": "selection", "annotators": ANNOTATORS})
    bad = {
        "revision": 1,
        "edits": [
            {
                "id": "bad",
                "operation": "deletion",
                "spans": [{"side": "simplified", "start": 0, "end": 3}],
            }
        ],
    }
    response = client.post("/tasks/p1/selection", json=bad, headers={"X-Annotator": "a1"})
    assert response.status_code == 400
    body = response.json()
    assert body["error"] == "EditValidationError"
    assert body["violations"][0]["edit_id"] == "bad"
    assert body["violations"][0]["code"] == "operation.sides"


def test_unassigned_annotator_is_403(client):
    client.post("/corpora", json=CORPUS)
    client.post("/tasks/p1/assignment", json={"stage": "selection", "annotators": ANNOTATORS})
    response = client.post(
        "/tasks/p1/selection",
        json={"revision": 1, "edits": []},
        headers={"X-Annotator": "stranger"},
    )
    assert response.status_code == 403


def test_adjudicator_overlap_rejected(client):
    client.post("/corpora", json=CORPUS)
    client.post("/tasks/p1/assignment", json={"stage": "selection", "annotators": ANNOTATORS})
    for annotator in ANNOTATORS:
        client.post(
            "/tasks/p1/selection",
            json={"revision": 1, "edits": SELECTION_EDITS},
            headers={"X-Annotator": annotator},
        )
    response = client.post(
        "/tasks/p1/assignment", json={"stage": "adjudication", "annotators": ["a1"]}
    )
    assert response.status_code == 409
    assert "adjudicator" in response.json()["message"]


def test_full_flow_reaches_complete_and_reports(client):
    final = drive_flow(client)
    assert final["task"]["state"] == "complete"
    assert final["task"]["adjudicated_edits"][0]["id"] == "final-1"

    scores = client.get("/reports/scores").json()
    assert scores["partial"] is True  # p2 untouched
    assert len(scores["rows"]) == 1
    assert scores["rows"][0]["pair"] == "p1"
    assert scores["rows"][0]["total"] > 0

    agreement = client.get("/reports/agreement", params={"classes": "deletion"}).json()
    assert agreement["partial"] is True
    row = agreement["classes"][0]
    assert row["class"] == "deletion"
    assert row["alpha"] == 1.0

    qe = client.get("/export/qe")
    assert qe.status_code == 200
    lines = [json.loads(line) for line in qe.text.strip().split("\n")]
    assert lines[0]["record"] == "header"
    assert lines[1]["pair"] == "p1"

    dataset = client.get("/export/dataset").json()
    assert len(dataset["records"]) == 7
    assert dataset["final"][0]["pair"] == "p1"


def test_adjudication_view_shows_three_selections(client):
    client.post("/corpora", json=CORPUS)
    client.post("/tasks/p1/assignment", json={"stage": "selection", "annotators": ANNOTATORS})
    for annotator in ANNOTATORS:
        client.post(
            "/tasks/p1/selection",
            json={"revision": 1, "edits": SELECTION_EDITS},
            headers={"X-Annotator": annotator},
        )
    view = client.get("/tasks/p1").json()
    assert view["state"] == "awaiting_adjudication"
    assert set(view["selections"]) == set(ANNOTATORS)
    assert view["selections"]["a1"][0]["id"] == "e1"


def test_endpoints_match_direct_store_calls(tmp_path):
    """The service is a thin adapter: identical inputs leave identical state."""
    http_store = Store(tmp_path / "http")
    client = TestClient(create_app(http_store))
    drive_flow(client)

    direct = Store(tmp_path / "direct")
    direct.import_corpus(CORPUS)
    from salsa_eval.serialization import parse_annotations

    direct.assign("p1", Stage.SELECTION, ANNOTATORS)
    for annotator in ANNOTATORS:
        (record,) = parse_annotations(
            {
                "annotations": [
                    {
                        "pair": "p1",
                        "annotator": annotator,
                        "stage": "selection",
                        "revision": 1,
                        "submitted_at": STAMP,
                        "edits": SELECTION_EDITS,
                    }
                ]
            }
        )
        direct.submit(record)
    direct.assign("p1", Stage.ADJUDICATION, ["a4"])
    (record,) = parse_annotations(
        {
            "annotations": [
                {
                    "pair": "p1",
                    "annotator": "a4",
                    "stage": "adjudication",
                    "revision": 1,
                    "submitted_at": STAMP,
                    "edits": [
                        {
                            "id": "final-1",
                            "operation": "deletion",
                            "spans": [{"side": "complex", "start": 4, "end": 15}],
                        }
                    ],
                }
            ]
        }
    )
    direct.submit(record)
    direct.assign("p1", Stage.CLASSIFICATION, [])
    for annotator in ANNOTATORS:
        (record,) = parse_annotations(
            {
                "annotations": [
                    {
                        "pair": "p1",
                        "annotator": annotator,
                        "stage": "classification",
                        "revision": 1,
                        "submitted_at": STAMP,
                        "classifications": CLASSIFICATION,
                    }
                ]
            }
        )
        direct.submit(record)

    assert client.get("/export/dataset").json() == direct.export_dataset()
    assert http_store.task("p1") == direct.task("p1")


def test_composite_selection_through_http(client):
    client.post("/corpora", json=CORPUS)
    client.post("/tasks/p1/assignment", json={"stage": "selection", "annotators": ANNOTATORS})
    # unpopulated shell bounces with a machine-readable violation
    shell = {"id": "p1/split-1", "operation": "split", "spans": [], "constituents": []}
    response = client.post(
        "/tasks/p1/selection",
        json={"revision": 1, "edits": [shell]},
        headers={"X-Annotator": "a1"},
    )
    assert response.status_code == 400
    assert response.json()["violations"][0]["code"] == "composite.constituents"

    populated = {
        "id": "p1/split-1",
        "operation": "split",
        "spans": [
            {"side": "complex", "start": 4, "end": 15},
            {"side": "simplified", "start": 14, "end": 15},
        ],
        "constituents": [
            {
                "id": "p1/split-1/c1",
                "operation": "deletion",
                "spans": [{"side": "complex", "start": 4, "end": 15}],
            },
            {
                "id": "p1/split-1/c2",
                "operation": "insertion",
                "spans": [{"side": "simplified", "start": 14, "end": 15}],
            },
        ],
    }
    response = client.post(
        "/tasks/p1/selection",
        json={"revision": 2, "edits": [populated]},
        headers={"X-Annotator": "a1"},
    )
    assert response.status_code == 200, response.text
    stored = client.get("/export/dataset").json()["records"]
    (record,) = [r for r in stored if r["annotator"] == "a1" and r["revision"] == 2]
    assert len(record["edits"][0]["constituents"]) == 2


def test_export_dataset_corpus_filter(client):
    client.post("/corpora", json=CORPUS)
    other = {
        "id": "second",
        "pairs": [
            {
                "id": "q1",
                "system": "sys-c",
                "complex": {"text": "Another sentence here."},
                "simplified": {"text": "Another one."},
            }
        ],
    }
    client.post("/corpora", json=other)
    full = client.get("/export/dataset").json()
    assert {c["id"] for c in full["corpora"]} == {"demo", "second"}
    filtered = client.get("/export/dataset", params={"corpus": "second"}).json()
    assert [c["id"] for c in filtered["corpora"]] == ["second"]
    assert {t["pair"] for t in filtered["tasks"]} == {"q1"}


def test_missing_annotator_header_is_422(client):
    client.post("/corpora", json=CORPUS)
    response = client.post("/tasks/p1/selection", json={"revision": 1, "edits": []})
    assert response.status_code == 422


def test_unknown_task_is_404(client):
    response = client.get("/tasks/ghost")
    assert response.status_code == 404
    assert response.json()["error"] == "NotFoundError"
