import math

import pytest
from fastapi.testclient import TestClient

from ontosim.measures import MeasureId, similarity
from ontosim.service import create_app

LIN_CD = 0.6309297535714574
LIN_CA = 2 * math.log(2) / (math.log(3) + math.log(2))


@pytest.fixture(scope="module")
def client(toy_index):
    return TestClient(create_app(toy_index, max_batch=10))


class TestHealth:
    def test_reports_index_globals(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"
        assert body["conceptCount"] == 6
        assert body["maxDepth"] == 3
        assert body["maxIc"] == pytest.approx(math.log(3), abs=1e-12)
        assert body["indexVersion"].startswith("ontosim-index/")

    def test_unknown_path_404(self, client):
        assert client.get("/nope").status_code == 404


class TestSimilarity:
    def test_lin_pair(self, client):
        r = client.get("/similarity", params={"m": "LIN", "c1": "C", "c2": "D"})
        assert r.status_code == 200
        assert r.json() == {"measure": "INTRINSIC_LIN", "c1": "C", "c2": "D",
                            "score": LIN_CD}

    def test_sokal_identity(self, client):
        r = client.get("/similarity",
                       params={"m": "SOKAL", "c1": "C", "c2": "C"})
        assert r.json()["score"] == 1.0

    def test_unknown_measure_400(self, client):
        r = client.get("/similarity", params={"m": "FOO", "c1": "C", "c2": "D"})
        assert r.status_code == 400
        assert "FOO" in r.json()["error"]

    def test_unknown_concept_404_names_id(self, client):
        r = client.get("/similarity", params={"m": "LIN", "c1": "C", "c2": "qq"})
        assert r.status_code == 404
        assert "qq" in r.json()["error"]


class TestBatch:
    def test_order_is_pairs_cross_measures(self, client, toy_index):
        r = client.post("/batch", json={
            "measures": ["SOKAL", "LIN"],  # out of enum order on purpose
            "pairs": [["C", "D"], ["C", "C"], ["D", "E"]]})
        assert r.status_code == 200
        records = r.json()["records"]
        assert len(records) == 6
        assert [(x["c1"], x["c2"], x["measure"]) for x in records] == [
            ("C", "D", "INTRINSIC_LIN"), ("C", "D", "SOKAL"),
            ("C", "C", "INTRINSIC_LIN"), ("C", "C", "SOKAL"),
            ("D", "E", "INTRINSIC_LIN"), ("D", "E", "SOKAL")]
        for x in records:
            direct = similarity(toy_index, MeasureId(x["measure"]),
                                x["c1"], x["c2"])
            assert x["score"] == direct  # bit-for-bit

    def test_single_pair_equals_similarity_endpoint(self, client):
        batch = client.post("/batch", json={
            "measure": "WUPALMER", "pairs": [["C", "E"]]}).json()
        single = client.get("/similarity",
                            params={"m": "WUPALMER", "c1": "C", "c2": "E"}).json()
        assert batch["records"][0]["score"] == single["score"]

    def test_over_limit_413(self, client):
        pairs = [["C", "D"]] * 11  # app fixture caps at 10
        r = client.post("/batch", json={"measure": "LIN", "pairs": pairs})
        assert r.status_code == 413

    def test_bad_ids_404_all_listed_no_partial(self, client):
        r = client.post("/batch", json={
            "measure": "LIN",
            "pairs": [["C", "xx"], ["yy", "D"], ["C", "D"]]})
        assert r.status_code == 404
        body = r.json()
        assert "records" not in body
        assert "xx" in body["error"] and "yy" in body["error"]

    def test_no_measure_400(self, client):
        r = client.post("/batch", json={"pairs": [["C", "D"]]})
        assert r.status_code == 400

    def test_repeat_requests_identical(self, client):
        payload = {"measures": ["LCH", "SOKAL"],
                   "pairs": [["A", "B"], ["C", "E"], ["D", "D"]]}
        first = client.post("/batch", json=payload).json()
        for _ in range(3):
            assert client.post("/batch", json=payload).json() == first


class TestNeighbors:
    def test_top_two_for_c(self, client):
        r = client.get("/neighbors", params={"m": "LIN", "c": "C", "k": 2})
        assert r.status_code == 200
        neighbors = r.json()["neighbors"]
        assert neighbors[0] == {"id": "C", "score": 1.0}
        assert neighbors[1]["id"] == "A"
        assert neighbors[1]["score"] == pytest.approx(LIN_CA, abs=1e-15)

    def test_k_zero_400(self, client):
        r = client.get("/neighbors", params={"m": "LIN", "c": "C", "k": 0})
        assert r.status_code == 400

    def test_k_above_count_ranks_all(self, client):
        r = client.get("/neighbors", params={"m": "LIN", "c": "C", "k": 100})
        neighbors = r.json()["neighbors"]
        assert len(neighbors) == 6
        # zero-score block ordered by ascending id
        tail = [n["id"] for n in neighbors if n["score"] == 0.0]
        assert tail == sorted(tail)

    def test_scores_descending(self, client):
        r = client.get("/neighbors",
                       params={"m": "WUPALMER", "c": "E", "k": 6})
        scores = [n["score"] for n in r.json()["neighbors"]]
        assert scores == sorted(scores, reverse=True)

    def test_unknown_concept_404(self, client):
        r = client.get("/neighbors", params={"m": "LIN", "c": "qq", "k": 2})
        assert r.status_code == 404
