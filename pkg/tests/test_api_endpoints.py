import asyncio

AMBIGUOUS = {"q": 4, "matrix": [["1", "0"], ["1/2", "1/2"], ["0", "1"], ["0", "1"]]}
MOD4 = {"builtin": "additive", "noise": ["1/2", "0", "1/2", "0"]}
REPETITION_SCAN = {
    "code": {"q": 2, "generator": [[1, 1]]},
    "channel": {"builtin": "identity", "q": 2},
    "t_grid": ["0", "1/2", "1"],
}


def test_rate(client):
    r = client.get("/codes/rate", params={"q": 3, "r": 2, "m": 2})
    assert r.status_code == 200
    body = r.json()
    assert body["exact"] == "2/3"
    assert 0.0 < body["gaussian"] < 1.0


def test_rate_non_prime_alphabet(client):
    r = client.get("/codes/rate", params={"q": 6, "r": 1, "m": 2})
    assert r.status_code == 422
    assert r.json()["code"] == "non_prime"


def test_rate_rejects_bad_query(client):
    assert client.get("/codes/rate", params={"q": 1, "r": 1, "m": 2}).status_code == 422


def test_puncture_check(client):
    r = client.post("/codes/puncture-check", json={"q": 2, "r": 1, "m": 3, "k": 1})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert body["expected_multiplicity"] == 2
    # RM_2(1,3) has 16 words over the 8 of RM_2(1,2)
    assert body["multiplicities"] == {"2": 8}


def test_overlap(client):
    r = client.post("/channels/overlap", json={"channel": AMBIGUOUS})
    assert r.status_code == 200
    body = r.json()
    assert body["trace"] == "26/15"
    assert body["Q"][0] == ["2/3", "1/3", "0/1", "0/1"]
    assert body["exact"] is True
    assert 0.0 < body["capacity"] < 2.0


def test_overlap_rejects_non_stochastic_rows(client):
    bad = {"matrix": [["1/2", "1/3"], ["0", "1"]]}
    r = client.post("/channels/overlap", json={"channel": bad})
    assert r.status_code == 422
    assert r.json()["code"] == "invalid_channel"


def test_symmetry_of_mod4_noise(client):
    r = client.post("/channels/symmetry", json={"channel": MOD4})
    assert r.status_code == 200
    body = r.json()
    assert body["order"] == 8
    assert len(body["elements"]) == 8
    assert body["transitivity"] == "transitive"
    assert body["trace"] == "2/1"
    assert body["delta"] == "0/1"
    assert body["trace_case"] == "not_applicable"
    assert body["inequality_holds"] is False


def test_coset_scan_is_cached(client, report_store):
    first = client.post("/coset/scan", json=REPETITION_SCAN)
    assert first.status_code == 200
    body = first.json()
    assert body["delta_avg"] == "1/12"
    assert [row["delta"] for row in body["rows"]] == ["0/1", "1/8", "0/1"]
    keys = asyncio.run(report_store.keys("coset_scan:*"))
    assert len(keys) == 1
    second = client.post("/coset/scan", json=REPETITION_SCAN)
    assert second.json() == body
    assert len(asyncio.run(report_store.keys("coset_scan:*"))) == 1


def test_coset_scan_above_budget(client, monkeypatch):
    monkeypatch.setenv("GRMLAB_EXACT_BUDGET", "10")
    payload = {
        "code": {"q": 2, "r": 1, "m": 2},
        "channel": {"builtin": "bsc", "param": "1/10"},
    }
    r = client.post("/coset/scan", json=payload)
    assert r.status_code == 422
    assert r.json()["code"] == "too_large_for_exact"


def test_coset_scan_rejects_bad_grid(client):
    payload = dict(REPETITION_SCAN, t_grid=["3/2"])
    assert client.post("/coset/scan", json=payload).status_code == 422


def test_verify(client, report_store):
    config = {"q_list": [2], "instances": 2, "code_instances": 1, "checks": ["ser_overlap"]}
    r = client.post("/verify", json=config)
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert [rep["check"] for rep in body["reports"]] == ["ser_overlap"]
    assert client.post("/verify", json=config).json() == body
    assert len(asyncio.run(report_store.keys("verify:*"))) == 1


def test_verify_unknown_check(client):
    r = client.post("/verify", json={"q_list": [2], "checks": ["no_such_check"]})
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_check"
