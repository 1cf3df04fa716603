def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert "message" in response.json()


def test_shuffle(client):
    response = client.post("/api/v1/shuffle", json={"left": "x", "right": "y"})
    assert response.status_code == 200
    details = response.json()["results"][0]["details"]
    assert details["expression"] == "xy + q^-2 * yx"
    assert details["terms"] == [["xy", "1"], ["yx", "q^-2"]]


def test_shuffle_rejects_bad_input(client):
    assert client.post("/api/v1/shuffle", json={"left": "x$", "right": "y"}).status_code == 400
    assert client.post("/api/v1/shuffle", json={"left": "x", "right": "y", "method": "middle"}).status_code == 422


def test_apply(client):
    response = client.post("/api/v1/apply", json={"element": "1", "generator": "F0"})
    assert response.json()["results"][0]["details"]["expression"] == "x"
    response = client.post("/api/v1/apply", json={"element": "xy", "operator": "AstarL"})
    assert response.json()["results"][0]["details"]["expression"] == "y"


def test_apply_needs_exactly_one_map(client):
    body = {"element": "x", "generator": "F0", "operator": "AstarL"}
    assert client.post("/api/v1/apply", json=body).status_code == 400
    assert client.post("/api/v1/apply", json={"element": "x"}).status_code == 400


def test_dims_and_basis(client):
    table = client.get("/api/v1/dims", params={"space": "U", "max_degree": 3}).json()["results"][0]["details"]["table"]
    assert table[1][1] == 2
    assert client.get("/api/v1/dims", params={"max_degree": 40}).status_code == 400
    basis = client.get("/api/v1/basis", params={"r": 2, "s": 3, "listed": True}).json()["results"][0]["details"]
    assert basis["rendered"] == ["xyxyy + xyyxy"]


def test_matrix(client):
    response = client.post("/api/v1/matrix", json={"generator": "F1", "source": "1,0", "target": "1,1"})
    assert response.status_code == 200
    assert response.json()["results"][0]["details"]["rows"] == [["[2]_q"]]
    response = client.post("/api/v1/matrix", json={"generator": "F1", "source": "1,0", "target": "2,0"})
    assert response.status_code == 422


def test_genfunc(client):
    response = client.get("/api/v1/genfunc/p", params={"max_degree": 6})
    assert response.json()["results"][0]["details"]["coefficients"] == [1, 1, 2, 3, 5, 7, 11]
    assert client.get("/api/v1/genfunc/theta").status_code == 400


def test_verification_job(client):
    response = client.post("/api/v1/verifications", json={"suite": "highest-weight"})
    assert response.status_code == 201
    job = response.json()
    assert job["status"] == "queued"
    finished = client.get(f"/api/v1/verifications/{job['id']}").json()
    assert finished["status"] == "passed"
    assert finished["report"]["command"] == "verify highest-weight"


def test_verification_errors(client):
    assert client.post("/api/v1/verifications", json={"suite": "nosuch"}).status_code == 400
    assert client.post("/api/v1/verifications", json={"suite": "series", "max_degree": 13}).status_code == 422
    assert client.get("/api/v1/verifications/unknown").status_code == 404


def test_verification_with_word_length(client):
    response = client.post("/api/v1/verifications", json={"suite": "intertwiners", "max_degree": 4, "maxlen": 2})
    assert response.status_code == 201
    finished = client.get(f"/api/v1/verifications/{response.json()['id']}").json()
    assert finished["status"] == "passed"
    assert finished["report"]["params"]["maxlen"] == 2
    assert client.post("/api/v1/verifications", json={"suite": "intertwiners", "maxlen": 0}).status_code == 422
