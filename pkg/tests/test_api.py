import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from dpe.api import create_app
from dpe.cli import main
from dpe.filtering import apply_filter
from dpe.query import criteria_from_params

from .conftest import FIXTURES

SAMPLE_CRITERIA = [
    {},
    {"allow_use": "commercial"},
    {"allow_use": "commercial,unspecified"},
    {"allow_use": "non-commercial,academic-only"},
    {"forbid_attribution": "true"},
    {"forbid_share_alike": "true"},
    {"exclude_model_generated": "true"},
    {"exclude_generated_by": "openai"},
    {"require_languages": "en"},
    {"require_tasks": "Translation,Summarization"},
    {"year_min": "2020", "year_max": "2022"},
    {"allow_use": "commercial", "forbid_attribution": "true"},
    {"openai_terms_as": "commercial"},
    {"accept_evidence": "paper,collection,github-data,huggingface,github-repo,paperswithcode"},
]


@pytest.fixture(scope="module")
def small_client():
    app = create_app([str(FIXTURES / "small")])
    with TestClient(app) as client:
        yield client


@pytest.fixture(scope="module")
def table3_client():
    app = create_app([str(FIXTURES / "table3")])
    with TestClient(app) as client:
        yield client


class TestDatasets:
    def test_envelope_shape(self, small_client):
        body = small_client.get("/v1/datasets").json()
        assert set(body) == {"version", "total", "items"}
        assert body["total"] == 3
        assert [item["id"] for item in body["items"]] == [
            "alpaca/alpaca",
            "squad/squad-v1",
            "wiki-mix/wiki-mix",
        ]
        assert body["items"][0]["rights"]["use"] == "non-commercial"

    def test_filtering_via_query_params(self, small_client):
        body = small_client.get(
            "/v1/datasets", params={"allow_use": "non-commercial"}
        ).json()
        assert body["total"] == 1
        assert body["items"][0]["id"] == "alpaca/alpaca"

    def test_pagination(self, table3_client):
        first = table3_client.get("/v1/datasets", params={"page_size": 10}).json()
        second = table3_client.get(
            "/v1/datasets", params={"page_size": 10, "page": 2}
        ).json()
        assert first["total"] == second["total"] == 700
        assert len(first["items"]) == len(second["items"]) == 10
        assert first["items"][-1]["id"] < second["items"][0]["id"]

    def test_bad_pagination_rejected(self, small_client):
        assert small_client.get("/v1/datasets", params={"page": 0}).status_code == 400
        assert (
            small_client.get("/v1/datasets", params={"page_size": 5000}).status_code
            == 400
        )

    def test_unknown_param_names_parameter(self, small_client):
        response = small_client.get("/v1/datasets", params={"allow_usw": "commercial"})
        assert response.status_code == 400
        assert "allow_usw" in response.json()["detail"]

    def test_detail_with_slash_id(self, small_client):
        body = small_client.get("/v1/datasets/alpaca/alpaca").json()
        assert body["record"]["id"] == "alpaca/alpaca"
        assert body["rights"]["use"] == "non-commercial"
        assert body["applied_licenses"][0]["canonical_id"] == "cc-by-nc-4.0"
        assert body["excluded_because"] == []

    def test_detail_reports_failed_clauses(self, small_client):
        body = small_client.get(
            "/v1/datasets/alpaca/alpaca", params={"allow_use": "commercial"}
        ).json()
        clauses = [f["clause"] for f in body["excluded_because"]]
        assert clauses == ["use-category"]

    def test_detail_surfaces_conflicts(self, small_client):
        body = small_client.get("/v1/datasets/wiki-mix/wiki-mix").json()
        assert [c["kind"] for c in body["conflicts"]] == ["copyleft-clash"]

    def test_unknown_id_404(self, small_client):
        assert small_client.get("/v1/datasets/no/such").status_code == 404


class TestAnalyticsEndpoints:
    def test_summary(self, small_client):
        body = small_client.get("/v1/summary").json()
        assert body["total"] == 3
        categories = {c["category"]: c["count"] for c in body["use_categories"]}
        assert categories["non-commercial"] == 1

    def test_agreement_rates(self, small_client):
        body = small_client.get(
            "/v1/analytics/agreement", params={"aggregator": "github"}
        ).json()
        assert body["considered"] == 3
        assert set(body["rates"]) == {"omission", "exact_match", "too_permissive"}
        assert small_client.get(
            "/v1/analytics/agreement", params={"aggregator": "gitlab"}
        ).status_code == 400

    def test_breakdown_bad_axis(self, small_client):
        assert (
            small_client.get("/v1/analytics/breakdown", params={"axis": "creator"}).status_code
            == 400
        )

    def test_meta_endpoints(self, small_client):
        version = small_client.get("/v1/meta/version").json()
        assert version["records"] == 3
        taxonomies = small_client.get("/v1/meta/taxonomies").json()
        assert "Question Answering" in taxonomies["task_categories"]
        registry = small_client.get("/v1/meta/registry").json()
        assert any(e["canonical_id"] == "cc-by-nc-4.0" for e in registry["entries"])


class TestConsistency:
    def test_reads_are_idempotent(self, small_client):
        first = small_client.get("/v1/summary", params={"allow_use": "commercial"})
        second = small_client.get("/v1/summary", params={"allow_use": "commercial"})
        assert first.content == second.content

    def test_version_stable_until_reload(self, small_client):
        before = small_client.get("/v1/meta/version").json()["version"]
        again = small_client.get("/v1/meta/version").json()["version"]
        assert before == again
        reload_body = small_client.post("/v1/admin/reload").json()
        assert reload_body["version"] == before  # same files, same content hash

    def test_card_markdown_matches_cli(self, small_client):
        api_text = small_client.get("/v1/card", params={"format": "markdown"}).text
        cli = CliRunner().invoke(
            main, ["card", "--store", str(FIXTURES / "small")]
        )
        assert api_text == cli.stdout

    def test_card_structured_entry_count(self, small_client):
        body = small_client.get(
            "/v1/card", params={"allow_use": "non-commercial"}
        ).json()
        assert [e["id"] for e in body["entries"]] == ["alpaca/alpaca"]

    @pytest.mark.parametrize("params", SAMPLE_CRITERIA)
    def test_totals_match_library_and_cli(self, params, table3_client, table3_store):
        criteria = criteria_from_params(params)
        expected = len(apply_filter(table3_store, criteria).included)

        body = table3_client.get("/v1/datasets", params=dict(params, page_size=1)).json()
        assert body["total"] == expected

        flags = ["filter", "--store", str(FIXTURES / "table3"), "--count"]
        for category in params.get("allow_use", "").split(","):
            if category:
                flags += ["--allow-use", category]
        if params.get("forbid_attribution"):
            flags += ["--forbid-attribution"]
        if params.get("forbid_share_alike"):
            flags += ["--forbid-share-alike"]
        if params.get("exclude_model_generated"):
            flags += ["--exclude-model-generated"]
        for provider in params.get("exclude_generated_by", "").split(","):
            if provider:
                flags += ["--exclude-generated-by", provider]
        for code in params.get("require_languages", "").split(","):
            if code:
                flags += ["--require-languages", code]
        for task in params.get("require_tasks", "").split(","):
            if task:
                flags += ["--require-tasks", task]
        if "year_min" in params:
            flags += ["--year-min", params["year_min"], "--year-max", params["year_max"]]
        if "openai_terms_as" in params:
            flags += ["--openai-terms-as", params["openai_terms_as"]]
        for source in params.get("accept_evidence", "").split(","):
            if source:
                flags += ["--accept-evidence", source]
        result = CliRunner().invoke(main, flags)
        assert result.exit_code == 0
        assert int(result.stdout.strip()) == expected


def test_app_serves_static_ui_when_directory_exists(tmp_path):
    (tmp_path / "index.html").write_text("<html>explorer</html>", encoding="utf-8")
    app = create_app([str(FIXTURES / "small")], ui_dir=str(tmp_path))
    with TestClient(app) as client:
        response = client.get("/ui/")
        assert response.status_code == 200
        assert "explorer" in response.text
