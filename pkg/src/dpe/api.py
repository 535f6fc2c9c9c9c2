"""Read-only HTTP API over an immutable store snapshot.

All responses within one request derive from the snapshot captured at
request start; snapshot replacement (admin reload) is a single atomic
reference swap, so in-flight requests finish on the snapshot they started
with.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import PlainTextResponse

from . import analytics
from .cards import card_to_dict, generate_card, render_markdown
from .filtering import CriteriaError, FilterCriteria, apply_filter, explain
from .ingest import Store, load_store
from .licenses import LicenseRegistry, Policy
from .query import criteria_from_params
from .schema import load_taxonomies, record_to_dict, serialize_record

DEFAULT_PAGE_SIZE = 100
MAX_PAGE_SIZE = 1000

_NON_CRITERIA_PARAMS = frozenset(
    ["page", "page_size", "format", "denominator", "aggregator", "axis", "estimator"]
)


@dataclass(frozen=True)
class ApiSnapshot:
    store: Store
    version: str


def _snapshot_of(store: Store) -> ApiSnapshot:
    digest = hashlib.sha256()
    for record in store.records:
        digest.update(serialize_record(record).encode("utf-8"))
    digest.update(store.policy_fingerprint.encode("utf-8"))
    return ApiSnapshot(store=store, version=digest.hexdigest()[:16])


class SnapshotHolder:
    def __init__(self):
        self.snapshot: Optional[ApiSnapshot] = None

    def get(self) -> ApiSnapshot:
        snapshot = self.snapshot  # single read: atomic swap point
        if snapshot is None:
            raise HTTPException(status_code=503, detail="store snapshot is reloading")
        return snapshot


def _criteria_from_request(request: Request) -> FilterCriteria:
    params: Dict[str, str] = {}
    for key, value in request.query_params.items():
        if key in _NON_CRITERIA_PARAMS:
            continue
        params[key] = value
    try:
        return criteria_from_params(params)
    except CriteriaError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def create_app(
    store_paths: List[str],
    registry: Optional[LicenseRegistry] = None,
    policy: Optional[Policy] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="Data Provenance Explorer API", version="1")
    holder = SnapshotHolder()
    holder.snapshot = _snapshot_of(load_store(store_paths, registry=registry, policy=policy))

    @app.get("/v1/datasets")
    def list_datasets(request: Request, page: int = 1, page_size: int = DEFAULT_PAGE_SIZE):
        snapshot = holder.get()
        if page < 1 or page_size < 1 or page_size > MAX_PAGE_SIZE:
            raise HTTPException(status_code=400, detail="bad page/page_size")
        criteria = _criteria_from_request(request)
        selection = apply_filter(snapshot.store, criteria)
        start = (page - 1) * page_size
        items = []
        for record_id in selection.included[start : start + page_size]:
            record = snapshot.store.by_id[record_id]
            categorization = selection.categorization_of(record_id)
            item = record_to_dict(record)
            item["rights"] = {
                "use": categorization.profile.use.value,
                "attribution_required": categorization.profile.attribution_required,
                "share_alike_required": categorization.profile.share_alike_required,
                "needs_review": categorization.needs_review,
            }
            items.append(item)
        return {"version": snapshot.version, "total": len(selection.included), "items": items}

    @app.get("/v1/datasets/{record_id:path}")
    def dataset_detail(record_id: str, request: Request):
        snapshot = holder.get()
        store = snapshot.store
        if record_id not in store.by_id:
            raise HTTPException(status_code=404, detail=f"unknown dataset id: {record_id}")
        criteria = _criteria_from_request(request)
        record = store.by_id[record_id]
        from .licenses import categorize_dataset, detect_conflicts

        categorization = categorize_dataset(record, store.registry, criteria.evidence_policy)
        failed = explain(record, criteria, store.registry)
        return {
            "version": snapshot.version,
            "record": record_to_dict(record),
            "rights": {
                "use": categorization.profile.use.value,
                "attribution_required": categorization.profile.attribution_required,
                "share_alike_required": categorization.profile.share_alike_required,
                "needs_review": categorization.needs_review,
            },
            "applied_licenses": [
                {
                    "raw_name": ev.raw_name,
                    "canonical_id": ev.canonical_id,
                    "url": ev.url,
                    "evidence_source": ev.evidence_source,
                    "author_stated": ev.author_stated,
                }
                for ev in categorization.applied
            ],
            "conflicts": [
                {"kind": c.kind, "first_id": c.first_id, "second_id": c.second_id}
                for c in detect_conflicts(categorization.applied, store.registry)
            ],
            "excluded_because": [
                {"clause": f.clause, "detail": f.detail} for f in failed
            ],
        }

    @app.get("/v1/summary")
    def summary(request: Request):
        snapshot = holder.get()
        criteria = _criteria_from_request(request)
        selection = apply_filter(snapshot.store, criteria)
        categories = analytics.use_category_counts(selection)
        licenses = analytics.license_distribution(selection, "licenses")
        language_counts: Dict[str, int] = {}
        task_counts: Dict[str, int] = {}
        for record in selection.records:
            for code in record.languages:
                language_counts[code] = language_counts.get(code, 0) + 1
            for task in record.task_categories:
                task_counts[task] = task_counts.get(task, 0) + 1
        return {
            "version": snapshot.version,
            "total": len(selection.included),
            "use_categories": [
                {"category": c.category.value, "count": c.count, "percentage": c.percentage}
                for c in categories
            ],
            "licenses": [
                {"key": e.key, "count": e.count, "share": e.share} for e in licenses
            ],
            "languages": dict(sorted(language_counts.items())),
            "tasks": dict(sorted(task_counts.items())),
        }

    @app.get("/v1/card")
    def card(request: Request, format: str = "structured"):
        snapshot = holder.get()
        if format not in ("structured", "markdown"):
            raise HTTPException(status_code=400, detail="format must be structured or markdown")
        criteria = _criteria_from_request(request)
        selection = apply_filter(snapshot.store, criteria)
        provenance_card = generate_card(selection)
        if format == "markdown":
            return PlainTextResponse(render_markdown(provenance_card))
        body = card_to_dict(provenance_card)
        body["version"] = snapshot.version
        return body

    @app.get("/v1/analytics/licenses")
    def analytics_licenses(request: Request, denominator: str = "licenses"):
        snapshot = holder.get()
        criteria = _criteria_from_request(request)
        selection = apply_filter(snapshot.store, criteria)
        try:
            entries = analytics.license_distribution(selection, denominator)
        except analytics.AnalyticsError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "version": snapshot.version,
            "denominator": denominator,
            "entries": [{"key": e.key, "count": e.count, "share": e.share} for e in entries],
        }

    @app.get("/v1/analytics/categories")
    def analytics_categories(request: Request):
        snapshot = holder.get()
        criteria = _criteria_from_request(request)
        selection = apply_filter(snapshot.store, criteria)
        counts = analytics.use_category_counts(selection)
        return {
            "version": snapshot.version,
            "categories": [
                {"category": c.category.value, "count": c.count, "percentage": c.percentage}
                for c in counts
            ],
        }

    @app.get("/v1/analytics/agreement")
    def analytics_agreement(aggregator: str = "github"):
        snapshot = holder.get()
        if aggregator not in ("github", "huggingface", "paperswithcode"):
            raise HTTPException(status_code=400, detail=f"unknown aggregator: {aggregator}")
        matrix = analytics.agreement_matrix(snapshot.store, aggregator)
        rates = analytics.error_rates(matrix)
        return {
            "version": snapshot.version,
            "aggregator": aggregator,
            "considered": matrix.considered,
            "rows": {
                row.value: matrix.row(row) for row in analytics.USE_CATEGORY_ORDER
            },
            "totals": matrix.totals(),
            "rates": {
                "omission": rates.omission_rate,
                "exact_match": rates.exact_match_rate,
                "too_permissive": rates.too_permissive_rate,
            },
        }

    @app.get("/v1/analytics/diversity")
    def analytics_diversity(estimator: str = "knn"):
        snapshot = holder.get()
        try:
            report = analytics.diversity_report(snapshot.store, estimator=estimator)
        except analytics.AnalyticsError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "version": snapshot.version,
            "groups": {
                group: {
                    feature: {
                        "mean": stat.mean,
                        "standard_error": stat.standard_error,
                        "entropy": stat.entropy,
                    }
                    for feature, stat in features.items()
                }
                for group, features in report.groups.items()
            },
        }

    @app.get("/v1/analytics/breakdown")
    def analytics_breakdown(axis: str = "year"):
        snapshot = holder.get()
        try:
            buckets = analytics.breakdown(snapshot.store, axis)
        except analytics.AnalyticsError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "version": snapshot.version,
            "axis": axis,
            "buckets": {
                key: {
                    "total": bucket.total,
                    "by_category": {
                        category.value: count for category, count in bucket.by_category.items()
                    },
                    "nc_ao_share": bucket.nc_ao_share,
                }
                for key, bucket in buckets.items()
            },
        }

    @app.get("/v1/analytics/representation")
    def analytics_representation():
        snapshot = holder.get()
        table = analytics.CountryLanguageTable.default()
        scores = analytics.representation_scores(snapshot.store, table)
        return {"version": snapshot.version, "scores": scores}

    @app.get("/v1/meta/taxonomies")
    def meta_taxonomies():
        snapshot = holder.get()
        taxonomies = load_taxonomies()
        return {
            "version": snapshot.version,
            "task_categories": sorted(taxonomies.task_categories),
            "source_domains": sorted(taxonomies.source_domains),
            "formats": sorted(taxonomies.formats),
        }

    @app.get("/v1/meta/registry")
    def meta_registry():
        snapshot = holder.get()
        return {
            "version": snapshot.version,
            "entries": [
                {
                    "canonical_id": entry.canonical_id,
                    "display_name": entry.display_name,
                    "aliases": sorted(entry.aliases),
                    "profile": {
                        "use": entry.profile.use.value,
                        "attribution_required": entry.profile.attribution_required,
                        "share_alike_required": entry.profile.share_alike_required,
                    },
                    "reference_url": entry.reference_url,
                    "is_custom": entry.is_custom,
                    "is_model_terms": entry.is_model_terms,
                    "needs_review": entry.needs_review,
                }
                for entry in snapshot.store.registry.entries()
            ],
        }

    @app.get("/v1/meta/version")
    def meta_version():
        snapshot = holder.get()
        return {"version": snapshot.version, "records": len(snapshot.store)}

    @app.post("/v1/admin/reload")
    def admin_reload(request: Request):
        client = request.client.host if request.client else ""
        if client not in ("127.0.0.1", "::1", "testclient", "localhost"):
            raise HTTPException(status_code=403, detail="reload is localhost-only")
        new_store = load_store(store_paths, registry=registry, policy=policy)
        holder.snapshot = _snapshot_of(new_store)  # atomic swap
        return {"version": holder.snapshot.version, "records": len(new_store)}

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
