import pytest
from hypothesis import given, settings

from dpe.filtering import (
    ALL_USE_CATEGORIES,
    CriteriaError,
    FilterCriteria,
    apply_filter,
    explain,
)
from dpe.ingest import build_store
from dpe.licenses import UseCategory
from dpe.schema import parse_record

from .strategies import filter_criteria, record_stores, strengthened


def _three_records():
    """One commercial human-web record, one unlicensed model-generated
    record, one non-commercial human-web record."""
    return [
        parse_record(
            '{"id": "a/comm", "name": "comm", "collection": "a",'
            ' "licenses": [{"raw_name": "MIT", "evidence_source": "paper",'
            ' "author_stated": true}]}'
        ),
        parse_record(
            '{"id": "b/unspec", "name": "unspec", "collection": "b",'
            ' "origin": "model-generated", "generated_by": "openai", "licenses": []}'
        ),
        parse_record(
            '{"id": "c/nc", "name": "nc", "collection": "c",'
            ' "licenses": [{"raw_name": "CC BY-NC 4.0", "evidence_source": "paper",'
            ' "author_stated": true}]}'
        ),
    ]


def test_identity_filter_includes_everything(small_store):
    selection = apply_filter(small_store, FilterCriteria())
    assert selection.included == tuple(r.id for r in small_store.records)
    assert selection.exclusion_reasons == {}


def test_combined_clauses(registry):
    store = build_store(_three_records(), registry=registry)
    criteria = FilterCriteria(
        allowed_use=frozenset({UseCategory.COMMERCIAL, UseCategory.UNSPECIFIED}),
        exclude_generated_by=frozenset({"openai"}),
    )
    selection = apply_filter(store, criteria)
    assert selection.included == ("a/comm",)
    assert set(selection.exclusion_reasons) == {"b/unspec", "c/nc"}


def test_explain_matches_filter_outcome(registry):
    records = _three_records()
    store = build_store(records, registry=registry)
    criteria = FilterCriteria(
        allowed_use=frozenset({UseCategory.COMMERCIAL}),
        exclude_model_generated=True,
    )
    selection = apply_filter(store, criteria)
    assert selection.included == ("a/comm",)
    # The model-generated unlicensed record fails two clauses at once.
    clauses = [c.clause for c in explain(records[1], criteria, registry)]
    assert clauses == ["use-category", "model-generated"]
    assert explain(records[0], criteria, registry) == []


def test_year_range_excludes_undated_records(registry):
    dated = parse_record(
        '{"id": "a/dated", "name": "dated", "collection": "a",'
        ' "time_of_collection": "2021-06"}'
    )
    undated = parse_record('{"id": "a/undated", "name": "undated", "collection": "a"}')
    store = build_store([dated, undated], registry=registry)
    selection = apply_filter(
        store,
        FilterCriteria(
            allowed_use=ALL_USE_CATEGORIES, year_range=(2020, 2022)
        ),
    )
    assert selection.included == ("a/dated",)
    assert [c.clause for c in selection.exclusion_reasons["a/undated"]] == ["year"]


def test_invalid_year_range_rejected():
    with pytest.raises(CriteriaError):
        FilterCriteria(year_range=(2022, 2020))


def test_require_tasks_is_match_any(registry):
    record = parse_record(
        '{"id": "a/d", "name": "d", "collection": "a",'
        ' "task_categories": ["Translation"]}'
    )
    store = build_store([record], registry=registry)
    criteria = FilterCriteria(
        require_tasks=frozenset({"Translation", "Summarization"})
    )
    assert apply_filter(store, criteria).included == ("a/d",)


@settings(max_examples=60, deadline=None)
@given(record_stores(max_size=10), filter_criteria())
def test_selection_is_subset_and_partition(records, criteria):
    store = build_store(records)
    selection = apply_filter(store, criteria)
    included = set(selection.included)
    excluded = set(selection.exclusion_reasons)
    assert included <= {r.id for r in records}
    assert included.isdisjoint(excluded)
    assert included | excluded == {r.id for r in records}
    # every excluded record carries at least one failed clause
    assert all(selection.exclusion_reasons[i] for i in excluded)


@settings(max_examples=60, deadline=None)
@given(record_stores(max_size=10), filter_criteria().flatmap(
    lambda c: strengthened(c).map(lambda s: (c, s))
))
def test_stricter_criteria_never_widen(records, pair):
    loose, strict = pair
    store = build_store(records)
    assert set(apply_filter(store, strict).included) <= set(
        apply_filter(store, loose).included
    )


@settings(max_examples=40, deadline=None)
@given(record_stores(max_size=8), filter_criteria())
def test_explain_agrees_with_apply_filter(records, criteria):
    store = build_store(records)
    selection = apply_filter(store, criteria)
    for record in records:
        clauses = explain(record, criteria, store.registry)
        if record.id in selection.included:
            assert clauses == []
        else:
            assert tuple(clauses) == selection.exclusion_reasons[record.id]


def test_criteria_policy_overrides_store_cache(registry):
    record = parse_record(
        '{"id": "a/d", "name": "d", "collection": "a",'
        ' "licenses": [{"raw_name": "MIT", "evidence_source": "github-repo"}]}'
    )
    store = build_store([record], registry=registry)
    from dpe.licenses import Policy, WIDENED_EVIDENCE

    strict = apply_filter(
        store, FilterCriteria(allowed_use=frozenset({UseCategory.COMMERCIAL}))
    )
    assert strict.included == ()
    widened = apply_filter(
        store,
        FilterCriteria(
            allowed_use=frozenset({UseCategory.COMMERCIAL}),
            evidence_policy=Policy(accept_evidence=WIDENED_EVIDENCE),
        ),
    )
    assert widened.included == ("a/d",)
