"""Risk-tolerance filtering over a store, with per-record explanations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .ingest import Store
from .licenses import (
    Categorization,
    LicenseRegistry,
    Policy,
    UseCategory,
    categorize_dataset,
)
from .schema import DatasetRecord

ALL_USE_CATEGORIES: FrozenSet[UseCategory] = frozenset(UseCategory)


class CriteriaError(ValueError):
    pass


@dataclass(frozen=True)
class FilterCriteria:
    allowed_use: FrozenSet[UseCategory] = ALL_USE_CATEGORIES
    forbid_attribution_burden: bool = False
    forbid_share_alike: bool = False
    exclude_model_generated: bool = False
    exclude_generated_by: FrozenSet[str] = frozenset()
    exclude_creators: FrozenSet[str] = frozenset()
    exclude_source_domains: FrozenSet[str] = frozenset()
    require_languages: FrozenSet[str] = frozenset()
    require_tasks: FrozenSet[str] = frozenset()
    year_range: Optional[Tuple[int, int]] = None
    evidence_policy: Policy = Policy()

    def __post_init__(self):
        if self.year_range is not None and self.year_range[0] > self.year_range[1]:
            raise CriteriaError("year_range lo must be <= hi")


@dataclass(frozen=True)
class FailedClause:
    clause: str
    detail: str


@dataclass(frozen=True)
class Selection:
    store: Store
    included: Tuple[str, ...]
    criteria: FilterCriteria
    exclusion_reasons: Dict[str, Tuple[FailedClause, ...]] = field(default_factory=dict)

    @property
    def records(self) -> List[DatasetRecord]:
        return [self.store.by_id[record_id] for record_id in self.included]

    def categorization_of(self, record_id: str) -> Categorization:
        return _categorization_under(self.store, record_id, self.criteria)


def _categorization_under(
    store: Store, record_id: str, criteria: FilterCriteria
) -> Categorization:
    # Reuse the store cache when the criteria's policy matches the load policy.
    if criteria.evidence_policy == store.policy:
        return store.categorizations[record_id]
    return categorize_dataset(store.by_id[record_id], store.registry, criteria.evidence_policy)


def _failed_clauses(
    record: DatasetRecord, criteria: FilterCriteria, categorization: Categorization
) -> List[FailedClause]:
    failed: List[FailedClause] = []
    profile = categorization.profile

    if profile.use not in criteria.allowed_use:
        allowed = ",".join(sorted(c.value for c in criteria.allowed_use))
        failed.append(
            FailedClause("use-category", f"{profile.use.value} not in {{{allowed}}}")
        )
    if criteria.forbid_attribution_burden and profile.attribution_required:
        failed.append(FailedClause("attribution", "composed profile requires attribution"))
    if criteria.forbid_share_alike and profile.share_alike_required:
        failed.append(FailedClause("share-alike", "composed profile requires share-alike"))
    if criteria.exclude_model_generated and record.origin != "human-web":
        failed.append(FailedClause("model-generated", f"origin is {record.origin}"))
    if criteria.exclude_generated_by and record.generated_by in criteria.exclude_generated_by:
        failed.append(FailedClause("generated-by", f"generated by {record.generated_by}"))
    if criteria.exclude_creators:
        hits = sorted(set(record.creators) & criteria.exclude_creators)
        if hits:
            failed.append(FailedClause("creators", f"excluded creators: {', '.join(hits)}"))
    if criteria.exclude_source_domains:
        hits = sorted(set(record.source_domains) & criteria.exclude_source_domains)
        if hits:
            failed.append(
                FailedClause("source-domains", f"excluded domains: {', '.join(hits)}")
            )
    if criteria.require_languages and not (record.languages & criteria.require_languages):
        wanted = ",".join(sorted(criteria.require_languages))
        failed.append(FailedClause("languages", f"none of required languages {{{wanted}}}"))
    if criteria.require_tasks and not (set(record.task_categories) & criteria.require_tasks):
        wanted = ",".join(sorted(criteria.require_tasks))
        failed.append(FailedClause("tasks", f"none of required tasks {{{wanted}}}"))
    if criteria.year_range is not None:
        lo, hi = criteria.year_range
        if record.year is None:
            failed.append(FailedClause("year", "no time of collection recorded"))
        elif not (lo <= record.year <= hi):
            failed.append(FailedClause("year", f"{record.year} outside [{lo}, {hi}]"))
    return failed


def explain(
    record: DatasetRecord, criteria: FilterCriteria, registry: LicenseRegistry
) -> List[FailedClause]:
    """Empty list iff the record passes every active clause."""
    categorization = categorize_dataset(record, registry, criteria.evidence_policy)
    return _failed_clauses(record, criteria, categorization)


def apply_filter(store: Store, criteria: FilterCriteria) -> Selection:
    included: List[str] = []
    reasons: Dict[str, Tuple[FailedClause, ...]] = {}
    for record in store.records:  # already sorted by id
        categorization = _categorization_under(store, record.id, criteria)
        failed = _failed_clauses(record, criteria, categorization)
        if failed:
            reasons[record.id] = tuple(failed)
        else:
            included.append(record.id)
    return Selection(
        store=store, included=tuple(included), criteria=criteria, exclusion_reasons=reasons
    )
