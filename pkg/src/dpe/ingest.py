"""Record-file loading, aggregator enrichment, and the immutable indexed store."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Protocol, Tuple

from .licenses import Categorization, LicenseRegistry, Policy, categorize_dataset
from .schema import (
    AGGREGATOR_PLATFORMS,
    DatasetRecord,
    SchemaError,
    parse_record,
)


class IngestError(Exception):
    pass


class ParseError(IngestError):
    def __init__(self, path: str, line_number: int, cause: Exception):
        self.path = path
        self.line_number = line_number
        self.cause = cause
        super().__init__(f"{path}:{line_number}: {cause}")


class DuplicateIdError(IngestError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"duplicate record id: {record_id}")


@dataclass(frozen=True)
class StoreIndices:
    language: Mapping[str, FrozenSet[str]]
    task: Mapping[str, FrozenSet[str]]
    collection: Mapping[str, FrozenSet[str]]
    use_category: Mapping[str, FrozenSet[str]]
    year: Mapping[int, FrozenSet[str]]


@dataclass(frozen=True)
class Store:
    """Immutable record collection with pre-built indices and cached rights."""

    records: Tuple[DatasetRecord, ...]
    by_id: Mapping[str, DatasetRecord]
    categorizations: Mapping[str, Categorization]
    indices: StoreIndices
    registry: LicenseRegistry
    policy: Policy
    built_at: float
    policy_fingerprint: str

    @property
    def ids(self) -> List[str]:
        return [r.id for r in self.records]

    def __len__(self) -> int:
        return len(self.records)

    def categorization_of(self, record_id: str) -> Categorization:
        return self.categorizations[record_id]


def _build_indices(
    records: Iterable[DatasetRecord], categorizations: Mapping[str, Categorization]
) -> StoreIndices:
    language: Dict[str, set] = {}
    task: Dict[str, set] = {}
    collection: Dict[str, set] = {}
    use_category: Dict[str, set] = {}
    year: Dict[int, set] = {}
    for record in records:
        for code in record.languages:
            language.setdefault(code, set()).add(record.id)
        for category in record.task_categories:
            task.setdefault(category, set()).add(record.id)
        collection.setdefault(record.collection, set()).add(record.id)
        use = categorizations[record.id].profile.use.value
        use_category.setdefault(use, set()).add(record.id)
        if record.year is not None:
            year.setdefault(record.year, set()).add(record.id)
    freeze = lambda d: {k: frozenset(v) for k, v in d.items()}
    return StoreIndices(
        language=freeze(language),
        task=freeze(task),
        collection=freeze(collection),
        use_category=freeze(use_category),
        year=freeze(year),
    )


def build_store(
    records: Iterable[DatasetRecord],
    registry: Optional[LicenseRegistry] = None,
    policy: Optional[Policy] = None,
) -> Store:
    registry = registry or LicenseRegistry.default()
    policy = policy or Policy()
    record_tuple = tuple(sorted(records, key=lambda r: r.id))
    by_id: Dict[str, DatasetRecord] = {}
    for record in record_tuple:
        if record.id in by_id:
            raise DuplicateIdError(record.id)
        by_id[record.id] = record
    categorizations = {
        record.id: categorize_dataset(record, registry, policy) for record in record_tuple
    }
    return Store(
        records=record_tuple,
        by_id=by_id,
        categorizations=categorizations,
        indices=_build_indices(record_tuple, categorizations),
        registry=registry,
        policy=policy,
        built_at=time.time(),
        policy_fingerprint=policy.fingerprint(),
    )


def _record_files(paths: Iterable) -> List[Path]:
    files: List[Path] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(path.glob("*.jsonl")))
        else:
            files.append(path)
    return files


def load_records(paths: Iterable) -> List[DatasetRecord]:
    records: List[DatasetRecord] = []
    for path in _record_files(paths):
        if not path.exists():
            raise IngestError(f"no such file: {path}")
        with open(path, encoding="utf-8") as fh:
            for line_number, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    records.append(parse_record(line))
                except SchemaError as exc:
                    raise ParseError(str(path), line_number, exc) from exc
    return records


def load_store(
    paths: Iterable,
    registry: Optional[LicenseRegistry] = None,
    policy: Optional[Policy] = None,
) -> Store:
    return build_store(load_records(paths), registry=registry, policy=policy)


# ── Aggregator enrichment ────────────────────────────────────────────────────


@dataclass(frozen=True)
class AggregatorObservation:
    license_label: Optional[str] = None
    download_count: Optional[int] = None
    citation_count: Optional[int] = None


class AggregatorClient(Protocol):
    """Resolves crowdsourced metadata per platform for one record.

    Returns a mapping platform -> observation; platforms the client cannot
    resolve are simply absent from the mapping.
    """

    def fetch(self, record: DatasetRecord) -> Mapping[str, AggregatorObservation]:
        ...


class FixtureAggregatorClient:
    """Offline client replaying per-platform dump files (the required impl).

    Dump format: ``<platform>.jsonl`` with one object per line:
    ``{"id": ..., "license_label": ..., "download_count": ..., "citation_count": ...}``.
    """

    def __init__(self, dump_dir):
        self._data: Dict[str, Dict[str, AggregatorObservation]] = {}
        dump_path = Path(dump_dir)
        for platform in AGGREGATOR_PLATFORMS:
            path = dump_path / f"{platform}.jsonl"
            if not path.exists():
                continue
            table: Dict[str, AggregatorObservation] = {}
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line or line.startswith("#"):
                        continue
                    row = json.loads(line)
                    table[row["id"]] = AggregatorObservation(
                        license_label=row.get("license_label"),
                        download_count=row.get("download_count"),
                        citation_count=row.get("citation_count"),
                    )
            self._data[platform] = table

    def fetch(self, record: DatasetRecord) -> Mapping[str, AggregatorObservation]:
        out = {}
        for platform, table in self._data.items():
            if record.id in table:
                out[platform] = table[record.id]
        return out


@dataclass(frozen=True)
class EnrichFailure:
    record_id: str
    error: str


@dataclass(frozen=True)
class EnrichReport:
    enriched_ids: Tuple[str, ...]
    failures: Tuple[EnrichFailure, ...] = ()


def enrich(store: Store, client: AggregatorClient) -> Tuple[Store, EnrichReport]:
    """New store with aggregator labels/counts merged in; input untouched.

    Client failures are collected per record and never abort the batch.
    """
    new_records: List[DatasetRecord] = []
    enriched: List[str] = []
    failures: List[EnrichFailure] = []
    for record in store.records:  # records are already sorted by id
        try:
            observations = client.fetch(record)
        except Exception as exc:  # client contract: failures are data, not crashes
            failures.append(EnrichFailure(record.id, str(exc)))
            new_records.append(record)
            continue
        if not observations:
            new_records.append(record)
            continue
        labels = {
            platform: obs.license_label
            for platform, obs in observations.items()
            if obs.license_label is not None
        }
        downloads = next(
            (o.download_count for o in observations.values() if o.download_count is not None),
            None,
        )
        citations = next(
            (o.citation_count for o in observations.values() if o.citation_count is not None),
            None,
        )
        new_records.append(record.with_aggregator_data(labels, downloads, citations))
        enriched.append(record.id)
    new_store = build_store(new_records, registry=store.registry, policy=store.policy)
    return new_store, EnrichReport(tuple(enriched), tuple(failures))
