"""Canonical dataset-record model, JSONL (de)serialization, and store validation.

One record describes one audited finetuning dataset: identifiers, links to
aggregator platforms, composition characteristics, and license provenance.
Records are frozen after parse; everything downstream treats them as values.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple
from urllib.parse import urlparse

# ── Vocabularies ─────────────────────────────────────────────────────────────

FORMATS: FrozenSet[str] = frozenset(
    ["zero-shot", "few-shot", "chain-of-thought", "multi-turn-dialog", "response-ranking"]
)

ORIGINS: Tuple[str, ...] = ("human-web", "model-generated", "both")

CREATOR_CATEGORIES: FrozenSet[str] = frozenset(
    ["academic", "industry-lab", "research-group", "corporation", "startup", "other"]
)

EVIDENCE_SOURCES: Tuple[str, ...] = (
    "paper",
    "collection",
    "github-data",
    "github-repo",
    "huggingface",
    "paperswithcode",
)

# Sources where a license can be attributed to the data authors themselves.
AUTHOR_STATED_SOURCES: FrozenSet[str] = frozenset(
    ["paper", "collection", "github-data", "huggingface"]
)

AGGREGATOR_PLATFORMS: Tuple[str, ...] = ("github", "huggingface", "paperswithcode")

# BCP-47-ish language code, or the literal "code" for programming languages.
LANGUAGE_CODE_RE = re.compile(r"^[a-z]{2,3}(-[A-Za-z0-9]{2,8})*$")

TIME_OF_COLLECTION_RE = re.compile(r"^\d{4}(-\d{2})?(-\d{2})?$")


# ── Errors ───────────────────────────────────────────────────────────────────


class SchemaError(ValueError):
    """Base class for record parsing/validation failures."""


class MalformedRecord(SchemaError):
    """The input text is not a well-formed record object."""


class MissingField(SchemaError):
    def __init__(self, field_name: str):
        self.field_name = field_name
        super().__init__(f"missing required field: {field_name}")


class InvariantViolation(SchemaError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = f"invariant violated: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


# ── Domain types ─────────────────────────────────────────────────────────────


def _is_absolute_url(value: str) -> bool:
    parsed = urlparse(value)
    return bool(parsed.scheme) and bool(parsed.netloc)


@dataclass(frozen=True)
class AggregatorLinks:
    huggingface: Optional[str] = None
    github: Optional[str] = None
    paperswithcode: Optional[str] = None
    arxiv: Optional[str] = None
    semantic_scholar: Optional[str] = None

    def validate(self) -> None:
        for name in ("huggingface", "github", "paperswithcode", "arxiv", "semantic_scholar"):
            value = getattr(self, name)
            if value is not None and not _is_absolute_url(value):
                raise InvariantViolation("links", f"{name} is not an absolute URL: {value!r}")

    def get(self, platform: str) -> Optional[str]:
        return getattr(self, platform, None)


@dataclass(frozen=True)
class StatTriple:
    """min/mean/max of one non-negative measurement."""

    min: float = 0.0
    mean: float = 0.0
    max: float = 0.0

    def validate(self, name: str) -> None:
        values = (self.min, self.mean, self.max)
        for v in values:
            if not isinstance(v, (int, float)) or v != v or v in (float("inf"), float("-inf")):
                raise InvariantViolation("text_metrics", f"{name} contains a non-finite value")
            if v < 0:
                raise InvariantViolation("text_metrics", f"{name} contains a negative value")
        if not (self.min <= self.mean <= self.max):
            raise InvariantViolation("text_metrics", f"{name}: min <= mean <= max fails")


@dataclass(frozen=True)
class TextMetrics:
    input_chars: StatTriple = StatTriple()
    target_chars: StatTriple = StatTriple()
    dialog_turns: StatTriple = StatTriple()

    def validate(self) -> None:
        self.input_chars.validate("input_chars")
        self.target_chars.validate("target_chars")
        self.dialog_turns.validate("dialog_turns")


@dataclass(frozen=True)
class LicenseEvidence:
    raw_name: str
    canonical_id: Optional[str] = None
    url: Optional[str] = None
    evidence_source: str = "collection"
    author_stated: bool = False

    def validate(self) -> None:
        if not self.raw_name:
            raise InvariantViolation("license_evidence", "raw_name is empty")
        if self.evidence_source not in EVIDENCE_SOURCES:
            raise InvariantViolation(
                "license_evidence", f"unknown evidence_source: {self.evidence_source!r}"
            )
        if self.author_stated and self.evidence_source not in AUTHOR_STATED_SOURCES:
            raise InvariantViolation(
                "license_evidence",
                f"author_stated requires source in {sorted(AUTHOR_STATED_SOURCES)}, "
                f"got {self.evidence_source!r}",
            )
        if self.url is not None and not _is_absolute_url(self.url):
            raise InvariantViolation("license_evidence", f"url is not absolute: {self.url!r}")


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    name: str
    collection: str
    collection_url: Optional[str] = None
    description: Optional[str] = None
    links: AggregatorLinks = AggregatorLinks()
    languages: FrozenSet[str] = frozenset()
    task_categories: Tuple[str, ...] = ()
    text_topics: Tuple[str, ...] = ()
    formats: FrozenSet[str] = frozenset()
    time_of_collection: Optional[str] = None
    text_metrics: TextMetrics = TextMetrics()
    licenses: Tuple[LicenseEvidence, ...] = ()
    aggregator_labels: Mapping[str, str] = field(default_factory=dict)
    text_sources: Tuple[str, ...] = ()
    source_domains: Tuple[str, ...] = ()
    origin: str = "human-web"
    generated_by: Optional[str] = None
    creators: Tuple[str, ...] = ()
    creator_categories: Tuple[str, ...] = ()
    citation_count: Optional[int] = None
    download_count: Optional[int] = None
    extensions: Mapping[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        if not self.id:
            raise InvariantViolation("id", "id is empty")
        self.links.validate()
        for code in self.languages:
            if code != "code" and not LANGUAGE_CODE_RE.match(code):
                raise InvariantViolation("languages", f"bad language code: {code!r}")
        for fmt in self.formats:
            if fmt not in FORMATS:
                raise InvariantViolation("formats", f"unknown format: {fmt!r}")
        if self.origin not in ORIGINS:
            raise InvariantViolation("origin", f"unknown origin: {self.origin!r}")
        if self.origin == "human-web" and self.generated_by is not None:
            raise InvariantViolation("origin", "human-web records cannot set generated_by")
        self.text_metrics.validate()
        for ev in self.licenses:
            ev.validate()
        for platform in self.aggregator_labels:
            if platform not in AGGREGATOR_PLATFORMS:
                raise InvariantViolation(
                    "aggregator_labels", f"unknown platform: {platform!r}"
                )
        for cat in self.creator_categories:
            if cat not in CREATOR_CATEGORIES:
                raise InvariantViolation(
                    "creator_categories", f"unknown creator category: {cat!r}"
                )
        if self.time_of_collection is not None and not TIME_OF_COLLECTION_RE.match(
            self.time_of_collection
        ):
            raise InvariantViolation(
                "time_of_collection", f"not a date or year-month: {self.time_of_collection!r}"
            )
        for count_name in ("citation_count", "download_count"):
            value = getattr(self, count_name)
            if value is not None and (not isinstance(value, int) or value < 0):
                raise InvariantViolation(count_name, f"must be a non-negative integer: {value!r}")

    @property
    def year(self) -> Optional[int]:
        """Collection year, taken from time_of_collection; no inference."""
        if self.time_of_collection is None:
            return None
        return int(self.time_of_collection[:4])

    def with_aggregator_data(
        self,
        labels: Mapping[str, str],
        download_count: Optional[int] = None,
        citation_count: Optional[int] = None,
    ) -> "DatasetRecord":
        merged = dict(self.aggregator_labels)
        merged.update(labels)
        return replace(
            self,
            aggregator_labels=merged,
            download_count=download_count if download_count is not None else self.download_count,
            citation_count=citation_count if citation_count is not None else self.citation_count,
        )


# ── Slugging ─────────────────────────────────────────────────────────────────


def slugify(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug or "unnamed"


def make_record_id(collection: str, name: str) -> str:
    """Canonical record id: ``<collection-slug>/<dataset-slug>``."""
    return f"{slugify(collection)}/{slugify(name)}"


# ── Parsing / serialization ──────────────────────────────────────────────────

_REQUIRED_FIELDS = ("id", "name", "collection")

_KNOWN_FIELDS = frozenset(
    [
        "id",
        "name",
        "collection",
        "collection_url",
        "description",
        "links",
        "languages",
        "task_categories",
        "text_topics",
        "formats",
        "time_of_collection",
        "text_metrics",
        "licenses",
        "aggregator_labels",
        "text_sources",
        "source_domains",
        "origin",
        "generated_by",
        "creators",
        "creator_categories",
        "citation_count",
        "download_count",
    ]
)

_LINK_FIELDS = ("huggingface", "github", "paperswithcode", "arxiv", "semantic_scholar")


def _triple_from_dict(d: Mapping[str, Any]) -> StatTriple:
    return StatTriple(
        min=float(d.get("min", 0.0)), mean=float(d.get("mean", 0.0)), max=float(d.get("max", 0.0))
    )


def record_from_dict(data: Mapping[str, Any]) -> DatasetRecord:
    if not isinstance(data, Mapping):
        raise MalformedRecord("record must be an object")
    for name in _REQUIRED_FIELDS:
        if name not in data or data[name] in (None, ""):
            raise MissingField(name)

    links_data = data.get("links", {}) or {}
    links = AggregatorLinks(**{k: links_data.get(k) for k in _LINK_FIELDS})

    metrics_data = data.get("text_metrics", {}) or {}
    metrics = TextMetrics(
        input_chars=_triple_from_dict(metrics_data.get("input_chars", {}) or {}),
        target_chars=_triple_from_dict(metrics_data.get("target_chars", {}) or {}),
        dialog_turns=_triple_from_dict(metrics_data.get("dialog_turns", {}) or {}),
    )

    licenses = tuple(
        LicenseEvidence(
            raw_name=ev.get("raw_name", ""),
            canonical_id=ev.get("canonical_id"),
            url=ev.get("url"),
            evidence_source=ev.get("evidence_source", "collection"),
            author_stated=bool(ev.get("author_stated", False)),
        )
        for ev in data.get("licenses", []) or []
    )

    extensions = {k: v for k, v in data.items() if k not in _KNOWN_FIELDS}

    record = DatasetRecord(
        id=str(data["id"]),
        name=str(data["name"]),
        collection=str(data["collection"]),
        collection_url=data.get("collection_url"),
        description=data.get("description"),
        links=links,
        languages=frozenset(data.get("languages", []) or []),
        task_categories=tuple(data.get("task_categories", []) or []),
        text_topics=tuple(data.get("text_topics", []) or []),
        formats=frozenset(data.get("formats", []) or []),
        time_of_collection=data.get("time_of_collection"),
        text_metrics=metrics,
        licenses=licenses,
        aggregator_labels=dict(data.get("aggregator_labels", {}) or {}),
        text_sources=tuple(data.get("text_sources", []) or []),
        source_domains=tuple(data.get("source_domains", []) or []),
        origin=data.get("origin", "human-web"),
        generated_by=data.get("generated_by"),
        creators=tuple(data.get("creators", []) or []),
        creator_categories=tuple(data.get("creator_categories", []) or []),
        citation_count=data.get("citation_count"),
        download_count=data.get("download_count"),
        extensions=extensions,
    )
    record.validate()
    return record


def parse_record(text: str) -> DatasetRecord:
    """Parse one JSONL line into a validated record."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"not valid JSON: {exc}") from exc
    return record_from_dict(data)


def _triple_to_dict(t: StatTriple) -> Dict[str, float]:
    return {"min": t.min, "mean": t.mean, "max": t.max}


def record_to_dict(record: DatasetRecord) -> Dict[str, Any]:
    """Dict form with absent optionals omitted; inverse of record_from_dict."""
    out: Dict[str, Any] = {
        "id": record.id,
        "name": record.name,
        "collection": record.collection,
    }
    if record.collection_url is not None:
        out["collection_url"] = record.collection_url
    if record.description is not None:
        out["description"] = record.description
    links = {k: getattr(record.links, k) for k in _LINK_FIELDS if getattr(record.links, k)}
    if links:
        out["links"] = links
    if record.languages:
        out["languages"] = sorted(record.languages)
    if record.task_categories:
        out["task_categories"] = list(record.task_categories)
    if record.text_topics:
        out["text_topics"] = list(record.text_topics)
    if record.formats:
        out["formats"] = sorted(record.formats)
    if record.time_of_collection is not None:
        out["time_of_collection"] = record.time_of_collection
    metrics = record.text_metrics
    if metrics != TextMetrics():
        out["text_metrics"] = {
            "input_chars": _triple_to_dict(metrics.input_chars),
            "target_chars": _triple_to_dict(metrics.target_chars),
            "dialog_turns": _triple_to_dict(metrics.dialog_turns),
        }
    licenses = []
    for ev in record.licenses:
        ev_out: Dict[str, Any] = {
            "raw_name": ev.raw_name,
            "evidence_source": ev.evidence_source,
            "author_stated": ev.author_stated,
        }
        if ev.canonical_id is not None:
            ev_out["canonical_id"] = ev.canonical_id
        if ev.url is not None:
            ev_out["url"] = ev.url
        licenses.append(ev_out)
    out["licenses"] = licenses
    if record.aggregator_labels:
        out["aggregator_labels"] = dict(sorted(record.aggregator_labels.items()))
    if record.text_sources:
        out["text_sources"] = list(record.text_sources)
    if record.source_domains:
        out["source_domains"] = list(record.source_domains)
    out["origin"] = record.origin
    if record.generated_by is not None:
        out["generated_by"] = record.generated_by
    if record.creators:
        out["creators"] = list(record.creators)
    if record.creator_categories:
        out["creator_categories"] = list(record.creator_categories)
    if record.citation_count is not None:
        out["citation_count"] = record.citation_count
    if record.download_count is not None:
        out["download_count"] = record.download_count
    out.update(record.extensions)
    return out


def serialize_record(record: DatasetRecord) -> str:
    return json.dumps(record_to_dict(record), ensure_ascii=False, sort_keys=True)


# ── Taxonomies & store validation ────────────────────────────────────────────


@dataclass(frozen=True)
class Taxonomies:
    task_categories: FrozenSet[str]
    source_domains: FrozenSet[str]
    formats: FrozenSet[str]


def _read_taxonomy_file(path) -> FrozenSet[str]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(line)
    return frozenset(entries)


def load_taxonomies(directory=None) -> Taxonomies:
    from importlib.resources import files
    from pathlib import Path

    base = Path(directory) if directory else files("dpe").joinpath("data")
    return Taxonomies(
        task_categories=_read_taxonomy_file(base / "task_categories.txt"),
        source_domains=_read_taxonomy_file(base / "source_domains.txt"),
        formats=_read_taxonomy_file(base / "formats.txt"),
    )


@dataclass(frozen=True)
class ReportEntry:
    kind: str  # duplicate-id | invariant-violation | unknown-taxonomy
    record_id: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    entries: Tuple[ReportEntry, ...]

    @property
    def ok(self) -> bool:
        return not self.entries


def validate_store(
    records: List[DatasetRecord], taxonomies: Optional[Taxonomies] = None
) -> ValidationReport:
    """Collect store-level problems; never raises for content issues."""
    if taxonomies is None:
        taxonomies = load_taxonomies()
    entries: List[ReportEntry] = []

    seen: Dict[str, int] = {}
    for record in records:
        seen[record.id] = seen.get(record.id, 0) + 1
    for record_id, count in sorted(seen.items()):
        if count > 1:
            entries.append(
                ReportEntry("duplicate-id", record_id, f"id appears {count} times")
            )

    for record in sorted(records, key=lambda r: r.id):
        try:
            record.validate()
        except SchemaError as exc:
            entries.append(ReportEntry("invariant-violation", record.id, str(exc)))
        for task in record.task_categories:
            if task not in taxonomies.task_categories:
                entries.append(
                    ReportEntry("unknown-taxonomy", record.id, f"task category: {task!r}")
                )
        for domain in record.source_domains:
            if domain not in taxonomies.source_domains:
                entries.append(
                    ReportEntry("unknown-taxonomy", record.id, f"source domain: {domain!r}")
                )
    return ValidationReport(entries=tuple(entries))
