"""Data Provenance Cards: structured, mergeable attribution bibliographies.

The structured card is primary (searchable, filterable, mergeable by
concatenation); the markdown rendering is derived from it and byte-stable
for equal cards.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .filtering import Selection
from .licenses import Conflict, RightsProfile, UseCategory, detect_conflicts
from .query import criteria_to_params
from .schema import DatasetRecord


class CardError(ValueError):
    pass


class IdCollision(CardError):
    def __init__(self, ids: Sequence[str]):
        self.ids = tuple(ids)
        super().__init__(f"entry id collision: {', '.join(ids)}")


@dataclass(frozen=True)
class CardLicense:
    raw_name: str
    canonical_id: Optional[str]
    url: Optional[str]


@dataclass(frozen=True)
class CardEntry:
    id: str
    name: str
    collection: str
    links: Mapping[str, str]
    licenses: Tuple[CardLicense, ...]
    profile: RightsProfile
    conflicts: Tuple[Conflict, ...]
    creators: Tuple[str, ...]
    text_sources: Tuple[str, ...]
    languages: Tuple[str, ...]
    task_categories: Tuple[str, ...]
    formats: Tuple[str, ...]
    time_of_collection: Optional[str]
    citation_count: Optional[int]
    download_count: Optional[int]


@dataclass(frozen=True)
class CardSummary:
    languages: Mapping[str, int]
    task_categories: Mapping[str, int]
    use_categories: Mapping[str, int]
    creators: Mapping[str, int]


@dataclass(frozen=True)
class ProvenanceCard:
    entries: Tuple[CardEntry, ...]
    summary: CardSummary
    generated_at: float
    criteria_echo: Optional[Mapping[str, str]] = None

    @property
    def entry_count(self) -> int:
        return len(self.entries)


EMPTY_SUMMARY = CardSummary(languages={}, task_categories={}, use_categories={}, creators={})


def _summarize(entries: Sequence[CardEntry]) -> CardSummary:
    languages: Counter = Counter()
    tasks: Counter = Counter()
    uses: Counter = Counter()
    creators: Counter = Counter()
    for entry in entries:
        languages.update(entry.languages)
        tasks.update(entry.task_categories)
        uses[entry.profile.use.value] += 1
        creators.update(entry.creators)
    return CardSummary(
        languages=dict(sorted(languages.items())),
        task_categories=dict(sorted(tasks.items())),
        use_categories=dict(sorted(uses.items())),
        creators=dict(sorted(creators.items())),
    )


def _entry_for(record: DatasetRecord, selection: Selection) -> CardEntry:
    categorization = selection.categorization_of(record.id)
    links = {
        name: url
        for name, url in (
            ("huggingface", record.links.huggingface),
            ("github", record.links.github),
            ("paperswithcode", record.links.paperswithcode),
            ("arxiv", record.links.arxiv),
            ("semantic_scholar", record.links.semantic_scholar),
        )
        if url
    }
    registry = selection.store.registry
    licenses = []
    for ev in categorization.applied:
        url = ev.url
        if url is None and ev.canonical_id is not None and ev.canonical_id in registry:
            url = registry.get(ev.canonical_id).reference_url
        licenses.append(CardLicense(ev.raw_name, ev.canonical_id, url))
    return CardEntry(
        id=record.id,
        name=record.name,
        collection=record.collection,
        links=links,
        licenses=tuple(licenses),
        profile=categorization.profile,
        conflicts=tuple(detect_conflicts(categorization.applied, registry)),
        creators=record.creators,
        text_sources=record.text_sources,
        languages=tuple(sorted(record.languages)),
        task_categories=record.task_categories,
        formats=tuple(sorted(record.formats)),
        time_of_collection=record.time_of_collection,
        citation_count=record.citation_count,
        download_count=record.download_count,
    )


def generate_card(selection: Selection) -> ProvenanceCard:
    entries = tuple(
        _entry_for(selection.store.by_id[record_id], selection)
        for record_id in selection.included  # already ordered by id
    )
    return ProvenanceCard(
        entries=entries,
        summary=_summarize(entries),
        generated_at=time.time(),
        criteria_echo=criteria_to_params(selection.criteria) or None,
    )


def merge_cards(a: ProvenanceCard, b: ProvenanceCard) -> ProvenanceCard:
    """Concatenate two cards; colliding entry ids are an error, not a dedupe."""
    colliding = sorted({e.id for e in a.entries} & {e.id for e in b.entries})
    if colliding:
        raise IdCollision(colliding)
    entries = tuple(sorted(a.entries + b.entries, key=lambda e: e.id))
    # Merged cards are unconditioned: the criteria of the parts do not compose.
    return ProvenanceCard(
        entries=entries,
        summary=_summarize(entries),
        generated_at=time.time(),
        criteria_echo=None,
    )


# ── Serialization ────────────────────────────────────────────────────────────


def card_to_dict(card: ProvenanceCard) -> Dict:
    out = {
        "entries": [
            {
                "id": e.id,
                "name": e.name,
                "collection": e.collection,
                "links": dict(e.links),
                "licenses": [asdict(l) for l in e.licenses],
                "profile": {
                    "use": e.profile.use.value,
                    "attribution_required": e.profile.attribution_required,
                    "share_alike_required": e.profile.share_alike_required,
                },
                "conflicts": [asdict(c) for c in e.conflicts],
                "creators": list(e.creators),
                "text_sources": list(e.text_sources),
                "languages": list(e.languages),
                "task_categories": list(e.task_categories),
                "formats": list(e.formats),
                "time_of_collection": e.time_of_collection,
                "citation_count": e.citation_count,
                "download_count": e.download_count,
            }
            for e in card.entries
        ],
        "summary": asdict(card.summary),
        "generated_at": card.generated_at,
    }
    if card.criteria_echo:
        out["criteria_echo"] = dict(card.criteria_echo)
    return out


def card_to_json(card: ProvenanceCard) -> str:
    return json.dumps(card_to_dict(card), ensure_ascii=False, sort_keys=True, indent=2)


def card_from_dict(data: Mapping) -> ProvenanceCard:
    entries = tuple(
        CardEntry(
            id=e["id"],
            name=e["name"],
            collection=e["collection"],
            links=dict(e.get("links", {})),
            licenses=tuple(
                CardLicense(l["raw_name"], l.get("canonical_id"), l.get("url"))
                for l in e.get("licenses", [])
            ),
            profile=RightsProfile(
                use=UseCategory(e["profile"]["use"]),
                attribution_required=e["profile"]["attribution_required"],
                share_alike_required=e["profile"]["share_alike_required"],
            ),
            conflicts=tuple(
                Conflict(c["kind"], c["first_id"], c["second_id"])
                for c in e.get("conflicts", [])
            ),
            creators=tuple(e.get("creators", [])),
            text_sources=tuple(e.get("text_sources", [])),
            languages=tuple(e.get("languages", [])),
            task_categories=tuple(e.get("task_categories", [])),
            formats=tuple(e.get("formats", [])),
            time_of_collection=e.get("time_of_collection"),
            citation_count=e.get("citation_count"),
            download_count=e.get("download_count"),
        )
        for e in data["entries"]
    )
    return ProvenanceCard(
        entries=entries,
        summary=_summarize(entries),
        generated_at=float(data.get("generated_at", 0.0)),
        criteria_echo=data.get("criteria_echo"),
    )


def card_from_json(text: str) -> ProvenanceCard:
    return card_from_dict(json.loads(text))


# ── Markdown rendering ───────────────────────────────────────────────────────


def _summary_table(title: str, counts: Mapping[str, int]) -> List[str]:
    if not counts:
        return []
    lines = [f"### {title}", "", "| Value | Count |", "| --- | --- |"]
    for key, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        lines.append(f"| {key} | {count} |")
    lines.append("")
    return lines


def render_markdown(card: ProvenanceCard) -> str:
    """Deterministic markdown rendering; equal cards render byte-equal.

    The generation timestamp is deliberately not rendered so that equal
    selections always produce identical bytes.
    """
    lines: List[str] = ["# Data Provenance Card", ""]
    lines.append(f"{card.entry_count} datasets")
    lines.append("")
    if card.criteria_echo:
        lines.append("Selection criteria:")
        lines.append("")
        for key, value in sorted(card.criteria_echo.items()):
            lines.append(f"- `{key}` = `{value}`")
        lines.append("")
    if card.entries:
        lines.append("## Summary")
        lines.append("")
        lines.extend(_summary_table("Permitted use", card.summary.use_categories))
        lines.extend(_summary_table("Languages", card.summary.languages))
        lines.extend(_summary_table("Task categories", card.summary.task_categories))
        lines.extend(_summary_table("Creators", card.summary.creators))
        lines.append("## Datasets")
        lines.append("")
    for entry in card.entries:
        lines.append(f"### {entry.name} (`{entry.id}`)")
        lines.append("")
        lines.append(f"- Collection: {entry.collection}")
        profile = entry.profile
        burdens = []
        if profile.attribution_required:
            burdens.append("attribution required")
        if profile.share_alike_required:
            burdens.append("share-alike required")
        burden_text = f" ({', '.join(burdens)})" if burdens else ""
        lines.append(f"- Permitted use: {profile.use.value}{burden_text}")
        if entry.licenses:
            parts = []
            for lic in entry.licenses:
                label = lic.canonical_id or lic.raw_name
                parts.append(f"[{label}]({lic.url})" if lic.url else label)
            lines.append(f"- Licenses: {', '.join(parts)}")
        else:
            lines.append("- Licenses: none recorded")
        for conflict in entry.conflicts:
            lines.append(
                f"- Conflict: {conflict.kind} between `{conflict.first_id}` "
                f"and `{conflict.second_id}`"
            )
        if entry.creators:
            lines.append(f"- Creators: {', '.join(entry.creators)}")
        if entry.text_sources:
            lines.append(f"- Text sources: {', '.join(entry.text_sources)}")
        if entry.languages:
            lines.append(f"- Languages: {', '.join(entry.languages)}")
        if entry.task_categories:
            lines.append(f"- Tasks: {', '.join(entry.task_categories)}")
        if entry.formats:
            lines.append(f"- Formats: {', '.join(entry.formats)}")
        if entry.time_of_collection:
            lines.append(f"- Time of collection: {entry.time_of_collection}")
        if entry.citation_count is not None:
            lines.append(f"- Citations: {entry.citation_count}")
        if entry.download_count is not None:
            lines.append(f"- Downloads: {entry.download_count}")
        if entry.links:
            link_parts = [f"[{name}]({url})" for name, url in sorted(entry.links.items())]
            lines.append(f"- Links: {' · '.join(link_parts)}")
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"
