"""License normalization, rights profiles, and lineage composition.

The core of the audit: raw license names are normalized against an editable
registry, mapped to (permitted use, attribution, share-alike) rights profiles,
and multi-license lineages are resolved by taking the strictest condition
across licenses. Provider terms-of-use (e.g. OpenAI's) are registry entries
flagged `is_model_terms` whose use category comes from the active policy.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .schema import AUTHOR_STATED_SOURCES, DatasetRecord, LicenseEvidence


class UseCategory(str, enum.Enum):
    COMMERCIAL = "commercial"
    UNSPECIFIED = "unspecified"
    NON_COMMERCIAL = "non-commercial"
    ACADEMIC_ONLY = "academic-only"

    @property
    def strictness(self) -> int:
        """Total order for composition: commercial < non-commercial < academic-only.

        Unspecified never participates in composition and has no strictness.
        """
        return _STRICTNESS[self]

    @property
    def permissiveness(self) -> int:
        """4-way order used for aggregator comparison, most permissive first:
        commercial > unspecified > non-commercial > academic-only."""
        return _PERMISSIVENESS[self]


_STRICTNESS = {
    UseCategory.COMMERCIAL: 0,
    UseCategory.NON_COMMERCIAL: 1,
    UseCategory.ACADEMIC_ONLY: 2,
}

_PERMISSIVENESS = {
    UseCategory.COMMERCIAL: 3,
    UseCategory.UNSPECIFIED: 2,
    UseCategory.NON_COMMERCIAL: 1,
    UseCategory.ACADEMIC_ONLY: 0,
}

USE_CATEGORY_ORDER: Tuple[UseCategory, ...] = (
    UseCategory.COMMERCIAL,
    UseCategory.UNSPECIFIED,
    UseCategory.NON_COMMERCIAL,
    UseCategory.ACADEMIC_ONLY,
)


class LicenseError(ValueError):
    pass


class UnknownLicenseId(LicenseError):
    def __init__(self, canonical_id: str):
        self.canonical_id = canonical_id
        super().__init__(f"unknown license id: {canonical_id!r}")


class UnspecifiedInComposition(LicenseError):
    """Unspecified profiles may not be composed; empty lineages are handled upstream."""


@dataclass(frozen=True)
class RightsProfile:
    use: UseCategory
    attribution_required: bool = False
    share_alike_required: bool = False

    def __post_init__(self):
        if self.use == UseCategory.UNSPECIFIED and (
            self.attribution_required or self.share_alike_required
        ):
            raise LicenseError("unspecified profiles carry no attribution/share-alike flags")


COMPOSE_IDENTITY = RightsProfile(UseCategory.COMMERCIAL, False, False)
UNSPECIFIED_PROFILE = RightsProfile(UseCategory.UNSPECIFIED, False, False)

# Fallback for names absent from the registry: conservative, and flagged for
# manual review so it is never silently trusted.
CONSERVATIVE_PROFILE = RightsProfile(UseCategory.NON_COMMERCIAL, True, False)


@dataclass(frozen=True)
class LicenseRegistryEntry:
    canonical_id: str
    display_name: str
    profile: RightsProfile
    aliases: FrozenSet[str] = frozenset()
    reference_url: Optional[str] = None
    is_custom: bool = False
    is_model_terms: bool = False
    needs_review: bool = False


# ── Name normalization ───────────────────────────────────────────────────────

_NOISE_WORDS = frozenset(["license", "licence", "licenses", "version", "the", "ver"])


def normalize_name_key(raw_name: str) -> str:
    """Matching key: lowercase, punctuation/whitespace collapsed, noise words dropped."""
    text = raw_name.lower()
    text = re.sub(r"[^a-z0-9.]+", " ", text)
    tokens = []
    for token in text.split():
        token = token.strip(".")
        if not token or token in _NOISE_WORDS:
            continue
        # "v4.0" / "v2" style version markers
        if re.fullmatch(r"v\d+(\.\d+)*", token):
            token = token[1:]
        tokens.append(token)
    return " ".join(tokens)


@dataclass(frozen=True)
class LicenseMatch:
    kind: str  # "known" | "custom" | "unknown"
    raw_name: str
    canonical_id: Optional[str] = None


class LicenseRegistry:
    """Immutable-after-load mapping of canonical license ids and aliases."""

    def __init__(self, entries: Iterable[LicenseRegistryEntry]):
        self._entries: Dict[str, LicenseRegistryEntry] = {}
        self._alias_index: Dict[str, str] = {}
        for entry in entries:
            if entry.canonical_id in self._entries:
                raise LicenseError(f"duplicate canonical_id: {entry.canonical_id}")
            self._entries[entry.canonical_id] = entry
            names = {entry.canonical_id, entry.display_name} | set(entry.aliases)
            for name in names:
                key = normalize_name_key(name)
                if not key:
                    continue
                owner = self._alias_index.get(key)
                if owner is not None and owner != entry.canonical_id:
                    raise LicenseError(
                        f"alias {name!r} collides between {owner} and {entry.canonical_id}"
                    )
                self._alias_index[key] = entry.canonical_id

    def __contains__(self, canonical_id: str) -> bool:
        return canonical_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self) -> List[LicenseRegistryEntry]:
        return sorted(self._entries.values(), key=lambda e: e.canonical_id)

    def get(self, canonical_id: str) -> LicenseRegistryEntry:
        try:
            return self._entries[canonical_id]
        except KeyError:
            raise UnknownLicenseId(canonical_id) from None

    def match(self, raw_name: str) -> LicenseMatch:
        key = normalize_name_key(raw_name)
        canonical_id = self._alias_index.get(key)
        if canonical_id is None:
            return LicenseMatch("unknown", raw_name)
        entry = self._entries[canonical_id]
        kind = "custom" if entry.is_custom else "known"
        return LicenseMatch(kind, raw_name, canonical_id)

    @classmethod
    def from_file(cls, path) -> "LicenseRegistry":
        entries = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                data = json.loads(line)
                profile_data = data["profile"]
                entries.append(
                    LicenseRegistryEntry(
                        canonical_id=data["canonical_id"],
                        display_name=data["display_name"],
                        profile=RightsProfile(
                            use=UseCategory(profile_data["use"]),
                            attribution_required=bool(profile_data["attribution_required"]),
                            share_alike_required=bool(profile_data["share_alike_required"]),
                        ),
                        aliases=frozenset(data.get("aliases", [])),
                        reference_url=data.get("reference_url"),
                        is_custom=bool(data.get("is_custom", False)),
                        is_model_terms=bool(data.get("is_model_terms", False)),
                        needs_review=bool(data.get("needs_review", False)),
                    )
                )
        return cls(entries)

    @classmethod
    def default(cls) -> "LicenseRegistry":
        from importlib.resources import files

        return cls.from_file(Path(str(files("dpe").joinpath("data/registry.jsonl"))))


@dataclass(frozen=True)
class Policy:
    """Practitioner-facing knobs for how evidence is weighed."""

    openai_terms_as: UseCategory = UseCategory.NON_COMMERCIAL
    accept_evidence: FrozenSet[str] = AUTHOR_STATED_SOURCES

    def __post_init__(self):
        if self.openai_terms_as not in (UseCategory.NON_COMMERCIAL, UseCategory.COMMERCIAL):
            raise LicenseError("openai_terms_as must be non-commercial or commercial")

    def fingerprint(self) -> str:
        return f"terms={self.openai_terms_as.value};evidence={','.join(sorted(self.accept_evidence))}"


# All evidence sources, for the "trust GitHub code licenses too" stance.
WIDENED_EVIDENCE: FrozenSet[str] = AUTHOR_STATED_SOURCES | {"github-repo", "paperswithcode"}


# ── Operations ───────────────────────────────────────────────────────────────


def normalize_license(raw_name: str, registry: LicenseRegistry) -> LicenseMatch:
    if not raw_name:
        raise LicenseError("raw_name must be non-empty")
    return registry.match(raw_name)


def profile_of(canonical_id: str, registry: LicenseRegistry, policy: Policy) -> RightsProfile:
    entry = registry.get(canonical_id)
    profile = entry.profile
    if entry.is_model_terms:
        profile = RightsProfile(
            use=policy.openai_terms_as,
            attribution_required=profile.attribution_required,
            share_alike_required=profile.share_alike_required,
        )
    return profile


def compose(profiles: Sequence[RightsProfile]) -> RightsProfile:
    """Strictest-across-licenses composition: max use, OR of the boolean burdens."""
    if not profiles:
        raise LicenseError("compose requires a non-empty lineage")
    use = UseCategory.COMMERCIAL
    attribution = False
    share_alike = False
    for profile in profiles:
        if profile.use == UseCategory.UNSPECIFIED:
            raise UnspecifiedInComposition("unspecified profile passed to compose")
        if profile.use.strictness > use.strictness:
            use = profile.use
        attribution = attribution or profile.attribution_required
        share_alike = share_alike or profile.share_alike_required
    return RightsProfile(use, attribution, share_alike)


@dataclass(frozen=True)
class Categorization:
    """Resolved rights for one record plus the evidence that produced them."""

    profile: RightsProfile
    applied: Tuple[LicenseEvidence, ...] = ()
    needs_review: bool = False


def categorize_dataset(
    record: DatasetRecord, registry: LicenseRegistry, policy: Policy
) -> Categorization:
    applied: List[LicenseEvidence] = []
    profiles: List[RightsProfile] = []
    needs_review = False
    for evidence in record.licenses:
        if evidence.evidence_source not in policy.accept_evidence:
            continue
        match = registry.match(evidence.raw_name)
        if match.kind == "unknown":
            # Treat as Custom: conservative profile, flagged for review.
            canonical_id = "custom"
            profiles.append(CONSERVATIVE_PROFILE)
            needs_review = True
        else:
            canonical_id = match.canonical_id
            entry = registry.get(canonical_id)
            profiles.append(profile_of(canonical_id, registry, policy))
            needs_review = needs_review or entry.needs_review
        applied.append(
            LicenseEvidence(
                raw_name=evidence.raw_name,
                canonical_id=canonical_id,
                url=evidence.url,
                evidence_source=evidence.evidence_source,
                author_stated=evidence.author_stated,
            )
        )
    if not profiles:
        return Categorization(UNSPECIFIED_PROFILE, tuple(applied), needs_review)
    return Categorization(compose(profiles), tuple(applied), needs_review)


@dataclass(frozen=True)
class Conflict:
    kind: str
    first_id: str
    second_id: str


def detect_conflicts(
    applied: Sequence[LicenseEvidence], registry: LicenseRegistry
) -> List[Conflict]:
    """Copyleft clashes: two distinct share-alike licenses cannot both be honored."""
    share_alike_ids = sorted(
        {
            ev.canonical_id
            for ev in applied
            if ev.canonical_id is not None
            and ev.canonical_id in registry
            and registry.get(ev.canonical_id).profile.share_alike_required
        }
    )
    conflicts = []
    for i, first in enumerate(share_alike_ids):
        for second in share_alike_ids[i + 1 :]:
            conflicts.append(Conflict("copyleft-clash", first, second))
    return conflicts
