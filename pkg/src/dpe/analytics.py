"""License distributions, aggregator agreement, diversity metrics, breakdowns,
and country-level language representation scores."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from .filtering import Selection
from .ingest import Store
from .licenses import USE_CATEGORY_ORDER, UseCategory, profile_of

NC_AO_GROUP = "nc-ao"
GROUPS = ("commercial", "unspecified", NC_AO_GROUP)


class AnalyticsError(ValueError):
    pass


# ── License distribution ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class HistogramEntry:
    key: str
    count: int
    share: float


def license_distribution(
    selection: Selection, denominator: str = "licenses"
) -> List[HistogramEntry]:
    """Histogram of canonical license ids (``licenses``) or of composed use
    categories with one count per dataset (``datasets``). Shares sum to 1 over
    the chosen denominator."""
    if denominator not in ("licenses", "datasets"):
        raise AnalyticsError(f"unknown denominator: {denominator!r}")
    counts: Counter = Counter()
    if denominator == "licenses":
        for record_id in selection.included:
            categorization = selection.categorization_of(record_id)
            for ev in categorization.applied:
                counts[ev.canonical_id or ev.raw_name] += 1
    else:
        for record_id in selection.included:
            categorization = selection.categorization_of(record_id)
            counts[categorization.profile.use.value] += 1
    total = sum(counts.values())
    return [
        HistogramEntry(key, count, count / total)
        for key, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ]


@dataclass(frozen=True)
class BurdenRates:
    """Attribution / share-alike shares under both denominators the figures use."""

    attribution_per_license: float
    share_alike_per_license: float
    attribution_per_dataset: float
    share_alike_per_dataset: float


def burden_rates(selection: Selection) -> BurdenRates:
    registry = selection.store.registry
    policy = selection.criteria.evidence_policy
    license_total = attr_lic = sa_lic = 0
    dataset_total = attr_ds = sa_ds = 0
    for record_id in selection.included:
        categorization = selection.categorization_of(record_id)
        profile = categorization.profile
        if profile.use != UseCategory.UNSPECIFIED:
            dataset_total += 1
            attr_ds += profile.attribution_required
            sa_ds += profile.share_alike_required
        for ev in categorization.applied:
            license_total += 1
            if ev.canonical_id is not None and ev.canonical_id in registry:
                lic_profile = profile_of(ev.canonical_id, registry, policy)
                attr_lic += lic_profile.attribution_required
                sa_lic += lic_profile.share_alike_required
    return BurdenRates(
        attribution_per_license=attr_lic / license_total if license_total else 0.0,
        share_alike_per_license=sa_lic / license_total if license_total else 0.0,
        attribution_per_dataset=attr_ds / dataset_total if dataset_total else 0.0,
        share_alike_per_dataset=sa_ds / dataset_total if dataset_total else 0.0,
    )


# ── Use-category counts ──────────────────────────────────────────────────────


@dataclass(frozen=True)
class CategoryCount:
    category: UseCategory
    count: int
    percentage: float


def use_category_counts(selection: Selection) -> List[CategoryCount]:
    counts: Counter = Counter()
    for record_id in selection.included:
        counts[selection.categorization_of(record_id).profile.use] += 1
    total = sum(counts.values())
    return [
        CategoryCount(cat, counts.get(cat, 0), 100.0 * counts.get(cat, 0) / total if total else 0.0)
        for cat in USE_CATEGORY_ORDER
    ]


# ── Aggregator agreement ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class AgreementMatrix:
    aggregator: str
    # cells[verified][label] in the fixed Commercial/Unspecified/NC/AO order
    cells: Mapping[UseCategory, Mapping[UseCategory, int]]
    considered: int

    def row(self, verified: UseCategory) -> List[int]:
        return [self.cells[verified][col] for col in USE_CATEGORY_ORDER]

    def totals(self) -> List[int]:
        return [
            sum(self.cells[row][col] for row in USE_CATEGORY_ORDER)
            for col in USE_CATEGORY_ORDER
        ]


def _label_category(store: Store, label: Optional[str]) -> UseCategory:
    if label is None:
        return UseCategory.UNSPECIFIED
    match = store.registry.match(label)
    if match.kind == "unknown":
        # Same conservative stance as categorization of unknown evidence.
        return UseCategory.NON_COMMERCIAL
    return profile_of(match.canonical_id, store.registry, store.policy).use


def agreement_matrix(store: Store, aggregator: str) -> AgreementMatrix:
    """Verified use category vs the category implied by the aggregator's label.

    Records without a link to the platform are excluded; a present link with
    no label counts in the Unspecified column.
    """
    cells: Dict[UseCategory, Dict[UseCategory, int]] = {
        row: {col: 0 for col in USE_CATEGORY_ORDER} for row in USE_CATEGORY_ORDER
    }
    considered = 0
    for record in store.records:
        if not record.links.get(aggregator):
            continue
        considered += 1
        verified = store.categorization_of(record.id).profile.use
        label_cat = _label_category(store, record.aggregator_labels.get(aggregator))
        cells[verified][label_cat] += 1
    frozen = {row: dict(cols) for row, cols in cells.items()}
    return AgreementMatrix(aggregator=aggregator, cells=frozen, considered=considered)


@dataclass(frozen=True)
class ErrorRates:
    omission_rate: float
    exact_match_rate: float
    too_permissive_rate: float


def error_rates(matrix: AgreementMatrix) -> ErrorRates:
    """Omissions are the whole Unspecified-label column; too-permissive counts
    cells where the aggregator's category is strictly more permissive than the
    verified one under commercial > unspecified > non-commercial > academic-only.
    """
    total = sum(sum(cols.values()) for cols in matrix.cells.values())
    if total == 0:
        return ErrorRates(0.0, 1.0, 0.0)
    omission = sum(matrix.cells[row][UseCategory.UNSPECIFIED] for row in USE_CATEGORY_ORDER)
    exact = sum(matrix.cells[cat][cat] for cat in USE_CATEGORY_ORDER)
    too_permissive = sum(
        count
        for verified, cols in matrix.cells.items()
        for label, count in cols.items()
        if label.permissiveness > verified.permissiveness
    )
    return ErrorRates(omission / total, exact / total, too_permissive / total)


# ── Entropy ──────────────────────────────────────────────────────────────────


def normalized_shannon_entropy(counts: Mapping[str, float], universe_size: int) -> float:
    """H = -sum p ln p / ln K, in [0, 1]; K = 1 returns 0 by definition."""
    if universe_size < 1:
        raise AnalyticsError("universe size must be >= 1")
    total = sum(counts.values())
    if total <= 0:
        raise AnalyticsError("empty counts")
    if universe_size == 1:
        return 0.0
    entropy = 0.0
    for value in counts.values():
        if value > 0:
            p = value / total
            entropy -= p * math.log(p)
    return entropy / math.log(universe_size)


# Distances below this are clamped; sets the documented floor that degenerate
# (constant) samples hit instead of raising.
_MIN_DISTANCE = 1e-12


def differential_entropy(
    samples: Sequence[float], estimator: str = "knn", k: int = 3
) -> float:
    """Differential entropy (nats) of a 1-D sample, k-NN or histogram estimate.

    Constant samples return the estimator floor (about ln(1e-12) below zero)
    rather than raising.
    """
    values = np.asarray(list(samples), dtype=float)
    if values.size < 10:
        raise AnalyticsError(f"too few samples: {values.size} < 10")
    if estimator == "knn":
        n = values.size
        tree = cKDTree(values.reshape(-1, 1))
        distances, _ = tree.query(values.reshape(-1, 1), k=k + 1)
        eps = np.maximum(distances[:, k], _MIN_DISTANCE)
        # Kozachenko-Leonenko, d = 1, unit-ball volume 2
        return float(digamma(n) - digamma(k) + math.log(2.0) + np.mean(np.log(eps)))
    if estimator == "histogram":
        n = values.size
        bins = max(1, int(math.ceil(math.sqrt(n))))
        counts, edges = np.histogram(values, bins=bins)
        width = max(float(edges[1] - edges[0]), _MIN_DISTANCE)
        probs = counts[counts > 0] / n
        return float(-(probs * np.log(probs)).sum() + math.log(width))
    raise AnalyticsError(f"unknown estimator: {estimator!r}")


# ── Diversity report ─────────────────────────────────────────────────────────


@dataclass(frozen=True)
class FeatureStat:
    mean: float
    standard_error: float
    entropy: Optional[float]


#: feature name -> per-record extractor for the discrete set-valued features
_DISCRETE_FEATURES = {
    "tasks": lambda r: list(r.task_categories),
    "languages": lambda r: sorted(r.languages),
    "topics": lambda r: list(r.text_topics),
    "sources": lambda r: list(r.text_sources),
}

_CONTINUOUS_FEATURES = {
    "input_chars": lambda r: r.text_metrics.input_chars.mean,
    "target_chars": lambda r: r.text_metrics.target_chars.mean,
}


@dataclass(frozen=True)
class DiversityReport:
    # group -> feature -> stat; only groups with records appear
    groups: Mapping[str, Mapping[str, FeatureStat]]


def _group_of(use: UseCategory) -> str:
    if use == UseCategory.COMMERCIAL:
        return "commercial"
    if use == UseCategory.UNSPECIFIED:
        return "unspecified"
    return NC_AO_GROUP


def _mean_sem(values: Sequence[float]) -> Tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    sem = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return mean, sem


def diversity_report(store: Store, estimator: str = "knn") -> DiversityReport:
    members: Dict[str, List] = {group: [] for group in GROUPS}
    for record in store.records:
        use = store.categorization_of(record.id).profile.use
        members[_group_of(use)].append(record)

    # Common normalizer per feature: category universe over the whole store,
    # so entropies are comparable across groups.
    universe_sizes = {
        feature: len({value for r in store.records for value in extract(r)})
        for feature, extract in _DISCRETE_FEATURES.items()
    }

    groups: Dict[str, Dict[str, FeatureStat]] = {}
    for group in GROUPS:
        records = members[group]
        if not records:
            continue
        stats: Dict[str, FeatureStat] = {}
        for feature, extract in _DISCRETE_FEATURES.items():
            per_record = [len(extract(r)) for r in records]
            mean, sem = _mean_sem(per_record)
            universe = universe_sizes[feature]
            occurrence: Counter = Counter()
            for r in records:
                occurrence.update(extract(r))
            entropy = (
                normalized_shannon_entropy(occurrence, universe)
                if occurrence and universe >= 1
                else None
            )
            stats[feature] = FeatureStat(mean, sem, entropy)
        for feature, extract in _CONTINUOUS_FEATURES.items():
            values = [extract(r) for r in records]
            mean, sem = _mean_sem(values)
            entropy = (
                differential_entropy(values, estimator=estimator)
                if len(values) >= 10
                else None
            )
            stats[feature] = FeatureStat(mean, sem, entropy)
        synthetic = [1.0 if r.origin != "human-web" else 0.0 for r in records]
        mean, sem = _mean_sem(synthetic)
        stats["synthetic_fraction"] = FeatureStat(mean, sem, None)
        groups[group] = stats
    return DiversityReport(groups=groups)


# ── Language representation scores ───────────────────────────────────────────


@dataclass(frozen=True)
class CountryLanguageTable:
    rows: Tuple[Tuple[str, str, float], ...]  # (country, language, fraction)

    def __post_init__(self):
        seen = set()
        for country, language, fraction in self.rows:
            if not (0.0 <= fraction <= 1.0):
                raise AnalyticsError(
                    f"fraction out of [0,1] for ({country}, {language}): {fraction}"
                )
            if (country, language) in seen:
                raise AnalyticsError(f"duplicate pair: ({country}, {language})")
            seen.add((country, language))

    @classmethod
    def from_csv(cls, path) -> "CountryLanguageTable":
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                rows.append((row["country"], row["language"], float(row["fraction"])))
        return cls(tuple(rows))

    @classmethod
    def default(cls) -> "CountryLanguageTable":
        from importlib.resources import files

        return cls.from_csv(Path(str(files("dpe").joinpath("data/country_languages.csv"))))


def representation_scores(
    store: Store, table: CountryLanguageTable
) -> Dict[str, float]:
    """Population-weighted dataset coverage per country.

    Score = sum over the country's languages of (speaker fraction * number of
    datasets containing that language). Countries absent from the table are
    absent from the output.
    """
    language_index: Dict[str, int] = {}
    for record in store.records:
        for code in record.languages:
            if code not in language_index:
                language_index[code] = len(language_index)
    counts = np.zeros(len(language_index))
    for record in store.records:
        for code in record.languages:
            counts[language_index[code]] += 1
    scores: Dict[str, float] = {}
    for country, language, fraction in table.rows:
        idx = language_index.get(language)
        covered = counts[idx] if idx is not None else 0.0
        scores[country] = scores.get(country, 0.0) + fraction * float(covered)
    return scores


# ── Breakdown by axis ────────────────────────────────────────────────────────


@dataclass(frozen=True)
class LanguageFamilyTable:
    mapping: Mapping[str, str]

    @classmethod
    def from_csv(cls, path) -> "LanguageFamilyTable":
        mapping = {}
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                mapping[row["language"]] = row["family"]
        return cls(mapping)

    @classmethod
    def default(cls) -> "LanguageFamilyTable":
        from importlib.resources import files

        return cls.from_csv(Path(str(files("dpe").joinpath("data/language_families.csv"))))

    def family_of(self, code: str) -> str:
        if code in self.mapping:
            return self.mapping[code]
        # fall back on the primary subtag before giving up
        base = code.split("-")[0]
        return self.mapping.get(base, "unmapped")


@dataclass(frozen=True)
class BucketCounts:
    total: int
    by_category: Mapping[UseCategory, int]

    @property
    def nc_ao_share(self) -> float:
        nc_ao = self.by_category.get(UseCategory.NON_COMMERCIAL, 0) + self.by_category.get(
            UseCategory.ACADEMIC_ONLY, 0
        )
        return nc_ao / self.total if self.total else 0.0


BREAKDOWN_AXES = ("year", "language-family", "task-category", "source-domain")


def breakdown(
    store: Store, axis: str, family_table: Optional[LanguageFamilyTable] = None
) -> Dict[str, BucketCounts]:
    """Per-bucket record counts split by use category; empty buckets omitted.

    A record belongs to every bucket its features touch (e.g. each of its
    language families), so bucket totals can exceed the record count.
    """
    if axis not in BREAKDOWN_AXES:
        raise AnalyticsError(f"unknown axis: {axis!r}")
    if axis == "language-family" and family_table is None:
        family_table = LanguageFamilyTable.default()

    buckets: Dict[str, Counter] = {}
    for record in store.records:
        use = store.categorization_of(record.id).profile.use
        if axis == "year":
            keys = [str(record.year)] if record.year is not None else []
        elif axis == "language-family":
            keys = sorted({family_table.family_of(code) for code in record.languages})
        elif axis == "task-category":
            keys = sorted(set(record.task_categories))
        else:
            keys = sorted(set(record.source_domains))
        for key in keys:
            buckets.setdefault(key, Counter())[use] += 1

    return {
        key: BucketCounts(total=sum(counter.values()), by_category=dict(counter))
        for key, counter in sorted(buckets.items())
    }
