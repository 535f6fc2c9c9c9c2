"""dpe: dataset-provenance audit engine.

Ingests structured metadata for finetuning datasets, resolves license
lineages into rights profiles, filters corpora by risk tolerance, generates
mergeable Data Provenance Cards, and computes license/diversity analytics.
"""

from .schema import (
    AggregatorLinks,
    DatasetRecord,
    LicenseEvidence,
    StatTriple,
    TextMetrics,
    ValidationReport,
    load_taxonomies,
    make_record_id,
    parse_record,
    record_from_dict,
    record_to_dict,
    serialize_record,
    validate_store,
)
from .licenses import (
    Categorization,
    Conflict,
    LicenseRegistry,
    LicenseRegistryEntry,
    Policy,
    RightsProfile,
    UseCategory,
    categorize_dataset,
    compose,
    detect_conflicts,
    normalize_license,
    profile_of,
)
from .ingest import (
    AggregatorClient,
    AggregatorObservation,
    FixtureAggregatorClient,
    Store,
    build_store,
    enrich,
    load_store,
)
from .filtering import FilterCriteria, Selection, apply_filter, explain
from .cards import ProvenanceCard, generate_card, merge_cards, render_markdown
from .analytics import (
    AgreementMatrix,
    CountryLanguageTable,
    agreement_matrix,
    breakdown,
    differential_entropy,
    diversity_report,
    error_rates,
    license_distribution,
    normalized_shannon_entropy,
    representation_scores,
    use_category_counts,
)

__version__ = "0.1.0"
