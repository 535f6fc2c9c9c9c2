"""End-to-end acceptance checks.

Each test covers one release gate; the run summary prints a single
``[PASS]``/``[FAIL]`` line per gate (see ``pytest_terminal_summary`` in
``conftest.py``).
"""

import contextlib
import os
import random
import time

from dpe.analytics import (
    CountryLanguageTable,
    agreement_matrix,
    breakdown,
    differential_entropy,
    error_rates,
    license_distribution,
    normalized_shannon_entropy,
    representation_scores,
    use_category_counts,
)
from dpe.cards import generate_card, merge_cards, render_markdown
from dpe.filtering import ALL_USE_CATEGORIES, FilterCriteria, apply_filter, explain
from dpe.ingest import build_store, load_store
from dpe.licenses import COMPOSE_IDENTITY, RightsProfile, UseCategory, compose
from dpe.schema import AggregatorLinks, DatasetRecord, LicenseEvidence

from .conftest import FIXTURES, GATE_RESULTS


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        GATE_RESULTS.append((name, False))
        raise
    GATE_RESULTS.append((name, True))


# ── Aggregator agreement on the large bundled fixture ────────────────────────

EXPECTED_MATRICES = {
    "github": {
        UseCategory.COMMERCIAL: [349, 507, 0, 0],
        UseCategory.UNSPECIFIED: [112, 458, 0, 0],
        UseCategory.NON_COMMERCIAL: [49, 303, 0, 0],
        UseCategory.ACADEMIC_ONLY: [9, 71, 0, 0],
    },
    "huggingface": {
        UseCategory.COMMERCIAL: [176, 677, 1, 2],
        UseCategory.UNSPECIFIED: [164, 395, 6, 5],
        UseCategory.NON_COMMERCIAL: [113, 152, 80, 7],
        UseCategory.ACADEMIC_ONLY: [9, 65, 2, 4],
    },
    "paperswithcode": {
        UseCategory.COMMERCIAL: [313, 520, 1, 22],
        UseCategory.UNSPECIFIED: [31, 523, 1, 15],
        UseCategory.NON_COMMERCIAL: [2, 191, 157, 2],
        UseCategory.ACADEMIC_ONLY: [5, 65, 2, 8],
    },
}

EXPECTED_TOTALS = {
    "github": [519, 1339, 0, 0],
    "huggingface": [462, 1289, 89, 18],
    "paperswithcode": [351, 1299, 161, 47],
}

EXPECTED_CATEGORY_COUNTS = {
    UseCategory.COMMERCIAL: 856,
    UseCategory.UNSPECIFIED: 570,
    UseCategory.NON_COMMERCIAL: 352,
    UseCategory.ACADEMIC_ONLY: 80,
}


def test_agreement_fixture_reproduced_exactly():
    with criterion(
        "agreement fixture: every matrix cell exact, 856/570/352/80 categories, < 2 s"
    ):
        started = time.perf_counter()
        store = load_store([FIXTURES / "table2"])
        assert len(store) == 1858
        for aggregator, expected_rows in EXPECTED_MATRICES.items():
            matrix = agreement_matrix(store, aggregator)
            for verified, expected in expected_rows.items():
                assert matrix.row(verified) == expected, (aggregator, verified)
            assert matrix.totals() == EXPECTED_TOTALS[aggregator]
        counts = {
            c.category: c.count
            for c in use_category_counts(apply_filter(store, FilterCriteria()))
        }
        assert counts == EXPECTED_CATEGORY_COUNTS
        assert time.perf_counter() - started < 2.0


def test_aggregator_error_rates_within_one_point(table2_store):
    with criterion(
        "error rates: exact-match 43/35/54 and too-permissive 29/27/16, +/-1 pt"
    ):
        expected = {
            "github": (43.0, 29.0),
            "huggingface": (35.0, 27.0),
            "paperswithcode": (54.0, 16.0),
        }
        for aggregator, (exact, permissive) in expected.items():
            rates = error_rates(agreement_matrix(table2_store, aggregator))
            assert abs(100.0 * rates.exact_match_rate - exact) <= 1.0, aggregator
            assert abs(100.0 * rates.too_permissive_rate - permissive) <= 1.0, aggregator


# ── Composition laws ─────────────────────────────────────────────────────────


def _random_profile(rng):
    use = rng.choice(
        [UseCategory.COMMERCIAL, UseCategory.NON_COMMERCIAL, UseCategory.ACADEMIC_ONLY]
    )
    return RightsProfile(use, rng.random() < 0.5, rng.random() < 0.5)


def test_composition_laws_hold_over_1000_random_cases():
    with criterion(
        "license composition: commutative, associative, idempotent, monotone, "
        "identity over 1000 random cases"
    ):
        rng = random.Random(2024)
        for _ in range(1000):
            a, b, c = (_random_profile(rng) for _ in range(3))
            assert compose([a, b]) == compose([b, a])
            assert compose([compose([a, b]), c]) == compose([a, compose([b, c])])
            assert compose([a, a]) == a
            assert compose([a, COMPOSE_IDENTITY]) == a
            widened = compose([a, b, c])
            base = compose([a, b])
            assert widened.use.strictness >= base.use.strictness
            assert widened.attribution_required >= base.attribution_required
            assert widened.share_alike_required >= base.share_alike_required


# ── Entropy ──────────────────────────────────────────────────────────────────


def test_entropy_reference_values():
    with criterion(
        "entropy: uniform 1.0, degenerate 0.0, half-support 0.5, "
        "uniform(0,1) differential +/-0.05, < 5 s"
    ):
        started = time.perf_counter()
        assert normalized_shannon_entropy({c: 1 for c in "abcd"}, 4) == 1.0
        assert normalized_shannon_entropy({"a": 9}, 4) == 0.0
        assert abs(normalized_shannon_entropy({"a": 1, "b": 1}, 4) - 0.5) < 1e-9
        rng = random.Random(99)
        samples = [rng.random() for _ in range(10_000)]
        assert abs(differential_entropy(samples, estimator="knn")) <= 0.05
        assert time.perf_counter() - started < 5.0


# ── Representation scores vs a brute-force oracle ────────────────────────────


def _minimal_record(record_id, languages):
    collection, name = record_id.split("/")
    return DatasetRecord(
        id=record_id, name=name, collection=collection, languages=frozenset(languages)
    )


def test_representation_scores_match_brute_force_oracle():
    with criterion(
        "representation scores equal brute-force double loop on 100 random "
        "instances up to 50 countries x 200 datasets"
    ):
        rng = random.Random(7)
        codes = [f"l{i}" if i else "en" for i in range(30)]
        for trial in range(100):
            records = [
                _minimal_record(
                    f"t{trial}/d{i}", rng.sample(codes, rng.randint(0, 5))
                )
                for i in range(rng.randint(1, 200))
            ]
            rows = []
            for c in range(rng.randint(1, 50)):
                for language in rng.sample(codes + ["zz"], rng.randint(1, 4)):
                    rows.append((f"C{c}", language, rng.random()))
            seen = set()
            rows = [
                row
                for row in rows
                if (row[0], row[1]) not in seen and not seen.add((row[0], row[1]))
            ]
            table = CountryLanguageTable(tuple(rows))
            store = build_store(records)
            got = representation_scores(store, table)
            expected = {}
            for country, language, fraction in table.rows:
                covered = sum(1 for r in records if language in r.languages)
                expected[country] = expected.get(country, 0.0) + fraction * covered
            assert got == expected


# ── Filter properties over random triples ────────────────────────────────────

_LANGS = ["en", "fr", "zh", "de", "code"]
_TASKS = ["Question Answering", "Translation", "Summarization", "Brainstorming"]
_DOMAINS = ["general-web", "wikipedia", "exams"]
_LICENSES = [
    "MIT",
    "Apache 2.0",
    "CC BY 4.0",
    "CC BY-SA 4.0",
    "CC BY-NC 4.0",
    "Academic Use Only",
    None,
]


def _random_record(rng, record_id):
    collection, name = record_id.split("/")
    origin = rng.choice(["human-web", "model-generated", "both"])
    licenses = []
    raw = rng.choice(_LICENSES)
    if raw is not None:
        licenses.append(
            LicenseEvidence(raw, evidence_source="paper", author_stated=True)
        )
    year = rng.choice([None, *range(2016, 2024)])
    return DatasetRecord(
        id=record_id,
        name=name,
        collection=collection,
        languages=frozenset(rng.sample(_LANGS, rng.randint(0, 3))),
        task_categories=tuple(rng.sample(_TASKS, rng.randint(0, 2))),
        source_domains=tuple(rng.sample(_DOMAINS, rng.randint(0, 2))),
        origin=origin,
        generated_by=(
            rng.choice([None, "openai", "cohere"]) if origin != "human-web" else None
        ),
        creators=tuple(rng.sample(["acme", "uni-a", "lab-b"], rng.randint(0, 2))),
        time_of_collection=None if year is None else str(year),
        licenses=tuple(licenses),
        links=AggregatorLinks(github=f"https://github.com/{collection}/{name}"),
    )


def _random_criteria(rng):
    allowed = frozenset(
        rng.sample(list(UseCategory), rng.randint(1, 4))
    )
    year_range = None
    if rng.random() < 0.4:
        lo = rng.randint(2016, 2023)
        year_range = (lo, rng.randint(lo, 2023))
    return FilterCriteria(
        allowed_use=allowed,
        forbid_attribution_burden=rng.random() < 0.3,
        forbid_share_alike=rng.random() < 0.3,
        exclude_model_generated=rng.random() < 0.3,
        exclude_generated_by=frozenset(
            rng.sample(["openai", "cohere"], rng.randint(0, 2))
        ),
        exclude_creators=frozenset(rng.sample(["acme", "uni-a"], rng.randint(0, 1))),
        exclude_source_domains=frozenset(rng.sample(_DOMAINS, rng.randint(0, 1))),
        require_languages=frozenset(rng.sample(_LANGS, rng.randint(0, 2))),
        require_tasks=frozenset(rng.sample(_TASKS, rng.randint(0, 2))),
        year_range=year_range,
    )


def _strengthen(rng, criteria):
    allowed = criteria.allowed_use
    if len(allowed) > 1 and rng.random() < 0.5:
        allowed = allowed - {rng.choice(sorted(allowed, key=lambda c: c.value))}

    def tighten(values, universe):
        if not values and rng.random() < 0.3:
            return frozenset(rng.sample(universe, rng.randint(1, 2)))
        if len(values) > 1 and rng.random() < 0.5:
            return values - {rng.choice(sorted(values))}
        return values

    year_range = criteria.year_range
    if year_range is None:
        if rng.random() < 0.3:
            lo = rng.randint(2016, 2023)
            year_range = (lo, rng.randint(lo, 2023))
    else:
        lo, hi = year_range
        if lo < hi and rng.random() < 0.5:
            lo = rng.randint(lo, hi)
            year_range = (lo, rng.randint(lo, hi))

    return FilterCriteria(
        allowed_use=allowed,
        forbid_attribution_burden=criteria.forbid_attribution_burden
        or rng.random() < 0.3,
        forbid_share_alike=criteria.forbid_share_alike or rng.random() < 0.3,
        exclude_model_generated=criteria.exclude_model_generated or rng.random() < 0.3,
        exclude_generated_by=criteria.exclude_generated_by
        | frozenset(rng.sample(["openai", "cohere"], rng.randint(0, 1))),
        exclude_creators=criteria.exclude_creators
        | frozenset(rng.sample(["acme", "lab-b"], rng.randint(0, 1))),
        exclude_source_domains=criteria.exclude_source_domains
        | frozenset(rng.sample(_DOMAINS, rng.randint(0, 1))),
        require_languages=tighten(criteria.require_languages, _LANGS),
        require_tasks=tighten(criteria.require_tasks, _TASKS),
        year_range=year_range,
        evidence_policy=criteria.evidence_policy,
    )


def test_filter_properties_over_1000_random_triples(registry):
    with criterion(
        "filtering: subset, monotone narrowing, and explain consistency over "
        "1000 random (store, criteria, stricter-criteria) triples"
    ):
        rng = random.Random(515)
        for trial in range(1000):
            records = [
                _random_record(rng, f"t{trial}/d{i}")
                for i in range(rng.randint(0, 12))
            ]
            store = build_store(records, registry=registry)
            loose = _random_criteria(rng)
            strict = _strengthen(rng, loose)
            selection = apply_filter(store, loose)
            included = set(selection.included)
            assert included <= {r.id for r in records}
            assert included | set(selection.exclusion_reasons) == {r.id for r in records}
            assert set(apply_filter(store, strict).included) <= included
            for record in records:
                failed = explain(record, loose, registry)
                assert (not failed) == (record.id in included)
                if failed:
                    assert tuple(failed) == selection.exclusion_reasons[record.id]


# ── Card algebra ─────────────────────────────────────────────────────────────


def test_card_algebra_over_500_random_pairs(registry):
    with criterion(
        "cards: merge additivity, identity, and associativity over 500 random "
        "pairs; golden markdown byte-stable"
    ):
        rng = random.Random(31)
        empty = generate_card(
            apply_filter(build_store([], registry=registry), FilterCriteria())
        )
        for trial in range(500):
            sizes = (rng.randint(0, 6), rng.randint(0, 6), rng.randint(0, 3))
            pools = []
            offset = 0
            for part, size in enumerate(sizes):
                records = [
                    _random_record(rng, f"p{trial}x{part}/d{i + offset}")
                    for i in range(size)
                ]
                offset += size
                store = build_store(records, registry=registry)
                pools.append(generate_card(apply_filter(store, FilterCriteria())))
            a, b, c = pools
            merged = merge_cards(a, b)
            assert merged.entry_count == a.entry_count + b.entry_count
            assert [e.id for e in merged.entries] == sorted(
                e.id for e in a.entries + b.entries
            )
            assert sum(merged.summary.use_categories.values()) == merged.entry_count
            assert merge_cards(a, empty).entries == a.entries
            left = merge_cards(merge_cards(a, b), c)
            right = merge_cards(a, merge_cards(b, c))
            assert left.entries == right.entries
            assert left.summary == right.summary
            if trial % 50 == 0:
                assert render_markdown(merged) == render_markdown(merge_cards(a, b))

        small = load_store([FIXTURES / "small"], registry=registry)
        rendered = render_markdown(generate_card(apply_filter(small, FilterCriteria())))
        golden = (FIXTURES / "cards" / "golden.md").read_text(encoding="utf-8")
        assert rendered == golden


# ── Published-shape statistics ───────────────────────────────────────────────


def test_bundled_statistics_fixtures_or_released_audit_file(
    table3_store, fig3_store
):
    audit_path = os.environ.get("DPE_AUDIT_STORE")
    if audit_path:
        with criterion(
            "released audit file: top three license shares 15.7/12.3/11.6 +/-0.1, "
            "2023 restrictive share 61 +/-1"
        ):
            store = load_store([audit_path])
            selection = apply_filter(store, FilterCriteria())
            entries = license_distribution(selection, denominator="licenses")
            top = [100.0 * e.share for e in entries[:3]]
            for got, want in zip(top, (15.7, 12.3, 11.6)):
                assert abs(got - want) <= 0.1
            share = 100.0 * breakdown(store, "year")["2023"].nc_ao_share
            assert abs(share - 61.0) <= 1.0
        return

    with criterion(
        "bundled statistics fixtures: 45.5% synthetic fraction and 61% "
        "2023 restrictive share, +/-0.1"
    ):
        from dpe.analytics import diversity_report

        report = diversity_report(table3_store)
        synthetic = 100.0 * report.groups["nc-ao"]["synthetic_fraction"].mean
        assert abs(synthetic - 45.5) <= 0.1
        share = 100.0 * breakdown(fig3_store, "year")["2023"].nc_ao_share
        assert abs(share - 61.0) <= 0.1


# ── End-to-end pipeline timing ───────────────────────────────────────────────


def test_end_to_end_pipeline_under_five_seconds():
    with criterion("end-to-end load -> filter -> card -> stats over 2000+ records < 5 s"):
        started = time.perf_counter()
        store = load_store([FIXTURES / "table2", FIXTURES / "table3"])
        assert len(store) >= 2000
        selection = apply_filter(
            store,
            FilterCriteria(
                allowed_use=ALL_USE_CATEGORIES - {UseCategory.ACADEMIC_ONLY}
            ),
        )
        card = generate_card(selection)
        assert card.entry_count == len(selection.included)
        license_distribution(selection, denominator="licenses")
        use_category_counts(selection)
        breakdown(store, "year")
        assert time.perf_counter() - started < 5.0
