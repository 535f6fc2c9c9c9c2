"""Command-line front end: validate, ingest, filter, card, stats, serve.

Machine-readable output goes to stdout, diagnostics to stderr. Exit codes:
0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import csv
import io
import sys
from typing import Dict, List, Optional

import click

from . import analytics
from .cards import card_to_json, generate_card, render_markdown
from .filtering import CriteriaError, apply_filter
from .ingest import (
    FixtureAggregatorClient,
    IngestError,
    enrich,
    load_records,
    load_store,
)
from .licenses import LicenseRegistry
from .query import criteria_from_params
from .schema import SchemaError, serialize_record, validate_store

USE_CHOICES = ["commercial", "unspecified", "non-commercial", "academic-only"]


def _criteria_options(fn):
    options = [
        click.option(
            "--allow-use",
            "allow_use",
            multiple=True,
            type=click.Choice(USE_CHOICES),
            help="Permitted-use categories to keep (repeatable; default: all).",
        ),
        click.option("--forbid-attribution", is_flag=True, help="Drop datasets whose lineage requires attribution."),
        click.option("--forbid-share-alike", is_flag=True, help="Drop datasets whose lineage requires share-alike."),
        click.option("--exclude-model-generated", is_flag=True, help="Drop model-generated datasets."),
        click.option("--exclude-generated-by", multiple=True, help="Drop datasets generated by this provider (repeatable)."),
        click.option("--exclude-creators", multiple=True, help="Drop datasets from these creators (repeatable)."),
        click.option("--exclude-source-domains", multiple=True, help="Drop datasets sourced from these domains (repeatable)."),
        click.option("--require-languages", multiple=True, help="Keep datasets covering any of these languages (repeatable)."),
        click.option("--require-tasks", multiple=True, help="Keep datasets covering any of these tasks (repeatable)."),
        click.option("--year-min", type=int, default=None),
        click.option("--year-max", type=int, default=None),
        click.option(
            "--openai-terms-as",
            type=click.Choice(["non-commercial", "commercial"]),
            default=None,
            help="How to treat provider terms-of-use entries.",
        ),
        click.option("--accept-evidence", multiple=True, help="Evidence sources treated as authoritative (repeatable)."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _criteria_from_flags(**kwargs):
    params: Dict[str, str] = {}
    if kwargs.get("allow_use"):
        params["allow_use"] = ",".join(kwargs["allow_use"])
    for flag, param in (
        ("forbid_attribution", "forbid_attribution"),
        ("forbid_share_alike", "forbid_share_alike"),
        ("exclude_model_generated", "exclude_model_generated"),
    ):
        if kwargs.get(flag):
            params[param] = "true"
    for name in (
        "exclude_generated_by",
        "exclude_creators",
        "exclude_source_domains",
        "require_languages",
        "require_tasks",
    ):
        if kwargs.get(name):
            params[name] = ",".join(kwargs[name])
    if kwargs.get("year_min") is not None:
        params["year_min"] = str(kwargs["year_min"])
    if kwargs.get("year_max") is not None:
        params["year_max"] = str(kwargs["year_max"])
    if kwargs.get("openai_terms_as"):
        params["openai_terms_as"] = kwargs["openai_terms_as"]
    if kwargs.get("accept_evidence"):
        params["accept_evidence"] = ",".join(kwargs["accept_evidence"])
    try:
        return criteria_from_params(params)
    except CriteriaError as exc:
        raise click.UsageError(str(exc)) from exc


def _store_option(fn):
    return click.option(
        "--store",
        "store_paths",
        multiple=True,
        envvar="DPE_STORE",
        required=True,
        help="Record file or directory of *.jsonl files (repeatable; env DPE_STORE).",
    )(fn)


def _load(store_paths, registry_path=None):
    registry = LicenseRegistry.from_file(registry_path) if registry_path else None
    try:
        return load_store(list(store_paths), registry=registry)
    except (IngestError, SchemaError) as exc:
        raise click.ClickException(str(exc)) from exc


def _write_out(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


@click.group()
@click.version_option(package_name="dpe")
def main():
    """Dataset-provenance audit engine."""


@main.command()
@click.argument("paths", nargs=-1, required=True)
def validate(paths):
    """Parse record files and report store-level problems."""
    try:
        records = load_records(list(paths))
    except (IngestError, SchemaError) as exc:
        raise click.ClickException(str(exc)) from exc
    report = validate_store(records)
    for entry in report.entries:
        click.echo(f"{entry.kind}: {entry.record_id}: {entry.detail}", err=True)
    click.echo(f"{len(records)} records, {len(report.entries)} problems")
    if not report.ok:
        sys.exit(1)


@main.command()
@_store_option
@click.option("--enrich-from", "enrich_dir", default=None, help="Aggregator dump directory for offline enrichment.")
@click.option("--out", default=None, help="Output file (default: stdout).")
def ingest(store_paths, enrich_dir, out):
    """Load, optionally enrich, and re-emit normalized records."""
    store = _load(store_paths)
    if enrich_dir:
        store, report = enrich(store, FixtureAggregatorClient(enrich_dir))
        for failure in report.failures:
            click.echo(f"enrich failure: {failure.record_id}: {failure.error}", err=True)
        click.echo(f"enriched {len(report.enriched_ids)} of {len(store)} records", err=True)
    lines = "".join(serialize_record(record) + "\n" for record in store.records)
    _write_out(lines, out)


@main.command(name="filter")
@_store_option
@_criteria_options
@click.option("--count", "count_only", is_flag=True, help="Print only the number of included datasets.")
@click.option("--explain", "explain_excluded", is_flag=True, help="Also print exclusion reasons to stderr.")
@click.option("--format", "fmt", type=click.Choice(["ids", "structured"]), default="ids")
@click.option("--out", default=None)
def filter_cmd(store_paths, count_only, explain_excluded, fmt, out, **criteria_kwargs):
    """Apply risk-tolerance criteria and list the surviving datasets."""
    criteria = _criteria_from_flags(**criteria_kwargs)
    store = _load(store_paths)
    selection = apply_filter(store, criteria)
    if explain_excluded:
        for record_id, reasons in sorted(selection.exclusion_reasons.items()):
            for reason in reasons:
                click.echo(f"{record_id}: {reason.clause}: {reason.detail}", err=True)
    if count_only:
        _write_out(f"{len(selection.included)}\n", out)
        return
    if fmt == "ids":
        _write_out("".join(record_id + "\n" for record_id in selection.included), out)
    else:
        _write_out(
            "".join(serialize_record(r) + "\n" for r in selection.records), out
        )


@main.command()
@_store_option
@_criteria_options
@click.option("--format", "fmt", type=click.Choice(["structured", "markdown"]), default="markdown")
@click.option("--out", default=None)
def card(store_paths, fmt, out, **criteria_kwargs):
    """Generate a Data Provenance Card for the filtered selection."""
    criteria = _criteria_from_flags(**criteria_kwargs)
    store = _load(store_paths)
    selection = apply_filter(store, criteria)
    provenance_card = generate_card(selection)
    if fmt == "markdown":
        _write_out(render_markdown(provenance_card), out)
    else:
        _write_out(card_to_json(provenance_card) + "\n", out)


def _csv_text(header: List[str], rows: List[List]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _table_text(header: List[str], rows: List[List]) -> str:
    widths = [
        max(len(str(header[i])), *(len(str(row[i])) for row in rows)) if rows else len(str(header[i]))
        for i in range(len(header))
    ]
    lines = ["  ".join(str(header[i]).ljust(widths[i]) for i in range(len(header)))]
    for row in rows:
        lines.append("  ".join(str(row[i]).ljust(widths[i]) for i in range(len(row))))
    return "\n".join(lines) + "\n"


@main.command()
@_store_option
@_criteria_options
@click.argument(
    "subject",
    type=click.Choice(
        ["licenses", "categories", "agreement", "diversity", "breakdown", "representation"]
    ),
)
@click.option("--denominator", type=click.Choice(["licenses", "datasets"]), default="licenses")
@click.option("--aggregator", type=click.Choice(["github", "huggingface", "paperswithcode"]), default="github")
@click.option("--axis", type=click.Choice(list(analytics.BREAKDOWN_AXES)), default="year")
@click.option("--estimator", type=click.Choice(["knn", "histogram"]), default="knn")
@click.option("--country-table", default=None, help="country,language,fraction CSV (default: bundled table).")
@click.option("--format", "fmt", type=click.Choice(["table", "csv"]), default="table")
@click.option("--out", default=None)
def stats(store_paths, subject, denominator, aggregator, axis, estimator, country_table, fmt, out, **criteria_kwargs):
    """Reproduce the audit analytics over the (optionally filtered) store."""
    criteria = _criteria_from_flags(**criteria_kwargs)
    store = _load(store_paths)
    selection = apply_filter(store, criteria)
    render = _csv_text if fmt == "csv" else _table_text

    if subject == "licenses":
        entries = analytics.license_distribution(selection, denominator)
        text = render(
            ["key", "count", "share"],
            [[e.key, e.count, f"{e.share:.4f}"] for e in entries],
        )
    elif subject == "categories":
        counts = analytics.use_category_counts(selection)
        text = render(
            ["category", "count", "percentage"],
            [[c.category.value, c.count, f"{c.percentage:.1f}"] for c in counts],
        )
    elif subject == "agreement":
        matrix = analytics.agreement_matrix(store, aggregator)
        rates = analytics.error_rates(matrix)
        rows = [
            [row.value] + matrix.row(row)
            for row in analytics.USE_CATEGORY_ORDER
        ]
        rows.append(["total"] + matrix.totals())
        text = render(
            ["verified", "commercial", "unspecified", "non-commercial", "academic-only"], rows
        )
        click.echo(
            f"considered={matrix.considered} exact_match={rates.exact_match_rate:.1%} "
            f"omission={rates.omission_rate:.1%} too_permissive={rates.too_permissive_rate:.1%}",
            err=True,
        )
    elif subject == "diversity":
        report = analytics.diversity_report(store, estimator=estimator)
        rows = []
        for group, features in report.groups.items():
            for feature, stat in features.items():
                entropy = "" if stat.entropy is None else f"{stat.entropy:.4f}"
                rows.append([group, feature, f"{stat.mean:.4f}", f"{stat.standard_error:.4f}", entropy])
        text = render(["group", "feature", "mean", "sem", "entropy"], rows)
    elif subject == "breakdown":
        buckets = analytics.breakdown(store, axis)
        rows = []
        for key, bucket in buckets.items():
            rows.append(
                [
                    key,
                    bucket.total,
                    bucket.by_category.get(analytics.UseCategory.COMMERCIAL, 0),
                    bucket.by_category.get(analytics.UseCategory.UNSPECIFIED, 0),
                    bucket.by_category.get(analytics.UseCategory.NON_COMMERCIAL, 0),
                    bucket.by_category.get(analytics.UseCategory.ACADEMIC_ONLY, 0),
                    f"{bucket.nc_ao_share:.4f}",
                ]
            )
        text = render(
            ["bucket", "total", "commercial", "unspecified", "non-commercial", "academic-only", "nc_ao_share"],
            rows,
        )
    else:
        table = (
            analytics.CountryLanguageTable.from_csv(country_table)
            if country_table
            else analytics.CountryLanguageTable.default()
        )
        scores = analytics.representation_scores(store, table)
        text = render(
            ["country", "score"],
            [[country, f"{score:.4f}"] for country, score in sorted(scores.items())],
        )
    _write_out(text, out)


@main.command()
@_store_option
@click.option("--host", default="127.0.0.1", envvar="DPE_HOST")
@click.option("--port", type=int, default=8080, envvar="DPE_PORT")
@click.option("--ui-dir", default=None, help="Static UI assets to serve under /ui/.")
def serve(store_paths, host, port, ui_dir):
    """Run the read-only HTTP API over the store snapshot."""
    import uvicorn

    from .api import create_app

    app = create_app(list(store_paths), ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
