"""Bidirectional mapping between FilterCriteria and URL query parameters.

Shared by the HTTP API and the CLI so both surfaces interpret a set of
criteria identically. Parameter names map one-to-one to FilterCriteria
fields; multi-valued fields are comma-separated.
"""

from __future__ import annotations

from typing import Dict, List, Mapping

from .filtering import ALL_USE_CATEGORIES, CriteriaError, FilterCriteria
from .licenses import Policy, UseCategory
from .schema import AUTHOR_STATED_SOURCES, EVIDENCE_SOURCES

BOOL_PARAMS = ("forbid_attribution", "forbid_share_alike", "exclude_model_generated")
SET_PARAMS = (
    "exclude_generated_by",
    "exclude_creators",
    "exclude_source_domains",
    "require_languages",
    "require_tasks",
)

KNOWN_PARAMS = frozenset(
    ["allow_use", "year_min", "year_max", "openai_terms_as", "accept_evidence"]
    + list(BOOL_PARAMS)
    + list(SET_PARAMS)
)


def _parse_bool(name: str, value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise CriteriaError(f"parameter {name!r}: not a boolean: {value!r}")


def _split_csv(value: str) -> List[str]:
    return [part.strip() for part in value.split(",") if part.strip()]


def criteria_from_params(params: Mapping[str, str]) -> FilterCriteria:
    """Build criteria from a flat query-parameter mapping.

    Raises CriteriaError naming the offending parameter.
    """
    for name in params:
        if name not in KNOWN_PARAMS:
            raise CriteriaError(f"unknown criteria parameter: {name!r}")

    kwargs: Dict = {}
    if "allow_use" in params:
        values = set()
        for token in _split_csv(params["allow_use"]):
            try:
                values.add(UseCategory(token))
            except ValueError:
                raise CriteriaError(
                    f"parameter 'allow_use': unknown use category: {token!r}"
                ) from None
        if not values:
            raise CriteriaError("parameter 'allow_use': empty value")
        kwargs["allowed_use"] = frozenset(values)

    if "forbid_attribution" in params:
        kwargs["forbid_attribution_burden"] = _parse_bool(
            "forbid_attribution", params["forbid_attribution"]
        )
    if "forbid_share_alike" in params:
        kwargs["forbid_share_alike"] = _parse_bool(
            "forbid_share_alike", params["forbid_share_alike"]
        )
    if "exclude_model_generated" in params:
        kwargs["exclude_model_generated"] = _parse_bool(
            "exclude_model_generated", params["exclude_model_generated"]
        )

    field_names = {
        "exclude_generated_by": "exclude_generated_by",
        "exclude_creators": "exclude_creators",
        "exclude_source_domains": "exclude_source_domains",
        "require_languages": "require_languages",
        "require_tasks": "require_tasks",
    }
    for param, field_name in field_names.items():
        if param in params:
            kwargs[field_name] = frozenset(_split_csv(params[param]))

    year_min = params.get("year_min")
    year_max = params.get("year_max")
    if (year_min is None) != (year_max is None):
        raise CriteriaError("parameters 'year_min'/'year_max' must be given together")
    if year_min is not None and year_max is not None:
        try:
            lo, hi = int(year_min), int(year_max)
        except ValueError:
            raise CriteriaError("parameter 'year_min'/'year_max': not an integer") from None
        kwargs["year_range"] = (lo, hi)

    policy_kwargs: Dict = {}
    if "openai_terms_as" in params:
        token = params["openai_terms_as"].strip()
        try:
            policy_kwargs["openai_terms_as"] = UseCategory(token)
        except ValueError:
            raise CriteriaError(
                f"parameter 'openai_terms_as': unknown use category: {token!r}"
            ) from None
    if "accept_evidence" in params:
        sources = frozenset(_split_csv(params["accept_evidence"]))
        bad = sources - set(EVIDENCE_SOURCES)
        if bad:
            raise CriteriaError(
                f"parameter 'accept_evidence': unknown sources: {sorted(bad)}"
            )
        policy_kwargs["accept_evidence"] = sources
    if policy_kwargs:
        try:
            kwargs["evidence_policy"] = Policy(**policy_kwargs)
        except ValueError as exc:
            raise CriteriaError(f"parameter 'openai_terms_as': {exc}") from None

    try:
        return FilterCriteria(**kwargs)
    except CriteriaError:
        raise
    except ValueError as exc:
        raise CriteriaError(str(exc)) from None


def criteria_to_params(criteria: FilterCriteria) -> Dict[str, str]:
    """Inverse of criteria_from_params; defaults are omitted."""
    params: Dict[str, str] = {}
    if criteria.allowed_use != ALL_USE_CATEGORIES:
        params["allow_use"] = ",".join(sorted(c.value for c in criteria.allowed_use))
    if criteria.forbid_attribution_burden:
        params["forbid_attribution"] = "true"
    if criteria.forbid_share_alike:
        params["forbid_share_alike"] = "true"
    if criteria.exclude_model_generated:
        params["exclude_model_generated"] = "true"
    for name in SET_PARAMS:
        values = getattr(criteria, name)
        if values:
            params[name] = ",".join(sorted(values))
    if criteria.year_range is not None:
        params["year_min"] = str(criteria.year_range[0])
        params["year_max"] = str(criteria.year_range[1])
    policy = criteria.evidence_policy
    if policy.openai_terms_as != UseCategory.NON_COMMERCIAL:
        params["openai_terms_as"] = policy.openai_terms_as.value
    if policy.accept_evidence != AUTHOR_STATED_SOURCES:
        params["accept_evidence"] = ",".join(sorted(policy.accept_evidence))
    return params
