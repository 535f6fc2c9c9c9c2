import pytest
from hypothesis import given, settings

from dpe.filtering import CriteriaError, FilterCriteria
from dpe.licenses import UseCategory
from dpe.query import criteria_from_params, criteria_to_params

from .strategies import filter_criteria


def test_empty_params_give_defaults():
    assert criteria_from_params({}) == FilterCriteria()
    assert criteria_to_params(FilterCriteria()) == {}


def test_known_params_parse():
    criteria = criteria_from_params(
        {
            "allow_use": "commercial,unspecified",
            "forbid_share_alike": "true",
            "exclude_generated_by": "openai",
            "require_languages": "en, fr",
            "year_min": "2019",
            "year_max": "2022",
        }
    )
    assert criteria.allowed_use == frozenset(
        {UseCategory.COMMERCIAL, UseCategory.UNSPECIFIED}
    )
    assert criteria.forbid_share_alike
    assert criteria.exclude_generated_by == frozenset({"openai"})
    assert criteria.require_languages == frozenset({"en", "fr"})
    assert criteria.year_range == (2019, 2022)


def test_unknown_param_named_in_error():
    with pytest.raises(CriteriaError) as exc:
        criteria_from_params({"allow_usw": "commercial"})
    assert "allow_usw" in str(exc.value)


def test_bad_use_category_named():
    with pytest.raises(CriteriaError) as exc:
        criteria_from_params({"allow_use": "comercial"})
    assert "allow_use" in str(exc.value)


def test_bad_boolean_named():
    with pytest.raises(CriteriaError) as exc:
        criteria_from_params({"forbid_attribution": "maybe"})
    assert "forbid_attribution" in str(exc.value)


def test_year_bounds_must_come_together():
    with pytest.raises(CriteriaError):
        criteria_from_params({"year_min": "2020"})
    with pytest.raises(CriteriaError):
        criteria_from_params({"year_max": "2020"})


def test_inverted_year_range_rejected():
    with pytest.raises(CriteriaError):
        criteria_from_params({"year_min": "2022", "year_max": "2020"})


def test_unknown_evidence_source_rejected():
    with pytest.raises(CriteriaError) as exc:
        criteria_from_params({"accept_evidence": "paper,blog-post"})
    assert "accept_evidence" in str(exc.value)


@settings(max_examples=200, deadline=None)
@given(filter_criteria())
def test_round_trip_criteria_to_params_and_back(criteria):
    params = criteria_to_params(criteria)
    assert criteria_from_params(params) == criteria
    # the params form is canonical: encoding again is a fixed point
    assert criteria_to_params(criteria_from_params(params)) == params
