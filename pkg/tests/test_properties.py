"""Generated property suites at development volume; the acceptance module
re-runs them at one thousand cases each."""

import pytest

import props


@pytest.mark.parametrize("name,suite", props.ALL_SUITES, ids=[n for n, _ in props.ALL_SUITES])
def test_property_suite(name, suite):
    assert suite(200) == 200
