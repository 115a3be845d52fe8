import pytest

import helpers


@pytest.fixture
def clinic():
    return helpers.clinic_graph()


@pytest.fixture
def insurance():
    return helpers.insurance_graph()


@pytest.fixture
def football():
    return helpers.football_graph()


@pytest.fixture
def movies():
    return helpers.movie_graph()


@pytest.fixture
def referral():
    return helpers.referral_graph()


@pytest.fixture
def referral_wide():
    return helpers.referral_graph_wide()


@pytest.fixture
def campus():
    return helpers.campus_graph()
