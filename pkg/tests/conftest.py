import pytest

from sample_tables import admin_table


@pytest.fixture
def admin():
    return admin_table()


@pytest.fixture
def admin_split():
    return admin_table(split_group=True)
