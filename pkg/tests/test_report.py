import pytest
from hypothesis import given
from hypothesis import strategies as st

from sciperf.report import (
    Table,
    percentages_1dp,
    read_table,
    round1,
    sha256_of_json,
    write_table,
)


def sample_table():
    table = Table("sample", ["id", "value", "share"])
    table.append("a", 3, 0.375)
    table.append("b|pipe", -1, 12.25)
    return table


@pytest.mark.parametrize("fmt", ["csv", "json", "markdown"])
def test_table_roundtrip(tmp_path, fmt):
    table = sample_table()
    path = write_table(table, tmp_path, fmt)
    loaded = read_table(path)
    assert loaded.columns == table.columns
    assert [[str(v) for v in row] for row in table.rows] == loaded.rows


def test_write_rejects_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        write_table(sample_table(), tmp_path, "xml")


def test_row_width_checked():
    table = Table("t", ["a", "b"])
    with pytest.raises(ValueError):
        table.append(1)


def test_round1_half_up():
    assert round1(29.4969) == 29.5
    assert round1(0.05) == 0.1
    assert round1(1.04) == 1.0


def test_percentages_allocate_exactly_one_hundred():
    values = [1, 1, 1]
    pct = percentages_1dp(values)
    assert sum(pct) == pytest.approx(100.0, abs=1e-9)
    assert pct == [33.4, 33.3, 33.3]


def test_percentages_zero_input():
    assert percentages_1dp([0, 0]) == [0.0, 0.0]


@given(st.lists(st.integers(0, 10_000), min_size=1, max_size=25).filter(lambda v: sum(v) > 0))
def test_percentages_always_sum_to_one_hundred(values):
    pct = percentages_1dp([float(v) for v in values])
    assert abs(sum(pct) - 100.0) < 1e-9
    assert all(p >= 0 for p in pct)


def test_config_hash_is_order_insensitive():
    assert sha256_of_json({"a": 1, "b": [2, 3]}) == sha256_of_json({"b": [2, 3], "a": 1})
