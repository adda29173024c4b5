import pytest

from negpell.quadforms import oracle_profile
from negpell.sweep import (
    CSV_HEADER,
    ResultRow,
    chunks,
    iter_rows,
    legendre_corank,
    read_csv,
    recheck_row,
    rows_in_range,
    write_csv,
)


def test_row_round_trip():
    row = ResultRow(12505, 3, 2, 1, 1, False, True)
    assert row.to_csv() == "12505,3,2,1,1,0,1"
    assert ResultRow.from_csv(row.to_csv()) == row


@pytest.mark.parametrize("fields", [
    (5, 1, 1, 0, 1, True, False),   # rk4 above the genus bound
    (145, 2, 1, 1, 0, True, False),  # solvable yet the 4-ranks differ
    (145, 2, 0, 1, 0, False, False),  # rk8 above rk4
])
def test_row_invariants(fields):
    with pytest.raises(ValueError):
        ResultRow(*fields)


def test_bad_boolean_field():
    with pytest.raises(ValueError):
        ResultRow.from_csv("5,1,0,0,0,2,0")


def test_legendre_corank_examples():
    assert legendre_corank((5,)) == 0
    assert legendre_corank((5, 29)) == 1
    assert legendre_corank((5, 13, 17)) == 0


def test_rows_checked_against_oracle():
    rows = rows_in_range(2, 20_000, oracle_bound=20_000)
    assert len(rows) == 2189
    assert all(r.oracle_checked for r in rows)
    for r in rows[::50]:
        o = oracle_profile(r.D)
        assert (r.rk4_narrow, r.rk8_narrow, r.rk4_ordinary, r.neg_pell) == \
            (o.rk4_narrow, o.rk8_narrow, o.rk4_ordinary, o.neg_pell)


def test_chunks_cover_range():
    cs = chunks(2, 1005, 100)
    assert cs[0] == (2, 101) and cs[-1] == (1002, 1005)
    assert sum(b - a + 1 for a, b in cs) == 1004


def test_chunking_does_not_change_rows():
    whole = list(iter_rows(30_000))
    assert list(iter_rows(30_000, chunk_size=1000)) == whole
    assert list(iter_rows(30_000, threads=2, chunk_size=4000)) == whole


def test_csv_round_trip(tmp_path):
    rows = rows_in_range(2, 3000)
    path = tmp_path / "rows.csv"
    write_csv(rows, path)
    assert path.read_bytes().startswith((CSV_HEADER + "\n").encode())
    assert b"\r" not in path.read_bytes()
    assert read_csv(path) == rows


def test_read_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_csv(path)


def test_recheck():
    row = rows_in_range(12505, 12505)[0]
    assert recheck_row(row)
    assert not recheck_row(ResultRow(12505, 3, 2, 0, 2, False, False))
