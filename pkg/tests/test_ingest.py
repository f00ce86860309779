import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cedagof.ingest import SampleError, dump_sample, edf_eval, load_sample, make_sample, summarize


def test_plain_lines():
    s = load_sample(b"36\n37\n38\n")
    assert s.n == 3
    assert s.values.tolist() == [36, 37, 38]


def test_housefly_bundled(housefly):
    assert housefly.n == 100
    assert housefly.label == "housefly"


def test_bad_cell_reports_row():
    with pytest.raises(SampleError, match="row 1"):
        load_sample(b"a,b\n1,x\n", column="b")


@pytest.mark.parametrize("raw", [b"", b"\n\n", b"value\n", b"5\n"])
def test_rejects_empty_or_short(raw):
    with pytest.raises(SampleError):
        load_sample(raw)


def test_column_by_name_and_index():
    raw = b"a,b\n1,9\n2,8\n3,7\n"
    assert load_sample(raw, column="b").values.tolist() == [7, 8, 9]
    assert load_sample(raw, column=0).values.tolist() == [1, 2, 3]
    with pytest.raises(SampleError, match="not found"):
        load_sample(raw, column="c")


def test_nonfinite_rejected():
    with pytest.raises(SampleError):
        load_sample(b"1\nnan\n3\n")


def test_stream_input():
    assert load_sample(io.StringIO("3\n1\n2\n")).values.tolist() == [1, 2, 3]


def test_summarize_housefly(housefly_stats):
    assert housefly_stats.mean == 45.5
    assert housefly_stats.sd == pytest.approx(3.919647, abs=5e-6)


def test_summarize_small_cases():
    c = summarize(make_sample([5, 5, 5]))
    assert (c.mean, c.sd) == (5, 0)
    two = summarize(make_sample([0, 1]))
    assert two.mean == 0.5
    assert two.sd == pytest.approx(0.7071068, abs=1e-7)


@pytest.mark.parametrize("vals, x, expected", [
    ([1, 2, 3], 2, 2 / 3),
    ([1, 2, 3], 0.5, 0.0),
    ([1, 1, 2], 1, 2 / 3),
    ([1, 2, 3], 3, 1.0),
])
def test_edf(vals, x, expected):
    assert edf_eval(make_sample(vals), x) == pytest.approx(expected)


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@given(st.lists(finite, min_size=2, max_size=50), st.lists(finite, min_size=2, max_size=20))
def test_edf_monotone_and_bounded(vals, xs):
    s = make_sample(vals)
    xs = np.sort(xs)
    f = edf_eval(s, xs)
    assert np.all(np.diff(f) >= 0)
    assert edf_eval(s, s.values[0] - 1) == 0.0
    assert edf_eval(s, s.values[-1]) == 1.0


@given(st.lists(finite, min_size=2, max_size=50), st.randoms())
def test_summary_permutation_invariant(vals, rnd):
    shuffled = list(vals)
    rnd.shuffle(shuffled)
    a, b = summarize(make_sample(vals)), summarize(make_sample(shuffled))
    assert a == b
    assert a.min <= a.mean <= a.max


def test_roundtrip_preserves_text():
    raw = "x\n3.14159265358979\n-0.000123456789\n1e-7\n2.5\n"
    s = load_sample(raw.encode())
    buf = io.StringIO()
    dump_sample(s, buf, header="x")
    again = load_sample(buf.getvalue().encode())
    assert again.text == s.text
    assert np.array_equal(again.values, s.values)
    assert "3.14159265358979" in buf.getvalue()
