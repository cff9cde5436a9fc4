import pytest
from hypothesis import given, settings, strategies as st

from oracles import bounded_multiplicity, counts_by_length_mod, distinct_subsets
from powerparity.counting import (
    _detect_period,
    alternating_direct,
    alternating_via_convolution,
    count_bounded_multiplicity,
    count_by_parts_mod,
    count_distinct,
    count_partitions,
    cyclic_pattern_report,
    glaisher_odd_distinct,
    ordering_sequence,
    parity_report,
)
from powerparity.partsets import PartSetError, explicit, kth_powers, tabulated
from powerparity.series import expand_Gk

SPECS = [kth_powers(1), kth_powers(2), kth_powers(3), explicit([2, 3, 7, 11]), tabulated([1, 8, 27, 64])]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.describe())
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_residue_profile_matches_enumeration(spec, m):
    N = 28
    parts = [s for s in (spec.values or [n**spec.k for n in range(1, N + 1)]) if s <= N]
    prof = count_by_parts_mod(spec, m, N)
    for n in range(N + 1):
        assert list(prof.column(n)) == counts_by_length_mod(n, parts, m)
    assert prof.totals() == count_partitions(spec, N)


def test_profile_csv_header():
    text = count_by_parts_mod(kth_powers(2), 3, 5).to_csv().splitlines()
    assert text[0] == 'n,"p_S(0,3,n)","p_S(1,3,n)","p_S(2,3,n)"'
    assert len(text) == 7


@pytest.mark.parametrize("alpha", [1, 2, 3, 4])
def test_bounded_multiplicity(alpha):
    N = 24
    parts = [n * n for n in range(1, 5)]
    got = count_bounded_multiplicity(kth_powers(2), alpha, N)
    assert got == [bounded_multiplicity(n, parts, alpha) for n in range(N + 1)]


@given(st.sets(st.integers(1, 20), max_size=8))
def test_count_distinct(parts):
    parts = sorted(parts)
    N = 30
    assert count_distinct(parts, N) == [distinct_subsets(n, parts) for n in range(N + 1)]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_convolution_identity_powers(k):
    N = 200
    assert alternating_via_convolution(kth_powers(k), N) == alternating_direct(kth_powers(k), N)


def test_convolution_identity_table():
    spec = tabulated([n**3 for n in range(1, 12)])
    assert alternating_via_convolution(spec, 300) == alternating_direct(kth_powers(3), 300)


def test_convolution_rejects_bad_sets():
    with pytest.raises(PartSetError):
        alternating_via_convolution(tabulated([1, 4, 9, 17, 25, 36, 49]), 30)
    with pytest.raises(PartSetError):
        alternating_via_convolution(explicit([1, 4, 9]), 10)


def test_direct_matches_series():
    for k in (2, 3):
        assert alternating_direct(kth_powers(k), 300).a == expand_Gk(k, 300).coeffs


def test_glaisher():
    N = 30
    assert glaisher_odd_distinct(N) == [distinct_subsets(n, list(range(1, N + 1, 2))) for n in range(N + 1)]
    assert alternating_direct(kth_powers(1), N).a == tuple(glaisher_odd_distinct(N))


def test_parity_report_k2():
    rep = parity_report(kth_powers(2), 200)
    zeros = [n for n in range(1, 201) if expand_Gk(2, 200)[n] == 0]
    assert rep.last_zero == zeros[-1] == 64
    assert rep.passed and rep.negatives == ()
    assert rep.min_positive_at > rep.last_zero


def test_parity_report_flags_negatives():
    # an explicit set without the structure can go negative
    rep = parity_report(explicit([2, 3]), 12)
    assert rep.negatives and not rep.passed


def test_detect_period():
    assert _detect_period([5, 6, 1, 2, 1, 2, 1, 2, 1, 2], 5) == (2, 2)
    assert _detect_period([1] * 8, 4) == (0, 1)
    assert _detect_period([1, 2, 3, 4, 5, 6, 7, 8], 4) == (None, None)


def test_ordering_sequence_ties_and_shape():
    rep = ordering_sequence(kth_powers(2), 3, 30)
    assert len(rep.sequence) == 30
    # n = 1: only the partition (1), one part
    assert rep.sequence[0] == (1, 0, 2)
    assert all(sorted(u) == [0, 1, 2] for u in rep.sequence)


def test_cyclic_pattern_m2_is_parity():
    N = 150
    prof = count_by_parts_mod(kth_powers(2), 2, N)
    rep = cyclic_pattern_report(prof)
    a = expand_Gk(2, N)
    assert rep["violations_total"] == sum(1 for n in range(1, N + 1) if a[n] <= 0)
    assert rep["segment_start"] == 1 and rep["first_violation"] == 4


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(0, 60))
def test_profile_columns_sum_to_p(m, N):
    prof = count_by_parts_mod(kth_powers(2), m, N)
    assert prof.totals() == count_partitions(kth_powers(2), N)
