from hypothesis import given, strategies as st

from ringgossip.idset import IdSet, mask_of

ids_strategy = st.sets(st.integers(min_value=0, max_value=300), max_size=40)


class TestIdSetBasics:
    def test_roundtrip(self):
        s = IdSet([3, 1, 7])
        assert sorted(s) == [1, 3, 7]
        assert len(s) == 3
        assert 3 in s and 0 not in s

    def test_union_and_diff(self):
        a, b = IdSet([1, 2]), IdSet([2, 9])
        assert sorted(a | b) == [1, 2, 9]
        assert sorted(a - b) == [1]

    def test_equality_with_builtin_sets(self):
        assert IdSet([4, 5]) == {4, 5}
        assert IdSet() == set()

    def test_copy_is_independent(self):
        a = IdSet([1])
        b = a.copy()
        b.add(2)
        assert 2 not in a

    def test_covers_bits(self):
        s = IdSet([0, 1, 2, 3])
        assert s.covers_bits(mask_of([1, 3]))
        assert not s.covers_bits(mask_of([1, 9]))


class TestClockwiseScans:
    def test_next_simple(self):
        s = IdSet([2, 5, 9])
        assert s.next_clockwise(3) == 5
        assert s.next_clockwise(5) == 5

    def test_next_wraps(self):
        s = IdSet([2, 5])
        assert s.next_clockwise(10) == 2

    def test_prev_simple(self):
        s = IdSet([2, 5, 9])
        assert s.prev_clockwise(8) == 5
        assert s.prev_clockwise(5) == 5

    def test_prev_wraps(self):
        s = IdSet([2, 5])
        assert s.prev_clockwise(1) == 5

    def test_empty(self):
        assert IdSet().next_clockwise(0) is None
        assert IdSet().prev_clockwise(0) is None

    @given(ids_strategy, st.integers(min_value=0, max_value=300))
    def test_next_matches_bruteforce(self, members, start):
        s = IdSet(members)
        expected = None
        if members:
            at_or_after = [x for x in members if x >= start]
            expected = min(at_or_after) if at_or_after else min(members)
        assert s.next_clockwise(start) == expected

    @given(ids_strategy, st.integers(min_value=0, max_value=300))
    def test_prev_matches_bruteforce(self, members, start):
        s = IdSet(members)
        expected = None
        if members:
            at_or_before = [x for x in members if x <= start]
            expected = max(at_or_before) if at_or_before else max(members)
        assert s.prev_clockwise(start) == expected


@given(ids_strategy, ids_strategy)
def test_union_matches_builtin(a, b):
    assert sorted(IdSet(a) | IdSet(b)) == sorted(a | b)
