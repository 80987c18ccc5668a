import itertools
import random
from fractions import Fraction as Q

import pytest

from helpers import random_presentation, raster_components, segment_samples
from vatcarto.cuts import (MAX_PER_LINE, FocusError, FocusSet, SignChoice, as_signs, complement_components,
                           complement_connected, cut_set, disconnecting_lines, j_closed_form, j_direct,
                           order_focus, reduce_signs)
from vatcarto.region import Region, validate

SQUARE = Region.box(0, 4, 0, 4)
PAIR = order_focus([(2, 1), (2, 3)])


class TestOrderFocus:
    def test_lexicographic_order(self):
        fs = order_focus([(2, 3), (2, 1), (5, 0)])
        assert fs.points == ((2, 1), (2, 3), (5, 0))
        assert fs.indices == [1, 2, 3]

    def test_empty(self):
        assert len(order_focus([])) == 0

    def test_offset_window(self):
        fs = order_focus([(2, 1), (5, 0)], offset=-1)
        assert fs.indices == [0, 1]
        assert fs.points[fs.slot(0)][0] < fs.points[fs.slot(1)][0]

    def test_zero_and_one_share_a_line(self):
        with pytest.raises(FocusError, match="different vertical lines"):
            order_focus([(2, 1), (2, 3)], offset=-1)

    def test_rejections(self):
        with pytest.raises(FocusError, match="coincide"):
            order_focus([(1, 1), (1, 1)])
        with pytest.raises(FocusError, match="interior"):
            order_focus([(0, 2)], region=SQUARE)
        with pytest.raises(FocusError, match="interior"):
            order_focus([(5, 2)], region=SQUARE)

    def test_per_line_maximum(self):
        column = [(1, Q(k, 3)) for k in range(1, MAX_PER_LINE + 2)]
        with pytest.raises(FocusError, match="more than 8"):
            order_focus(column)
        assert len(order_focus(column[:MAX_PER_LINE])) == MAX_PER_LINE

    def test_unsorted_focus_set_is_refused(self):
        with pytest.raises(FocusError):
            FocusSet(((2, 3), (2, 1)))


class TestJump:
    def test_direct_examples(self):
        one = order_focus([(2, 2)])
        assert j_direct(one, [1], (2, 3)) == 1
        assert j_direct(one, [1], (2, 1)) == 0
        assert j_direct(PAIR, [1, -1], (2, 2)) == 0

    def test_closed_form_examples(self):
        assert j_closed_form(PAIR, [-1, -1], (2, 0)) == -2
        assert j_closed_form(PAIR, [1, 1], (2, 4)) == 2
        assert j_closed_form(PAIR, [-1, 1], (2, 2)) == 0
        assert j_direct(PAIR, [-1, 1], (2, 2)) == 0

    def test_undefined_at_focus_values(self):
        with pytest.raises(FocusError):
            j_direct(PAIR, [1, 1], (2, 1))
        with pytest.raises(FocusError):
            j_closed_form(PAIR, [1, 1], (2, 3))

    def test_length_mismatch(self):
        with pytest.raises(FocusError):
            j_direct(PAIR, [1], (0, 0))

    def test_cuts_are_closed_at_their_base(self):
        cs = cut_set(order_focus([(2, 2)]), [1], SQUARE)
        ray = cs.rays[0]
        assert ray.contains((2, 2)) and ray.contains((2, 4))
        assert not ray.contains((2, Q(2) - Q(1, 10 ** 9)))
        assert not ray.contains((2, Q(9, 2)))


class TestConnectivity:
    def test_examples(self):
        assert complement_connected(PAIR, [-1, 1])
        assert not complement_connected(PAIR, [1, -1])
        rng = random.Random(4)
        for _ in range(20):
            pres = random_presentation(rng)
            assert complement_connected(pres.focus, [1] * len(pres.focus))

    def test_raster_oracle_on_examples(self):
        assert raster_components(SQUARE, PAIR, [-1, 1], n=120) == 1
        assert raster_components(SQUARE, PAIR, [1, -1], n=120) == 2

    def test_components(self):
        one = order_focus([(2, 2)])
        assert len(complement_components(one, [1], SQUARE)) == 1
        parts = complement_components(PAIR, [1, -1], SQUARE)
        assert [(p.x_min, p.x_max) for p in parts] == [(0, 2), (2, 4)]
        assert not parts[0].closure["right"] and not parts[1].closure["left"]
        assert all(validate(p).ok for p in parts)
        assert complement_components(order_focus([]), [], SQUARE) == [SQUARE]

    def test_multiplicity_is_refused(self):
        fs = order_focus([(2, 2)], multiplicities=[2])
        with pytest.raises(FocusError):
            complement_connected(fs, [1])


class TestReduce:
    def test_examples(self):
        assert reduce_signs(PAIR, [1, -1]) == SignChoice((-1, 1))
        assert reduce_signs(PAIR, [-1, 1]) == SignChoice((-1, 1))
        three = order_focus([(2, 0), (2, 2), (2, 4)])
        assert reduce_signs(three, [1, -1, -1]) == SignChoice((-1, -1, 1))

    def test_three_on_a_line_is_unique(self):
        three = order_focus([(2, 0), (2, 2), (2, 4)])
        eps = (1, -1, -1)
        samples = segment_samples(three)
        good = []
        for cand in itertools.product((1, -1), repeat=3):
            same_j = all(j_direct(three, eps, p) == j_direct(three, cand, p) for p in samples)
            if same_j and complement_connected(three, cand):
                good.append(cand)
        assert good == [(-1, -1, 1)]

    def test_complement_grows(self):
        # every point off the cuts of eps stays off the cuts of the reduction
        three = order_focus([(2, 0), (2, 2), (2, 4)])
        eps, hat = [1, -1, -1], reduce_signs(three, [1, -1, -1])
        before, after = cut_set(three, eps), cut_set(three, hat)
        for k in range(-20, 61):
            p = (Q(2), Q(k, 10))
            if p in three.points:
                continue
            if not before.contains(p):
                assert not after.contains(p)

    def test_fixed_point(self):
        rng = random.Random(9)
        for _ in range(50):
            pres = random_presentation(rng)
            eps = [rng.choice((1, -1)) for _ in pres.focus.points]
            hat = reduce_signs(pres.focus, eps)
            assert reduce_signs(pres.focus, hat) == hat
            assert not disconnecting_lines(pres.focus, hat)


def test_sign_strings():
    assert as_signs("+,-,+1") == SignChoice((1, -1, 1))
    assert str(SignChoice((1, -1))) == "+,-"
    with pytest.raises(FocusError):
        as_signs("+,x")
    with pytest.raises(FocusError):
        SignChoice((1, 0))
