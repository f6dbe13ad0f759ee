import math

import pytest

from gridtrace import Element, ElementSet, ElementType, Path, SwitchStatus, closest, dist, length_path, subset
from gridtrace.errors import DuplicateId, EmptyCandidateSet, InvalidElement, InvalidPath, UnknownElement
from gridtrace.model import id_key


def pt(eid, t, x, y, status=None):
    return Element(eid, t, ((x, y),), status)


def test_subset_customers(dso):
    assert list(subset(dso, ElementType.CUSTOMER)) == ["e10", "e11", "e12"]


def test_subset_accepts_type_name(dso):
    assert list(subset(dso, "transformer")) == ["e1", "e2"]


def test_subset_missing_type_is_empty(dso):
    assert len(subset(dso, ElementType.CABINET)) == 0


def test_subset_real_switches(real):
    assert list(subset(real, ElementType.SWITCH)) == ["e16", "e17", "e18"]


def test_dist_transformer_to_line(dso):
    assert dist(dso["e1"], dso["e3"]) == pytest.approx(10.0, abs=1e-9)


def test_dist_self_is_zero(dso):
    assert dist(dso["e6"], dso["e6"]) == 0.0


def test_dist_customer_to_line(dso):
    assert dist(dso["e10"], dso["e3"]) == pytest.approx(math.sqrt(98), abs=1e-9)


def test_closest_line_for_e10(dso):
    lines = subset(dso, ElementType.LINE).values()
    assert closest(dso["e10"], lines).id == "e3"


def test_closest_line_for_e12(dso):
    lines = subset(dso, ElementType.LINE).values()
    assert closest(dso["e12"], lines).id == "e6"


def test_closest_singleton(dso):
    assert closest(dso["e1"], [dso["e7"]]).id == "e7"


def test_closest_tie_goes_to_smallest_id():
    a = pt("a", ElementType.CUSTOMER, 0, 0)
    cands = [pt("n10", ElementType.POLE, 1, 0), pt("n2", ElementType.POLE, -1, 0)]
    assert closest(a, cands).id == "n2"


def test_closest_empty_raises(dso):
    with pytest.raises(EmptyCandidateSet):
        closest(dso["e1"], [])


def test_length_path_e10(dso):
    expected = math.sqrt(98) + 10.0 + math.sqrt(88**2 + 1)
    assert length_path(["e10", "e3", "e1"], dso) == pytest.approx(expected, abs=1e-9)
    assert length_path(["e10", "e3", "e1"], dso) == pytest.approx(107.905177, abs=1e-6)


def test_length_path_e11(dso):
    # dist(e11,e4) = |(393,292)-(388,295)|, |e4|, dist(e4,e2) = |(391,193)-(401,194)|
    expected = math.hypot(5, 3) + math.hypot(3, 102) + math.hypot(10, 1)
    assert length_path(["e11", "e4", "e2"], dso) == pytest.approx(expected, abs=1e-9)


def test_length_path_colocated_points():
    es = ElementSet([pt("c", ElementType.CUSTOMER, 5, 5), pt("t", ElementType.TRANSFORMER, 5, 5)])
    assert length_path(["c", "t"], es) == 0.0


def test_length_path_unknown_element(dso):
    with pytest.raises(UnknownElement):
        length_path(["e10", "nope"], dso)


def test_last_element_internal_length_excluded():
    es = ElementSet(
        [
            pt("c", ElementType.CUSTOMER, 0, 0),
            Element("l", ElementType.LINE, ((0, 0), (0, 10))),
        ]
    )
    assert length_path(["c", "l"], es) == 0.0
    assert length_path(["l", "c"], es) == 10.0


class TestElementValidation:
    def test_point_type_needs_one_pair(self):
        with pytest.raises(InvalidElement):
            Element("x", ElementType.CUSTOMER, ((0, 0), (1, 1)))

    def test_line_needs_two_pairs(self):
        with pytest.raises(InvalidElement):
            Element("x", ElementType.OVERHEAD, ((0, 0),))

    def test_empty_coords(self):
        with pytest.raises(InvalidElement):
            Element("x", ElementType.POLE, ())

    def test_switch_needs_status(self):
        with pytest.raises(InvalidElement):
            Element("x", ElementType.SWITCH, ((0, 0),))

    def test_typed_switch_implies_status(self):
        assert Element("x", ElementType.OPEN_SWITCH, ((0, 0),)).status is SwitchStatus.OPEN
        assert Element("y", ElementType.CLOSE_SWITCH, ((0, 0),)).status is SwitchStatus.CLOSE

    def test_typed_switch_conflicting_status(self):
        with pytest.raises(InvalidElement):
            Element("x", ElementType.OPEN_SWITCH, ((0, 0),), SwitchStatus.CLOSE)

    def test_status_only_on_switches(self):
        with pytest.raises(InvalidElement):
            Element("x", ElementType.LINE, ((0, 0), (1, 0)), SwitchStatus.OPEN)

    def test_non_finite(self):
        with pytest.raises(InvalidElement):
            Element("x", ElementType.POLE, ((math.nan, 0),))

    def test_frozen(self, dso):
        with pytest.raises(AttributeError):
            dso["e1"].coords = ()


class TestElementSet:
    def test_duplicate_ids(self):
        with pytest.raises(DuplicateId):
            ElementSet([pt("a", ElementType.POLE, 0, 0), pt("a", ElementType.POLE, 1, 0)])

    def test_natural_order(self):
        es = ElementSet([pt(f"e{i}", ElementType.POLE, i, 0) for i in (10, 2, 1)])
        assert list(es) == ["e1", "e2", "e10"]

    def test_missing_key(self, dso):
        with pytest.raises(UnknownElement):
            dso["e99"]

    def test_with_elements_leaves_original(self, dso):
        bigger = dso.with_elements([pt("e99", ElementType.POLE, 0, 0)], removed=["e1"])
        assert "e99" in bigger and "e1" not in bigger
        assert "e99" not in dso and "e1" in dso

    def test_equality_ignores_construction_order(self, dso):
        assert ElementSet(reversed(dso.elements())) == dso

    def test_dso_composition(self, dso):
        counts = {}
        for e in dso.values():
            counts[e.element_type] = counts.get(e.element_type, 0) + 1
        assert counts == {
            ElementType.TRANSFORMER: 2,
            ElementType.LINE: 6,
            ElementType.SWITCH: 1,
            ElementType.CUSTOMER: 3,
        }


class TestPath:
    def test_repeated_id(self):
        with pytest.raises(InvalidPath):
            Path(("a", "b", "a"))

    def test_endpoints(self):
        p = Path(("e10", "e3", "e1"))
        assert p.customer == "e10" and p.transformer == "e1" and len(p) == 3

    def test_validate_types(self, dso):
        Path(("e10", "e3", "e1")).validate(dso)
        with pytest.raises(InvalidPath):
            Path(("e3", "e10", "e1")).validate(dso)


def test_id_key_orders_numerically():
    assert sorted(["e10", "e2", "e1", "cus_e3"], key=id_key) == ["cus_e3", "e1", "e2", "e10"]
