import time

import pytest

from gridtrace import (
    Constraints,
    Element,
    ElementSet,
    ElementType,
    Path,
    SwitchStatus,
    classify,
    enumerate_eps,
    enumerate_filtered,
    enumerate_paths,
    hypothetical_count,
    paths_for_customer,
)
from gridtrace.errors import EnumerationCapExceeded, NotACustomer
from gridtrace.paths import Network, PathSet, nearest_links, raw_count

ACADEMIC = ("closest_line", "hop", "length")

# hop graph of the DSO fixture before the radius filter
DSO_LINKS = {
    ("e1", "e3"), ("e2", "e4"), ("e3", "e10"), ("e3", "e4"), ("e3", "e8"), ("e4", "e11"),
    ("e4", "e5"), ("e5", "e9"), ("e6", "e12"), ("e6", "e7"), ("e6", "e9"), ("e7", "e8"),
}

AFTER_HOP = {
    ("e10", "e3", "e1"): 107.90517657137886,
    ("e10", "e3", "e8", "e7", "e6", "e9", "e5", "e4", "e2"): 477.2072829128984,
    ("e11", "e4", "e2"): 117.92493562613588,
    ("e11", "e4", "e5", "e9", "e6", "e7", "e8", "e3", "e1"): 473.08886425001117,
    ("e12", "e6", "e7", "e8", "e3", "e1"): 358.9017216300245,
    ("e12", "e6", "e9", "e5", "e4", "e2"): 204.79798849558864,
}
FINAL = {k for k, v in AFTER_HOP.items() if v < 400}


def pt(eid, t, x, y, status=None):
    return Element(eid, t, ((x, y),), status)


@pytest.mark.parametrize(
    "args, expected",
    [((12, 3, 2), 82200), ((2, 1, 1), 1), ((4, 1, 1), 5), ((13, 3, 2), 657606)],
)
def test_hypothetical_count(args, expected):
    assert hypothetical_count(*args) == expected


def test_hypothetical_count_is_exact_for_large_sets():
    # far beyond 64 bits; compare against the leading term's magnitude
    n = hypothetical_count(60, 3, 2)
    assert n > 2**64
    assert isinstance(n, int)


@pytest.mark.parametrize("args", [(1, 1, 1), (5, 0, 1), (5, 1, 0)])
def test_hypothetical_count_bad_input(args):
    with pytest.raises(ValueError):
        hypothetical_count(*args)


def test_nearest_links(dso):
    got = {tuple(sorted(link, key=lambda s: int(s[1:]))) for link in nearest_links(dso)}
    assert got == DSO_LINKS


def test_network_links_match_reference(dso):
    net = Network(dso, Constraints(names=ACADEMIC))
    kernel = {frozenset((net.ids[a], net.ids[b])) for a, b in net.link_pairs()}
    assert kernel == set(nearest_links(dso))


def test_cascade(dso):
    ps = enumerate_filtered(dso, Constraints(names=ACADEMIC))
    assert ps.stages == (("hypothetical", 82200), ("closest_line", 11742), ("hop", 6), ("length", 4))
    assert ps.canonical() == FINAL


@pytest.mark.parametrize(
    "names, survivors",
    [(("closest_line",), 11742), (("closest_line", "hop"), 6), (ACADEMIC, 4)],
)
def test_cascade_prefixes(dso, names, survivors):
    assert len(enumerate_filtered(dso, Constraints(names=names))) == survivors


def test_hop_survivors_and_lengths(dso):
    ps = enumerate_filtered(dso, Constraints(names=("closest_line", "hop")))
    assert {p.elements: ps.lengths[p] for p in ps.all_paths()} == pytest.approx(AFTER_HOP, abs=1e-9)


def test_radius_rule_cascade(dso):
    # the plain "every element within R" neighbour rule branches far more
    ps = enumerate_filtered(dso, Constraints(names=ACADEMIC, hop_rule="radius"))
    assert ps.stages == (("hypothetical", 82200), ("closest_line", 11742), ("hop", 40), ("length", 27))


@pytest.mark.parametrize("hop_rule", ["nearest", "radius"])
def test_engines_agree_on_dso(dso, hop_rule):
    cons = Constraints(names=ACADEMIC, hop_rule=hop_rule)
    assert enumerate_eps(dso, cons).canonical() == enumerate_filtered(dso, cons).canonical()


def test_eps_lengths_match_oracle(dso):
    cons = Constraints(names=ACADEMIC)
    eps = enumerate_eps(dso, cons)
    oracle = enumerate_filtered(dso, cons)
    for p in oracle.all_paths():
        assert eps.lengths[p] == oracle.lengths[p]


def test_e13_tables(dso_e13):
    ps = classify(enumerate_eps(dso_e13, Constraints(names=ACADEMIC)), dso_e13)
    assert [p.elements for p in ps.active_paths("e10")] == [("e10", "e3", "e1")]
    assert [p.elements for p in ps.active_paths("e11")] == [("e11", "e4", "e2")]
    assert [p.elements for p in ps.active_paths("e12")] == [("e12", "e6", "e9", "e5", "e4", "e2")]
    assert [p.elements for p in ps.backup_paths("e12")] == [("e12", "e6", "e13", "e7", "e8", "e3", "e1")]
    assert ps.backup_paths("e10") == [] and ps.backup_paths("e11") == []


def test_e13_oracle_stages(dso_e13):
    ps = enumerate_filtered(dso_e13, Constraints(names=ACADEMIC))
    assert ps.stages == (("hypothetical", 657606), ("closest_line", 82200), ("hop", 6), ("length", 4))


def test_no_constraints_counts_everything():
    es = ElementSet(
        [
            pt("c1", ElementType.CUSTOMER, 0, 0),
            pt("t1", ElementType.TRANSFORMER, 50, 0),
            Element("l1", ElementType.LINE, ((1, 0), (20, 0))),
            Element("l2", ElementType.LINE, ((21, 0), (40, 0))),
            pt("s1", ElementType.SWITCH, 45, 0, SwitchStatus.CLOSE),
        ]
    )
    ps = enumerate_filtered(es, Constraints(names=()))
    assert len(ps) == hypothetical_count(5, 1, 1) == raw_count(es) == 16
    assert enumerate_eps(es, Constraints(names=())).canonical() == ps.canonical()


def test_customer_with_nothing_in_reach():
    es = ElementSet(
        [
            pt("c1", ElementType.CUSTOMER, 0, 0),
            Element("l1", ElementType.LINE, ((100, 0), (120, 0))),
            pt("t1", ElementType.TRANSFORMER, 121, 0),
        ]
    )
    ps = enumerate_eps(es, Constraints(names=ACADEMIC))
    assert ps.paths == {"c1": ()}


def test_cap_exceeded(dso):
    with pytest.raises(EnumerationCapExceeded) as info:
        enumerate_filtered(dso, Constraints(names=ACADEMIC), cap=1000)
    assert info.value.count == 82200


class TestClassify:
    def test_closed_switch_path_is_active(self, dso):
        ps = classify(enumerate_eps(dso, Constraints(names=ACADEMIC)), dso)
        assert Path(("e12", "e6", "e9", "e5", "e4", "e2")) in ps.active

    def test_path_without_switch_is_active(self, dso):
        ps = classify(enumerate_eps(dso, Constraints(names=ACADEMIC)), dso)
        assert ps.is_active(Path(("e10", "e3", "e1")))

    def test_override_statuses(self, dso):
        ps = enumerate_eps(dso, Constraints(names=ACADEMIC))
        flipped = classify(ps, dso, {"e9": SwitchStatus.OPEN})
        assert flipped.backup_paths("e12") == [Path(("e12", "e6", "e9", "e5", "e4", "e2"))]

    def test_unclassified_raises(self, dso):
        ps = enumerate_eps(dso, Constraints(names=ACADEMIC))
        with pytest.raises(ValueError):
            ps.active_paths("e10")

    def test_open_switch_type(self):
        es = ElementSet(
            [
                pt("c", ElementType.CUSTOMER, 0, 0),
                pt("s", ElementType.OPEN_SWITCH, 1, 0),
                pt("t", ElementType.TRANSFORMER, 2, 0),
            ]
        )
        ps = classify(PathSet({"c": (Path(("c", "s", "t")),)}, "manual"), es)
        assert ps.backup_paths("c") == [Path(("c", "s", "t"))]


class TestPathsForCustomer:
    def test_final_tables(self, dso_e13):
        ps = enumerate_eps(dso_e13, Constraints(names=ACADEMIC))
        assert paths_for_customer(ps, "e10") == [Path(("e10", "e3", "e1"))]
        assert {p.elements for p in paths_for_customer(ps, "e12", dso_e13)} == {
            ("e12", "e6", "e9", "e5", "e4", "e2"),
            ("e12", "e6", "e13", "e7", "e8", "e3", "e1"),
        }

    def test_empty_set(self, dso):
        assert paths_for_customer(PathSet({}, "eps"), "e10", dso) == []

    def test_not_a_customer(self, dso):
        ps = enumerate_eps(dso, Constraints(names=ACADEMIC))
        with pytest.raises(NotACustomer):
            paths_for_customer(ps, "e3", dso)
        with pytest.raises(NotACustomer):
            paths_for_customer(ps, "e3")


def test_enumerate_paths_uses_config(dso, academic_cfg):
    assert enumerate_paths(dso, academic_cfg).canonical() == FINAL
    assert enumerate_paths(dso, academic_cfg, oracle=True).stages[-1] == ("length", 4)


def test_oracle_runtime_budget(dso):
    start = time.perf_counter()
    enumerate_filtered(dso, Constraints(names=ACADEMIC))
    assert time.perf_counter() - start < 60


class TestCaseStudyConstraints:
    @pytest.fixture
    def net(self):
        # c1 - ug1 - cab - cb - oh - t1, plus a second board that would make two
        return ElementSet(
            [
                pt("c1", ElementType.CUSTOMER, 0, 0),
                Element("ug1", ElementType.UNDERGROUND, ((0, 0), (10, 0))),
                pt("cab", ElementType.CABINET, 10, 0),
                pt("cb1", ElementType.CONNECTION_BOARD, 10, 1),
                Element("oh1", ElementType.OVERHEAD, ((10, 1), (30, 1))),
                Element("oh2", ElementType.OVERHEAD, ((30, 1), (50, 1))),
                pt("t1", ElementType.TRANSFORMER, 50, 1),
            ]
        )

    def test_no_repeat_type_blocks_overhead_pair(self, net):
        cons = Constraints(names=("cardinality", "no_repeat_type", "hop"), hop_rule="radius")
        eps = enumerate_eps(net, cons)
        assert eps.canonical() == enumerate_filtered(net, cons).canonical()
        assert all(
            "oh1" not in p or "oh2" not in p for p in eps.canonical()
        )

    def test_cardinality_needs_board(self, net):
        cons = Constraints(names=("cardinality", "hop"), hop_rule="radius")
        eps = enumerate_eps(net, cons)
        assert eps.canonical() == enumerate_filtered(net, cons).canonical()
        assert eps.canonical()
        assert all("cb1" in p for p in eps.canonical())

    @pytest.mark.parametrize("n", [2, 4, 5, 7])
    def test_max_elements(self, net, n):
        cons = Constraints(names=("hop", "max_elements"), N=n, hop_rule="radius")
        eps = enumerate_eps(net, cons)
        assert eps.canonical() == enumerate_filtered(net, cons).canonical()
        assert all(len(p) <= n for p in eps.canonical())

    @pytest.mark.parametrize("d_p", [10.0, 50.0, 60.0, 100.0])
    def test_max_distance(self, net, d_p):
        cons = Constraints(names=("hop", "max_distance"), D_p=d_p, hop_rule="radius")
        eps = enumerate_eps(net, cons)
        assert eps.canonical() == enumerate_filtered(net, cons).canonical()
