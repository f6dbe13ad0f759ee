import pytest

from gridtrace import (
    Element,
    ElementSet,
    ElementType,
    FindingKind,
    Path,
    PipelineConfig,
    SwitchStatus,
    apply_pipeline,
    check_unique_active,
    classify,
    diagnose,
    enumerate_paths,
    implicate_step,
    sweep_switch_states,
)
from gridtrace.diagnostics import Finding
from gridtrace.errors import SwitchSpaceTooLarge
from gridtrace.paths import PathSet
from gridtrace.transform import TraceEvent, TransformTrace

T = ElementType
K = FindingKind


def pt(eid, t, x, y, status=None):
    return Element(eid, t, ((x, y),), status)


def ln(eid, t, *coords):
    return Element(eid, t, tuple(coords))


def run(elements, cfg):
    out, traces = apply_pipeline(elements, cfg)
    paths = classify(enumerate_paths(out, cfg), out)
    return diagnose(out, paths, cfg, traces)


def test_pre_e13_multiple_active(dso, academic_cfg):
    report = run(dso, academic_cfg)
    assert not report.passed
    assert [(f.kind, f.subjects) for f in report.findings] == [(K.MULTIPLE_ACTIVE_PATHS, ("e12",))]


def test_post_e13_passes(dso, academic_e13_cfg):
    report = run(dso, academic_e13_cfg)
    assert report.passed and report.findings == ()


def test_configs_differ_only_by_insertion(academic_cfg, academic_e13_cfg):
    assert [e.id for e in academic_e13_cfg.insert] == ["e13"]
    assert academic_cfg == PipelineConfig(**{**vars(academic_e13_cfg), "insert": ()})


def test_isolated_element(dso, academic_e13_cfg):
    lonely = dso.with_elements([pt("e99", T.SWITCH, 1000, 1000, SwitchStatus.CLOSE)])
    report = run(lonely, academic_e13_cfg)
    assert [(f.kind, f.subjects) for f in report.findings] == [(K.DISCONNECTED_ELEMENT, ("e99",))]


def test_ring_detected():
    es = ElementSet(
        [
            pt("t", T.TRANSFORMER, 0, 0),
            ln("a", T.LINE, (0, 0), (10, 0)),
            ln("b", T.LINE, (10, 0), (5, 8)),
            ln("c", T.LINE, (5, 8), (0, 0)),
        ]
    )
    cfg = PipelineConfig(steps=(), constraints=("hop",))
    report = diagnose(es, classify(enumerate_paths(es, cfg), es), cfg)
    assert [(f.kind, f.subjects) for f in report.findings] == [(K.RING_DETECTED, ("a", "b", "c", "t"))]


def test_ring_broken_by_open_switch_is_not_reported():
    es = ElementSet(
        [
            pt("t", T.TRANSFORMER, 0, 0),
            ln("a", T.LINE, (0, 0), (10, 0)),
            ln("b", T.LINE, (10, 0), (5, 8)),
            pt("s", T.SWITCH, 5, 8, SwitchStatus.OPEN),
            ln("c", T.LINE, (5, 8), (0, 0)),
        ]
    )
    cfg = PipelineConfig(steps=(), constraints=("hop",))
    report = diagnose(es, classify(enumerate_paths(es, cfg), es), cfg)
    assert K.RING_DETECTED not in report.kinds()


def test_short_line():
    es = ElementSet(
        [
            pt("c", T.CUSTOMER, 0, 0),
            ln("l", T.LINE, (0, 0), (0.05, 0)),
            pt("t", T.TRANSFORMER, 0.05, 0),
        ]
    )
    cfg = PipelineConfig(steps=())
    report = diagnose(es, classify(enumerate_paths(es, cfg), es), cfg)
    assert [(f.kind, f.subjects) for f in report.findings] == [(K.PATH_TOO_SHORT, ("l",))]


class TestPathChecks:
    es = ElementSet(
        [
            pt("c1", T.CUSTOMER, 0, 0),
            pt("c2", T.CUSTOMER, 0, 1),
            ln("o1", T.OVERHEAD, (0, 0), (100, 0)),
            ln("o2", T.OVERHEAD, (100, 0), (200, 0)),
            pt("b", T.CONNECTION_BOARD, 200, 0),
            pt("t", T.TRANSFORMER, 200, 0),
        ]
    )

    def _diagnose(self, paths, **cfg):
        cfg = PipelineConfig(steps=(), **cfg)
        ps = classify(PathSet({c: tuple(Path(p) for p in ps) for c, ps in paths.items()}, "manual"), self.es)
        return [(f.kind, f.subjects) for f in diagnose(self.es, ps, cfg).findings if f.kind is not K.DISCONNECTED_ELEMENT]

    def test_too_long(self):
        got = self._diagnose({"c1": [("c1", "o1", "o2", "b", "t")], "c2": []}, L=150.0)
        assert (K.PATH_TOO_LONG, ("c1", "o1", "o2", "b", "t")) in got
        assert (K.CUSTOMER_WITHOUT_PATH, ("c2",)) in got

    def test_too_many_elements(self):
        got = self._diagnose({"c1": [("c1", "o1", "o2", "b", "t")], "c2": []}, N=4, constraints=())
        assert (K.PATH_TOO_LONG, ("c1", "o1", "o2", "b", "t")) in got

    def test_too_far(self):
        got = self._diagnose({"c1": [("c1", "o1", "b", "t")], "c2": []}, D_p=50.0, constraints=())
        assert (K.PATH_TOO_LONG, ("c1", "o1", "b", "t")) in got

    def test_consecutive_type_and_cardinality(self):
        got = self._diagnose(
            {"c1": [("c1", "o1", "o2", "t")], "c2": []},
            constraints=("cardinality", "no_repeat_type"),
        )
        assert (K.CONSECUTIVE_SAME_TYPE, ("o1", "o2")) in got
        assert (K.CARDINALITY_VIOLATION, ("c1", "o1", "o2", "t")) in got

    def test_capacity(self):
        got = self._diagnose(
            {"c1": [("c1", "o1", "b", "t")], "c2": [("c2", "o2", "b", "t")]}, M=1, constraints=()
        )
        assert (K.TRANSFORMER_OVER_CAPACITY, ("t",)) in got

    def test_order_is_kind_then_subject(self):
        got = self._diagnose(
            {"c1": [("c1", "o1", "o2", "t")], "c2": []},
            L=150.0,
            constraints=("cardinality", "no_repeat_type", "length"),
        )
        kinds = [k for k, _ in got]
        assert kinds == sorted(kinds, key=list(FindingKind).index)


class TestUniqueActive:
    def test_pre_e13(self, dso, academic_cfg):
        ps = enumerate_paths(dso, academic_cfg)
        findings = check_unique_active(dso, ps)
        assert [(f.kind, f.subjects, f.assignment) for f in findings] == [
            (K.MULTIPLE_ACTIVE_PATHS, ("e12",), (("e9", "close"),))
        ]

    def test_post_e13_assignments(self, dso_e13, academic_cfg):
        ps = enumerate_paths(dso_e13, academic_cfg)
        results = {a.states: a.active_counts for a in sweep_switch_states(dso_e13, ps)}
        assert results == {
            (("e9", "close"), ("e13", "close")): {"e10": 1, "e11": 1, "e12": 2},
            (("e9", "close"), ("e13", "open")): {"e10": 1, "e11": 1, "e12": 1},
            (("e9", "open"), ("e13", "close")): {"e10": 1, "e11": 1, "e12": 1},
            (("e9", "open"), ("e13", "open")): {"e10": 1, "e11": 1, "e12": 0},
        }
        radial = [a.states for a in sweep_switch_states(dso_e13, ps) if a.radial]
        assert len(radial) == 2
        kinds = sorted(f.kind.value for f in check_unique_active(dso_e13, ps))
        assert kinds == ["CustomerWithoutPath", "MultipleActivePaths"]

    def test_no_switches_one_path_each(self):
        es = ElementSet([pt("c", T.CUSTOMER, 0, 0), ln("l", T.LINE, (0, 0), (5, 0)), pt("t", T.TRANSFORMER, 5, 0)])
        ps = enumerate_paths(es, PipelineConfig(steps=()))
        assert check_unique_active(es, ps) == []

    def test_switch_limit(self, dso_e13, academic_cfg):
        ps = enumerate_paths(dso_e13, academic_cfg)
        with pytest.raises(SwitchSpaceTooLarge):
            check_unique_active(dso_e13, ps, limit=1)

    def test_sweep_in_diagnose(self, dso_e13, academic_cfg):
        cfg = PipelineConfig(**{**vars(academic_cfg), "sweep_switches": True})
        report = diagnose(dso_e13, classify(enumerate_paths(dso_e13, cfg), dso_e13), cfg)
        assert {f.assignment for f in report.findings} == {
            (("e9", "close"), ("e13", "close")),
            (("e9", "open"), ("e13", "open")),
        }


class TestImplicate:
    def test_stitch_drop_disconnects_cabinet(self):
        es = ElementSet(
            [
                pt("t1", T.TRANSFORMER, 0, 0),
                pt("k1", T.CABINET, 1, 0),
                ln("u1", T.UNDERGROUND, (2, 0), (19, 0)),
                pt("k2", T.CABINET, 20, 0),
                ln("u2", T.UNDERGROUND, (21, 0), (36, 0)),
                pt("k3", T.CABINET, 40, 0),
            ]
        )
        cfg = PipelineConfig(steps=("stitch_underground_to_cabinets",), constraints=("hop",))
        report = run(es, cfg)
        assert [(f.kind, f.subjects, f.step) for f in report.findings] == [
            (K.DISCONNECTED_ELEMENT, ("k3",), "stitch_underground_to_cabinets")
        ]

    def test_far_customer_implicates_connect(self):
        es = ElementSet([pt("t1", T.TRANSFORMER, 0, 0), pt("p1", T.POLE, 0, 1), pt("c1", T.CUSTOMER, 500, 0)])
        cfg = PipelineConfig(steps=("connect_customers",), constraints=("hop", "length"))
        report = run(es, cfg)
        assert [(f.kind, f.subjects, f.step) for f in report.findings] == [
            (K.CUSTOMER_WITHOUT_PATH, ("c1",), "connect_customers")
        ]

    def test_untouched_subject(self):
        trace = TransformTrace("snap_overhead", (TraceEvent("replaced", "a"),))
        assert implicate_step(Finding(K.DISCONNECTED_ELEMENT, ("z",)), [trace]) is None

    def test_latest_step_wins(self):
        traces = [
            TransformTrace("snap_overhead", (TraceEvent("replaced", "a"),)),
            TransformTrace("connect_customers", (TraceEvent("added", "x", None, ("a",)),)),
        ]
        assert implicate_step(Finding(K.DISCONNECTED_ELEMENT, ("a",)), traces) == "connect_customers"


def test_finding_ring_arity():
    with pytest.raises(ValueError):
        Finding(K.RING_DETECTED, ("a", "b"))


def test_diagnose_is_pure(dso, academic_cfg):
    assert run(dso, academic_cfg) == run(dso, academic_cfg)
