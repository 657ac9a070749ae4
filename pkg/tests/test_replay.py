import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import APP, MARKET_APPROVAL_ORDER, INV1, INV2, NEW_YORK, ZURICH
from scooprr.errors import IncompleteReplay, MalformedSchedule
from scooprr.ids import ROOT, ProcessorId
from scooprr.schedule import IntervalList, LogicalSchedule, Replayer, record_sequence


def test_init_sets_counter_to_one(golden):
    assert Replayer(golden).counter_g == 1


def test_market_walkthrough(golden):
    gate = Replayer(golden)
    assert gate.check(APP) and gate.counter_g == 2
    assert not gate.check(INV2) and gate.counter_g == 2
    assert gate.check(INV1) and gate.counter_g == 3
    assert gate.check(ZURICH) and gate.counter_g == 4
    assert gate.check(INV2) and gate.check(NEW_YORK)
    assert gate.counter_g == 6
    for p in (INV1, ZURICH, INV2, NEW_YORK):
        assert gate.check(p)
    assert gate.counter_g == 10
    gate.assert_complete()


def test_overlapping_schedule_is_malformed():
    p, q = ROOT.child(1), ROOT.child(2)
    bad = LogicalSchedule({p: IntervalList.of((1, 2)), q: IntervalList.of((2, 3))}, 3)
    with pytest.raises(MalformedSchedule):
        Replayer(bad)


def test_empty_schedule():
    gate = Replayer(LogicalSchedule({}, 0))
    assert not gate.check(ROOT)
    gate.assert_complete()


def test_unknown_processor_is_not_ok(golden):
    assert not Replayer(golden).check(ProcessorId((9, 9)))


def test_stuck_counter_reported(golden):
    gate = Replayer(golden)
    for p in MARKET_APPROVAL_ORDER[:-1]:
        assert gate.check(p)
    with pytest.raises(IncompleteReplay) as exc:
        gate.assert_complete()
    assert exc.value.counter == 9 and exc.value.total == 9


PROCS = [ROOT.child(i) for i in range(1, 6)]


@given(st.lists(st.sampled_from(PROCS), max_size=120))
def test_gate_accepts_exactly_the_recorded_sequence(seq):
    gate = Replayer(record_sequence(seq))
    for p in seq:
        for other in PROCS:
            if other != p:
                assert not gate.check(other)
        assert gate.check(p)
    assert gate.complete
