from django.test import SimpleTestCase

from coloring.engine import ColoringEngine, EngineConfig
from coloring.graph import NO_LEVEL
from coloring.instrumentation import (
    CallKind,
    Instrumentation,
    LevelStats,
    RecolorCause,
    WorkCategory,
    WorkMeter,
    short_duration,
    short_epoch_levels,
)
from coloring.streams import UpdateEvent


class WorkMeterTests(SimpleTestCase):
    def setUp(self):
        self.meter = WorkMeter(bound_a=20, bound_b=50)

    def test_bounds_by_call_kind(self):
        self.assertEqual(self.meter.bound_for(CallKind.DELETION), 50)
        self.assertEqual(self.meter.bound_for(CallKind.DET_COLOR, NO_LEVEL), 20 * 3 + 50)
        self.assertEqual(self.meter.bound_for(CallKind.RAND_COLOR, 1), 20 * 27 + 50)

    def test_call_over_its_bound_is_recorded(self):
        self.meter.begin_call()
        self.meter.charge(WorkCategory.DET_COLOR, 200)
        self.assertEqual(self.meter.end_call(CallKind.DET_COLOR, NO_LEVEL), 200)

        self.meter.begin_call()
        self.meter.charge(WorkCategory.DELETION, 3)
        self.meter.end_call(CallKind.DELETION)

        violations = self.meter.violations
        self.assertEqual(len(violations), 1)
        self.assertEqual(violations[0].units, 200)
        self.assertEqual(violations[0].bound, 110)
        self.assertEqual(self.meter.calls[CallKind.DELETION], 1)

    def test_update_units_exclude_preprocessing(self):
        self.meter.charge(WorkCategory.PREPROCESS, 40)
        self.meter.charge(WorkCategory.CONFLICTLESS_INSERT, 3)
        self.assertEqual(self.meter.total, 43)
        self.assertEqual(self.meter.update_units, 3)

    def test_negative_charge_is_refused(self):
        with self.assertRaises(ValueError):
            self.meter.charge(WorkCategory.DELETION, -1)


class LevelStatsTests(SimpleTestCase):
    def test_classification(self):
        self.assertEqual(LevelStats(0).classification, '')
        self.assertEqual(LevelStats(0, epochs=8, induced=4).classification, 'induced-heavy')
        self.assertEqual(LevelStats(0, epochs=8, induced=3, final=1, original=4).classification, 'final-heavy')
        self.assertEqual(LevelStats(0, epochs=16, original=15, final=1).classification, 'original-heavy')

    def test_short_fraction_is_over_terminated_epochs(self):
        stats = LevelStats(1, epochs=10, original=3, induced=1, final=6, short=1)
        self.assertEqual(stats.completed, 4)
        self.assertEqual(stats.short_fraction, 0.25)
        self.assertEqual(LevelStats(1).short_fraction, 0.0)

    def test_short_epoch_levels_need_enough_epochs(self):
        levels = {
            NO_LEVEL: LevelStats(NO_LEVEL, epochs=300, original=300, short=300),
            0: LevelStats(0, epochs=300, original=300, short=100),
            1: LevelStats(1, epochs=100, original=100, short=100),
            2: LevelStats(2, epochs=300, original=300, short=30),
        }
        self.assertEqual(short_epoch_levels(levels, min_epochs=256, max_fraction=0.25), [0])

    def test_short_duration_threshold(self):
        self.assertLess(short_duration(0), 1)
        self.assertGreater(short_duration(5), 2)


class InstrumentationTests(SimpleTestCase):
    def setUp(self):
        self.instrumentation = Instrumentation(3)

    def test_epoch_classes_and_charged_cost(self):
        inst = self.instrumentation
        inst.on_incident_insertion(0, 1, NO_LEVEL, NO_LEVEL)
        # raised to level 0 with a palette below the level floor
        inst.on_recolor(0, 1, 3, 0, 2, 3, RecolorCause.INSERTION, 40, 1)
        # dropped back to level -1 as an induced recolor, no insertion in between
        inst.on_recolor(0, 3, 2, NO_LEVEL, None, 0, RecolorCause.INDUCED, 7, 2)

        levels = inst.finalize_epochs()
        self.assertEqual(list(levels), [NO_LEVEL, 0])

        bottom = levels[NO_LEVEL]
        self.assertEqual((bottom.epochs, bottom.original, bottom.final), (4, 1, 3))
        self.assertEqual(bottom.incident_insertions, 2)
        self.assertEqual(bottom.cost, 7)
        self.assertEqual(bottom.charged_cost, 0)

        raised = levels[0]
        self.assertEqual((raised.epochs, raised.induced, raised.short), (1, 1, 1))
        self.assertEqual(raised.cost, 40)
        self.assertEqual(raised.charged_cost, 47)

        self.assertEqual(len(inst.invariant_violations), 1)
        self.assertEqual(inst.invariant_violations[0].level, 0)

    def test_finalize_is_idempotent(self):
        first = self.instrumentation.finalize_epochs()
        second = self.instrumentation.finalize_epochs()
        self.assertIs(first, second)
        self.assertEqual(first[NO_LEVEL].final, 3)

    def test_palette_check(self):
        self.instrumentation.on_palette(0, 1, 3, 4)
        self.instrumentation.on_palette(0, 1, 2, 4)
        self.assertEqual(len(self.instrumentation.palette_violations), 1)

    def test_kept_epochs(self):
        inst = Instrumentation(2, keep_epochs=True)
        inst.on_recolor(1, 1, 2, NO_LEVEL, None, 0, RecolorCause.INSERTION, 5, 1)
        inst.finalize_epochs()
        self.assertEqual(len(inst.closed_epochs), 3)
        self.assertEqual(inst.closed_epochs[0].termination, 'original')

    def test_engine_work_lands_on_the_shared_meter(self):
        engine = ColoringEngine(EngineConfig(4, 3))
        engine.apply_update(UpdateEvent.insert(0, 1))

        meter = engine.instrumentation.meter
        self.assertIs(engine.meter, meter)
        self.assertGreater(meter.counters[WorkCategory.CONFLICTING_INSERT], 0)
        self.assertGreater(meter.counters[WorkCategory.DET_COLOR], 0)
        self.assertFalse(hasattr(engine.instrumentation, 'charge'))
