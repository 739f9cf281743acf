import random

from django.test import SimpleTestCase

from coloring.baseline import NaiveColoring, check_proper
from coloring.engine import ColoringEngine, EngineConfig
from coloring.exceptions import HeaderMissing, InvalidConfig, StreamParseError
from coloring.generators import StreamModel, _LiveGraph, churn, generate, sliding_window, star_stress
from coloring.streams import StreamHeader, UpdateEvent, parse_stream, write_stream


class ParseStreamTests(SimpleTestCase):
    def test_header_and_events(self):
        header, events = parse_stream("n=4 delta=3\n+ 0 1\n- 0 1\n")
        self.assertEqual(header, StreamHeader(4, 3))
        self.assertEqual(events, [UpdateEvent.insert(0, 1), UpdateEvent.delete(0, 1)])
        self.assertTrue(events[0].is_insert)
        self.assertFalse(events[1].is_insert)

    def test_comment_lines_are_skipped(self):
        header, events = parse_stream("# generated\nn=4 delta=3\n# warmup\n+ 2 3\n")
        self.assertEqual(header.n, 4)
        self.assertEqual(events, [UpdateEvent.insert(2, 3)])

    def test_out_of_range_id_reports_its_line(self):
        with self.assertRaises(StreamParseError) as caught:
            parse_stream("n=4 delta=3\n+ 0 9\n")
        self.assertEqual(caught.exception.line, 2)
        self.assertEqual(caught.exception.code, 'parse-error')

    def test_malformed_event(self):
        for line in ("+ 0  1", "* 0 1", "+ 0", "+ -1 2", "+ a b"):
            with self.subTest(line=line):
                with self.assertRaises(StreamParseError) as caught:
                    parse_stream(f"n=4 delta=3\n+ 0 1\n{line}\n")
                self.assertEqual(caught.exception.line, 3)

    def test_missing_header(self):
        with self.assertRaises(HeaderMissing):
            parse_stream("+ 0 1\n")
        with self.assertRaises(HeaderMissing):
            parse_stream("")
        with self.assertRaises(StreamParseError):
            parse_stream("n=0 delta=3\n")

    def test_canonical_text_is_written_back_unchanged(self):
        text = "n=5 delta=2\n+ 0 1\n+ 3 4\n- 1 0\n"
        self.assertEqual(write_stream(*parse_stream(text)), text)


class GeneratorTests(SimpleTestCase):
    def assertFeasible(self, n, delta, events):
        naive = NaiveColoring(n, delta)
        for event in events:
            naive.naive_apply_update(event)
        return naive

    def test_churn_with_p_one_only_inserts(self):
        events = churn(20, 3, 20, seed=2, p=1.0)
        self.assertEqual(len(events), 20)
        self.assertTrue(all(event.is_insert for event in events))
        self.assertFeasible(20, 3, events)

    def test_churn_mixes_insertions_and_deletions(self):
        events = churn(50, 5, 600, seed=9, p=0.6)
        kinds = {event.is_insert for event in events}
        self.assertEqual(kinds, {True, False})
        self.assertFeasible(50, 5, events)

    def test_churn_saturation_is_reported(self):
        with self.assertRaises(InvalidConfig):
            churn(4, 1, 10, seed=1, p=1.0)
        with self.assertRaises(InvalidConfig):
            churn(4, 2, 10, seed=1, p=1.5)

    def test_sliding_window_holds_w_live_edges(self):
        events = sliding_window(30, 4, 60, seed=3, window=20)
        live = sum(1 if event.is_insert else -1 for event in events)
        self.assertEqual(live, 20)
        self.assertTrue(all(event.is_insert for event in events[:20]))
        naive = self.assertFeasible(30, 4, events)
        self.assertEqual(len(naive.edges()), 20)

    def test_window_larger_than_the_graph_is_refused(self):
        with self.assertRaises(InvalidConfig):
            sliding_window(10, 2, 50, seed=1, window=11)

    def test_star_stress_concentrates_on_hubs(self):
        events = star_stress(40, 39, 500, seed=6, hubs=2)
        naive = self.assertFeasible(40, 39, events)
        top_two = sorted((naive.degree(v) for v in range(40)), reverse=True)[:2]
        self.assertGreater(min(top_two), 10)

    def test_saturated_churn_still_produces_the_full_stream(self):
        n, delta = 2000, 4
        events = churn(n, delta, 40000, seed=1, p=0.6)
        self.assertEqual(len(events), 40000)

        live = peak = 0
        for event in events:
            live += 1 if event.is_insert else -1
            peak = max(peak, live)
        self.assertGreater(peak, 0.9 * n * delta // 2)
        self.assertFeasible(n, delta, events)

    def test_open_vertices_track_the_degree_cap(self):
        live = _LiveGraph(4, 2, random.Random(1))
        live.add(0, 1)
        live.add(0, 2)
        self.assertEqual(sorted(live.open), [1, 2, 3])
        self.assertIsNone(live.random_pair(anchor=0))

        live.remove(0, 1)
        self.assertEqual(sorted(live.open), [0, 1, 2, 3])
        pairs = sorted(tuple(sorted(pair)) for pair in live.open_pairs())
        self.assertEqual(pairs, [(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)])

    def test_star_stress_links_neighbors_of_hubs(self):
        n, delta = 200, 20
        events = star_stress(n, delta, 4000, seed=3)
        # the generator draws its n // delta hubs first
        hubs = set(random.Random(3).sample(range(n), n // delta))
        chords = [event for event in events if event.is_insert and not {event.u, event.v} & hubs]
        self.assertTrue(chords)
        self.assertFeasible(n, delta, events)

    def test_star_stress_keeps_conflicts_coming(self):
        n, delta = 200, 20
        engine = ColoringEngine(EngineConfig(n, delta, 1))
        for event in star_stress(n, delta, 4000, seed=3):
            engine.apply_update(event)

        self.assertGreater(engine.conflicts, 20)
        self.assertEqual(check_proper(engine.coloring(), engine.edges()), [])
        self.assertEqual(engine.instrumentation.invariant_violations, [])

    def test_same_parameters_give_the_same_stream(self):
        for model in StreamModel.values:
            with self.subTest(model=model):
                first = generate(model, 40, 6, 300, 7, p=0.6, window=30)
                second = generate(model, 40, 6, 300, 7, p=0.6, window=30)
                self.assertEqual(first, second)

    def test_generate_validates_its_inputs(self):
        with self.assertRaises(InvalidConfig):
            generate(StreamModel.SLIDING_WINDOW, 10, 3, 5, 1)
        with self.assertRaises(InvalidConfig):
            generate('zigzag', 10, 3, 5, 1)
        with self.assertRaises(InvalidConfig):
            generate(StreamModel.CHURN, 10, 3, -1, 1)
