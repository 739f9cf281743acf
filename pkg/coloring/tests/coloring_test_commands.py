import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from coloring.generators import generate
from coloring.models import BenchRun
from coloring.streams import parse_stream, write_stream


class CommandTestMixin:
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write_file(self, name, text):
        path = Path(self.tmp.name) / name
        path.write_text(text)
        return str(path)

    def call(self, *args, **options):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err, **options)
        return out.getvalue(), err.getvalue()


class GenCommandTests(CommandTestMixin, SimpleTestCase):
    def test_writes_the_generated_stream(self):
        out, _ = self.call('gen', '--n', '30', '--delta', '4', '--updates', '100', '--seed', '5')
        header, events = parse_stream(out)
        self.assertEqual((header.n, header.delta, len(events)), (30, 4, 100))
        self.assertEqual(out, write_stream(*generate('churn', 30, 4, 100, 5)))

    def test_writes_to_a_file(self):
        target = str(Path(self.tmp.name) / 'stream.txt')
        out, _ = self.call('gen', '--n', '30', '--delta', '4', '--updates', '50',
                           '--model', 'sliding-window', '--window', '20', '--output', target)
        self.assertIn('Wrote 50 events', out)
        self.assertEqual(len(parse_stream(Path(target).read_text())[1]), 50)

    def test_missing_size_is_an_input_error(self):
        with self.assertRaises(CommandError) as caught:
            self.call('gen', '--delta', '4', '--updates', '10')
        self.assertEqual(caught.exception.returncode, 2)


class RunCommandTests(CommandTestMixin, SimpleTestCase):
    def setUp(self):
        super().setUp()
        header, events = generate('churn', 40, 5, 400, 3)
        self.stream = self.write_file('churn.txt', write_stream(header, events))

    def test_json_report_for_a_stream_file(self):
        out, _ = self.call('run', self.stream, '--seed', '2', '--audit', 'every:100', '--baseline')
        data = json.loads(out)
        self.assertEqual(data['label'], self.stream)
        self.assertEqual(data['seed'], 2)
        self.assertEqual(data['updates'], 400)
        self.assertEqual(data['audit'], 'every:100')
        self.assertEqual(data['violation_count'], 0)
        self.assertIsNotNone(data['baseline'])

    def test_reports_are_reproducible(self):
        first, _ = self.call('run', self.stream, '--seed', '7')
        second, _ = self.call('run', self.stream, '--seed', '7')
        self.assertEqual(first, second)

    def test_csv_report_for_a_generated_stream(self):
        out, _ = self.call('run', '--n', '40', '--delta', '5', '--updates', '200', '--report', 'csv')
        lines = out.splitlines()
        self.assertEqual(len(lines), 2)
        self.assertTrue(lines[0].startswith('label,seed,n,delta'))

    def test_malformed_stream_is_an_input_error(self):
        path = self.write_file('broken.txt', "n=4 delta=3\n+ 0 9\n")
        with self.assertRaises(CommandError) as caught:
            self.call('run', path)
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('line 2', str(caught.exception))

    def test_rejected_event_is_an_input_error_unless_skipped(self):
        path = self.write_file('dup.txt', "n=4 delta=3\n+ 0 1\n+ 1 0\n")
        with self.assertRaises(CommandError) as caught:
            self.call('run', path)
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('event 2', str(caught.exception))

        out, _ = self.call('run', path, '--skip-invalid')
        self.assertEqual(json.loads(out)['skipped'], 1)

    def test_bad_audit_policy_is_an_input_error(self):
        with self.assertRaises(CommandError) as caught:
            self.call('run', self.stream, '--audit', 'sometimes')
        self.assertEqual(caught.exception.returncode, 2)

    def test_strict_run_fails_on_violations(self):
        with patch('coloring.workload.check_proper', return_value=[(0, 1)]):
            with self.assertRaises(CommandError) as caught:
                self.call('run', self.stream, '--strict')
        self.assertEqual(caught.exception.returncode, 1)

    def test_violations_without_strict_still_succeed(self):
        with patch('coloring.workload.check_proper', return_value=[(0, 1)]):
            out, _ = self.call('run', self.stream)
        self.assertEqual(json.loads(out)['violation_count'], 1)


class VerifyCommandTests(CommandTestMixin, SimpleTestCase):
    def test_every_check_passes_on_a_clean_run(self):
        out, _ = self.call('verify', '--n', '40', '--delta', '5', '--updates', '150', '--audit', 'every:10')
        for name in ('proper coloring', 'structural audit', 'level floor', 'palette bound',
                     'call bounds', 'level cap', 'short epochs'):
            self.assertIn(f'PASS {name}', out)
        self.assertNotIn('FAIL', out)

    def test_failed_check_exits_with_one(self):
        out = StringIO()
        with patch('coloring.workload.check_proper', return_value=[(0, 1)]):
            with self.assertRaises(CommandError) as caught:
                call_command('verify', '--n', '40', '--delta', '5', '--updates', '150', stdout=out)
        self.assertEqual(caught.exception.returncode, 1)
        self.assertIn('FAIL proper coloring', out.getvalue())


class BenchCommandTests(CommandTestMixin, SimpleTestCase):
    def test_flag_sweep(self):
        out, err = self.call('bench', '--n', '30,60', '--delta', '4', '--updates-per-vertex', '10',
                             '--seeds', '1,2')
        data = json.loads(out)
        self.assertEqual([(row['n'], row['seed']) for row in data['rows']], [(30, 1), (30, 2), (60, 1), (60, 2)])
        self.assertEqual([row['updates'] for row in data['rows']], [300, 300, 600, 600])
        self.assertEqual(len(data['summaries']), 2)
        self.assertIn('units/update', err)

    def test_sweep_file(self):
        sweep = self.write_file('sweep.json', json.dumps([
            {'n': 30, 'delta': 4, 'updates': 200, 'seeds': [4]},
            {'n': 30, 'delta': 4, 'updates': 200, 'model': 'star-stress', 'hubs': 2},
        ]))
        out, _ = self.call('bench', '--sweep', sweep)
        data = json.loads(out)
        self.assertEqual([row['seed'] for row in data['rows']], [4, 1])
        self.assertEqual(data['violation_count'], 0)

    def test_empty_sweep(self):
        out, _ = self.call('bench')
        data = json.loads(out)
        self.assertEqual((data['rows'], data['summaries']), ([], []))

    def test_invalid_cell_is_an_input_error(self):
        sweep = self.write_file('sweep.json', json.dumps([{'n': 30, 'delta': 4, 'updates': 20, 'model': 'sliding-window'}]))
        with self.assertRaises(CommandError) as caught:
            self.call('bench', '--sweep', sweep)
        self.assertEqual(caught.exception.returncode, 2)


class ReportArchiveTests(CommandTestMixin, TestCase):
    def test_run_save_stores_report_and_levels(self):
        out, err = self.call('run', '--n', '40', '--delta', '5', '--updates', '300', '--seed', '3', '--save')
        data = json.loads(out)

        bench_run = BenchRun.objects.get()
        self.assertIn(f'Saved run #{bench_run.pk}', err)
        self.assertEqual(bench_run.model, 'churn')
        self.assertEqual((bench_run.n, bench_run.delta, bench_run.seed), (40, 5, 3))
        self.assertEqual(bench_run.report, data)
        self.assertTrue(bench_run.passed)
        self.assertEqual(
            list(bench_run.levels.values_list('level', flat=True)),
            [row['level'] for row in data['levels']],
        )

    def test_bench_save_stores_every_row(self):
        self.call('bench', '--n', '30', '--delta', '4', '--updates', '100', '--seeds', '1,2,3', '--save')
        self.assertEqual(BenchRun.objects.count(), 3)
        self.assertEqual(sorted(BenchRun.objects.values_list('seed', flat=True)), [1, 2, 3])
