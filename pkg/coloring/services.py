import csv
import io
import json

from django.conf import settings
from django.db import transaction

from .instrumentation import WorkCategory
from .models import BenchRun, LevelSummary
from .serializers import BenchTableSerializer, RunReportSerializer
from .timing import RunLogger
from .workload import BenchTable, bench, run

# Headline columns of the CSV report, in order. After them come one
# `work_<category>` column per work category, then one `L<level>_<stat>`
# column per level seen in any row and per LEVEL_COLUMNS entry.
CSV_FIELDS = [
    'label', 'seed', 'n', 'delta', 'level_cap', 'audit', 'updates', 'insertions', 'deletions',
    'skipped', 'conflicts', 'recolor_calls', 'det_colors', 'rand_colors', 'max_level', 'epochs',
    'audits', 'preprocess_units', 'total_units', 'amortized_units', 'violation_count',
    'baseline_work_units', 'baseline_recolors',
]
LEVEL_COLUMNS = [
    'epochs', 'original', 'induced', 'final', 'short', 'short_fraction',
    'incident_insertions', 'cost', 'charged_cost', 'classification',
]


def _options():
    config = settings.COLORING
    return {
        'bound_a': config['CALL_BOUND_A'],
        'bound_b': config['CALL_BOUND_B'],
        'short_min_epochs': config['SHORT_EPOCH_MIN_EPOCHS'],
        'short_max_fraction': config['SHORT_EPOCH_MAX_FRACTION'],
    }


class ReportService:

    @staticmethod
    def run_stream(header, events, seed, audit, baseline=False, skip_invalid=False, label='stream'):
        runner = RunLogger(run)
        return runner(header, events, seed=seed, audit=audit, baseline=baseline,
                      skip_invalid=skip_invalid, label=label, **_options())

    @staticmethod
    def run_sweep(cells, workers=None):
        workers = workers or settings.COLORING['BENCH_WORKERS']
        return bench(cells, workers=workers, runner=RunLogger(run), **_options())

    @staticmethod
    def to_data(result):
        if isinstance(result, BenchTable):
            return BenchTableSerializer(result).data
        return RunReportSerializer(result).data

    @staticmethod
    def emit_report(result, fmt='json'):
        data = ReportService.to_data(result)
        if fmt == 'json':
            return json.dumps(data, indent=2) + '\n'
        if fmt == 'csv':
            rows = data['rows'] if isinstance(result, BenchTable) else [data]
            return ReportService._to_csv(rows)
        raise ValueError(f"unknown report format {fmt!r}")

    @staticmethod
    def csv_header(rows):
        levels = sorted({row['level'] for data in rows for row in data['levels']})
        work = [f"work_{category}" for category in WorkCategory.values]
        per_level = [f"L{level}_{column}" for level in levels for column in LEVEL_COLUMNS]
        return CSV_FIELDS + work + per_level

    @staticmethod
    def _to_csv(rows):
        header = ReportService.csv_header(rows)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=header, restval='', lineterminator='\n')
        writer.writeheader()
        for data in rows:
            flat = {name: data[name] for name in CSV_FIELDS if name in data}
            baseline = data.get('baseline') or {}
            flat['baseline_work_units'] = baseline.get('work_units', '')
            flat['baseline_recolors'] = baseline.get('recolors', '')
            for category, units in data['work'].items():
                flat[f"work_{category}"] = units
            for row in data['levels']:
                for column in LEVEL_COLUMNS:
                    flat[f"L{row['level']}_{column}"] = row[column]
            writer.writerow(flat)
        return buffer.getvalue()

    @staticmethod
    @transaction.atomic
    def save_report(report, model='file'):
        bench_run = BenchRun.objects.create(
            label=report.label,
            model=model,
            n=report.n,
            delta=report.delta,
            updates=report.updates,
            seed=report.seed,
            audit=report.audit,
            conflicts=report.conflicts,
            recolor_calls=report.recolor_calls,
            max_level=report.max_level,
            preprocess_units=report.preprocess_units,
            total_units=report.total_units,
            amortized_units=report.amortized_units,
            violation_count=report.violation_count,
            report=json.loads(json.dumps(RunReportSerializer(report).data)),
        )
        LevelSummary.objects.bulk_create([
            LevelSummary(
                run=bench_run,
                level=row.level,
                epochs=row.epochs,
                original=row.original,
                induced=row.induced,
                final=row.final,
                short=row.short,
                incident_insertions=row.incident_insertions,
                classification=row.classification,
            )
            for row in report.levels
        ])
        return bench_run

    @staticmethod
    def verify_checks(report):
        """(name, passed, detail) per acceptance property, in a fixed order."""
        violations = report.violations
        checks = [
            ('proper coloring', violations['proper'] + violations['baseline_proper']),
            ('structural audit', violations['audit']),
            ('level floor', violations['level_floor']),
            ('palette bound', violations['palette']),
            ('call bounds', violations['call_bounds']),
            ('level cap', violations['level_cap']),
            ('short epochs', [f"level {level}" for level in report.short_epoch_levels]),
        ]
        results = []
        for name, found in checks:
            detail = f"{len(found)} found" + (f", first: {found[0]}" if found else '')
            results.append((name, not found, detail))
        return results
