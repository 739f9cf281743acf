import json
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from coloring.generators import StreamModel
from coloring.mixins import input_error
from coloring.serializers import REPORT_FORMATS, SweepCellSerializer
from coloring.services import ReportService


def int_list(text):
    return [int(part) for part in text.split(',') if part.strip()]


class Command(BaseCommand):
    help = 'Runs a sweep of generated workloads and prints one report row per configuration and seed'

    def add_arguments(self, parser):
        parser.add_argument('--sweep', help='JSON file holding a list of sweep cells')
        parser.add_argument('--n', type=int_list, default=[], help='Comma-separated vertex counts')
        parser.add_argument('--delta', type=int_list, default=[], help='Comma-separated degree caps')
        parser.add_argument('--updates', type=int, help='Events per configuration')
        parser.add_argument('--updates-per-vertex', type=int, help='Events per configuration, as a multiple of n')
        parser.add_argument('--model', choices=StreamModel.values, default=StreamModel.CHURN)
        parser.add_argument('--p', type=float, default=0.6)
        parser.add_argument('--window', type=int)
        parser.add_argument('--hubs', type=int)
        parser.add_argument('--seeds', type=int_list, default=[settings.COLORING['DEFAULT_SEED']])
        parser.add_argument('--audit', default=settings.COLORING['AUDIT_POLICY'])
        parser.add_argument('--baseline', action='store_true')
        parser.add_argument('--workers', type=int, help='Parallel worker processes')
        parser.add_argument('--report', choices=REPORT_FORMATS, default='json')
        parser.add_argument('--output', help='Write the report here instead of stdout')
        parser.add_argument('--strict', action='store_true')
        parser.add_argument('--save', action='store_true')

    def sweep_entries(self, options):
        if options['sweep']:
            try:
                entries = json.loads(Path(options['sweep']).read_text())
            except (OSError, ValueError) as exc:
                raise input_error(f"cannot load sweep {options['sweep']}: {exc}")
            if not isinstance(entries, list):
                raise input_error("a sweep file holds a JSON list of cells")
            return entries

        entries = []
        for n in options['n']:
            for delta in options['delta']:
                per_vertex = options['updates_per_vertex']
                entries.append({
                    'n': n,
                    'delta': delta,
                    'updates': per_vertex * n if per_vertex is not None else options['updates'],
                    'model': options['model'],
                    'p': options['p'],
                    'window': options['window'],
                    'hubs': options['hubs'],
                    'seeds': options['seeds'],
                    'audit': options['audit'],
                    'baseline': options['baseline'],
                })
        return entries

    def handle(self, *args, **options):
        cells = []
        for index, entry in enumerate(self.sweep_entries(options), start=1):
            serializer = SweepCellSerializer(data=entry)
            if not serializer.is_valid():
                raise input_error(f"sweep cell {index}: {serializer.errors}")
            cells.append(serializer.save())

        table = ReportService.run_sweep(cells, workers=options['workers'])
        if options['output']:
            Path(options['output']).write_text(ReportService.emit_report(table, options['report']))
        else:
            self.stdout.write(ReportService.emit_report(table, options['report']), ending='')

        if options['save']:
            for cell, row in zip((cell for cell in cells for _ in cell.seeds), table.rows):
                ReportService.save_report(row, cell.model)
            self.stderr.write(self.style.SUCCESS(f"Saved {len(table.rows)} runs"))

        for summary in table.summaries:
            self.stderr.write(f"{summary.label}: mean {summary.mean_amortized:.6g} units/update over {summary.runs} runs")

        if options['strict'] and table.violation_count:
            raise CommandError(f"{table.violation_count} violations found", returncode=1)
