from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from coloring.mixins import WorkloadCommandMixin
from coloring.serializers import REPORT_FORMATS
from coloring.services import ReportService


class Command(WorkloadCommandMixin, BaseCommand):
    help = 'Feeds an update stream to the coloring engine and prints a run report'

    def add_arguments(self, parser):
        self.add_stream_arguments(parser)
        parser.add_argument('--audit', help="Audit policy: off, end or every:K")
        parser.add_argument('--report', choices=REPORT_FORMATS, default='json')
        parser.add_argument('--output', help='Write the report here instead of stdout')
        parser.add_argument('--strict', action='store_true', help='Exit with status 1 when violations are found')
        parser.add_argument('--save', action='store_true', help='Archive the report in the database')

    def handle(self, *args, **options):
        header, events, model = self.load_stream(options)
        run_options = self.run_options(options, settings.COLORING['AUDIT_POLICY'])
        label = options['stream'] or model

        report = self.execute_run(ReportService, header, events, options, run_options['audit'], label)
        self.write_output(ReportService.emit_report(report, run_options['report']), options['output'])

        if options['save']:
            bench_run = ReportService.save_report(report, model)
            self.stderr.write(self.style.SUCCESS(f"Saved run #{bench_run.pk}"))

        if options['strict'] and not report.ok:
            raise CommandError(f"{report.violation_count} violations found", returncode=1)
