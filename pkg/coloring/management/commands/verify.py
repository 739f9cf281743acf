from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from coloring.mixins import WorkloadCommandMixin
from coloring.services import ReportService


class Command(WorkloadCommandMixin, BaseCommand):
    help = 'Runs a stream with frequent audits and the baseline, then checks every acceptance property'

    def add_arguments(self, parser):
        self.add_stream_arguments(parser)
        parser.add_argument('--audit', help="Audit policy (defaults to the verify policy in settings)")

    def handle(self, *args, **options):
        header, events, model = self.load_stream(options)
        run_options = self.run_options(options, settings.COLORING['VERIFY_AUDIT_POLICY'])
        options['baseline'] = True

        report = self.execute_run(ReportService, header, events, options, run_options['audit'],
                                  options['stream'] or model)

        failed = 0
        for name, passed, detail in ReportService.verify_checks(report):
            if passed:
                self.stdout.write(self.style.SUCCESS(f"PASS {name}: {detail}"))
            else:
                failed += 1
                self.stdout.write(self.style.ERROR(f"FAIL {name}: {detail}"))

        if failed:
            raise CommandError(f"{failed} checks failed", returncode=1)
        self.stdout.write(
            f"n={report.n} delta={report.delta} updates={report.updates} "
            f"amortized={report.amortized_units:.6g} max_level={report.max_level}"
        )
