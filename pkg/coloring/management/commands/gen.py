from django.conf import settings
from django.core.management.base import BaseCommand

from coloring.exceptions import ColoringError
from coloring.generators import generate
from coloring.mixins import WorkloadCommandMixin, input_error, validated
from coloring.serializers import GenerateOptionsSerializer
from coloring.streams import write_stream


class Command(WorkloadCommandMixin, BaseCommand):
    help = 'Writes an oblivious update stream in the stream file format'

    def add_arguments(self, parser):
        self.add_generation_arguments(parser)
        parser.add_argument('--seed', type=int, default=settings.COLORING['DEFAULT_SEED'])
        parser.add_argument('--output', help='Write the stream here instead of stdout')

    def handle(self, *args, **options):
        data = validated(GenerateOptionsSerializer, {
            name: options.get(name) for name in ('n', 'delta', 'updates', 'model', 'p', 'window', 'hubs', 'seed')
        })
        try:
            header, events = generate(data['model'], data['n'], data['delta'], data['updates'], data['seed'],
                                      p=data['p'], window=data.get('window'), hubs=data.get('hubs'))
        except ColoringError as exc:
            raise input_error(f"[{exc.code}] {exc}")

        self.write_output(write_stream(header, events), options['output'])
        if options['output']:
            self.stdout.write(self.style.SUCCESS(f"Wrote {len(events)} events to {options['output']}"))
