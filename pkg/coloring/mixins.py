import sys
from pathlib import Path

from django.conf import settings
from django.core.management.base import CommandError

from .exceptions import ColoringError, StreamEventError, StreamParseError
from .generators import StreamModel, generate
from .serializers import GenerateOptionsSerializer, RunOptionsSerializer
from .streams import parse_stream


def input_error(message):
    return CommandError(message, returncode=2)


def validated(serializer_class, data):
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        problems = '; '.join(
            f"{field}: {' '.join(str(error) for error in errors)}"
            for field, errors in serializer.errors.items()
        )
        raise input_error(f"invalid options: {problems}")
    return serializer.validated_data


class WorkloadCommandMixin:
    """Arguments and stream loading shared by `run` and `verify`."""

    def add_generation_arguments(self, parser):
        parser.add_argument('--n', type=int, help='Vertex count of a generated stream')
        parser.add_argument('--delta', type=int, help='Degree cap of a generated stream')
        parser.add_argument('--updates', type=int, help='Number of generated events')
        parser.add_argument('--model', choices=StreamModel.values, default=StreamModel.CHURN)
        parser.add_argument('--p', type=float, default=0.6, help='Insertion probability for churn')
        parser.add_argument('--window', type=int, help='Live-edge window for sliding-window')
        parser.add_argument('--hubs', type=int, help='Hub count for star-stress')

    def add_stream_arguments(self, parser):
        parser.add_argument('stream', nargs='?', help="Stream file, or '-' for stdin; omit to generate one")
        self.add_generation_arguments(parser)
        parser.add_argument('--seed', type=int, default=settings.COLORING['DEFAULT_SEED'])
        parser.add_argument('--stream-seed', type=int, help='Seed for a generated stream (defaults to --seed)')
        parser.add_argument('--baseline', action='store_true', help='Run the naive recoloring alongside')
        parser.add_argument('--skip-invalid', action='store_true', help='Warn on rejected events instead of aborting')

    def read_stream(self, path):
        try:
            if path == '-':
                return parse_stream(sys.stdin.read())
            return parse_stream(Path(path).read_text())
        except OSError as exc:
            raise input_error(f"cannot read stream {path}: {exc}")
        except StreamParseError as exc:
            raise input_error(f"[{exc.code}] {exc}")

    def load_stream(self, options):
        """(header, events, model) from a file or from the generation flags."""
        if options.get('stream'):
            header, events = self.read_stream(options['stream'])
            return header, events, 'file'

        stream_seed = options.get('stream_seed')
        data = validated(GenerateOptionsSerializer, {
            'n': options.get('n'),
            'delta': options.get('delta'),
            'updates': options.get('updates'),
            'model': options.get('model'),
            'p': options.get('p'),
            'window': options.get('window'),
            'hubs': options.get('hubs'),
            'seed': options['seed'] if stream_seed is None else stream_seed,
        })
        try:
            header, events = generate(data['model'], data['n'], data['delta'], data['updates'], data['seed'],
                                      p=data['p'], window=data.get('window'), hubs=data.get('hubs'))
        except ColoringError as exc:
            raise input_error(f"[{exc.code}] {exc}")
        return header, events, data['model']

    def run_options(self, options, audit_default):
        return validated(RunOptionsSerializer, {
            'seed': options['seed'],
            'audit': options.get('audit') or audit_default,
            'report': options.get('report') or 'json',
        })

    def execute_run(self, service, header, events, options, audit, label):
        try:
            return service.run_stream(header, events, seed=options['seed'], audit=audit,
                                      baseline=options['baseline'], skip_invalid=options['skip_invalid'],
                                      label=label)
        except StreamEventError as exc:
            raise input_error(f"[{exc.code}] {exc}")

    def write_output(self, text, path=None):
        if path:
            Path(path).write_text(text)
        else:
            self.stdout.write(text, ending='')
