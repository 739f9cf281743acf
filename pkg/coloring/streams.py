import re
from dataclasses import dataclass

from django.db import models

from .exceptions import HeaderMissing, StreamParseError

HEADER_RE = re.compile(r'^n=(\d+) delta=(\d+)$')
EVENT_RE = re.compile(r'^([+-]) (\d+) (\d+)$')


class EventKind(models.TextChoices):
    INSERT = '+', 'Insert'
    DELETE = '-', 'Delete'


@dataclass(frozen=True, slots=True)
class UpdateEvent:
    kind: str
    u: int
    v: int

    @classmethod
    def insert(cls, u, v):
        return cls(EventKind.INSERT, u, v)

    @classmethod
    def delete(cls, u, v):
        return cls(EventKind.DELETE, u, v)

    @property
    def is_insert(self):
        return self.kind == EventKind.INSERT

    def __str__(self):
        return f"{self.kind} {self.u} {self.v}"


@dataclass(frozen=True, slots=True)
class StreamHeader:
    n: int
    delta: int

    def __str__(self):
        return f"n={self.n} delta={self.delta}"


def parse_stream(text):
    """
    Parse a stream file into its header and events.

    Line 1 (after any `#` comments) is `n=<int> delta=<int>`; every other
    line is `+ <u> <v>` or `- <u> <v>` with 0-based ids below n.
    """
    header = None
    events = []

    for number, line in enumerate(text.splitlines(), start=1):
        if line.startswith('#'):
            continue

        if header is None:
            match = HEADER_RE.match(line)
            if not match:
                raise HeaderMissing(number, "expected 'n=<int> delta=<int>'")
            n, delta = int(match.group(1)), int(match.group(2))
            if n < 1 or delta < 1:
                raise StreamParseError(number, "n and delta must be at least 1")
            header = StreamHeader(n, delta)
            continue

        match = EVENT_RE.match(line)
        if not match:
            raise StreamParseError(number, f"malformed event {line!r}")

        u, v = int(match.group(2)), int(match.group(3))
        if u >= header.n or v >= header.n:
            raise StreamParseError(number, f"vertex id out of range for n={header.n}")
        events.append(UpdateEvent(EventKind(match.group(1)), u, v))

    if header is None:
        raise HeaderMissing(1, "empty stream")

    return header, events


def write_stream(header, events):
    lines = [str(header)]
    lines.extend(str(event) for event in events)
    return '\n'.join(lines) + '\n'
