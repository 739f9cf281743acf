"""Run orchestration: feed a stream to the engine, audit it, and summarize the run."""
import logging
import re
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .baseline import NaiveColoring, check_proper
from .engine import ColoringEngine, EngineConfig
from .exceptions import InvalidConfig, StreamEventError, UpdateRejected
from .generators import StreamModel, generate
from .instrumentation import CALL_BOUND_A, CALL_BOUND_B, WorkCategory, short_epoch_levels

logger = logging.getLogger(__name__)

AUDIT_RE = re.compile(r'^every[:(](\d+)\)?$')

VIOLATION_KINDS = ('proper', 'audit', 'level_floor', 'palette', 'call_bounds', 'level_cap', 'baseline_proper')


@dataclass(frozen=True)
class AuditPolicy:
    mode: str = 'end'
    interval: int = 0

    @classmethod
    def parse(cls, text):
        """Accepts `off`, `end`, `every:K` or `every(K)`."""
        text = (text or 'end').strip()
        if text in ('off', 'end'):
            return cls(text)
        match = AUDIT_RE.match(text)
        if not match or int(match.group(1)) < 1:
            raise InvalidConfig(f"audit policy must be off, end or every:K, got {text!r}")
        return cls('every', int(match.group(1)))

    def due(self, index):
        return self.mode == 'every' and index % self.interval == 0

    def __str__(self):
        return f"every:{self.interval}" if self.mode == 'every' else self.mode


@dataclass
class LevelRow:
    level: int
    epochs: int
    original: int
    induced: int
    final: int
    short: int
    short_fraction: float
    incident_insertions: int
    cost: int
    charged_cost: int
    classification: str


@dataclass
class RunReport:
    label: str
    seed: int
    n: int
    delta: int
    level_cap: int
    audit: str
    updates: int = 0
    insertions: int = 0
    deletions: int = 0
    skipped: int = 0
    conflicts: int = 0
    recolor_calls: int = 0
    det_colors: int = 0
    rand_colors: int = 0
    max_level: int = -1
    epochs: int = 0
    audits: int = 0
    preprocess_units: int = 0
    total_units: int = 0
    amortized_units: float = 0.0
    work: dict = field(default_factory=dict)
    levels: list = field(default_factory=list)
    short_epoch_levels: list = field(default_factory=list)
    violations: dict = field(default_factory=dict)
    baseline: dict | None = None

    @property
    def violation_count(self):
        return sum(len(found) for found in self.violations.values())

    @property
    def ok(self):
        return self.violation_count == 0


def run(header, events, seed=1, audit=None, baseline=False, skip_invalid=False, label='stream',
        bound_a=CALL_BOUND_A, bound_b=CALL_BOUND_B, short_min_epochs=256, short_max_fraction=0.25):
    policy = audit if isinstance(audit, AuditPolicy) else AuditPolicy.parse(audit)
    engine = ColoringEngine(EngineConfig(header.n, header.delta, seed), bound_a=bound_a, bound_b=bound_b)
    naive = NaiveColoring(header.n, header.delta) if baseline else None

    violations = {kind: [] for kind in VIOLATION_KINDS}
    audits = 0
    skipped = 0

    for index, event in enumerate(events, start=1):
        try:
            engine.apply_update(event)
        except UpdateRejected as exc:
            if not skip_invalid:
                raise StreamEventError(index, exc) from exc
            logger.warning("skipping event %d: [%s] %s", index, exc.code, exc)
            skipped += 1
            continue

        if naive is not None:
            naive.naive_apply_update(event)

        if policy.due(index):
            _audit(engine, naive, violations, index)
            audits += 1

    if policy.mode != 'off':
        _audit(engine, naive, violations, len(events))
        audits += 1

    instrumentation = engine.instrumentation
    levels = instrumentation.finalize_epochs()
    meter = engine.meter

    violations['level_floor'] = [str(found) for found in instrumentation.invariant_violations]
    violations['palette'] = [str(found) for found in instrumentation.palette_violations]
    violations['call_bounds'] = [str(found) for found in instrumentation.assert_call_bounds()]
    level_cap = engine.config.max_level
    if engine.max_level_seen > level_cap:
        violations['level_cap'].append(f"level {engine.max_level_seen} above cap {level_cap}")

    applied = len(events) - skipped
    report = RunReport(
        label=label,
        seed=seed,
        n=header.n,
        delta=header.delta,
        level_cap=level_cap,
        audit=str(policy),
        updates=applied,
        insertions=engine.insertions,
        deletions=engine.deletions,
        skipped=skipped,
        conflicts=engine.conflicts,
        recolor_calls=engine.recolor_calls,
        det_colors=engine.det_colors,
        rand_colors=engine.rand_colors,
        max_level=engine.max_level_seen,
        epochs=sum(stats.epochs for stats in levels.values()),
        audits=audits,
        preprocess_units=meter.counters[WorkCategory.PREPROCESS],
        total_units=meter.total,
        amortized_units=meter.update_units / applied if applied else 0.0,
        work=dict(meter.counters),
        levels=[
            LevelRow(
                level=stats.level,
                epochs=stats.epochs,
                original=stats.original,
                induced=stats.induced,
                final=stats.final,
                short=stats.short,
                short_fraction=stats.short_fraction,
                incident_insertions=stats.incident_insertions,
                cost=stats.cost,
                charged_cost=stats.charged_cost,
                classification=stats.classification,
            )
            for stats in levels.values()
        ],
        short_epoch_levels=short_epoch_levels(levels, short_min_epochs, short_max_fraction),
        violations=violations,
    )
    if naive is not None:
        report.baseline = {'work_units': naive.naive_work_units(), 'recolors': naive.recolors}
    return report


def _audit(engine, naive, violations, index):
    colors = engine.coloring()
    edges = engine.edges()
    for u, v in check_proper(colors, edges):
        violations['proper'].append(f"after event {index}: edge {u}-{v} shares color {colors[u]}")
    for issue in engine.graph.audit_structures():
        violations['audit'].append(f"after event {index}: {issue}")
    if naive is not None:
        for u, v in check_proper(naive.colors, naive.edges()):
            violations['baseline_proper'].append(f"after event {index}: edge {u}-{v}")


@dataclass(frozen=True)
class SweepCell:
    n: int
    delta: int
    updates: int
    model: str = StreamModel.CHURN
    p: float = 0.6
    window: int | None = None
    hubs: int | None = None
    seeds: tuple = (1,)
    audit: str = 'end'
    baseline: bool = False

    @property
    def label(self):
        params = {
            StreamModel.CHURN: f"p={self.p}",
            StreamModel.SLIDING_WINDOW: f"w={self.window}",
            StreamModel.STAR_STRESS: f"hubs={self.hubs or 'auto'}",
        }.get(self.model, '')
        return f"{self.model}({params}) n={self.n} delta={self.delta} t={self.updates}"


@dataclass
class ConfigSummary:
    label: str
    n: int
    delta: int
    updates: int
    runs: int
    mean_amortized: float
    min_amortized: float
    max_amortized: float
    preprocess_units: int
    violations: int


@dataclass
class BenchTable:
    rows: list = field(default_factory=list)
    summaries: list = field(default_factory=list)
    scaling_ratio: float = 0.0

    @property
    def violation_count(self):
        return sum(row.violation_count for row in self.rows)


def run_cell(cell, seed, runner=run, **options):
    header, events = generate(cell.model, cell.n, cell.delta, cell.updates, seed,
                              p=cell.p, window=cell.window, hubs=cell.hubs)
    return runner(header, events, seed=seed, audit=cell.audit, baseline=cell.baseline, label=cell.label, **options)


def _run_job(job):
    cell, seed, runner, options = job
    return run_cell(cell, seed, runner=runner, **options)


def bench(cells, workers=1, runner=None, **options):
    """
    One RunReport per (cell, seed), in sweep order, plus per-cell aggregates.

    With `workers` > 1 the cells run in separate processes; results are
    merged back in sweep order.
    """
    runner = runner or run
    jobs = [(cell, seed, runner, options) for cell in cells for seed in cell.seeds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_job, jobs))
    else:
        rows = [_run_job(job) for job in jobs]

    table = BenchTable(rows=rows)
    offset = 0
    for cell in cells:
        group = rows[offset:offset + len(cell.seeds)]
        offset += len(cell.seeds)
        if not group:
            continue
        amortized = [row.amortized_units for row in group]
        table.summaries.append(ConfigSummary(
            label=cell.label,
            n=cell.n,
            delta=cell.delta,
            updates=cell.updates,
            runs=len(group),
            mean_amortized=statistics.fmean(amortized),
            min_amortized=min(amortized),
            max_amortized=max(amortized),
            preprocess_units=group[0].preprocess_units,
            violations=sum(row.violation_count for row in group),
        ))

    means = [summary.mean_amortized for summary in table.summaries]
    if means and min(means) > 0:
        table.scaling_ratio = max(means) / min(means)
    return table
