import json
import logging
import time

# Dedicated logger for per-run records
logger = logging.getLogger('coloring.runs')


class RunLogger:
    """
    Wraps a workload runner and logs one JSON line per run: sizes, counts,
    amortized work and wall time. Reports stay free of timing; it only
    reaches the log file.
    """

    def __init__(self, run_fn):
        self.run_fn = run_fn

    def __call__(self, header, events, **options):
        start_time = time.perf_counter()

        report = self.run_fn(header, events, **options)

        duration = time.perf_counter() - start_time

        if not self._should_log(events):
            return report

        log_data = {
            'label': report.label,
            'n': report.n,
            'delta': report.delta,
            'seed': report.seed,
            'events': len(events),
            'audit': report.audit,
            'conflicts': report.conflicts,
            'recolor_calls': report.recolor_calls,
            'amortized_units': round(report.amortized_units, 4),
            'violations': report.violation_count,
            'duration_ms': round(duration * 1000, 2),
        }
        logger.info(json.dumps(log_data))

        return report

    def _should_log(self, events) -> bool:
        """Empty streams carry nothing worth a log line."""
        return len(events) > 0
