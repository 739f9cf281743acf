from django.db import models

from .generators import StreamModel


class BenchRun(models.Model):
    MODEL_CHOICES = [('file', 'Stream file')] + StreamModel.choices

    label = models.CharField(max_length=120)
    model = models.CharField(max_length=20, choices=MODEL_CHOICES, default='file')
    n = models.IntegerField()
    delta = models.IntegerField()
    updates = models.BigIntegerField()
    seed = models.BigIntegerField()
    audit = models.CharField(max_length=20)
    conflicts = models.BigIntegerField(default=0)
    recolor_calls = models.BigIntegerField(default=0)
    max_level = models.IntegerField(default=-1)
    preprocess_units = models.BigIntegerField(default=0)
    total_units = models.BigIntegerField(default=0)
    amortized_units = models.FloatField(default=0.0)
    violation_count = models.IntegerField(default=0)
    report = models.JSONField()
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['n', 'delta'], name='benchrun_n_delta_idx'),
        ]

    def __str__(self):
        return f"{self.label} seed={self.seed} ({self.amortized_units:.3f} units/update)"

    @property
    def passed(self):
        return self.violation_count == 0


class LevelSummary(models.Model):
    run = models.ForeignKey(BenchRun, on_delete=models.CASCADE, related_name='levels')
    level = models.IntegerField()
    epochs = models.BigIntegerField(default=0)
    original = models.BigIntegerField(default=0)
    induced = models.BigIntegerField(default=0)
    final = models.BigIntegerField(default=0)
    short = models.BigIntegerField(default=0)
    incident_insertions = models.BigIntegerField(default=0)
    classification = models.CharField(max_length=20, blank=True)

    class Meta:
        ordering = ['level']
        unique_together = ('run', 'level')

    def __str__(self):
        return f"level {self.level}: {self.epochs} epochs ({self.classification})"
