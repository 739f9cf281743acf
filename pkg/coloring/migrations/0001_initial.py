import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='BenchRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('label', models.CharField(max_length=120)),
                ('model', models.CharField(choices=[('file', 'Stream file'), ('churn', 'Churn'), ('sliding-window', 'Sliding window'), ('star-stress', 'Star stress')], default='file', max_length=20)),
                ('n', models.IntegerField()),
                ('delta', models.IntegerField()),
                ('updates', models.BigIntegerField()),
                ('seed', models.BigIntegerField()),
                ('audit', models.CharField(max_length=20)),
                ('conflicts', models.BigIntegerField(default=0)),
                ('recolor_calls', models.BigIntegerField(default=0)),
                ('max_level', models.IntegerField(default=-1)),
                ('preprocess_units', models.BigIntegerField(default=0)),
                ('total_units', models.BigIntegerField(default=0)),
                ('amortized_units', models.FloatField(default=0.0)),
                ('violation_count', models.IntegerField(default=0)),
                ('report', models.JSONField()),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['n', 'delta'], name='benchrun_n_delta_idx')],
            },
        ),
        migrations.CreateModel(
            name='LevelSummary',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('level', models.IntegerField()),
                ('epochs', models.BigIntegerField(default=0)),
                ('original', models.BigIntegerField(default=0)),
                ('induced', models.BigIntegerField(default=0)),
                ('final', models.BigIntegerField(default=0)),
                ('short', models.BigIntegerField(default=0)),
                ('incident_insertions', models.BigIntegerField(default=0)),
                ('classification', models.CharField(blank=True, max_length=20)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='levels', to='coloring.benchrun')),
            ],
            options={
                'ordering': ['level'],
                'unique_together': {('run', 'level')},
            },
        ),
    ]
