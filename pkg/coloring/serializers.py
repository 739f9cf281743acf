from rest_framework import serializers

from .exceptions import InvalidConfig
from .generators import StreamModel
from .workload import AuditPolicy, SweepCell

REPORT_FORMATS = ['json', 'csv']


class SignificantFloatField(serializers.FloatField):
    """Floats rounded to 6 significant digits."""

    def to_representation(self, value):
        return float(f"{float(value):.6g}")


class LevelRowSerializer(serializers.Serializer):
    level = serializers.IntegerField()
    epochs = serializers.IntegerField()
    original = serializers.IntegerField()
    induced = serializers.IntegerField()
    final = serializers.IntegerField()
    short = serializers.IntegerField()
    short_fraction = SignificantFloatField()
    incident_insertions = serializers.IntegerField()
    cost = serializers.IntegerField()
    charged_cost = serializers.IntegerField()
    classification = serializers.CharField()


class RunReportSerializer(serializers.Serializer):
    label = serializers.CharField()
    seed = serializers.IntegerField()
    n = serializers.IntegerField()
    delta = serializers.IntegerField()
    level_cap = serializers.IntegerField()
    audit = serializers.CharField()
    updates = serializers.IntegerField()
    insertions = serializers.IntegerField()
    deletions = serializers.IntegerField()
    skipped = serializers.IntegerField()
    conflicts = serializers.IntegerField()
    recolor_calls = serializers.IntegerField()
    det_colors = serializers.IntegerField()
    rand_colors = serializers.IntegerField()
    max_level = serializers.IntegerField()
    epochs = serializers.IntegerField()
    audits = serializers.IntegerField()
    preprocess_units = serializers.IntegerField()
    total_units = serializers.IntegerField()
    amortized_units = SignificantFloatField()
    work = serializers.DictField(child=serializers.IntegerField())
    levels = LevelRowSerializer(many=True)
    short_epoch_levels = serializers.ListField(child=serializers.IntegerField())
    violation_count = serializers.IntegerField()
    violations = serializers.DictField(child=serializers.ListField(child=serializers.CharField()))
    baseline = serializers.DictField(child=serializers.IntegerField(), allow_null=True)


class ConfigSummarySerializer(serializers.Serializer):
    label = serializers.CharField()
    n = serializers.IntegerField()
    delta = serializers.IntegerField()
    updates = serializers.IntegerField()
    runs = serializers.IntegerField()
    mean_amortized = SignificantFloatField()
    min_amortized = SignificantFloatField()
    max_amortized = SignificantFloatField()
    preprocess_units = serializers.IntegerField()
    violations = serializers.IntegerField()


class BenchTableSerializer(serializers.Serializer):
    rows = RunReportSerializer(many=True)
    summaries = ConfigSummarySerializer(many=True)
    scaling_ratio = SignificantFloatField()
    violation_count = serializers.IntegerField()


class AuditPolicyField(serializers.CharField):
    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            AuditPolicy.parse(text)
        except InvalidConfig as exc:
            raise serializers.ValidationError(str(exc))
        return text


class GenerateOptionsSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=1)
    delta = serializers.IntegerField(min_value=1)
    updates = serializers.IntegerField(min_value=0)
    model = serializers.ChoiceField(choices=StreamModel.choices, default=StreamModel.CHURN)
    p = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.6)
    window = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    hubs = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    seed = serializers.IntegerField(min_value=0)

    def validate(self, attrs):
        if attrs['model'] == StreamModel.SLIDING_WINDOW and not attrs.get('window'):
            raise serializers.ValidationError({'window': "sliding-window needs --window"})
        return attrs


class RunOptionsSerializer(serializers.Serializer):
    seed = serializers.IntegerField(min_value=0)
    audit = AuditPolicyField()
    report = serializers.ChoiceField(choices=REPORT_FORMATS, default='json')


class SweepCellSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=1)
    delta = serializers.IntegerField(min_value=1)
    updates = serializers.IntegerField(min_value=0)
    model = serializers.ChoiceField(choices=StreamModel.choices, default=StreamModel.CHURN)
    p = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.6)
    window = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    hubs = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    seeds = serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=False, default=[1])
    audit = AuditPolicyField(default='end')
    baseline = serializers.BooleanField(default=False)

    def validate(self, attrs):
        if attrs['model'] == StreamModel.SLIDING_WINDOW and not attrs.get('window'):
            raise serializers.ValidationError({'window': "sliding-window needs a window size"})
        return attrs

    def create(self, validated_data):
        return SweepCell(**{**validated_data, 'seeds': tuple(validated_data['seeds'])})
