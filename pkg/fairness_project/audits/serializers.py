import re
from fractions import Fraction

from rest_framework import serializers

from .audit import Objective
from .conf import BAYES_RULES
from .domain import ONE, Domain, Feature, Group, Instance, format_rational
from .exceptions import InputError
from .metrics import Notion
from .models import AuditRun

RATIONAL_PATTERN = re.compile(r'^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$')


class RationalField(serializers.Field):
    """Exact rationals as "p/q" strings (or plain integers); floats are refused."""

    default_error_messages = {
        'invalid': 'Expected a rational "p/q" string, got {value!r}.',
        'zero_denominator': 'Denominator must be positive in {value!r}.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (str, int)):
            self.fail('invalid', value=data)
        match = RATIONAL_PATTERN.match(str(data))
        if not match:
            self.fail('invalid', value=data)
        numerator, denominator = match.group(1), match.group(2) or '1'
        if int(denominator) == 0:
            self.fail('zero_denominator', value=data)
        return Fraction(int(numerator), int(denominator))

    def to_representation(self, value):
        return format_rational(value)


def parse_rational(text):
    """Parse one "p/q" string the way documents and flags do."""
    field = RationalField()
    try:
        return field.to_internal_value(text)
    except serializers.ValidationError as exc:
        raise InputError(f"malformed rational {text!r}", detail=exc.detail) from None


class InstanceSerializer(serializers.Serializer):
    id = serializers.CharField()
    group = serializers.ChoiceField(choices=[g.value for g in Group])
    weight = RationalField()


class DomainDocumentSerializer(serializers.Serializer):
    instances = InstanceSerializer(many=True, allow_empty=False)
    tasks = serializers.DictField(
        child=serializers.DictField(child=serializers.IntegerField(min_value=0, max_value=1))
    )
    features = serializers.DictField(
        child=serializers.DictField(child=serializers.CharField(allow_blank=True)),
        required=False, default=dict,
    )
    annotations = serializers.JSONField(required=False, default=dict)

    def validate_instances(self, instances):
        ids = [inst['id'] for inst in instances]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise serializers.ValidationError(f"duplicate id(s): {duplicates}")
        negative = [inst['id'] for inst in instances if inst['weight'] < 0]
        if negative:
            raise serializers.ValidationError(f"negative weight(s) for {negative}")
        total = sum((inst['weight'] for inst in instances), Fraction(0))
        if total != ONE:
            raise serializers.ValidationError(f"weights sum to {format_rational(total)}, expected 1/1")
        return instances

    def validate(self, attrs):
        ids = [inst['id'] for inst in attrs['instances']]
        known = set(ids)
        errors = {}
        for kind in ('tasks', 'features'):
            for name, mapping in attrs.get(kind, {}).items():
                missing = [i for i in ids if i not in mapping]
                unknown = sorted(set(mapping) - known)
                if missing:
                    errors.setdefault(kind, []).append(f"{name}: missing label/value for {missing}")
                if unknown:
                    errors.setdefault(kind, []).append(f"{name}: unknown ids {unknown}")
        if errors:
            raise serializers.ValidationError(errors)
        return attrs

    def create(self, validated_data):
        instances = validated_data['instances']
        return Domain(
            tuple(Instance(inst['id'], Group(inst['group'])) for inst in instances),
            validated_data['tasks'],
            {inst['id']: inst['weight'] for inst in instances},
            {name: Feature(name, values) for name, values in validated_data['features'].items()},
            validated_data.get('annotations') or {},
        )


class AuditRequestSerializer(serializers.Serializer):
    """Body of POST /api/audit/: the same inputs as the audit command."""

    document = serializers.JSONField(required=False)
    fixture = serializers.CharField(required=False)
    features = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    task = serializers.CharField(default='t')
    notion = serializers.ChoiceField(choices=[n.value for n in Notion], default=Notion.EO.value)
    objective = serializers.ChoiceField(
        choices=[o.value for o in Objective], default=Objective.ADVERSARIAL.value,
    )
    alpha = RationalField(required=False)
    epsilon = RationalField(required=False)
    eta = RationalField(required=False)
    add_feature = serializers.CharField(required=False)
    cell_bound = serializers.IntegerField(required=False, min_value=1)
    oracle = serializers.BooleanField(default=False)
    rule = serializers.ChoiceField(choices=BAYES_RULES, required=False)

    def validate(self, attrs):
        if ('document' in attrs) == ('fixture' in attrs):
            raise serializers.ValidationError("Provide exactly one of 'document' or 'fixture'.")
        return attrs


class AuditRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = AuditRun
        fields = [
            'run_id', 'command', 'subject', 'inputs_digest', 'exit_status', 'report',
            'created_at', 'updated_at',
        ]
        read_only_fields = fields


class ReportSerializer(serializers.Serializer):
    """The machine-report envelope (schema documented in docs/report-schema-v1.json)."""

    schema_version = serializers.CharField()
    command = serializers.JSONField()
    inputs_digest = serializers.CharField()
    results = serializers.JSONField()
    annotations = serializers.JSONField(required=False, default=dict)
