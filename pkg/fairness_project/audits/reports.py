"""
Report assembly.

Machine reports carry every rational as ``{"exact": "p/q", "decimal": "0.333333"}``;
the decimal is display-only. The inputs digest is the SHA-256 of the canonical
JSON of the domain document and the normalized command arguments, so a report
can be matched to the run that produced it.
"""
import dataclasses
import hashlib
import json
from decimal import Decimal, localcontext
from enum import Enum
from fractions import Fraction
from types import MappingProxyType

from .conf import audit_settings
from .domain import CellPartition, Classifier, format_rational
from .serializers import ReportSerializer


def decimal_string(value, places=None):
    places = audit_settings.DECIMAL_PLACES if places is None else places
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = 60
        quotient = Decimal(value.numerator) / Decimal(value.denominator)
        return str(quotient.quantize(Decimal(1).scaleb(-places)))


def exact(value):
    if isinstance(value, bool) or value is None:
        return value
    value = Fraction(value)
    return {'exact': format_rational(value), 'decimal': decimal_string(value)}


def classifier_json(h, partition):
    return {
        'mask': h.mask,
        'cells': [{'cell': list(cell), 'label': label} for cell, label in zip(partition.cells, h.labels)],
    }


def weights_json(weights):
    return {i: format_rational(w) for i, w in weights.items()}


def jsonable(obj):
    """Fractions become exact/decimal pairs, enums their values, containers recurse."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)) and not isinstance(obj, Enum):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return exact(obj)
    if isinstance(obj, CellPartition):
        return [list(cell) for cell in obj.cells]
    if isinstance(obj, Classifier):
        return list(obj.labels)
    if isinstance(obj, (dict, MappingProxyType)):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def audit_result_json(result):
    data = {
        'objective': result.objective.value,
        'notion': result.notion.value,
        'value': exact(result.value),
        'cells': jsonable(result.partition),
        'witnesses': [classifier_json(h, result.partition) for h in result.witnesses],
    }
    for name in ('alpha', 'epsilon', 'eta'):
        if getattr(result, name) is not None:
            data[name] = exact(getattr(result, name))
    if result.details:
        data['details'] = jsonable(result.details)
    return data


def frontier_json(points, partition):
    return [
        {
            'loss': exact(p.loss),
            'unfairness': exact(p.unfairness),
            'classifier': classifier_json(p.classifier, partition),
        }
        for p in points
    ]


def inputs_digest(document, args):
    payload = json.dumps({'document': document, 'args': args}, sort_keys=True, separators=(',', ':'))
    return 'sha256:' + hashlib.sha256(payload.encode('utf-8')).hexdigest()


def build_report(name, args, document, results, annotations=None):
    envelope = {
        'schema_version': audit_settings.REPORT_SCHEMA_VERSION,
        'command': {'name': name, 'args': args},
        'inputs_digest': inputs_digest(document, args),
        'results': results,
        'annotations': jsonable(annotations or {}),
    }
    return ReportSerializer(envelope).data


def to_json(report):
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)


def render_text(report):
    lines = [
        f"{report['command']['name']} ({report['inputs_digest']})",
    ]
    _render(report['results'], lines, 0)
    return '\n'.join(lines)


def _render(value, lines, depth):
    pad = '  ' * depth
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, dict) and set(item) == {'exact', 'decimal'}:
                lines.append(f"{pad}{key}: {item['exact']} ({item['decimal']})")
            elif isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                _render(item, lines, depth + 1)
            else:
                lines.append(f"{pad}{key}: {item}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict) and set(item) == {'exact', 'decimal'}:
                lines.append(f"{pad}- {item['exact']} ({item['decimal']})")
            elif isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                _render(item, lines, depth + 1)
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{value}")
