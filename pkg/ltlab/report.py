"""
Report containers and their json / csv / human renderings.
"""
import csv as csv_module
from functools import partial
from io import StringIO
import json

from tabulate import tabulate

from ltlab.exceptions import InvalidArgument
from ltlab.utils import json_dumps

HEADERS = ('spec', 'd', 'gamma', 'lhs', 'rhs', 'constant', 'ratio', 'pass')


class CheckReport(object):
    """
    Outcome of a single inequality or identity check: ``lhs`` vs ``rhs``.

    :param name: what was checked, e.g. ``"sobolev"`` or ``"energy_identity"``.
    :param slack: rhs - lhs for inequalities, the residual for identities.
    :type meta: dict
    """
    kind = 'check'

    def __init__(self, name, lhs, rhs, passed, slack=None, meta=None, label=None):
        self.name = name
        self.lhs = float(lhs)
        self.rhs = float(rhs)
        self.slack = float(self.rhs - self.lhs if slack is None else slack)
        self.passed = bool(passed)
        self.meta = meta or {}
        self.label = label or name

    @property
    def ratio(self):
        if self.rhs == 0:
            return None
        return self.lhs / self.rhs

    def to_dict(self):
        return {
            "kind": self.kind,
            "name": self.name,
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "pass": self.passed,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["name"], data["lhs"], data["rhs"], data["pass"],
                   slack=data["slack"], meta=data.get("meta"), label=data.get("label"))

    def to_row(self):
        return (self.label, None, None, self.lhs, self.rhs, None, self.ratio, self.passed)

    def __eq__(self, other):
        return isinstance(other, CheckReport) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return '<CheckReport {} lhs={:.6g} rhs={:.6g} pass={}>'.format(
            self.label, self.lhs, self.rhs, self.passed)


def report_from_dict(data):
    kind = data.get("kind")
    if kind == CheckReport.kind:
        return CheckReport.from_dict(data)
    if kind == 'lieb_thirring':
        from ltlab.ltcheck import LTReport
        return LTReport.from_dict(data)
    raise InvalidArgument('unknown report kind {!r}'.format(kind))


def load_reports(text):
    return [report_from_dict(item) for item in json.loads(text)]


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv(reports, delimiter=','):
    data = StringIO()
    writer = csv_module.writer(data, delimiter=delimiter, lineterminator='\n')
    writer.writerow(HEADERS)
    writer.writerows([_cell(value) for value in report.to_row()] for report in reports)
    return data.getvalue()


def human(reports, floatfmt='.6g'):
    rows = [
        ['' if value is None else ('PASS' if value else 'FAIL') if isinstance(value, bool) else value
         for value in report.to_row()]
        for report in reports
    ]
    return tabulate(rows, headers=HEADERS, tablefmt='simple', floatfmt=floatfmt, missingval='')


def jsonify(reports):
    return json_dumps([report.to_dict() for report in reports])


FORMATS = {
    'csv': csv,
    'tsv': partial(csv, delimiter='\t'),
    'human': human,
    'json': jsonify,
}


def emit_report(reports, fmt='human'):
    """
    Render *reports* (objects with ``to_dict`` and ``to_row``).

    >>> emit_report([], 'csv')
    'spec,d,gamma,lhs,rhs,constant,ratio,pass\\n'
    """
    try:
        formatter = FORMATS[fmt]
    except KeyError:
        raise InvalidArgument('unknown format {!r}, expected one of {}'.format(fmt, sorted(FORMATS)))
    return formatter(list(reports))


def emit_rows(header, rows, fmt='human', floatfmt='.7f'):
    """
    Render plain (header, rows) tables such as constants or search traces.
    """
    if fmt == 'json':
        return json_dumps([dict(zip(header, row)) for row in rows])
    if fmt in ('csv', 'tsv'):
        data = StringIO()
        writer = csv_module.writer(data, delimiter=',' if fmt == 'csv' else '\t', lineterminator='\n')
        writer.writerow(header)
        writer.writerows([_cell(value) for value in row] for row in rows)
        return data.getvalue()
    if fmt == 'human':
        return tabulate(rows, headers=header, tablefmt='plain', floatfmt=floatfmt, missingval='')
    raise InvalidArgument('unknown format {!r}, expected one of {}'.format(fmt, sorted(FORMATS)))


def emit_search(result, fmt='human'):
    """
    A SearchResult: the full dict as JSON, the iterate trace as CSV, or a
    short summary table.
    """
    if fmt == 'json':
        return json_dumps(result.to_dict())
    header = result.space.names + ['ratio']
    if fmt in ('csv', 'tsv'):
        return emit_rows(header, result.trace_rows(), fmt)
    summary = [
        ('method', result.method),
        ('family', result.space.family),
        ('gamma', result.space.gamma),
        ('best_ratio', result.best_ratio),
        ('best_params', ', '.join('{}={:.6g}'.format(k, v) for k, v in (result.best_params or {}).items())),
        ('evaluations', result.evaluation_count),
        ('failures', len(result.failures)),
        ('refined', result.meta.get('refined')),
    ]
    return tabulate(summary, tablefmt='plain', floatfmt='.6f')
