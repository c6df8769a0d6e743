"""
Shared plumbing for the resinfo management commands.

Exit codes: 0 success, 2 input error, 3 output I/O error, 4 verification
failure. Infeasible or unbounded answers are successes.
"""
import io
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from resolution.exceptions import DomainError
from resolution.grids import GridSpec

logger = logging.getLogger(__name__)

EXIT_INPUT = 2
EXIT_IO = 3
EXIT_VERIFICATION = 4

CSV_FLOAT = '%.17g'


def input_error(message):
    return CommandError(message, returncode=EXIT_INPUT)


def worker_count():
    """Threads for sweeps; RESINFO_THREADS=0 means every core."""
    threads = settings.RESINFO_THREADS
    return threads if threads > 0 else (os.cpu_count() or 1)


def _write_rows(handle, header, rows, fmt):
    np.savetxt(handle, rows, fmt=fmt, delimiter=',', header=','.join(header), comments='', newline='\n')


def finite_or_none(value):
    return value if value is not None and np.isfinite(value) else None


class ResolutionCommand(BaseCommand):
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--json', action='store_true', help='emit a single JSON document on stdout')

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except DomainError as exc:
            raise input_error(str(exc)) from exc

    def run(self, **options):
        raise NotImplementedError

    # inputs

    def load_json(self, value, serializer_class, label, **serializer_kwargs):
        """Parse inline JSON or a JSON file and validate it with a DRF serializer."""
        text = value
        if not value.lstrip().startswith(('{', '[')):
            try:
                text = Path(value).read_text(encoding='utf-8')
            except OSError as exc:
                raise input_error(f'{label}: cannot read {value}: {exc.strerror}') from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise input_error(f'{label}: malformed JSON ({exc.msg} at line {exc.lineno})') from exc
        if not isinstance(data, dict):
            raise input_error(f'{label}: expected a JSON object')
        serializer = serializer_class(data=data, **serializer_kwargs)
        if not serializer.is_valid():
            problems = '; '.join(
                f'{field}: {" ".join(str(m) for m in messages)}'
                for field, messages in serializer.errors.items()
            )
            raise input_error(f'{label}: {problems}')
        return serializer.validated_data['object']

    # outputs

    def emit(self, payload, options, text_lines=None):
        if options.get('json'):
            self.stdout.write(json.dumps(payload, indent=2, allow_nan=False))
            return
        for line in text_lines if text_lines is not None else self._format_lines(payload):
            self.stdout.write(line)

    def _format_lines(self, payload, prefix=''):
        for key, value in payload.items():
            if isinstance(value, dict):
                yield from self._format_lines(value, prefix=f'{prefix}{key}.')
            else:
                yield f'{prefix}{key}: {value}'

    def write_csv(self, path, header, rows, fmt):
        try:
            with open(path, 'w', encoding='utf-8', newline='\n') as handle:
                _write_rows(handle, header, rows, fmt)
        except OSError as exc:
            raise CommandError(f'cannot write {path}: {exc.strerror}', returncode=EXIT_IO) from exc
        logger.info('wrote %d rows to %s', len(rows), path)

    def emit_table(self, header, rows, fmt, options):
        """CSV to --out, JSON to stdout with --json, CSV to stdout otherwise."""
        if options.get('out'):
            self.write_csv(options['out'], header, rows, fmt)
        if options.get('json'):
            self.emit({'columns': header, 'rows': rows.tolist()}, options)
        elif not options.get('out'):
            buffer = io.StringIO()
            _write_rows(buffer, header, rows, fmt)
            self.stdout.write(buffer.getvalue(), ending='')

    def write_json(self, path, payload):
        try:
            Path(path).write_text(json.dumps(payload, indent=2, allow_nan=False) + '\n', encoding='utf-8')
        except OSError as exc:
            raise CommandError(f'cannot write {path}: {exc.strerror}', returncode=EXIT_IO) from exc
        logger.info('wrote report to %s', path)

    # sweeps

    def grid(self, options, key):
        # call_command passes keyword options through without argparse conversion
        value = options[key]
        return GridSpec.parse(value) if isinstance(value, str) else value

    def sweep_rows(self, func, row_values):
        """Evaluate func on each row value; output order never depends on thread count."""
        workers = worker_count()
        if workers <= 1 or len(row_values) < 2:
            return [func(v) for v in row_values]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, row_values))
