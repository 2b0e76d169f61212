# -*- coding: utf-8 -*-
import csv


def format_real(value, digits=9):
    """
    Fixed ``digits`` significant digits; python's float formatting rounds the exact binary value half-to-even
    """
    if value is None:
        return ''

    return format(float(value), '.%dg' % digits)


def format_cell(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'

    if isinstance(value, float):
        return format_real(value)

    return '' if value is None else str(value)


def write_csv(stream, header, rows):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)

    for row in rows:
        writer.writerow([format_cell(v) for v in row])
