"""
Locating the entry a ValidationError names in the JSON text it came from.

Subjects are tuples whose first item is a kind:
    ('pair', x, y)          the boundary pair [x, y]
    ('source', x)           the first boundary pair starting at x
    ('label', x)            the generator labelled x
    ('duplicate', x)        the second generator labelled x
    ('field', key)          the first key named key
    ('entry', key, n)       the n-th key named key, counted from 0
"""
import json
import re
from typing import Optional, Tuple


def line_of(text: str, pattern: str, occurrence: int = 0) -> Optional[int]:
    matches = list(re.finditer(pattern, text))
    if len(matches) <= occurrence:
        return None
    return text.count('\n', 0, matches[occurrence].start()) + 1


def locate(text: str, subject: Optional[Tuple[str, ...]]) -> Optional[int]:
    """1-based line of the entry named by a validation subject, or None."""
    if not subject:
        return None
    kind, *labels = subject
    if kind == 'field':
        return line_of(text, rf'"{re.escape(labels[0])}"\s*:')
    if kind == 'entry':
        return line_of(text, rf'"{re.escape(labels[0])}"\s*:', occurrence=int(labels[1]))
    quoted = [re.escape(json.dumps(label)) for label in labels]
    if kind == 'pair':
        return line_of(text, rf'\[\s*{quoted[0]}\s*,\s*{quoted[1]}\s*\]')
    if kind == 'source':
        return line_of(text, rf'\[\s*{quoted[0]}\s*,')
    if kind == 'duplicate':
        return line_of(text, rf'"label"\s*:\s*{quoted[0]}', occurrence=1)
    if kind == 'label':
        return line_of(text, rf'"label"\s*:\s*{quoted[0]}')
    return None
