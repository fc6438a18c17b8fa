import math
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import requests

DEFAULT_INCL_CUT = 0.8
DEFAULT_N_CUT = 1
MAX_CONDITIONS = 16
NA = "NA"


class DataError(ValueError):
    """Input data or analysis parameters are invalid."""


class UsageError(ValueError):
    """Command line flags are malformed or contradict each other."""


def is_url(url_or_path) -> bool:
    return str(url_or_path).startswith('http://') or str(url_or_path).startswith('https://')


def fetch_text(url_or_path) -> str:
    if is_url(url_or_path):
        r = requests.get(str(url_or_path))
        r.raise_for_status()
        r.encoding = r.encoding or 'utf-8'
        return r.text
    return Path(url_or_path).read_text(encoding='utf-8-sig')


def format_number(value) -> str:
    """Shortest round-trip text for a threshold or cutoff; integral values lose the `.0`."""
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def format_fit(value: Optional[float], digits: int = 3) -> str:
    if value is None:
        return NA
    quantum = Decimal(1).scaleb(-digits)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def format_table(headers: Sequence[str], rows: Sequence[Sequence[str]], min_widths: Optional[Dict[str, int]] = None) -> str:
    """Right-aligned plain text table, one space between columns."""
    min_widths = min_widths or {}
    widths = []
    for col, header in enumerate(headers):
        cells = [len(row[col]) for row in rows]
        widths.append(max([len(header), min_widths.get(header, 0), *cells]))
    lines = [" ".join(h.rjust(w) for h, w in zip(headers, widths)).rstrip()]
    for row in rows:
        lines.append(" ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _parse_float(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"malformed {what}: {text!r} is not a number")
    if not math.isfinite(value):
        raise UsageError(f"malformed {what}: {text!r} is not finite")
    return value


def parse_values(text: str, what: str = "range") -> Tuple[float, ...]:
    """Parse `LO:HI[:STEP]` (inclusive), `v1|v2|...` or a single number."""
    text = text.strip()
    if not text:
        raise UsageError(f"malformed {what}: empty")
    if ':' in text:
        parts = text.split(':')
        if len(parts) not in (2, 3):
            raise UsageError(f"malformed {what}: {text!r}, expected LO:HI[:STEP]")
        lo, hi = _parse_float(parts[0], what), _parse_float(parts[1], what)
        step = _parse_float(parts[2], what) if len(parts) == 3 else 1.0
        if step <= 0:
            raise UsageError(f"malformed {what}: step must be positive")
        if hi < lo:
            raise UsageError(f"malformed {what}: {text!r} has HI < LO")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return tuple(round(lo + i * step, 10) for i in range(count))
    return tuple(_parse_float(v, what) for v in text.split('|'))


def parse_names(text: str, what: str = "conditions") -> List[str]:
    names = [n.strip() for n in text.split(',')]
    if not text.strip() or any(not n for n in names):
        raise UsageError(f"malformed {what}: {text!r}")
    if len(set(names)) != len(names):
        raise UsageError(f"malformed {what}: duplicate names in {text!r}")
    return names


def parse_axes(text: str, what: str = "sweep list") -> List[Tuple[str, Tuple[float, ...]]]:
    """Parse `A=2:3,B=2|4` into ordered (name, values) axes."""
    axes = []
    for chunk in text.split(','):
        name, sep, values = chunk.partition('=')
        if not sep or not name.strip():
            raise UsageError(f"malformed {what}: {chunk!r}, expected NAME=VALUES")
        axes.append((name.strip(), parse_values(values, what)))
    if len({name for name, _ in axes}) != len(axes):
        raise UsageError(f"malformed {what}: duplicate names in {text!r}")
    return axes


def parse_thresholds(text: str, what: str = "thresholds") -> Dict[str, float]:
    thresholds = {}
    for name, values in parse_axes(text, what):
        if len(values) != 1:
            raise UsageError(f"malformed {what}: {name} needs exactly one value")
        thresholds[name] = values[0]
    return thresholds


def parse_dir_exp(text: str) -> Tuple[Optional[int], ...]:
    """Parse `1,0,-`: 1 presence expected, 0 absence expected, `-` no expectation."""
    lookup = {'1': 1, '0': 0, '-': None}
    values = [v.strip() for v in text.split(',')]
    if any(v not in lookup for v in values):
        raise UsageError(f"malformed directional expectations: {text!r}, use 1, 0 or - per condition")
    return tuple(lookup[v] for v in values)


def format_dir_exp(dir_exp: Optional[Sequence[Optional[int]]]) -> str:
    if dir_exp is None:
        return "none"
    return ",".join('-' if v is None else str(v) for v in dir_exp)

