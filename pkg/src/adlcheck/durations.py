import re
from datetime import timedelta

_PART = re.compile(r"(\d+(?:\.\d+)?)([hms])")
_UNITS = {"h": 3600, "m": 60, "s": 1}


def parse_duration(text) -> timedelta:
    """``"20m"``, ``"1h30m"``, ``"45s"`` or a bare number of seconds."""
    if isinstance(text, (int, float)):
        return timedelta(seconds=text)
    s = str(text).strip().lower().replace(" ", "")
    if re.fullmatch(r"\d+(\.\d+)?", s):
        return timedelta(seconds=float(s))
    pos, total = 0, 0.0
    for m in _PART.finditer(s):
        if m.start() != pos:
            break
        total += float(m.group(1)) * _UNITS[m.group(2)]
        pos = m.end()
    if pos != len(s) or not s:
        raise ValueError(f"bad duration {text!r}")
    return timedelta(seconds=total)


def format_duration(td: timedelta) -> str:
    secs = int(td.total_seconds())
    if secs % 3600 == 0:
        return f"{secs // 3600}h"
    if secs % 60 == 0:
        return f"{secs // 60}m"
    return f"{secs}s"


def parse_utc_offset(text) -> timedelta:
    """``"+01:00"``, ``"-0530"`` or ``"Z"``."""
    s = str(text).strip()
    if s in ("Z", "z"):
        return timedelta(0)
    m = re.fullmatch(r"([+-])(\d{2}):?(\d{2})", s)
    if not m:
        raise ValueError(f"bad UTC offset {text!r}")
    sign = -1 if m.group(1) == "-" else 1
    return sign * timedelta(hours=int(m.group(2)), minutes=int(m.group(3)))
