"""Parse raw strace output into syscall events and per-app profiles.

Every input line maps to exactly one event; anything the grammar does not
recognise becomes an Unparseable event, so parsing never aborts a trace.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .errors import DataError

SYSCALL_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# Optional prefixes emitted by strace -f (PID) and -t/-tt/-ttt (timestamps).
_PID_PREFIX = re.compile(r"^\d+\s+")
_TIMESTAMP_PREFIX = re.compile(r"^(?:\d+\.\d+|\d{2}:\d{2}:\d{2}(?:\.\d+)?)\s+")

_SIGNAL_LINE = re.compile(r"^---.*---\s*$")
_EXIT_LINE = re.compile(r"^\+\+\+.*\+\+\+\s*$")
_RESUMED_PREFIX = re.compile(r"^<\.\.\.\s+([A-Za-z_][A-Za-z0-9_]*)\s+resumed>")
_UNFINISHED_SUFFIX = re.compile(r"<unfinished\b[^>]*>\s*$")
_CALL_PREFIX = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\(")
_SYSCALL_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\((.*)\)\s*=\s*(.*)$", re.DOTALL)
_RETURN_TAIL = re.compile(r"\)\s*=\s*(.*)$", re.DOTALL)
_RETURN_HEX = re.compile(r"^0[xX][0-9a-fA-F]+")
_RETURN_INT = re.compile(r"^-?\d+")


class EventKind(Enum):
    SYSCALL = "syscall"
    UNFINISHED = "unfinished"
    RESUMED = "resumed"
    SIGNAL = "signal"
    EXIT = "exit"
    UNPARSEABLE = "unparseable"


@dataclass(frozen=True)
class TraceEvent:
    kind: EventKind
    name: str | None
    raw_return: int | None
    line_no: int

    @property
    def has_name(self) -> bool:
        return self.kind in (EventKind.SYSCALL, EventKind.UNFINISHED, EventKind.RESUMED)


@dataclass
class TraceProfile:
    """Aggregated syscall evidence for one app."""

    app_id: str
    name_counts: dict[str, int]
    total_events: int
    unparseable_lines: int

    @property
    def distinct_count(self) -> int:
        return len(self.name_counts)


def _parse_return(token: str) -> int | None:
    # Best-effort: return values are diagnostics only, never a parse failure.
    token = token.strip()
    m = _RETURN_HEX.match(token)
    if m:
        return int(m.group(0), 16)
    m = _RETURN_INT.match(token)
    if m:
        # Boundary check so "0x..." never half-parses as 0.
        end = m.end()
        if end < len(token) and (token[end].isalnum() or token[end] == "_"):
            return None
        return int(m.group(0))
    return None


def parse_line(line: str, line_no: int) -> TraceEvent:
    """Classify one physical strace line into exactly one TraceEvent."""
    text = line.rstrip("\r\n")
    m = _PID_PREFIX.match(text)
    if m:
        text = text[m.end():]
    m = _TIMESTAMP_PREFIX.match(text)
    if m:
        text = text[m.end():]

    if _SIGNAL_LINE.match(text):
        return TraceEvent(EventKind.SIGNAL, None, None, line_no)
    if _EXIT_LINE.match(text):
        return TraceEvent(EventKind.EXIT, None, None, line_no)

    m = _RESUMED_PREFIX.match(text)
    if m:
        ret = None
        tail = _RETURN_TAIL.search(text)
        if tail:
            ret = _parse_return(tail.group(1))
        return TraceEvent(EventKind.RESUMED, m.group(1), ret, line_no)

    if _UNFINISHED_SUFFIX.search(text):
        call = _CALL_PREFIX.match(text)
        if call:
            return TraceEvent(EventKind.UNFINISHED, call.group(1), None, line_no)
        return TraceEvent(EventKind.UNPARSEABLE, None, None, line_no)

    m = _SYSCALL_LINE.match(text)
    if m:
        return TraceEvent(EventKind.SYSCALL, m.group(1), _parse_return(m.group(3)), line_no)

    return TraceEvent(EventKind.UNPARSEABLE, None, None, line_no)


def parse_trace(lines: Iterable[str], app_id: str) -> TraceProfile:
    """Fold a line stream into a per-app profile of syscall occurrence counts.

    An unfinished call is counted when it appears; the matching resumed line
    is not counted again. A resumed line with no pending unfinished of the
    same name still counts once, so presence is never missed.
    """
    if not app_id:
        raise ValueError("app_id must be non-empty")
    counts: Counter[str] = Counter()
    pending: Counter[str] = Counter()
    total = 0
    unparseable = 0
    for line_no, line in enumerate(lines, start=1):
        event = parse_line(line, line_no)
        if event.kind is EventKind.UNPARSEABLE:
            unparseable += 1
            continue
        total += 1
        if event.kind is EventKind.SYSCALL:
            counts[event.name] += 1
        elif event.kind is EventKind.UNFINISHED:
            counts[event.name] += 1
            pending[event.name] += 1
        elif event.kind is EventKind.RESUMED:
            if pending[event.name] > 0:
                pending[event.name] -= 1
            else:
                counts[event.name] += 1
    return TraceProfile(app_id, dict(counts), total, unparseable)


def distinct_syscalls(profile: TraceProfile) -> list[str]:
    """Lexicographically sorted set of syscall names seen in the profile."""
    return sorted(profile.name_counts)


def parse_trace_file(path: Path | str, app_id: str | None = None) -> TraceProfile:
    path = Path(path)
    if app_id is None:
        app_id = path.stem
    try:
        # Lossy decode: undecodable bytes land in args and never affect names.
        with open(path, encoding="utf-8", errors="replace") as fh:
            return parse_trace(fh, app_id)
    except OSError as exc:
        raise DataError(f"cannot read trace file {path}: {exc}") from exc


def load_traces_dir(traces_dir: Path | str) -> list[TraceProfile]:
    """Parse every traces/<app_id>.strace file, sorted by app id."""
    traces_dir = Path(traces_dir)
    files = sorted(traces_dir.glob("*.strace"))
    if not files:
        raise DataError(f"no trace files (*.strace) in {traces_dir}")
    return [parse_trace_file(path) for path in files]
