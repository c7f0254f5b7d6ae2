"""Trace-collection driver over a swappable command runner.

Real emulator orchestration stays outside this library; production use plugs
in the subprocess runner while tests supply scripted fakes.
"""
from __future__ import annotations

import logging
import shlex
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

from .errors import DataError

log = logging.getLogger(__name__)

DEFAULT_DURATION_SECONDS = 300
DEFAULT_COMMAND_TEMPLATE = "strace -f -qq -s 64 {app_id}"


@dataclass(frozen=True)
class CollectionSpec:
    app_id: str
    duration_seconds: int = DEFAULT_DURATION_SECONDS
    command_template: str = DEFAULT_COMMAND_TEMPLATE

    def __post_init__(self) -> None:
        if not self.app_id:
            raise ValueError("app_id must be non-empty")
        if self.duration_seconds <= 0:
            raise ValueError("duration_seconds must be positive")

    def command(self) -> list[str]:
        return shlex.split(
            self.command_template.format(app_id=self.app_id, duration=self.duration_seconds)
        )


@dataclass(frozen=True)
class RunResult:
    stdout: str
    stderr: str
    returncode: int | None  # None when the run hit the duration limit


class CommandRunner(Protocol):
    def run(self, args: Sequence[str], timeout: float | None) -> RunResult: ...


def _as_text(data: bytes | str | None) -> str:
    if data is None:
        return ""
    if isinstance(data, bytes):
        return data.decode("utf-8", errors="replace")
    return data


class SubprocessRunner:
    """Runs the tracer as a child process, capturing both output streams."""

    def run(self, args: Sequence[str], timeout: float | None) -> RunResult:
        try:
            proc = subprocess.run(
                list(args), capture_output=True, text=True, timeout=timeout
            )
            return RunResult(proc.stdout, proc.stderr, proc.returncode)
        except subprocess.TimeoutExpired as exc:
            # Duration elapsed: keep whatever the tracer wrote so far.
            return RunResult(_as_text(exc.output), _as_text(exc.stderr), None)


def collect_trace(spec: CollectionSpec, runner: CommandRunner, traces_dir: Path | str) -> str:
    """Run the tracer for one app and write traces/<app_id>.strace.

    Returns the captured output (stdout then stderr; strace writes to stderr
    unless the template redirects it).
    """
    args = spec.command()
    try:
        result = runner.run(args, timeout=spec.duration_seconds)
    except OSError as exc:
        raise DataError(f"tracer launch failed for command: {' '.join(args)} ({exc})") from exc
    text = result.stdout + result.stderr
    if not text:
        log.warning("empty trace capture for app %s", spec.app_id)
    traces_dir = Path(traces_dir)
    traces_dir.mkdir(parents=True, exist_ok=True)
    (traces_dir / f"{spec.app_id}.strace").write_text(text, encoding="utf-8")
    return text
