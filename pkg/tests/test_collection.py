import logging
from dataclasses import dataclass, field
from typing import Sequence

import pytest

from droidtrace.collection import (
    DEFAULT_DURATION_SECONDS,
    CollectionSpec,
    RunResult,
    SubprocessRunner,
    collect_trace,
)
from droidtrace.errors import DataError
from droidtrace.trace_parser import parse_trace_file


@dataclass
class ScriptedRunner:
    """Fake runner returning canned output; records the invocation."""

    stdout: str = ""
    stderr: str = ""
    fail_with: OSError | None = None
    calls: list = field(default_factory=list)

    def run(self, args: Sequence[str], timeout: float | None) -> RunResult:
        self.calls.append((list(args), timeout))
        if self.fail_with is not None:
            raise self.fail_with
        return RunResult(self.stdout, self.stderr, 0)


FIXTURE_LINES = 'read(3) = 1\nwrite(1) = 2\n--- SIGCHLD {} ---\n'


def test_collect_trace_writes_fixture_lines(tmp_path):
    runner = ScriptedRunner(stdout=FIXTURE_LINES)
    spec = CollectionSpec(app_id="com.sample.app")
    text = collect_trace(spec, runner, tmp_path)
    assert text == FIXTURE_LINES
    trace_file = tmp_path / "com.sample.app.strace"
    assert trace_file.read_text().count("\n") == 3
    profile = parse_trace_file(trace_file)
    assert profile.total_events == 3
    assert profile.name_counts == {"read": 1, "write": 1}


def test_collect_trace_launch_failure_names_command(tmp_path):
    runner = ScriptedRunner(fail_with=FileNotFoundError("no strace"))
    spec = CollectionSpec(app_id="appx", command_template="strace -f {app_id}")
    with pytest.raises(DataError, match="strace -f appx"):
        collect_trace(spec, runner, tmp_path)


def test_default_duration_is_five_minutes(tmp_path):
    spec = CollectionSpec(app_id="appy")
    assert spec.duration_seconds == DEFAULT_DURATION_SECONDS == 300
    runner = ScriptedRunner(stdout="read(3) = 0\n")
    collect_trace(spec, runner, tmp_path)
    assert runner.calls[0][1] == 300  # duration drives the runner timeout


def test_empty_capture_warns_and_writes_empty_file(tmp_path, caplog):
    runner = ScriptedRunner()
    spec = CollectionSpec(app_id="silent")
    with caplog.at_level(logging.WARNING):
        text = collect_trace(spec, runner, tmp_path)
    assert text == ""
    assert (tmp_path / "silent.strace").read_text() == ""
    assert any("empty trace capture" in rec.message for rec in caplog.records)


def test_stderr_capture_is_kept(tmp_path):
    # strace writes to stderr by default; both streams are concatenated.
    runner = ScriptedRunner(stdout="", stderr="openat(1) = 3\n")
    text = collect_trace(CollectionSpec(app_id="e"), runner, tmp_path)
    assert "openat" in text


def test_command_template_placeholders():
    spec = CollectionSpec(
        app_id="org.app", duration_seconds=42,
        command_template="strace -f timeout {duration} {app_id}",
    )
    assert spec.command() == ["strace", "-f", "timeout", "42", "org.app"]


def test_collection_spec_validation():
    with pytest.raises(ValueError):
        CollectionSpec(app_id="")
    with pytest.raises(ValueError):
        CollectionSpec(app_id="x", duration_seconds=0)


def test_subprocess_runner_captures_output():
    result = SubprocessRunner().run(["echo", "hello"], timeout=10)
    assert result.stdout.strip() == "hello"
    assert result.returncode == 0


def test_subprocess_runner_timeout_returns_partial():
    result = SubprocessRunner().run(["sleep", "5"], timeout=0.2)
    assert result.returncode is None
