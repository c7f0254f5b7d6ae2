import json
import random
from pathlib import Path

import pytest

from droidtrace.errors import DataError
from droidtrace.trace_parser import (
    EventKind,
    SYSCALL_NAME_RE,
    distinct_syscalls,
    load_traces_dir,
    parse_line,
    parse_trace,
    parse_trace_file,
)

DATA = Path(__file__).parent / "data"


def kind_of(line):
    return parse_line(line, 1).kind


def test_plain_syscall_line():
    event = parse_line('open("/data/x", O_RDONLY) = 3', 7)
    assert event.kind is EventKind.SYSCALL
    assert event.name == "open"
    assert event.raw_return == 3
    assert event.line_no == 7


def test_unfinished_line():
    event = parse_line("futex(0xb77, FUTEX_WAIT <unfinished ...>", 1)
    assert event.kind is EventKind.UNFINISHED
    assert event.name == "futex"


def test_resumed_line():
    event = parse_line("<... futex resumed> ) = 0", 1)
    assert event.kind is EventKind.RESUMED
    assert event.name == "futex"
    assert event.raw_return == 0


def test_signal_line():
    assert kind_of("--- SIGCHLD {si_signo=SIGCHLD} ---") is EventKind.SIGNAL


def test_exit_line():
    assert kind_of("+++ exited with 0 +++") is EventKind.EXIT


def test_garbage_line():
    assert kind_of("garbage ~~ line") is EventKind.UNPARSEABLE


@pytest.mark.parametrize(
    "line,name",
    [
        ("1234 read(3) = 0", "read"),
        ("12:34:56 read(3) = 0", "read"),
        ("12:34:56.789012 read(3) = 0", "read"),
        ("1628884000.123456 read(3) = 0", "read"),
        ("99 16:20:00 read(3) = 0", "read"),
    ],
)
def test_pid_and_timestamp_prefixes(line, name):
    event = parse_line(line, 1)
    assert event.kind is EventKind.SYSCALL
    assert event.name == name


@pytest.mark.parametrize(
    "ret_text,expected",
    [
        ("= 3", 3),
        ("= -1 ENOENT (No such file or directory)", -1),
        ("= 0x7f1bd9aa2000", 0x7F1BD9AA2000),
        ("= ?", None),
        ("= 42 <0.000123>", 42),
        ("= ? <unavailable>", None),
    ],
)
def test_return_value_parsing(ret_text, expected):
    event = parse_line(f"close(3) {ret_text}", 1)
    assert event.kind is EventKind.SYSCALL
    assert event.raw_return == expected


def test_unparseable_return_does_not_demote():
    event = parse_line("close(3) = weird!!", 1)
    assert event.kind is EventKind.SYSCALL
    assert event.raw_return is None


def test_parens_inside_string_args():
    event = parse_line('write(1, "a ) = 9 b", 8) = 8', 1)
    assert event.kind is EventKind.SYSCALL
    assert event.name == "write"
    assert event.raw_return == 8


@pytest.mark.parametrize(
    "line",
    [
        "read(3, 'truncated",
        "write(1",
        "<unfinished ...>",
        "<... resumed> ) = 0",
        "",
        "strace: Process 1 attached",
    ],
)
def test_malformed_lines_are_unparseable(line):
    assert kind_of(line) is EventKind.UNPARSEABLE


def test_parse_trace_counts_occurrences():
    profile = parse_trace(["read(3) = 10", "read(3) = 0"], "app")
    assert profile.name_counts == {"read": 2}
    assert profile.total_events == 2


def test_unfinished_resumed_pair_counted_once():
    lines = ["futex(0x1, FUTEX_WAIT <unfinished ...>", "<... futex resumed> ) = 0"]
    profile = parse_trace(lines, "app")
    assert profile.name_counts == {"futex": 1}
    assert profile.total_events == 2


def test_unmatched_resumed_still_counts():
    profile = parse_trace(["<... wait4 resumed> ) = 9", "read(3) = 1"], "app")
    assert profile.name_counts == {"wait4": 1, "read": 1}


def test_empty_stream():
    profile = parse_trace([], "app")
    assert profile.total_events == 0
    assert profile.name_counts == {}
    assert profile.unparseable_lines == 0


def test_app_id_required():
    with pytest.raises(ValueError):
        parse_trace([], "")


@pytest.mark.parametrize("k", [1, 2, 5])
def test_pairing_k_unfinished_then_k_resumed(k):
    lines = ["futex(0x1 <unfinished ...>"] * k + ["<... futex resumed> ) = 0"] * k
    profile = parse_trace(lines, "app")
    assert profile.name_counts == {"futex": k}


def test_pairing_interleaved():
    lines = [
        "poll([] <unfinished ...>",
        "poll([] <unfinished ...>",
        "<... poll resumed> ) = 1",
        "poll([] <unfinished ...>",
        "<... poll resumed> ) = 0",
        "<... poll resumed> ) = 1",
        "<... poll resumed> ) = 1",  # unmatched: one extra
    ]
    profile = parse_trace(lines, "app")
    assert profile.name_counts == {"poll": 4}


def test_count_conservation_without_unfinished():
    rng = random.Random(41)
    names = ["read", "write", "ioctl", "mmap"]
    lines = []
    syscall_count = 0
    for _ in range(300):
        roll = rng.random()
        if roll < 0.7:
            lines.append(f"{rng.choice(names)}({rng.randint(0, 9)}) = 0")
            syscall_count += 1
        elif roll < 0.8:
            lines.append("--- SIGCHLD {} ---")
        elif roll < 0.9:
            lines.append("+++ exited with 0 +++")
        else:
            lines.append("not a trace line at all")
    profile = parse_trace(lines, "app")
    assert sum(profile.name_counts.values()) == syscall_count


def test_totality_on_random_bytes():
    rng = random.Random(1337)
    for _ in range(2000):
        raw = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 80)))
        event = parse_line(raw.decode("utf-8", errors="replace"), 1)
        assert event.kind in EventKind
        if event.has_name:
            assert event.name and SYSCALL_NAME_RE.fullmatch(event.name)


def test_parse_trace_deterministic():
    lines = (DATA / "strace_fixture.txt").read_text(encoding="utf-8").splitlines()
    first = parse_trace(lines, "app")
    second = parse_trace(lines, "app")
    assert first == second


def test_fixture_corpus_matches_annotations():
    profile = parse_trace_file(DATA / "strace_fixture.txt", "fixture")
    expected = json.loads((DATA / "strace_fixture_expected.json").read_text())
    assert profile.name_counts == expected["name_counts"]
    assert profile.total_events == expected["total_events"]
    assert profile.unparseable_lines == expected["unparseable_lines"]


def test_distinct_syscalls_sorted():
    profile = parse_trace(["write(1) = 1", "open(2) = 3", "write(1) = 1"], "app")
    assert distinct_syscalls(profile) == ["open", "write"]
    assert distinct_syscalls(parse_trace([], "app")) == []


def test_parse_trace_file_uses_stem_as_app_id(tmp_path):
    path = tmp_path / "com.evil.app.strace"
    path.write_text("read(3) = 0\n", encoding="utf-8")
    profile = parse_trace_file(path)
    assert profile.app_id == "com.evil.app"
    assert profile.name_counts == {"read": 1}


def test_parse_trace_file_missing(tmp_path):
    with pytest.raises(DataError):
        parse_trace_file(tmp_path / "nope.strace")


def test_load_traces_dir(tmp_path):
    (tmp_path / "b.strace").write_text("read(3) = 0\n", encoding="utf-8")
    (tmp_path / "a.strace").write_text("write(1) = 1\n", encoding="utf-8")
    profiles = load_traces_dir(tmp_path)
    assert [p.app_id for p in profiles] == ["a", "b"]


def test_load_traces_dir_empty(tmp_path):
    with pytest.raises(DataError, match="no trace files"):
        load_traces_dir(tmp_path)
