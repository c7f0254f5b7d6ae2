"""Synthetic trace corpus generator for desk-scale pipeline runs.

Plants a handful of class-discriminative syscalls (presence flipped with a
small noise rate) among uninformative ones, then writes strace-format trace
files, a labels CSV, and a vocabulary file that the full pipeline can consume.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .featurizer import Label

SYSCALL_NAMES: tuple[str, ...] = (
    "read", "write", "open", "close", "stat", "fstat", "lstat", "poll", "lseek", "mmap",
    "mprotect", "munmap", "brk", "rt_sigaction", "rt_sigprocmask", "rt_sigreturn", "ioctl",
    "pread64", "pwrite64", "readv", "writev", "access", "pipe", "select", "sched_yield",
    "mremap", "msync", "mincore", "madvise", "dup", "dup2", "pause", "nanosleep", "getitimer",
    "alarm", "setitimer", "getpid", "sendfile", "socket", "connect", "accept", "sendto",
    "recvfrom", "sendmsg", "recvmsg", "shutdown", "bind", "listen", "getsockname",
    "getpeername", "socketpair", "setsockopt", "getsockopt", "clone", "fork", "vfork",
    "execve", "exit", "wait4", "kill", "uname", "fcntl", "flock", "fsync", "fdatasync",
    "truncate", "ftruncate", "getdents", "getcwd", "chdir", "fchdir", "rename", "mkdir",
    "rmdir", "creat", "link", "unlink", "symlink", "readlink", "chmod", "fchmod", "chown",
    "umask", "gettimeofday", "getrlimit", "getrusage", "sysinfo", "times", "ptrace",
    "getuid", "syslog", "getgid", "setuid", "setgid", "geteuid", "getegid", "prctl",
    "futex", "epoll_create", "epoll_wait", "epoll_ctl", "openat", "mkdirat", "unlinkat",
    "renameat", "faccessat", "pselect6", "ppoll", "set_robust_list", "splice", "tee",
    "utimensat", "epoll_pwait", "signalfd", "timerfd_create", "eventfd", "fallocate",
    "inotify_init", "inotify_add_watch", "getrandom",
)

PLANTED_SYSCALLS: tuple[str, ...] = (
    "chmod", "connect", "execve", "getrandom", "ptrace", "sendmsg",
)


@dataclass(frozen=True)
class CorpusManifest:
    root: Path
    traces_dir: Path
    labels_file: Path
    vocabulary_file: Path
    planted: tuple[str, ...]
    app_count: int


def _trace_lines(present: list[str], rng: np.random.Generator) -> list[str]:
    lines = ["--- SIGCHLD {si_signo=SIGCHLD, si_code=CLD_EXITED} ---"]
    for name in present:
        for _ in range(int(rng.integers(1, 4))):
            shape = int(rng.integers(0, 6))
            ret = int(rng.integers(0, 64))
            if shape == 0:
                lines.append(f'{name}(3, "data", 512) = {ret}')
            elif shape == 1:
                lines.append(f"{name}(7, 0x0, 16) = -1 EAGAIN (Resource temporarily unavailable)")
            elif shape == 2:
                lines.append(f"{name}(0, NULL) = 0x7f{ret:02x}3a2000")
            elif shape == 3:
                lines.append(f"{int(rng.integers(100, 9999))} {name}(1, 0x42) = {ret}")
            elif shape == 4:
                lines.append(
                    f"12:{int(rng.integers(0, 60)):02d}:{int(rng.integers(0, 60)):02d}"
                    f".{int(rng.integers(0, 1_000_000)):06d} {name}(2) = {ret}"
                )
            else:
                lines.append(f"{name}(9, FLAG_A|FLAG_B <unfinished ...>")
                lines.append(f"<... {name} resumed> ) = {ret}")
    if rng.random() < 0.3:
        lines.append("strace: Process 4321 detached")
    lines.append("+++ exited with 0 +++")
    return lines


def write_corpus(
    root: Path | str,
    seed: int = 19,
    apps: int = 66,
    malicious: int = 33,
    flip_noise: float = 0.10,
) -> CorpusManifest:
    """Write traces/, labels.csv, and vocabulary.txt under `root`."""
    if apps < 2 or not 1 <= malicious < apps:
        raise ValueError("need at least one app of each class")
    root = Path(root)
    traces_dir = root / "traces"
    traces_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    noise_names = [n for n in SYSCALL_NAMES if n not in PLANTED_SYSCALLS]

    labels_rows = []
    for i in range(apps):
        app_id = f"app{i:03d}"
        is_malicious = i < malicious
        present = []
        for name in PLANTED_SYSCALLS:
            wanted = is_malicious
            if rng.random() < flip_noise:
                wanted = not wanted
            if wanted:
                present.append(name)
        present.extend(name for name in noise_names if rng.random() < 0.5)
        det_count = int(rng.integers(1, 11)) if is_malicious else int(rng.integers(0, 4))
        label = Label.MALICIOUS if is_malicious else Label.BENIGN
        labels_rows.append(f"{app_id},{label.value},{det_count}")
        text = "\n".join(_trace_lines(present, rng)) + "\n"
        (traces_dir / f"{app_id}.strace").write_text(text, encoding="utf-8")

    labels_file = root / "labels.csv"
    labels_file.write_text(
        "app_id,label,detection_count\n" + "\n".join(labels_rows) + "\n", encoding="utf-8"
    )
    vocabulary_file = root / "vocabulary.txt"
    vocabulary_file.write_text("\n".join(sorted(SYSCALL_NAMES)) + "\n", encoding="utf-8")
    return CorpusManifest(
        root=root,
        traces_dir=traces_dir,
        labels_file=labels_file,
        vocabulary_file=vocabulary_file,
        planted=PLANTED_SYSCALLS,
        app_count=apps,
    )
