"""Newline-delimited JSON request/response over a child process's stdin/stdout."""

from __future__ import annotations

import json
import logging
import queue
import shlex
import subprocess
import threading
from collections import deque
from typing import Callable, Optional, Sequence, Union

log = logging.getLogger(__name__)

_EOF = object()


class ProcessError(RuntimeError):
    """The child exited, timed out, or wrote something that is not a JSON object."""


class JsonLineProcess:
    """One long-lived child process answering one JSON line per request line.

    Requests are serialized with a lock, so a single instance is safe to
    share between threads; run several instances for real parallelism.
    """

    def __init__(self, command: Union[str, Sequence[str]], timeout: float = 60.0):
        self.argv = shlex.split(command) if isinstance(command, str) else list(command)
        if not self.argv:
            raise ValueError("empty command")
        self.timeout = timeout
        self._lock = threading.Lock()
        self._proc: Optional[subprocess.Popen] = None
        self._lines: "queue.Queue" = queue.Queue()
        self._stderr: deque = deque(maxlen=20)

    def _start(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(
                    self.argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                    stderr=subprocess.PIPE, text=True, encoding="utf-8", bufsize=1)
            except OSError as exc:
                raise ProcessError(f"cannot start {self.argv[0]!r}: {exc}") from exc
            self._lines = queue.Queue()
            self._stderr = deque(maxlen=20)
            threading.Thread(target=self._pump, args=(self._proc, self._lines), daemon=True).start()
            self._drainer = threading.Thread(target=self._drain, args=(self._proc, self._stderr), daemon=True)
            self._drainer.start()
        return self._proc

    @staticmethod
    def _pump(proc: subprocess.Popen, lines: "queue.Queue") -> None:
        for line in proc.stdout:
            lines.put(line)
        lines.put(_EOF)

    @staticmethod
    def _drain(proc: subprocess.Popen, tail: deque) -> None:
        for line in proc.stderr:
            tail.append(line.rstrip("\n"))

    def request(self, payload: dict) -> dict:
        with self._lock:
            proc = self._start()
            try:
                proc.stdin.write(json.dumps(payload, ensure_ascii=False) + "\n")
                proc.stdin.flush()
            except (BrokenPipeError, OSError) as exc:
                raise ProcessError(f"{self.argv[0]}: write failed ({exc}); exit code {proc.poll()}") from exc
            try:
                line = self._lines.get(timeout=self.timeout)
            except queue.Empty:
                self._kill()
                raise ProcessError(f"{self.argv[0]}: no reply within {self.timeout}s") from None
            if line is _EOF:
                code = proc.wait()
                self._drainer.join(timeout=1.0)
                err = " | ".join(self._stderr)[-500:]
                raise ProcessError(f"{self.argv[0]}: exited with code {code}: {err}")
            try:
                reply = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ProcessError(f"{self.argv[0]}: invalid JSON reply {line[:200]!r}") from exc
            if not isinstance(reply, dict):
                raise ProcessError(f"{self.argv[0]}: reply is not a JSON object")
            return reply

    def _kill(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            self._proc.kill()
            self._proc.wait()

    def close(self) -> None:
        with self._lock:
            if self._proc is None:
                return
            if self._proc.poll() is None:
                try:
                    self._proc.stdin.close()
                    self._proc.wait(timeout=5)
                except (OSError, subprocess.TimeoutExpired):
                    self._kill()
            self._proc = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def map_requests(procs: Sequence[JsonLineProcess], payloads: Sequence[dict],
                 on_error: Optional[Callable[[int, Exception], None]] = None) -> list:
    """Send payloads across a fixed set of processes concurrently; order kept."""
    from concurrent.futures import ThreadPoolExecutor

    if not procs:
        raise ValueError("no processes")
    results: list = [None] * len(payloads)

    def run(k: int):
        proc = procs[k % len(procs)]
        try:
            results[k] = proc.request(payloads[k])
        except Exception as exc:  # reported per item
            if on_error is None:
                raise
            on_error(k, exc)

    with ThreadPoolExecutor(max_workers=len(procs)) as pool:
        list(pool.map(run, range(len(payloads))))
    return results
