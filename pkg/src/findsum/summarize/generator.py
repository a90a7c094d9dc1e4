"""Client for external summary generators speaking JSON lines.

Request: ``{"id", "kind", "input", "hints": {"beam_size", "max_len"}}``.
Reply: ``{"id", "output"}`` or ``{"id", "error"}``.
"""

from __future__ import annotations

import logging
import shlex
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from findsum.errors import GeneratorFailure
from findsum.procio import JsonLineProcess, ProcessError, map_requests

log = logging.getLogger(__name__)

KINDS = ("summarize", "tuple2text")


@dataclass(frozen=True)
class GeneratorHandle:
    command: Union[str, tuple]
    timeout: float = 120.0
    max_concurrency: int = 1

    def argv(self) -> list[str]:
        argv = shlex.split(self.command) if isinstance(self.command, str) else list(self.command)
        # "python" in a config means the interpreter running us
        if argv and argv[0] in ("python", "python3"):
            argv[0] = sys.executable
        return argv


@dataclass(frozen=True)
class GenRequest:
    id: int
    kind: str
    input: str
    beam_size: int = 5
    max_len: int = 350

    def payload(self) -> dict:
        return {"id": self.id, "kind": self.kind, "input": self.input,
                "hints": {"beam_size": self.beam_size, "max_len": self.max_len}}


class GeneratorClient:
    """A pool of ``max_concurrency`` generator processes."""

    def __init__(self, handle: GeneratorHandle):
        if handle.max_concurrency < 1:
            raise ValueError("max_concurrency must be >= 1")
        self.handle = handle
        self._procs = [JsonLineProcess(handle.argv(), timeout=handle.timeout)
                       for _ in range(handle.max_concurrency)]

    @staticmethod
    def _output(req: GenRequest, reply: dict) -> str:
        if reply.get("id") != req.id:
            raise GeneratorFailure(f"reply id {reply.get('id')!r} does not match request {req.id}")
        if "error" in reply:
            raise GeneratorFailure(f"generator error: {reply['error']}")
        out = reply.get("output")
        if not isinstance(out, str):
            raise GeneratorFailure(f"reply {req.id} has no string output")
        return out

    def call(self, req: GenRequest) -> str:
        try:
            reply = self._procs[req.id % len(self._procs)].request(req.payload())
        except ProcessError as exc:
            raise GeneratorFailure(str(exc)) from exc
        return self._output(req, reply)

    def call_many(self, reqs: Sequence[GenRequest]) -> tuple[list[Optional[str]], dict[int, GeneratorFailure]]:
        """Outputs in request order, plus failures keyed by request position."""
        failures: dict[int, GeneratorFailure] = {}

        def on_error(k: int, exc: Exception) -> None:
            failures[k] = exc if isinstance(exc, GeneratorFailure) else GeneratorFailure(str(exc))

        replies = map_requests(self._procs, [r.payload() for r in reqs], on_error=on_error)
        outputs: list[Optional[str]] = []
        for k, (req, reply) in enumerate(zip(reqs, replies)):
            if k in failures:
                outputs.append(None)
                continue
            try:
                outputs.append(self._output(req, reply))
            except GeneratorFailure as exc:
                failures[k] = exc
                outputs.append(None)
        return outputs, failures

    def close(self) -> None:
        for p in self._procs:
            p.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
