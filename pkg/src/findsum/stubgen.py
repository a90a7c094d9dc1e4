"""Deterministic stand-in generator for wiring tests and dry runs.

Usage: ``python -m findsum.stubgen MODE`` where MODE is one of

* ``echo``: output is the request input;
* ``slot``: output is the request id;
* ``lead``: the leading sentences of the input within ``max_len`` words;
* ``fail``: every request gets an error reply;
* ``fail-id:N``: only request id N gets an error reply;
* ``crash``: exit with status 3 on the first request.
"""

from __future__ import annotations

import json
import sys

from findsum.textutil import truncate_sentences


def answer(mode: str, req: dict) -> dict:
    rid = req.get("id")
    if mode == "fail" or (mode.startswith("fail-id:") and str(rid) == mode.split(":", 1)[1]):
        return {"id": rid, "error": "stub failure"}
    text = req.get("input", "")
    if mode == "slot":
        return {"id": rid, "output": str(rid)}
    if mode == "lead":
        max_len = int(req.get("hints", {}).get("max_len", 100))
        return {"id": rid, "output": truncate_sentences(text, max_len)}
    return {"id": rid, "output": text}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    mode = argv[0] if argv else "echo"
    for line in sys.stdin:
        if not line.strip():
            continue
        if mode == "crash":
            print("stub generator crashed", file=sys.stderr)
            return 3
        print(json.dumps(answer(mode, json.loads(line))), flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
