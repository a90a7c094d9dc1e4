"""Work-directory layout, stage manifests and config-digest checks."""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

from findsum.errors import ConfigError

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"
STAGE_DIRS = ("docs", "corpus", "selection", "tuples", "summaries", "reports")


class DigestMismatch(ConfigError):
    pass


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(obj), encoding="utf-8")


def read_json(path: Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(stage_dir: Path, stage: str, digest: str) -> None:
    """Record the digest and a content hash of every file under ``stage_dir``."""
    files = {str(p.relative_to(stage_dir)): _sha(p) for p in sorted(stage_dir.rglob("*"))
             if p.is_file() and p.name != MANIFEST}
    write_json(stage_dir / MANIFEST, {"stage": stage, "config_digest": digest, "files": files})


def check_stage(stage_dir: Path, stage: str, expected: str, force: bool = False) -> None:
    """Refuse to consume ``stage_dir`` if it was produced under another config."""
    path = stage_dir / MANIFEST
    if not path.exists():
        raise FileNotFoundError(f"{stage_dir} has no {MANIFEST}; run the {stage} stage first")
    found = read_json(path).get("config_digest")
    if found != expected:
        msg = (f"{stage_dir} was produced under config digest {found}, the current config gives "
               f"{expected}; rerun that stage or pass --force")
        if not force:
            raise DigestMismatch(msg)
        log.warning("%s (continuing because of --force)", msg)
