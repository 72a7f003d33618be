"""Content-addressed result cache for enumeration outputs.

One JSON file per spec, keyed by a hash of the spec and the engine
version, so algorithm changes invalidate stale results.  All writes are
atomic (write-temp-then-rename).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__
from .enumeration import EnsembleSpec

ENV_VAR = "POLYLAT_CACHE"


def cache_dir(override=None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "polylat"


def cache_key(spec: EnsembleSpec, engine_version: str = None) -> str:
    payload = {"spec": spec.as_dict(),
               "engine": engine_version or __version__}
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def cache_path(spec: EnsembleSpec, directory=None) -> Path:
    return cache_dir(directory) / (cache_key(spec) + ".json")


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(spec: EnsembleSpec, directory=None) -> dict | None:
    path = cache_path(spec, directory)
    if not path.exists():
        return None
    with open(path) as handle:
        return json.load(handle)


def store(spec: EnsembleSpec, document: dict, directory=None) -> Path:
    path = cache_path(spec, directory)
    atomic_write_text(path, json.dumps(document, indent=1, sort_keys=True))
    return path
