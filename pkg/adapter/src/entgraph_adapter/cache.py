"""Content-addressed cache for external-tool outputs.

Entries are keyed by (tool name, tool version, input payload) so a rerun
with unchanged tools reproduces byte-identical files without network access.
Writes are atomic (temp file + rename), one JSON file per entry.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional


class ToolCache:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(tool: str, version: str, payload: str) -> str:
        blob = json.dumps([tool, version, payload], ensure_ascii=False)
        return hashlib.sha1(blob.encode("utf-8")).hexdigest()

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, tool: str, version: str, payload: str) -> Optional[object]:
        path = self._path(self.key(tool, version, payload))
        if not path.exists():
            return None
        record = json.loads(path.read_text("utf-8"))
        return record["output"]

    def put(self, tool: str, version: str, payload: str, output: object) -> None:
        record = {"tool": tool, "version": version, "input": payload, "output": output}
        path = self._path(self.key(tool, version, payload))
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(record, fh, ensure_ascii=False, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def __len__(self) -> int:
        return sum(1 for _ in self.directory.glob("*.json"))
