"""Pluggable tool backends: dependency parser, entity typer, translator.

Every backend sits behind the cache; with no live backend configured the
adapter runs entirely from committed cache entries, which is how the test
fixtures work offline.
"""
from __future__ import annotations

import json
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol

from .cache import ToolCache


class ParserBackend(Protocol):
    name: str
    version: str

    def parse(self, text: str) -> Optional[dict]:
        """Return {"tokens": [{"i","form","pos","head","deprel"}...]} or None."""


class TyperBackend(Protocol):
    name: str
    version: str

    def type_mentions(self, text: str) -> Optional[list]:
        """Return [{"start","end","labels"}...]; None means the tool failed."""


class TranslatorBackend(Protocol):
    name: str
    version: str

    def translate(self, text: str, direction: str) -> Optional[str]:
        """direction is e.g. "en-zh"; None means no translation produced."""


@dataclass
class HttpTool:
    """Minimal JSON-over-HTTP client: POST {"input": ..., "direction": ...}.

    Expects {"output": ...} back.  Only used when an endpoint is configured;
    the offline test fixtures never touch it.
    """

    name: str
    version: str
    endpoint: str
    timeout: float = 30.0

    def _call(self, payload: dict) -> Optional[object]:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        request = urllib.request.Request(
            self.endpoint, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                return json.loads(response.read().decode("utf-8")).get("output")
        except Exception:
            return None

    def parse(self, text: str) -> Optional[dict]:
        return self._call({"input": text, "task": "parse"})

    def type_mentions(self, text: str) -> Optional[list]:
        return self._call({"input": text, "task": "type"})

    def translate(self, text: str, direction: str) -> Optional[str]:
        return self._call({"input": text, "task": "translate", "direction": direction})


class TsvTranslator:
    """Offline dictionary translator: lines of `direction \\t source \\t target`."""

    name = "tsv-translator"

    def __init__(self, path: str | Path):
        self.version = Path(path).name
        self.table: dict[tuple[str, str], str] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                direction, source, target = line.split("\t")
                self.table[(direction, source)] = target

    def translate(self, text: str, direction: str) -> Optional[str]:
        return self.table.get((direction, text))


class CachedParser:
    def __init__(self, cache: ToolCache, backend: Optional[ParserBackend] = None,
                 name: str = "parser", version: str = "fixture-1"):
        self.cache = cache
        self.backend = backend
        self.name = backend.name if backend else name
        self.version = backend.version if backend else version

    def parse(self, text: str) -> Optional[dict]:
        hit = self.cache.get(self.name, self.version, text)
        if hit is not None:
            return hit
        if self.backend is None:
            return None
        result = self.backend.parse(text)
        if result is not None:
            self.cache.put(self.name, self.version, text, result)
        return result


class CachedTyper:
    def __init__(self, cache: ToolCache, backend: Optional[TyperBackend] = None,
                 name: str = "typer", version: str = "fixture-1"):
        self.cache = cache
        self.backend = backend
        self.name = backend.name if backend else name
        self.version = backend.version if backend else version

    def type_mentions(self, text: str) -> Optional[list]:
        hit = self.cache.get(self.name, self.version, text)
        if hit is not None:
            return hit
        if self.backend is None:
            return None
        result = self.backend.type_mentions(text)
        if result is not None:
            self.cache.put(self.name, self.version, text, result)
        return result


class CachedTranslator:
    def __init__(self, cache: ToolCache, backend: Optional[TranslatorBackend] = None,
                 name: str = "translator", version: str = "fixture-1"):
        self.cache = cache
        self.backend = backend
        self.name = backend.name if backend else name
        self.version = backend.version if backend else version

    def translate(self, text: str, direction: str) -> Optional[str]:
        payload = f"{direction}\t{text}"
        hit = self.cache.get(self.name, self.version, payload)
        if hit is not None:
            return hit
        if self.backend is None:
            return None
        result = self.backend.translate(text, direction)
        if result is not None:
            self.cache.put(self.name, self.version, payload, result)
        return result
