"""JSON-lines inference traces shared by the saturation loops."""

from __future__ import annotations

import json
from typing import IO, Optional

__all__ = ["Trace"]


class Trace:
    """Collects inference events and optionally streams them as JSON lines."""

    def __init__(self, stream: Optional[IO[str]] = None):
        self.stream = stream
        self.events: list = []

    def emit(self, event: str, **fields) -> None:
        record = {"event": event, **fields}
        self.events.append(record)
        if self.stream is not None:
            self.stream.write(json.dumps(record, sort_keys=True) + "\n")

    def of(self, event: str) -> list:
        return [e for e in self.events if e["event"] == event]


def unifier_json(s: dict) -> dict:
    return {str(k): str(v) for k, v in sorted(s.items(), key=lambda kv: kv[0].name)}
