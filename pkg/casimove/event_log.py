from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Any, Literal

EventType = Literal[
    "patch_start",
    "refine",
    "exclude",
    "patch_done",
    "converged",
    "capped",
]

_OUTCOMES: tuple[EventType, ...] = ("converged", "capped")


@dataclass(frozen=True)
class QuadratureEvent:
    event_type: EventType
    channel: str
    patch: str
    round: int = 0
    details: dict[str, Any] = field(default_factory=dict)


class EventLog:
    """Refinement history of one or more channel integrals, in recording order."""

    def __init__(self, channel: str = "") -> None:
        self.channel = channel
        self._events: list[QuadratureEvent] = []

    def record(
        self, event_type: EventType, patch: str, round: int = 0, **details: Any
    ) -> QuadratureEvent:
        event = QuadratureEvent(event_type, self.channel, patch, round, dict(details))
        self._events.append(event)
        return event

    def extend(self, other: EventLog) -> None:
        self._events.extend(other._events)

    @classmethod
    def merge(cls, logs: Iterable[EventLog | None]) -> EventLog:
        merged = cls()
        for log in logs:
            if log is not None:
                merged.extend(log)
        return merged

    def __iter__(self) -> Iterator[QuadratureEvent]:
        return iter(self._events)

    def __len__(self) -> int:
        return len(self._events)

    @property
    def channels(self) -> list[str]:
        return list(dict.fromkeys(e.channel for e in self._events))

    def filter(
        self,
        channel: str | None = None,
        patch: str | None = None,
        event_type: EventType | None = None,
    ) -> list[QuadratureEvent]:
        result = self._events
        if channel is not None:
            result = [e for e in result if e.channel == channel]
        if patch is not None:
            result = [e for e in result if e.patch == patch]
        if event_type is not None:
            result = [e for e in result if e.event_type == event_type]
        return result

    def refinements(self, channel: str | None = None) -> Counter[str]:
        """Number of cells split per patch."""
        return Counter(e.patch for e in self.filter(channel=channel, event_type="refine"))

    def outcome(self, channel: str) -> QuadratureEvent | None:
        closing = [e for e in self.filter(channel=channel) if e.event_type in _OUTCOMES]
        return closing[-1] if closing else None

    def format(self) -> str:
        lines: list[str] = []
        for channel in self.channels:
            outcome = self.outcome(channel)
            if outcome is None:
                lines.append(f"{channel}: unfinished")
            else:
                d = outcome.details
                lines.append(
                    f"{channel}: {outcome.event_type} after {outcome.round} rounds, "
                    f"value={d['value']:.6e} error={d['error']:.3e} cells={d['cells']}"
                )
            split = self.refinements(channel)
            excluded = Counter(e.patch for e in self.filter(channel=channel, event_type="exclude"))
            for done in self.filter(channel=channel, event_type="patch_done"):
                d = done.details
                lines.append(
                    f"  {done.patch:32s} value={d['value']:.6e} error={d['error']:.3e} "
                    f"cells={d['cells']} split={split[done.patch]} excluded={excluded[done.patch]}"
                )
        return "\n".join(lines)
