"""Session-log ingestion: event parsing, document replay, suggestion episodes.

A writing session arrives as line-delimited JSON where each line describes one
editor event (``eventName``, ``eventSource``, ``eventTimestamp``, optional
Quill-style ``textDelta``, optional ``currentSuggestions``). This module
normalizes those lines into :class:`EventRecord` values, replays the text
deltas to reconstruct the final document, and segments the event stream into
suggestion episodes.

Provenance tracking
-------------------

The replayed document carries a set of spans that exactly tile the text.
Every span has one of three origins:

- ``human``: typed by the writer,
- ``api-verbatim``: inserted by the assistant and never revised inside,
- ``api-modified``: inserted by the assistant, then revised by the writer.

A *user* edit revises an api span when it touches the span's interior: an
insert strictly between the span's endpoints, or a delete that removes at
least one of the span's characters. Edits at the boundary (appending right
after a suggestion, typing just before it) do not flip the span. A span whose
text is entirely deleted is dropped from the tiling and counts as the
strongest possible revision.

Event-name mapping
------------------

Raw logs from the public writing-session release use slightly different event
names; they are normalized via :data:`RAW_EVENT_NAMES` (e.g.
``system-initialize`` -> ``system-init``, ``cursor-forward`` ->
``cursor-move``). Unknown names map to ``other`` and stay in the stream as
inert records so event counts are preserved. The initial writing prompt ships
as a ``system-initialize`` text delta in real logs, so ``system-init`` records
may carry a delta; ``text-insert``/``text-delete`` must carry one; all other
events never do.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Mapping

from .errors import LogConsistencyError, ParseError, ReplayError, ValidationError

TEMPERATURE_DOMAIN = (0.2, 0.3, 0.75, 0.9)
FREQUENCY_PENALTY_DOMAIN = (0.0, 0.5, 1.0)


class EventName(str, Enum):
    SYSTEM_INIT = "system-init"
    TEXT_INSERT = "text-insert"
    TEXT_DELETE = "text-delete"
    CURSOR_MOVE = "cursor-move"
    SUGGESTION_GET = "suggestion-get"
    SUGGESTION_OPEN = "suggestion-open"
    SUGGESTION_SELECT = "suggestion-select"
    SUGGESTION_CLOSE = "suggestion-close"
    SUGGESTION_REOPEN = "suggestion-reopen"
    SUGGESTION_HOVER = "suggestion-hover"
    OTHER = "other"


class EventSource(str, Enum):
    USER = "user"
    API = "api"


class SpanOrigin(str, Enum):
    HUMAN = "human"
    API_VERBATIM = "api-verbatim"
    API_MODIFIED = "api-modified"


class Resolution(str, Enum):
    REJECTED = "rejected"
    ACCEPTED_VERBATIM = "accepted-verbatim"
    ACCEPTED_MODIFIED = "accepted-modified"


RAW_EVENT_NAMES: Mapping[str, EventName] = {
    "system-initialize": EventName.SYSTEM_INIT,
    "system-init": EventName.SYSTEM_INIT,
    "text-insert": EventName.TEXT_INSERT,
    "text-delete": EventName.TEXT_DELETE,
    "cursor-move": EventName.CURSOR_MOVE,
    "cursor-forward": EventName.CURSOR_MOVE,
    "cursor-backward": EventName.CURSOR_MOVE,
    "cursor-select": EventName.CURSOR_MOVE,
    "suggestion-get": EventName.SUGGESTION_GET,
    "suggestion-open": EventName.SUGGESTION_OPEN,
    "suggestion-select": EventName.SUGGESTION_SELECT,
    "suggestion-close": EventName.SUGGESTION_CLOSE,
    "suggestion-reopen": EventName.SUGGESTION_REOPEN,
    "suggestion-hover": EventName.SUGGESTION_HOVER,
}

_DELTA_BEARING = (EventName.TEXT_INSERT, EventName.TEXT_DELETE, EventName.SYSTEM_INIT)


@dataclass(frozen=True)
class EditDelta:
    """A single edit site: optional deletion then optional insertion at offset."""

    offset: int
    inserted: str = ""
    deleted_length: int = 0


@dataclass(frozen=True)
class EventRecord:
    index: int
    name: EventName
    source: EventSource
    timestamp: int
    delta: EditDelta | None = None
    suggestions: tuple[str, ...] | None = None


@dataclass(frozen=True)
class SessionMeta:
    """Per-session covariates: C1 genre, C2 topic, C3 language background,
    C4 sampling temperature, C5 frequency penalty."""

    genre: int
    topic: str
    native: int
    temperature: float
    frequency_penalty: float

    def __post_init__(self) -> None:
        if self.genre not in (0, 1):
            raise ValidationError(f"genre must be 0/1, got {self.genre!r}")
        if self.native not in (0, 1):
            raise ValidationError(f"native must be 0/1, got {self.native!r}")
        if not self.topic:
            raise ValidationError("topic must be a non-empty label")
        if self.temperature not in TEMPERATURE_DOMAIN:
            raise ValidationError(
                f"temperature {self.temperature!r} outside {TEMPERATURE_DOMAIN}"
            )
        if self.frequency_penalty not in FREQUENCY_PENALTY_DOMAIN:
            raise ValidationError(
                f"frequency_penalty {self.frequency_penalty!r} outside {FREQUENCY_PENALTY_DOMAIN}"
            )


@dataclass(frozen=True)
class SessionLog:
    session_id: str
    events: tuple[EventRecord, ...]
    meta: SessionMeta


@dataclass(frozen=True)
class ProvenanceSpan:
    start: int
    end: int
    origin: SpanOrigin


@dataclass(frozen=True)
class DocumentState:
    """Final reconstructed text plus provenance spans tiling [0, len(text))."""

    text: str
    spans: tuple[ProvenanceSpan, ...]


@dataclass(frozen=True)
class SuggestionEpisode:
    """One suggestion-get request and how it resolved."""

    get_index: int
    shown: tuple[str, ...]
    resolution: Resolution
    accepted_text: str | None = None


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------


def parse_session_log(
    raw: bytes | str | IO[bytes] | Path,
    session_id: str,
    meta: SessionMeta,
) -> SessionLog:
    """Parse a line-delimited JSON event stream into a SessionLog.

    Raises ParseError (malformed line or delta/name mismatch, 1-based line
    number in the message) and ValidationError (timestamp regression), and
    keeps every non-blank line as exactly one event record.
    """
    if isinstance(raw, Path):
        raw = raw.read_bytes()
    elif hasattr(raw, "read"):
        raw = raw.read()  # type: ignore[union-attr]
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None

    events: list[EventRecord] = []
    last_timestamp: int | None = None
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", line=line_no) from None
        if not isinstance(payload, dict):
            raise ParseError("event line is not an object", line=line_no)
        events.append(_decode_event(payload, len(events), line_no))
        ts = events[-1].timestamp
        if last_timestamp is not None and ts < last_timestamp:
            raise ValidationError(
                f"line {line_no}: timestamp regression ({ts} < {last_timestamp})"
            )
        last_timestamp = ts

    if not events:
        raise ParseError("no events: the session stream is empty")

    start = events[0].timestamp
    normalized = tuple(replace(ev, timestamp=ev.timestamp - start) for ev in events)
    return SessionLog(session_id=session_id, events=normalized, meta=meta)


def _decode_event(payload: dict, index: int, line_no: int) -> EventRecord:
    raw_name = payload.get("eventName")
    if not isinstance(raw_name, str):
        raise ParseError("missing eventName", line=line_no)
    name = RAW_EVENT_NAMES.get(raw_name, EventName.OTHER)

    raw_source = payload.get("eventSource")
    try:
        source = EventSource(raw_source)
    except ValueError:
        raise ParseError(f"unknown eventSource {raw_source!r}", line=line_no) from None

    raw_ts = payload.get("eventTimestamp")
    if not isinstance(raw_ts, (int, float)) or isinstance(raw_ts, bool):
        raise ParseError(f"bad eventTimestamp {raw_ts!r}", line=line_no)

    delta = None
    if name in _DELTA_BEARING and payload.get("textDelta") is not None:
        delta = _decode_delta(payload["textDelta"], line_no)
    if name is EventName.TEXT_INSERT:
        if delta is None or not delta.inserted or delta.deleted_length:
            raise ParseError("text-insert requires a pure insert delta", line=line_no)
    elif name is EventName.TEXT_DELETE:
        if delta is None or delta.inserted or not delta.deleted_length:
            raise ParseError("text-delete requires a pure delete delta", line=line_no)
    elif name is EventName.SYSTEM_INIT and delta is not None and delta.deleted_length:
        raise ParseError("system-init delta cannot delete", line=line_no)

    suggestions = _decode_suggestions(payload.get("currentSuggestions"), line_no)
    return EventRecord(
        index=index,
        name=name,
        source=source,
        timestamp=int(raw_ts),
        delta=delta,
        suggestions=suggestions,
    )


def _decode_delta(payload: object, line_no: int) -> EditDelta | None:
    ops = payload.get("ops") if isinstance(payload, dict) else payload
    if not isinstance(ops, list):
        raise ParseError("textDelta has no op list", line=line_no)
    offset = 0
    inserted = ""
    deleted = 0
    edited = False
    for op in ops:
        if not isinstance(op, dict):
            raise ParseError("malformed delta op", line=line_no)
        if "retain" in op:
            if edited:
                raise ParseError("unsupported multi-site delta", line=line_no)
            offset += _nonneg_int(op["retain"], "retain", line_no)
        elif "insert" in op:
            if inserted:
                raise ParseError("unsupported multi-site delta", line=line_no)
            value = op["insert"]
            if not isinstance(value, str):
                raise ParseError("non-text insert op", line=line_no)
            inserted = value
            edited = True
        elif "delete" in op:
            if deleted:
                raise ParseError("unsupported multi-site delta", line=line_no)
            deleted = _nonneg_int(op["delete"], "delete", line_no)
            edited = True
        else:
            raise ParseError(f"unknown delta op {sorted(op)!r}", line=line_no)
    if not edited:
        return None
    return EditDelta(offset=offset, inserted=inserted, deleted_length=deleted)


def _nonneg_int(value: object, what: str, line_no: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ParseError(f"bad {what} count {value!r}", line=line_no)
    return value


def _decode_suggestions(payload: object, line_no: int) -> tuple[str, ...] | None:
    if payload is None:
        return None
    if not isinstance(payload, list):
        raise ParseError("currentSuggestions is not a list", line=line_no)
    texts: list[str] = []
    for item in payload:
        if isinstance(item, str):
            texts.append(item)
        elif isinstance(item, dict):
            text = item.get("trimmed", item.get("original"))
            if not isinstance(text, str):
                raise ParseError("suggestion entry has no text", line=line_no)
            texts.append(text)
        else:
            raise ParseError("malformed suggestion entry", line=line_no)
    return tuple(texts) if texts else None


def load_session_log(path: Path | str, meta: SessionMeta) -> SessionLog:
    """Load one ``<session_id>.jsonl`` file."""
    path = Path(path)
    try:
        return parse_session_log(path.read_bytes(), path.stem, meta)
    except ParseError as exc:
        raise ParseError(f"{path.name}: {exc}") from None


_GENRE_LABELS = {"creative": 1, "argumentative": 0, "1": 1, "0": 0}
_NATIVE_LABELS = {"native": 1, "non-native": 0, "nonnative": 0, "1": 1, "0": 0}

METADATA_COLUMNS = (
    "session_id",
    "genre",
    "topic",
    "native",
    "temperature",
    "frequency_penalty",
)


def load_session_metadata(path: Path | str) -> dict[str, SessionMeta]:
    """Load the sidecar metadata CSV mapping session ids to covariates."""
    import csv

    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(METADATA_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValidationError(
                f"{path.name}: missing metadata columns {sorted(missing)}"
            )
        table: dict[str, SessionMeta] = {}
        for row_no, row in enumerate(reader, start=2):
            sid = row["session_id"].strip()
            if not sid:
                raise ValidationError(f"{path.name}: blank session_id on row {row_no}")
            if sid in table:
                raise ValidationError(f"{path.name}: duplicate session_id {sid!r}")
            genre = _GENRE_LABELS.get(row["genre"].strip().lower())
            native = _NATIVE_LABELS.get(row["native"].strip().lower())
            if genre is None:
                raise ValidationError(f"{path.name}: bad genre {row['genre']!r}")
            if native is None:
                raise ValidationError(f"{path.name}: bad native {row['native']!r}")
            try:
                temperature = float(row["temperature"])
                frequency_penalty = float(row["frequency_penalty"])
            except ValueError:
                raise ValidationError(
                    f"{path.name}: non-numeric sampling settings on row {row_no}"
                ) from None
            table[sid] = SessionMeta(
                genre=genre,
                topic=row["topic"].strip(),
                native=native,
                temperature=temperature,
                frequency_penalty=frequency_penalty,
            )
    return table


# --------------------------------------------------------------------------
# Replay
# --------------------------------------------------------------------------


class _LiveSpan:
    __slots__ = ("start", "end", "origin", "record")

    def __init__(self, start: int, end: int, origin: SpanOrigin, record: "_ApiInsertRecord | None"):
        self.start = start
        self.end = end
        self.origin = origin
        self.record = record


class _ApiInsertRecord:
    __slots__ = ("modified",)

    def __init__(self) -> None:
        self.modified = False


class DocumentReplayer:
    """Incremental replay of edit events with provenance-span maintenance."""

    def __init__(self) -> None:
        self._text: str = ""
        self._spans: list[_LiveSpan] = []
        self._records: dict[int, _ApiInsertRecord] = {}

    @property
    def text(self) -> str:
        return self._text

    def apply(self, event: EventRecord) -> None:
        """Apply one event; non-edit events are inert."""
        delta = event.delta
        if delta is None or event.name not in _DELTA_BEARING:
            return
        if delta.deleted_length:
            self._delete(delta.offset, delta.deleted_length, event.source, event.index)
        if delta.inserted:
            self._insert(delta.offset, delta.inserted, event.source, event.index, event.name)

    def live_spans(self) -> tuple[ProvenanceSpan, ...]:
        """Current tiling without same-origin merging (for invariant checks)."""
        return tuple(ProvenanceSpan(s.start, s.end, s.origin) for s in self._spans)

    def state(self) -> DocumentState:
        """Final document with adjacent same-origin spans merged."""
        merged: list[ProvenanceSpan] = []
        for span in self._spans:
            if merged and merged[-1].origin is span.origin and merged[-1].end == span.start:
                merged[-1] = ProvenanceSpan(merged[-1].start, span.end, span.origin)
            else:
                merged.append(ProvenanceSpan(span.start, span.end, span.origin))
        return DocumentState(text=self._text, spans=tuple(merged))

    def final_origin(self, event_index: int) -> SpanOrigin:
        """Final origin of the span created by an api text-insert event."""
        record = self._records.get(event_index)
        if record is None:
            raise LogConsistencyError(
                f"event {event_index} did not create an api span"
            )
        return SpanOrigin.API_MODIFIED if record.modified else SpanOrigin.API_VERBATIM

    def _insert(
        self,
        offset: int,
        text: str,
        source: EventSource,
        event_index: int,
        name: EventName,
    ) -> None:
        size = len(self._text)
        if offset < 0 or offset > size:
            raise ReplayError(
                f"insert offset {offset} out of bounds for length {size}",
                event_index=event_index,
            )
        length = len(text)
        self._text = self._text[:offset] + text + self._text[offset:]

        record = None
        if source is EventSource.API and name is EventName.TEXT_INSERT:
            record = _ApiInsertRecord()
            self._records[event_index] = record
        origin = SpanOrigin.HUMAN if source is EventSource.USER else SpanOrigin.API_VERBATIM
        new_span = _LiveSpan(offset, offset + length, origin, record)

        out: list[_LiveSpan] = []
        placed = False
        for span in self._spans:
            if span.end <= offset:
                out.append(span)
            elif span.start >= offset:
                if not placed:
                    out.append(new_span)
                    placed = True
                span.start += length
                span.end += length
                out.append(span)
            else:
                # offset strictly inside: split, and a user edit in the
                # interior of an api span is a revision.
                right = _LiveSpan(offset + length, span.end + length, span.origin, span.record)
                span.end = offset
                if source is EventSource.USER and span.origin is not SpanOrigin.HUMAN:
                    span.origin = SpanOrigin.API_MODIFIED
                    right.origin = SpanOrigin.API_MODIFIED
                    if span.record is not None:
                        span.record.modified = True
                out.append(span)
                out.append(new_span)
                placed = True
                out.append(right)
        if not placed:
            out.append(new_span)
        self._spans = out

    def _delete(self, offset: int, count: int, source: EventSource, event_index: int) -> None:
        size = len(self._text)
        end = offset + count
        if offset < 0 or count <= 0 or end > size:
            raise ReplayError(
                f"delete range [{offset}, {end}) out of bounds for length {size}",
                event_index=event_index,
            )
        self._text = self._text[:offset] + self._text[end:]

        out: list[_LiveSpan] = []
        for span in self._spans:
            overlap = min(span.end, end) - max(span.start, offset)
            if overlap > 0:
                if source is EventSource.USER and span.origin is not SpanOrigin.HUMAN:
                    span.origin = SpanOrigin.API_MODIFIED
                    if span.record is not None:
                        span.record.modified = True
                if (span.end - span.start) == overlap:
                    # Fully deleted spans drop out; for an api span that is
                    # the strongest revision regardless of who deleted it.
                    if span.record is not None:
                        span.record.modified = True
                    continue
            else:
                overlap = 0
            shift = max(0, min(span.start, end) - offset)
            span.start -= shift
            span.end -= shift + overlap
            out.append(span)
        self._spans = out


def reconstruct_document(log: SessionLog) -> DocumentState:
    """Replay all events of a session and return the final document."""
    replayer = DocumentReplayer()
    for event in log.events:
        replayer.apply(event)
    return replayer.state()


# --------------------------------------------------------------------------
# Suggestion episodes
# --------------------------------------------------------------------------


def segment_suggestion_episodes(log: SessionLog) -> list[SuggestionEpisode]:
    """Partition the event stream into one episode per suggestion-get.

    An episode runs from its get event to the next get (or end of log). It
    resolves accepted when a suggestion-select occurs in that window and the
    api text-insert following the select materialized text; the final origin
    of that inserted span decides verbatim vs modified. Everything else is a
    rejection.
    """
    replayer = DocumentReplayer()
    for event in log.events:
        replayer.apply(event)

    events = log.events
    get_indices = [ev.index for ev in events if ev.name is EventName.SUGGESTION_GET]
    first_get = get_indices[0] if get_indices else None
    for ev in events:
        if ev.name is EventName.SUGGESTION_SELECT and (
            first_get is None or ev.index < first_get
        ):
            raise LogConsistencyError(
                f"suggestion-select at event {ev.index} has no preceding suggestion-get"
            )

    episodes: list[SuggestionEpisode] = []
    bounds = get_indices + [len(events)]
    for k, get_index in enumerate(get_indices):
        window_end = bounds[k + 1]
        shown = events[get_index].suggestions
        if shown is None:
            for ev in events[get_index + 1 : window_end]:
                if ev.suggestions is not None:
                    shown = ev.suggestions
                    break
        select_index = next(
            (
                ev.index
                for ev in events[get_index + 1 : window_end]
                if ev.name is EventName.SUGGESTION_SELECT
            ),
            None,
        )
        resolution = Resolution.REJECTED
        accepted_text: str | None = None
        if select_index is not None:
            insert_index = next(
                (
                    ev.index
                    for ev in events[select_index + 1 : window_end]
                    if ev.name is EventName.TEXT_INSERT and ev.source is EventSource.API
                ),
                None,
            )
            if insert_index is not None:
                origin = replayer.final_origin(insert_index)
                resolution = (
                    Resolution.ACCEPTED_VERBATIM
                    if origin is SpanOrigin.API_VERBATIM
                    else Resolution.ACCEPTED_MODIFIED
                )
                accepted_text = events[insert_index].delta.inserted  # type: ignore[union-attr]
        episodes.append(
            SuggestionEpisode(
                get_index=get_index,
                shown=shown or (),
                resolution=resolution,
                accepted_text=accepted_text,
            )
        )
    return episodes
