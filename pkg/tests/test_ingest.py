"""Event-stream parsing, document replay with provenance, and episode
segmentation."""

from __future__ import annotations

import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from writelab import (
    DocumentReplayer,
    load_session_log,
    load_session_metadata,
    parse_session_log,
    reconstruct_document,
    segment_suggestion_episodes,
)
from writelab.errors import (
    LogConsistencyError,
    ParseError,
    ReplayError,
    ValidationError,
)
from writelab.ingest import (
    EditDelta,
    EventName,
    EventRecord,
    EventSource,
    Resolution,
    SessionMeta,
    SpanOrigin,
)

META = SessionMeta(genre=1, topic="dragons", native=1, temperature=0.2, frequency_penalty=0.0)


def ev(name: str, source: str, ts: int, ops=None, suggestions=None, index=None) -> str:
    payload: dict = {"eventName": name, "eventSource": source, "eventTimestamp": ts}
    if ops is not None:
        payload["textDelta"] = {"ops": ops}
    if suggestions is not None:
        payload["currentSuggestions"] = suggestions
    if index is not None:
        payload["currentSuggestionIndex"] = index
    return json.dumps(payload)


def stream(*lines: str) -> str:
    return "\n".join(lines) + "\n"


def parse(*lines: str):
    return parse_session_log(stream(*lines), "test", META)


def record(index, name, source, ts=0, delta=None, suggestions=None) -> EventRecord:
    return EventRecord(
        index=index, name=name, source=source, timestamp=ts, delta=delta, suggestions=suggestions
    )


class TestParse:
    def test_minimal_log(self):
        log = parse(
            ev("system-initialize", "api", 500, ops=[{"insert": "Prompt\n"}]),
            ev("text-insert", "user", 1200, ops=[{"retain": 7}, {"insert": "Hi"}]),
            ev("suggestion-get", "user", 1900),
        )
        assert [e.name for e in log.events] == [
            EventName.SYSTEM_INIT,
            EventName.TEXT_INSERT,
            EventName.SUGGESTION_GET,
        ]
        # Timestamps are normalised to start at zero.
        assert [e.timestamp for e in log.events] == [0, 700, 1400]
        assert log.events[1].delta == EditDelta(offset=7, inserted="Hi", deleted_length=0)

    def test_one_event_per_nonblank_line(self, corpus_dir):
        metas = load_session_metadata(corpus_dir / "metadata.csv")
        for path in sorted((corpus_dir / "sessions").glob("*.jsonl")):
            nonblank = sum(
                1 for line in path.read_text().splitlines() if line.strip()
            )
            log = load_session_log(path, metas[path.stem])
            assert len(log.events) == nonblank

    def test_blank_lines_skipped(self):
        log = parse_session_log(
            "\n" + ev("suggestion-get", "user", 0) + "\n\n" + ev("suggestion-close", "user", 5) + "\n\n",
            "test",
            META,
        )
        assert len(log.events) == 2

    def test_input_forms_equivalent(self):
        text = stream(ev("suggestion-get", "user", 0))
        a = parse_session_log(text, "t", META)
        b = parse_session_log(text.encode(), "t", META)
        c = parse_session_log(io.BytesIO(text.encode()), "t", META)
        assert a.events == b.events == c.events

    def test_malformed_json_line_number(self):
        with pytest.raises(ParseError) as err:
            parse(ev("suggestion-get", "user", 0), "{not json")
        assert err.value.line == 2
        assert "line 2" in str(err.value)

    def test_non_object_line(self):
        with pytest.raises(ParseError):
            parse("[1, 2]")

    def test_empty_stream(self):
        with pytest.raises(ParseError, match="empty"):
            parse_session_log("\n\n", "t", META)

    def test_invalid_utf8(self):
        with pytest.raises(ParseError, match="UTF-8"):
            parse_session_log(b"\xff\xfe{}", "t", META)

    def test_timestamp_regression(self):
        with pytest.raises(ValidationError, match="regression"):
            parse(ev("suggestion-get", "user", 100), ev("suggestion-close", "user", 50))

    def test_unknown_event_name_kept_as_other(self):
        log = parse(ev("window-blur", "user", 0))
        assert log.events[0].name is EventName.OTHER

    def test_unknown_source_rejected(self):
        with pytest.raises(ParseError):
            parse(ev("suggestion-get", "gremlin", 0))

    def test_missing_event_name(self):
        with pytest.raises(ParseError, match="eventName"):
            parse(json.dumps({"eventSource": "user", "eventTimestamp": 0}))

    def test_insert_event_with_delete_op(self):
        with pytest.raises(ParseError, match="pure insert"):
            parse(ev("text-insert", "user", 0, ops=[{"delete": 3}]))

    def test_delete_event_with_insert_op(self):
        with pytest.raises(ParseError):
            parse(ev("text-delete", "user", 0, ops=[{"insert": "x"}]))

    def test_negative_retain_rejected(self):
        with pytest.raises(ParseError):
            parse(ev("text-insert", "user", 0, ops=[{"retain": -2}, {"insert": "x"}]))

    def test_load_session_log_names_file(self, tmp_path):
        bad = tmp_path / "s99.jsonl"
        bad.write_text("{broken\n")
        with pytest.raises(ParseError, match="s99"):
            load_session_log(bad, META)

    def test_suggestions_decoded_from_dicts(self):
        log = parse(
            ev(
                "suggestion-open",
                "api",
                0,
                suggestions=[
                    {"trimmed": "One.", "original": " One.", "probability": -0.4},
                    {"trimmed": "Two.", "original": " Two.", "probability": -0.8},
                ],
            )
        )
        assert log.events[0].suggestions == ("One.", "Two.")


class TestReplay:
    def test_user_insert(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.TEXT_INSERT, EventSource.USER, delta=EditDelta(0, "abc"))
        )
        state = replayer.state()
        assert state.text == "abc"
        assert [(s.start, s.end, s.origin) for s in state.spans] == [(0, 3, SpanOrigin.HUMAN)]

    def test_user_delete_inside_api_span_marks_modified(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.TEXT_INSERT, EventSource.API, delta=EditDelta(0, "cat"))
        )
        replayer.apply(
            record(1, EventName.TEXT_DELETE, EventSource.USER, delta=EditDelta(1, deleted_length=1))
        )
        state = replayer.state()
        assert state.text == "ct"
        assert [(s.start, s.end, s.origin) for s in state.spans] == [
            (0, 2, SpanOrigin.API_MODIFIED)
        ]
        assert replayer.final_origin(0) is SpanOrigin.API_MODIFIED

    def test_append_after_api_span_stays_verbatim(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.TEXT_INSERT, EventSource.API, delta=EditDelta(0, "dog"))
        )
        replayer.apply(
            record(1, EventName.TEXT_INSERT, EventSource.USER, delta=EditDelta(3, " runs"))
        )
        state = replayer.state()
        assert state.text == "dog runs"
        assert [(s.start, s.end, s.origin) for s in state.spans] == [
            (0, 3, SpanOrigin.API_VERBATIM),
            (3, 8, SpanOrigin.HUMAN),
        ]
        assert replayer.final_origin(0) is SpanOrigin.API_VERBATIM

    def test_user_insert_strictly_inside_api_span_splits_and_flips(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.TEXT_INSERT, EventSource.API, delta=EditDelta(0, "dogcat"))
        )
        replayer.apply(
            record(1, EventName.TEXT_INSERT, EventSource.USER, delta=EditDelta(3, "X"))
        )
        state = replayer.state()
        assert state.text == "dogXcat"
        assert [(s.start, s.end, s.origin) for s in state.spans] == [
            (0, 3, SpanOrigin.API_MODIFIED),
            (3, 4, SpanOrigin.HUMAN),
            (4, 7, SpanOrigin.API_MODIFIED),
        ]
        assert replayer.final_origin(0) is SpanOrigin.API_MODIFIED

    def test_insert_at_boundary_flips_neither_side(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.TEXT_INSERT, EventSource.API, delta=EditDelta(0, "ab"))
        )
        replayer.apply(
            record(1, EventName.TEXT_INSERT, EventSource.API, delta=EditDelta(2, "cd"))
        )
        replayer.apply(
            record(2, EventName.TEXT_INSERT, EventSource.USER, delta=EditDelta(2, "x"))
        )
        assert replayer.text == "abxcd"
        assert replayer.final_origin(0) is SpanOrigin.API_VERBATIM
        assert replayer.final_origin(1) is SpanOrigin.API_VERBATIM

    def test_delete_across_spans_flips_api_side(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.TEXT_INSERT, EventSource.API, delta=EditDelta(0, "abcd"))
        )
        replayer.apply(
            record(1, EventName.TEXT_INSERT, EventSource.USER, delta=EditDelta(4, "wxyz"))
        )
        replayer.apply(
            record(2, EventName.TEXT_DELETE, EventSource.USER, delta=EditDelta(2, deleted_length=4))
        )
        state = replayer.state()
        assert state.text == "abyz"
        assert [(s.start, s.end, s.origin) for s in state.spans] == [
            (0, 2, SpanOrigin.API_MODIFIED),
            (2, 4, SpanOrigin.HUMAN),
        ]

    def test_full_deletion_drops_span_but_marks_modified(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.TEXT_INSERT, EventSource.API, delta=EditDelta(0, "abc"))
        )
        replayer.apply(
            record(1, EventName.TEXT_DELETE, EventSource.USER, delta=EditDelta(0, deleted_length=3))
        )
        assert replayer.text == ""
        assert replayer.live_spans() == ()
        assert replayer.final_origin(0) is SpanOrigin.API_MODIFIED

    def test_system_init_counts_as_api_text(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.SYSTEM_INIT, EventSource.API, delta=EditDelta(0, "Prompt\n"))
        )
        assert [s.origin for s in replayer.state().spans] == [SpanOrigin.API_VERBATIM]

    def test_out_of_bounds_insert(self):
        replayer = DocumentReplayer()
        with pytest.raises(ReplayError) as err:
            replayer.apply(
                record(5, EventName.TEXT_INSERT, EventSource.USER, delta=EditDelta(1, "x"))
            )
        assert err.value.event_index == 5

    def test_out_of_bounds_delete(self):
        replayer = DocumentReplayer()
        replayer.apply(
            record(0, EventName.TEXT_INSERT, EventSource.USER, delta=EditDelta(0, "ab"))
        )
        with pytest.raises(ReplayError):
            replayer.apply(
                record(1, EventName.TEXT_DELETE, EventSource.USER, delta=EditDelta(1, deleted_length=5))
            )

    def test_non_edit_events_inert(self):
        replayer = DocumentReplayer()
        replayer.apply(record(0, EventName.CURSOR_MOVE, EventSource.USER))
        replayer.apply(record(1, EventName.SUGGESTION_GET, EventSource.USER))
        assert replayer.text == ""
        assert replayer.live_spans() == ()

    def test_reconstruct_matches_manual_replay(self, corpus_dir):
        metas = load_session_metadata(corpus_dir / "metadata.csv")
        path = corpus_dir / "sessions" / "s06.jsonl"
        log = load_session_log(path, metas["s06"])
        replayer = DocumentReplayer()
        for event in log.events:
            replayer.apply(event)
        assert reconstruct_document(log) == replayer.state()


def spans_tile(spans, length) -> bool:
    cursor = 0
    for span in spans:
        if span.start != cursor or span.end <= span.start:
            return False
        cursor = span.end
    return cursor == length


class TestReplayInvariants:
    def test_tiling_after_every_event_on_corpus(self, corpus_dir):
        metas = load_session_metadata(corpus_dir / "metadata.csv")
        for path in sorted((corpus_dir / "sessions").glob("*.jsonl")):
            log = load_session_log(path, metas[path.stem])
            replayer = DocumentReplayer()
            for event in log.events:
                replayer.apply(event)
                assert spans_tile(replayer.live_spans(), len(replayer.text))

    @given(data=st.data())
    def test_random_edit_scripts_match_plain_string(self, data):
        ops = data.draw(
            st.lists(
                st.tuples(
                    st.sampled_from(["insert", "delete"]),
                    st.sampled_from([EventSource.USER, EventSource.API]),
                    st.integers(min_value=0, max_value=10**6),
                    st.text(
                        alphabet="ab x",
                        min_size=1,
                        max_size=8,
                    ),
                    st.integers(min_value=1, max_value=6),
                ),
                min_size=1,
                max_size=40,
            )
        )
        replayer = DocumentReplayer()
        mirror = ""
        for index, (kind, source, seed_offset, payload, count) in enumerate(ops):
            if kind == "insert":
                offset = seed_offset % (len(mirror) + 1)
                delta = EditDelta(offset, inserted=payload)
                mirror = mirror[:offset] + payload + mirror[offset:]
            else:
                if not mirror:
                    continue
                offset = seed_offset % len(mirror)
                length = min(count, len(mirror) - offset)
                delta = EditDelta(offset, deleted_length=length)
                mirror = mirror[:offset] + mirror[offset + length :]
            name = EventName.TEXT_INSERT if kind == "insert" else EventName.TEXT_DELETE
            replayer.apply(record(index, name, source, ts=index, delta=delta))
            assert replayer.text == mirror
            assert spans_tile(replayer.live_spans(), len(mirror))


class TestEpisodes:
    def accepted_log(self, edit_line: str | None = None):
        lines = [
            ev("system-initialize", "api", 0, ops=[{"insert": "P\n"}]),
            ev("suggestion-get", "user", 10),
            ev(
                "suggestion-open",
                "api",
                20,
                suggestions=[{"trimmed": "The cat sat.", "original": " The cat sat."}],
            ),
            ev("suggestion-select", "user", 30, index=0),
            ev("text-insert", "api", 40, ops=[{"retain": 2}, {"insert": " The cat sat."}]),
        ]
        if edit_line:
            lines.append(edit_line)
        return parse(*lines)

    def test_rejected(self):
        log = parse(
            ev("suggestion-get", "user", 0),
            ev(
                "suggestion-open",
                "api",
                10,
                suggestions=[{"trimmed": "Hello.", "original": " Hello."}],
            ),
            ev("suggestion-close", "user", 20),
        )
        episodes = segment_suggestion_episodes(log)
        assert len(episodes) == 1
        assert episodes[0].resolution is Resolution.REJECTED
        assert episodes[0].shown == ("Hello.",)
        assert episodes[0].accepted_text is None

    def test_accepted_verbatim(self):
        episodes = segment_suggestion_episodes(self.accepted_log())
        assert [e.resolution for e in episodes] == [Resolution.ACCEPTED_VERBATIM]
        assert episodes[0].accepted_text == " The cat sat."

    def test_accepted_modified_by_interior_edit(self):
        edit = ev("text-delete", "user", 50, ops=[{"retain": 7}, {"delete": 4}])
        episodes = segment_suggestion_episodes(self.accepted_log(edit))
        assert [e.resolution for e in episodes] == [Resolution.ACCEPTED_MODIFIED]

    def test_edit_outside_span_stays_verbatim(self):
        edit = ev("text-insert", "user", 50, ops=[{"retain": 15}, {"insert": " More."}])
        episodes = segment_suggestion_episodes(self.accepted_log(edit))
        assert [e.resolution for e in episodes] == [Resolution.ACCEPTED_VERBATIM]

    def test_select_before_any_get(self):
        log = parse(
            ev("suggestion-select", "user", 0, index=0),
            ev("suggestion-get", "user", 10),
        )
        with pytest.raises(LogConsistencyError):
            segment_suggestion_episodes(log)

    def test_one_episode_per_get_on_corpus(self, corpus_dir):
        metas = load_session_metadata(corpus_dir / "metadata.csv")
        for path in sorted((corpus_dir / "sessions").glob("*.jsonl")):
            log = load_session_log(path, metas[path.stem])
            gets = sum(1 for e in log.events if e.name is EventName.SUGGESTION_GET)
            assert len(segment_suggestion_episodes(log)) == gets

    def test_known_resolution_sequences(self, corpus_dir):
        metas = load_session_metadata(corpus_dir / "metadata.csv")
        expected = {
            "s01": "VR",
            "s10": "RRRR",
            "s12": "VVVMMR",
        }
        codes = {
            Resolution.ACCEPTED_VERBATIM: "V",
            Resolution.ACCEPTED_MODIFIED: "M",
            Resolution.REJECTED: "R",
        }
        for sid, plan in expected.items():
            log = load_session_log(corpus_dir / "sessions" / f"{sid}.jsonl", metas[sid])
            got = "".join(codes[e.resolution] for e in segment_suggestion_episodes(log))
            assert got == plan, sid


class TestMetadata:
    def test_corpus_metadata(self, corpus_dir):
        metas = load_session_metadata(corpus_dir / "metadata.csv")
        assert len(metas) == 12
        meta = metas["s01"]
        assert (meta.genre, meta.topic, meta.native) == (1, "dragons", 1)
        assert (meta.temperature, meta.frequency_penalty) == (0.2, 0.0)

    def write(self, tmp_path, body: str):
        path = tmp_path / "metadata.csv"
        path.write_text(body)
        return path

    def test_missing_column(self, tmp_path):
        path = self.write(tmp_path, "session_id,genre,topic\ns01,creative,dragons\n")
        with pytest.raises(ValidationError):
            load_session_metadata(path)

    def test_duplicate_session(self, tmp_path):
        body = (
            "session_id,genre,topic,native,temperature,frequency_penalty\n"
            "s01,creative,dragons,native,0.2,0.0\n"
            "s01,creative,dragons,native,0.2,0.0\n"
        )
        with pytest.raises(ValidationError, match="duplicate"):
            load_session_metadata(self.write(tmp_path, body))

    def test_bad_genre_label(self, tmp_path):
        body = (
            "session_id,genre,topic,native,temperature,frequency_penalty\n"
            "s01,poetry,dragons,native,0.2,0.0\n"
        )
        with pytest.raises(ValidationError):
            load_session_metadata(self.write(tmp_path, body))

    def test_bad_temperature(self, tmp_path):
        body = (
            "session_id,genre,topic,native,temperature,frequency_penalty\n"
            "s01,creative,dragons,native,0.55,0.0\n"
        )
        with pytest.raises(ValidationError):
            load_session_metadata(self.write(tmp_path, body))

    def test_meta_validation(self):
        with pytest.raises(ValidationError):
            SessionMeta(genre=2, topic="t", native=0, temperature=0.2, frequency_penalty=0.0)
        with pytest.raises(ValidationError):
            SessionMeta(genre=0, topic="", native=0, temperature=0.2, frequency_penalty=0.0)
