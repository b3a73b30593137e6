import json

import pytest

from sessiontopics import ParseError, annotate_sessions, assign_session_topics, assign_topic_numbers
from sessiontopics.logs import Action, Session
from sessiontopics.serialize import (
    action_from_dict,
    action_to_dict,
    annotated_session_from_dict,
    annotated_session_to_dict,
    read_annotated,
    read_sessions,
    session_from_dict,
    session_to_dict,
    write_annotated,
    write_sessions,
)


def sample_session():
    return Session(
        id="u:1",
        actions=(
            Action(
                index=1,
                kind="simple_search",
                ts=100.0,
                query_terms=("refugee policy",),
                result_doc_ids=("B1", "B2"),
            ),
            Action(index=2, kind="doc_view", ts=160.0, doc_id="B1"),
            Action(
                index=3,
                kind="facet_search",
                ts=200.0,
                query_terms=("refugee",),
                facet_terms=("Migration",),
                result_doc_ids=("B2",),
            ),
        ),
    )


class TestActionWireFormat:
    def test_empty_fields_are_omitted(self):
        record = action_to_dict(Action(index=1, kind="doc_view", ts=5.0, doc_id="a"))
        assert record == {"kind": "doc_view", "ts": 5.0, "doc": "a"}

    def test_search_round_trip(self):
        action = sample_session().actions[2]
        again = action_from_dict(action_to_dict(action), index=3)
        assert again == action

    def test_index_comes_from_position_not_payload(self):
        record = action_to_dict(Action(index=9, kind="doc_view", ts=0.0, doc_id="a"))
        assert "index" not in record
        assert action_from_dict(record, index=2).index == 2


class TestSessionFiles:
    def test_round_trip_through_file(self, tmp_path):
        path = tmp_path / "sessions.jsonl"
        write_sessions([sample_session()], path)
        (again,) = read_sessions(path)
        assert again == sample_session()

    def test_dict_round_trip(self):
        session = sample_session()
        assert session_from_dict(session_to_dict(session)) == session

    def test_blank_lines_are_skipped(self, tmp_path):
        path = tmp_path / "sessions.jsonl"
        payload = json.dumps(session_to_dict(sample_session()))
        path.write_text(payload + "\n\n" + payload + "\n")
        assert len(read_sessions(path)) == 2

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "sessions.jsonl"
        path.write_text(json.dumps(session_to_dict(sample_session())) + "\n{broken\n")
        with pytest.raises(ParseError) as excinfo:
            read_sessions(path)
        assert excinfo.value.line == 2

    def test_missing_fields_reports_line(self, tmp_path):
        path = tmp_path / "sessions.jsonl"
        path.write_text('{"id": "x"}\n')
        with pytest.raises(ParseError) as excinfo:
            read_sessions(path)
        assert excinfo.value.line == 1


class TestAnnotatedFiles:
    def pipeline_output(self, raw_sessions, corpus, bundle):
        annotated = annotate_sessions(raw_sessions, corpus, bundle)
        for session in annotated:
            assign_session_topics(session)
            assign_topic_numbers(session)
        return annotated

    def test_full_pipeline_round_trip(self, tmp_path, raw_sessions, corpus, bundle):
        annotated = self.pipeline_output(raw_sessions, corpus, bundle)
        path = tmp_path / "annotated.jsonl"
        write_annotated(annotated, path)
        again = read_annotated(path)
        assert [annotated_session_to_dict(s) for s in again] == [
            annotated_session_to_dict(s) for s in annotated
        ]

    def test_weights_survive_exactly(self, raw_sessions, corpus, bundle):
        annotated = self.pipeline_output(raw_sessions, corpus, bundle)
        for session in annotated:
            again = annotated_session_from_dict(annotated_session_to_dict(session))
            for original, restored in zip(session.actions, again.actions):
                assert restored.keywords == original.keywords
                assert restored.categories == original.categories

    def test_duration_is_emitted_and_rederived(self):
        from sessiontopics.annotate import AnnotatedAction, AnnotatedSession

        session = AnnotatedSession(
            id="s",
            actions=[
                AnnotatedAction(action=Action(index=1, kind="doc_view", ts=10.0, doc_id="a")),
                AnnotatedAction(action=Action(index=2, kind="doc_view", ts=70.0, doc_id="b")),
            ],
        )
        record = annotated_session_to_dict(session)
        assert record["duration_s"] == 60.0
        assert annotated_session_from_dict(record).duration_s == 60.0

    def test_topic_fields_round_trip(self, raw_sessions, corpus, bundle):
        annotated = self.pipeline_output(raw_sessions, corpus, bundle)
        record = annotated_session_to_dict(annotated[0])
        again = annotated_session_from_dict(record)
        assert [a.session_topic for a in again.actions] == [
            a.session_topic for a in annotated[0].actions
        ]
        assert [a.topic_number for a in again.actions] == [
            a.topic_number for a in annotated[0].actions
        ]
