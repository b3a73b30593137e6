import json
import math
import random

import numpy as np
import pytest

from sessiontopics import (
    ParseError,
    Rating,
    ValidationError,
    icc,
    rating_matrix,
    rating_summary,
    segmentation_metrics,
    timeout_baseline,
)
from sessiontopics.annotate import AnnotatedAction, AnnotatedSession
from sessiontopics.evaluate import DNK, latest_ratings, load_ratings
from sessiontopics.logs import Action, Session

from generators import random_rating_matrix
from oracles import reference_icc


def rating(assessor="a1", session="s1", topic=1, seg=0, at=0.0, comment=None):
    return Rating(
        assessor=assessor,
        session_id=session,
        topic_quality=topic,
        segmentation_quality=seg,
        comment=comment,
        submitted_at=at,
    )


class TestRating:
    def test_likert_bounds_enforced(self):
        for bad in (3, -3, 5, 1.5, "good", None):
            with pytest.raises((ValidationError, TypeError)):
                rating(topic=bad)

    def test_bool_is_not_a_valid_level(self):
        with pytest.raises(ValidationError):
            rating(topic=True)

    def test_dnk_allowed_on_both_questions(self):
        r = rating(topic=DNK, seg=DNK)
        assert r.value("topic") == DNK
        assert r.value("segmentation") == DNK

    def test_empty_assessor_rejected(self):
        with pytest.raises(ValidationError):
            rating(assessor="")

    def test_unknown_question_rejected(self):
        with pytest.raises(ValueError):
            rating().value("style")

    def test_dict_round_trip(self):
        r = rating(comment="fine", at=12.5)
        assert Rating.from_dict(r.to_dict()) == r

    def test_load_ratings_reads_jsonl(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text(
            json.dumps(rating().to_dict()) + "\n" + json.dumps(rating(session="s2").to_dict()) + "\n"
        )
        loaded = load_ratings(path)
        assert [r.session_id for r in loaded] == ["s1", "s2"]

    def test_load_ratings_flags_bad_line(self, tmp_path):
        path = tmp_path / "r.jsonl"
        path.write_text(json.dumps(rating().to_dict()) + "\nnope\n")
        with pytest.raises(ParseError) as excinfo:
            load_ratings(path)
        assert excinfo.value.line == 2

    def test_load_ratings_flags_out_of_range_record(self, tmp_path):
        record = rating().to_dict()
        record["topic_quality"] = 9
        path = tmp_path / "r.jsonl"
        path.write_text(json.dumps(record) + "\n")
        with pytest.raises(ParseError):
            load_ratings(path)


class TestLatestRatings:
    def test_later_submission_wins(self):
        first = rating(topic=1, at=1.0)
        second = rating(topic=-1, at=2.0)
        state = latest_ratings([first, second])
        assert state[("a1", "s1")].topic_quality == -1

    def test_order_breaks_timestamp_ties(self):
        first = rating(topic=1, at=5.0)
        second = rating(topic=2, at=5.0)
        state = latest_ratings([first, second])
        assert state[("a1", "s1")].topic_quality == 2

    def test_keys_are_assessor_session_pairs(self):
        state = latest_ratings(
            [rating(), rating(assessor="a2"), rating(session="s2")]
        )
        assert set(state) == {("a1", "s1"), ("a2", "s1"), ("a1", "s2")}


class TestRatingSummary:
    def from_values(self, values):
        return [rating(assessor=f"a{i}", topic=v) for i, v in enumerate(values)]

    def test_mean_of_plain_values(self):
        summary = rating_summary(self.from_values([1, 1, 0, 2, -1]), "topic")
        assert summary.mean == pytest.approx(0.6)
        assert summary.n == 5

    def test_dnk_values_are_excluded(self):
        summary = rating_summary(self.from_values([1, DNK, 0]), "topic")
        assert summary.mean == pytest.approx(0.5)
        assert summary.n == 2

    def test_all_dnk_is_an_error(self):
        with pytest.raises(ValidationError):
            rating_summary(self.from_values([DNK, DNK]), "topic")

    def test_empty_input_is_an_error(self):
        with pytest.raises(ValidationError):
            rating_summary([], "segmentation")

    def test_histogram_counts_every_level(self):
        summary = rating_summary(self.from_values([2, 2, -2, 0]), "topic")
        assert summary.histogram == {-2: 1, -1: 0, 0: 1, 1: 0, 2: 2}


class TestRatingMatrix:
    def test_rows_sessions_columns_assessors_sorted(self):
        ratings = [
            rating(assessor="zoe", session="s2", topic=2),
            rating(assessor="amy", session="s1", topic=1),
            rating(assessor="zoe", session="s1", topic=0),
        ]
        sessions, assessors, matrix = rating_matrix(ratings, "topic")
        assert sessions == ["s1", "s2"]
        assert assessors == ["amy", "zoe"]
        assert matrix[0][0] == 1 and matrix[0][1] == 0 and matrix[1][1] == 2
        assert math.isnan(matrix[1][0])

    def test_dnk_cells_are_nan(self):
        ratings = [rating(topic=DNK)]
        _, _, matrix = rating_matrix(ratings, "topic")
        assert math.isnan(matrix[0][0])

    def test_replaced_ratings_use_final_value(self):
        ratings = [rating(topic=2, at=1.0), rating(topic=-2, at=2.0)]
        _, _, matrix = rating_matrix(ratings, "topic")
        assert matrix[0][0] == -2


class TestIcc:
    def test_perfect_agreement_hits_one(self):
        matrix = [[1, 1, 1], [0, 0, 0], [2, 2, 2], [-1, -1, -1]]
        assert icc(matrix, "single") == pytest.approx(1.0, abs=1e-9)
        assert icc(matrix, "average") == pytest.approx(1.0, abs=1e-9)

    def test_constant_matrix_is_degenerate(self):
        with pytest.raises(ValidationError):
            icc([[1, 1], [1, 1]], "average")

    def test_too_few_rows_or_raters(self):
        with pytest.raises(ValidationError):
            icc([[1, 2]], "single")
        with pytest.raises(ValidationError):
            icc([[1], [2]], "single")

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            icc([[1, 2], [2, 1]], "consistency")

    def test_matches_anova_oracle_on_random_integer_matrices(self):
        rng = random.Random(101)
        for _ in range(50):
            matrix = [
                [rng.randint(-2, 2) for _ in range(3)] for _ in range(10)
            ]
            flat = {v for row in matrix for v in row}
            if len(flat) == 1:
                continue
            single, average = reference_icc(matrix)
            if abs(single) <= 1 and abs(average) <= 1:
                assert icc(matrix, "single") == pytest.approx(single, abs=1e-9)
                assert icc(matrix, "average") == pytest.approx(average, abs=1e-9)

    def test_average_at_least_single_when_subjects_vary(self):
        rng = random.Random(103)
        for _ in range(100):
            matrix = random_rating_matrix(rng, rng.randint(4, 12), rng.randint(2, 5))
            assert icc(matrix, "average") >= icc(matrix, "single") - 1e-12

    def test_spearman_brown_relation(self):
        rng = random.Random(107)
        for _ in range(50):
            k = rng.randint(2, 5)
            matrix = random_rating_matrix(rng, rng.randint(4, 12), k)
            single, average = reference_icc(matrix)
            stepped_up = k * single / (1 + (k - 1) * single)
            assert average == pytest.approx(stepped_up, abs=1e-9)
            assert icc(matrix, "average") == pytest.approx(stepped_up, abs=1e-9)

    def test_incomplete_rows_are_dropped(self):
        complete = [[1, 2], [2, 1], [0, 1], [2, 2]]
        padded = [row[:] for row in complete]
        padded.insert(2, [1, float("nan")])
        assert icc(padded, "average") == pytest.approx(icc(complete, "average"), abs=1e-12)

    def test_too_few_complete_rows_after_deletion(self):
        matrix = [[1, 2], [2, float("nan")], [float("nan"), 1]]
        with pytest.raises(ValidationError):
            icc(matrix, "single")

    def test_result_clamped_to_minus_one(self):
        # anti-correlated raters, zero between-subject variance
        matrix = [[0, 1], [1, 0], [0, 1], [1, 0]]
        assert icc(matrix, "single") == -1.0

    def test_results_always_inside_the_unit_interval(self):
        rng = random.Random(109)
        for _ in range(100):
            matrix = [
                [rng.randint(-2, 2) for _ in range(rng.randint(2, 4))]
                for _ in range(rng.randint(2, 8))
            ]
            width = max(len(r) for r in matrix)
            matrix = [r for r in matrix if len(r) == width]
            if len(matrix) < 2:
                continue
            try:
                for variant in ("single", "average"):
                    assert -1.0 <= icc(matrix, variant) <= 1.0
            except ValidationError:
                pass

    def test_accepts_numpy_arrays(self):
        matrix = np.array([[1.0, 2.0], [0.0, 1.0], [2.0, 2.0]])
        assert -1.0 <= icc(matrix, "average") <= 1.0


class TestSegmentationMetrics:
    def test_worked_pairwise_example(self):
        m = segmentation_metrics([1, 1, 2, 2], [1, 1, 1, 2])
        assert m.pairwise_precision == pytest.approx(0.5)
        assert m.pairwise_recall == pytest.approx(1 / 3)
        assert m.pairwise_f1 == pytest.approx(0.4)

    def test_worked_example_boundary_and_rand(self):
        m = segmentation_metrics([1, 1, 2, 2], [1, 1, 1, 2])
        assert m.boundary_precision == 0.0
        assert m.boundary_recall == 0.0
        assert m.boundary_f1 == 0.0
        assert m.rand_index == pytest.approx(0.5)

    def test_identical_numberings_score_one_everywhere(self):
        m = segmentation_metrics([1, 1, 2, 3, 3], [1, 1, 2, 3, 3])
        for field in (
            "boundary_precision",
            "boundary_recall",
            "boundary_f1",
            "pairwise_precision",
            "pairwise_recall",
            "pairwise_f1",
            "rand_index",
        ):
            assert getattr(m, field) == 1.0

    def test_all_distinct_versus_all_same(self):
        m = segmentation_metrics([1, 2, 3], [1, 1, 1])
        assert m.pairwise_recall == 0.0
        assert m.boundary_precision == 0.0

    def test_no_boundaries_on_either_side_is_perfect(self):
        m = segmentation_metrics([1, 1], [4, 4])
        assert m.boundary_precision == 1.0
        assert m.boundary_recall == 1.0
        assert m.rand_index == 1.0

    def test_single_action_sessions_agree_trivially(self):
        m = segmentation_metrics([1], [2])
        assert m.rand_index == 1.0
        assert m.pairwise_precision == 1.0

    def test_relabeling_never_changes_metrics(self):
        rng = random.Random(113)
        for _ in range(100):
            n = rng.randint(1, 8)
            pred = [rng.randint(1, 3) for _ in range(n)]
            gold = [rng.randint(1, 3) for _ in range(n)]
            relabeled = [p + 10 for p in pred]
            assert segmentation_metrics(pred, gold) == segmentation_metrics(relabeled, gold)

    def test_rand_index_one_iff_same_partition(self):
        rng = random.Random(127)
        for _ in range(200):
            n = rng.randint(2, 7)
            pred = [rng.randint(1, 3) for _ in range(n)]
            gold = [rng.randint(1, 3) for _ in range(n)]
            same_partition = [
                pred[i] == pred[j] for i in range(n) for j in range(i + 1, n)
            ] == [gold[i] == gold[j] for i in range(n) for j in range(i + 1, n)]
            assert (segmentation_metrics(pred, gold).rand_index == 1.0) == same_partition

    def test_precision_and_recall_swap_with_arguments(self):
        rng = random.Random(131)
        for _ in range(100):
            n = rng.randint(1, 8)
            a = [rng.randint(1, 3) for _ in range(n)]
            b = [rng.randint(1, 3) for _ in range(n)]
            ab, ba = segmentation_metrics(a, b), segmentation_metrics(b, a)
            assert ab.pairwise_precision == pytest.approx(ba.pairwise_recall)
            assert ab.boundary_precision == pytest.approx(ba.boundary_recall)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            segmentation_metrics([1, 1], [1])

    def test_empty_numberings_rejected(self):
        with pytest.raises(ValidationError):
            segmentation_metrics([], [])


class TestTimeoutBaseline:
    def plain(self, *ts):
        actions = tuple(
            Action(index=i + 1, kind="doc_view", ts=float(t), doc_id="d")
            for i, t in enumerate(ts)
        )
        return Session(id="s", actions=actions)

    def test_large_gap_opens_new_number(self):
        assert timeout_baseline(self.plain(0, 10, 610), 300.0) == [1, 1, 2]

    def test_single_action(self):
        assert timeout_baseline(self.plain(42), 300.0) == [1]

    def test_all_gaps_small(self):
        assert timeout_baseline(self.plain(0, 100, 200, 300), 300.0) == [1, 1, 1, 1]

    def test_gap_equal_to_threshold_does_not_split(self):
        assert timeout_baseline(self.plain(0, 300), 300.0) == [1, 1]

    def test_threshold_must_be_positive(self):
        with pytest.raises(ValueError):
            timeout_baseline(self.plain(0, 1), 0.0)

    def test_accepts_annotated_sessions(self):
        session = AnnotatedSession(
            id="s",
            actions=[
                AnnotatedAction(action=Action(index=1, kind="doc_view", ts=0.0, doc_id="d")),
                AnnotatedAction(action=Action(index=2, kind="doc_view", ts=400.0, doc_id="d")),
            ],
        )
        assert timeout_baseline(session, 300.0) == [1, 2]
