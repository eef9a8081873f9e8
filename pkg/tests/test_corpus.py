import math

import pytest
from hypothesis import given, strategies as st

from synth import make_corpus, write_corpus_csv
from urgency.corpus import (
    LabeledPost,
    RawPost,
    compute_stats,
    filter_posts,
    load_corpus,
    save_corpus,
    validate_label,
)
from urgency.errors import ConfigError, DataError
from urgency.preprocess import preprocess_texts


def raw(text, pid="1", sid="s1"):
    return RawPost(post_id=pid, student_id=sid, timestamp="", text=text)


class TestValidateLabel:
    @pytest.mark.parametrize("value", [1.0, 4.5, 7.0, 2.0, 6.5])
    def test_accepts_half_steps(self, value):
        assert validate_label(value) == value

    @pytest.mark.parametrize("value", [0.5, 7.5, 8.0, 3.25, float("nan"), float("inf")])
    def test_rejects(self, value):
        with pytest.raises(DataError):
            validate_label(value)


class TestLoadCorpus:
    def test_upenn_row(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text(
            "post_id,student_id,timestamp,text,label\n"
            'p1,s1,2014-01-01,"When is the quiz due?",5\n'
        )
        posts = load_corpus(path)
        assert posts[0].label == 5.0
        assert posts[0].post.student_id == "s1"

    def test_stanford_half_step_and_column_map(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("Text,Urgency\nsite is down,4.5\n")
        posts = load_corpus(
            path, format="stanford", column_map={"text": "Text", "label": "Urgency"}
        )
        assert posts[0].label == 4.5
        # ids synthesized from row position
        assert posts[0].post.post_id == "0"
        assert posts[0].post.student_id == "0"

    def test_out_of_range_label_lists_rows(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("text,label\nok,3\nbad,8\nworse,0\n")
        with pytest.raises(DataError, match="row 3"):
            load_corpus(path)

    def test_unmapped_required_column(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("body,label\nhm,3\n")
        with pytest.raises(ConfigError, match="text"):
            load_corpus(path)

    def test_unknown_role_rejected(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("text,label\nhm,3\n")
        with pytest.raises(ConfigError, match="unknown column roles"):
            load_corpus(path, column_map={"bogus": "text"})

    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("")
        with pytest.raises(DataError, match="empty"):
            load_corpus(path)

    def test_duplicate_post_id(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("post_id,text,label\na,x,1\na,y,2\n")
        with pytest.raises(DataError, match="duplicate"):
            load_corpus(path)

    def test_short_row_reports_row_number(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("post_id,student_id,timestamp,text,label\np1,s1,t\n")
        with pytest.raises(DataError, match="row 2"):
            load_corpus(path)

    def test_quoted_multiline_text(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text('text,label\n"line one\nline two",3\n')
        posts = load_corpus(path)
        assert "\n" in posts[0].post.text


class TestFilterPosts:
    def test_symbols_only(self):
        kept, dropped = filter_posts([raw("∑∫≈ ×÷")])
        assert not kept
        assert dropped[0][1] == "symbols-only"

    def test_links_only(self):
        kept, dropped = filter_posts([raw("http://a.example http://b.example")])
        assert dropped[0][1] == "links-only"
        kept, dropped = filter_posts([raw("see https://a.example for details")])
        assert kept and not dropped

    def test_math_only(self):
        kept, dropped = filter_posts([raw("2x + 3y = 0")])
        assert dropped[0][1] == "math-only"
        kept, dropped = filter_posts([raw("(1/2) * 4 - 7")])
        assert dropped[0][1] == "math-only"

    def test_non_english(self):
        kept, dropped = filter_posts([raw("Привет как дела сегодня")])
        assert dropped[0][1] == "non-english"

    def test_ordinary_english_kept(self):
        kept, dropped = filter_posts([raw("When is the quiz due?")])
        assert kept and not dropped

    def test_partition_and_idempotence(self):
        posts = [
            raw("When is the quiz due?", "1"),
            raw("∑∫≈", "2"),
            raw("http://x.example", "3"),
            raw("2 + 2 = 4", "4"),
            raw("Ένα δύο τρία τέσσερα", "5"),
            raw("mixed ascii κείμενο with more english words", "6"),
        ]
        kept, dropped = filter_posts(posts)
        assert len(kept) + len(dropped) == len(posts)
        ids = [p.post_id for p in kept] + [p.post_id for p, _ in dropped]
        assert sorted(ids) == [p.post_id for p in posts]
        kept2, dropped2 = filter_posts(kept)
        assert kept2 == kept and not dropped2


class TestComputeStats:
    def test_single_post(self):
        posts = [LabeledPost(post=raw("a b c d"), label=3.0)]
        st_ = compute_stats(posts, [4])
        assert st_.label_histogram == {3.0: 1}
        assert st_.word_count_mean == st_.word_count_min == st_.word_count_max == 4
        assert st_.word_count_stdev == 0.0

    def test_histogram_and_moments(self):
        posts = [
            LabeledPost(post=raw("x", pid=str(i), sid=f"s{i % 2}"), label=float(1 + i % 3))
            for i in range(6)
        ]
        st_ = compute_stats(posts, [1, 2, 3, 4, 5, 6])
        assert st_.label_histogram == {1.0: 2, 2.0: 2, 3.0: 2}
        assert st_.n_students == 2
        assert st_.word_count_mean == 3.5
        assert math.isclose(st_.word_count_stdev, math.sqrt(sum((c - 3.5) ** 2 for c in range(1, 7)) / 6))

    def test_empty_corpus(self):
        with pytest.raises(DataError):
            compute_stats([], [])

    def test_misaligned_counts(self):
        posts = [LabeledPost(post=raw("a"), label=1.0)]
        with pytest.raises(DataError):
            compute_stats(posts, [1, 2])


class TestRoundTrip:
    def test_save_load_stats_identical(self, tmp_path):
        posts = make_corpus(n_posts=80, n_students=30, seed=5)
        path = tmp_path / "rt.csv"
        save_corpus(posts, path)
        reloaded = load_corpus(path)
        counts = [len(d.tokens) for d in preprocess_texts([lp.post for lp in posts])]
        counts2 = [len(d.tokens) for d in preprocess_texts([lp.post for lp in reloaded])]
        assert compute_stats(posts, counts) == compute_stats(reloaded, counts2)

    def test_half_step_labels_roundtrip(self, tmp_path):
        posts = make_corpus(n_posts=40, n_students=20, seed=6, half_steps=True)
        path = tmp_path / "rt.csv"
        write_corpus_csv(path, posts)
        reloaded = load_corpus(path, format="stanford")
        assert [lp.label for lp in reloaded] == [lp.label for lp in posts]


@given(
    st.lists(
        st.text(
            alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd", "Po", "Zs")),
            min_size=1,
            max_size=40,
        ),
        max_size=20,
    )
)
def test_filter_partition_property(texts):
    posts = [raw(t, pid=str(i)) for i, t in enumerate(texts)]
    kept, dropped = filter_posts(posts)
    assert len(kept) + len(dropped) == len(posts)
    kept_again, dropped_again = filter_posts(kept)
    assert kept_again == kept
    assert not dropped_again
