"""Attachment scoring, acculturation quadrants, and language cohorts."""

from __future__ import annotations

import pytest

from homedest.attachment import (
    ASSIMILATION,
    INTEGRATION,
    MARGINALISATION,
    SEPARATION,
    AttachmentScore,
    apply_acculturation,
    classify_acculturation,
    compute_scores,
    language_cohorts,
    read_scores,
    write_scores,
)
from homedest.labeling import UserProfile

from conftest import YEAR, make_post


class TestComputeScores:
    def test_micro_corpus_values(self, micro_pipeline):
        posts, profiles, atlas = micro_pipeline
        scores = compute_scores(posts, profiles, atlas, YEAR, min_hashtags=10)
        assert len(scores) == 1
        s = scores[0]
        assert (s.user_id, s.nationality, s.residence) == ("m1", "IT", "DE")
        assert (s.n_hashtags, s.n_home, s.n_dest) == (10, 3, 2)
        assert s.ha == 0.3 and s.da == 0.2

    def test_volume_filter_boundary(self, micro_pipeline):
        posts, profiles, atlas = micro_pipeline
        assert compute_scores(posts, profiles, atlas, YEAR, min_hashtags=11) == []
        kept = compute_scores(posts, profiles, atlas, YEAR, min_hashtags=10)
        assert len(kept) == 1

    def test_distinct_mode(self, micro_pipeline):
        posts, profiles, atlas = micro_pipeline
        (s,) = compute_scores(posts, profiles, atlas, YEAR, min_hashtags=1, count_mode="distinct")
        # Distinct tokens: roma, berlin, pizza, xyzq.
        assert s.n_hashtags == 4
        assert (s.n_home, s.n_dest) == (1, 1)
        assert s.ha == s.da == 0.25

    def test_non_migrants_never_scored(self, micro_pipeline):
        posts, profiles, atlas = micro_pipeline
        scores = compute_scores(posts, profiles, atlas, YEAR, min_hashtags=1)
        assert [s.user_id for s in scores] == ["m1"]

    def test_unknown_tokens_stay_in_denominator(self, micro_pipeline):
        posts, profiles, atlas = micro_pipeline
        (s,) = compute_scores(posts, profiles, atlas, YEAR, min_hashtags=1)
        # xyzq is absent from the atlas but still one of the 10 uses.
        assert s.n_home + s.n_dest < s.n_hashtags

    def test_year_filter(self, micro_pipeline):
        posts, profiles, atlas = micro_pipeline
        assert compute_scores(posts, profiles, atlas, YEAR - 1, min_hashtags=1) == []

    def test_bad_mode(self, micro_pipeline):
        posts, profiles, atlas = micro_pipeline
        with pytest.raises(ValueError):
            compute_scores(posts, profiles, atlas, YEAR, count_mode="weird")


class TestQuadrants:
    def test_four_corners(self):
        assert classify_acculturation(0.8, 0.8, 0.5, 0.5) == INTEGRATION
        assert classify_acculturation(0.8, 0.2, 0.5, 0.5) == SEPARATION
        assert classify_acculturation(0.2, 0.8, 0.5, 0.5) == ASSIMILATION
        assert classify_acculturation(0.2, 0.2, 0.5, 0.5) == MARGINALISATION

    def test_split_itself_is_low(self):
        # "High" means strictly greater than the split.
        assert classify_acculturation(0.5, 0.5, 0.5, 0.5) == MARGINALISATION
        assert classify_acculturation(0.5, 0.6, 0.5, 0.5) == ASSIMILATION

    def test_apply_with_median_defaults(self):
        scores = [
            _score("a", ha=0.6, da=0.1),
            _score("b", ha=0.1, da=0.6),
            _score("c", ha=0.4, da=0.4),
            _score("d", ha=0.05, da=0.05),
        ]
        ha_split, da_split = apply_acculturation(scores)
        assert ha_split == 0.25 and da_split == 0.25
        assert [s.acc_class for s in scores] == [
            SEPARATION,
            ASSIMILATION,
            INTEGRATION,
            MARGINALISATION,
        ]

    def test_apply_with_explicit_splits(self):
        scores = [_score("a", ha=0.3, da=0.3)]
        apply_acculturation(scores, ha_split=0.2, da_split=0.4)
        assert scores[0].acc_class == SEPARATION

    def test_apply_empty_raises(self):
        with pytest.raises(ValueError):
            apply_acculturation([])


def _score(user, ha, da, nationality="IT", residence="DE"):
    return AttachmentScore(
        user_id=user,
        nationality=nationality,
        residence=residence,
        ha=ha,
        da=da,
        n_hashtags=20,
        n_home=int(ha * 20),
        n_dest=int(da * 20),
    )


def _profile(user, langs):
    return UserProfile(
        user_id=user,
        residence="DE",
        nationality="IT",
        is_migrant=True,
        lang_fractions=langs,
    )


class TestLanguageCohorts:
    def test_split_rules(self):
        scores = [_score(u, 0.3, 0.3) for u in ("hi", "lo", "mid", "edge_hi", "edge_lo")]
        profiles = {
            "hi": _profile("hi", {"de": 0.95, "it": 0.05}),
            "lo": _profile("lo", {"de": 0.02, "it": 0.98}),
            "mid": _profile("mid", {"de": 0.5, "it": 0.5}),
            "edge_hi": _profile("edge_hi", {"de": 0.9, "it": 0.1}),
            "edge_lo": _profile("edge_lo", {"de": 0.1, "it": 0.9}),
        }
        split = language_cohorts(scores, profiles, {"DE": "de"})
        assert sorted(s.user_id for s in split.speakers) == ["edge_hi", "hi"]
        assert sorted(s.user_id for s in split.non_speakers) == ["edge_lo", "lo"]
        assert [s.user_id for s in split.unclassified] == ["mid"]
        assert split.speakers[0].speaks_dest_lang is True
        assert split.non_speakers[0].speaks_dest_lang is False

    def test_missing_residence_language(self):
        scores = [_score("u", 0.3, 0.3, residence="ZW")]
        profiles = {"u": _profile("u", {"de": 1.0})}
        split = language_cohorts(scores, profiles, {"DE": "de"})
        assert split.n_missing_language == 1
        assert split.unclassified == scores

    def test_bad_thresholds(self):
        with pytest.raises(ValueError):
            language_cohorts([], {}, {}, hi=0.4, lo=0.6)
        with pytest.raises(ValueError):
            language_cohorts([], {}, {}, hi=1.2, lo=0.1)


def test_scores_round_trip(tmp_path):
    scores = [
        _score("a", ha=0.25, da=0.5),
        _score("b", ha=1 / 3, da=0.0),
    ]
    scores[0].acc_class = ASSIMILATION
    scores[0].speaks_dest_lang = True
    path = tmp_path / "scores.csv"
    write_scores(path, scores, "# header\n")
    loaded = read_scores(path)
    assert loaded == scores


def test_null_scores_replicate_column(tmp_path):
    path = tmp_path / "null.csv"
    write_scores(path, [_score("a", 0.1, 0.2)], "# h\n", replicate=0)
    write_scores(path, [_score("a", 0.3, 0.1)], replicate=1, append=True)
    loaded = read_scores(path)
    assert len(loaded) == 2
    header = path.read_text(encoding="utf-8").splitlines()[1]
    assert header.endswith(",replicate")
