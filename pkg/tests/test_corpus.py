"""Ingestion and canonicalization unit tests."""

from __future__ import annotations

import json
from datetime import timezone

import pytest

from homedest.corpus import (
    LoadStats,
    canonicalize_hashtag,
    iter_posts,
    load_friends,
    load_posts,
    parse_post,
    write_posts,
)

from conftest import make_post


class TestCanonicalize:
    def test_casefold_and_marker(self):
        assert canonicalize_hashtag("#Roma") == "roma"
        assert canonicalize_hashtag("BERLIN") == "berlin"

    def test_strip_characters(self):
        assert canonicalize_hashtag("it's") == "its"
        assert canonicalize_hashtag('say,"hi";now') == "sayhinow"
        assert canonicalize_hashtag("a/b\\c") == "abc"

    def test_whitespace_trim(self):
        assert canonicalize_hashtag("  ciao  ") == "ciao"

    @pytest.mark.parametrize("raw", ["", "#", "x", " ,;'196", "//"])
    def test_too_short_rejected(self, raw):
        if raw == " ,;'196":
            assert canonicalize_hashtag(raw) == "196"
        else:
            assert canonicalize_hashtag(raw) is None

    def test_idempotent(self):
        for raw in ["#Foo'Bar", "HELLO", "a,b,c", "  x y  "]:
            once = canonicalize_hashtag(raw)
            assert once is not None
            assert canonicalize_hashtag(once) == once

    def test_unicode_casefolded(self):
        # casefold is aggressive: sharp s expands to "ss".
        assert canonicalize_hashtag("Grüße") == "grüsse"
        assert canonicalize_hashtag("CAFÉ") == "café"


class TestParsePost:
    def good(self, **over):
        record = {
            "user_id": "u1",
            "ts": "2018-06-01T08:30:00Z",
            "cc": "it",
            "lang": "it-IT",
            "tags": ["roma", "pizza"],
        }
        record.update(over)
        return record

    def test_round_numbers(self):
        post = parse_post(self.good())
        assert post.user_id == "u1"
        assert post.country == "IT"
        assert post.language == "it"
        assert post.hashtags == ("roma", "pizza")
        assert post.year == 2018
        assert post.timestamp.tzinfo == timezone.utc

    def test_zulu_and_offset_agree(self):
        a = parse_post(self.good(ts="2018-06-01T10:00:00Z"))
        b = parse_post(self.good(ts="2018-06-01T12:00:00+02:00"))
        assert a.timestamp == b.timestamp
        assert a.day == b.day

    def test_naive_timestamp_is_utc(self):
        post = parse_post(self.good(ts="2018-06-01T10:00:00"))
        assert post.timestamp.tzinfo == timezone.utc

    def test_missing_country_allowed(self):
        assert parse_post(self.good(cc=None)).country is None

    def test_bad_country_raises(self):
        with pytest.raises(ValueError):
            parse_post(self.good(cc="XX"))

    def test_bad_timestamp_raises(self):
        with pytest.raises(ValueError):
            parse_post(self.good(ts="not-a-date"))
        with pytest.raises(ValueError):
            parse_post(self.good(ts="1969-12-31T23:59:59Z"))

    def test_bad_user_raises(self):
        with pytest.raises(ValueError):
            parse_post(self.good(user_id=""))

    def test_bad_tags_raise(self):
        with pytest.raises(ValueError):
            parse_post(self.good(tags="roma"))
        with pytest.raises(ValueError):
            parse_post(self.good(tags=["roma", 3]))

    def test_language_subtag(self):
        assert parse_post(self.good(lang="pt_BR")).language == "pt"
        assert parse_post(self.good(lang="x!")).language is None
        assert parse_post(self.good(lang=None)).language is None


class TestFiles:
    def test_iter_posts_skips_junk(self, tmp_path):
        path = tmp_path / "posts.jsonl"
        lines = [
            "# header comment",
            "",
            json.dumps({"user_id": "a", "ts": "2018-01-01T00:00:00Z", "tags": []}),
            "{broken json",
            json.dumps({"user_id": "b", "ts": "2018-01-02T00:00:00Z", "cc": "ZZ"}),
            json.dumps({"user_id": "c", "ts": "2018-01-03T00:00:00Z", "cc": "DE"}),
        ]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        stats = LoadStats()
        posts = list(iter_posts(path, stats))
        assert [p.user_id for p in posts] == ["a", "c"]
        assert stats.loaded == 2
        assert stats.skipped == 2

    def test_write_read_round_trip(self, tmp_path):
        posts = [
            make_post("u1", 3, cc="IT", lang="it", tags=["a b", "c"]),
            make_post("u2", 4),
        ]
        path = tmp_path / "posts.jsonl"
        write_posts(path, posts)
        loaded, stats = load_posts(path)
        assert stats.skipped == 0
        assert loaded == posts

    def test_load_friends_dedup_and_self_loops(self, tmp_path):
        path = tmp_path / "friends.csv"
        path.write_text(
            "user_id,friend_id\na,b\na,b\na,a\nb,a\na,c\n", encoding="utf-8"
        )
        graph = load_friends(path)
        assert graph.friends_of("a") == {"b", "c"}
        assert graph.friends_of("b") == {"a"}
        assert graph.n_duplicates == 1
        assert graph.n_self_loops == 1
        assert graph.friends_of("zzz") == set()
