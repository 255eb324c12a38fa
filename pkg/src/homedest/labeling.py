"""Residence and nationality labeling for users; migrant flagging.

Residence for a reference year is the country with the most distinct
calendar days carrying a geo-tagged post in that year. Nationality combines
the user's all-time geo-post distribution with the dominant countries of
their friends; the language weight of the underlying identification method
is pinned to zero.
"""

from __future__ import annotations

import csv
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import FriendGraph, Post

logger = logging.getLogger(__name__)

DEFAULT_SELF_WEIGHT = 0.5
DEFAULT_FRIEND_WEIGHT = 0.5


@dataclass
class UserProfile:
    """Per-user label bundle."""

    user_id: str
    residence: str | None = None
    nationality: str | None = None
    is_migrant: bool | None = None
    lang_fractions: dict[str, float] = field(default_factory=dict)
    days_per_country: dict[str, int] = field(default_factory=dict)


@dataclass
class LabelSummary:
    """Labeling funnel counts."""

    n_users: int = 0
    n_with_residence: int = 0
    n_with_nationality: int = 0
    n_with_both: int = 0
    n_migrants: int = 0


def pick_country(
    day_counts: Mapping[str, int], post_counts: Mapping[str, int]
) -> str | None:
    """Argmax of distinct-day counts; ties fall back to post counts, then code.

    The argmax is invariant to scaling all day counts by a positive constant.
    """
    if not day_counts:
        return None
    best_days = max(day_counts.values())
    tied = [c for c, d in day_counts.items() if d == best_days]
    if len(tied) == 1:
        return tied[0]
    return min(tied, key=lambda c: (-post_counts.get(c, 0), c))


def _geo_evidence(posts: Iterable[Post], year: int | None):
    """Distinct-day and post counts per country over geo-tagged posts.

    With ``year`` set, only posts from that year count; with None, all-time.
    """
    days: dict[str, set] = defaultdict(set)
    n_posts: Counter = Counter()
    for post in posts:
        if post.country is None:
            continue
        if year is not None and post.year != year:
            continue
        days[post.country].add(post.day)
        n_posts[post.country] += 1
    return {c: len(d) for c, d in days.items()}, dict(n_posts)


def assign_residence(
    posts: Iterable[Post], year: int, min_evidence: int = 0
) -> str | None:
    """Residence = country with most distinct geo-tagged days in the year.

    Returns None when the user has no geo-tagged post in the year, or when
    the total distinct-day count falls below ``min_evidence``.
    """
    day_counts, post_counts = _geo_evidence(posts, year)
    if sum(day_counts.values()) < max(1, min_evidence):
        return None
    return pick_country(day_counts, post_counts)


def dominant_country(posts: Iterable[Post]) -> str | None:
    """All-time distinct-day argmax, with the residence tie-break chain."""
    day_counts, post_counts = _geo_evidence(posts, None)
    if not day_counts:
        return None
    return pick_country(day_counts, post_counts)


def assign_nationality(
    posts: Iterable[Post],
    friend_ids: Iterable[str],
    friend_countries: Mapping[str, str],
    w_self: float = DEFAULT_SELF_WEIGHT,
    w_friends: float = DEFAULT_FRIEND_WEIGHT,
    min_evidence: int = 0,
) -> str | None:
    """Nationality = argmax of w_self * f_self(c) + w_friends * f_friends(c).

    f_self is the fraction of the user's all-time geo-tagged posts in each
    country; f_friends is the fraction of the user's labeled friends whose
    dominant country is c. The language term of the source method carries
    weight zero and is omitted. Ties break lexicographically; the result is
    None when no geo evidence and no labeled friend exists.
    """
    geo_counts: Counter = Counter()
    for post in posts:
        if post.country is not None:
            geo_counts[post.country] += 1
    labeled = [friend_countries[f] for f in friend_ids if f in friend_countries]

    n_geo = sum(geo_counts.values())
    n_friends = len(labeled)
    if n_geo + n_friends < max(1, min_evidence):
        return None

    scores: dict[str, float] = defaultdict(float)
    if n_geo:
        for country, count in geo_counts.items():
            scores[country] += w_self * count / n_geo
    if n_friends:
        for country, count in Counter(labeled).items():
            scores[country] += w_friends * count / n_friends
    if not scores:
        return None
    best = max(scores.values())
    return min(c for c, s in scores.items() if s == best)


def language_fractions(posts: Iterable[Post]) -> dict[str, float]:
    """Fraction of the user's posts per language, over language-tagged posts."""
    counts: Counter = Counter(p.language for p in posts if p.language is not None)
    total = sum(counts.values())
    if total == 0:
        return {}
    return {lang: n / total for lang, n in counts.items()}


def label_population(
    posts: Iterable[Post],
    friends: FriendGraph,
    year: int,
    w_self: float = DEFAULT_SELF_WEIGHT,
    w_friends: float = DEFAULT_FRIEND_WEIGHT,
    min_evidence: int = 0,
) -> tuple[dict[str, UserProfile], LabelSummary]:
    """Label every user that has at least one post.

    Two passes: first dominant countries for everyone (friend evidence),
    then per-user residence and nationality. Deterministic under input
    reordering: users are processed in sorted order and all evidence is
    aggregated before any decision.
    """
    if w_self < 0 or w_friends < 0 or abs(w_self + w_friends - 1.0) > 1e-9:
        raise ValueError(f"weights must be nonnegative and sum to 1, got {w_self}+{w_friends}")
    by_user: dict[str, list[Post]] = defaultdict(list)
    for post in posts:
        by_user[post.user_id].append(post)

    dominant: dict[str, str] = {}
    for user_id in sorted(by_user):
        country = dominant_country(by_user[user_id])
        if country is not None:
            dominant[user_id] = country

    profiles: dict[str, UserProfile] = {}
    summary = LabelSummary(n_users=len(by_user))
    for user_id in sorted(by_user):
        user_posts = by_user[user_id]
        day_counts, _ = _geo_evidence(user_posts, year)
        profile = UserProfile(
            user_id=user_id,
            residence=assign_residence(user_posts, year, min_evidence),
            nationality=assign_nationality(
                user_posts,
                friends.friends_of(user_id),
                dominant,
                w_self=w_self,
                w_friends=w_friends,
                min_evidence=min_evidence,
            ),
            lang_fractions=language_fractions(user_posts),
            days_per_country=day_counts,
        )
        if profile.residence is not None and profile.nationality is not None:
            profile.is_migrant = profile.residence != profile.nationality
        profiles[user_id] = profile

        summary.n_with_residence += profile.residence is not None
        summary.n_with_nationality += profile.nationality is not None
        if profile.is_migrant is not None:
            summary.n_with_both += 1
            summary.n_migrants += profile.is_migrant

    logger.info(
        "labeled %d users: %d residences, %d nationalities, %d with both, %d migrants",
        summary.n_users,
        summary.n_with_residence,
        summary.n_with_nationality,
        summary.n_with_both,
        summary.n_migrants,
    )
    return profiles, summary


def migrants(profiles: Mapping[str, UserProfile]) -> list[UserProfile]:
    return [p for p in profiles.values() if p.is_migrant]


def non_migrants(profiles: Mapping[str, UserProfile]) -> list[UserProfile]:
    return [p for p in profiles.values() if p.is_migrant is False]


def write_profiles(path: str | Path, profiles: Mapping[str, UserProfile], header: str | None = None) -> None:
    """Persist profiles as CSV ``user_id,residence,nationality,is_migrant``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if header:
            fh.write(header)
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id", "residence", "nationality", "is_migrant"])
        for user_id in sorted(profiles):
            p = profiles[user_id]
            flag = "" if p.is_migrant is None else str(p.is_migrant).lower()
            writer.writerow([p.user_id, p.residence or "", p.nationality or "", flag])


def write_lang_fractions(path: str | Path, profiles: Mapping[str, UserProfile], header: str | None = None) -> None:
    """Persist language fractions as CSV ``user_id,lang,fraction``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if header:
            fh.write(header)
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id", "lang", "fraction"])
        for user_id in sorted(profiles):
            fractions = profiles[user_id].lang_fractions
            for lang in sorted(fractions):
                writer.writerow([user_id, lang, repr(fractions[lang])])


def read_profiles(path: str | Path, lang_path: str | Path | None = None) -> dict[str, UserProfile]:
    """Load profiles (and optionally language fractions) back from CSV."""
    profiles: dict[str, UserProfile] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = (r for r in fh if not r.startswith("#"))
        for row in csv.DictReader(rows):
            flag = row.get("is_migrant", "")
            profiles[row["user_id"]] = UserProfile(
                user_id=row["user_id"],
                residence=row.get("residence") or None,
                nationality=row.get("nationality") or None,
                is_migrant=None if flag == "" else flag == "true",
            )
    if lang_path is not None:
        with open(lang_path, "r", encoding="utf-8", newline="") as fh:
            rows = (r for r in fh if not r.startswith("#"))
            for row in csv.DictReader(rows):
                profile = profiles.get(row["user_id"])
                if profile is not None:
                    profile.lang_fractions[row["lang"]] = float(row["fraction"])
    return profiles
