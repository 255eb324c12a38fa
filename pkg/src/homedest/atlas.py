"""Country assignment for hashtags via the nationality distribution of
non-migrant users, with a normalized-entropy filter for international tags.

A token's distribution P counts distinct non-migrant users per nationality
(one count per user regardless of repetition). Tokens whose normalized
entropy exceeds the threshold are labeled "international"; an empty
distribution yields "unassigned".
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import Post, canonicalize_hashtag
from .labeling import UserProfile

INTERNATIONAL = "international"
UNASSIGNED = "unassigned"

DEFAULT_ENTROPY_THRESHOLD = 0.5


@dataclass
class HashtagRecord:
    """Nationality distribution and assignment for one canonical token."""

    token: str
    counts: dict[str, int]
    p: dict[str, float]
    entropy: float
    assignment: str
    n_users: int = 0
    top_fraction: float = 0.0


def normalized_entropy(p: Mapping[str, float]) -> float:
    """Shannon entropy of ``p`` divided by log of its support size.

    ``p`` must be a nonempty distribution with strictly positive values
    summing to 1. A single-country distribution has entropy 0 by convention
    (the 0/0 limit; one country is maximally specific). Natural log; the
    normalization cancels the base.
    """
    if not p:
        raise ValueError("empty distribution")
    if len(p) == 1:
        return 0.0
    values = sorted(p.values())
    # The uniform case is exactly 1 by definition; the float sum below can
    # drift a couple of ulp either side of it (including above 1.0).
    if values[0] == values[-1]:
        return 1.0
    # Summation in sorted order keeps the result independent of dict order.
    h = -sum(v * math.log(v) for v in values)
    return min(max(h / math.log(len(p)), 0.0), 1.0)


def _make_record(token: str, counts: Mapping[str, int], threshold: float) -> HashtagRecord:
    counts = dict(counts)
    total = sum(counts.values())
    if total == 0:
        return HashtagRecord(token, {}, {}, 0.0, UNASSIGNED)
    p = {c: n / total for c, n in counts.items()}
    entropy = normalized_entropy(p)
    if entropy <= threshold:
        best = max(counts.values())
        assignment = min(c for c, n in counts.items() if n == best)
    else:
        assignment = INTERNATIONAL
    return HashtagRecord(token, counts, p, entropy, assignment, total, max(p.values()))


def _token_users(posts: Iterable[Post], eligible: set[str], year: int):
    """token -> set of eligible users who used it in the year."""
    users_by_token: dict[str, set[str]] = defaultdict(set)
    for post in posts:
        if post.user_id not in eligible or post.year != year:
            continue
        for raw in post.hashtags:
            token = canonicalize_hashtag(raw)
            if token is not None:
                users_by_token[token].add(post.user_id)
    return users_by_token


def build_distribution(
    posts: Iterable[Post],
    profiles: Mapping[str, UserProfile],
    token: str,
    year: int,
) -> dict[str, float]:
    """Nationality distribution of non-migrant users of ``token`` in ``year``.

    Users are counted once per token. Tokens used by no eligible user give
    an empty mapping.
    """
    eligible = {u for u, p in profiles.items() if p.is_migrant is False}
    users = _token_users(posts, eligible, year).get(token, set())
    counts: defaultdict[str, int] = defaultdict(int)
    for user_id in sorted(users):
        counts[profiles[user_id].nationality] += 1
    total = sum(counts.values())
    if total == 0:
        return {}
    return {c: n / total for c, n in counts.items()}


def build_atlas(
    posts: Iterable[Post],
    profiles: Mapping[str, UserProfile],
    year: int,
    threshold: float = DEFAULT_ENTROPY_THRESHOLD,
) -> dict[str, HashtagRecord]:
    """Assign a nationality (or "international") to every canonical token
    used by at least one non-migrant in the year.

    Assignment is the argmax of the user distribution when entropy is at or
    below the threshold; argmax ties break by higher user count, then
    lexicographic country code.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    eligible = {u for u, p in profiles.items() if p.is_migrant is False}
    users_by_token = _token_users(posts, eligible, year)
    atlas: dict[str, HashtagRecord] = {}
    for token in sorted(users_by_token):
        counts: defaultdict[str, int] = defaultdict(int)
        for user_id in sorted(users_by_token[token]):
            counts[profiles[user_id].nationality] += 1
        atlas[token] = _make_record(token, counts, threshold)
    return atlas


def entropy_histogram(
    records: Iterable[HashtagRecord], bins: int = 50
) -> tuple[list[float], list[int]]:
    """Histogram of entropy values over [0, 1]; (edges, counts).

    Zero-entropy tokens land in the first bin, which dominates on realistic
    corpora. Suitable for log-scale count plotting.
    """
    edges = [i / bins for i in range(bins + 1)]
    counts = [0] * bins
    for record in records:
        idx = min(int(record.entropy * bins), bins - 1)
        counts[idx] += 1
    return edges, counts


def write_atlas(
    path: str | Path,
    atlas: Mapping[str, HashtagRecord],
    header: str | None = None,
    distributions_path: str | Path | None = None,
) -> None:
    """Persist the atlas as CSV, with an optional long-format distribution file."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if header:
            fh.write(header)
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["token", "assignment", "entropy", "n_users", "top_country_fraction"])
        for token in sorted(atlas):
            r = atlas[token]
            writer.writerow([r.token, r.assignment, repr(r.entropy), r.n_users, repr(r.top_fraction)])
    if distributions_path is not None:
        with open(distributions_path, "w", encoding="utf-8", newline="") as fh:
            if header:
                fh.write(header)
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["token", "country", "fraction"])
            for token in sorted(atlas):
                p = atlas[token].p
                for country in sorted(p):
                    writer.writerow([token, country, repr(p[country])])


def read_atlas(path: str | Path) -> dict[str, HashtagRecord]:
    """Load an atlas CSV back into records.

    The full per-country distribution lives in the companion file and is not
    reloaded here; downstream scoring only needs the assignment column.
    """
    atlas: dict[str, HashtagRecord] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = (r for r in fh if not r.startswith("#"))
        for row in csv.DictReader(rows):
            atlas[row["token"]] = HashtagRecord(
                token=row["token"],
                counts={},
                p={},
                entropy=float(row["entropy"]),
                assignment=row["assignment"],
                n_users=int(row["n_users"]),
                top_fraction=float(row["top_country_fraction"]),
            )
    return atlas


def assignments(atlas: Mapping[str, HashtagRecord]) -> dict[str, str]:
    """token -> assignment lookup used by the scoring stage."""
    return {token: record.assignment for token, record in atlas.items()}
