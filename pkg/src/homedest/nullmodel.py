"""Shuffle null model: volume-preserving random redistribution of hashtags.

The pooled multiset of canonical hashtag uses of the shuffle population is
permuted uniformly at random and dealt back so that every user keeps
exactly their original number of uses. Attachment recomputed on the
shuffled corpus gives the null indices; the atlas is not rebuilt (it
derives from non-migrants, untouched by a migrant-only shuffle).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .atlas import HashtagRecord
from .attachment import AttachmentScore, compute_scores
from .corpus import Post, canonicalize_hashtag
from .labeling import UserProfile

DEFAULT_REPLICATES = 5


@dataclass
class ShuffleRun:
    """One null-model replicate."""

    seed: int
    replicate_index: int
    scores0: list[AttachmentScore]


def shuffle_hashtags(
    posts: Sequence[Post],
    seed: int,
    year: int | None = None,
    users: set[str] | None = None,
) -> list[Post]:
    """Permute canonical hashtag uses across posts, preserving per-user volumes.

    Only canonicalizable tags in posts matching the ``year`` and ``users``
    filters enter the pool; they are written back in canonical form, which
    keeps volumes exact under re-canonicalization. Everything else about
    every post is untouched. Deterministic in (posts, seed).
    """
    slots: list[tuple[int, int]] = []
    pool: list[str] = []
    for post_idx, post in enumerate(posts):
        if year is not None and post.year != year:
            continue
        if users is not None and post.user_id not in users:
            continue
        for tag_idx, raw in enumerate(post.hashtags):
            token = canonicalize_hashtag(raw)
            if token is not None:
                slots.append((post_idx, tag_idx))
                pool.append(token)

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(pool))

    replacements: dict[int, dict[int, str]] = {}
    for slot_idx, (post_idx, tag_idx) in enumerate(slots):
        replacements.setdefault(post_idx, {})[tag_idx] = pool[order[slot_idx]]

    shuffled: list[Post] = []
    for post_idx, post in enumerate(posts):
        per_post = replacements.get(post_idx)
        if per_post is None:
            shuffled.append(post)
            continue
        tags = tuple(
            per_post.get(i, raw) for i, raw in enumerate(post.hashtags)
        )
        shuffled.append(dataclasses.replace(post, hashtags=tags))
    return shuffled


def null_distribution(
    posts: Sequence[Post],
    profiles: Mapping[str, UserProfile],
    atlas: Mapping[str, HashtagRecord],
    year: int,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    min_hashtags: int = 10,
    shuffle_population: str = "scored",
) -> list[ShuffleRun]:
    """Run the shuffle + rescore loop; one ShuffleRun per replicate.

    Replicate i uses derived seed ``seed + i``. The shuffle population is
    the scored migrants by default; ``shuffle_population="all"`` pools the
    hashtags of every user instead (per-user volumes are still preserved,
    so the same migrants are scored).
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    if shuffle_population not in ("scored", "all"):
        raise ValueError(f"unknown shuffle population {shuffle_population!r}")

    users: set[str] | None = None
    if shuffle_population == "scored":
        real = compute_scores(posts, profiles, atlas, year, min_hashtags=min_hashtags)
        users = {s.user_id for s in real}

    runs = []
    for index in range(replicates):
        derived = seed + index
        shuffled = shuffle_hashtags(posts, derived, year=year, users=users)
        scores0 = compute_scores(shuffled, profiles, atlas, year, min_hashtags=min_hashtags)
        runs.append(ShuffleRun(seed=derived, replicate_index=index, scores0=scores0))
    return runs


def pooled(runs: Iterable[ShuffleRun], index: str) -> list[float]:
    """Pool HA0 or DA0 samples over replicates; ``index`` is "ha" or "da"."""
    if index not in ("ha", "da"):
        raise ValueError(f"index must be 'ha' or 'da', got {index!r}")
    values = []
    for run in runs:
        values.extend(getattr(score, index) for score in run.scores0)
    return values
