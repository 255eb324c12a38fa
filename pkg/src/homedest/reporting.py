"""Figure-ready summary tables.

Nothing here draws; each function reduces labelled users or attachment
scores to small CSV-able tables (flow edges, histograms, quartile tables)
that a plotting notebook can consume directly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .atlas import HashtagRecord, entropy_histogram
from .attachment import AttachmentScore
from .labeling import UserProfile

DEFAULT_MIN_FLOW = 10
DEFAULT_MIN_GROUP = 10


@dataclass(frozen=True)
class FlowEdge:
    origin: str
    destination: str
    n_users: int


def chord_edges(
    profiles: dict[str, UserProfile],
    min_users: int = DEFAULT_MIN_FLOW,
) -> list[FlowEdge]:
    """Migration flows: (origin, destination) migrant counts, small flows dropped."""
    counts: dict[tuple[str, str], int] = {}
    for user_id in sorted(profiles):
        profile = profiles[user_id]
        if not profile.is_migrant:
            continue
        key = (profile.nationality, profile.residence)
        counts[key] = counts.get(key, 0) + 1
    return [
        FlowEdge(origin, destination, n)
        for (origin, destination), n in sorted(counts.items())
        if n >= min_users
    ]


@dataclass(frozen=True)
class BoxRow:
    """Five-number summary (plus mean) of one score within one group."""

    group_by: str  # "residence" or "nationality"
    group: str
    score: str  # "ha" or "da"
    n: int
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    mean: float


def _summarise(group_by: str, group: str, score: str, values: Sequence[float]) -> BoxRow:
    arr = np.asarray(values, dtype=float)
    q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0])
    return BoxRow(
        group_by=group_by,
        group=group,
        score=score,
        n=len(values),
        minimum=float(arr.min()),
        q1=float(q1),
        median=float(med),
        q3=float(q3),
        maximum=float(arr.max()),
        mean=float(arr.mean()),
    )


def group_boxplots(
    scores: Sequence[AttachmentScore],
    min_group: int = DEFAULT_MIN_GROUP,
) -> list[BoxRow]:
    """Quartile tables of ha and da, sliced by destination and by origin."""
    out: list[BoxRow] = []
    for group_by, key in (("residence", "residence"), ("nationality", "nationality")):
        groups: dict[str, list[AttachmentScore]] = {}
        for score in scores:
            groups.setdefault(getattr(score, key), []).append(score)
        for group in sorted(groups):
            members = groups[group]
            if len(members) < min_group:
                continue
            out.append(_summarise(group_by, group, "ha", [m.ha for m in members]))
            out.append(_summarise(group_by, group, "da", [m.da for m in members]))
    return out


def attachment_series(
    scores: Sequence[AttachmentScore],
    null_scores: Sequence[AttachmentScore] = (),
) -> dict[str, list[float]]:
    """Raw value series for distribution plots: ha/da and null counterparts."""
    series = {
        "ha": [s.ha for s in scores],
        "da": [s.da for s in scores],
    }
    if null_scores:
        series["ha_null"] = [s.ha for s in null_scores]
        series["da_null"] = [s.da for s in null_scores]
    return series


def scatter_rows(scores: Sequence[AttachmentScore]) -> list[tuple[str, float, float, str]]:
    """(user_id, ha, da, acculturation class) tuples for the ha-vs-da plane."""
    return [(s.user_id, s.ha, s.da, s.acc_class or "") for s in scores]


def write_chord_edges(path: str | Path, edges: Sequence[FlowEdge], header: Sequence[str] = ()) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for line in header:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["origin", "destination", "n_users"])
        for edge in edges:
            writer.writerow([edge.origin, edge.destination, edge.n_users])


def write_entropy_histogram(
    path: str | Path,
    atlas: dict[str, HashtagRecord],
    bins: int = 50,
    header: Sequence[str] = (),
) -> None:
    edges, counts = entropy_histogram(atlas.values(), bins=bins)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for line in header:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["bin_low", "bin_high", "n_hashtags"])
        for i, count in enumerate(counts):
            writer.writerow([repr(edges[i]), repr(edges[i + 1]), count])


def write_attachment_series(
    path: str | Path,
    series: dict[str, list[float]],
    header: Sequence[str] = (),
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for line in header:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["series", "value"])
        for name in sorted(series):
            for value in series[name]:
                writer.writerow([name, repr(value)])


def write_scatter(
    path: str | Path,
    rows: Sequence[tuple[str, float, float, str]],
    header: Sequence[str] = (),
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for line in header:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["user_id", "ha", "da", "acc_class"])
        for user_id, ha, da, acc_class in rows:
            writer.writerow([user_id, repr(ha), repr(da), acc_class])


def write_boxplots(path: str | Path, rows: Sequence[BoxRow], header: Sequence[str] = ()) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for line in header:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["group_by", "group", "score", "n", "min", "q1", "median", "q3", "max", "mean"]
        )
        for row in rows:
            writer.writerow(
                [
                    row.group_by,
                    row.group,
                    row.score,
                    row.n,
                    repr(row.minimum),
                    repr(row.q1),
                    repr(row.median),
                    repr(row.q3),
                    repr(row.maximum),
                    repr(row.mean),
                ]
            )
