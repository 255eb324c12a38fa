"""Country-level covariates and their correlations with attachment scores.

Two covariate families are supported: per-country cultural dimension scores
(six-dimension model; the origin/destination delta becomes the covariate)
and per-country-pair gravity covariates (capital distance, contiguity,
shared official language, common spoken/native language fractions).

Correlations come in two flavours: individual (one observation per user)
and grouped (one observation per origin group for home scores, per
destination group for destination scores), mirroring the level at which
the covariates actually vary.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .attachment import AttachmentScore
from .stats import TestResult, pearson, spearman

logger = logging.getLogger(__name__)

HOFSTEDE_DIMENSIONS = ("pdi", "idv", "mas", "uai", "lto", "ivr")
PAIR_COVARIATES = ("distcap", "contig", "comlang_off", "csl", "cnl")
DEFAULT_MIN_GROUP_SIZE = 10

_SCORE_RANGE = (0.0, 120.0)


def packaged_data_path(name: str) -> Path:
    """Path to a bundled reference table (hofstede.csv, country_language.csv)."""
    return Path(str(resources.files("homedest") / "data" / name))


@dataclass
class CountryScores:
    """Cultural dimension scores per country; inner dicts may be partial."""

    scores: dict[str, dict[str, float]] = field(default_factory=dict)

    def countries(self) -> list[str]:
        return sorted(self.scores)

    def get(self, country: str) -> dict[str, float] | None:
        return self.scores.get(country)


@dataclass
class PairTable:
    """Symmetric country-pair covariates keyed by unordered pair."""

    values: dict[tuple[str, str], dict[str, float]] = field(default_factory=dict)

    @staticmethod
    def key(a: str, b: str) -> tuple[str, str]:
        return (a, b) if a <= b else (b, a)

    def get(self, a: str, b: str) -> dict[str, float] | None:
        return self.values.get(self.key(a, b))


@dataclass(frozen=True)
class JoinedRow:
    """One user's scores with every covariate that could be resolved."""

    user_id: str
    nationality: str
    residence: str
    ha: float
    da: float
    covariates: dict[str, float]


def _data_rows(path: str | Path) -> Iterable[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        filtered = (line for line in handle if not line.startswith("#"))
        yield from csv.DictReader(filtered)


def load_hofstede(path: str | Path | None = None) -> CountryScores:
    """Read per-country dimension scores; empty cells mean missing."""
    if path is None:
        path = packaged_data_path("hofstede.csv")
    table = CountryScores()
    for row in _data_rows(path):
        country = row["country"].strip().upper()
        dims: dict[str, float] = {}
        for dim in HOFSTEDE_DIMENSIONS:
            cell = (row.get(dim) or "").strip()
            if not cell:
                continue
            value = float(cell)
            if not _SCORE_RANGE[0] <= value <= _SCORE_RANGE[1]:
                raise ValueError(f"{country} {dim}={value} outside {_SCORE_RANGE}")
            dims[dim] = value
        if dims:
            table.scores[country] = dims
    return table


def load_pair_covariates(path: str | Path) -> PairTable:
    """Read country-pair covariates; pairs are stored unordered."""
    table = PairTable()
    for row in _data_rows(path):
        a = row["country_a"].strip().upper()
        b = row["country_b"].strip().upper()
        values: dict[str, float] = {}
        for name in PAIR_COVARIATES:
            cell = (row.get(name) or "").strip()
            if cell:
                values[name] = float(cell)
        if values:
            table.values[PairTable.key(a, b)] = values
    return table


def load_country_languages(path: str | Path | None = None) -> dict[str, str]:
    """Read the country -> primary language-subtag table."""
    if path is None:
        path = packaged_data_path("country_language.csv")
    out: dict[str, str] = {}
    for row in _data_rows(path):
        out[row["country"].strip().upper()] = row["language"].strip().lower()
    return out


def hofstede_delta(
    table: CountryScores,
    origin: str,
    destination: str,
    signed: bool = False,
) -> dict[str, float]:
    """Per-dimension origin/destination distance.

    Absolute differences by default; signed=True keeps destination - origin.
    Dimensions missing for either country are omitted. An unknown country
    yields an empty dict.
    """
    a = table.get(origin)
    b = table.get(destination)
    if a is None or b is None:
        return {}
    out: dict[str, float] = {}
    for dim in HOFSTEDE_DIMENSIONS:
        if dim in a and dim in b:
            diff = b[dim] - a[dim]
            out[f"hof_{dim}"] = diff if signed else abs(diff)
    return out


def join_covariates(
    scores: Sequence[AttachmentScore],
    hofstede: CountryScores | None = None,
    pairs: PairTable | None = None,
    signed: bool = False,
) -> tuple[list[JoinedRow], int]:
    """Attach covariates to each scored user; returns (rows, n_dropped).

    A user is dropped (and counted) when no covariate at all resolves for
    their origin/destination pair.
    """
    rows: list[JoinedRow] = []
    dropped = 0
    for score in scores:
        values: dict[str, float] = {}
        if hofstede is not None:
            values.update(hofstede_delta(hofstede, score.nationality, score.residence, signed))
        if pairs is not None:
            pair = pairs.get(score.nationality, score.residence)
            if pair:
                values.update(pair)
        if not values:
            dropped += 1
            continue
        rows.append(
            JoinedRow(
                user_id=score.user_id,
                nationality=score.nationality,
                residence=score.residence,
                ha=score.ha,
                da=score.da,
                covariates=values,
            )
        )
    if dropped:
        logger.info("dropped %d users with no covariate coverage", dropped)
    return rows, dropped


@dataclass(frozen=True)
class CorrelationRow:
    target: str  # "ha" or "da"
    covariate: str
    method: str
    r: float
    p_value: float
    n: int

    @property
    def stars(self) -> str:
        from .stats import significance_stars

        return significance_stars(self.p_value)


def _correlate_pairs(
    target: str, covariate: str, xs: list[float], ys: list[float]
) -> list[CorrelationRow]:
    out = []
    for test in (pearson(xs, ys), spearman(xs, ys)):
        out.append(CorrelationRow(target, covariate, test.method, test.statistic, test.p_value, test.n1))
    return out


def _covariate_names(rows: Sequence[JoinedRow]) -> list[str]:
    names: set[str] = set()
    for row in rows:
        names.update(row.covariates)
    return sorted(names)


def individual_correlations(rows: Sequence[JoinedRow]) -> list[CorrelationRow]:
    """Per-user correlations of ha and da against every covariate.

    Also reports the ha-vs-da correlation. Covariates with fewer than three
    complete pairs are skipped; fewer than three rows overall is an error.
    """
    if len(rows) < 3:
        raise ValueError("need at least 3 joined users")
    out: list[CorrelationRow] = []
    out.extend(_correlate_pairs("ha", "da", [r.ha for r in rows], [r.da for r in rows]))
    for name in _covariate_names(rows):
        for target in ("ha", "da"):
            xs: list[float] = []
            ys: list[float] = []
            for row in rows:
                if name in row.covariates:
                    xs.append(row.covariates[name])
                    ys.append(row.ha if target == "ha" else row.da)
            if len(xs) < 3:
                logger.info("skipping %s/%s: only %d pairs", target, name, len(xs))
                continue
            try:
                out.extend(_correlate_pairs(target, name, xs, ys))
            except ValueError:
                logger.info("skipping %s/%s: degenerate sample", target, name)
    return out


def grouped_correlations(
    rows: Sequence[JoinedRow],
    min_group_size: int = DEFAULT_MIN_GROUP_SIZE,
) -> list[CorrelationRow]:
    """Group-mean correlations: ha grouped by origin, da by destination.

    Each group contributes one observation: the mean attachment score and the
    mean of each covariate over group members. Groups below min_group_size
    are excluded; fewer than three surviving groups is an error.
    """
    out: list[CorrelationRow] = []
    for target, key in (("ha", "nationality"), ("da", "residence")):
        groups: dict[str, list[JoinedRow]] = {}
        for row in rows:
            groups.setdefault(getattr(row, key), []).append(row)
        kept = {c: members for c, members in groups.items() if len(members) >= min_group_size}
        if len(kept) < 3:
            raise ValueError(
                f"need at least 3 groups of {min_group_size}+ users for {target}, got {len(kept)}"
            )
        for name in _covariate_names(rows):
            xs: list[float] = []
            ys: list[float] = []
            for country in sorted(kept):
                members = kept[country]
                with_cov = [r.covariates[name] for r in members if name in r.covariates]
                if not with_cov:
                    continue
                xs.append(sum(with_cov) / len(with_cov))
                values = [r.ha if target == "ha" else r.da for r in members]
                ys.append(sum(values) / len(values))
            if len(xs) < 3:
                continue
            try:
                out.extend(_correlate_pairs(target, name, xs, ys))
            except ValueError:
                logger.info("skipping grouped %s/%s: degenerate sample", target, name)
    return out


def write_correlations(
    path: str | Path,
    rows: Sequence[CorrelationRow],
    header: Sequence[str] = (),
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for line in header:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["target", "covariate", "method", "r", "p_value", "n", "stars"])
        for row in rows:
            writer.writerow(
                [row.target, row.covariate, row.method, repr(row.r), repr(row.p_value), row.n, row.stars]
            )
