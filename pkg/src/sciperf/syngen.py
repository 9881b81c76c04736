"""Seeded synthetic-corpus generator with planted ground truth.

Produces corpora whose interesting properties are known by construction:
exact researcher/publication totals, fields planted above or below the
publication-coverage threshold, a planted share of short-tenure researchers,
and planted "star" researchers with boosted publication rates and citation
draws so that the convergence between top productivity and highly cited
output is a controllable dial.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping

from .corpus import AuthorSlot, Corpus, Publication, Researcher, dump_corpus, make_corpus

RANK_ORDER = ("assistant", "associate", "full")


class GenConfigError(Exception):
    """A generator configuration value is inconsistent or out of range."""


@dataclass(frozen=True)
class GenConfig:
    seed: int = 12345
    n_disciplines: int = 4
    fields_per_discipline: int = 5
    researchers_per_field: tuple[int, int] = (80, 120)
    window: tuple[int, int] = (2004, 2008)
    n_publications: int = 10_000
    rank_mix: tuple[float, float, float] = (0.40, 0.35, 0.25)  # assistant, associate, full

    # citation model: discrete heavy-tailed draws per publication
    citation_family: str = "lognormal"  # or "negbin"
    citation_mu: float = 1.4  # lognormal location / log of negbin mean
    citation_sigma: float = 1.0  # lognormal scale / negbin dispersion r
    citation_field_jitter: float = 0.2
    distinct_citations: bool = False

    # byline composition
    team_size_ranges: tuple[tuple[int, int], ...] = ((1, 4), (2, 5), (3, 8))
    external_coauthor_share: float = 0.15
    cross_discipline_coauthor_share: float = 0.05
    same_org_first_last_share: float = 0.30
    multi_category_share: float = 0.0
    n_organizations: int = 8

    # planted structure
    star_share: float = 0.05
    star_rate_boost: float = 1.0
    hca_propensity_boost: float = 1.0
    rank_boost_weights: Mapping[str, float] = field(
        default_factory=lambda: {"assistant": 1.0, "associate": 1.0, "full": 1.0}
    )
    low_coverage_field_share: float = 0.0
    low_coverage_rate: float = 0.30
    normal_coverage_rate: float = 0.85
    short_tenure_share: float = 0.10

    byline_weighted_share: float = 0.5  # fraction of disciplines using byline weights

    def validate(self) -> None:
        window_len = self.window[1] - self.window[0] + 1
        if window_len < 1:
            raise GenConfigError("window: end year before start year")
        if self.n_disciplines < 1 or self.fields_per_discipline < 1:
            raise GenConfigError("n_disciplines and fields_per_discipline must be >= 1")
        lo, hi = self.researchers_per_field
        if not 1 <= lo <= hi:
            raise GenConfigError(f"researchers_per_field: bad range ({lo}, {hi})")
        if self.n_publications < 1:
            raise GenConfigError("n_publications must be >= 1")
        if abs(sum(self.rank_mix) - 1.0) > 1e-9 or min(self.rank_mix) < 0:
            raise GenConfigError(f"rank_mix {self.rank_mix} must be non-negative and sum to 1")
        if self.citation_family not in ("lognormal", "negbin"):
            raise GenConfigError(f"citation_family: unknown family {self.citation_family!r}")
        if self.citation_sigma <= 0:
            raise GenConfigError("citation_sigma must be positive")
        for name in (
            "external_coauthor_share",
            "cross_discipline_coauthor_share",
            "same_org_first_last_share",
            "multi_category_share",
            "star_share",
            "low_coverage_field_share",
            "low_coverage_rate",
            "normal_coverage_rate",
            "short_tenure_share",
            "byline_weighted_share",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise GenConfigError(f"{name}: proportion {value} outside [0, 1]")
        if self.star_rate_boost < 1.0 or self.hca_propensity_boost < 1.0:
            raise GenConfigError("boosts must be >= 1 (1 disables the boost)")
        if self.distinct_citations and self.multi_category_share > 0:
            raise GenConfigError("distinct_citations requires multi_category_share = 0")
        for rng_pair in self.team_size_ranges:
            if not 1 <= rng_pair[0] <= rng_pair[1]:
                raise GenConfigError(f"team_size_ranges: bad range {rng_pair}")

    @classmethod
    def from_dict(cls, data: Mapping) -> "GenConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise GenConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(data)
        for key in ("researchers_per_field", "window", "rank_mix"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        if "team_size_ranges" in kwargs:
            kwargs["team_size_ranges"] = tuple(tuple(r) for r in kwargs["team_size_ranges"])
        config = cls(**kwargs)
        config.validate()
        return config

    @classmethod
    def from_json(cls, path: str | Path) -> "GenConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise GenConfigError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise GenConfigError(f"{path}: expected a JSON object")
        return cls.from_dict(data)


@dataclass
class GroundTruth:
    """Everything planted into a generated corpus, for expected-value tests."""

    seed: int
    n_researchers: int
    n_publications: int
    window: tuple[int, int]
    star_ids: list[str]
    low_coverage_fields: list[str]
    short_tenure_ids: list[str]
    field_sizes: dict[str, int]
    publishers_per_field: dict[str, int]
    field_discipline: dict[str, str]
    field_category: dict[str, str]
    citation_params: dict[str, dict]
    star_rate_boost: float
    hca_propensity_boost: float
    rank_boost_weights: dict[str, float]
    discipline_policy: dict[str, str]

    def to_json(self, path: str | Path) -> None:
        payload = asdict(self)
        payload["window"] = list(self.window)
        Path(path).write_text(json.dumps(payload, indent=1, sort_keys=True), encoding="utf-8")

    @classmethod
    def from_json(cls, path: str | Path) -> "GroundTruth":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        data["window"] = tuple(data["window"])
        return cls(**data)


def generate_corpus(config: GenConfig) -> tuple[Corpus, GroundTruth]:
    """Build a corpus and its ground truth; fully determined by config.seed."""
    config.validate()
    rng = random.Random(config.seed)
    window_years = list(range(config.window[0], config.window[1] + 1))
    window_len = len(window_years)

    n_fields = config.n_disciplines * config.fields_per_discipline
    fields = [f"F{i:03d}" for i in range(1, n_fields + 1)]
    field_discipline = {
        fid: f"D{(i // config.fields_per_discipline) + 1:02d}" for i, fid in enumerate(fields)
    }
    field_category = {fid: f"C{fid[1:]}" for fid in fields}
    disciplines = sorted({field_discipline[f] for f in fields})
    orgs = [f"U{i:02d}" for i in range(1, config.n_organizations + 1)]

    n_low = round(config.low_coverage_field_share * n_fields)
    low_fields = set(rng.sample(fields, n_low)) if n_low else set()

    # researchers, rank mix, tenure, publishers, stars -- planted per field
    researchers: list[Researcher] = []
    members: dict[str, list[str]] = {}
    publishers: dict[str, list[str]] = {}
    stars: set[str] = set()
    shorts: set[str] = set()
    serial = 0
    for fid in fields:
        n_f = rng.randint(*config.researchers_per_field)
        ids = [f"R{serial + j:05d}" for j in range(1, n_f + 1)]
        serial += n_f
        members[fid] = ids
        ranks = _allocate_ranks(n_f, config.rank_mix)
        rng.shuffle(ranks)
        short_ids = set(rng.sample(ids, round(config.short_tenure_share * n_f)))
        shorts.update(short_ids)
        for rid, rank in zip(ids, ranks):
            years = rng.randint(1, 2) if rid in short_ids else rng.randint(3, window_len)
            researchers.append(
                Researcher(rid, fid, field_discipline[fid], rank, years, rng.choice(orgs))
            )
        rate = config.low_coverage_rate if fid in low_fields else config.normal_coverage_rate
        k_f = max(1, round(rate * n_f))
        publishers[fid] = sorted(rng.sample(ids, k_f))
        eligible_pool = [rid for rid in publishers[fid] if rid not in short_ids] or publishers[fid]
        n_stars = round(config.star_share * n_f)
        stars.update(rng.sample(eligible_pool, min(n_stars, len(eligible_pool))))

    total_publishers = sum(len(p) for p in publishers.values())
    if config.n_publications < total_publishers:
        raise GenConfigError(
            f"n_publications {config.n_publications} cannot cover {total_publishers} publishing researchers"
        )

    by_id = {r.id: r for r in researchers}

    def lead_weight(rid: str) -> float:
        return config.star_rate_boost if rid in stars else 1.0

    # per-field publication quotas: one per publisher, remainder by lead weight
    extra = config.n_publications - total_publishers
    field_weight = {fid: sum(lead_weight(rid) for rid in publishers[fid]) for fid in fields}
    extra_counts = _largest_remainder(extra, [field_weight[fid] for fid in fields])
    pubs_per_field = {fid: len(publishers[fid]) + extra_counts[i] for i, fid in enumerate(fields)}

    # citation model parameters, drawn once per field
    citation_params: dict[str, dict] = {}
    for fid in fields:
        jitter = rng.uniform(-config.citation_field_jitter, config.citation_field_jitter)
        if config.citation_family == "lognormal":
            mu = config.citation_mu + jitter
            citation_params[fid] = {
                "family": "lognormal",
                "mu": mu,
                "sigma": config.citation_sigma,
                "model_mean": math.exp(mu + config.citation_sigma**2 / 2),
            }
        else:
            mean = math.exp(config.citation_mu + jitter)
            citation_params[fid] = {
                "family": "negbin",
                "mean": mean,
                "r": config.citation_sigma,
                "model_mean": mean,
            }

    all_publishers = {fid: list(publishers[fid]) for fid in fields}
    team_range = {
        d: config.team_size_ranges[i % len(config.team_size_ranges)] for i, d in enumerate(disciplines)
    }

    publications: list[Publication] = []
    pub_serial = 0
    for fid in fields:
        discipline = field_discipline[fid]
        pool = all_publishers[fid]
        lead_order = list(pool)
        rng.shuffle(lead_order)
        extra_leads = rng.choices(pool, weights=[lead_weight(r) for r in pool], k=pubs_per_field[fid] - len(pool))
        leads = lead_order + extra_leads
        for i, lead_id in enumerate(leads):
            pub_serial += 1
            lead = by_id[lead_id]
            year = window_years[i % window_len]
            byline = _compose_byline(
                rng, config, lead, pool, fields, all_publishers, by_id, team_range[discipline]
            )
            categories = [field_category[fid]]
            if config.multi_category_share and n_fields > 1 and rng.random() < config.multi_category_share:
                other = rng.choice([f for f in fields if f != fid])
                categories.append(field_category[other])
            citations = _draw_citations(rng, config, citation_params[fid], lead, stars)
            publications.append(
                Publication(f"P{pub_serial:06d}", year, citations, tuple(categories), tuple(byline))
            )

    if config.distinct_citations:
        publications = _make_citations_distinct(publications)

    discipline_policy = {
        d: ("byline_weighted" if i < round(config.byline_weighted_share * len(disciplines)) else "equal_fraction")
        for i, d in enumerate(disciplines)
    }
    corpus = make_corpus(researchers, publications, config.window, discipline_policy)
    truth = GroundTruth(
        seed=config.seed,
        n_researchers=len(researchers),
        n_publications=len(publications),
        window=config.window,
        star_ids=sorted(stars),
        low_coverage_fields=sorted(low_fields),
        short_tenure_ids=sorted(shorts),
        field_sizes={fid: len(members[fid]) for fid in fields},
        publishers_per_field={fid: len(publishers[fid]) for fid in fields},
        field_discipline=dict(field_discipline),
        field_category=dict(field_category),
        citation_params=citation_params,
        star_rate_boost=config.star_rate_boost,
        hca_propensity_boost=config.hca_propensity_boost,
        rank_boost_weights=dict(config.rank_boost_weights),
        discipline_policy=discipline_policy,
    )
    return corpus, truth


def write_generated(corpus: Corpus, truth: GroundTruth, out_dir: str | Path) -> dict[str, Path]:
    """Write researchers.csv, publications.csv, and ground_truth.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "researchers": out / "researchers.csv",
        "publications": out / "publications.csv",
        "ground_truth": out / "ground_truth.json",
    }
    dump_corpus(corpus, paths["researchers"], paths["publications"])
    truth.to_json(paths["ground_truth"])
    return paths


# --- internals ---------------------------------------------------------------


def _allocate_ranks(n: int, mix: tuple[float, float, float]) -> list[str]:
    counts = _largest_remainder(n, list(mix))
    ranks: list[str] = []
    for rank, count in zip(RANK_ORDER, counts):
        ranks.extend([rank] * count)
    return ranks


def _largest_remainder(total: int, weights: list[float]) -> list[int]:
    """Split ``total`` into integer parts proportional to ``weights``."""
    weight_sum = sum(weights)
    if weight_sum <= 0 or total <= 0:
        return [0] * len(weights)
    exact = [total * w / weight_sum for w in weights]
    floors = [math.floor(x) for x in exact]
    leftover = total - sum(floors)
    order = sorted(range(len(weights)), key=lambda i: (-(exact[i] - floors[i]), i))
    for i in order[:leftover]:
        floors[i] += 1
    return floors


def _compose_byline(rng, config, lead, pool, fields, all_publishers, by_id, size_range):
    size = rng.randint(*size_range)
    slots = [AuthorSlot(1, lead.organization_id, lead.id)]
    used = {lead.id}
    for position in range(2, size + 1):
        slot = _draw_coauthor(rng, config, position, lead, pool, fields, all_publishers, by_id, used)
        slots.append(slot)
    if len(slots) >= 2 and rng.random() < config.same_org_first_last_share:
        last = slots[-1]
        slots[-1] = AuthorSlot(last.position, slots[0].organization_id, last.researcher_id)
    return slots


def _draw_coauthor(rng, config, position, lead, pool, fields, all_publishers, by_id, used):
    if rng.random() < config.external_coauthor_share:
        return AuthorSlot(position, f"X{rng.randint(1, 99):02d}", None)
    candidates = pool
    if config.cross_discipline_coauthor_share and rng.random() < config.cross_discipline_coauthor_share:
        other_fields = [f for f in fields if f != lead.field_id]
        if other_fields:
            other_field = rng.choice(other_fields)
            candidates = all_publishers[other_field] or pool
    for _ in range(4):  # a few tries to avoid duplicate co-authors, else external
        rid = rng.choice(candidates)
        if rid not in used:
            used.add(rid)
            return AuthorSlot(position, by_id[rid].organization_id, rid)
    return AuthorSlot(position, f"X{rng.randint(1, 99):02d}", None)


def _draw_citations(rng, config, params, lead, stars) -> int:
    boost = 1.0
    if lead.id in stars and config.hca_propensity_boost > 1.0:
        rank_weight = config.rank_boost_weights.get(lead.rank, 1.0)
        boost = 1.0 + (config.hca_propensity_boost - 1.0) * rank_weight
    if params["family"] == "lognormal":
        value = boost * math.exp(rng.gauss(params["mu"], params["sigma"]))
        return max(0, round(value))
    lam = rng.gammavariate(params["r"], boost * params["mean"] / params["r"])
    return _poisson(rng, lam)


def _poisson(rng, lam: float) -> int:
    if lam <= 0:
        return 0
    if lam < 30:
        threshold = math.exp(-lam)
        k = 0
        p = 1.0
        while True:
            p *= rng.random()
            if p <= threshold:
                return k
            k += 1
    return max(0, round(rng.gauss(lam, math.sqrt(lam))))


def _make_citations_distinct(publications: list[Publication]) -> list[Publication]:
    """Bump tied citation counts so every (year, category) group is duplicate-free."""
    groups: dict[tuple[int, str], list[int]] = {}
    for i, pub in enumerate(publications):
        groups.setdefault((pub.year, pub.subject_categories[0]), []).append(i)
    out = list(publications)
    for key in sorted(groups):
        indices = sorted(groups[key], key=lambda i: (publications[i].citations, publications[i].id))
        prev = -1
        for i in indices:
            pub = out[i]
            citations = pub.citations if pub.citations > prev else prev + 1
            if citations != pub.citations:
                pub = Publication(pub.id, pub.year, citations, pub.subject_categories, pub.byline)
                out[i] = pub
            prev = citations
    return out
