import pytest

from sciperf.corpus import AuthorSlot, Publication, Researcher, make_corpus

WINDOW = (2004, 2008)


def researcher(rid, field_id="F1", discipline_id="D1", rank="assistant", active_years=5, org="U1"):
    return Researcher(rid, field_id, discipline_id, rank, active_years, org)


def publication(pid, citations, authors, year=2005, categories=("CA",), orgs=None):
    """Build a publication; ``authors`` mixes researcher ids and None for externals."""
    byline = []
    for i, rid in enumerate(authors, start=1):
        org = (orgs or {}).get(i, f"U{i}") if rid is None else (orgs or {}).get(i, "U1")
        byline.append(AuthorSlot(i, org, rid))
    return Publication(pid, year, citations, tuple(categories), tuple(byline))


@pytest.fixture
def hand_corpus():
    """One researcher, three contributing publications, hand-checkable FSS.

    R1 (active 4 years) has a half-share publication with unit normalized
    impact, an uncited solo publication, and a third-share publication with
    normalized impact 3; filler externally-authored publications pin the
    baseline of the third category at 3.0.  FSS(R1) = (0.5 + 0 + 1) / 4.
    """
    r1 = researcher("R1", active_years=4)
    pubs = [
        publication("P1", 4, ["R1", None], categories=("CA",)),
        publication("P2", 0, ["R1"], categories=("CB",)),
        publication("P3", 9, ["R1", None, None], categories=("CC",)),
        publication("P4", 1, [None], categories=("CC",)),
        publication("P5", 1, [None], categories=("CC",)),
        publication("P6", 1, [None], categories=("CC",)),
    ]
    return make_corpus([r1], pubs, WINDOW)
