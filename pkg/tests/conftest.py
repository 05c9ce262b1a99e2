import pytest

from cookiesweep import dom
from cookiesweep.db import EnforcementDb
from cookiesweep.fixtures import load_corpus
from cookiesweep.fixtures.harness import analyze_corpus
from cookiesweep.fixtures.server import serve_driver
from cookiesweep.fixtures.sim import SimSession, SimSite


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_server(corpus):
    server = serve_driver(corpus)
    yield server
    server.shutdown()


@pytest.fixture(scope="session")
def corpus_results(corpus, corpus_server):
    """One full pipeline pass over the packaged corpus, shared by every test
    that needs records or probed models."""
    import time

    db = EnforcementDb()
    started = time.monotonic()
    records, models = analyze_corpus(
        corpus, db=db, server=corpus_server, keep_models=True
    )
    elapsed = time.monotonic() - started
    return {"records": records, "models": models, "db": db, "elapsed_s": elapsed}


def make_sim(body, domain="unit.test", **site_extra):
    """Standalone simulator session navigated to an inline page script."""
    site = SimSite({"domain": domain, "body": body, **site_extra})
    session = SimSession({domain: site})
    session.navigate(f"http://{domain}/")
    return session


def sim_page(body, **site_extra):
    """(annotated PageSnapshot, SimSession) for an inline page script."""
    session = make_sim(body, **site_extra)
    page = dom.PageSnapshot.from_json(session.snapshot())
    return dom.annotate_selectors(page), session
