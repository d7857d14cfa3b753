"""HTTP facade over the pipeline for interactive clients.

Every response is wrapped in {"version": n, "data": ...} where the version
counter increments by exactly one per applied mutation; clients can detect
stale views by comparing versions.  Mutations are funneled through a single
writer lock and may carry ?expected_version= to fail fast (409) on stale
state.  Reads never mutate.
"""

from __future__ import annotations

import argparse
import logging
import os
import threading

import uvicorn
from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from filelock import FileLock

from . import store
from .errors import (
    CredibilityRangeError,
    DomainMismatchError,
    IntegrityError,
    InvariantViolationError,
    NonTerminationError,
    ParseError,
    UKGError,
    UnknownIdError,
    VerdictNotActionableError,
)
from .model import Statement, UKGraph
from .pipeline import (
    FusionConfig,
    apply_declarations,
    associate,
    capture,
    decompose,
    establish,
    make_hypothesis,
    propagate_feedback,
    test_hypothesis,
)

logger = logging.getLogger(__name__)

STATE_FILE = "state.jsonl"


def _triple_dict(t) -> dict:
    rec = {"id": t.id, "kind": t.kind, "s": t.subject, "p": t.predicate,
           "o": t.object, "certainty": t.certainty,
           "provenance": sorted(t.provenance)}
    if t.source is not None:
        rec["source"] = t.source
    return rec


def _source_dict(s) -> dict:
    return {"id": s.id, "name": s.name, "reliability": s.reliability,
            "category": s.category}


def _verdict_dict(v) -> dict:
    return {
        "verdict_id": v.id, "hypothesis_id": v.hypothesis_id, "status": v.status,
        "score": v.score, "theta": v.theta,
        "bindings": [{"assignments": b.assignments, "score": b.score,
                      "triples": list(b.triple_ids)} for b in v.bindings],
        "supporting": list(v.supporting), "contradicting": list(v.contradicting),
        "propagated": v.propagated,
    }


class ApiSession:
    """One state directory bound to a version counter and a writer lock."""

    def __init__(self, state_dir: str):
        self.state_dir = state_dir
        self.state_path = os.path.join(state_dir, STATE_FILE)
        self.lock = threading.Lock()
        self.dir_lock = FileLock(os.path.join(state_dir, ".lock"))
        self.version = 0
        if os.path.exists(self.state_path):
            self.graph, self.config = store.load(self.state_path)
        else:
            os.makedirs(state_dir, exist_ok=True)
            self.graph, self.config = UKGraph(), FusionConfig()
            apply_declarations(self.graph, self.config)
            with self.dir_lock:
                store.save(self.graph, self.config, self.state_path)

    def envelope(self, data) -> dict:
        return {"version": self.version, "data": data}

    def mutate(self, fn, expected_version: int | None = None):
        with self.lock:
            if expected_version is not None and expected_version != self.version:
                raise HTTPException(
                    status_code=409,
                    detail=f"stale mutation: expected version {expected_version}, "
                           f"state is at {self.version}")
            result = fn()
            with self.dir_lock:
                store.save(self.graph, self.config, self.state_path)
            self.version += 1
            return self.envelope(result)


def _field(container: dict, key: str, where: str = "body"):
    try:
        return container[key]
    except (KeyError, TypeError):
        raise HTTPException(status_code=400,
                            detail=f"missing field {key!r} in {where}") from None


def _http_error(exc: UKGError) -> HTTPException:
    if isinstance(exc, UnknownIdError):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, (IntegrityError, InvariantViolationError, DomainMismatchError)):
        return HTTPException(status_code=422, detail=str(exc))
    if isinstance(exc, (ParseError, CredibilityRangeError, VerdictNotActionableError,
                        NonTerminationError)):
        return HTTPException(status_code=400, detail=str(exc))
    return HTTPException(status_code=400, detail=str(exc))


def create_app(state_dir: str, frontend_dir: str | None = None) -> FastAPI:
    session = ApiSession(state_dir)
    app = FastAPI(title="ukgfuse service", version="0.1.0")
    app.state.session = session
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(UKGError)
    async def _ukg_error_handler(request, exc: UKGError):
        http = _http_error(exc)
        return JSONResponse(status_code=http.status_code,
                            content={"detail": http.detail})

    @app.get("/sources")
    def list_sources():
        rows = [_source_dict(s) for s in
                sorted(session.graph.sources.values(), key=lambda s: s.id)]
        return session.envelope(rows)

    @app.post("/sources", status_code=201)
    def add_source(body: dict = Body(...),
                   expected_version: int | None = Query(default=None)):
        def run():
            src = session.graph.add_source(
                _field(body, "name"), _field(body, "reliability"),
                category=body.get("category", ""), id=body.get("id"))
            return _source_dict(src)
        return session.mutate(run, expected_version)

    @app.post("/capture")
    def capture_endpoint(body: dict = Body(...),
                         expected_version: int | None = Query(default=None)):
        def run():
            statements = [
                Statement(subject=_field(s, "s", "statement"),
                          predicate=_field(s, "p", "statement"),
                          object=_field(s, "o", "statement"),
                          credibility=_field(s, "credibility", "statement"))
                for s in body.get("statements", ())
            ]
            source_id = _field(body, "source_id")
            mentions = capture(session.graph, source_id, statements,
                               session.config)
            return {"source": source_id,
                    "mentions": [m.id for m in mentions]}
        return session.mutate(run, expected_version)

    @app.post("/associate")
    def associate_endpoint(expected_version: int | None = Query(default=None)):
        def run():
            report = associate(session.graph, session.config)
            return {"new_factoids": report.new_factoids, "revised": report.revised,
                    "merges": report.merges, "iterations": report.iterations}
        return session.mutate(run, expected_version)

    @app.post("/establish")
    def establish_endpoint(expected_version: int | None = Query(default=None)):
        def run():
            report = establish(session.graph, session.config)
            facts = [_triple_dict(t) for t in
                     sorted(session.graph.facts(), key=lambda t: t.id)]
            return {"promoted": sorted(report.promoted + report.mention_facts),
                    "demoted": sorted(report.demoted), "facts": facts}
        return session.mutate(run, expected_version)

    @app.get("/triples")
    def list_triples(kind: str | None = None, subject: str | None = None,
                     limit: int = Query(default=500, ge=1, le=10000),
                     offset: int = Query(default=0, ge=0)):
        rows = []
        for t in sorted(session.graph.triples.values(), key=lambda t: t.id):
            if kind and t.kind != kind:
                continue
            if subject and t.subject != subject:
                continue
            rows.append(_triple_dict(t))
        return session.envelope({"total": len(rows),
                                 "triples": rows[offset:offset + limit]})

    @app.get("/triples/{triple_id}/provenance")
    def provenance(triple_id: str):
        tree = decompose(session.graph, triple_id)
        return session.envelope(tree.to_dict())

    @app.post("/hypotheses", status_code=201)
    def add_hypothesis(body: dict = Body(...),
                       expected_version: int | None = Query(default=None)):
        def run():
            patterns = [(_field(p, "s", "pattern"), _field(p, "p", "pattern"),
                         _field(p, "o", "pattern"))
                        for p in body.get("patterns", ())]
            hyp = make_hypothesis(session.graph, patterns,
                                  theta=body.get("theta", session.config.theta),
                                  id=body.get("id"))
            return {"id": hyp.id, "theta": hyp.theta, "status": hyp.status,
                    "patterns": [{"s": p.subject, "p": p.predicate, "o": p.object}
                                 for p in hyp.patterns]}
        return session.mutate(run, expected_version)

    @app.post("/hypotheses/{hypothesis_id}/test")
    def test_endpoint(hypothesis_id: str,
                      expected_version: int | None = Query(default=None)):
        def run():
            verdict = test_hypothesis(session.graph, hypothesis_id, session.config)
            return _verdict_dict(verdict)
        return session.mutate(run, expected_version)

    @app.post("/verdicts/{verdict_id}/propagate")
    def propagate_endpoint(verdict_id: str,
                           expected_version: int | None = Query(default=None)):
        def run():
            verdict = session.graph.verdicts.get(verdict_id)
            if verdict is None:
                raise UnknownIdError(f"unknown verdict {verdict_id!r}")
            if verdict.propagated:
                raise HTTPException(status_code=409,
                                    detail=f"verdict {verdict_id} already propagated")
            report = propagate_feedback(session.graph, verdict, session.config)
            return {
                "verdict_id": report.verdict_id, "direction": report.direction,
                "reliability_changes": [
                    {"source": c.source_id, "before": c.before, "after": c.after,
                     "delta": c.after - c.before}
                    for c in report.reliability_changes],
                "demoted_facts": report.demoted_facts,
            }
        return session.mutate(run, expected_version)

    @app.get("/audit")
    def audit_endpoint(limit: int = Query(default=500, ge=1, le=10000),
                       offset: int = Query(default=0, ge=0)):
        entries = [{"seq": e.seq, "action": e.action, "details": e.details}
                   for e in session.graph.audit]
        return session.envelope({"total": len(entries),
                                 "entries": entries[offset:offset + limit]})

    if frontend_dir and os.path.isdir(frontend_dir):
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="workbench")

    return app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Serve the fusion pipeline over HTTP.")
    parser.add_argument("--state", default=os.environ.get("UKG_STATE", "./ukg-state"))
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8023)
    parser.add_argument("--frontend", default=None,
                        help="Static workbench directory to serve at /")
    args = parser.parse_args(argv)
    app = create_app(args.state, frontend_dir=args.frontend)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
