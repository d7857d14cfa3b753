"""Command-line driver exposing every pipeline phase.

All commands operate on a state directory (--state, or the UKG_STATE env
var, default ./ukg-state) holding one JSON-lines archive.  --json switches
stdout to machine-readable output.  Exit codes: 0 ok, 1 usage, 2 data or
integrity error, 3 fixpoint guard tripped.
"""

from __future__ import annotations

import json
import os
import sys

import click
from filelock import FileLock

from . import store
from .errors import NonTerminationError, ParseError, UKGError
from .model import TriplePattern, UKGraph
from .pipeline import (
    FusionConfig,
    apply_declarations,
    associate,
    capture,
    decompose,
    establish,
    propagate_feedback,
    test_hypothesis,
)
from .pipeline import make_hypothesis as _make_hypothesis

STATE_FILE = "state.jsonl"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_GUARD = 3


class CliState:
    def __init__(self, state_dir: str, as_json: bool):
        self.state_dir = state_dir
        self.as_json = as_json

    @property
    def state_path(self) -> str:
        return os.path.join(self.state_dir, STATE_FILE)

    def lock(self) -> FileLock:
        return FileLock(os.path.join(self.state_dir, ".lock"))

    def load(self):
        if not os.path.exists(self.state_path):
            raise ParseError(f"no state at {self.state_path}; run `ukg init` first")
        return store.load(self.state_path)

    def save(self, graph, config):
        store.save(graph, config, self.state_path)

    def emit(self, payload: dict, human: str) -> None:
        if self.as_json:
            click.echo(json.dumps(payload, sort_keys=True))
        else:
            click.echo(human)


def _triple_dict(t) -> dict:
    rec = {"id": t.id, "kind": t.kind, "s": t.subject, "p": t.predicate,
           "o": t.object, "certainty": t.certainty,
           "provenance": sorted(t.provenance)}
    if t.source is not None:
        rec["source"] = t.source
    return rec


def _verdict_dict(v) -> dict:
    return {
        "verdict_id": v.id, "hypothesis_id": v.hypothesis_id, "status": v.status,
        "score": v.score, "theta": v.theta,
        "bindings": [{"assignments": b.assignments, "score": b.score,
                      "triples": list(b.triple_ids)} for b in v.bindings],
        "supporting": list(v.supporting), "contradicting": list(v.contradicting),
        "propagated": v.propagated,
    }


@click.group()
@click.option("--state", envvar="UKG_STATE", default="./ukg-state",
              help="State directory (env: UKG_STATE).")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def cli(ctx, state, as_json):
    """Fuse uncertain statements into factoids and facts, and test hypotheses."""
    ctx.obj = CliState(state, as_json)


@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="Fusion config JSON (aggregators, pi, tau, predicates, taxonomies...).")
@click.pass_obj
def init(st: CliState, config_path):
    """Create a fresh state directory."""
    os.makedirs(st.state_dir, exist_ok=True)
    config = FusionConfig()
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                config = FusionConfig.from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid config file {config_path}: {exc}") from exc
    graph = UKGraph()
    apply_declarations(graph, config)
    with st.lock():
        st.save(graph, config)
    st.emit({"state": st.state_dir, "predicates": sorted(graph.predicates),
             "taxonomies": sorted(graph.taxonomies)},
            f"initialized {st.state_dir}")


@cli.group()
def source():
    """Manage registered sources."""


@source.command("add")
@click.option("--name", required=True)
@click.option("--reliability", required=True, type=float)
@click.option("--category", default="")
@click.option("--id", "source_id", default=None, help="Explicit id (default: generated).")
@click.pass_obj
def source_add(st: CliState, name, reliability, category, source_id):
    """Register a source with its reliability."""
    with st.lock():
        graph, config = st.load()
        src = graph.add_source(name, reliability, category=category, id=source_id)
        st.save(graph, config)
    st.emit({"id": src.id, "name": src.name, "reliability": src.reliability,
             "category": src.category},
            f"registered source {src.id} ({src.name}, reliability {src.reliability})")


@source.command("list")
@click.pass_obj
def source_list(st: CliState):
    """List sources and their current reliabilities."""
    graph, _ = st.load()
    rows = [{"id": s.id, "name": s.name, "reliability": s.reliability,
             "category": s.category} for s in
            sorted(graph.sources.values(), key=lambda s: s.id)]
    st.emit({"sources": rows},
            "\n".join(f"{r['id']:8s} {r['reliability']:.4f}  {r['name']}" for r in rows)
            or "no sources")


@cli.command("capture")
@click.option("--source", "source_id", required=True)
@click.option("--file", "path", required=True, type=click.Path(exists=True))
@click.pass_obj
def capture_cmd(st: CliState, source_id, path):
    """Capture a mention file for one source."""
    with st.lock():
        graph, config = st.load()
        statements = store.import_mentions(graph, path, source_id)
        mentions = capture(graph, source_id, statements, config)
        st.save(graph, config)
    st.emit({"source": source_id, "mentions": [m.id for m in mentions]},
            f"captured {len(mentions)} mentions from {source_id}")


@cli.command("associate")
@click.pass_obj
def associate_cmd(st: CliState):
    """Resolve entities and chain the composition rules to a fixpoint."""
    with st.lock():
        graph, config = st.load()
        report = associate(graph, config)
        st.save(graph, config)
    st.emit({"new_factoids": report.new_factoids, "revised": report.revised,
             "merges": report.merges, "iterations": report.iterations},
            f"{len(report.new_factoids)} new factoids, {len(report.revised)} revised, "
            f"{len(report.merges)} entity merges")


@cli.command("establish")
@click.pass_obj
def establish_cmd(st: CliState):
    """Promote/demote against the fact threshold and print the fact set."""
    with st.lock():
        graph, config = st.load()
        report = establish(graph, config)
        facts = [_triple_dict(t) for t in
                 sorted(graph.facts(), key=lambda t: t.id)]
        st.save(graph, config)
    st.emit({"promoted": sorted(report.promoted + report.mention_facts),
             "demoted": sorted(report.demoted), "facts": facts},
            "\n".join(f"fact {f['id']}: ({f['s']}, {f['p']}, {f['o']}) @ {f['certainty']:.4f}"
                      for f in facts) or "no facts")


@cli.command("test")
@click.option("--hypothesis-file", "path", required=True, type=click.Path(exists=True))
@click.pass_obj
def test_cmd(st: CliState, path):
    """Test a hypothesis file against the fused graph."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid hypothesis file {path}: {exc}") from exc
    with st.lock():
        graph, config = st.load()
        patterns = [(p["s"], p["p"], p["o"]) for p in data.get("patterns", ())]
        hyp = _make_hypothesis(graph, patterns,
                               theta=data.get("theta", config.theta),
                               id=data.get("id"))
        verdict = test_hypothesis(graph, hyp, config)
        st.save(graph, config)
    payload = _verdict_dict(verdict)
    st.emit(payload,
            f"verdict {verdict.id}: {verdict.status}"
            + (f" (score {verdict.score:.4f})" if verdict.score is not None else ""))


@cli.command("propagate")
@click.option("--verdict-id", required=True)
@click.pass_obj
def propagate_cmd(st: CliState, verdict_id):
    """Propagate a verdict back into source reliabilities."""
    with st.lock():
        graph, config = st.load()
        report = propagate_feedback(graph, verdict_id, config)
        st.save(graph, config)
    changes = [{"source": c.source_id, "before": c.before, "after": c.after}
               for c in report.reliability_changes]
    st.emit({"verdict_id": report.verdict_id, "direction": report.direction,
             "reliability_changes": changes, "demoted_facts": report.demoted_facts},
            "\n".join(f"{c['source']}: {c['before']:.4f} -> {c['after']:.4f}"
                      for c in changes)
            + (f"\n{len(report.demoted_facts)} facts demoted"
               if report.demoted_facts else ""))


def _parse_pattern(pattern: str):
    parts = pattern.split()
    if len(parts) != 3:
        raise click.UsageError("--pattern expects 'SUBJECT PREDICATE OBJECT' "
                               "(use ? or ?name as wildcard)")
    def term(tok):
        if tok == "?":
            return None
        if tok.lstrip("-").isdigit():
            return int(tok)
        return tok
    return [term(p) for p in parts]


@cli.command("query")
@click.option("--pattern", required=True,
              help="'SUBJECT PREDICATE OBJECT', ? or ?name as wildcard.")
@click.option("--kind", type=click.Choice(["mention", "factoid", "fact"]), default=None)
@click.pass_obj
def query_cmd(st: CliState, pattern, kind):
    """List triples matching a pattern."""
    graph, _ = st.load()
    s, p, o = _parse_pattern(pattern)
    rows = []
    for t in sorted(graph.triples.values(), key=lambda t: t.id):
        if kind and t.kind != kind:
            continue
        if s is not None and not TriplePattern.is_var(s) and t.subject != s:
            continue
        if p is not None and not TriplePattern.is_var(p) and t.predicate != p:
            continue
        if o is not None and not TriplePattern.is_var(o) and t.object != o:
            continue
        rows.append(_triple_dict(t))
    st.emit({"triples": rows},
            "\n".join(f"{r['id']} {r['kind']:8s} ({r['s']}, {r['p']}, {r['o']}) "
                      f"@ {r['certainty']:.4f}" for r in rows) or "no matches")


def _render_tree(node, depth=0) -> list[str]:
    src = f" [source {node.source}]" if node.source else ""
    lines = [f"{'  ' * depth}{node.triple_id} {node.kind} "
             f"({node.subject}, {node.predicate}, {node.object}) "
             f"@ {node.certainty:.4f}{src}"]
    for child in node.children:
        lines.extend(_render_tree(child, depth + 1))
    return lines


@cli.command("explain")
@click.option("--triple-id", required=True)
@click.pass_obj
def explain_cmd(st: CliState, triple_id):
    """Decompose a triple into the constituents it was derived from."""
    graph, _ = st.load()
    tree = decompose(graph, triple_id)
    st.emit(tree.to_dict(), "\n".join(_render_tree(tree)))


@cli.command("export")
@click.option("--output", type=click.Path(), default=None,
              help="Write the archive here instead of stdout.")
@click.pass_obj
def export_cmd(st: CliState, output):
    """Dump the archive (JSON-lines) to stdout or a file."""
    graph, config = st.load()
    lines = [json.dumps(rec, sort_keys=True)
             for rec in store.graph_to_records(graph, config)]
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
        st.emit({"output": output, "records": len(lines)},
                f"wrote {len(lines)} records to {output}")
    else:
        click.echo(text, nl=False)


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except NonTerminationError as exc:
        click.echo(f"pipeline guard: {exc}", err=True)
        return EXIT_GUARD
    except UKGError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DATA
    except OSError as exc:
        click.echo(f"io error: {exc}", err=True)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
