"""Command-line interface.

Exit codes: 0 ok, 1 usage error, 2 data error, 3 oracle mismatch.
"""

from __future__ import annotations

import json
import sys

import click

from pagesearch.corpus import ingest_corpus, write_manifest
from pagesearch.errors import DataError, QueryError
from pagesearch.index import build_index, open_segment, write_segment
from pagesearch.oracle import oracle_check
from pagesearch.service import (SORT_NAMES, SearchEngine, ServiceConfig,
                                build_app, load_config)
from pagesearch.textprep import EMPTY_SYNONYMS, load_synonyms

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_MISMATCH = 3


@click.group()
def cli():
    """Full-text search over page-granular OCR corpora."""


@cli.command("build-index")
@click.option("--corpus", "corpus_path", required=True)
@click.option("--synonyms", "synonyms_path", default=None)
@click.option("--out", "out_dir", required=True)
def build_index_cmd(corpus_path, synonyms_path, out_dir):
    """Build a segment from a corpus manifest."""
    store = ingest_corpus(corpus_path)
    ix = build_index(store, synonyms_path)
    write_segment(ix, out_dir)
    s = ix.stats()
    click.echo(f"indexed {s.page_count} pages, {s.unique_terms} unique terms, "
               f"{s.total_postings_bytes} postings bytes -> {out_dir}")


@cli.command("search")
@click.option("--segment", "segment_dir", default=None)
@click.option("--config", "config_path", default=None)
@click.option("--query", required=True)
@click.option("--sort", default="relevance",
              type=click.Choice(sorted(SORT_NAMES)))
@click.option("--year-from", type=int, default=None)
@click.option("--year-to", type=int, default=None)
@click.option("--journal", "journals", multiple=True)
@click.option("--connectors", default=None,
              help="Comma-separated connector names; omit for local only.")
@click.option("--synonyms", "synonyms_path", default=None)
@click.option("--start", type=int, default=0)
@click.option("--rows", type=int, default=None)
def search_cmd(segment_dir, config_path, query, sort, year_from, year_to,
               journals, connectors, synonyms_path, start, rows):
    """Search a segment and print the /search JSON body."""
    config = load_config(config_path) if config_path else None
    if segment_dir is None:
        if config is None:
            raise click.UsageError("either --segment or --config is required")
        segment_dir = config.segment_dir
    if config is None:
        config = ServiceConfig(segment_dir=segment_dir,
                               synonyms_path=synonyms_path)
    elif synonyms_path:
        config.synonyms_path = synonyms_path
    engine = SearchEngine(open_segment(segment_dir), config)
    ast, sort_order, filters, selected = engine.parse_params(
        query, sort, year_from, year_to, list(journals), connectors)
    payload = engine.search(query, ast, sort_order, filters, selected,
                            max(0, start),
                            rows if rows is not None else config.default_rows)
    click.echo(json.dumps(payload, ensure_ascii=False, indent=2))


@cli.command("serve")
@click.option("--config", "config_path", required=True)
def serve_cmd(config_path):
    """Run the HTTP service."""
    import uvicorn

    config = load_config(config_path)
    host, _, port = config.listen_address.rpartition(":")
    app = build_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


@cli.command("stats")
@click.option("--segment", "segment_dir", required=True)
def stats_cmd(segment_dir):
    """Print index statistics as JSON."""
    s = open_segment(segment_dir).stats()
    click.echo(json.dumps({
        "unique_terms": s.unique_terms,
        "page_count": s.page_count,
        "article_count": s.article_count,
        "total_postings_bytes": s.total_postings_bytes,
    }, indent=2))


@cli.command("oracle-check")
@click.option("--segment", "segment_dir", required=True)
@click.option("--corpus", "corpus_path", required=True)
@click.option("--synonyms", "synonyms_path", default=None)
@click.option("--queries", "n_queries", type=int, default=100)
@click.option("--seed", type=int, default=0)
def oracle_check_cmd(segment_dir, corpus_path, synonyms_path, n_queries, seed):
    """Cross-check the index against a naive full-scan matcher."""
    ix = open_segment(segment_dir)
    store = ingest_corpus(corpus_path)
    synonyms = load_synonyms(synonyms_path) if synonyms_path else EMPTY_SYNONYMS
    mismatch = oracle_check(ix, store, n_queries, seed, synonyms)
    if mismatch is not None:
        click.echo(mismatch.describe(), err=True)
        sys.exit(EXIT_MISMATCH)
    click.echo(f"oracle-check ok: {n_queries} queries, seed {seed}")


@cli.command("dump-corpus")
@click.option("--corpus", "corpus_path", required=True)
@click.option("--out", "out_path", default="-")
def dump_corpus_cmd(corpus_path, out_path):
    """Round-trip a manifest through the corpus model (developer tool)."""
    store = ingest_corpus(corpus_path)
    if out_path == "-":
        import io
        buf = io.StringIO()
        _write_to(store, buf)
        click.echo(buf.getvalue(), nl=False)
    else:
        write_manifest(store, out_path)


def _write_to(store, buf):
    for r in store.records:
        buf.write(json.dumps({
            "page_id": r.page_id, "article_id": r.article_id,
            "journal": r.journal, "year": r.year, "month": r.month,
            "page_number": r.page_number, "kind": r.kind, "text": r.text,
        }, ensure_ascii=False, sort_keys=True))
        buf.write("\n")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except (DataError, QueryError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
