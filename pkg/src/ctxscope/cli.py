"""ctxscope command line: gen / build / serve."""

import sys
from pathlib import Path

import click

from .bundle import BuildConfig, build_bundle, load_bundle, serialize_bundle, validate_bundle
from .corpus import GenConfig, generate_corpus, load_corpus, serialize_corpus
from .errors import CtxScopeError


@click.group()
def main():
    """Context visualization engine for a synthetic enterprise corpus."""


@main.command()
@click.option("--seed", type=int, required=True, help="Generator seed (64-bit).")
@click.option("--employees", type=int, default=1000, show_default=True)
@click.option("--items", type=int, default=10000, show_default=True)
@click.option("--dup-rate", type=float, default=0.01, show_default=True,
              help="Fraction of employees renamed to an existing name.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
def gen(seed: int, employees: int, items: int, dup_rate: float, out: Path):
    """Generate a synthetic corpus file."""
    try:
        config = GenConfig(seed=seed, n_employees=employees, n_items=items, duplicate_name_rate=dup_rate)
        corpus = generate_corpus(config)
    except CtxScopeError as exc:
        raise click.ClickException(str(exc))
    out.write_bytes(serialize_corpus(corpus))
    click.echo(f"wrote {employees} employees, {items} items to {out}")


@main.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--k", type=int, default=7, show_default=True, help="Number of topics.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--embed-dim", type=int, default=256, show_default=True)
@click.option("--min-cluster-size", type=int, default=5, show_default=True)
@click.option("--min-samples", type=int, default=5, show_default=True)
def build(corpus_path: Path, out: Path, k: int, seed: int, embed_dim: int,
          min_cluster_size: int, min_samples: int):
    """Build the model bundle (topics, projections, subtopics, layout)."""
    try:
        corpus = load_corpus(corpus_path.read_bytes())
        config = BuildConfig(
            k=k, seed=seed, embed_dim=embed_dim,
            min_cluster_size=min_cluster_size, min_samples=min_samples,
        )
        bundle = build_bundle(corpus, config)
    except CtxScopeError as exc:
        raise click.ClickException(str(exc))
    # Serialize fully before touching the output path: no partial bundles.
    data = serialize_bundle(bundle)
    out.write_bytes(data)
    click.echo(f"built bundle with {len(bundle.topics)} topics, "
               f"{len(bundle.subtopics)} subtopics -> {out}")


@main.command()
@click.option("--bundle", "bundle_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--port", type=int, default=8040, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--provider", type=click.Choice(["stub", "remote"]), default="stub", show_default=True,
              help="Chat response provider.")
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, help="Serve a built web client directory at /.")
def serve(bundle_path: Path, corpus_path: Path, port: int, host: str, provider: str,
          ui_dir: Path | None):
    """Serve the HTTP API (and optionally the web client) over a built bundle."""
    import uvicorn

    from .chat import stub_respond
    from .server import create_app

    try:
        corpus = load_corpus(corpus_path.read_bytes())
        bundle = load_bundle(bundle_path.read_bytes())
        validate_bundle(bundle, corpus)
    except CtxScopeError as exc:
        raise click.ClickException(str(exc))
    if provider == "remote":
        from .remote import RemoteResponder

        responder = RemoteResponder()
    else:
        responder = stub_respond
    app = create_app(bundle, corpus, responder=responder)
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    click.echo(f"serving on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    sys.exit(main())
