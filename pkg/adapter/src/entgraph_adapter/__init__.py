"""External-tool adapter: wraps parser, typer and translation services to
produce the annotation and evaluation files the entgraph pipeline consumes."""

__version__ = "0.1.0"
