"""Entry point for running symlab as a module with python -m symlab."""

from __future__ import annotations

from symlab.cli import cli

if __name__ == "__main__":
    cli()
