"""Entry point for running fracwalk as a module."""

from fracwalk.cli import app

if __name__ == "__main__":
    app()
