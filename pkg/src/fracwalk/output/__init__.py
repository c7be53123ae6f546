"""Table output and run manifests."""

from fracwalk.output.manifest import load_manifest, manifest_path, write_manifest
from fracwalk.output.writer import TableWriter, digest, format_value, read_table

__all__ = [
    "TableWriter",
    "digest",
    "format_value",
    "read_table",
    "load_manifest",
    "manifest_path",
    "write_manifest",
]
