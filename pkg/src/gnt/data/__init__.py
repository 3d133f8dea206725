"""Bundled demonstration data: manifests and small non-canonical lexicons.

The adjective dictionaries shipped here exist to exercise the pipeline and
the documented examples; they are illustrative, not authoritative. Real
evaluations should supply their own manifest and lexicon directory.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    """Filesystem path of a bundled data file or directory."""
    root = resources.files(__package__)
    target = root.joinpath("/".join(parts)) if parts else root
    return Path(str(target))


def demo_manifest_path() -> Path:
    return data_path("manifests", "demo.json")


def full_scale_manifest_path() -> Path:
    return data_path("manifests", "full_scale.json")


def lexicon_dir() -> Path:
    return data_path("lexicons")
