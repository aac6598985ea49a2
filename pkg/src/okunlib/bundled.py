"""Access to the bundled per-country snapshot manifests.

The package ships frozen CSV snapshots under ``okunlib/data/<country>/``
so every pipeline stage can run offline. See the repository README for
how these fixtures were produced.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .dataio import Manifest, load_manifest
from .errors import DataIOError


def _data_root() -> Path:
    root = resources.files("okunlib") / "data"
    return Path(str(root))


def bundled_countries() -> list[str]:
    """Country keys with a bundled manifest, sorted."""
    root = _data_root()
    if not root.is_dir():
        return []
    return sorted(
        p.name for p in root.iterdir() if (p / "manifest.json").is_file()
    )


def bundled_manifest_path(country: str) -> Path:
    path = _data_root() / country.lower() / "manifest.json"
    if not path.is_file():
        raise DataIOError(
            f"no bundled manifest for {country!r}; "
            f"available: {bundled_countries()}"
        )
    return path


def bundled_manifest(country: str) -> Manifest:
    return load_manifest(bundled_manifest_path(country))
