# src/shared/bundles.py

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Dict, Literal, Optional

from src.shared.errors import BundleError
from src.shared.settings import DEFAULT_BUNDLE_DIR

BundleKind = Literal["op", "alpha0", "diffop", "eigen", "weight"]


def bundle_path(name: str, kind: BundleKind, bundle_dir: Optional[Path] = None) -> Path:
    """
    Path of a bundled file, e.g. bundle_path("example1", "diffop")
    -> evaluation/bundles/example1.diffop.json
    """
    base = Path(bundle_dir) if bundle_dir is not None else DEFAULT_BUNDLE_DIR
    path = base / f"{name}.{kind}.json"
    if not path.is_file():
        raise BundleError(f"no bundled {kind} file for {name!r} in {base}")
    return path


@lru_cache(maxsize=None)
def _index(bundle_dir: str) -> Dict[str, Dict[str, Path]]:
    """Bundle names and the kinds available for each (cached per directory)."""
    found: Dict[str, Dict[str, Path]] = {}
    for path in sorted(Path(bundle_dir).glob("*.json")):
        parts = path.name.split(".")
        if len(parts) != 3:
            continue
        name, kind, _ = parts
        found.setdefault(name, {})[kind] = path
    return found


def list_bundles(bundle_dir: Optional[Path] = None) -> Dict[str, Dict[str, Path]]:
    base = Path(bundle_dir) if bundle_dir is not None else DEFAULT_BUNDLE_DIR
    return _index(str(base.resolve()))
