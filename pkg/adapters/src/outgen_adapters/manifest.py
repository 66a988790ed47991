"""Adapter manifests: which tool produced an interchange file, and how."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class AdapterManifest:
    """Emitted alongside every output file; counts match the file."""

    tool: str
    version: str
    parameters: dict = field(default_factory=dict)
    input_path: str = ""
    output_path: str = ""
    record_count: int = 0


def manifest_path(output_path) -> Path:
    return Path(str(output_path) + ".manifest.json")


def write_manifest(manifest: AdapterManifest) -> Path:
    path = manifest_path(manifest.output_path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(asdict(manifest), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    return path


def read_manifest(output_path) -> AdapterManifest:
    with open(manifest_path(output_path), encoding="utf-8") as fh:
        return AdapterManifest(**json.load(fh))
