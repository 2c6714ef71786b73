"""Reader for the JSON-lines datasets written by ``gridadapt export-gdl``.

This is the consumer side used by training harnesses; it depends only on the
standard library and numpy so it also works without the compiled module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

SCHEMA = "gridadapt.gdl"
SCHEMA_VERSION = 1


@dataclass
class GdlRecord:
    id: str
    label: Optional[int]
    features: str
    pos: np.ndarray        # (N, 2) node positions
    edge_index: np.ndarray  # (2, E), the usual graph-learning layout
    x: np.ndarray          # (N, feature_dim)
    edge_attr: Optional[np.ndarray]  # (E, 1) edge saliency, when exported

    @property
    def num_nodes(self) -> int:
        return self.pos.shape[0]

    @property
    def num_edges(self) -> int:
        return self.edge_index.shape[1]


def parse_record(doc: dict) -> GdlRecord:
    if doc.get("schema") != SCHEMA or doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("not a gridadapt.gdl version 1 record")
    pos = np.asarray(doc["nodes"], dtype=np.float64).reshape(-1, 2)
    edges = np.asarray(doc["edges"], dtype=np.int64).reshape(-1, 2)
    x = np.asarray(doc["x"], dtype=np.float64).reshape(len(pos), doc["feature_dim"])
    attr = doc.get("edge_attr")
    edge_attr = None if attr is None else np.asarray(attr, dtype=np.float64).reshape(-1, 1)
    if edges.size and edges.max() >= len(pos):
        raise ValueError("edge references a missing node")
    if edge_attr is not None and len(edge_attr) != len(edges):
        raise ValueError("edge_attr needs one row per edge")
    return GdlRecord(doc["id"], doc["label"], doc["features"], pos, edges.T.copy(), x, edge_attr)


def iter_jsonl(path: str | Path) -> Iterator[GdlRecord]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield parse_record(json.loads(line))
            except (ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc


def read_jsonl(path: str | Path) -> list[GdlRecord]:
    return list(iter_jsonl(path))
