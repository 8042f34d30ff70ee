"""JSON/JSONL formats for samples and hypotheses."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import ParameterError
from .base import LabeledSample, SampleKind
from .expr import Connective, ExprNode, HypothesisExpr, Literal, Triangle
from .halfplane import GeneralHalfplane, Halfplane


def write_sample_jsonl(
    sample: LabeledSample,
    path: Path,
    metadata: dict[str, Any] | None = None,
) -> Path:
    """Write a sample as a header line followed by one example per line.

    Args:
        sample: Sample to write
        path: Destination file
        metadata: Optional provenance block stored in the header

    Returns:
        The path written
    """
    header: dict[str, Any] = {"kind": sample.kind.value, "d": sample.d}
    if metadata is not None:
        header["metadata"] = metadata

    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(header, sort_keys=True) + "\n")
        for point, label in zip(sample.points.tolist(), sample.labels.tolist()):
            if sample.kind is SampleKind.GRID:
                row = {"x": point[0], "y": point[1], "label": label}
            else:
                row = {"bits": "".join(str(bit) for bit in point), "label": label}
            f.write(json.dumps(row) + "\n")
    return path


def read_sample_jsonl(path: Path) -> LabeledSample:
    """Read a sample written by :func:`write_sample_jsonl`."""
    with open(path, encoding="utf-8") as f:
        lines = [line for line in f if line.strip()]
    if not lines:
        raise ParameterError(f"{path}: empty sample file")

    try:
        header = json.loads(lines[0])
        kind = SampleKind(header["kind"])
        d = int(header["d"])
    except (json.JSONDecodeError, KeyError, ValueError) as e:
        raise ParameterError(f"{path}: malformed header line ({e})") from e

    points: list[list[int]] = []
    labels: list[int] = []
    for number, line in enumerate(lines[1:], start=2):
        try:
            row = json.loads(line)
            if kind is SampleKind.GRID:
                points.append([int(row["x"]), int(row["y"])])
            else:
                points.append([int(ch) for ch in row["bits"]])
            labels.append(int(row["label"]))
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as e:
            raise ParameterError(f"{path}:{number}: malformed example ({e})") from e

    width = 2 if kind is SampleKind.GRID else d
    return LabeledSample(
        np.asarray(points, dtype=np.int64).reshape(-1, width),
        np.asarray(labels, dtype=np.int64),
        kind,
        d,
    )


def read_sample_metadata(path: Path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as f:
        header = json.loads(f.readline())
    return header.get("metadata", {})


def _fraction(pair: list[int]) -> Fraction:
    numerator, denominator = pair
    return Fraction(int(numerator), int(denominator))


def hypothesis_to_dict(expr: HypothesisExpr) -> dict[str, Any]:
    """Serialise a hypothesis tree; rationals become [numerator, denominator]."""
    return expr.to_dict()


def hypothesis_from_dict(data: dict[str, Any]) -> HypothesisExpr:
    kind = data.get("type")
    if kind in ("and", "or"):
        children = tuple(hypothesis_from_dict(child) for child in data.get("children", []))
        return ExprNode(Connective(kind), children)
    if kind == "literal":
        return Literal(int(data["index"]), bool(data["negated"]))
    if kind == "halfplane":
        return Halfplane(_fraction(data["a_hat"]), _fraction(data["b"]), int(data["d"]))
    if kind == "triangle":
        halfplanes = tuple(hypothesis_from_dict(h) for h in data["halfplanes"])
        return Triangle(halfplanes)  # type: ignore[arg-type]
    if kind == "general_halfplane":
        return GeneralHalfplane(
            _fraction(data["a"]), _fraction(data["b"]), _fraction(data["c"])
        )
    raise ParameterError(f"unknown hypothesis node type {kind!r}")


def write_hypothesis_json(
    expr: HypothesisExpr,
    path: Path,
    metadata: dict[str, Any] | None = None,
) -> Path:
    payload: dict[str, Any] = {"hypothesis": hypothesis_to_dict(expr)}
    if metadata is not None:
        payload["metadata"] = metadata
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
    return path


def read_hypothesis_json(path: Path) -> HypothesisExpr:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    return hypothesis_from_dict(payload["hypothesis"] if "hypothesis" in payload else payload)
