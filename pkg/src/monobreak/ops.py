"""Operational data: per-endpoint request counts and the models they touched."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .errors import OpsError
from .paths import ModulePath
from .scanner import Kind, ProjectFacts


@dataclass(frozen=True)
class OperationalRecord:
    view: ModulePath
    method: str
    calls: int
    models: frozenset[ModulePath]


@dataclass
class OperationalDataset:
    records: list[OperationalRecord] = field(default_factory=list)
    window: tuple[datetime, datetime] | None = None


def _parse_timestamp(value: object, where: str) -> datetime:
    if not isinstance(value, str):
        raise OpsError(f"{where}: timestamp must be a string")
    try:
        return datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError as exc:
        raise OpsError(f"{where}: invalid RFC3339 timestamp {value!r}") from exc


def _parse_path(value: object, where: str) -> ModulePath:
    if not isinstance(value, str):
        raise OpsError(f"{where}: expected a dotted path string")
    try:
        return ModulePath.parse(value)
    except ValueError as exc:
        raise OpsError(f"{where}: invalid dotted path {value!r}") from exc


def load_ops(path: str | Path) -> OperationalDataset:
    """Load and validate an ops-JSON file.

    Records sharing a (view, method) pair are merged by summing their call
    counts and taking the union of their model sets.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OpsError(f"cannot read ops file: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OpsError(f"{path}: not valid JSON ({exc})") from exc

    if not isinstance(data, dict):
        raise OpsError(f"{path}: top level must be an object")
    requests = data.get("requests")
    if not isinstance(requests, list):
        raise OpsError(f"{path}: missing or invalid 'requests' array")

    window = None
    if "window" in data and data["window"] is not None:
        raw = data["window"]
        if not isinstance(raw, dict) or set(raw) != {"start", "end"}:
            raise OpsError(f"{path}: window must have exactly 'start' and 'end'")
        window = (
            _parse_timestamp(raw["start"], "window.start"),
            _parse_timestamp(raw["end"], "window.end"),
        )

    merged: dict[tuple[ModulePath, str], tuple[int, set[ModulePath]]] = {}
    for index, raw in enumerate(requests):
        where = f"requests[{index}]"
        if not isinstance(raw, dict):
            raise OpsError(f"{where}: record must be an object")
        view = _parse_path(raw.get("view"), f"{where}.view")
        method = raw.get("method")
        if not isinstance(method, str) or not method.isidentifier():
            raise OpsError(f"{where}.method: must be an identifier")
        calls = raw.get("calls")
        if isinstance(calls, bool) or not isinstance(calls, int):
            raise OpsError(f"{where}.calls: must be an integer")
        if calls < 0:
            raise OpsError(f"{where}.calls: must be non-negative")
        raw_models = raw.get("models")
        if not isinstance(raw_models, list):
            raise OpsError(f"{where}.models: must be an array")
        models = {_parse_path(m, f"{where}.models") for m in raw_models}
        if calls > 0 and not models:
            raise OpsError(f"{where}: models must be non-empty when calls > 0")
        key = (view, method)
        if key in merged:
            prev_calls, prev_models = merged[key]
            merged[key] = (prev_calls + calls, prev_models | models)
        else:
            merged[key] = (calls, set(models))

    records = [
        OperationalRecord(view, method, calls, frozenset(models))
        for (view, method), (calls, models) in merged.items()
    ]
    records.sort(key=lambda r: (r.view, r.method))
    return OperationalDataset(records=records, window=window)


def aggregate_edge_calls(
    dataset: OperationalDataset, facts: ProjectFacts
) -> tuple[dict[tuple[ModulePath, ModulePath], int], list[str]]:
    """Sum dynamic call counts onto (view, model) pairs.

    A record touching several models credits its full call count to each of
    them. Names that do not match a view or model class in the facts are
    excluded and reported as warnings.
    """
    kinds = {c.node_path: c.kind for c in facts.classes}
    totals: dict[tuple[ModulePath, ModulePath], int] = {}
    warnings: list[str] = []
    for record in dataset.records:
        if kinds.get(record.view) is not Kind.VIEW:
            warnings.append(f"ops: unmatched view {record.view}; record excluded")
            continue
        for model in sorted(record.models):
            if kinds.get(model) is not Kind.MODEL:
                warnings.append(f"ops: unmatched model {model}; excluded")
                continue
            if record.calls == 0:
                continue
            key = (record.view, model)
            totals[key] = totals.get(key, 0) + record.calls
    ordered = {key: totals[key] for key in sorted(totals)}
    return ordered, warnings
