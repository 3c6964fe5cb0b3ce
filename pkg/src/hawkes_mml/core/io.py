"""Reading and writing events CSV, model JSON and graph JSON."""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from hawkes_mml.config.constants import EVENT_COLUMNS, EVENTS_META_SUFFIX
from hawkes_mml.core.events import EventData, Graph, HawkesModel, validate_events
from hawkes_mml.utils.errors import ValidationError
from hawkes_mml.utils.logging import get_logger

logger = get_logger("io")

PathLike = Union[str, Path]


def model_to_dict(model: HawkesModel) -> Dict[str, Any]:
    """Convert a model to a JSON-ready dictionary."""
    return {
        "mu": model.mu.tolist(),
        "alpha": model.alpha.tolist(),
        "beta": model.beta.tolist(),
    }


def model_from_dict(data: Dict[str, Any]) -> HawkesModel:
    """Create a model from a dictionary (parsed JSON)."""
    try:
        return HawkesModel(
            mu=np.asarray(data["mu"], dtype=float),
            alpha=np.asarray(data["alpha"], dtype=float),
            beta=np.asarray(data["beta"], dtype=float),
        )
    except KeyError as e:
        raise ValidationError(f"Model JSON is missing the '{e.args[0]}' field") from None


def graph_to_dict(graph: Graph) -> Dict[str, Any]:
    """Convert a graph to a dictionary with the adjacency as nested 0/1 lists."""
    return {"adjacency": graph.adjacency.astype(int).tolist()}


def graph_from_dict(data: Dict[str, Any]) -> Graph:
    """Create a graph from a dictionary (parsed JSON)."""
    if "adjacency" not in data:
        raise ValidationError("Graph JSON is missing the 'adjacency' field")
    return Graph(np.asarray(data["adjacency"]))


def _write_json(path: PathLike, payload: Dict[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    return path


def _read_json(path: PathLike) -> Dict[str, Any]:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Invalid JSON in {path}: {e}") from None


def write_model(model: HawkesModel, path: PathLike) -> Path:
    return _write_json(path, model_to_dict(model))


def read_model(path: PathLike) -> HawkesModel:
    return model_from_dict(_read_json(path))


def write_graph(graph: Graph, path: PathLike) -> Path:
    return _write_json(path, graph_to_dict(graph))


def read_graph(path: PathLike) -> Graph:
    return graph_from_dict(_read_json(path))


def events_to_frame(data: EventData) -> pd.DataFrame:
    """Long-format table (node_id 1-based, time), node by node in time order."""
    node_ids = np.concatenate(
        [np.full(len(x), node + 1, dtype=int) for node, x in enumerate(data.times)]
        or [np.empty(0, dtype=int)]
    )
    times = np.concatenate([np.asarray(x) for x in data.times] or [np.empty(0)])
    return pd.DataFrame({EVENT_COLUMNS[0]: node_ids, EVENT_COLUMNS[1]: times})


def events_meta_path(path: PathLike) -> Path:
    """Sidecar next to an events CSV: events.csv -> events.meta.json."""
    path = Path(path)
    return path.with_name(path.stem + EVENTS_META_SUFFIX)


def write_events(data: EventData, path: PathLike) -> Path:
    """
    Write events as CSV with a node_id,time header, plus a sidecar JSON
    recording the node count and horizon.

    Times are written with full repr precision so reading the file back
    reproduces the same floats. The sidecar keeps trailing nodes without
    events, which the CSV alone cannot represent.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    events_to_frame(data).to_csv(path, index=False, float_format="%.17g")
    _write_json(
        events_meta_path(path),
        {"dims": data.dims, "horizon": data.horizon, "counts": [int(c) for c in data.counts]},
    )
    return path


def read_events_meta(path: PathLike) -> Optional[Dict[str, Any]]:
    """Sidecar of an events CSV, or None when there is none."""
    meta = events_meta_path(path)
    if not meta.exists():
        return None
    data = _read_json(meta)
    if not isinstance(data.get("dims"), int) or data["dims"] < 1:
        raise ValidationError(f"{meta}: 'dims' must be a positive integer")
    return data


def read_events(
    path: PathLike, horizon: float, dims: Optional[int] = None
) -> EventData:
    """
    Read an events CSV and validate it.

    Args:
        path: CSV file with columns node_id (1-based) and time
        horizon: Observation horizon T
        dims: Number of nodes; defaults to the sidecar written by
            write_events, else to the largest node_id present

    Returns:
        Validated EventData

    Raises:
        ValidationError: On malformed rows, unknown columns, invalid times, or
            a node count that disagrees with the sidecar
    """
    meta = read_events_meta(path)
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"Malformed events file {path}: {e}") from None

    missing = [c for c in EVENT_COLUMNS if c not in frame.columns]
    if missing:
        raise ValidationError(
            f"Events file {path} lacks column(s) {missing}; expected header "
            f"{','.join(EVENT_COLUMNS)}"
        )
    if frame[list(EVENT_COLUMNS)].isna().any().any():
        row = int(frame[list(EVENT_COLUMNS)].isna().any(axis=1).to_numpy().argmax())
        raise ValidationError(f"Events file {path}: missing value on line {row + 2}")

    node_ids = pd.to_numeric(frame[EVENT_COLUMNS[0]], errors="coerce")
    times = pd.to_numeric(frame[EVENT_COLUMNS[1]], errors="coerce")
    bad = node_ids.isna() | times.isna() | (node_ids != node_ids.round())
    if bad.any():
        row = int(bad.to_numpy().argmax())
        raise ValidationError(f"Events file {path}: non-numeric value on line {row + 2}")

    node_ids = node_ids.astype(int).to_numpy()
    if node_ids.size and node_ids.min() < 1:
        raise ValidationError(f"Events file {path}: node_id must be >= 1")
    inferred = int(node_ids.max()) if node_ids.size else 0
    if meta is not None:
        recorded = int(meta["dims"])
        if dims is not None and dims != recorded:
            raise ValidationError(
                f"Events file {path} was written for {recorded} nodes but dims={dims}"
            )
        dims = recorded
        if meta.get("horizon") is not None and float(meta["horizon"]) != float(horizon):
            logger.warning(
                f"Events file {path} was written with horizon {meta['horizon']}, "
                f"reading it with {horizon}"
            )
    elif dims is None:
        dims = inferred
        logger.warning(
            f"No {events_meta_path(path).name} next to {path}; assuming {dims} nodes "
            f"from the largest node_id (trailing nodes without events are lost)"
        )
    if inferred > dims:
        raise ValidationError(
            f"Events file {path} references node {inferred} but dims={dims}"
        )
    if dims < 1:
        raise ValidationError(f"Events file {path} has no events and no dims was given")

    values = times.to_numpy(dtype=float)
    raw = [values[node_ids == node + 1] for node in range(dims)]
    data = validate_events(raw, horizon)
    logger.debug(f"Read {data.total_events} events for {dims} nodes from {path}")
    return data
