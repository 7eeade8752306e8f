"""JSON channel/operator files and deterministic number formatting.

Matrices are stored row-major as nested lists of [re, im] pairs:

    {"dim": 2, "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}

A channel file lists labelled outputs, optionally a prior and Kraus operators:

    {"dim": 2,
     "inputs": [{"label": "0", "matrix": ...}, {"label": "1", "matrix": ...}],
     "prior": {"0": 0.5, "1": 0.5}}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channels import CqChannel
from .config import Config, get_config
from .errors import DimensionMismatch, InputError, UnknownLabel
from .exponents import KrausChannel
from .operators import hermitian


class MalformedFile(InputError):
    """File is not valid JSON or does not follow the schema."""


def format_number(x) -> str:
    """Locale-free decimal with 17 significant digits."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return f"{x:.17g}"


def encode_matrix(A) -> list:
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def decode_matrix(entries, dim: int | None = None, where: str = "matrix") -> np.ndarray:
    try:
        A = np.array(entries, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedFile(f"{where}: entries must be numeric [re, im] pairs ({exc})") from None
    if A.ndim != 3 or A.shape[2] != 2:
        raise MalformedFile(f"{where}: expected a rows x cols x 2 array of [re, im] pairs, got shape {A.shape}")
    M = A[..., 0] + 1j * A[..., 1]
    if dim is not None and M.shape != (dim, dim):
        raise DimensionMismatch(f"{where}: expected {dim}x{dim}, got {M.shape[0]}x{M.shape[1]}")
    return M


def parse_json(text: str, source: str = "<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    data = parse_json(text, str(path))
    if not isinstance(data, dict):
        raise MalformedFile(f"{path}: top level must be a JSON object")
    return data


def _dim(data: dict, source: str):
    dim = data.get("dim")
    if dim is None:
        return None
    if not isinstance(dim, int) or dim < 1:
        raise MalformedFile(f"{source}: 'dim' must be a positive integer")
    return dim


def operator_from_dict(data: dict, source: str = "<operator>", config: Config | None = None) -> np.ndarray:
    if "matrix" not in data:
        raise MalformedFile(f"{source}: missing 'matrix'")
    M = decode_matrix(data["matrix"], _dim(data, source), f"{source}: matrix")
    return hermitian(M, config)


def operator_to_dict(A) -> dict:
    A = np.asarray(A, dtype=complex)
    return {"dim": int(A.shape[0]), "matrix": encode_matrix(A)}


def read_operator(path, config: Config | None = None) -> np.ndarray:
    return operator_from_dict(_load(path), str(path), config)


def write_operator(path, A) -> None:
    Path(path).write_text(json.dumps(operator_to_dict(A), indent=1) + "\n")


@dataclass(frozen=True)
class ChannelFile:
    channel: CqChannel | None
    kraus: KrausChannel | None
    prior: np.ndarray | None


def channel_from_dict(data: dict, source: str = "<channel>", config: Config | None = None) -> ChannelFile:
    cfg = get_config() if config is None else config
    dim = _dim(data, source)
    W = None
    if "inputs" in data:
        inputs = data["inputs"]
        if not isinstance(inputs, list) or not inputs:
            raise MalformedFile(f"{source}: 'inputs' must be a nonempty list")
        labels, states = [], []
        for k, item in enumerate(inputs):
            if not isinstance(item, dict) or "matrix" not in item:
                raise MalformedFile(f"{source}: inputs[{k}] needs 'label' and 'matrix'")
            labels.append(str(item.get("label", k)))
            states.append(decode_matrix(item["matrix"], dim, f"{source}: inputs[{k}]"))
        W = CqChannel.from_states(states, labels, cfg)
    Phi = None
    if "kraus" in data:
        ops = data["kraus"]
        if not isinstance(ops, list) or not ops:
            raise MalformedFile(f"{source}: 'kraus' must be a nonempty list")
        mats = [decode_matrix(K, None, f"{source}: kraus[{k}]") for k, K in enumerate(ops)]
        if dim is not None and mats[0].shape[0] != dim:
            raise DimensionMismatch(f"{source}: Kraus output dimension {mats[0].shape[0]} != dim {dim}")
        Phi = KrausChannel.from_kraus(mats)
    if W is None and Phi is None:
        raise MalformedFile(f"{source}: needs 'inputs' or 'kraus'")
    prior = None
    if "prior" in data:
        if W is None:
            raise MalformedFile(f"{source}: 'prior' requires 'inputs'")
        if not isinstance(data["prior"], dict):
            raise MalformedFile(f"{source}: 'prior' must map labels to weights")
        prior = np.zeros(len(W))
        for label, weight in data["prior"].items():
            if label not in W.labels:
                raise UnknownLabel(f"{source}: prior label {label!r} is not an input label")
            prior[W.index(label)] = float(weight)
        if np.any(prior < 0) or abs(prior.sum() - 1) > cfg.tol_trace:
            raise InputError(f"{source}: prior must be a probability distribution")
    return ChannelFile(W, Phi, prior)


def channel_to_dict(W: CqChannel | None = None, prior=None, kraus: KrausChannel | None = None) -> dict:
    data: dict = {}
    if W is not None:
        data["dim"] = W.dim
        data["inputs"] = [{"label": l, "matrix": encode_matrix(S)} for l, S in zip(W.labels, W.outputs)]
        if prior is not None:
            data["prior"] = {l: float(p) for l, p in zip(W.labels, prior)}
    if kraus is not None:
        data.setdefault("dim", kraus.d_out)
        data["kraus"] = [encode_matrix(K) for K in kraus.kraus]
    return data


def read_channel(path, config: Config | None = None) -> ChannelFile:
    return channel_from_dict(_load(path), str(path), config)


def write_channel(path, W: CqChannel | None = None, prior=None, kraus: KrausChannel | None = None) -> None:
    Path(path).write_text(json.dumps(channel_to_dict(W, prior, kraus), indent=1) + "\n")


def csv_text(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else format_number(v) for v in row))
    return "\n".join(lines) + "\n"
