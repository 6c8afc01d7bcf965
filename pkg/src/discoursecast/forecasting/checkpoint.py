"""Versioned binary checkpoint for trained forecasters.

Layout: 8-byte magic, uint32 format version, uint64 header length, a JSON
header (config, manifest hash, seed, selection, standardization stats, and
parameter name/shape table), then every parameter tensor as little-endian
float64 in header order. Checkpoints are content-addressed: the model hash
is the SHA-256 of the file bytes, and a mismatch between a checkpoint's
manifest hash and the live feature manifest must refuse to serve.
"""

from __future__ import annotations

import hashlib
import io
import json
import struct

import numpy as np
import torch

from .config import ModelConfig
from .model import DiscourseTransformer
from .training import Forecaster

MAGIC = b"DCASTCK1"
FORMAT_VERSION = 1


class CheckpointError(Exception):
    pass


def serialize(forecaster: Forecaster) -> bytes:
    state = forecaster.module.state_dict()
    param_table = [{"name": k, "shape": list(v.shape)} for k, v in state.items()]
    header = {
        "format_version": FORMAT_VERSION,
        "config": forecaster.config.to_dict(),
        "manifest_hash": forecaster.manifest_hash,
        "seed": forecaster.config.seed,
        "selected_names": forecaster.selected_names,
        "target_indices": forecaster.target_indices,
        "covariate_indices": forecaster.covariate_indices,
        "feature_mean": forecaster.feature_mean.tolist(),
        "feature_std": forecaster.feature_std.tolist(),
        "target_mean": forecaster.target_mean.tolist(),
        "target_std": forecaster.target_std.tolist(),
        "module": {
            "enc_in": forecaster.module.enc_in,
            "cov_in": forecaster.module.cov_in,
            "n_targets": forecaster.module.n_targets,
        },
        "params": param_table,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<I", FORMAT_VERSION))
    buf.write(struct.pack("<Q", len(header_bytes)))
    buf.write(header_bytes)
    for entry in param_table:
        tensor = state[entry["name"]].detach().to(torch.float64).contiguous()
        buf.write(tensor.numpy().astype("<f8").tobytes())
    return buf.getvalue()


def content_hash(blob: bytes) -> str:
    return hashlib.sha256(blob).hexdigest()


def save(path: str, forecaster: Forecaster) -> str:
    """Write the checkpoint; returns its content hash (also recorded on the
    forecaster)."""
    blob = serialize(forecaster)
    digest = content_hash(blob)
    with open(path, "wb") as fh:
        fh.write(blob)
    forecaster.model_hash = digest
    return digest


def load(path: str) -> Forecaster:
    with open(path, "rb") as fh:
        blob = fh.read()
    return deserialize(blob)


def deserialize(blob: bytes) -> Forecaster:
    if blob[: len(MAGIC)] != MAGIC:
        raise CheckpointError("bad checkpoint magic; not a forecaster checkpoint")
    offset = len(MAGIC)
    (version,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    if version != FORMAT_VERSION:
        raise CheckpointError(f"unsupported checkpoint format version {version}")
    (header_len,) = struct.unpack_from("<Q", blob, offset)
    offset += 8
    try:
        header = json.loads(blob[offset : offset + header_len])
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"corrupt checkpoint header at offset {offset}: {exc}") from exc
    offset += header_len

    config = ModelConfig.from_dict(header["config"])
    module = DiscourseTransformer(
        enc_in=header["module"]["enc_in"],
        cov_in=header["module"]["cov_in"],
        n_targets=header["module"]["n_targets"],
        d_model=config.d_model,
        heads=config.heads,
        encoder_layers=config.encoder_layers,
        decoder_layers=config.decoder_layers,
        ff_dim=config.ff_dim,
        dropout=config.dropout,
        max_len=config.context_len + config.horizon + 8,
    )
    state = {}
    for entry in header["params"]:
        shape = tuple(entry["shape"])
        n = int(np.prod(shape)) if shape else 1
        nbytes = n * 8
        if offset + nbytes > len(blob):
            raise CheckpointError(
                f"truncated checkpoint: parameter {entry['name']} at offset {offset}"
            )
        arr = np.frombuffer(blob[offset : offset + nbytes], dtype="<f8").reshape(shape)
        state[entry["name"]] = torch.from_numpy(arr.copy())
        offset += nbytes
    if offset != len(blob):
        raise CheckpointError(f"trailing bytes after parameters at offset {offset}")
    module.load_state_dict(state)
    module.eval()

    return Forecaster(
        config=config,
        module=module,
        manifest_hash=header["manifest_hash"],
        selected_names=list(header["selected_names"]),
        target_indices=list(header["target_indices"]),
        covariate_indices=list(header["covariate_indices"]),
        feature_mean=np.asarray(header["feature_mean"]),
        feature_std=np.asarray(header["feature_std"]),
        target_mean=np.asarray(header["target_mean"]),
        target_std=np.asarray(header["target_std"]),
        model_hash=content_hash(blob),
    )
