"""JSON and binary serialization of matrices, models and grid states.

Conventions, shared by every module that emits files:

* complex matrices serialize as row-major lists of ``[re, im]`` pairs plus
  the dimension(s);
* grid binary format: an 8-byte header (little-endian ``uint32 n_x``,
  ``float32 L``) followed by row-major ``float64`` payload — real data is
  written as-is, complex data as interleaved re/im pairs.
"""

from __future__ import annotations

import struct
from typing import Any

import numpy as np

_HEADER = struct.Struct("<If")


def matrix_to_pairs(matrix: np.ndarray) -> list[list[float]]:
    """Flatten a matrix row-major into [re, im] pairs."""
    flat = np.asarray(matrix, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def pairs_to_matrix(pairs: list[list[float]], shape: tuple[int, ...]) -> np.ndarray:
    data = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    if data.size != int(np.prod(shape)):
        raise ValueError(f"expected {np.prod(shape)} entries, got {data.size}")
    return data.reshape(shape)


def density_to_json(matrix: np.ndarray) -> dict[str, Any]:
    """DensityMatrix wire format: {dim, matrix: [[re, im], ...]} row-major."""
    matrix = np.asarray(matrix)
    return {"dim": int(matrix.shape[0]), "matrix": matrix_to_pairs(matrix)}


def density_from_json(payload: dict[str, Any]) -> np.ndarray:
    dim = int(payload["dim"])
    return pairs_to_matrix(payload["matrix"], (dim, dim))


def lindblad_model_to_json(h: np.ndarray, generators: list[np.ndarray]) -> dict[str, Any]:
    """LindbladModel wire format: {dim, H: matrix, Ls: [matrix, ...]}."""
    h = np.asarray(h)
    return {
        "dim": int(h.shape[0]),
        "H": matrix_to_pairs(h),
        "Ls": [matrix_to_pairs(np.asarray(l)) for l in generators],
    }


def lindblad_model_from_json(payload: dict[str, Any]) -> tuple[np.ndarray, list[np.ndarray]]:
    dim = int(payload["dim"])
    h = pairs_to_matrix(payload["H"], (dim, dim))
    ls = [pairs_to_matrix(p, (dim, dim)) for p in payload["Ls"]]
    return h, ls


def grid_to_json(n_x: int, length: float, rho: np.ndarray) -> dict[str, Any]:
    return {"n_x": int(n_x), "L": float(length), "rho": matrix_to_pairs(rho)}


def grid_from_json(payload: dict[str, Any]) -> tuple[int, float, np.ndarray]:
    n_x = int(payload["n_x"])
    length = float(payload["L"])
    rho = pairs_to_matrix(payload["rho"], (n_x, n_x))
    return n_x, length, rho


def write_grid_binary(path: str, n_x: int, length: float, values: np.ndarray) -> None:
    """Write the 8-byte (n_x, L) header plus row-major float64 payload."""
    values = np.ascontiguousarray(values)
    if np.iscomplexobj(values):
        payload = np.empty(values.shape + (2,), dtype=np.float64)
        payload[..., 0] = values.real
        payload[..., 1] = values.imag
    else:
        payload = values.astype(np.float64)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(int(n_x), float(length)))
        fh.write(payload.tobytes())


def read_grid_binary(path: str, complex_data: bool = False) -> tuple[int, float, np.ndarray]:
    with open(path, "rb") as fh:
        n_x, length = _HEADER.unpack(fh.read(_HEADER.size))
        raw = np.frombuffer(fh.read(), dtype=np.float64)
    if complex_data:
        raw = raw.reshape(n_x, n_x, 2)
        return n_x, float(length), raw[..., 0] + 1j * raw[..., 1]
    return n_x, float(length), raw.reshape(n_x, n_x)
