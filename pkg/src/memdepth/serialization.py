"""JSON encoding of unitaries and reports.

Complex numbers are ``[re, im]`` pairs. A unitary spec is one of::

    [[[re, im], ...], ...]                       explicit 4x4 matrix
    {"matrix": [[[re, im], ...], ...]}
    {"alpha": [ax, ay, az], "locals": [v1, w1, v2, w2], "phase": 0.0}
    {"preset": "swap" | "cnot" | "identity"}
    {"preset": "u_alpha_z", "alpha_z": 0.3927}   or   {"u_alpha_z": 0.3927}

On the command line a preset can be named directly, e.g. ``swap`` or
``u_alpha_z=0.3927`` (bare ``u_alpha_z`` uses pi/8).
"""
from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidUnitaryError
from .gates import PRESETS, u_alpha_z
from .kak import KakDecomposition, kak_compose
from .linalg import check_unitary

SPEC_UNITARY_TOL = 1e-9
DEFAULT_ALPHA_Z = math.pi / 8


def encode_complex_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[_clean(z.real), _clean(z.imag)] for z in row] for row in m]


def encode_real(x) -> list | float:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return _clean(float(arr))
    return [encode_real(v) for v in arr]


def _clean(x: float) -> float:
    # avoid "-0.0" so fixtures are byte-stable
    x = float(x)
    return 0.0 if x == 0 else x


def decode_complex_matrix(obj) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidUnitaryError(f"cannot parse matrix: {exc}") from exc
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise InvalidUnitaryError(f"matrix must be nested [re, im] pairs, got shape {arr.shape}")


def _preset(name: str, alpha_z: float | None = None) -> np.ndarray:
    if name == "u_alpha_z":
        return u_alpha_z(DEFAULT_ALPHA_Z if alpha_z is None else float(alpha_z))
    if name not in PRESETS:
        raise InvalidUnitaryError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS) + ['u_alpha_z']}"
        )
    return PRESETS[name].copy()


def decode_unitary_spec(obj) -> np.ndarray:
    if isinstance(obj, list):
        u = decode_complex_matrix(obj)
    elif isinstance(obj, dict) and "matrix" in obj:
        u = decode_complex_matrix(obj["matrix"])
    elif isinstance(obj, dict) and "alpha" in obj:
        locals_ = obj.get("locals")
        mats = [np.eye(2, dtype=complex)] * 4 if locals_ is None else [decode_complex_matrix(m) for m in locals_]
        if len(mats) != 4 or any(m.shape != (2, 2) for m in mats):
            raise InvalidUnitaryError("'locals' must hold four 2x2 matrices")
        alpha = np.asarray(obj["alpha"], dtype=float)
        if alpha.shape != (3,):
            raise InvalidUnitaryError("'alpha' must hold three angles")
        u = kak_compose(KakDecomposition(*mats, alpha, float(obj.get("phase", 0.0))))
    elif isinstance(obj, dict) and "preset" in obj:
        u = _preset(str(obj["preset"]), obj.get("alpha_z"))
    elif isinstance(obj, dict) and "u_alpha_z" in obj:
        u = _preset("u_alpha_z", obj["u_alpha_z"])
    else:
        raise InvalidUnitaryError("unrecognised unitary spec")
    if u.shape != (4, 4):
        raise InvalidUnitaryError(f"expected a 4x4 unitary, got shape {u.shape}")
    return check_unitary(u, 4, tol=SPEC_UNITARY_TOL)


def resolve_input(arg: str) -> np.ndarray:
    """Preset name (``swap``, ``u_alpha_z=0.3``) or path to a JSON file."""
    name, _, value = arg.partition("=")
    if name in PRESETS or name == "u_alpha_z":
        try:
            alpha_z = float(value) if value else None
        except ValueError as exc:
            raise InvalidUnitaryError(f"bad alpha_z value {value!r}") from exc
        return check_unitary(_preset(name, alpha_z), 4, tol=SPEC_UNITARY_TOL)
    path = Path(arg)
    if not path.is_file():
        raise InvalidUnitaryError(f"{arg!r} is neither a preset nor a readable file")
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidUnitaryError(f"{arg}: invalid JSON ({exc})") from exc
    return decode_unitary_spec(obj)


def fingerprint(u) -> str:
    """SHA-256 over the matrix rounded to 12 decimals."""
    payload = json.dumps(encode_complex_matrix(np.round(np.asarray(u, dtype=complex), 12)))
    return hashlib.sha256(payload.encode()).hexdigest()
