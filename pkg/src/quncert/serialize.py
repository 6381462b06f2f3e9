"""JSON file formats for states and wavefunctions.

DensityMatrix: {"type": "density", "dim": n, "re": [[..]], "im": [[..]]}
CQState:       {"type": "cq", "outcomes": [{"label": s, "state": {...}}]}
Wavefunction:  {"type": "wavefunction", "q0": float, "dq": float, "d": int,
                "re": [[..]], "im": [[..]]}  (N x d sample arrays)

Readers validate invariants and raise StateFormatError naming the violated
one. Wavefunctions whose sample count is not a power of two are accepted but
flagged for resampling before any FFT use.
"""

from __future__ import annotations

import json

import numpy as np

from .qstate import CQState, DensityMatrix, GridWaveFunction

__all__ = ["StateFormatError", "load_state", "save_state", "loads_state"]


class StateFormatError(ValueError):
    pass


def _matrix_from(obj, what: str) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFormatError(f"{what}: bad matrix data ({exc})") from exc
    if re.shape != im.shape:
        raise StateFormatError(f"{what}: re/im shape mismatch")
    return re + 1j * im


def _density_from(obj) -> DensityMatrix:
    mat = _matrix_from(obj, "density matrix")
    dm = DensityMatrix(mat)
    if "dim" in obj and int(obj["dim"]) != dm.dim:
        raise StateFormatError(f"declared dim {obj['dim']} != matrix dim {dm.dim}")
    for name, (ok, measured) in dm.diagnostics().items():
        if not ok:
            raise StateFormatError(f"density matrix violates {name} (measured {measured})")
    return dm


def loads_state(text: str):
    obj = json.loads(text)
    kind = obj.get("type")
    if kind == "density":
        return _density_from(obj)
    if kind == "cq":
        try:
            outcomes = tuple((o["label"], _matrix_from(o["state"], f"outcome {o['label']}"))
                             for o in obj["outcomes"])
        except (KeyError, TypeError) as exc:
            raise StateFormatError(f"bad cq outcome list ({exc})") from exc
        cq = CQState(outcomes)
        for name, (ok, measured) in cq.diagnostics().items():
            if not ok:
                raise StateFormatError(f"cq state violates {name} (measured {measured})")
        return cq
    if kind == "wavefunction":
        samples = _matrix_from(obj, "wavefunction")
        try:
            psi = GridWaveFunction(float(obj["q0"]), float(obj["dq"]), samples)
        except (KeyError, ValueError) as exc:
            raise StateFormatError(f"bad wavefunction header ({exc})") from exc
        if "d" in obj and int(obj["d"]) != psi.memory_dim:
            raise StateFormatError("declared memory dimension does not match samples")
        if not psi.is_valid():
            raise StateFormatError(f"wavefunction violates normalization (norm^2 {psi.norm_sq()})")
        return psi
    raise StateFormatError(f"unknown or missing type tag {kind!r}")


def load_state(path):
    with open(path, encoding="utf-8") as fh:
        return loads_state(fh.read())


def _split(mat: np.ndarray):
    mat = np.asarray(mat)
    return mat.real.tolist(), mat.imag.tolist()


def save_state(obj, path) -> None:
    if isinstance(obj, DensityMatrix):
        re, im = _split(obj.mat)
        payload = {"type": "density", "dim": obj.dim, "re": re, "im": im}
    elif isinstance(obj, CQState):
        payload = {"type": "cq", "outcomes": []}
        for lbl, op in obj.outcomes:
            re, im = _split(op)
            payload["outcomes"].append(
                {"label": lbl, "state": {"dim": op.shape[0], "re": re, "im": im}})
    elif isinstance(obj, GridWaveFunction):
        re, im = _split(obj.samples)
        payload = {"type": "wavefunction", "q0": obj.q0, "dq": obj.dq,
                   "d": obj.memory_dim, "re": re, "im": im}
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
