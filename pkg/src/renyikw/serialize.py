"""JSON wire formats for states, ensembles, and POVMs, plus report emission.

Complex numbers travel as [re, im] pairs, matrices row-major. Reports
are written by a small deterministic emitter so that identical runs
produce identical bytes: floats always carry 17 significant digits and
key order is exactly the insertion order of the report dict.
"""
from __future__ import annotations

import json

import numpy as np

from .entropy import Ensemble
from .errors import InvalidState, NumericalError
from .measurements import Povm
from .states import DensityMatrix, PureState


def _complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _pair_to_complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise InvalidState(f"expected [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_json(matrix: np.ndarray, dims) -> dict:
    m = np.asarray(matrix, dtype=np.complex128)
    return {
        "dims": [int(d) for d in dims],
        "matrix": [[_complex_to_pair(z) for z in row] for row in m],
    }


def matrix_from_json(obj) -> tuple[np.ndarray, tuple[int, ...]]:
    if not isinstance(obj, dict) or "matrix" not in obj or "dims" not in obj:
        raise InvalidState("operator JSON needs 'dims' and 'matrix' keys")
    rows = obj["matrix"]
    m = np.array(
        [[_pair_to_complex(z) for z in row] for row in rows], dtype=np.complex128
    )
    return m, tuple(int(d) for d in obj["dims"])


def state_to_json(state) -> dict:
    if isinstance(state, PureState):
        return {
            "dims": [int(d) for d in state.dims],
            "vector": [_complex_to_pair(z) for z in state.amplitudes],
        }
    if isinstance(state, DensityMatrix):
        return matrix_to_json(state.matrix, state.dims)
    raise InvalidState(f"cannot serialize {type(state).__name__}")


def state_from_json(obj, dims=None):
    """Parse a state; 'vector' key gives a PureState, 'matrix' a DensityMatrix.

    An explicit dims argument overrides the stored subsystem grouping.
    """
    if not isinstance(obj, dict):
        raise InvalidState("state JSON must be an object")
    if "vector" in obj:
        amps = np.array(
            [_pair_to_complex(z) for z in obj["vector"]], dtype=np.complex128
        )
        use = dims if dims is not None else obj.get("dims", (amps.size,))
        return PureState(amps, tuple(int(d) for d in use))
    m, stored = matrix_from_json(obj)
    use = dims if dims is not None else stored
    return DensityMatrix(m, tuple(int(d) for d in use))


def ensemble_to_json(ensemble: Ensemble) -> dict:
    return {
        "members": [
            {"p": float(p), "state": state_to_json(s)}
            for p, s in zip(ensemble.probabilities, ensemble.states)
        ]
    }


def ensemble_from_json(obj) -> Ensemble:
    if not isinstance(obj, dict) or "members" not in obj:
        raise InvalidState("ensemble JSON needs a 'members' list")
    probs, states = [], []
    for entry in obj["members"]:
        if "p" not in entry or "state" not in entry:
            raise InvalidState("each member needs 'p' and 'state'")
        probs.append(float(entry["p"]))
        s = state_from_json(entry["state"])
        states.append(s.density() if isinstance(s, PureState) else s)
    return Ensemble(np.array(probs), tuple(states))


def povm_to_json(povm: Povm) -> dict:
    d = povm.dim
    return {"effects": [matrix_to_json(e, (d,)) for e in povm.effects]}


def povm_from_json(obj) -> Povm:
    if not isinstance(obj, dict) or "effects" not in obj:
        raise InvalidState("POVM JSON needs an 'effects' list")
    effects = tuple(matrix_from_json(e)[0] for e in obj["effects"])
    return Povm(effects)


def _emit(x, out: list):
    if isinstance(x, dict):
        out.append("{")
        for i, (k, v) in enumerate(x.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _emit(v, out)
        out.append("}")
    elif isinstance(x, (list, tuple)):
        out.append("[")
        for i, v in enumerate(x):
            if i:
                out.append(",")
            _emit(v, out)
        out.append("]")
    elif isinstance(x, np.ndarray):
        _emit(x.tolist(), out)
    elif isinstance(x, (bool, np.bool_)):
        out.append("true" if x else "false")
    elif isinstance(x, (int, np.integer)):
        out.append(str(int(x)))
    elif isinstance(x, (float, np.floating)):
        v = float(x)
        if not np.isfinite(v):
            raise NumericalError(f"cannot serialize non-finite value {v}")
        out.append(f"{v:.17g}")
    elif isinstance(x, str):
        out.append(json.dumps(x))
    elif x is None:
        out.append("null")
    else:
        raise InvalidState(f"cannot serialize {type(x).__name__}")


def dumps_report(obj) -> str:
    """Deterministic JSON text: 17 significant digits, insertion-ordered keys."""
    out: list[str] = []
    _emit(obj, out)
    return "".join(out)
