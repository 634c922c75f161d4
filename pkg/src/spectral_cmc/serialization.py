"""JSON/CSV input and output for spectral data, potentials, trajectories."""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .curve import SpectralData
from .frames import Potential
from .polynomials import Poly

SCHEMA_VERSION = 1


class ParseError(ValueError):
    """Malformed, out-of-range, or wrong-version serialized input."""


def _require(cond: bool, msg: str):
    if not cond:
        raise ParseError(msg)


def _pair_to_complex(obj, what: str) -> complex:
    _require(
        isinstance(obj, (list, tuple)) and len(obj) == 2,
        f"{what}: expected [re, im] pair",
    )
    re, im = obj
    _require(
        isinstance(re, (int, float)) and isinstance(im, (int, float))
        and not isinstance(re, bool) and not isinstance(im, bool),
        f"{what}: entries must be numbers",
    )
    _require(
        math.isfinite(re) and math.isfinite(im),
        f"{what}: entries must be finite",
    )
    return complex(re, im)


def _complex_to_pair(z: complex):
    z = complex(z)
    return [z.real, z.imag]


def _poly_to_json(p: Poly):
    return [_complex_to_pair(c) for c in p.coeffs]


def _poly_from_json(obj, what: str) -> Poly:
    _require(isinstance(obj, list) and len(obj) >= 1, f"{what}: expected list")
    return Poly([_pair_to_complex(c, f"{what}[{k}]") for k, c in enumerate(obj)])


def spectral_data_to_dict(d: SpectralData) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "g": d.g,
        "a": _poly_to_json(d.a),
        "b": _poly_to_json(d.b),
        "lambda1": _complex_to_pair(d.lambda1),
    }


def spectral_data_from_dict(obj) -> SpectralData:
    _require(isinstance(obj, dict), "spectral data: expected JSON object")
    _require("version" in obj, "spectral data: missing version")
    _require(
        obj["version"] == SCHEMA_VERSION,
        f"spectral data: unsupported version {obj['version']!r}",
    )
    for key in ("g", "a", "b", "lambda1"):
        _require(key in obj, f"spectral data: missing field {key!r}")
    g = obj["g"]
    _require(isinstance(g, int) and not isinstance(g, bool) and g >= 0,
             "spectral data: g must be a non-negative integer")
    a = _poly_from_json(obj["a"], "a")
    b = _poly_from_json(obj["b"], "b")
    lam1 = _pair_to_complex(obj["lambda1"], "lambda1")
    try:
        return SpectralData(a, b, lam1, g)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"spectral data: {exc}") from exc


def save_spectral_data(d: SpectralData, path):
    with open(path, "w") as fh:
        json.dump(spectral_data_to_dict(d), fh, indent=2)
        fh.write("\n")


def load_spectral_data(path) -> SpectralData:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return spectral_data_from_dict(obj)


def potential_to_dict(xi: Potential) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "g": xi.g,
        "xi": [
            [[_complex_to_pair(m[r, c]) for c in range(2)] for r in range(2)]
            for m in xi.xi
        ],
    }


def potential_from_dict(obj) -> Potential:
    _require(isinstance(obj, dict), "potential: expected JSON object")
    _require("version" in obj, "potential: missing version")
    _require(
        obj["version"] == SCHEMA_VERSION,
        f"potential: unsupported version {obj['version']!r}",
    )
    _require("xi" in obj, "potential: missing field 'xi'")
    mats = obj["xi"]
    _require(isinstance(mats, list) and len(mats) >= 1,
             "potential: 'xi' must be a non-empty list")
    out = []
    for k, m in enumerate(mats):
        _require(
            isinstance(m, list) and len(m) == 2
            and all(isinstance(r, list) and len(r) == 2 for r in m),
            f"potential: xi[{k}] must be a 2x2 matrix",
        )
        out.append(
            np.array(
                [[_pair_to_complex(m[r][c], f"xi[{k}][{r}][{c}]")
                  for c in range(2)] for r in range(2)]
            )
        )
    try:
        return Potential(tuple(out))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"potential: {exc}") from exc


def save_potential(xi: Potential, path):
    with open(path, "w") as fh:
        json.dump(potential_to_dict(xi), fh, indent=2)
        fh.write("\n")


def load_potential(path) -> Potential:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return potential_from_dict(obj)


class TrajectoryWriter:
    """Streams flow-state rows to CSV: time, coefficients, Sym point, arc
    length, monitors, and any events raised during the step."""

    MONITOR_KEYS = (
        "min_root_a_distance",
        "min_root_ab_distance",
        "min_sym_b_distance",
        "short_arc_length",
    )

    def __init__(self, path, g: int):
        self.g = g
        self._fh = open(path, "w", newline="")
        self._writer = csv.writer(self._fh)
        header = ["t"]
        for k in range(2 * g + 1):
            header += [f"a{k}_re", f"a{k}_im"]
        for k in range(g + 2):
            header += [f"b{k}_re", f"b{k}_im"]
        header += ["lambda1_re", "lambda1_im"]
        header += list(self.MONITOR_KEYS)
        header += ["events"]
        self._writer.writerow(header)

    def write(self, state, mon: dict | None = None, events=()):
        row = [repr(state.t)]
        for k in range(2 * self.g + 1):
            c = complex(state.a.coeff(k))
            row += [repr(c.real), repr(c.imag)]
        for k in range(self.g + 2):
            c = complex(state.b.coeff(k))
            row += [repr(c.real), repr(c.imag)]
        l1 = complex(state.lam1)
        row += [repr(l1.real), repr(l1.imag)]
        mon = mon or {}
        for key in self.MONITOR_KEYS:
            v = mon.get(key)
            row.append("" if v is None else repr(float(v)))
        row.append(";".join(str(e) for e in events))
        self._writer.writerow(row)

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
