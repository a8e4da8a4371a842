"""JSON coefficient files, symbol specs, and CSV tables.

Coefficient schema (form "standard"):
    {"form": "standard", "R": number | "inf",
     "atoms": [{"y": ..., "m": ...}],
     "density": [piece...], "b": [piece...]}
with piece = {"from": ..., "to": ... | "inf", "kind": "power", "c": ..., "alpha": ...}
         or  {"from": ..., "to": ..., "kind": "poly", "coeffs": [...]}.
Forms "ek" (fields atoms/a_tilde/b), "divergence" (fields a_dot/b_dot/R) and
"general" (fields a0..e0/R) reuse the same piece schema.  CSV tables are
written with 17 significant digits so fixtures diff cleanly.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .pieces import Piece, PiecewiseFn
from .strings import StringCoefficients
from .symbols import ExponentialData, LevyTriplet, StieltjesData
from .transforms import DivergenceCoefficients, EKCoefficients, GeneralCoefficients


def _num(x):
    return "inf" if x == math.inf else x


def _parse_num(x):
    return math.inf if x == "inf" else float(x)


def pieces_to_json(fn: PiecewiseFn):
    out = []
    for p in fn.pieces:
        rec = {"from": p.lo, "to": _num(p.hi), "kind": p.kind}
        if p.kind == "power":
            rec["c"], rec["alpha"] = p.params
        else:
            rec["coeffs"] = list(p.params)
        out.append(rec)
    return out


def pieces_from_json(data):
    ps = []
    for rec in data:
        lo, hi = float(rec["from"]), _parse_num(rec["to"])
        if rec["kind"] == "power":
            ps.append(Piece(lo, hi, "power", (float(rec["c"]), float(rec["alpha"]))))
        elif rec["kind"] == "poly":
            ps.append(Piece(lo, hi, "poly", tuple(float(c) for c in rec["coeffs"])))
        else:
            raise ValueError(f"unknown piece kind {rec['kind']!r}")
    return PiecewiseFn(tuple(ps))


def coefficients_to_json(obj):
    if isinstance(obj, StringCoefficients):
        return {
            "form": "standard",
            "R": _num(obj.R),
            "atoms": [{"y": y, "m": m} for y, m in obj.atoms],
            "density": pieces_to_json(obj.density),
            "b": pieces_to_json(obj.b),
        }
    if isinstance(obj, EKCoefficients):
        return {
            "form": "ek",
            "R": _num(obj.R),
            "atoms": [{"y": y, "m": m} for y, m in obj.atoms],
            "a_tilde": pieces_to_json(obj.a_tilde),
            "b": pieces_to_json(obj.b_rep),
        }
    if isinstance(obj, DivergenceCoefficients):
        return {
            "form": "divergence",
            "R": _num(obj.R_dot),
            "a_dot": pieces_to_json(obj.a_dot),
            "b_dot": pieces_to_json(obj.b_dot),
        }
    if isinstance(obj, GeneralCoefficients):
        return {
            "form": "general",
            "R": _num(obj.R0),
            **{
                name: pieces_to_json(getattr(obj, name))
                for name in ("a0", "b0", "c0", "d0", "e0")
            },
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def coefficients_from_json(data):
    form = data.get("form", "standard")
    R = _parse_num(data.get("R", "inf"))
    if form == "standard":
        atoms = tuple(sorted((float(a["y"]), float(a["m"])) for a in data.get("atoms", [])))
        return StringCoefficients(
            R, atoms, pieces_from_json(data.get("density", [])), pieces_from_json(data.get("b", []))
        )
    if form == "ek":
        atoms = tuple(sorted((float(a["y"]), float(a["m"])) for a in data.get("atoms", [])))
        return EKCoefficients(
            R, atoms, pieces_from_json(data.get("a_tilde", [])), pieces_from_json(data.get("b", []))
        )
    if form == "divergence":
        return DivergenceCoefficients(
            R, pieces_from_json(data.get("a_dot", [])), pieces_from_json(data.get("b_dot", []))
        )
    if form == "general":
        return GeneralCoefficients(
            R, *(pieces_from_json(data.get(n, [])) for n in ("a0", "b0", "c0", "d0", "e0"))
        )
    raise ValueError(f"unknown coefficient form {form!r}")


def load_coefficients(path):
    with open(path) as fh:
        return coefficients_from_json(json.load(fh))


def save_coefficients(obj, path):
    with open(path, "w") as fh:
        json.dump(coefficients_to_json(obj), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# symbol specs
# ---------------------------------------------------------------------------


def symbol_from_json(data):
    kind = data["type"]
    if kind == "levy":
        return LevyTriplet(
            alpha=float(data.get("alpha", 0.0)),
            beta=float(data.get("beta", 0.0)),
            gamma=float(data.get("gamma", 0.0)),
            nu_plus=tuple((float(t["c"]), float(t["s"])) for t in data.get("nu_plus", [])),
            nu_minus=tuple((float(t["c"]), float(t["s"])) for t in data.get("nu_minus", [])),
            stable_terms=tuple(
                (int(t["side"]), float(t["C"]), float(t["mu"]))
                for t in data.get("stable", [])
            ),
        )
    if kind == "stieltjes":
        return StieltjesData(
            alpha=float(data.get("alpha", 0.0)),
            beta_check=float(data.get("beta_check", 0.0)),
            gamma=float(data.get("gamma", 0.0)),
            mu=tuple((float(t["s"]), float(t["w"])) for t in data.get("mu", [])),
        )
    if kind == "exponential":
        return ExponentialData(
            c=float(data.get("c", 1.0)),
            theta=tuple(
                (_parse_num_signed(t["from"]), _parse_num_signed(t["to"]), float(t["value"]))
                for t in data.get("theta", [])
            ),
        )
    raise ValueError(f"unknown symbol spec type {kind!r}")


def _parse_num_signed(x):
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    return float(x)


def load_symbol(path):
    with open(path) as fh:
        return symbol_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# CSV tables
# ---------------------------------------------------------------------------


def _fmt(x):
    return f"{x:.17g}"


def write_table(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_sampled(path, f):
    write_table(
        path,
        ["x", "re", "im"],
        [(x, v.real, v.imag) for x, v in zip(f.x, f.values)],
    )


def read_sampled(path):
    from .extension import SampledFunction

    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows and rows[0] and rows[0][0].strip().lower() == "x":
        rows = rows[1:]
    try:
        x = np.array([float(r[0]) for r in rows])
        vals = np.array([complex(float(r[1]), float(r[2]) if len(r) > 2 else 0.0) for r in rows])
    except (ValueError, IndexError) as exc:
        raise ValueError(f"malformed sampled-function CSV {path}: {exc}") from exc
    n = len(x)
    if n < 4 or n & (n - 1):
        raise ValueError("sample count must be a power of two, at least 4")
    dx = np.diff(x)
    if np.max(np.abs(dx - dx[0])) > 1e-9 * abs(dx[0]):
        raise ValueError("sample grid must be uniform")
    return SampledFunction(float(n * dx[0]), vals)


def parse_grid(spec):
    """xi-grid spec 'min:max:count[:log]' -> array."""
    parts = spec.split(":")
    if len(parts) not in (3, 4):
        raise ValueError("grid spec must be min:max:count[:log|lin]")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError("grid count must be positive")
    if len(parts) == 4 and parts[3] == "log":
        if lo <= 0:
            raise ValueError("log grid needs positive endpoints")
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)
