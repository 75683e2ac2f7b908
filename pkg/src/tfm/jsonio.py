"""JSON schemas for fans, foliated pairs, and divisors.

Rationals travel as strings "p/q" (or "k" for integers); fan data uses
bare integers.  Parse errors carry the offending path.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from tfm.divisor import TorusDivisor
from tfm.fan import Fan
from tfm.foliation import FoliatedPair, FoliationSubspace


class SchemaError(ValueError):
    pass


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError("%s: expected a rational, got a boolean" % path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise SchemaError("%s: %r is not a rational 'p/q'" % (path, value))
    raise SchemaError("%s: expected 'p/q' string or integer" % path)


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise SchemaError(msg)


def fan_to_json(f: Fan) -> dict:
    return {
        "dim": f.dim,
        "rays": [list(r) for r in f.rays],
        "cones": [list(c) for c in f.max_cones],
    }


def fan_from_json(data: Any, path: str = "fan") -> Fan:
    _expect(isinstance(data, dict), "%s: expected an object" % path)
    for key in ("dim", "rays", "cones"):
        _expect(key in data, "%s.%s: missing" % (path, key))
    dim = data["dim"]
    _expect(isinstance(dim, int) and dim >= 0, "%s.dim: expected a nonnegative integer" % path)
    rays = data["rays"]
    _expect(isinstance(rays, list), "%s.rays: expected a list" % path)
    parsed_rays = []
    for i, ray in enumerate(rays):
        _expect(
            isinstance(ray, list) and len(ray) == dim,
            "%s.rays[%d]: expected a list of %d integers" % (path, i, dim),
        )
        for j, x in enumerate(ray):
            _expect(
                isinstance(x, int) and not isinstance(x, bool),
                "%s.rays[%d][%d]: expected an integer" % (path, i, j),
            )
        parsed_rays.append(tuple(ray))
    cones = data["cones"]
    _expect(isinstance(cones, list), "%s.cones: expected a list" % path)
    parsed_cones = []
    for i, cone in enumerate(cones):
        _expect(isinstance(cone, list), "%s.cones[%d]: expected a list" % (path, i))
        for j, x in enumerate(cone):
            _expect(
                isinstance(x, int) and not isinstance(x, bool) and 0 <= x < len(parsed_rays),
                "%s.cones[%d][%d]: ray index out of range" % (path, i, j),
            )
        parsed_cones.append(tuple(cone))
    try:
        return Fan(dim, parsed_rays, parsed_cones)
    except ValueError as exc:
        raise SchemaError("%s: %s" % (path, exc))


def divisor_to_json(d: TorusDivisor) -> dict:
    return {"coeffs": [format_rational(c) for c in d.coeffs]}


def divisor_from_json(data: Any, f: Fan, path: str = "divisor") -> TorusDivisor:
    _expect(isinstance(data, dict), "%s: expected an object" % path)
    _expect("coeffs" in data, "%s.coeffs: missing" % path)
    coeffs = data["coeffs"]
    _expect(isinstance(coeffs, list), "%s.coeffs: expected a list" % path)
    _expect(
        len(coeffs) == len(f.rays),
        "%s.coeffs: expected %d entries (one per ray), got %d"
        % (path, len(f.rays), len(coeffs)),
    )
    return TorusDivisor(
        tuple(
            parse_rational(c, "%s.coeffs[%d]" % (path, i))
            for i, c in enumerate(coeffs)
        )
    )


def pair_to_json(pair: FoliatedPair) -> dict:
    delta = {
        str(i): format_rational(c)
        for i, c in enumerate(pair.delta.coeffs)
        if c != 0
    }
    return {
        "subspace": [
            [format_rational(x) for x in b] for b in pair.subspace.basis
        ],
        "delta": delta,
    }


def pair_from_json(data: Any, f: Fan, path: str = "pair") -> FoliatedPair:
    _expect(isinstance(data, dict), "%s: expected an object" % path)
    _expect("subspace" in data, "%s.subspace: missing" % path)
    sub = data["subspace"]
    _expect(isinstance(sub, list) and sub, "%s.subspace: expected a nonempty list" % path)
    basis = []
    for i, vec in enumerate(sub):
        _expect(
            isinstance(vec, list) and len(vec) == f.dim,
            "%s.subspace[%d]: expected a vector of length %d" % (path, i, f.dim),
        )
        basis.append(
            tuple(
                parse_rational(x, "%s.subspace[%d][%d]" % (path, i, j))
                for j, x in enumerate(vec)
            )
        )
    coeffs = [Fraction(0)] * len(f.rays)
    delta = data.get("delta", {})
    _expect(isinstance(delta, dict), "%s.delta: expected an object" % path)
    for key, value in delta.items():
        try:
            idx = int(key)
        except ValueError:
            raise SchemaError("%s.delta: key %r is not a ray index" % (path, key))
        _expect(
            0 <= idx < len(f.rays),
            "%s.delta[%s]: ray index out of range" % (path, key),
        )
        coeffs[idx] = parse_rational(value, "%s.delta[%s]" % (path, key))
    try:
        subspace = FoliationSubspace(basis)
    except ValueError as exc:
        raise SchemaError("%s: %s" % (path, exc))
    # pair construction failures (e.g. K_F+Delta not Q-Cartier) are domain
    # errors, not schema errors; let them surface as such
    return FoliatedPair(f, subspace, TorusDivisor(coeffs))


def load_json(path: str):
    try:
        with open(path) as handle:
            return json.load(handle)
    except OSError as exc:
        raise SchemaError("%s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise SchemaError("%s: invalid JSON (%s)" % (path, exc))


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
