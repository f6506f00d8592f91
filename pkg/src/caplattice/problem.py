"""Problem files and report serialization.

A problem file is JSON::

    {
      "elements": ["0", "a", "b", "1"],
      "relation": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]],
      "capacities": {"phi": {"a": "1/2", "b": "1/3", "1": "1"}},
      "psi": {"0": "0", "a": "1/2", "b": "1/2", "1": "1"}
    }

``relation`` lists pairs x ≤ y (covers suffice; the closure is taken).
Capacity entries left out are 0.  ``psi`` is a cdf given in full;
``psi_mass`` may be given instead as point masses (missing entries 0).
Rationals are integer literals or "p/q" strings; floats are refused.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .capacity import LatticeFn, cdf_from_mass
from .errors import ProblemFormatError
from .lattice import DEFAULT_CAP, Lattice, build_lattice


@dataclass
class Problem:
    lattice: Lattice
    capacities: dict = field(default_factory=dict)
    psi: LatticeFn | None = None
    digest: str = ""

    def capacity(self, name: str) -> LatticeFn:
        if name not in self.capacities:
            known = ", ".join(self.capacities) or "none"
            raise ProblemFormatError(f"no capacity named {name!r} (known: {known})")
        return self.capacities[name]

    def require_psi(self) -> LatticeFn:
        if self.psi is None:
            raise ProblemFormatError("this command needs a 'psi' or 'psi_mass' section")
        return self.psi


def parse_rational(text) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (int, str)):
        raise ProblemFormatError(f"rational must be an integer or a 'p/q' string, got {text!r}")
    try:
        if isinstance(text, str) and ("." in text or "e" in text.lower()):
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ProblemFormatError(f"bad rational {text!r}") from None


def _values(L: Lattice, raw, what: str, default) -> LatticeFn:
    if not isinstance(raw, dict):
        raise ProblemFormatError(f"{what} must be an object mapping element ids to rationals")
    unknown = [k for k in raw if k not in L]
    if unknown:
        raise ProblemFormatError(f"{what} names unknown element {unknown[0]!r}")
    if default is None:
        missing = [x for x in L.elements if x not in raw]
        if missing:
            raise ProblemFormatError(f"{what} has no value for {missing[0]!r}")
    vals = [parse_rational(raw[x]) if x in raw else Fraction(default) for x in L.elements]
    return LatticeFn._raw(L, vals)


def parse_problem(text: str, cap: int = DEFAULT_CAP) -> Problem:
    """Parse problem text; lattice errors propagate as domain errors."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "elements" not in data:
        raise ProblemFormatError("problem must be an object with an 'elements' list")
    elements = data["elements"]
    if not isinstance(elements, list) or not all(isinstance(x, str) for x in elements):
        raise ProblemFormatError("'elements' must be a list of strings")
    relation = data.get("relation", [])
    if not isinstance(relation, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(v, str) for v in p) for p in relation
    ):
        raise ProblemFormatError("'relation' must be a list of [lower, upper] pairs")
    L = build_lattice(elements, [tuple(p) for p in relation], cap=cap)
    caps = data.get("capacities", {})
    if not isinstance(caps, dict):
        raise ProblemFormatError("'capacities' must be an object")
    capacities = {name: _values(L, raw, f"capacity {name!r}", 0) for name, raw in caps.items()}
    if "psi" in data and "psi_mass" in data:
        raise ProblemFormatError("give either 'psi' or 'psi_mass', not both")
    psi = None
    if "psi" in data:
        psi = _values(L, data["psi"], "psi", None)
    elif "psi_mass" in data:
        psi = cdf_from_mass(_values(L, data["psi_mass"], "psi_mass", 0))
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return Problem(L, capacities, psi, digest)


def load_problem(path: str | Path, cap: int = DEFAULT_CAP) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text, cap=cap)


def dump_problem(L: Lattice, capacities: dict, psi_mass: LatticeFn | None = None) -> str:
    """Serialize a lattice (cover relation) and functions back to problem text."""
    q = lambda v: json.dumps(v, ensure_ascii=False)

    def fn_block(fn):
        items = [f"{q(x)}: {q(str(v))}" for x, v in fn.items() if v]
        return "{" + ", ".join(items) + "}"

    lines = ["{", f'  "elements": {q(list(L.elements))},', '  "relation": [']
    lines += [f"    {q(list(c))}," for c in L.covers]
    lines[-1] = lines[-1].rstrip(",")
    lines += ["  ],", '  "capacities": {']
    lines += [f"    {q(name)}: {fn_block(fn)}," for name, fn in capacities.items()]
    lines[-1] = lines[-1].rstrip(",")
    lines.append("  }" + ("," if psi_mass is not None else ""))
    if psi_mass is not None:
        lines.append(f'  "psi_mass": {fn_block(psi_mass)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- reports -------------------------------------------------------------------


def plain(value):
    """Convert results to JSON-ready values; every rational becomes a string."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, LatticeFn):
        return {x: str(v) for x, v in value.items()}
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return str(value)


def render_json(report: dict) -> str:
    return json.dumps(plain(report), indent=2, ensure_ascii=False) + "\n"


def render_table(report: dict) -> str:
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            if not value:
                lines.append(f"{prefix}: {{}}")
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(value, list) and value and any(isinstance(v, (dict, list)) for v in value):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        elif isinstance(value, list):
            lines.append(f"{prefix}: " + ", ".join(str(v) for v in value))
        else:
            lines.append(f"{prefix}: {value}")

    walk("", plain(report))
    return "\n".join(lines) + "\n"
