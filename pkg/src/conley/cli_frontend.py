"""Command-line entry point and system-file loading.

System files are JSON documents with fields dimension, bounds, map
(affine with rational entries, or an explicit table of rectangular
blocks), named regions (N, L or N0, N1, N2, plus optional *_alt
variants) and a default field ("Q" or {"Zp": p}).

Exit codes: 0 success, 2 parse or user error, 3 mathematical
consistency failure, 4 admissibility search bound exhausted.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import errors
from .cubical_complex import CubicalSet, cube
from .combinatorial_dynamics import MultivaluedMap
from .scalar_linalg import Field, QQ


class SystemParseError(Exception):
    pass


class SystemFile:
    """Parsed system file: map, regions, field and options."""

    __slots__ = ("dimension", "bounds", "F", "regions", "field", "options",
                 "path")

    def __init__(self, dimension, bounds, F, regions, field, options, path):
        self.dimension = dimension
        self.bounds = bounds
        self.F = F
        self.regions = regions
        self.field = field
        self.options = options
        self.path = path

    def region(self, name):
        if name not in self.regions:
            raise SystemParseError("region %r not in file (has %s)" % (
                name, ", ".join(sorted(self.regions))))
        return self.regions[name]

    def has_region(self, name):
        return name in self.regions

    def pair_names(self, prefix=""):
        """(N, L) or (N0, N1) style region names for --pair selection."""
        if self.has_region("N" + prefix):
            return "N" + prefix, "L" + prefix
        return "N0" + prefix, "N1" + prefix


def _parse_field(spec):
    if spec == "Q":
        return QQ
    if isinstance(spec, dict) and set(spec) == {"Zp"}:
        return Field(int(spec["Zp"]))
    raise SystemParseError("bad field spec %r" % (spec,))


def parse_field_flag(text):
    """--field values: Q or Zp:P."""
    if text == "Q":
        return QQ
    if text.startswith("Zp:"):
        try:
            return Field(int(text[3:]))
        except (ValueError, errors.FieldMismatch) as e:
            raise SystemParseError("bad field %r: %s" % (text, e))
    raise SystemParseError("bad field %r (want Q or Zp:P)" % (text,))


def _parse_cube(obj, dimension):
    if not isinstance(obj, list) or len(obj) != dimension:
        raise SystemParseError("cube %r does not have %d intervals"
                               % (obj, dimension))
    try:
        return cube(obj)
    except (AssertionError, TypeError, ValueError) as e:
        raise SystemParseError("bad cube %r: %s" % (obj, e))


def load_system(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise SystemParseError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise SystemParseError("%s: line %d: %s" % (path, e.lineno, e.msg))
    try:
        dimension = int(doc["dimension"])
        bounds = [(int(a), int(b)) for a, b in doc["bounds"]]
        mp = doc["map"]
    except (KeyError, TypeError, ValueError) as e:
        raise SystemParseError("%s: malformed header: %s" % (path, e))
    if len(bounds) != dimension:
        raise SystemParseError("%s: bounds/dimension mismatch" % path)
    if mp.get("type") == "affine":
        try:
            matrix = [[Fraction(x) for x in row] for row in mp["matrix"]]
            offset = [Fraction(x) for x in mp["offset"]]
        except (KeyError, ValueError, TypeError) as e:
            raise SystemParseError("%s: bad affine map: %s" % (path, e))
        F = MultivaluedMap(dimension, bounds, matrix=matrix, offset=offset)
    elif mp.get("type") == "table":
        table = {}
        for entry in mp.get("entries", []):
            if len(entry) != 2:
                raise SystemParseError("%s: bad table entry" % path)
            q = _parse_cube(entry[0], dimension)
            table[q] = [_parse_cube(c, dimension) for c in entry[1]]
        try:
            F = MultivaluedMap(dimension, bounds, table=table)
        except AssertionError as e:
            raise SystemParseError("%s: bad table: %s" % (path, e))
    else:
        raise SystemParseError("%s: map type must be affine or table" % path)
    regions = {}
    for name, cube_list in doc.get("regions", {}).items():
        cs = [_parse_cube(c, dimension) for c in cube_list]
        for q in cs:
            for (lo, hi), (a, b) in zip(q, bounds):
                if lo < a or hi > b:
                    raise SystemParseError(
                        "%s: region %s cube %r outside bounds"
                        % (path, name, q))
        regions[name] = CubicalSet(dimension, cs)
    field = _parse_field(doc.get("field", "Q"))
    options = dict(doc.get("options", {}))
    return SystemFile(dimension, bounds, F, regions, field, options, path)


def fixture_path(name):
    """Path of a shipped fixture file."""
    return os.path.join(os.path.dirname(__file__), "fixtures", name)


def main(argv=None):
    # command implementations are appended below once the math modules
    # exist; see _build_parser / _run
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except SystemParseError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
