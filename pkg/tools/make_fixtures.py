"""Regenerates the JSON fixture corpus under src/conley/fixtures/.

All map data is exact: affine entries are integers or rationals, table
blocks are computed with Fraction arithmetic from closed-form formulas.
"""

import json
import os
from fractions import Fraction


OUT = os.path.join(os.path.dirname(__file__), "..", "src", "conley",
                   "fixtures")


def cube1(k):
    return [[k, k + 1]]


def cells(ranges):
    out = []
    for a, b in ranges:
        out.extend(cube1(k) for k in range(a, b))
    return out


def floor_frac(x):
    return x.numerator // x.denominator


def ceil_frac(x):
    return -((-x.numerator) // x.denominator)


def block_from_interval(lo, hi):
    a, b = floor_frac(lo), ceil_frac(hi)
    if a == b:
        b = a + 1
    return [cube1(k) for k in range(a, b)]


def write(name, doc):
    path = os.path.join(OUT, name)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print("wrote", path)


def saddle_fixture(z_rate, name):
    """3D affine saddle: contraction in x, y and rate z_rate in z."""
    doc = {
        "dimension": 3,
        "bounds": [[-1, 1], [-1, 1], [-8, 8]],
        "map": {
            "type": "affine",
            "matrix": [["1/2", "0", "0"], ["0", "1/2", "0"],
                       ["0", "0", str(z_rate)]],
            "offset": ["0", "0", "0"],
        },
        "field": "Q",
        "regions": {
            "N": box3((-1, 1), (-1, 1), (-8, 8)),
            "L": box3((-1, 1), (-1, 1), (-8, -2)) +
                 box3((-1, 1), (-1, 1), (2, 8)),
            "N_alt": box3((-1, 1), (-1, 1), (-6, 6)),
            "L_alt": box3((-1, 1), (-1, 1), (-6, -2)) +
                     box3((-1, 1), (-1, 1), (2, 6)),
        },
    }
    write(name, doc)


def box3(xr, yr, zr):
    out = []
    for x in range(*xr):
        for y in range(*yr):
            for z in range(*zr):
                out.append([[x, x + 1], [y, y + 1], [z, z + 1]])
    return out


def ar1d_fixture():
    """f(x) = (3x - x^3)/2 on an eighth-unit grid (g = 8x).

    Repeller at 0, attractors at x = +-1 (g = +-8), heteroclinic arcs
    between; the triple (N0, N1, N2 = empty) realizes the
    attractor-repeller decomposition.
    """
    def f(x):
        return (3 * x - x ** 3) / 2

    entries = []
    for k in range(-16, 16):
        a, b = Fraction(k, 8), Fraction(k + 1, 8)
        pts = [a, b] + [c for c in (Fraction(-1), Fraction(1)) if a < c < b]
        vals = [8 * f(x) for x in pts]
        entries.append([cube1(k), block_from_interval(min(vals), max(vals))])
    doc = {
        "dimension": 1,
        "bounds": [[-16, 16]],
        "map": {"type": "table", "entries": entries},
        "field": "Q",
        "regions": {
            "N0": cells([(-12, 12)]),
            "N1": cells([(-12, -4), (4, 12)]),
            "N2": [],
            "N0_alt": cells([(-10, 10)]),
            "N1_alt": cells([(-10, -4), (4, 10)]),
        },
    }
    write("ar1d.json", doc)


def no_connection_fixture():
    """Disjoint repeller (f = 2x near 0) and attractor (fixed point at
    17); no connecting orbits, so the connection map vanishes."""
    entries = []
    for k in range(-6, 6):
        entries.append([cube1(k),
                        block_from_interval(Fraction(2 * k),
                                            Fraction(2 * k + 2))])
    for k in range(13, 21):
        lo = 17 + Fraction(k - 17, 2)
        hi = 17 + Fraction(k - 16, 2)
        entries.append([cube1(k), block_from_interval(lo, hi)])
    doc = {
        "dimension": 1,
        "bounds": [[-16, 25]],
        "map": {"type": "table", "entries": entries},
        "field": "Q",
        "regions": {
            "N0": cells([(-6, 6), (13, 21)]),
            "N1": cells([(-6, -2), (2, 6), (13, 21)]),
            "N2": cells([(-6, -2), (2, 6)]),
        },
    }
    write("no-connection.json", doc)


def main():
    os.makedirs(OUT, exist_ok=True)
    saddle_fixture("2", "saddle3d.json")
    saddle_fixture("-2", "flip3d.json")
    ar1d_fixture()
    no_connection_fixture()


if __name__ == "__main__":
    main()
