#!/usr/bin/env python3
# Copyright 2026 The luxsim Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the synthetic 6 x 4 x 3 m test room into data/room/.

Eight ceiling luminaires (two triangles each) and eight floor sensors on a
0.5 m grid. The 31 scenarios follow the convention in README.md; they are not
the activation sets of any published measurement campaign.
"""

import argparse
import json
from pathlib import Path

LX, LY, LZ = 6.0, 4.0, 3.0
CELL = 0.5
FLUX = 7913.0

LDC = [(0, 1.0), (15, 0.97), (30, 0.86), (45, 0.65), (60, 0.38), (75, 0.14), (90, 0.0)]
LSC = [(0, 1.0), (20, 0.98), (40, 0.93), (60, 0.80), (75, 0.55), (85, 0.25), (90, 0.0)]


class Builder:
    def __init__(self):
        self.verts = {}
        self.faces = []
        self.tags = []

    def vid(self, p):
        key = tuple(round(c, 9) for c in p)
        if key not in self.verts:
            self.verts[key] = len(self.verts) + 1
        return self.verts[key]

    def grid(self, origin, du, dv, nu, nv, tag):
        """Two triangles per cell; returns {(i, j): [face ids]}."""
        cells = {}
        for j in range(nv):
            for i in range(nu):
                c = [tuple(origin[k] + (i + a) * du[k] + (j + b) * dv[k] for k in range(3))
                     for a, b in ((0, 0), (1, 0), (1, 1), (0, 1))]
                ids = [self.vid(p) for p in c]
                cells[(i, j)] = [len(self.faces), len(self.faces) + 1]
                self.faces.append((ids[0], ids[1], ids[2]))
                self.faces.append((ids[0], ids[2], ids[3]))
                self.tags += [tag, tag]
        return cells


def scenarios(ids):
    out = [[i] for i in ids]
    out += [ids[k:k + 2] for k in range(7)]
    out += [ids[k:k + 3] for k in range(6)]
    out += [ids[k:k + 4] for k in range(5)]
    out += [ids[0::2], ids[1::2], ids[:6], ids[:7], ids]
    return [{"id": "S%02d" % (n + 1), "active": s} for n, s in enumerate(out)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "room"))
    args = ap.parse_args()
    out = Path(args.out)
    (out / "curves").mkdir(parents=True, exist_ok=True)

    nx, ny, nz = int(LX / CELL), int(LY / CELL), int(LZ / CELL)
    b = Builder()
    floor = b.grid((0, 0, 0), (CELL, 0, 0), (0, CELL, 0), nx, ny, "floor")
    ceiling = b.grid((0, 0, LZ), (CELL, 0, 0), (0, CELL, 0), nx, ny, "ceiling")
    b.grid((0, 0, 0), (CELL, 0, 0), (0, 0, CELL), nx, nz, "wall")
    b.grid((0, LY, 0), (CELL, 0, 0), (0, 0, CELL), nx, nz, "wall")
    b.grid((0, 0, 0), (0, CELL, 0), (0, 0, CELL), ny, nz, "wall")
    b.grid((LX, 0, 0), (0, CELL, 0), (0, 0, CELL), ny, nz, "wall")

    with open(out / "room.obj", "w") as f:
        f.write("# synthetic room %gx%gx%g m, %d triangles\n" % (LX, LY, LZ, len(b.faces)))
        for p in sorted(b.verts, key=b.verts.get):
            f.write("v %.9g %.9g %.9g\n" % p)
        for a, c, d in b.faces:
            f.write("f %d %d %d\n" % (a, c, d))

    rho = {"floor": 0.2, "wall": 0.5, "ceiling": 0.7}
    with open(out / "albedo.csv", "w") as f:
        f.write("id,rho\n")
        for i, t in enumerate(b.tags):
            f.write("%d,%g\n" % (i, rho[t]))

    for name, rows in (("ldc", LDC), ("lsc", LSC)):
        with open(out / "curves" / (name + ".csv"), "w") as f:
            f.write("angle_deg,value\n")
            for a, v in rows:
                f.write("%g,%g\n" % (a, v))

    # Luminaire and sensor grid: columns 1, 4, 7, 10 and rows 2, 5 of the 0.5 m cells.
    spots = [(i, j) for j in (2, 5) for i in (1, 4, 7, 10)]
    lum = [{"id": "L%d" % (k + 1), "patches": ceiling[s], "flux": FLUX, "age_factor": 1.0, "ldc": "ldc"}
           for k, s in enumerate(spots)]
    sensors = [{"id": "M%d" % (k + 1), "patch": floor[s][0], "lsc": "lsc"} for k, s in enumerate(spots)]
    scene = {
        "mesh": "room.obj",
        "albedo": {"default": 0.5, "per_patch": "albedo.csv"},
        "curves": {"ldc": "curves/ldc.csv", "lsc": "curves/lsc.csv"},
        "luminaires": lum,
        "sensors": sensors,
        "scenarios": scenarios([l["id"] for l in lum]),
        "sampler": {"method": "isocell", "rays": 1000, "seed": 0},
        "solver": {"method": "auto", "tol": 1e-9, "max_iter": 10000},
        "rectify": {"max_iter": 200, "tol": 1e-9},
    }
    with open(out / "scene.json", "w") as f:
        json.dump(scene, f, indent=2)
        f.write("\n")
    print("%d triangles, %d scenarios" % (len(b.faces), len(scene["scenarios"])))


if __name__ == "__main__":
    main()
