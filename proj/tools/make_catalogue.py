#!/usr/bin/env python3
"""Regenerates core/data/catalogue.csv.

Weights and bounding boxes are geometric estimates, not vendor data:

  spur / wheel / ring   steel cylinder at pitch diameter, face width 5 x module
  bevel / miter         same cylinder scaled by 0.6 (cone frustum), hub 2 x face width
  rack                  steel bar: length x (10 x module) x (5 x module)
  worm                  cylinder 16 mm x 30 mm, single start
  hypoid pinion         cylinder 20 mm x 30 mm, scaled by 0.8
  shaft                 carbon steel rod, diameter 10 mm

Gear boxes are (axial width, outside diameter, outside diameter); outside
diameter is (teeth + 2) x module.
"""

import math
import sys

RHO = 7850.0
VERSION = "gearsyn-catalogue/1"


def cylinder(radius, length):
    return RHO * math.pi * radius * radius * length


rows = []


def add(part, kind, module=None, teeth=None, length=None, bbox=(0, 0, 0), weight=0.0,
        hand="none", partners=()):
    radius = module * teeth / 2000.0 if (module is not None and teeth is not None) else None
    rows.append(dict(part=part, kind=kind, module=module, teeth=teeth, radius=radius,
                     length=length, bbox=bbox, weight=weight, hand=hand,
                     partners=list(partners)))


for name, length in [("SH-*", 0.0), ("SH-100", 0.1), ("SH-200", 0.2), ("SH-300", 0.3),
                     ("SH-400", 0.4), ("SH-500", 0.5)]:
    add(name, "shaft", length=length, bbox=(length, 0.01, 0.01),
        weight=cylinder(0.005, length))

spur_sets = {1.5: [20, 40, 60, 80], 2: [18, 25, 40, 60], 2.5: [15, 40, 55, 70],
             3: [15, 30, 45, 60]}


def fmt_module(m):
    return ("%g" % m)


for m in spur_sets:
    height, width = 10 * m / 1000.0, 5 * m / 1000.0
    spurs = ["MSGA%s-%d" % (fmt_module(m), z) for z in spur_sets[m]]
    add("MRGF%s-500" % fmt_module(m), "rack", module=m, length=0.5,
        bbox=(0.5, height, height), weight=RHO * 0.5 * height * width, partners=spurs)

for m, teeth in spur_sets.items():
    rack = "MRGF%s-500" % fmt_module(m)
    spurs = ["MSGA%s-%d" % (fmt_module(m), z) for z in teeth]
    for z in teeth:
        face = 5 * m / 1000.0
        od = (z + 2) * m / 1000.0
        add("MSGA%s-%d" % (fmt_module(m), z), "spur", module=m, teeth=z,
            bbox=(face, od, od), weight=cylinder(m * z / 2000.0, face),
            partners=spurs + [rack])

bevel = [("SBSG2-3020R", 30, "R", "SBSG2-2030L"), ("SBSG2-2030L", 20, "L", "SBSG2-3020R"),
         ("SBSG2-4020R", 40, "R", "SBSG2-2040L"), ("SBSG2-2040L", 20, "L", "SBSG2-4020R"),
         ("SBSG2-4515R", 45, "R", "SBSG2-1545L"), ("SBSG2-1545L", 15, "L", "SBSG2-4515R")]
for name, z, hand, mate in bevel:
    face = 0.010
    od = (z + 2) * 2 / 1000.0
    add(name, "bevel", module=2, teeth=z, bbox=(2 * face, od, od),
        weight=0.6 * cylinder(z / 1000.0, face), hand=hand, partners=[mate])

for name, hand, mate in [("MMSG2-20R", "R", "MMSG2-20L"), ("MMSG2-20L", "L", "MMSG2-20R")]:
    face = 0.010
    add(name, "miter", module=2, teeth=20, bbox=(2 * face, 0.044, 0.044),
        weight=0.6 * cylinder(0.02, face), hand=hand, partners=[mate])

wheels = [("AG1-20R1", 20), ("AG1-40R1", 40), ("AG1-60R1", 60)]
add("SWG1-R1", "worm", module=1, teeth=1, bbox=(0.03, 0.016, 0.016),
    weight=cylinder(0.008, 0.03), hand="R", partners=[w for w, _ in wheels])
for name, z in wheels:
    face = 0.005
    od = (z + 2) / 1000.0
    add(name, "worm_wheel", module=1, teeth=z, bbox=(face, od, od),
        weight=cylinder(z / 2000.0, face), hand="R", partners=["SWG1-R1"])

hypoid = [("MHP1-3045L", 3, "MHP1-0453R", 45), ("MHP1-2060L", 2, "MHP1-0602R", 60),
          ("MHP1-1045L", 1, "MHP1-0451R", 45)]
for pinion, zp, ring, zr in hypoid:
    add(pinion, "hypoid_pinion", module=1, teeth=zp, bbox=(0.03, 0.02, 0.02),
        weight=0.8 * cylinder(0.01, 0.03), hand="L", partners=[ring])
for pinion, zp, ring, zr in hypoid:
    face = 0.005
    od = (zr + 2) / 1000.0
    add(ring, "hypoid_ring", module=1, teeth=zr, bbox=(face, od, od),
        weight=cylinder(zr / 2000.0, face), hand="R", partners=[pinion])


def num(x):
    return "" if x is None else repr(float(x)) if not isinstance(x, int) else str(x)


out = sys.stdout
out.write("# gearsyn parts catalogue. Weights and boxes are geometric estimates;\n")
out.write("# regenerate with tools/make_catalogue.py.\n")
out.write("@version %s\n" % VERSION)
out.write("part_number,type,module_mm,teeth,pitch_radius_m,length_m,"
          "bbox_axial_m,bbox_t1_m,bbox_t2_m,weight_kg,handedness,partners\n")
for r in rows:
    fields = [r["part"], r["kind"], num(r["module"]), num(r["teeth"]), num(r["radius"]),
              num(r["length"]), num(r["bbox"][0]), num(r["bbox"][1]), num(r["bbox"][2]),
              num(r["weight"]), r["hand"], ";".join(r["partners"])]
    out.write(",".join(fields) + "\n")
