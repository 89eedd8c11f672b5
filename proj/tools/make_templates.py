#!/usr/bin/env python3
"""Regenerates data/templates.json, the canonical doodle templates.

Every class gets one hand-authored drawing in a 256x256 space, stroke order as
people usually draw it. avatar, cancel, checkbox and plus additionally get a
variant without their outer boundary.
"""
import json
import math
import sys
from pathlib import Path


def line(x0, y0, x1, y1, n=8):
    return [(x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * i / n) for i in range(n + 1)]


def poly(*pts):
    out = []
    for (a, b) in zip(pts, pts[1:]):
        seg = line(a[0], a[1], b[0], b[1], 6)
        out.extend(seg if not out else seg[1:])
    return out


def arc(cx, cy, rx, ry, a0, a1, n=24):
    return [(cx + rx * math.cos(math.radians(a0 + (a1 - a0) * i / n)),
             cy + ry * math.sin(math.radians(a0 + (a1 - a0) * i / n))) for i in range(n + 1)]


def circle(cx, cy, r, start=-90, n=32):
    return arc(cx, cy, r, r, start, start + 360, n)


def rect(x0, y0, x1, y1):
    return poly((x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0))


def pill(x0, y0, x1, y1):
    r = (y1 - y0) / 2
    top = line(x0 + r, y0, x1 - r, y0)
    right = arc(x1 - r, y0 + r, r, r, -90, 90, 12)[1:]
    bottom = line(x1 - r, y1, x0 + r, y1)[1:]
    left = arc(x0 + r, y0 + r, r, r, 90, 270, 12)[1:]
    return top + right + bottom + left


def star(cx, cy, r_out, r_in):
    pts = []
    for i in range(11):
        r = r_out if i % 2 == 0 else r_in
        a = math.radians(-90 + 36 * i)
        pts.append((cx + r * math.cos(a), cy + r * math.sin(a)))
    return poly(*pts)


def gear(cx, cy, r_out, r_in, teeth=8):
    pts = []
    for i in range(teeth * 4 + 1):
        phase = i % 4
        r = r_out if phase in (1, 2) else r_in
        a = math.radians(-90 + 360 * i / (teeth * 4))
        pts.append((cx + r * math.cos(a), cy + r * math.sin(a)))
    return poly(*pts)


def cloud(cx, cy):
    bumps = [(-70, 10, 34), (-35, -25, 40), (15, -40, 45), (60, -10, 38), (75, 25, 28)]
    pts = []
    for (dx, dy, r) in bumps:
        pts.extend(arc(cx + dx, cy + dy, r, r, 150, 360, 10))
    pts.extend(line(cx + 100, cy + 50, cx - 100, cy + 50, 10))
    pts.append(pts[0])
    return pts


def squiggle():
    return [(24 + i * 208 / 48, 128 + 30 * math.sin(i * 2 * math.pi / 12)) for i in range(49)]


def templates():
    t = {}
    outer = circle(128, 128, 100)
    head = circle(128, 100, 30)
    shoulders = arc(128, 190, 58, 46, 180, 360, 16)
    t["avatar"] = [[outer, head, shoulders], [head, shoulders]]
    t["back"] = [[line(40, 128, 216, 128), poly((104, 64), (40, 128), (104, 192))]]
    x1 = line(68, 68, 188, 188)
    x2 = line(188, 68, 68, 188)
    t["cancel"] = [[outer, x1, x2], [x1, x2]]
    check = poly((72, 132), (112, 176), (188, 72))
    t["checkbox"] = [[check, rect(40, 40, 216, 216)], [check]]
    t["dropdown"] = [[rect(24, 90, 232, 166), poly((168, 112), (208, 112), (188, 144), (168, 112))]]
    t["forward"] = [[poly((90, 40), (180, 128), (90, 216))]]
    t["left_arrow"] = [[poly((166, 40), (76, 128), (166, 216))]]
    t["menu"] = [[line(40, 64, 216, 64), line(40, 128, 216, 128), line(40, 192, 216, 192)]]
    t["play"] = [[poly((72, 40), (200, 128), (72, 216), (72, 40))]]
    v = line(128, 64, 128, 192)
    h = line(64, 128, 192, 128)
    t["plus"] = [[outer, v, h], [v, h]]
    t["search"] = [[circle(108, 108, 72), line(160, 160, 232, 232)]]
    t["setting"] = [[gear(128, 128, 104, 80), circle(128, 128, 34)]]
    t["share"] = [[circle(188, 64, 26), line(165, 76, 91, 116), circle(68, 128, 26),
                   line(91, 140, 165, 180), circle(188, 192, 26)]]
    t["slider"] = [[line(24, 128, 232, 128), circle(96, 128, 24)]]
    t["squiggle"] = [[squiggle()]]
    t["switch"] = [[pill(32, 84, 224, 172), circle(180, 128, 30)]]
    t["camera"] = [[poly((24, 80), (80, 80), (96, 52), (160, 52), (176, 80), (232, 80),
                         (232, 208), (24, 208), (24, 80)), circle(128, 140, 44)]]
    t["cloud"] = [[cloud(128, 140)]]
    t["envelope"] = [[rect(24, 60, 232, 196), poly((24, 60), (128, 140), (232, 60))]]
    t["house"] = [[poly((28, 120), (128, 28), (228, 120)), poly((52, 104), (52, 228), (204, 228), (204, 104)),
                   poly((108, 228), (108, 168), (148, 168), (148, 228))]]
    t["jail_window"] = [[rect(56, 24, 200, 232), line(92, 24, 92, 232), line(128, 24, 128, 232),
                         line(164, 24, 164, 232), line(56, 128, 200, 128)]]
    t["square"] = [[rect(40, 40, 216, 216)]]
    t["star"] = [[star(128, 136, 110, 44)]]
    return t


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "templates.json"
    classes = {}
    for name, drawings in templates().items():
        classes[name] = [{"strokes": [[[round(x), round(y)] for (x, y) in stroke] for stroke in d]}
                         for d in drawings]
    assert len(classes) == 23
    out.write_text(json.dumps({"version": 1, "classes": classes}, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
