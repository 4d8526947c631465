#!/usr/bin/env python3
"""Generate the built-in glyph template font.

Each glyph is authored here as 8x12 ASCII art ('#' = ink) and exported,
doubled to 16x24, as one binary PBM (P4) file per glyph under
src/platelink/vision/templates/. The PBM files are the font the package
ships; this script is only re-run when the designs change.

Design constraints enforced below:

* every glyph fills its box (ink touches all four edges), so a tight
  bounding box crop of a rendered glyph maps back onto the template
  without registration error;
* every glyph is a single 4-connected component, matching the
  segmenter's connectivity;
* no two glyphs are identical, and correlation between distinct glyphs
  stays noticeably below a self match.
"""

from __future__ import annotations

import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from platelink.vision.image import write_pbm

ART_W, ART_H = 8, 12
SCALE = 2  # shipped templates are 16x24

GLYPH_ART = {
    "A": [
        "########",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "########",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
    ],
    "B": [
        "#######.",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "#######.",
        "#######.",
        "##....##",
        "##....##",
        "##....##",
        "########",
        "#######.",
    ],
    "C": [
        ".#######",
        "########",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "########",
        ".#######",
    ],
    "D": [
        "######..",
        "#######.",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "#######.",
        "######..",
    ],
    "E": [
        "########",
        "########",
        "##......",
        "##......",
        "##......",
        "######..",
        "######..",
        "##......",
        "##......",
        "##......",
        "########",
        "########",
    ],
    "F": [
        "########",
        "########",
        "##......",
        "##......",
        "##......",
        "######..",
        "######..",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
    ],
    "G": [
        ".#######",
        "########",
        "##......",
        "##......",
        "##......",
        "##..####",
        "##..####",
        "##....##",
        "##....##",
        "##....##",
        "########",
        ".#######",
    ],
    "H": [
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "########",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
    ],
    "I": [
        "########",
        "########",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "########",
        "########",
    ],
    "J": [
        "########",
        "########",
        "....##..",
        "....##..",
        "....##..",
        "....##..",
        "....##..",
        "....##..",
        "##..##..",
        "##..##..",
        "######..",
        "######..",
    ],
    "K": [
        "##....##",
        "##...##.",
        "##..##..",
        "##.##...",
        "####....",
        "###.....",
        "###.....",
        "####....",
        "##.##...",
        "##..##..",
        "##...##.",
        "##....##",
    ],
    "L": [
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
        "########",
        "########",
    ],
    "M": [
        "########",
        "########",
        "##.##.##",
        "##.##.##",
        "##.##.##",
        "##.##.##",
        "##.##.##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
    ],
    "N": [
        "##....##",
        "##....##",
        "####..##",
        "####..##",
        "##.##.##",
        "##.##.##",
        "##..####",
        "##..####",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
    ],
    "O": [
        ".######.",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "########",
        ".######.",
    ],
    "P": [
        "########",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "########",
        "########",
        "##......",
        "##......",
        "##......",
        "##......",
        "##......",
    ],
    "Q": [
        ".######.",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##..####",
        "##..####",
        "########",
        ".#######",
    ],
    "R": [
        "########",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "########",
        "########",
        "####....",
        "##.##...",
        "##..##..",
        "##...##.",
        "##....##",
    ],
    "S": [
        ".#######",
        "########",
        "##......",
        "##......",
        "##......",
        ".######.",
        ".######.",
        "......##",
        "......##",
        "......##",
        "########",
        "#######.",
    ],
    "T": [
        "########",
        "########",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
    ],
    "U": [
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "########",
        ".######.",
    ],
    "V": [
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        ".##..##.",
        ".##..##.",
        ".##..##.",
        ".##..##.",
        "..####..",
        "..####..",
        "...##...",
        "...##...",
    ],
    "W": [
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##....##",
        "##.##.##",
        "##.##.##",
        "##.##.##",
        "##.##.##",
        "##.##.##",
        "########",
        "########",
    ],
    "X": [
        "##....##",
        "###..###",
        ".##..##.",
        ".######.",
        "..####..",
        "...##...",
        "...##...",
        "..####..",
        ".######.",
        ".##..##.",
        "###..###",
        "##....##",
    ],
    "Y": [
        "##....##",
        "##....##",
        ".##..##.",
        ".##..##.",
        "..####..",
        "..####..",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
    ],
    "Z": [
        "########",
        "########",
        ".....###",
        "....###.",
        "...###..",
        "..###...",
        ".###....",
        "###.....",
        "##......",
        "##......",
        "########",
        "########",
    ],
    "0": [
        ".######.",
        "########",
        "##....##",
        "##..####",
        "##..####",
        "##.##.##",
        "##.##.##",
        "####..##",
        "####..##",
        "##....##",
        "########",
        ".######.",
    ],
    "1": [
        "...##...",
        "..###...",
        ".####...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "...##...",
        "########",
        "########",
    ],
    "2": [
        ".######.",
        "########",
        "##....##",
        "......##",
        "......##",
        "....###.",
        "...###..",
        "..###...",
        ".###....",
        "###.....",
        "########",
        "########",
    ],
    "3": [
        ".######.",
        "########",
        "##....##",
        "......##",
        "......##",
        "..#####.",
        "..#####.",
        "......##",
        "......##",
        "##....##",
        "########",
        ".######.",
    ],
    "4": [
        ".....##.",
        "...####.",
        "...####.",
        "..##.##.",
        "..##.##.",
        ".##..##.",
        ".##..##.",
        "########",
        "########",
        ".....##.",
        ".....##.",
        ".....##.",
    ],
    "5": [
        "########",
        "########",
        "##......",
        "##......",
        "##......",
        "#######.",
        "########",
        "......##",
        "......##",
        "......##",
        "########",
        "#######.",
    ],
    "6": [
        ".#######",
        "########",
        "##......",
        "##......",
        "##......",
        "#######.",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "########",
        ".######.",
    ],
    "7": [
        "########",
        "########",
        "......##",
        "......##",
        ".....##.",
        ".....##.",
        "....##..",
        "....##..",
        "...##...",
        "...##...",
        "..##....",
        "..##....",
    ],
    "8": [
        ".######.",
        "########",
        "##....##",
        "##....##",
        ".##..##.",
        "..####..",
        "..####..",
        ".##..##.",
        "##....##",
        "##....##",
        "########",
        ".######.",
    ],
    "9": [
        ".######.",
        "########",
        "##....##",
        "##....##",
        "##....##",
        "########",
        ".#######",
        "......##",
        "......##",
        "......##",
        "########",
        "#######.",
    ],
}


def art_to_bitmap(rows: list[str]) -> np.ndarray:
    if len(rows) != ART_H or any(len(r) != ART_W for r in rows):
        raise ValueError("glyph art must be exactly %dx%d" % (ART_W, ART_H))
    return np.array([[c == "#" for c in row] for row in rows], dtype=bool)


def connected_components(mask: np.ndarray) -> int:
    """Count 4-connected ink components (tiny flood fill, art-sized input)."""
    seen = np.zeros_like(mask, dtype=bool)
    h, w = mask.shape
    count = 0
    for y0 in range(h):
        for x0 in range(w):
            if mask[y0, x0] and not seen[y0, x0]:
                count += 1
                stack = [(y0, x0)]
                seen[y0, x0] = True
                while stack:
                    y, x = stack.pop()
                    for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                        ny, nx = y + dy, x + dx
                        if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and not seen[ny, nx]:
                            seen[ny, nx] = True
                            stack.append((ny, nx))
    return count


def ncc(a: np.ndarray, b: np.ndarray) -> float:
    da = a.astype(float) - a.mean()
    db = b.astype(float) - b.mean()
    den = np.sqrt((da * da).sum() * (db * db).sum())
    return float((da * db).sum() / den) if den else 0.0


def validate(glyphs: dict[str, np.ndarray]) -> None:
    for g, bm in glyphs.items():
        if not (bm[0].any() and bm[-1].any() and bm[:, 0].any() and bm[:, -1].any()):
            raise AssertionError(f"glyph {g!r} does not touch all four box edges")
        n = connected_components(bm)
        if n != 1:
            raise AssertionError(f"glyph {g!r} has {n} components, expected 1")
    names = sorted(glyphs)
    worst = ("", "", -1.0)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            c = ncc(glyphs[a], glyphs[b])
            if c > worst[2]:
                worst = (a, b, c)
            if c > 0.95:
                raise AssertionError(f"glyphs {a!r}/{b!r} too similar (ncc {c:.3f})")
    print(f"validated {len(names)} glyphs; closest pair {worst[0]}/{worst[1]} ncc={worst[2]:.3f}")


def main() -> int:
    out_dir = os.path.join(os.path.dirname(__file__), "..", "src", "platelink", "vision", "templates")
    os.makedirs(out_dir, exist_ok=True)
    glyphs = {g: art_to_bitmap(rows) for g, rows in GLYPH_ART.items()}
    validate(glyphs)
    for g, bm in sorted(glyphs.items()):
        scaled = np.kron(bm, np.ones((SCALE, SCALE), dtype=bool))
        write_pbm(os.path.join(out_dir, f"{g}.pbm"), scaled)
    print(f"wrote {len(glyphs)} templates to {os.path.abspath(out_dir)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
