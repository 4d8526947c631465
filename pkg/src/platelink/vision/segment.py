"""Connected-component character segmentation.

Works on a binarized frame (pixels in {0, 255}): dark pixels are ink.
Components are found with 4-connectivity using a classic two-pass
row-run union-find, then filtered by area and aspect ratio and returned
left to right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from platelink.vision.image import ensure_gray

MIN_AREA_PX = 30
MIN_ASPECT = 0.2  # width / height
MAX_ASPECT = 1.2


@dataclass(frozen=True)
class SegmentBox:
    x: int
    y: int
    w: int
    h: int

    @property
    def aspect(self) -> float:
        return self.w / self.h


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def _union(parent: list[int], a: int, b: int) -> None:
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        parent[max(ra, rb)] = min(ra, rb)


def segment_characters(binary: np.ndarray) -> list[SegmentBox]:
    """Bounding boxes of plausible glyph components, sorted by left edge.

    Keeps components with area >= 30 px and width/height within
    [0.2, 1.2]. Raises ValueError if the input is not binary.
    """
    ensure_gray(binary)
    if not np.isin(binary, (0, 255)).all():
        raise ValueError("segmentation input must be binary (pixels in {0, 255})")
    dark = binary == 0

    # Row runs: (row, x_start, x_end_exclusive, label)
    runs: list[tuple[int, int, int, int]] = []
    parent: list[int] = []
    prev_row: list[tuple[int, int, int]] = []  # (x0, x1, label) of previous row
    for y in range(dark.shape[0]):
        row = dark[y]
        idx = np.flatnonzero(row)
        cur: list[tuple[int, int, int]] = []
        if idx.size:
            splits = np.flatnonzero(np.diff(idx) > 1) + 1
            for seg in np.split(idx, splits):
                x0, x1 = int(seg[0]), int(seg[-1]) + 1
                label = len(parent)
                parent.append(label)
                # 4-connectivity: merge with previous-row runs sharing columns
                for px0, px1, plabel in prev_row:
                    if px0 < x1 and x0 < px1:
                        _union(parent, label, plabel)
                cur.append((x0, x1, label))
                runs.append((y, x0, x1, label))
        prev_row = cur

    # Accumulate per-root extents
    boxes: dict[int, list[int]] = {}  # root -> [minx, maxx, miny, maxy, area]
    for y, x0, x1, label in runs:
        root = _find(parent, label)
        b = boxes.get(root)
        if b is None:
            boxes[root] = [x0, x1, y, y, x1 - x0]
        else:
            b[0] = min(b[0], x0)
            b[1] = max(b[1], x1)
            b[3] = y
            b[4] += x1 - x0

    out = []
    for minx, maxx, miny, maxy, area in boxes.values():
        w = maxx - minx
        h = maxy - miny + 1
        if area < MIN_AREA_PX:
            continue
        if not (MIN_ASPECT <= w / h <= MAX_ASPECT):
            continue
        out.append(SegmentBox(minx, miny, w, h))
    out.sort(key=lambda b: (b.x, b.y))
    return out
