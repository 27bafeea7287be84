"""Target distributions and grid-image block decomposition.

One-point targets put all probability on a single basis state.  The one-hot
vector form lists components in printed order, most significant basis index
first, so value v carries its 1 at printed position 2^N - 1 - v; the
probability vector form is indexed directly by basis index.  Grid images are
8 x 20 binary cell arrays split into forty 2 x 2 blocks in left-to-right,
top-to-bottom scan order; inside a block the cells map to qubits in row-major
order (top-left, top-right, bottom-left, bottom-right).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

GRID_ROWS = 8
GRID_COLS = 20
BLOCK_COUNT = (GRID_ROWS * GRID_COLS) // 4


def validate_distribution(probs: np.ndarray) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0 or (p.size & (p.size - 1)):
        raise ValueError("distribution length must be a power of two")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("probabilities must be nonnegative and sum to 1")
    return p


def one_point(bitstring: str, n: int) -> np.ndarray:
    """Probability vector with mass 1 on the encoded basis state."""
    if len(bitstring) != n or any(c not in "01" for c in bitstring):
        raise ValueError(f"malformed bitstring {bitstring!r} for {n} qubits")
    probs = np.zeros(1 << n)
    probs[int(bitstring, 2)] = 1.0
    return probs


def onehot_encode(bitstring: str) -> np.ndarray:
    """16-dim 0/1 column in printed order (index 15 first, index 0 last)."""
    if len(bitstring) != 4 or any(c not in "01" for c in bitstring):
        raise ValueError(f"malformed 4-bit string {bitstring!r}")
    v = int(bitstring, 2)
    vec = np.zeros(16, dtype=int)
    vec[15 - v] = 1
    return vec


def onehot_decode(vec: np.ndarray) -> str:
    v = np.asarray(vec)
    if v.shape != (16,) or v.sum() != 1 or not np.all((v == 0) | (v == 1)):
        raise ValueError("not a 16-dim one-hot vector")
    return format(15 - int(np.argmax(v)), "04b")


@dataclass(frozen=True)
class GridImage:
    cells: np.ndarray  # (8, 20) of 0/1, 1 = black

    def __post_init__(self):
        c = np.asarray(self.cells)
        if c.shape != (GRID_ROWS, GRID_COLS):
            raise ValueError(f"grid must be {GRID_ROWS}x{GRID_COLS}")
        if not np.all((c == 0) | (c == 1)):
            raise ValueError("cells must be 0 or 1")
        object.__setattr__(self, "cells", c.astype(np.int8))

    def render(self) -> str:
        return "\n".join("".join(str(int(v)) for v in row) for row in self.cells)

    def black_count(self) -> int:
        return int(self.cells.sum())


def load_grid(text: str) -> GridImage:
    """Parse an 8x20 grid from text: 8 lines of 20 characters from {0, 1}."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != GRID_ROWS:
        raise ValueError(f"expected {GRID_ROWS} grid lines, got {len(lines)}")
    rows = []
    for ln in lines:
        if len(ln) != GRID_COLS or any(c not in "01" for c in ln):
            raise ValueError(f"bad grid line {ln!r}")
        rows.append([int(c) for c in ln])
    return GridImage(np.array(rows))


def bundled_grid() -> GridImage:
    """The reference word-image shipped with the package."""
    text = resources.files("fcqbm").joinpath("data/qubit_grid.txt").read_text()
    return load_grid(text)


@dataclass(frozen=True)
class Block:
    row: int  # top cell row
    col: int  # left cell column

    def bitstring(self, img: GridImage) -> str:
        c = img.cells
        quad = (c[self.row, self.col], c[self.row, self.col + 1],
                c[self.row + 1, self.col], c[self.row + 1, self.col + 1])
        return "".join(str(int(v)) for v in quad)


def decompose(img: GridImage) -> list[Block]:
    """The forty 2x2 blocks in left-to-right, top-to-bottom scan order."""
    return [Block(2 * br, 2 * bc)
            for br in range(GRID_ROWS // 2) for bc in range(GRID_COLS // 2)]


def block_target(img: GridImage, block: Block) -> np.ndarray:
    return one_point(block.bitstring(img), 4)


def assemble(bitstrings: list[str]) -> GridImage:
    """Rebuild a grid from forty per-block bitstrings in scan order."""
    if len(bitstrings) != BLOCK_COUNT:
        raise ValueError(f"need exactly {BLOCK_COUNT} block results")
    cells = np.zeros((GRID_ROWS, GRID_COLS), dtype=np.int8)
    blocks = [Block(2 * br, 2 * bc)
              for br in range(GRID_ROWS // 2) for bc in range(GRID_COLS // 2)]
    for blk, bits in zip(blocks, bitstrings):
        if len(bits) != 4 or any(c not in "01" for c in bits):
            raise ValueError(f"bad block bitstring {bits!r}")
        cells[blk.row, blk.col] = int(bits[0])
        cells[blk.row, blk.col + 1] = int(bits[1])
        cells[blk.row + 1, blk.col] = int(bits[2])
        cells[blk.row + 1, blk.col + 1] = int(bits[3])
    return GridImage(cells)
