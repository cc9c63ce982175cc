"""
(N, M) multiple description coding with discrete Mojette projections.

A payload is cut into 16-bit symbols laid out on a Q x P block with Q = M
rows. Each description is the projection of the block along one direction
(p, q=1); any M distinct directions satisfy the Katz condition for a
Q-row block, so any M descriptions rebuild the payload exactly.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from mpolsr.config.const import Constant
from mpolsr.errors import CorruptDescription, InsufficientDescriptions

SYMBOL_BYTES = Constant.symbol_bits // 8
SYMBOL_LIMIT = 1 << Constant.symbol_bits


def default_directions(n: int) -> List[int]:
    """The n directions of smallest |p|, positive first: 0, 1, -1, 2, -2, ..."""
    dirs = [0]
    step = 1
    while len(dirs) < n:
        dirs.append(step)
        if len(dirs) < n:
            dirs.append(-step)
        step += 1
    return dirs[:n]


@dataclass(frozen=True)
class CodecConfig:
    """N descriptions, any M of which rebuild the payload."""

    n_descriptions: int = Constant.mdc_n
    m_required: int = Constant.mdc_m
    projection_dirs: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.n_descriptions < 1:
            raise ValueError("n_descriptions must be >= 1")
        if not 0 < self.m_required <= self.n_descriptions:
            raise ValueError("m_required must satisfy 0 < M <= N")
        dirs = tuple(self.projection_dirs) or tuple(default_directions(self.n_descriptions))
        if len(dirs) != self.n_descriptions:
            raise ValueError("need exactly one projection direction per description")
        if len(set(dirs)) != len(dirs):
            raise ValueError("projection directions must be pairwise distinct")
        object.__setattr__(self, "projection_dirs", dirs)


@dataclass(frozen=True)
class Block:
    """Q x P array of 16-bit symbols (rows first) and the padding added."""

    symbols: np.ndarray
    pad_len: int

    @property
    def rows(self) -> int:
        return self.symbols.shape[0]

    @property
    def cols(self) -> int:
        return self.symbols.shape[1]


@dataclass(frozen=True)
class Description:
    """One projection of a block: direction p and its bin vector."""

    group_id: int
    index: int
    p: int
    dims: Tuple[int, int]
    pad_len: int
    bins: Tuple[int, ...] = field(repr=False)

    def size_bytes(self) -> int:
        """Bytes on the air: header plus fixed-width bins."""
        return Constant.mdc_header_bytes + Constant.mdc_bin_bytes * len(self.bins)


def make_block(payload: bytes, m: int) -> Block:
    """Split payload into symbols, zero-padded to an m-row rectangle."""
    if not payload:
        raise ValueError("payload must not be empty")
    if m < 1:
        raise ValueError("m must be >= 1")
    cell = m * SYMBOL_BYTES
    cols = -(-len(payload) // cell)
    pad_len = cols * cell - len(payload)
    padded = bytes(payload) + b"\x00" * pad_len
    symbols = np.frombuffer(padded, dtype=">u2").astype(np.int64).reshape(m, cols)
    return Block(symbols, pad_len)


def unmake_block(block: Block) -> bytes:
    """Inverse of make_block."""
    raw = block.symbols.astype(">u2").tobytes()
    return raw[: len(raw) - block.pad_len]


def _bin_offset(p: int, rows: int) -> int:
    return -min(0, p * (rows - 1))


def _bin_count(p: int, rows: int, cols: int) -> int:
    return cols + (rows - 1) * abs(p)


def _bin_indices(p: int, rows: int, cols: int) -> np.ndarray:
    """Bin index of every (row l, col k) cell: k + p*l - min(0, p*(Q-1))."""
    l, k = np.indices((rows, cols))
    return k + p * l + _bin_offset(p, rows)


def project(block: Block, p: int, group_id: int = 0, index: int = 0) -> Description:
    """Mojette projection of block along (p, 1)."""
    rows, cols = block.symbols.shape
    bins = np.zeros(_bin_count(p, rows, cols), dtype=np.int64)
    np.add.at(bins, _bin_indices(p, rows, cols).ravel(), block.symbols.ravel())
    return Description(
        group_id=group_id,
        index=index,
        p=p,
        dims=(cols, rows),
        pad_len=block.pad_len,
        bins=tuple(int(b) for b in bins),
    )


def encode(payload: bytes, config: CodecConfig, group_id: int = 0) -> List[Description]:
    """One description per configured direction, all over the same block."""
    block = make_block(payload, config.m_required)
    return [
        project(block, p, group_id=group_id, index=i)
        for i, p in enumerate(config.projection_dirs)
    ]


def _distinct(descriptions: Iterable[Description]) -> List[Description]:
    by_direction = {}
    for desc in sorted(descriptions, key=lambda d: (d.index, d.p)):
        by_direction.setdefault(desc.p, desc)
    return list(by_direction.values())


def decode(descriptions: Iterable[Description], config: CodecConfig) -> bytes:
    """
    Rebuild the payload from at least M distinct descriptions.

    Inversion repeatedly takes a bin whose line still crosses exactly one
    unknown cell, solves that cell and subtracts it from every projection.

    Raises:
        InsufficientDescriptions: fewer than M distinct directions.
        CorruptDescription: the projections contradict each other.
    """
    descs = _distinct(descriptions)
    group = descs[0].group_id if descs else None
    if len(descs) < config.m_required:
        raise InsufficientDescriptions(
            Constant.error_insufficient.format(
                available=len(descs), group=group, required=config.m_required
            )
        )
    first = descs[0]
    for desc in descs:
        if (desc.group_id, desc.dims, desc.pad_len) != (first.group_id, first.dims, first.pad_len):
            raise CorruptDescription(
                Constant.error_corrupt.format(group=group, reason="mixed groups or dimensions")
            )
    cols, rows = first.dims
    if rows != config.m_required:
        raise CorruptDescription(
            Constant.error_corrupt.format(group=group, reason=f"block has {rows} rows")
        )
    for desc in descs:
        if len(desc.bins) != _bin_count(desc.p, rows, cols):
            raise CorruptDescription(
                Constant.error_corrupt.format(group=group, reason=f"bad bin count for p={desc.p}")
            )

    symbols = _invert(descs, rows, cols, group)
    return unmake_block(Block(symbols, first.pad_len))


def _invert(descs: Sequence[Description], rows: int, cols: int, group) -> np.ndarray:
    indices = [_bin_indices(d.p, rows, cols).tolist() for d in descs]
    residue = [list(d.bins) for d in descs]
    members: List[List[List[Tuple[int, int]]]] = []
    counts: List[List[int]] = []
    for j, desc in enumerate(descs):
        lines: List[List[Tuple[int, int]]] = [[] for _ in desc.bins]
        for l in range(rows):
            for k in range(cols):
                lines[indices[j][l][k]].append((l, k))
        members.append(lines)
        counts.append([len(line) for line in lines])

    solved = np.zeros((rows, cols), dtype=np.int64)
    known = [[False] * cols for _ in range(rows)]
    pending = [
        (j, b) for j in range(len(descs)) for b in range(len(counts[j])) if counts[j][b] == 1
    ]
    pending.reverse()
    remaining = rows * cols

    while pending:
        j, b = pending.pop()
        if counts[j][b] != 1:
            continue
        l, k = next((l, k) for l, k in members[j][b] if not known[l][k])
        value = residue[j][b]
        if not 0 <= value < SYMBOL_LIMIT:
            raise CorruptDescription(
                Constant.error_corrupt.format(group=group, reason=f"bin residue {value}")
            )
        solved[l, k] = value
        known[l][k] = True
        remaining -= 1
        for jj in range(len(descs)):
            bb = indices[jj][l][k]
            residue[jj][bb] -= value
            counts[jj][bb] -= 1
            if counts[jj][bb] == 1:
                pending.append((jj, bb))

    if remaining:
        raise CorruptDescription(
            Constant.error_corrupt.format(group=group, reason="inversion stalled")
        )
    if any(any(r) for r in residue):
        raise CorruptDescription(
            Constant.error_corrupt.format(group=group, reason="non-zero residue")
        )
    return solved
