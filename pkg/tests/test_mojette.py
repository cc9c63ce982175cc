"""Unit tests for the Mojette multiple description codec.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import itertools
import random
import unittest
from dataclasses import replace

import numpy as np

from mpolsr.coding.mojette import (
    Block,
    CodecConfig,
    decode,
    default_directions,
    encode,
    make_block,
    project,
    unmake_block,
)
from mpolsr.errors import CorruptDescription, InsufficientDescriptions


def square() -> Block:
    return Block(np.array([[1, 2], [3, 4]], dtype=np.int64), 0)


class TestProjection(unittest.TestCase):
    """Line sums of a block along (p, 1)."""

    def test_vertical_projection(self):
        self.assertEqual(project(square(), 0).bins, (4, 6))

    def test_diagonal_projections(self):
        self.assertEqual(project(square(), 1).bins, (1, 5, 4))
        self.assertEqual(project(square(), -1).bins, (3, 5, 2))

    def test_bin_count_and_sum(self):
        """10^4 random blocks: P + (Q-1)|p| bins summing to the block total."""
        rng = np.random.default_rng(12)
        for _ in range(10_000):
            rows, cols = rng.integers(1, 7), rng.integers(1, 9)
            symbols = rng.integers(0, 1 << 16, size=(rows, cols), dtype=np.int64)
            p = int(rng.integers(-4, 5))
            desc = project(Block(symbols, 0), p)
            self.assertEqual(len(desc.bins), cols + (rows - 1) * abs(p))
            self.assertEqual(sum(desc.bins), int(symbols.sum()))

    def test_description_size(self):
        desc = project(square(), 1)
        self.assertEqual(desc.size_bytes(), 12 + 2 * 3)


class TestBlocks(unittest.TestCase):
    def test_padding_round_trip(self):
        block = make_block(b"abcde", 2)
        self.assertEqual(block.rows, 2)
        self.assertEqual(block.cols, 2)
        self.assertEqual(block.pad_len, 3)
        self.assertEqual(unmake_block(block), b"abcde")

    def test_symbols_are_big_endian(self):
        block = make_block(b"\x01\x02\x03\x04", 2)
        self.assertEqual(block.symbols.tolist(), [[0x0102], [0x0304]])

    def test_rejects_empty_payload(self):
        with self.assertRaises(ValueError):
            make_block(b"", 2)


class TestConfig(unittest.TestCase):
    def test_default_directions(self):
        self.assertEqual(default_directions(1), [0])
        self.assertEqual(default_directions(4), [0, 1, -1, 2])
        self.assertEqual(CodecConfig(5, 3).projection_dirs, (0, 1, -1, 2, -2))

    def test_invalid_configs(self):
        with self.assertRaises(ValueError):
            CodecConfig(2, 3)
        with self.assertRaises(ValueError):
            CodecConfig(2, 1, (1, 1))
        with self.assertRaises(ValueError):
            CodecConfig(3, 1, (0, 1))


class TestThreshold(unittest.TestCase):
    """Any M of N descriptions rebuild the payload; fewer never do."""

    def test_four_descriptions_any_two(self):
        """1000 payloads: every subset of size >= 2 decodes, singletons fail."""
        config = CodecConfig(4, 2)
        rng = random.Random(4)
        subsets = [
            s for size in range(1, 5) for s in itertools.combinations(range(4), size)
        ]
        for _ in range(1000):
            payload = rng.randbytes(rng.randint(1, 96))
            descs = encode(payload, config, group_id=9)
            for subset in subsets:
                chosen = [descs[i] for i in subset]
                if len(subset) < 2:
                    with self.assertRaises(InsufficientDescriptions):
                        decode(chosen, config)
                else:
                    self.assertEqual(decode(chosen, config), payload)

    def test_other_thresholds(self):
        """Every (N, M) with N <= 5, every subset: below M fails, M or more decodes."""
        rng = random.Random(8)
        for n in range(1, 6):
            for m in range(1, n + 1):
                config = CodecConfig(n, m)
                for _ in range(8):
                    payload = rng.randbytes(rng.randint(1, 120))
                    descs = encode(payload, config, group_id=n * 10 + m)
                    for size in range(n + 1):
                        for subset in itertools.combinations(descs, size):
                            with self.subTest(n=n, m=m, size=size):
                                if size < m:
                                    with self.assertRaises(InsufficientDescriptions):
                                        decode(subset, config)
                                else:
                                    self.assertEqual(decode(subset, config), payload)

    def test_six_descriptions_any_four(self):
        rng = random.Random(6)
        config = CodecConfig(6, 4)
        payload = rng.randbytes(200)
        descs = encode(payload, config)
        for subset in itertools.combinations(descs, 4):
            self.assertEqual(decode(subset, config), payload)

    def test_duplicates_count_once(self):
        config = CodecConfig(4, 2)
        descs = encode(b"hello world", config)
        with self.assertRaises(InsufficientDescriptions):
            decode([descs[1], descs[1]], config)

    def test_mixed_groups_rejected(self):
        config = CodecConfig(4, 2)
        first = encode(b"first group", config, group_id=1)
        second = encode(b"second group", config, group_id=2)
        with self.assertRaises(CorruptDescription):
            decode([first[0], second[1]], config)

    def test_tampered_bin_detected(self):
        """Changing one line sum makes the projections inconsistent."""
        config = CodecConfig(2, 2, (0, 1))
        vertical = project(square(), 0, index=0)
        diagonal = project(square(), 1, index=1)
        tampered = replace(vertical, bins=(5, 6))
        with self.assertRaises(CorruptDescription):
            decode([tampered, diagonal], config)
        self.assertEqual(
            decode([vertical, diagonal], config), unmake_block(square())
        )


if __name__ == "__main__":
    unittest.main()
