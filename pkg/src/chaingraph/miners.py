"""Blocks-mined-per-miner distribution over a block range."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

from chaingraph.ingest import BlockRecord, SnapshotSpec


@dataclass
class MinerHistogram:
    per_miner: dict[str, int]
    distribution: dict[int, int]
    range: Optional[SnapshotSpec]

    @property
    def total_blocks(self) -> int:
        return sum(self.per_miner.values())

    @property
    def distinct_miners(self) -> int:
        return len(self.per_miner)


def miner_distribution(blocks: Iterable[BlockRecord]) -> MinerHistogram:
    """Count blocks per beneficiary address and invert into
    blocks-mined -> number-of-miners."""
    per_miner: dict[str, int] = {}
    lo: Optional[int] = None
    total = 0
    for block in blocks:
        per_miner[block.miner] = per_miner.get(block.miner, 0) + 1
        lo = block.number if lo is None else min(lo, block.number)
        total += 1
    distribution: dict[int, int] = {}
    for count in per_miner.values():
        distribution[count] = distribution.get(count, 0) + 1
    covered = SnapshotSpec(lo, total) if total else None
    return MinerHistogram(per_miner=per_miner, distribution=distribution, range=covered)


def write_miner_csv(hist: MinerHistogram, sink: TextIO) -> None:
    sink.write("miner,blocks\n")
    for miner in sorted(hist.per_miner):
        sink.write(f"{miner},{hist.per_miner[miner]}\n")


def write_distribution_csv(hist: MinerHistogram, sink: TextIO) -> None:
    sink.write("blocks_mined,num_miners\n")
    for mined in sorted(hist.distribution):
        sink.write(f"{mined},{hist.distribution[mined]}\n")
