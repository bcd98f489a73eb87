from pathlib import Path

import pytest

from chaingraph.ingest import (
    BlockRecord,
    RpcError,
    TransportError,
    TxRecord,
    parse_block_json,
)

FIXTURES = Path(__file__).parent / "fixtures"


def addr(i: int) -> str:
    return "0x" + format(i, "040x")


def tx_hash(i: int) -> str:
    return "0x" + format(i, "064x")


def raw_tx(i: int, sender: str, recipient, value: int = 0) -> dict:
    return {
        "hash": tx_hash(i),
        "from": sender,
        "to": recipient,
        "value": hex(value),
    }


def raw_block(number: int, txs: list[dict], miner: str = addr(0xFEED),
              timestamp: int = 1_500_000_000) -> dict:
    return {
        "number": hex(number),
        "hash": tx_hash(0xB000 + number),
        "timestamp": hex(timestamp),
        "miner": miner,
        "transactions": txs,
    }


def make_block(number: int, pairs: list[tuple[str, str]], miner: str = addr(0xFEED),
               tx_base: int = 0) -> BlockRecord:
    """BlockRecord whose transactions connect the given (sender, recipient)
    address pairs."""
    txs = tuple(
        TxRecord(tx_hash=tx_hash(tx_base + i), sender=s, recipient=r, value=0)
        for i, (s, r) in enumerate(pairs)
    )
    return BlockRecord(number=number, hash=tx_hash(0xB000 + number),
                       timestamp=1_500_000_000, miner=miner, transactions=txs)


class MockEndpoint:
    """In-memory RPC endpoint; records every call and can fail on demand."""

    def __init__(self, blocks: dict[int, dict], transport_failures: int = 0,
                 rpc_error: tuple[int, str] | None = None):
        self.blocks = blocks
        self.calls: list[tuple[str, list]] = []
        self.transport_failures = transport_failures
        self.rpc_error = rpc_error

    def call(self, method: str, params: list):
        self.calls.append((method, params))
        if self.transport_failures > 0:
            self.transport_failures -= 1
            raise TransportError("simulated transport failure")
        if self.rpc_error is not None:
            raise RpcError(*self.rpc_error)
        if method == "eth_blockNumber":
            return hex(max(self.blocks)) if self.blocks else "0x0"
        if method == "eth_getBlockByNumber":
            number = int(params[0], 16)
            return self.blocks.get(number)
        raise RpcError(-32601, f"method {method} not found")

    def block_calls(self) -> list[int]:
        return [int(p[0], 16) for m, p in self.calls if m == "eth_getBlockByNumber"]


def star_pairs(leaves: int = 18) -> list[tuple[str, str]]:
    """(sender, recipient) pairs forming a star: one center paying each
    leaf once. 18 leaves gives the 19-node / 18-edge component."""
    center = addr(0xC0FFEE)
    return [(center, addr(0x1000 + i)) for i in range(leaves)]


def star_blocks(leaves: int = 18) -> list[BlockRecord]:
    return [make_block(7, star_pairs(leaves))]


def forest_pairs() -> list[tuple[str, str]]:
    """Fixture forest: 55 nodes, 40 edges, 15 components, largest 19/18.

    One 19-node star, ten connected pairs, four 4-node paths; all trees,
    so every clustering coefficient is zero.
    """
    pairs = star_pairs(18)
    for k in range(10):
        pairs.append((addr(0x2000 + 2 * k), addr(0x2000 + 2 * k + 1)))
    for k in range(4):
        base = 0x3000 + 10 * k
        pairs += [(addr(base), addr(base + 1)),
                  (addr(base + 1), addr(base + 2)),
                  (addr(base + 2), addr(base + 3))]
    return pairs


def forest_blocks() -> list[BlockRecord]:
    pairs = forest_pairs()
    third = len(pairs) // 3
    return [
        make_block(1, pairs[:third], tx_base=0),
        make_block(2, pairs[third:2 * third], tx_base=1000),
        make_block(3, pairs[2 * third:], tx_base=2000),
    ]


def pairs_to_raw_blocks(pairs, start: int = 1, num_blocks: int = 3) -> dict[int, dict]:
    """Split (sender, recipient) pairs into raw RPC block dicts, keyed by
    block number, for seeding a BlockCache."""
    per_block = [pairs[i::num_blocks] for i in range(num_blocks)]
    blocks = {}
    for offset, chunk in enumerate(per_block):
        number = start + offset
        txs = [raw_tx(1000 * offset + i, s, r) for i, (s, r) in enumerate(chunk)]
        blocks[number] = raw_block(number, txs)
    return blocks


def seed_cache(cache_dir, raw_blocks: dict[int, dict]) -> None:
    from chaingraph.ingest import BlockCache

    cache = BlockCache(cache_dir)
    for number, raw in raw_blocks.items():
        cache.store(number, raw)


@pytest.fixture
def fixture_a_record():
    return parse_block_json(FIXTURES.joinpath("block_fixture_a.json").read_text())
