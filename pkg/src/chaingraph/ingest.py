"""Block ingestion: JSON-RPC fetching, parsing, and an on-disk block cache.

Blocks are fetched with ``eth_getBlockByNumber(<hex>, true)`` so the full
transaction objects come back in one call; receipts are never requested.
Every fetched block is persisted to the cache before being handed to the
caller, so re-runs and interrupted runs are served offline.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator, Optional

import requests

ADDRESS_RE = re.compile(r"^0x[0-9a-fA-F]{40}$")
HASH32_RE = re.compile(r"^0x[0-9a-fA-F]{64}$")
QUANTITY_RE = re.compile(r"^0x[0-9a-fA-F]+$")

MAX_UINT256 = 2**256 - 1

DEFAULT_MAX_INFLIGHT = 4
DEFAULT_RETRIES = 3
DEFAULT_BACKOFF = 0.5


class IngestError(Exception):
    """Base class for ingestion failures."""


class TransportError(IngestError):
    """Network-level failure; retryable."""


class RpcError(IngestError):
    """Error object returned by the RPC server; not retryable."""

    def __init__(self, code: int, message: str):
        super().__init__(f"RPC error {code}: {message}")
        self.code = code
        self.message = message


class BlockNotFoundError(IngestError):
    """Requested block number is beyond the chain head."""


class BlockParseError(IngestError):
    """Malformed block payload; names the offending field."""

    def __init__(self, field: str, detail: str):
        super().__init__(f"field {field!r}: {detail}")
        self.field = field


class CacheCorruptError(IngestError):
    """Cache file checksum mismatch."""


class OfflineMissError(IngestError):
    """Cache miss while running in offline mode."""


@dataclass(frozen=True)
class TxRecord:
    """One transaction as recorded in a block body.

    ``recipient`` is None for contract creations. ``value`` is in wei and
    may need the full 256-bit range (Python ints are arbitrary precision).
    """

    tx_hash: str
    sender: str
    recipient: Optional[str]
    value: int


@dataclass(frozen=True)
class BlockRecord:
    number: int
    hash: str
    timestamp: int
    miner: str
    transactions: tuple[TxRecord, ...]


@dataclass(frozen=True)
class SnapshotSpec:
    """Half-open block range [start_block, start_block + count)."""

    start_block: int
    count: int

    def __post_init__(self):
        if self.start_block < 0:
            raise ValueError(f"start_block must be >= 0, got {self.start_block}")
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")

    def numbers(self) -> range:
        return range(self.start_block, self.start_block + self.count)

    def label(self) -> str:
        return f"{self.start_block}:{self.count}"

    @classmethod
    def parse(cls, text: str) -> "SnapshotSpec":
        """Parse a 'start:count' spec string."""
        try:
            start_s, count_s = text.split(":")
            return cls(int(start_s), int(count_s))
        except ValueError as exc:
            raise ValueError(f"bad snapshot spec {text!r}, expected start:count") from exc


def parse_quantity(value, field: str) -> int:
    """Decode a JSON-RPC hex quantity ('0x10' -> 16)."""
    if isinstance(value, int):
        return value
    if not isinstance(value, str) or not QUANTITY_RE.match(value):
        raise BlockParseError(field, f"not a hex quantity: {value!r}")
    return int(value, 16)


def canonical_address(value, field: str) -> str:
    """Lowercase a 20-byte hex address; reject anything else."""
    if not isinstance(value, str) or not ADDRESS_RE.match(value):
        raise BlockParseError(field, f"not a 20-byte hex address: {value!r}")
    return value.lower()


def _canonical_hash(value, field: str) -> str:
    if not isinstance(value, str) or not HASH32_RE.match(value):
        raise BlockParseError(field, f"not a 32-byte hex hash: {value!r}")
    return value.lower()


def _parse_tx(obj, index: int) -> TxRecord:
    where = f"transactions[{index}]"
    if not isinstance(obj, dict):
        raise BlockParseError(where, "transaction is not an object")
    for key in ("hash", "from"):
        if key not in obj:
            raise BlockParseError(f"{where}.{key}", "missing")
    recipient = obj.get("to")
    value = parse_quantity(obj.get("value", "0x0"), f"{where}.value")
    if value > MAX_UINT256:
        raise BlockParseError(f"{where}.value", "exceeds 256-bit range")
    return TxRecord(
        tx_hash=_canonical_hash(obj["hash"], f"{where}.hash"),
        sender=canonical_address(obj["from"], f"{where}.from"),
        recipient=None if recipient is None else canonical_address(recipient, f"{where}.to"),
        value=value,
    )


def parse_block_json(raw) -> BlockRecord:
    """Parse a JSON-RPC block result (with full transaction objects).

    Accepts raw bytes/str JSON or an already-decoded dict. All hex
    quantities are decoded, addresses are canonicalized to lowercase, and
    transaction order is preserved.
    """
    if isinstance(raw, (bytes, bytearray)):
        raw = raw.decode("utf-8")
    if isinstance(raw, str):
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise BlockParseError("<root>", f"invalid JSON: {exc}") from exc
    else:
        obj = raw
    if not isinstance(obj, dict):
        raise BlockParseError("<root>", "block result is not an object")
    for key in ("number", "hash", "timestamp", "miner", "transactions"):
        if key not in obj:
            raise BlockParseError(key, "missing")
    txs_raw = obj["transactions"]
    if not isinstance(txs_raw, list):
        raise BlockParseError("transactions", "not a list")
    return BlockRecord(
        number=parse_quantity(obj["number"], "number"),
        hash=_canonical_hash(obj["hash"], "hash"),
        timestamp=parse_quantity(obj["timestamp"], "timestamp"),
        miner=canonical_address(obj["miner"], "miner"),
        transactions=tuple(_parse_tx(t, i) for i, t in enumerate(txs_raw)),
    )


class JsonRpcEndpoint:
    """Thin JSON-RPC 2.0 client over HTTP POST."""

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url
        self.timeout = timeout
        self._session = requests.Session()
        self._id = 0

    def call(self, method: str, params: list):
        self._id += 1
        payload = {"jsonrpc": "2.0", "id": self._id, "method": method, "params": params}
        try:
            resp = self._session.post(self.url, json=payload, timeout=self.timeout)
            resp.raise_for_status()
            body = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise TransportError(f"{method} failed: {exc}") from exc
        if "error" in body and body["error"] is not None:
            err = body["error"]
            raise RpcError(err.get("code", -1), err.get("message", "unknown error"))
        return body.get("result")


def _call_with_retries(endpoint, method: str, params: list,
                       retries: int = DEFAULT_RETRIES,
                       backoff: float = DEFAULT_BACKOFF):
    # Only transport errors are retried; an RPC error means the request
    # itself is wrong and will not get better.
    last: Exception | None = None
    for attempt in range(retries):
        try:
            return endpoint.call(method, params)
        except TransportError as exc:
            last = exc
            if attempt + 1 < retries:
                time.sleep(backoff * (2**attempt))
    raise last  # type: ignore[misc]


def chain_head(endpoint, retries: int = DEFAULT_RETRIES, backoff: float = DEFAULT_BACKOFF) -> int:
    """Current chain head height via eth_blockNumber."""
    result = _call_with_retries(endpoint, "eth_blockNumber", [], retries, backoff)
    return parse_quantity(result, "eth_blockNumber")


def _fetch_block_result(endpoint, number: int, retries: int, backoff: float) -> dict:
    result = _call_with_retries(
        endpoint, "eth_getBlockByNumber", [hex(number), True], retries, backoff
    )
    if result is None:
        raise BlockNotFoundError(f"block {number} not found (beyond chain head?)")
    return result


def fetch_block(endpoint, number: int,
                retries: int = DEFAULT_RETRIES,
                backoff: float = DEFAULT_BACKOFF) -> BlockRecord:
    """Fetch and parse one block with its full transaction objects."""
    if number < 0:
        raise ValueError(f"block number must be >= 0, got {number}")
    return parse_block_json(_fetch_block_result(endpoint, number, retries, backoff))


class BlockCache:
    """One file per block, named by zero-padded decimal height.

    Each file holds a sha256 checksum line followed by the block's JSON-RPC
    result (canonical serialization), so partial runs resume and replays
    never hit the network. Writes are atomic (write-then-rename).
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path(self, number: int) -> Path:
        return self.directory / f"{number:012d}.json"

    def store(self, number: int, result: dict) -> None:
        text = json.dumps(result, sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        tmp = self.path(number).with_suffix(".tmp")
        tmp.write_text(f"sha256:{digest}\n{text}\n", encoding="utf-8")
        tmp.replace(self.path(number))

    def load(self, number: int) -> BlockRecord:
        """Load and verify a cached block; raises on miss or corruption."""
        path = self.path(number)
        content = path.read_text(encoding="utf-8")
        header, _, text = content.partition("\n")
        text = text.rstrip("\n")
        if not header.startswith("sha256:"):
            raise CacheCorruptError(f"{path}: missing checksum line")
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        if header != f"sha256:{digest}":
            raise CacheCorruptError(f"{path}: checksum mismatch")
        return parse_block_json(text)

    def get(self, number: int) -> Optional[BlockRecord]:
        """Like load(), but a miss or corrupt entry returns None."""
        try:
            return self.load(number)
        except FileNotFoundError:
            return None
        except (CacheCorruptError, BlockParseError):
            return None


def fetch_range(endpoint, spec: SnapshotSpec, cache: BlockCache,
                max_inflight: int = DEFAULT_MAX_INFLIGHT,
                retries: int = DEFAULT_RETRIES,
                backoff: float = DEFAULT_BACKOFF,
                offline: bool = False,
                on_block: Optional[Callable[[int, bool], None]] = None) -> Iterator[BlockRecord]:
    """Yield the blocks of a snapshot in ascending order.

    Cached blocks are served without network access; missing blocks are
    fetched (up to ``max_inflight`` concurrently) and persisted before
    being yielded. ``on_block(number, from_cache)`` is invoked once per
    block as it is scheduled. With ``offline=True`` a cache miss raises
    instead of fetching.
    """
    numbers = list(spec.numbers())

    def fetch_and_store(number: int) -> BlockRecord:
        result = _fetch_block_result(endpoint, number, retries, backoff)
        cache.store(number, result)
        return parse_block_json(result)

    lookahead = max(2 * max_inflight, 8)
    pending: dict[int, BlockRecord | Future] = {}
    with ThreadPoolExecutor(max_workers=max_inflight) as pool:
        scheduled = 0
        for i, number in enumerate(numbers):
            while scheduled < len(numbers) and scheduled < i + lookahead:
                k = numbers[scheduled]
                cached = cache.get(k)
                if cached is not None:
                    pending[k] = cached
                elif offline or endpoint is None:
                    raise OfflineMissError(f"block {k} not in cache and offline mode is on")
                else:
                    pending[k] = pool.submit(fetch_and_store, k)
                if on_block is not None:
                    on_block(k, cached is not None)
                scheduled += 1
            item = pending.pop(number)
            yield item.result() if isinstance(item, Future) else item
