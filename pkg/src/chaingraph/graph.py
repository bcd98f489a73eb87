"""Weighted account-interaction graph and its Pajek / edge-list forms.

Accounts are nodes; every transaction between a pair of accounts adds one
to the weight of their link. Direction is kept only as a diagnostic
(forward/reverse counts); all metrics run on the undirected projection.
Self-transfers are tracked as loops, separately from pair edges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, TextIO

from chaingraph.ingest import BlockRecord, TxRecord

SYNTHETIC_PREFIX = "created!"


class PajekError(ValueError):
    """Malformed Pajek input."""


@dataclass
class EdgeData:
    """Pooled transaction count between an unordered account pair.

    forward_count counts transactions from the lexicographically smaller
    endpoint to the larger one; reverse_count the other direction.
    """

    weight: int
    forward_count: int
    reverse_count: int


class TransactionGraph:
    """Undirected weighted multigraph collapsed to weighted edges + loops.

    Nodes carry dense integer indices in insertion order; edges are keyed
    by the sorted label pair.
    """

    def __init__(self):
        self.labels: list[str] = []
        self._index: dict[str, int] = {}
        self.edges: dict[tuple[str, str], EdgeData] = {}
        self.loops: dict[str, int] = {}

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index_of(self, label: str) -> int:
        return self._index[label]

    def add_node(self, label: str) -> int:
        idx = self._index.get(label)
        if idx is None:
            idx = len(self.labels)
            self._index[label] = idx
            self.labels.append(label)
        return idx

    def add_interaction(self, sender: str, recipient: str, count: int = 1,
                        forward: Optional[int] = None) -> None:
        """Record `count` transactions from sender to recipient."""
        self.add_node(sender)
        self.add_node(recipient)
        if sender == recipient:
            self.loops[sender] = self.loops.get(sender, 0) + count
            return
        lo, hi = (sender, recipient) if sender < recipient else (recipient, sender)
        fwd = count if sender == lo else 0
        if forward is not None:
            fwd = forward
        data = self.edges.get((lo, hi))
        if data is None:
            self.edges[(lo, hi)] = EdgeData(count, fwd, count - fwd)
        else:
            data.weight += count
            data.forward_count += fwd
            data.reverse_count += count - fwd

    def total_transactions(self) -> int:
        return sum(e.weight for e in self.edges.values()) + sum(self.loops.values())

    def canonical_form(self):
        """(sorted node labels, sorted weighted edges, sorted loops) --
        equality up to node reindexing."""
        return (
            tuple(sorted(self.labels)),
            tuple(sorted((u, v, d.weight) for (u, v), d in self.edges.items())),
            tuple(sorted(self.loops.items())),
        )


@dataclass
class SimpleGraph:
    """Undirected, loop-free, unweighted projection.

    adj[i] is the sorted neighbor list of node i, so traversals visit
    neighbors in ascending index order and results are reproducible.
    """

    labels: list[str]
    adj: list[list[int]]
    m: int

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Optional[list[str]] = None) -> "SimpleGraph":
        if labels is None:
            labels = [str(i) for i in range(n)]
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if u == v:
                continue
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                m += 1
        return cls(labels=labels, adj=[sorted(s) for s in adj], m=m)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def subgraph(self, node_indices: list[int]) -> "SimpleGraph":
        """Induced subgraph, nodes reindexed in the given order."""
        remap = {old: new for new, old in enumerate(node_indices)}
        edges = [
            (remap[u], remap[v])
            for u in node_indices
            for v in self.adj[u]
            if u < v and v in remap
        ]
        return SimpleGraph.from_edges(
            len(node_indices), edges, labels=[self.labels[i] for i in node_indices]
        )


def node_for_recipient(tx: TxRecord) -> str:
    """Recipient account id; contract creations get a synthetic node
    derived from the transaction hash (`created!<16 hex chars>`)."""
    if tx.recipient is not None:
        return tx.recipient
    return SYNTHETIC_PREFIX + tx.tx_hash[2:18]


def build_graph(blocks: Iterable[BlockRecord]) -> TransactionGraph:
    """One node per account seen as sender or resolved recipient; every
    transaction adds 1 to its pair's weight (or to the loop count)."""
    g = TransactionGraph()
    for block in blocks:
        for tx in block.transactions:
            g.add_interaction(tx.sender, node_for_recipient(tx))
    return g


def project_simple(g: TransactionGraph) -> SimpleGraph:
    """Drop weights and loops; same node set."""
    idx = g.index_of
    return SimpleGraph.from_edges(
        g.n, ((idx(u), idx(v)) for (u, v) in g.edges), labels=list(g.labels)
    )


def export_pajek(g: TransactionGraph, sink: TextIO) -> None:
    """Write the Pajek .net form: 1-based vertex indices in insertion
    order, weighted *Edges* lines, loops as `u u count`."""
    sink.write(f"*Vertices {g.n}\n")
    for i, label in enumerate(g.labels, start=1):
        sink.write(f'{i} "{label}"\n')
    sink.write("*Edges\n")
    for (u, v), data in g.edges.items():
        sink.write(f"{g.index_of(u) + 1} {g.index_of(v) + 1} {data.weight}\n")
    for label, count in g.loops.items():
        i = g.index_of(label) + 1
        sink.write(f"{i} {i} {count}\n")


_VERTEX_RE = re.compile(r'^(\d+)\s+"([^"]*)"\s*$')


def import_pajek(source: TextIO) -> TransactionGraph:
    """Read the dialect written by export_pajek; *Arcs* sections are
    accepted and treated as weighted edges. Inverse of export_pajek up to
    node reindexing."""
    lines = [ln.rstrip("\n") for ln in source]
    lines = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("%")]
    if not lines or not lines[0].lower().startswith("*vertices"):
        raise PajekError("missing *Vertices header")
    parts = lines[0].split()
    if len(parts) != 2 or not parts[1].isdigit():
        raise PajekError(f"bad *Vertices header: {lines[0]!r}")
    n = int(parts[1])

    g = TransactionGraph()
    by_index: dict[int, str] = {}
    pos = 1
    while pos < len(lines) and not lines[pos].startswith("*"):
        match = _VERTEX_RE.match(lines[pos].strip())
        if match:
            idx, label = int(match.group(1)), match.group(2)
        else:
            fields = lines[pos].split(None, 1)
            if len(fields) != 2 or not fields[0].isdigit():
                raise PajekError(f"bad vertex line: {lines[pos]!r}")
            idx, label = int(fields[0]), fields[1].strip()
        if not 1 <= idx <= n:
            raise PajekError(f"vertex index {idx} out of range 1..{n}")
        by_index[idx] = label
        pos += 1
    # Vertex lines may be omitted for unlabeled nodes.
    for idx in range(1, n + 1):
        g.add_node(by_index.get(idx, str(idx)))

    def resolve(token: str) -> str:
        if not token.isdigit():
            raise PajekError(f"bad vertex reference: {token!r}")
        idx = int(token)
        if not 1 <= idx <= n:
            raise PajekError(f"edge endpoint {idx} out of range 1..{n}")
        return g.labels[idx - 1]

    while pos < len(lines):
        header = lines[pos].strip().lower()
        if header not in ("*edges", "*arcs"):
            raise PajekError(f"unexpected section: {lines[pos]!r}")
        pos += 1
        while pos < len(lines) and not lines[pos].startswith("*"):
            fields = lines[pos].split()
            if len(fields) not in (2, 3):
                raise PajekError(f"bad edge line: {lines[pos]!r}")
            u, v = resolve(fields[0]), resolve(fields[1])
            weight = int(fields[2]) if len(fields) == 3 else 1
            if weight <= 0:
                raise PajekError(f"non-positive weight on line: {lines[pos]!r}")
            g.add_interaction(u, v, count=weight)
            pos += 1
    return g


def export_edge_csv(g: TransactionGraph, sink: TextIO) -> None:
    """Edge-list CSV `src,dst,weight`; loops appear with src == dst."""
    sink.write("src,dst,weight\n")
    for (u, v), data in g.edges.items():
        sink.write(f"{u},{v},{data.weight}\n")
    for label, count in g.loops.items():
        sink.write(f"{label},{label},{count}\n")
