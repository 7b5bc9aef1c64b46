"""Brute-force loop enumeration oracle for traces of coupling-matrix powers.

On the complete digraph over the blocks (an arrow m -> n for every ordered
pair of distinct blocks, weighted by the regression block of n on m),
tr(G^l) equals the sum over all rooted directed l-loops of the trace of the
ordered product of the weights along the loop. Enumerating the loops gives a
check on the matrix-power and eigenvalue paths that shares no linear algebra
with them beyond the regression blocks themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import CombinatorialLimit
from .model import GammaMatrix

DEFAULT_LOOP_CAP = 10_000_000


@dataclass(frozen=True)
class DirectedLoop:
    """Rooted directed loop: arrows nodes[i] -> nodes[i+1], closing back to nodes[0].

    Nodes are 0-based block indices; consecutive nodes are distinct,
    including the closing step, and the length (number of arrows) is >= 2.
    """

    nodes: tuple[int, ...]

    def __post_init__(self):
        nodes = tuple(int(q) for q in self.nodes)
        if len(nodes) < 2:
            raise ValueError(f"a loop needs at least 2 arrows, got {len(nodes)}")
        for a, b in zip(nodes, nodes[1:] + nodes[:1]):
            if a == b:
                raise ValueError(f"self-connection {a} -> {b} in loop {nodes}")
        object.__setattr__(self, "nodes", nodes)

    @property
    def length(self) -> int:
        return len(self.nodes)


def rooted_loop_count(n_blocks: int, length: int) -> int:
    """Number of rooted directed loops of the given length on n_blocks nodes.

    Closed form tr[(J - I)^length] = (n-1)^length + (n-1)(-1)^length; zero
    for length 1 since self-connections are excluded.
    """
    if n_blocks < 2 or length < 1:
        raise ValueError("need n_blocks >= 2 and length >= 1")
    if length == 1:
        return 0
    n = n_blocks
    return (n - 1) ** length + (n - 1) * (-1) ** length


def iter_loops(n_blocks: int, length: int) -> Iterator[DirectedLoop]:
    """Yield every rooted loop once, depth-first in lexicographic node order."""
    if n_blocks < 2 or length < 1:
        raise ValueError("need n_blocks >= 2 and length >= 1")
    if length == 1:
        return
    prefix = [0] * length

    def extend(pos: int) -> Iterator[DirectedLoop]:
        if pos == length:
            if prefix[-1] != prefix[0]:
                yield DirectedLoop(nodes=tuple(prefix))
            return
        for q in range(n_blocks):
            if q == prefix[pos - 1]:
                continue
            prefix[pos] = q
            yield from extend(pos + 1)

    for root in range(n_blocks):
        prefix[0] = root
        yield from extend(1)


def enumerate_loops(n_blocks: int, length: int, cap: int = DEFAULT_LOOP_CAP) -> list[DirectedLoop]:
    """All rooted loops of the given length, or CombinatorialLimit beyond the cap.

    Each cyclic arrow sequence appears once per starting node, matching the
    per-node double sum that reproduces the trace without multiplicity
    corrections. The count is checked against the cap in closed form before
    any enumeration happens.
    """
    count = rooted_loop_count(n_blocks, length)
    if count > cap:
        raise CombinatorialLimit(count=count, cap=cap, length=length)
    return list(iter_loops(n_blocks, length))


def loop_trace(loop: DirectedLoop, gamma: GammaMatrix) -> float:
    """Trace of the ordered product of regression blocks along a loop.

    The arrow m -> n carries the block of gamma at (n, m); the product is
    taken with the last arrow's block leftmost, so the result is the trace of
    a square matrix sized by the root block.
    """
    nodes = loop.nodes
    l = len(nodes)
    product = None
    for i in range(l):
        start = nodes[i]
        end = nodes[(i + 1) % l]
        weight = gamma.block(end, start)
        product = weight if product is None else weight @ product
    return float(np.trace(product))


def trace_via_loops(gamma: GammaMatrix, length: int, cap: int = DEFAULT_LOOP_CAP) -> float:
    """tr(G^length) by summing loop traces over every rooted loop.

    Returns 0 for length 1 (no loops exist, matching the exact-zero trace).
    The terms are accumulated in enumeration order and reduced with pairwise
    summation, so the result does not depend on how the work is split.
    """
    if length == 1:
        return 0.0
    loops = enumerate_loops(gamma.partition.n_blocks, length, cap=cap)
    if not loops:
        return 0.0
    terms = np.array([loop_trace(loop, gamma) for loop in loops])
    return float(np.sum(terms))
