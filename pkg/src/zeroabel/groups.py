"""Permutations, imprimitivity systems and conjugacy classes.

Permutations act on ``{0, ..., m-1}`` internally; JSON and text forms use
1-based labels to match the usual cycle notation. Composition is
``(p * q)(i) == p(q(i))``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapExceededError, InputError


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(i) for i in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise InputError(f"not a permutation: {imgs}")
        self.images = imgs

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(m))

    @classmethod
    def shift(cls, m: int) -> "Permutation":
        """The m-cycle (1, 2, ..., m)."""
        return cls([(i + 1) % m for i in range(m)])

    @classmethod
    def from_cycles(cls, m: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 1-based disjoint cycles."""
        img = list(range(m))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b - 1
        return cls(img)

    @classmethod
    def from_json(cls, images: Sequence[int]) -> "Permutation":
        return cls([i - 1 for i in images])

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.m != self.m:
            raise InputError("permutation sizes differ")
        return Permutation([self.images[j] for j in other.images])

    def inverse(self) -> "Permutation":
        inv = [0] * self.m
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def conjugate_by(self, s: "Permutation") -> "Permutation":
        """``s * self * s^-1``."""
        img = [0] * self.m
        for i, j in enumerate(self.images):
            img[s.images[i]] = s.images[j]
        return Permutation(img)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """0-based disjoint cycles of length > 1."""
        seen = [False] * self.m
        out = []
        for s in range(self.m):
            if seen[s]:
                continue
            cyc = [s]
            seen[s] = True
            j = self.images[s]
            while j != s:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        lens = [len(c) for c in self.cycles()]
        lens += [1] * (self.m - sum(lens))
        return tuple(sorted(lens, reverse=True))

    def is_full_cycle(self) -> bool:
        return self.m >= 1 and self.cycle_type() == (self.m,)

    def cycle_sequence(self, start: int = 0) -> list[int]:
        """Orbit of ``start`` in order: ``[start, p(start), ...]``."""
        out = [start]
        j = self.images[start]
        while j != start:
            out.append(j)
            j = self.images[j]
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation({self.to_cycle_str()})"

    def to_cycle_str(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(i + 1) for i in c) + ")" for c in cyc)

    def to_json(self) -> list[int]:
        return [i + 1 for i in self.images]


def is_transitive(gens: Sequence[Permutation], m: int) -> bool:
    if m <= 1:
        return True
    seen = {0}
    queue = [0]
    while queue:
        i = queue.pop()
        for g in gens:
            j = g.images[i]
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return len(seen) == m


def orbit_of_point(gens: Sequence[Permutation], i: int) -> set[int]:
    seen = {i}
    queue = [i]
    while queue:
        x = queue.pop()
        for g in gens:
            y = g.images[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


@dataclass(frozen=True)
class BlockSystem:
    """Partition of the labels into equal blocks permuted by the group."""

    m: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def block_index(self) -> list[int]:
        idx = [0] * self.m
        for b, blk in enumerate(self.blocks):
            for i in blk:
                idx[i] = b
        return idx

    def is_trivial(self) -> bool:
        return self.block_size in (1, self.m)

    def respected_by(self, gens: Sequence[Permutation]) -> bool:
        idx = self.block_index()
        for g in gens:
            for blk in self.blocks:
                if len({idx[g.images[i]] for i in blk}) != 1:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "block_size": self.block_size,
            "blocks": [[i + 1 for i in b] for b in self.blocks],
        }


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def minimal_block(gens: Sequence[Permutation], m: int, seeds: Iterable[int]) -> frozenset[int]:
    """Smallest block containing ``seeds`` (Atkinson's union-find closure)."""
    seeds = list(seeds)
    parent = list(range(m))
    queue: deque[tuple[int, int]] = deque()
    a = seeds[0]
    for b in seeds[1:]:
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            parent[rb] = ra
            queue.append((ra, rb))
    while queue:
        x, y = queue.popleft()
        for g in gens:
            u, v = _find(parent, g.images[x]), _find(parent, g.images[y])
            if u != v:
                parent[v] = u
                queue.append((u, v))
    root = _find(parent, a)
    return frozenset(i for i in range(m) if _find(parent, i) == root)


def _system_from_block(gens: Sequence[Permutation], m: int, block: frozenset[int]) -> BlockSystem:
    found = {block}
    queue = [block]
    while queue:
        b = queue.pop()
        for g in gens:
            img = frozenset(g.images[i] for i in b)
            if img not in found:
                found.add(img)
                queue.append(img)
    blocks = tuple(sorted(tuple(sorted(b)) for b in found))
    return BlockSystem(m=m, blocks=blocks)


def block_systems(gens: Sequence[Permutation], m: int) -> list[BlockSystem]:
    """All imprimitivity systems of a transitive group, by block size."""
    if not is_transitive(gens, m):
        raise InputError("block systems require a transitive group")
    blocks = {frozenset([0])}
    for j in range(1, m):
        blocks.add(minimal_block(gens, m, [0, j]))
    changed = True
    while changed:
        changed = False
        current = sorted(blocks, key=len)
        for i, b1 in enumerate(current):
            for b2 in current[i + 1:]:
                if b1 <= b2 or b2 <= b1:
                    continue
                j = minimal_block(gens, m, sorted(b1 | b2))
                if j not in blocks:
                    blocks.add(j)
                    changed = True
    systems = [_system_from_block(gens, m, b) for b in blocks]
    systems.sort(key=lambda s: (s.block_size, s.blocks))
    return systems


def iter_conjugacy_class(tau: Permutation, gens: Sequence[Permutation], cap: int) -> Iterator[Permutation]:
    """Breadth-first orbit of ``tau`` under conjugation by ``gens``."""
    seen = {tau}
    queue = deque([tau])
    yield tau
    while queue:
        s = queue.popleft()
        for g in gens:
            c = s.conjugate_by(g)
            if c not in seen:
                if len(seen) >= cap:
                    raise CapExceededError("conjugacy class of tau_infinity", cap)
                seen.add(c)
                queue.append(c)
                yield c


def induced_action(p: Permutation, bs: BlockSystem) -> Permutation:
    """Action of ``p`` on the blocks of ``bs``."""
    idx = bs.block_index()
    return Permutation([idx[p.images[blk[0]]] for blk in bs.blocks])
