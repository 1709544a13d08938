"""Zero-cycles and their exact classification.

A zero-cycle of ``f`` is an integer weight vector on the labelled fiber
with zero sum. Balancedness is decided over the integers: ``C`` is
balanced for ``sigma`` when ``Phi_1 * Phi_m`` divides ``P_{C,sigma}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import InputError, NumericalError
from .groups import BlockSystem, Permutation, induced_action, iter_conjugacy_class
from .linalg import IncrementalBasis, hnf, integer_scale, nullspace
from .poly import Decomposition, ExactPoly, cyclotomic, prime_factors


@dataclass(frozen=True)
class ZeroCycle:
    """Integer weights ``(n_1, ..., n_m)`` with zero sum."""

    weights: tuple[int, ...]

    def __init__(self, weights: Iterable[int]):
        w = tuple(int(x) for x in weights)
        if not w:
            raise InputError("a cycle needs at least one point")
        if sum(w) != 0:
            raise InputError(f"cycle weights must sum to zero, got sum {sum(w)}")
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return len(self.weights)

    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i: int) -> int:
        return self.weights[i]

    def __len__(self) -> int:
        return len(self.weights)

    def permuted(self, p: Permutation) -> "ZeroCycle":
        """Image under ``p``: weight of label ``p(i)`` becomes ``n_i``."""
        out = [0] * self.m
        for i, x in enumerate(self.weights):
            out[p.images[i]] = x
        return ZeroCycle(out)

    def rotated(self, r: int) -> "ZeroCycle":
        return ZeroCycle(self.weights[-r:] + self.weights[:-r] if r else self.weights)

    def to_json(self) -> list[int]:
        return list(self.weights)

    @classmethod
    def simple(cls, m: int, i: int, j: int) -> "ZeroCycle":
        """``z_i - z_j`` with 0-based labels."""
        w = [0] * m
        w[i] += 1
        w[j] -= 1
        return cls(w)


def as_cycle(c) -> ZeroCycle:
    return c if isinstance(c, ZeroCycle) else ZeroCycle(c)


def p_poly(C, sigma: Permutation | None = None) -> ExactPoly:
    """``P_{C,sigma}(z) = sum_i n_{p_i} z^(i-1)`` for ``sigma = (p_1, ..., p_m)``.

    The cycle of ``sigma`` is written starting from label 1; other
    starting points multiply the class by a unit ``z^k`` modulo ``z^m - 1``.
    """
    C = as_cycle(C)
    m = C.m
    if sigma is None:
        sigma = Permutation.shift(m)
    if sigma.m != m or not sigma.is_full_cycle():
        raise InputError("sigma must be an m-cycle on the cycle's labels")
    seq = sigma.cycle_sequence(0)
    return ExactPoly([C.weights[p] for p in seq])


@dataclass(frozen=True)
class BalanceCheck:
    balanced: bool
    witness: Permutation | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.balanced


def _phi1_phim(m: int) -> ExactPoly:
    return cyclotomic(1) * cyclotomic(m)


def is_balanced(C, gamma: Iterable[Permutation]) -> BalanceCheck:
    """Exact test over every ``sigma`` in ``gamma`` (lazy; stops at a witness)."""
    C = as_cycle(C)
    div = _phi1_phim(C.m)
    count = 0
    for sigma in gamma:
        count += 1
        if (p_poly(C, sigma) % div).degree >= 0:
            return BalanceCheck(False, sigma, count)
    if count == 0:
        raise InputError("gamma must be nonempty")
    return BalanceCheck(True, None, count)


def project_cycle(C, bs: BlockSystem) -> ZeroCycle:
    """Block sums of the weights, blocks ordered by smallest label."""
    C = as_cycle(C)
    if bs.m != C.m:
        raise InputError("block system and cycle sizes differ")
    blocks = sorted(bs.blocks, key=min)
    return ZeroCycle(sum(C.weights[i] for i in blk) for blk in blocks)


def congruence_system(m: int, n_blocks: int) -> BlockSystem:
    """Blocks are the residue classes modulo ``n_blocks``."""
    if m % n_blocks:
        raise InputError("number of blocks must divide m")
    return BlockSystem(m=m, blocks=tuple(tuple(range(r, m, n_blocks)) for r in range(n_blocks)))


@dataclass
class ProjectionReport:
    block_size: int
    n_blocks: int
    decomposition: Decomposition | None
    projected: ZeroCycle
    kind: str  # trivial | balanced | unbalanced
    witness: Permutation | None = None
    gamma_source: str = ""

    def to_json(self) -> dict:
        return {
            "block_size": self.block_size,
            "n_blocks": self.n_blocks,
            "inner": str(self.decomposition.inner) if self.decomposition else None,
            "outer": str(self.decomposition.outer) if self.decomposition else None,
            "projected_cycle": self.projected.to_json(),
            "kind": self.kind,
            "witness": self.witness.to_json() if self.witness else None,
            "gamma_source": self.gamma_source,
        }


@dataclass
class CycleClassification:
    trivial: bool
    balanced: bool
    totally_unbalanced: bool
    witness: Permutation | None = None
    balanced_projection: ProjectionReport | None = None
    projections: list[ProjectionReport] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "trivial": self.trivial,
            "balanced": self.balanced,
            "totally_unbalanced": self.totally_unbalanced,
            "witness": self.witness.to_json() if self.witness else None,
            "balanced_projection": (
                self.balanced_projection.to_json() if self.balanced_projection else None
            ),
            "projections": [p.to_json() for p in self.projections],
        }


def _outer_gamma(outer: ExactPoly, data, bs: BlockSystem, cap: int):
    """Gamma of the outer factor, preferring its own monodromy."""
    from .monodromy import monodromy_data

    tau_push = induced_action(data.tau_infinity, bs)
    if not tau_push.is_full_cycle():
        raise NumericalError("pushforward of tau_infinity is not a cycle on the blocks")
    if outer.degree < 2:
        return [Permutation.identity(1)], "linear"
    try:
        od = monodromy_data(outer, data.ds_max)
        return iter_conjugacy_class(od.tau_infinity, od.gens, cap), "outer"
    except NumericalError:
        gens = [induced_action(g, bs) for g in data.gens]
        return iter_conjugacy_class(tau_push, gens, cap), "pushforward"


def classify_projection(f: ExactPoly, C: ZeroCycle, bs: BlockSystem, data, cap: int) -> ProjectionReport:
    from .monodromy import block_to_decomposition

    proj = project_cycle(C, bs)
    dec = block_to_decomposition(f, bs, data)
    rep = ProjectionReport(bs.block_size, bs.n_blocks, dec, proj, "trivial")
    if proj.is_trivial():
        return rep
    if bs.block_size == 1:
        gamma, src = iter_conjugacy_class(data.tau_infinity, data.gens, cap), "self"
    else:
        if dec is None:
            raise NumericalError(
                f"no decomposition matches the block system of size {bs.block_size}"
            )
        gamma, src = _outer_gamma(dec.outer, data, bs, cap)
    check = is_balanced(proj, gamma)
    rep.kind = "balanced" if check.balanced else "unbalanced"
    rep.witness = check.witness
    rep.gamma_source = src
    return rep


def is_totally_unbalanced(f, C, data=None, cap: int = 10**6) -> CycleClassification:
    """Classify ``C`` against every imprimitivity system of ``G_f``."""
    from .monodromy import block_systems, monodromy_data
    from .poly import as_poly

    f = as_poly(f)
    C = as_cycle(C)
    if C.m != f.degree:
        raise InputError("cycle length must equal deg f")
    if data is None:
        data = monodromy_data(f)
    if C.is_trivial():
        return CycleClassification(trivial=True, balanced=True, totally_unbalanced=False)
    reports = [classify_projection(f, C, bs, data, cap) for bs in block_systems(data)]
    top = next(r for r in reports if r.block_size == 1)
    balanced_proj = next((r for r in reports if r.kind == "balanced"), None)
    return CycleClassification(
        trivial=False,
        balanced=top.kind == "balanced",
        totally_unbalanced=balanced_proj is None,
        witness=top.witness,
        balanced_projection=balanced_proj,
        projections=reports,
    )


def trivial_projection_space(m: int) -> list[ZeroCycle]:
    """Integer basis (Hermite-reduced) of cycles of ``z^m`` with trivial projections.

    The equations ask every block sum of every system with prime block
    size ``p | m`` to vanish; the solution space has dimension ``phi(m)``.
    """
    if m < 2:
        raise InputError("m must be at least 2")
    rows = []
    for p in prime_factors(m):
        n_blocks = m // p
        for r in range(n_blocks):
            rows.append({j: 1 for j in range(r, m, n_blocks)})
    basis = nullspace(rows, m)
    ints = [integer_scale(v) for v in basis]
    return [ZeroCycle(v) for v in hnf(ints)]


def orbit_span_dimension(data, C, cap: int = 10**6) -> int:
    """Dimension of the rational span of the ``G_f``-orbit of ``C``.

    Computed as the smallest generator-stable subspace containing ``C``,
    which never needs more than ``m`` stored vectors.
    """
    C = as_cycle(C)
    if C.is_trivial():
        return 0
    basis = IncrementalBasis(C.m)
    basis.add(C.weights)
    queue = [C]
    seen = 1
    while queue:
        v = queue.pop()
        for g in data.gens:
            w = v.permuted(g)
            if basis.add(w.weights):
                seen += 1
                if seen > cap:
                    from .errors import CapExceededError

                    raise CapExceededError("orbit span closure", cap)
                queue.append(w)
    return basis.dimension
