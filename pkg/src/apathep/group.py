"""Finite abelian groups given as products of cyclic groups.

A group is described by its list of moduli ``(n_1, ..., n_r)`` and elements
are residue vectors.  Elements are ordered lexicographically by residues;
that order is also the order of :meth:`GroupSpec.elements` and of the
integer index ``spec.index(x)``, which the sweep code relies on.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GroupSpec",
    "GroupElement",
    "Subgroup",
    "Coset",
    "add",
    "generate_subgroup",
    "coset_add",
    "enumerate_abelian_groups",
]


@dataclass(frozen=True)
class GroupSpec:
    moduli: tuple[int, ...] = ()

    def __post_init__(self):
        mods = tuple(int(n) for n in self.moduli)
        if any(n < 2 for n in mods):
            raise ValueError(f"every modulus must be >= 2, got {mods}")
        object.__setattr__(self, "moduli", mods)

    # -- construction / formatting -------------------------------------

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``Z6``, ``Z2*Z2*Z3`` or ``Z1`` (the trivial group)."""
        text = text.strip()
        if not text:
            raise ValueError("empty group spec")
        mods = []
        for part in text.split("*"):
            m = re.fullmatch(r"\s*Z(\d+)\s*", part)
            if not m:
                raise ValueError(f"bad group factor {part!r} in {text!r}")
            n = int(m.group(1))
            if n == 0:
                raise ValueError("Z0 is not finite")
            if n > 1:
                mods.append(n)
        return cls(tuple(mods))

    def __str__(self) -> str:
        if not self.moduli:
            return "Z1"
        return "*".join(f"Z{n}" for n in self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def __len__(self) -> int:
        return self.order

    # -- elements -------------------------------------------------------

    def element(self, value) -> "GroupElement":
        """Coerce an int, a residue sequence or a GroupElement into this group."""
        if isinstance(value, GroupElement):
            if value.spec != self:
                raise ValueError(f"element {value} belongs to {value.spec}, not {self}")
            return value
        if isinstance(value, (int, np.integer)):
            if self.rank != 1:
                if self.rank == 0 and int(value) == 0:
                    return self.zero
                raise ValueError(f"bare integer literal needs a cyclic group, got {self}")
            return GroupElement(self, (int(value) % self.moduli[0],))
        res = tuple(int(r) for r in value)
        if len(res) != self.rank:
            raise ValueError(f"expected {self.rank} residues for {self}, got {res}")
        return GroupElement(self, tuple(r % n for r, n in zip(res, self.moduli)))

    def parse_element(self, text: str) -> "GroupElement":
        text = text.strip()
        if text.startswith("("):
            if not text.endswith(")"):
                raise ValueError(f"bad element literal {text!r}")
            inner = text[1:-1].strip()
            parts = [p for p in inner.split(",")] if inner else []
            try:
                return self.element([int(p) for p in parts])
            except ValueError as exc:
                raise ValueError(f"bad element literal {text!r}: {exc}") from None
        try:
            return self.element(int(text))
        except ValueError as exc:
            raise ValueError(f"bad element literal {text!r}: {exc}") from None

    def parse_elements(self, text: str) -> list["GroupElement"]:
        """Parse a comma separated list of element literals; parentheses may contain commas."""
        items, depth, cur = [], 0, ""
        for ch in text:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                items.append(cur)
                cur = ""
            else:
                cur += ch
        items.append(cur)
        return [self.parse_element(s) for s in items if s.strip()]

    @cached_property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def elements(self) -> list["GroupElement"]:
        return list(self._elements)

    @cached_property
    def _elements(self) -> tuple["GroupElement", ...]:
        return tuple(GroupElement(self, r) for r in itertools.product(*(range(n) for n in self.moduli)))

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, x) -> bool:
        return isinstance(x, GroupElement) and x.spec == self

    def index(self, x: "GroupElement") -> int:
        idx = 0
        for r, n in zip(x.residues, self.moduli):
            idx = idx * n + r
        return idx

    def from_index(self, i: int) -> "GroupElement":
        return self._elements[i]

    # -- integer-coded tables used by the sweeps -------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[i, j]`` is the index of ``x_i + x_j``."""
        n = self.order
        res = np.array([e.residues for e in self._elements], dtype=np.int64).reshape(n, self.rank)
        mods = np.array(self.moduli, dtype=np.int64)
        s = (res[:, None, :] + res[None, :, :]) % mods if self.rank else np.zeros((n, n, 0), dtype=np.int64)
        weights = np.array([math.prod(self.moduli[j + 1:]) for j in range(self.rank)], dtype=np.int64)
        return (s * weights).sum(axis=2).astype(np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.index(-e) for e in self._elements], dtype=np.int64)

    @cached_property
    def double_table(self) -> np.ndarray:
        return np.array([self.add_table[i, i] for i in range(self.order)], dtype=np.int64)

    @cached_property
    def cyclic_masks(self) -> np.ndarray:
        """Boolean matrix; row ``c`` marks the elements of the cyclic subgroup generated by ``x_c``."""
        n = self.order
        out = np.zeros((n, n), dtype=bool)
        for c in range(n):
            x = 0
            while not out[c, x]:
                out[c, x] = True
                x = self.add_table[x, c]
        return out

    def span_mask(self, gens: Iterable[int]) -> np.ndarray:
        """Boolean mask of the subgroup generated by element indices ``gens``."""
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.add_table[x, g])
                    if not mask[y]:
                        mask[y] = True
                        nxt.append(y)
            frontier = nxt
        return mask

    def element_order(self, x: "GroupElement") -> int:
        o = 1
        for r, n in zip(x.residues, self.moduli):
            o = math.lcm(o, n // math.gcd(r, n))
        return o

    def invariant_factors(self) -> tuple[int, ...]:
        """Invariant-factor form (n_1 | n_2 | ...) of this group."""
        # collect prime-power parts of every cyclic factor
        parts: dict[int, list[int]] = {}
        for n in self.moduli:
            for p, e in _factorize(n).items():
                parts.setdefault(p, []).append(p**e)
        longest = max((len(v) for v in parts.values()), default=0)
        factors = [1] * longest
        for p, powers in parts.items():
            powers.sort(reverse=True)
            for i, q in enumerate(powers):
                factors[longest - 1 - i] *= q
        return tuple(f for f in factors if f > 1)

    def is_isomorphic(self, other: "GroupSpec") -> bool:
        return self.invariant_factors() == other.invariant_factors()


@total_ordering
@dataclass(frozen=True, eq=True)
class GroupElement:
    spec: GroupSpec = field(repr=False)
    residues: tuple[int, ...]

    def _check(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.spec != self.spec:
            raise ValueError(f"group mismatch: {self.spec} vs {other.spec}")
        return None

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return GroupElement(
            self.spec, tuple((a + b) % n for a, b, n in zip(self.residues, other.residues, self.spec.moduli))
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.spec, tuple((-a) % n for a, n in zip(self.residues, self.spec.moduli)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupElement":
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return GroupElement(self.spec, tuple((int(k) * a) % n for a, n in zip(self.residues, self.spec.moduli)))

    __mul__ = __rmul__

    def __lt__(self, other: "GroupElement") -> bool:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.residues < other.residues

    def __bool__(self) -> bool:
        return any(self.residues)

    @property
    def index(self) -> int:
        return self.spec.index(self)

    @property
    def order(self) -> int:
        return self.spec.element_order(self)

    def __str__(self) -> str:
        if self.spec.rank == 1:
            return str(self.residues[0])
        return "(" + ",".join(map(str, self.residues)) + ")"

    def __repr__(self) -> str:
        return f"GroupElement({self.spec}, {self})"


def add(x: GroupElement, y: GroupElement) -> GroupElement:
    return x + y


@dataclass(frozen=True)
class Subgroup:
    spec: GroupSpec
    elements: tuple[GroupElement, ...]
    generators: tuple[GroupElement, ...] = ()

    def __contains__(self, x) -> bool:
        return x in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.spec == other.spec and self._set == other._set

    def __hash__(self) -> int:
        return hash((self.spec, self._set))

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.spec.order, dtype=bool)
        m[[x.index for x in self.elements]] = True
        return m

    def coset(self, h: GroupElement) -> "Coset":
        return Coset(h, self)

    def cosets(self) -> list["Coset"]:
        seen, out = set(), []
        for x in self.spec:
            c = Coset(x, self)
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out


def generate_subgroup(spec: GroupSpec, gens: Iterable) -> Subgroup:
    """Smallest subgroup of ``spec`` containing ``gens``."""
    gens = tuple(spec.element(g) for g in gens)
    mask = spec.span_mask(g.index for g in gens)
    return Subgroup(spec, tuple(spec.from_index(int(i)) for i in np.flatnonzero(mask)), gens)


@dataclass(frozen=True, eq=False)
class Coset:
    representative: GroupElement
    subgroup: Subgroup

    def __post_init__(self):
        if self.representative.spec != self.subgroup.spec:
            raise ValueError("coset representative outside the subgroup's group")

    @cached_property
    def elements(self) -> frozenset:
        return frozenset(self.representative + s for s in self.subgroup)

    @property
    def canonical(self) -> GroupElement:
        return min(self.elements)

    def __contains__(self, x) -> bool:
        return (x - self.representative) in self.subgroup

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coset):
            return NotImplemented
        return self.subgroup == other.subgroup and (self.representative - other.representative) in self.subgroup

    def __hash__(self) -> int:
        return hash((self.subgroup, self.canonical))

    def __add__(self, other: "Coset") -> "Coset":
        return coset_add(self, other)

    def __str__(self) -> str:
        return f"{self.canonical}+<{','.join(map(str, self.subgroup.generators))}>"


def coset_add(h1: Coset, h2: Coset) -> Coset:
    if h1.subgroup != h2.subgroup:
        raise ValueError("cosets of different subgroups cannot be added")
    return Coset(h1.representative + h2.representative, h1.subgroup)


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisor_chains(n: int, first_min: int = 1) -> list[tuple[int, ...]]:
    # chains d_1 | d_2 | ... with product n, each d_i >= 2 and a multiple of first_min
    if n == 1:
        return [()]
    chains = []
    for d in range(2, n + 1):
        if n % d or d % first_min:
            continue
        rest = n // d
        for tail in _divisor_chains(rest, d):
            if not tail or tail[0] % d == 0:
                chains.append((d,) + tail)
    return chains


def enumerate_abelian_groups(max_order: int) -> list[GroupSpec]:
    """One invariant-factor representative per abelian group of order <= max_order.

    Sorted by order, then by number of factors (cyclic first).
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    out = []
    for n in range(1, max_order + 1):
        chains = sorted(_divisor_chains(n), key=lambda t: (len(t), t))
        out.extend(GroupSpec(c) for c in chains)
    return out


def elements_of(spec: GroupSpec, values: Sequence) -> list[GroupElement]:
    return [spec.element(v) for v in values]
