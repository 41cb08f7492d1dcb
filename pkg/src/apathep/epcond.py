"""The Erdős–Pósa condition for a subset Lambda of a finite abelian group.

Decides the two axioms (EP1)/(EP2) by exhaustive vectorised search over
triples, and searches the finite space of abstract obstruction parameters
(generators ``g_i`` with handlebar types, ``h_1``, ``h_2``) for the
group-level conditions (A3)-(A7).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional

import numpy as np

from .group import GroupElement, GroupSpec

__all__ = [
    "LambdaSet",
    "EpcVerdict",
    "ObstructionParams",
    "KINDS",
    "check_ep1",
    "check_ep2",
    "check_epc",
    "group_conditions",
    "find_obstruction_params",
    "find_irreducible_params",
    "iter_params",
    "theorem14_family",
]

KINDS = ("series", "nested", "crossing")
Q_MODES = ("equal", "disjoint")
B_PAIRS = ((2, 0), (1, 1), (0, 2))


@dataclass(frozen=True, eq=False)
class LambdaSet:
    spec: GroupSpec
    elements: frozenset = frozenset()

    def __post_init__(self):
        elems = frozenset(self.spec.element(x) for x in self.elements)
        object.__setattr__(self, "elements", elems)

    @classmethod
    def of(cls, spec: GroupSpec, values: Iterable) -> "LambdaSet":
        return cls(spec, frozenset(spec.element(v) for v in values))

    @classmethod
    def parse(cls, spec: GroupSpec, text: str) -> "LambdaSet":
        return cls(spec, frozenset(spec.parse_elements(text)))

    @classmethod
    def from_mask(cls, spec: GroupSpec, mask) -> "LambdaSet":
        return cls(spec, frozenset(spec.from_index(int(i)) for i in np.flatnonzero(mask)))

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.spec.order, dtype=bool)
        for x in self.elements:
            m[x.index] = True
        m.setflags(write=False)
        return m

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaSet):
            return NotImplemented
        return self.spec == other.spec and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.spec, self.elements))

    def __str__(self) -> str:
        return "{" + ",".join(str(x) for x in sorted(self.elements)) + "}"

    @cached_property
    def coset_hits(self) -> np.ndarray:
        """``coset_hits[t, c]`` is True iff ``(x_t + <x_c>)`` meets Lambda."""
        spec = self.spec
        cyc = spec.cyclic_masks  # (c, x)
        # shifted[t, c, x] = x_t + x in Lambda, restricted to x in <x_c>
        lam_of_sum = self.mask[spec.add_table]  # (t, x)
        return (cyc[None, :, :] & lam_of_sum[:, None, :]).any(axis=2)


@dataclass(frozen=True)
class EpcVerdict:
    satisfies: bool
    failed_axiom: Optional[str] = None
    witness: Optional[tuple[GroupElement, GroupElement, GroupElement]] = None

    def __post_init__(self):
        if self.satisfies != (self.failed_axiom is None and self.witness is None):
            raise ValueError("verdict must carry a witness exactly when it fails")

    def to_dict(self) -> dict:
        return {
            "satisfies": self.satisfies,
            "failed_axiom": self.failed_axiom,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
        }


def _first_violation(bad: np.ndarray, spec: GroupSpec):
    # C-order flattening of (a, b, c) is the lexicographic order of triples
    flat = bad.ravel()
    if not flat.any():
        return None
    i = int(np.argmax(flat))
    n = spec.order
    a, b, c = i // (n * n), (i // n) % n, i % n
    return tuple(spec.from_index(j) for j in (a, b, c))


def check_ep1(lam: LambdaSet) -> EpcVerdict:
    spec = lam.spec
    T, L, H, D = spec.add_table, lam.mask, lam.coset_hits, spec.double_table
    ab = T  # (a, b) -> a + b
    abc = T[ab]  # (a, b, c) -> a + b + c
    bad = (
        L[abc]
        & ~L[ab][:, :, None]
        & ~H[D][:, None, :]  # (2a + <c>) misses Lambda
        & ~H[D][None, :, :]  # (2b + <c>) misses Lambda
    )
    w = _first_violation(bad, spec)
    return EpcVerdict(True) if w is None else EpcVerdict(False, "EP1", w)


def check_ep2(lam: LambdaSet) -> EpcVerdict:
    spec = lam.spec
    T, L, H, D = spec.add_table, lam.mask, lam.coset_hits, spec.double_table
    two_a_b = T[D]  # (a, b) -> 2a + b
    total = T[two_a_b]  # (a, b, c) -> 2a + b + c
    hit_b = H[D]  # (a, b) -> (2a + <b>) meets Lambda
    bad = L[total] & ~hit_b[:, :, None] & ~hit_b[:, None, :]
    w = _first_violation(bad, spec)
    return EpcVerdict(True) if w is None else EpcVerdict(False, "EP2", w)


def check_epc(lam: LambdaSet) -> EpcVerdict:
    v = check_ep1(lam)
    if not v.satisfies:
        return v
    return check_ep2(lam)


def theorem14_family(spec: GroupSpec, ell: GroupElement) -> bool:
    """Membership in the three singleton families: (Z/2)^k with 0, Z/4 with {0,2}, Z/p."""
    inv = spec.invariant_factors()
    if all(n == 2 for n in inv) and not ell:
        return True
    if inv == (4,):
        return spec.element_order(ell) in (1, 2)
    if len(inv) == 1 and _is_prime(inv[0]):
        return True
    return False


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


# -- obstruction parameters -----------------------------------------------


@dataclass(frozen=True)
class ObstructionParams:
    g: tuple[GroupElement, ...]
    kinds: tuple[str, ...]
    h1: GroupElement
    h2: GroupElement
    q_mode: str = "disjoint"

    def __post_init__(self):
        if len(self.g) != len(self.kinds):
            raise ValueError("one handlebar kind per generator")
        if any(k not in KINDS for k in self.kinds):
            raise ValueError(f"kinds must be among {KINDS}")
        if self.q_mode not in Q_MODES:
            raise ValueError(f"q_mode must be one of {Q_MODES}")
        if self.q_mode == "equal" and self.h1 != self.h2:
            raise ValueError("equal Q-handlebars have a single gamma-length (h1 == h2)")

    @property
    def m(self) -> int:
        return len(self.g)

    @property
    def spec(self) -> GroupSpec:
        return self.h1.spec

    def validate(self) -> None:
        """Raise ValueError unless the generator tuple is admissible."""
        spec = self.spec
        if self.m < 1 or self.m >= spec.order:
            raise ValueError(f"need 1 <= m < |group|, got m={self.m}")
        if any(not x for x in self.g):
            raise ValueError("generators must be nonzero")
        if not _irredundant(spec, [x.index for x in self.g]):
            raise ValueError("every generator must be needed to span the subgroup")

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "g": [str(x) for x in self.g],
            "kinds": list(self.kinds),
            "h1": str(self.h1),
            "h2": str(self.h2),
            "q_mode": self.q_mode,
        }

    @classmethod
    def from_dict(cls, spec: GroupSpec, d: dict) -> "ObstructionParams":
        return cls(
            tuple(spec.parse_element(s) for s in d["g"]),
            tuple(d["kinds"]),
            spec.parse_element(d["h1"]),
            spec.parse_element(d["h2"]),
            d.get("q_mode", "disjoint"),
        )


def _irredundant(spec: GroupSpec, gens: list[int]) -> bool:
    full = spec.span_mask(gens)
    return all(not np.array_equal(spec.span_mask(gens[:i] + gens[i + 1 :]), full) for i in range(len(gens)))


def _gen_independent_ok(lam: LambdaSet, gens: list[int], h1: int, h2: int, spans_without: list[np.ndarray]):
    """(A3), (A4) and (A7) for index-coded data."""
    spec = lam.spec
    T, L = spec.add_table, lam.mask
    total = h1
    total = int(T[total, h2])
    for g in gens:
        total = int(T[total, g])
    a3 = bool(L[total])
    a4 = True
    for b1, b2 in B_PAIRS:
        t = _lin(spec, [(b1, h1), (b2, h2)])
        for span in spans_without:
            if (span & L[T[t]]).any():
                a4 = False
                break
        if not a4:
            break
    a7 = True
    if len(gens) == 1:
        H = lam.coset_hits
        D = spec.double_table
        a7 = not H[D[h1], gens[0]] and not H[D[h2], gens[0]]
    return a3, a4, a7


def _lin(spec: GroupSpec, terms) -> int:
    T = spec.add_table
    x = 0
    for coeff, e in terms:
        for _ in range(coeff):
            x = int(T[x, e])
    return x


def _parity_ok(lam: LambdaSet, gens: list[int], kinds: tuple[str, ...], h1: int, h2: int) -> bool:
    """(A5): every hit of Lambda by sum c_i g_i + b1 h1 + b2 h2 has c_i odd for non-series i.

    Coefficients are reduced modulo 2*ord(g_i); this keeps both the group value
    and the parity of c_i, so the enumeration is exhaustive.
    """
    spec = lam.spec
    free = [i for i, k in enumerate(kinds) if k != "series"]
    if not free:
        return True
    T, L = spec.add_table, lam.mask
    orders = [spec.element_order(spec.from_index(g)) for g in gens]
    # multiples[i][c] = index of c * g_i
    multiples = []
    for g, o in zip(gens, orders):
        row, x = [], 0
        for _ in range(2 * o):
            row.append(x)
            x = int(T[x, g])
        multiples.append(row)
    for b1, b2 in B_PAIRS:
        base = _lin(spec, [(b1, h1), (b2, h2)])
        for cs in itertools.product(*(range(2 * o) for o in orders)):
            x = base
            for i, c in enumerate(cs):
                x = int(T[x, multiples[i][c]])
            if L[x] and any(cs[i] % 2 == 0 for i in free):
                return False
    return True


def group_conditions(lam: LambdaSet, g, kinds, h1, h2) -> dict[str, bool]:
    """Evaluate (A3)-(A7) at the group level for the given handle lengths and kinds."""
    spec = lam.spec
    gens = [spec.element(x).index for x in g]
    h1i, h2i = spec.element(h1).index, spec.element(h2).index
    spans = [spec.span_mask(gens[:i] + gens[i + 1 :]) for i in range(len(gens))]
    a3, a4, a7 = _gen_independent_ok(lam, gens, h1i, h2i, spans)
    return {
        "A3": a3,
        "A4": a4,
        "A5": _parity_ok(lam, gens, tuple(kinds), h1i, h2i),
        "A6": any(k == "series" for k in kinds),
        "A7": a7,
    }


def iter_params(lam: LambdaSet, obstruction: bool = True) -> Iterator[ObstructionParams]:
    """All admissible parameter tuples meeting (A3)-(A5), and (A6)-(A7) if ``obstruction``.

    Order: m ascending, generator sets lexicographic, then (h1, h2), then kinds
    (all-series first), then q_mode (``equal`` first when h1 == h2).
    """
    spec = lam.spec
    n = spec.order
    nonzero = list(range(1, n))
    for m in range(1, n):
        any_irredundant = False
        for gens in itertools.combinations(nonzero, m):
            gens = list(gens)
            if not _irredundant(spec, gens):
                continue
            any_irredundant = True
            spans = [spec.span_mask(gens[:i] + gens[i + 1 :]) for i in range(m)]
            for h1 in range(n):
                for h2 in range(n):
                    a3, a4, a7 = _gen_independent_ok(lam, gens, h1, h2, spans)
                    if not (a3 and a4):
                        continue
                    if obstruction and not a7:
                        continue
                    for kinds in itertools.product(KINDS, repeat=m):
                        if obstruction and "series" not in kinds:
                            continue
                        if not _parity_ok(lam, gens, kinds, h1, h2):
                            continue
                        for mode in Q_MODES:
                            if mode == "equal" and h1 != h2:
                                continue
                            yield ObstructionParams(
                                tuple(spec.from_index(x) for x in gens),
                                kinds,
                                spec.from_index(h1),
                                spec.from_index(h2),
                                mode,
                            )
        if not any_irredundant:
            # every longer irredundant tuple contains an irredundant one of length m
            break


def find_obstruction_params(lam: LambdaSet) -> Optional[ObstructionParams]:
    return next(iter_params(lam, obstruction=True), None)


def find_irreducible_params(lam: LambdaSet, obstruction: Optional[bool] = None) -> Optional[ObstructionParams]:
    """First parameters meeting (A3)-(A5).

    With ``obstruction=False`` only parameters that are *not* obstructions
    (failing (A6) or (A7)) are returned; ``None`` accepts either.
    """
    for p in iter_params(lam, obstruction=False):
        if obstruction is None:
            return p
        flags = group_conditions(lam, p.g, p.kinds, p.h1, p.h2)
        if (flags["A6"] and flags["A7"]) == obstruction:
            return p
    return None
