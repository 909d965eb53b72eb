"""Group kinds, Haar measures, translations, and subgroup enumeration.

Finite kinds (cyclic, dihedral, symmetric up to n=6) carry their own
elements as atoms of a finite space; continuous kinds live on a bounded
window of the real line (or the circle). The only measures a group hands
out are its Haar measures; everything else is built on top of them.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import (DomainError, UnsupportedOperationError,
                     WindowOverflowError)
from .measures import Density, Measure, MeasurableSet, Space, mass
from .quadrature import DEFAULT_INTEGRATOR, Integrator
from .report import VerificationReport, eq_report

__all__ = [
    "Group", "GroupElement", "HaarMeasure", "Subgroup",
    "Cyclic", "Dihedral", "Symmetric", "AdditiveReals",
    "MultiplicativePositiveReals", "Circle",
    "haar", "translate_set", "translate_measure", "subgroups",
    "check_invariance", "translation_samples", "group_from_descriptor",
    "subgroup_chains",
]

TWO_PI = 2.0 * math.pi
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GroupElement:
    """Element of a specific group, stored in canonical representation."""

    group: "Group"
    rep: object

    def compose(self, other: "GroupElement") -> "GroupElement":
        if other.group != self.group:
            raise DomainError("cannot compose elements of different groups")
        return GroupElement(self.group, self.group.compose_reps(self.rep, other.rep))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inverse_rep(self.rep))

    @property
    def label(self) -> str:
        return self.group.label_of(self.rep)


class Group:
    """Common interface; concrete kinds are frozen dataclasses below."""

    is_finite = False

    @property
    def carrier(self) -> Space:
        raise NotImplementedError

    def compose_reps(self, a, b):
        raise NotImplementedError

    def inverse_rep(self, a):
        raise NotImplementedError

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def label_of(self, rep) -> str:
        return str(rep)

    def element(self, rep) -> GroupElement:
        raise NotImplementedError

    # Left action of the group on its own carrier.
    def act_point(self, g_rep, x):
        raise NotImplementedError

    def haar_density(self) -> Density:
        raise NotImplementedError

    @property
    def order(self) -> int:
        raise UnsupportedOperationError(
            f"{self.describe()} is not a finite group")

    def describe(self) -> str:
        raise NotImplementedError


class FiniteGroup(Group):
    is_finite = True

    # subclasses provide _reps() (canonical order) and label_of()

    def _reps(self) -> tuple:
        raise NotImplementedError

    @cached_property
    def reps(self) -> tuple:
        return self._reps()

    @cached_property
    def carrier(self) -> Space:
        return Space.finite(self.label_of(r) for r in self.reps)

    @cached_property
    def _rep_by_label(self) -> dict:
        return {self.label_of(r): r for r in self.reps}

    @property
    def order(self) -> int:
        return len(self.reps)

    def identity(self) -> GroupElement:
        return GroupElement(self, self.identity_rep())

    def identity_rep(self):
        raise NotImplementedError

    def element(self, rep) -> GroupElement:
        if isinstance(rep, str) and rep in self._rep_by_label:
            return GroupElement(self, self._rep_by_label[rep])
        if rep in self._rep_by_label.values() or rep in self.reps:
            return GroupElement(self, rep)
        raise DomainError(f"{rep!r} is not an element of {self.describe()}")

    def elements(self) -> list[GroupElement]:
        return [GroupElement(self, r) for r in self.reps]

    def act_point(self, g_rep, atom_label):
        x = self._rep_by_label.get(atom_label)
        if x is None:
            raise DomainError(f"{atom_label!r} is not a carrier atom")
        return self.label_of(self.compose_reps(g_rep, x))

    def haar_density(self) -> Density:
        return Density.const(1.0)

    @cached_property
    def _tables(self):
        """(index map, multiplication table, inverse table) over element indices."""
        reps = self.reps
        index = {r: i for i, r in enumerate(reps)}
        n = len(reps)
        mtab = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(reps):
            for j, b in enumerate(reps):
                mtab[i, j] = index[self.compose_reps(a, b)]
        inv = np.empty(n, dtype=np.int32)
        e = index[self.identity_rep()]
        for i in range(n):
            inv[i] = int(np.where(mtab[i] == e)[0][0])
        return index, mtab, inv


@dataclass(frozen=True)
class Cyclic(FiniteGroup):
    """Integers mod n under addition."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("cyclic order must be >= 1")

    def _reps(self):
        return tuple(range(self.n))

    def identity_rep(self):
        return 0

    def compose_reps(self, a, b):
        return (a + b) % self.n

    def inverse_rep(self, a):
        return (-a) % self.n

    def describe(self) -> str:
        return f"Z{self.n}"


@dataclass(frozen=True)
class Dihedral(FiniteGroup):
    """Symmetries of the regular n-gon: reps (r, f) meaning rotation^r * flip^f."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("dihedral index must be >= 1")

    def _reps(self):
        return tuple((r, f) for f in (0, 1) for r in range(self.n))

    def identity_rep(self):
        return (0, 0)

    def compose_reps(self, a, b):
        (r1, f1), (r2, f2) = a, b
        return ((r1 + (r2 if f1 == 0 else -r2)) % self.n, (f1 + f2) % 2)

    def inverse_rep(self, a):
        r, f = a
        return ((-r) % self.n, 0) if f == 0 else a

    def label_of(self, rep) -> str:
        r, f = rep
        return f"{'rs'[f]}{r}"

    def describe(self) -> str:
        return f"D{self.n}"


@dataclass(frozen=True)
class Symmetric(FiniteGroup):
    """All permutations of {0..n-1}; capped at n=6 (order 720)."""

    n: int

    def __post_init__(self):
        if not 1 <= self.n <= 6:
            raise DomainError("symmetric group supported for 1 <= n <= 6")

    def _reps(self):
        return tuple(permutations(range(self.n)))

    def identity_rep(self):
        return tuple(range(self.n))

    def compose_reps(self, a, b):
        return tuple(a[b[i]] for i in range(self.n))

    def inverse_rep(self, a):
        out = [0] * self.n
        for i, v in enumerate(a):
            out[v] = i
        return tuple(out)

    def label_of(self, rep) -> str:
        return "".join(str(d) for d in rep)

    def describe(self) -> str:
        return f"S{self.n}"


class ContinuousGroup(Group):
    is_finite = False

    def identity(self) -> GroupElement:
        return GroupElement(self, self.identity_rep())

    def element(self, rep) -> GroupElement:
        return GroupElement(self, self.check_rep(float(rep)))

    def check_rep(self, rep: float) -> float:
        if not math.isfinite(rep):
            raise DomainError(f"translation amount must be finite: {rep!r}")
        return rep


@dataclass(frozen=True)
class AdditiveReals(ContinuousGroup):
    """(R, +) restricted numerically to a bounded window."""

    window: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.window
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"invalid window {self.window!r}")

    @cached_property
    def carrier(self) -> Space:
        return Space.interval(*self.window)

    def identity_rep(self):
        return 0.0

    def compose_reps(self, a, b):
        return a + b

    def inverse_rep(self, a):
        return -a

    def act_point(self, g_rep, x):
        return x + g_rep

    def haar_density(self) -> Density:
        return Density.const(1.0)

    def describe(self) -> str:
        lo, hi = self.window
        return f"R+add:[{lo:g},{hi:g}]"


@dataclass(frozen=True)
class MultiplicativePositiveReals(ContinuousGroup):
    """(R_{>0}, *) on a strictly positive window; Haar density is 1/x."""

    window: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.window
        if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo < hi):
            raise DomainError(
                f"multiplicative window must be strictly positive: {self.window!r}")

    @classmethod
    def from_log_window(cls, log_lo: float, log_hi: float) -> "MultiplicativePositiveReals":
        """Numerically conditioned constructor: window given in log coordinates."""
        return cls((math.exp(log_lo), math.exp(log_hi)))

    @cached_property
    def carrier(self) -> Space:
        return Space.interval(*self.window)

    def identity_rep(self):
        return 1.0

    def compose_reps(self, a, b):
        return a * b

    def inverse_rep(self, a):
        return 1.0 / a

    def check_rep(self, rep: float) -> float:
        super().check_rep(rep)
        if rep <= 0:
            raise DomainError(f"multiplicative elements must be positive: {rep!r}")
        return rep

    def act_point(self, g_rep, x):
        return x * g_rep

    def haar_density(self) -> Density:
        lo = self.window[0]
        return Density(lambda x: 1.0 / x, sup=1.0 / lo)

    def describe(self) -> str:
        lo, hi = self.window
        return f"R*mul:[{lo:g},{hi:g}]"


@dataclass(frozen=True)
class Circle(ContinuousGroup):
    """Rotations of the circle, parameterized by angle in [0, 2*pi)."""

    @cached_property
    def carrier(self) -> Space:
        return Space.interval(0.0, TWO_PI)

    def identity_rep(self):
        return 0.0

    def compose_reps(self, a, b):
        return (a + b) % TWO_PI

    def inverse_rep(self, a):
        return (-a) % TWO_PI

    def check_rep(self, rep: float) -> float:
        return super().check_rep(rep) % TWO_PI

    def act_point(self, g_rep, x):
        return (x + g_rep) % TWO_PI

    def haar_density(self) -> Density:
        return Density.const(1.0)

    def describe(self) -> str:
        return "circle"


@dataclass(frozen=True)
class HaarMeasure(Measure):
    """Translation-invariant measure of a group, up to a positive scale."""

    group: Group = None
    scale: float = 1.0


def haar(group: Group, scale: float = 1.0) -> HaarMeasure:
    if scale <= 0 or not math.isfinite(scale):
        raise DomainError(f"Haar scale must be positive: {scale!r}")
    dens = group.haar_density().scaled(scale)
    return HaarMeasure(group.carrier, dens,
                       label=f"haar({group.describe()})",
                       group=group, scale=scale)


def _group_of(g: GroupElement) -> Group:
    if not isinstance(g, GroupElement):
        raise DomainError(f"expected a GroupElement, got {type(g).__name__}")
    return g.group


def translate_set(g: GroupElement, s: MeasurableSet) -> MeasurableSet:
    """Image g*s of a carrier set under left translation.

    Additive and multiplicative windows raise WindowOverflowError when the
    image escapes (recoverable: rebuild the group with a larger window);
    the circle wraps, possibly splitting one arc into two.
    """
    group = _group_of(g)
    if s.space != group.carrier:
        raise DomainError("set does not live on the group's carrier")
    if group.is_finite:
        return MeasurableSet.of_atoms(
            s.space, [group.act_point(g.rep, a) for a in s.atoms])
    if isinstance(group, Circle):
        arcs = []
        for a, b in s.intervals:
            width = b - a
            if width >= TWO_PI:
                return MeasurableSet.full(s.space)
            a2 = (a + g.rep) % TWO_PI
            b2 = a2 + width
            if b2 <= TWO_PI:
                arcs.append((a2, b2))
            else:
                arcs.append((a2, TWO_PI))
                arcs.append((0.0, b2 - TWO_PI))
        return MeasurableSet.of_intervals(s.space, arcs)
    lo, hi = group.window
    moved = []
    for a, b in s.intervals:
        a2 = group.act_point(g.rep, a)
        b2 = group.act_point(g.rep, b)
        if a2 < lo or b2 > hi:
            raise WindowOverflowError(
                f"translate of [{a!r}, {b!r}] by {g.rep!r} gives "
                f"[{a2!r}, {b2!r}], escaping window [{lo!r}, {hi!r}]; "
                f"enlarge the window and retry")
        moved.append((a2, b2))
    return MeasurableSet.of_intervals(s.space, moved)


def translate_measure(g: GroupElement, m: Measure) -> Measure:
    """Pushforward of m under left translation by g.

    density_new(y) = density_old(g^-1 y) * |d(g^-1 y)/dy|; the Jacobian is 1
    for additive kinds and the circle, 1/g for the multiplicative kind, and
    trivial for finite kinds. Haar measures push forward to themselves.
    """
    group = _group_of(g)
    if m.space != group.carrier:
        raise DomainError("measure does not live on the group's carrier")
    ginv = group.inverse_rep(g.rep)
    dens = m.density
    label = m.label and f"{m.label}<<{group.label_of(g.rep)}"

    if group.is_finite or isinstance(group, (AdditiveReals, Circle)):
        if dens.constant is not None:
            return Measure(m.space, dens, label)
        if group.is_finite:
            ev = dens.evaluator
            act = group.act_point
            new = Density(lambda y: ev(act(ginv, y)), sup=dens.sup)
            return Measure(m.space, new, label)
        shift = group.act_point
        ev = dens.evaluator
        bps = tuple(sorted(shift(g.rep, b) for b in dens.breakpoints))
        new = Density(lambda y: ev(shift(ginv, y)), bps, sup=dens.sup)
        return Measure(m.space, new, label)

    # multiplicative: x -> g*x on a Lebesgue base has Jacobian 1/g
    jac = ginv
    ev = dens.evaluator
    bps = tuple(sorted(b * g.rep for b in dens.breakpoints))
    new = Density(lambda y: ev(y * ginv) * jac, bps,
                  sup=None if dens.sup is None else dens.sup * jac)
    return Measure(m.space, new, label)


@dataclass(frozen=True)
class RestrictedGroup(FiniteGroup):
    """A subgroup presented as a group in its own right."""

    parent: FiniteGroup
    member_reps: tuple

    def _reps(self):
        return self.member_reps

    def identity_rep(self):
        return self.parent.identity_rep()

    def compose_reps(self, a, b):
        return self.parent.compose_reps(a, b)

    def inverse_rep(self, a):
        return self.parent.inverse_rep(a)

    def label_of(self, rep) -> str:
        return self.parent.label_of(rep)

    def describe(self) -> str:
        return f"{self.parent.describe()}<{self.order}>"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple  # atom labels, in the parent's canonical order

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def group(self) -> RestrictedGroup:
        reps = tuple(self.parent._rep_by_label[a] for a in self.elements)
        return RestrictedGroup(self.parent, reps)

    def as_set(self) -> MeasurableSet:
        return MeasurableSet.of_atoms(self.parent.carrier, self.elements)

    def contains(self, other: "Subgroup") -> bool:
        return set(other.elements) <= set(self.elements)


def _is_prime_power(k: int) -> bool:
    if k < 2:
        return False
    p = 2
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            return k == 1
        p += 1
    return True  # k itself prime


def subgroups(group: FiniteGroup) -> list[Subgroup]:
    """All subgroups, sorted by order (trivial and full included).

    Breadth-first closure over the lattice: each found subgroup is extended
    by one representative generator per prime-power-order cyclic subgroup,
    with Dimino-style coset closure on the cached multiplication table.
    Every subgroup is generated by its prime-power-order elements, so the
    search is exhaustive.
    """
    if not group.is_finite:
        raise UnsupportedOperationError(
            f"subgroup enumeration needs a finite kind, got {group.describe()}")
    n = group.order
    if n > 720:
        raise DomainError(f"subgroup enumeration capped at order 720, got {n}")
    index, mtab, _inv = group._tables
    e = index[group.identity_rep()]

    cyclic_reps: dict[frozenset, int] = {}
    for x in range(n):
        members = {e}
        cur = x
        while cur != e:
            members.add(cur)
            cur = int(mtab[cur, x])
        key = frozenset(members)
        cyclic_reps.setdefault(key, x)
    pool = sorted(x for key, x in cyclic_reps.items()
                  if _is_prime_power(len(key)))

    found: dict[frozenset, tuple] = {frozenset({e}): ()}
    for key, x in cyclic_reps.items():
        if key not in found:
            found[key] = (x,)
    queue = deque(sorted(found, key=lambda k: (len(k), sorted(k))))

    def dimino_closure(h_sorted: np.ndarray, h_set: frozenset,
                       gens: tuple) -> frozenset:
        # Cosets of H in <H, x> are connected under right multiplication
        # by the generators of the extension, so a rep BFS covers them all.
        k_set = set(h_set)
        reps_queue = [gens[-1]]
        i = 0
        while i < len(reps_queue):
            r = reps_queue[i]
            i += 1
            if r in k_set:
                continue
            coset = mtab[h_sorted, r]
            k_set.update(coset.tolist())
            for gg in gens:
                reps_queue.append(int(mtab[r, gg]))
        return frozenset(k_set)

    while queue:
        h = queue.popleft()
        h_gens = found[h]
        h_sorted = np.fromiter(sorted(h), dtype=np.int64, count=len(h))
        for x in pool:
            if x in h:
                continue
            k = dimino_closure(h_sorted, h, h_gens + (x,))
            if k not in found:
                found[k] = h_gens + (x,)
                queue.append(k)

    atoms = group.carrier.atoms
    subs = []
    for key in found:
        labels = tuple(atoms[i] for i in sorted(key))
        subs.append(Subgroup(group, labels))
    subs.sort(key=lambda s: (s.order, s.elements))
    return subs


def subgroup_chains(group: FiniteGroup) -> list[list[Subgroup]]:
    """All maximal chains of the subgroup lattice, trivial to full."""
    subs = subgroups(group)
    by_key = {frozenset(s.elements): s for s in subs}
    keys = sorted(by_key, key=lambda k: (len(k), sorted(map(str, k))))
    covers: dict[frozenset, list[frozenset]] = {k: [] for k in keys}
    for small in keys:
        for big in keys:
            if len(big) <= len(small) or not small < big:
                continue
            if any(small < mid < big for mid in keys
                   if len(small) < len(mid) < len(big)):
                continue
            covers[small].append(big)
    full = max(keys, key=len)
    chains = []

    def walk(key, acc):
        if key == full:
            chains.append([by_key[k] for k in acc])
            return
        for nxt in covers[key]:
            walk(nxt, acc + [nxt])

    trivial = min(keys, key=len)
    walk(trivial, [trivial])
    return chains


def translation_samples(group: Group, count: int = 64,
                        for_set: MeasurableSet | None = None) -> list[GroupElement]:
    """Deterministic sample of group elements for invariance checks.

    Finite kinds return every element. Continuous kinds return a golden-ratio
    low-discrepancy sequence over the window of translations that keep
    `for_set` inside the carrier window (log-spaced for the multiplicative
    kind); the circle needs no constraint.
    """
    if group.is_finite:
        return group.elements()
    if isinstance(group, Circle):
        return [GroupElement(group, (_GOLDEN * (i + 1) % 1.0) * TWO_PI)
                for i in range(count)]
    if for_set is None or not for_set.intervals:
        raise DomainError("windowed kinds need for_set to bound translations")
    lo, hi = group.window
    mn = min(a for a, _ in for_set.intervals)
    mx = max(b for _, b in for_set.intervals)
    if isinstance(group, AdditiveReals):
        glo, ghi = lo - mn, hi - mx
        if glo > ghi:
            return []
        return [GroupElement(group, glo + (_GOLDEN * (i + 1) % 1.0) * (ghi - glo))
                for i in range(count)]
    glo, ghi = lo / mn, hi / mx
    if glo > ghi:
        return []
    llo, lhi = math.log(glo), math.log(ghi)
    return [GroupElement(group, math.exp(llo + (_GOLDEN * (i + 1) % 1.0) * (lhi - llo)))
            for i in range(count)]


def check_invariance(m: Measure, group: Group, sets: Sequence[MeasurableSet],
                     samples: Sequence[GroupElement], tol: float = 1e-10,
                     cfg: Integrator = DEFAULT_INTEGRATOR,
                     claim_id: str = "measure-invariance",
                     seed: int = 0) -> VerificationReport:
    """Check m(gA) = m(A) for each sampled g and set A.

    Window overflows are recorded as skipped samples in the scope notes,
    not as failures. The report's lhs/rhs hold the worst pair found.
    """
    worst = (-1.0, None, None)  # |diff|, m(gA), m(A)
    checked = 0
    skipped = []
    for a_idx, A in enumerate(sets):
        base = mass(m, A, cfg)
        for g in samples:
            try:
                gA = translate_set(g, A)
            except WindowOverflowError:
                skipped.append(f"g={group.label_of(g.rep)} A#{a_idx}")
                continue
            moved = mass(m, gA, cfg)
            checked += 1
            if abs(moved - base) > worst[0]:
                worst = (abs(moved - base), moved, base)
    notes = f"checked {checked} translate pairs"
    if skipped:
        notes += "; window overflow skipped: " + ", ".join(skipped)
    if checked == 0:
        notes = "skipped: " + notes
    lhs, rhs = (worst[1], worst[2]) if worst[1] is not None else (0.0, 0.0)
    return eq_report(claim_id, lhs, rhs, tol, seed, scope_notes=notes)


_DESCRIPTOR_RE = re.compile(
    r"^(?:(?P<cyc>[ZC])(?P<cycn>\d+)|D(?P<dihn>\d+)|S(?P<symn>\d+)|"
    r"R\+add:\[(?P<alo>[^,\]]+),(?P<ahi>[^,\]]+)\]|"
    r"R\*mul:\[(?P<mlo>[^,\]]+),(?P<mhi>[^,\]]+)\]|"
    r"(?P<circ>circle))$")


def group_from_descriptor(text: str) -> Group:
    """Parse CLI descriptors like "Z6", "D4", "S4", "R+add:[0,10]",
    "R*mul:[0.1,100]", "circle"."""
    m = _DESCRIPTOR_RE.match(text.strip())
    if not m:
        raise DomainError(f"unrecognized group descriptor {text!r}")
    if m.group("cyc"):
        return Cyclic(int(m.group("cycn")))
    if m.group("dihn"):
        return Dihedral(int(m.group("dihn")))
    if m.group("symn"):
        return Symmetric(int(m.group("symn")))
    if m.group("alo"):
        return AdditiveReals((float(m.group("alo")), float(m.group("ahi"))))
    if m.group("mlo"):
        return MultiplicativePositiveReals(
            (float(m.group("mlo")), float(m.group("mhi"))))
    return Circle()
