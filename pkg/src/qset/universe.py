"""Bounded universe fragments and closure audits.

A universe closed under the constructor algebra is infinite, so this
module works with finite fragments: start from seed elements and apply
the constructors for a fixed number of rounds, under explicit caps.
Every step lands in a ledger that can be replayed to reproduce the
fragment's exact element multiset, and every place a cap bit is
recorded as a cutoff rather than silently dropped.

``check_qED`` audits how far a fragment is from being closed: for each
closure condition it records the member combinations whose required
result is missing.  A finite fragment is always defective somewhere
(the power of a deepest element cannot be inside), which is the point:
the audit measures the shape of the failure, it does not pretend
closure.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence, Union

from . import algebra
from .errors import CapExceeded, EmptyUniverse
from .kernel import (
    AtomRef,
    ElementDesc,
    QSet,
    canonical_text,
    canonicalize,
    desc_depth,
    desc_is_classical,
    desc_sort_key,
)
from .morphism import CategoryPresentation

__all__ = [
    "BuildCaps",
    "LedgerEntry",
    "Fragment",
    "build_fragment",
    "replay_ledger",
    "Defect",
    "ClosureReport",
    "check_qED",
    "Classification",
    "classify",
    "is_small_category",
]


@dataclass(frozen=True)
class BuildCaps:
    power_qcard: int = algebra.POWER_QCARD_CAP
    product_qcard: int = algebra.PRODUCT_QCARD_CAP
    max_members: int = 128


@dataclass(frozen=True)
class LedgerEntry:
    """One construction event.

    op is "seed", "round", or a constructor name.  For "round" the
    count field holds the round number; for "seed" it holds the seeded
    multiplicity.  A cutoff entry records why a result was not added.
    """

    op: str
    args: tuple = ()
    result: ElementDesc | None = None
    count: int = 1
    cutoff: str | None = None

    def to_dict(self) -> dict:
        d: dict = {"op": self.op}
        if self.op == "round":
            d["round"] = self.count
            return d
        if self.args:
            d["args"] = [canonical_text(a) for a in self.args]
        if self.result is not None:
            d["result"] = canonical_text(self.result)
        if self.op == "seed":
            d["count"] = self.count
        if self.cutoff is not None:
            d["cutoff"] = self.cutoff
        return d


@dataclass(frozen=True)
class Fragment:
    """A finite piece of universe: an element multiset plus provenance.

    ``rank`` maps each member to its hereditary nesting depth, which is
    well-founded by construction: a collection always outranks anything
    it contains.  ``ledger`` replays to exactly ``elements``.
    """

    elements: QSet
    rank: Mapping[ElementDesc, int]
    ledger: tuple[LedgerEntry, ...]
    caps: BuildCaps
    depth: int

    def members(self) -> list[tuple[ElementDesc, int]]:
        return list(self.elements.classes())

    def processed_members(self) -> set[ElementDesc]:
        """Members that had a constructor round applied to them.

        These are the members present before the final round started;
        everything the last round added never had the constructors run
        on it, which is where closure defects concentrate.
        """
        if self.depth == 0:
            return set()
        members: set[ElementDesc] = set()
        rounds_seen = 0
        for entry in self.ledger:
            if entry.op == "round":
                rounds_seen += 1
                if rounds_seen == self.depth:
                    break
            elif entry.result is not None and entry.cutoff is None:
                members.add(entry.result)
        return members

    def to_dict(self) -> dict:
        return {
            "schema": "qset/1",
            "elements": [[canonical_text(d), n] for d, n in self.elements.classes()],
            "rank": {canonical_text(d): r for d, r in sorted(self.rank.items(), key=lambda kv: desc_sort_key(kv[0]))},
            "depth": self.depth,
            "ledger": [e.to_dict() for e in self.ledger],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _seed_members(seeds) -> QSet:
    if isinstance(seeds, QSet):
        return seeds
    return canonicalize(list(seeds))


def build_fragment(
    seeds: Union[QSet, Sequence[Union[QSet, AtomRef]]],
    depth: int = 1,
    caps: BuildCaps = BuildCaps(),
) -> Fragment:
    """Grow a fragment from seeds for ``depth`` constructor rounds.

    Each round applies power, class-singleton, unordered pair, ordered
    pair, product, and union to every member (and member pair) of the
    fragment as it stood when the round began, in canonical order, so
    the result is a deterministic function of the inputs.  Results the
    caps refuse become cutoff entries in the ledger.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    base = _seed_members(seeds)
    if base.qcard == 0:
        raise EmptyUniverse("a universe fragment needs at least one seed element")
    members: dict[ElementDesc, int] = dict(base.classes())
    if len(members) > caps.max_members:
        raise CapExceeded(
            "seeds have %d distinct classes, member cap is %d" % (len(members), caps.max_members)
        )
    ledger: list[LedgerEntry] = [
        LedgerEntry(op="seed", result=desc, count=n) for desc, n in base.classes()
    ]

    for r in range(1, depth + 1):
        ledger.append(LedgerEntry(op="round", count=r))
        snapshot = QSet(members.items())
        ordered = [d for d, _ in snapshot.classes()]
        qsets = [d for d in ordered if isinstance(d, QSet)]

        def admit(op: str, args: tuple, result: QSet):
            if result in members:
                ledger.append(LedgerEntry(op=op, args=args, result=result))
                return
            if len(members) >= caps.max_members:
                ledger.append(LedgerEntry(op=op, args=args, cutoff="member-cap"))
                return
            members[result] = 1
            ledger.append(LedgerEntry(op=op, args=args, result=result))

        for x in qsets:
            if x.qcard > caps.power_qcard:
                ledger.append(LedgerEntry(op="power", args=(x,), cutoff="power-cap"))
            else:
                admit("power", (x,), algebra.power(x, cap=caps.power_qcard))
        for x in ordered:
            admit("singleton", (x,), algebra.singleton_in(x, snapshot))
        for i, x in enumerate(qsets):
            for y in qsets[i:]:
                admit("union", (x, y), algebra.union(x, y))
        for x in qsets:
            for y in qsets:
                if x.qcard * y.qcard > caps.product_qcard:
                    ledger.append(LedgerEntry(op="product", args=(x, y), cutoff="product-cap"))
                else:
                    admit("product", (x, y), algebra.product(x, y, cap=caps.product_qcard))
        for i, x in enumerate(ordered):
            for y in ordered[i:]:
                admit("pair", (x, y), algebra.pair_in(x, y, snapshot))
        for x in ordered:
            for y in ordered:
                admit("opair", (x, y), algebra.opair_in(x, y, snapshot))

    elements = QSet(members.items())
    rank = {desc: desc_depth(desc) for desc in members}
    return Fragment(elements=elements, rank=rank, ledger=tuple(ledger), caps=caps, depth=depth)


def replay_ledger(ledger: Iterable[LedgerEntry], caps: BuildCaps = BuildCaps()) -> QSet:
    """Re-run a ledger and return the element multiset it reconstructs."""
    members: dict[ElementDesc, int] = {}
    snapshot = QSet()
    ops = {
        "power": lambda args, snap: algebra.power(args[0], cap=caps.power_qcard),
        "singleton": lambda args, snap: algebra.singleton_in(args[0], snap),
        "union": lambda args, snap: algebra.union(args[0], args[1]),
        "product": lambda args, snap: algebra.product(args[0], args[1], cap=caps.product_qcard),
        "pair": lambda args, snap: algebra.pair_in(args[0], args[1], snap),
        "opair": lambda args, snap: algebra.opair_in(args[0], args[1], snap),
    }
    for entry in ledger:
        if entry.op == "seed":
            members[entry.result] = members.get(entry.result, 0) + entry.count
        elif entry.op == "round":
            snapshot = QSet(members.items())
        elif entry.cutoff is not None:
            continue
        else:
            result = ops[entry.op](entry.args, snapshot)
            if result != entry.result:
                raise ValueError(
                    "ledger replay diverged at %s: got %s, recorded %s"
                    % (entry.op, result.text, canonical_text(entry.result))
                )
            if result not in members:
                members[result] = 1
    return QSet(members.items())


# -- closure audit ---------------------------------------------------


@dataclass(frozen=True)
class Defect:
    """A missing closure result: witnesses, the operation, the absentee."""

    condition: str
    operation: str
    witnesses: tuple
    missing: ElementDesc | None
    note: str = ""

    def to_dict(self) -> dict:
        d = {
            "condition": self.condition,
            "operation": self.operation,
            "witnesses": [canonical_text(w) for w in self.witnesses],
            "missing": None if self.missing is None else canonical_text(self.missing),
        }
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class ClosureReport:
    elements: QSet
    cond1: list[Defect]
    cond2: list[Defect]
    cond3: list[Defect]
    cond4: list[Defect]
    theorem1: list[Defect]
    totals: dict

    @property
    def primitive_defects(self) -> list[Defect]:
        return [*self.cond1, *self.cond2, *self.cond3, *self.cond4]

    def to_dict(self) -> dict:
        return {
            "schema": "qset/1",
            "elements": [[canonical_text(d), n] for d, n in self.elements.classes()],
            "defects": {
                "cond1": [d.to_dict() for d in self.cond1],
                "cond2": [d.to_dict() for d in self.cond2],
                "cond3": [d.to_dict() for d in self.cond3],
                "cond4": [d.to_dict() for d in self.cond4],
                "theorem1": [d.to_dict() for d in self.theorem1],
            },
            "totals": self.totals,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _as_universe(u: Union[QSet, Fragment]) -> QSet:
    return u.elements if isinstance(u, Fragment) else u


def check_qED(
    u: Union[QSet, Fragment],
    *,
    caps: BuildCaps = BuildCaps(),
    family_index_bound: int = 3,
    max_families: int = 200,
) -> ClosureReport:
    """Audit a fragment against the closure conditions of a universe.

    Condition 1: each collection member's power is a member.
    Condition 2: each member's class-singleton is a member.
    Condition 3: each ordered pair of collection members has its product
    as a member.  Condition 4: classically indexed families drawn from
    the fragment (index size up to ``family_index_bound``, at most
    ``max_families`` families) have their unions as members.  The
    derived constructions (union, unordered pair, ordered pair) are
    audited separately as the theorem-1 section.
    """
    universe = _as_universe(u)
    if universe.qcard == 0:
        raise EmptyUniverse("cannot audit an empty universe")
    ordered = [d for d, _ in universe.classes()]
    qsets = [d for d in ordered if isinstance(d, QSet)]

    cond1: list[Defect] = []
    cond2: list[Defect] = []
    cond3: list[Defect] = []
    cond4: list[Defect] = []
    theorem1: list[Defect] = []
    totals = {
        "members": len(ordered),
        "cond1_checked": 0,
        "cond2_checked": 0,
        "cond3_checked": 0,
        "cond4_checked": 0,
        "cond4_truncated": False,
        "theorem1_checked": 0,
    }

    for x in qsets:
        totals["cond1_checked"] += 1
        if x.qcard > caps.power_qcard:
            cond1.append(Defect("cond1", "power", (x,), None, note="power-cap"))
            continue
        p = algebra.power(x, cap=caps.power_qcard)
        if universe.count(p) == 0:
            cond1.append(Defect("cond1", "power", (x,), p))

    for x in ordered:
        totals["cond2_checked"] += 1
        s = algebra.singleton_in(x, universe)
        if universe.count(s) == 0:
            cond2.append(Defect("cond2", "singleton", (x,), s))

    for x in qsets:
        for y in qsets:
            totals["cond3_checked"] += 1
            if x.qcard * y.qcard > caps.product_qcard:
                cond3.append(Defect("cond3", "product", (x, y), None, note="product-cap"))
                continue
            pr = algebra.product(x, y, cap=caps.product_qcard)
            if universe.count(pr) == 0:
                cond3.append(Defect("cond3", "product", (x, y), pr))

    classical = [d for d in ordered if desc_is_classical(d)]

    def families():
        for size in range(1, family_index_bound + 1):
            for combo in itertools.combinations(classical, size):
                for assignment in itertools.product(qsets, repeat=size):
                    yield combo, assignment

    fam_iter = families()
    for combo, assignment in itertools.islice(fam_iter, max_families):
        totals["cond4_checked"] += 1
        index = QSet((d, 1) for d in combo)
        fam = algebra.IndexedFamily(index=index, entries=dict(zip(combo, assignment)))
        result = algebra.family_union(fam)
        if universe.count(result) == 0:
            cond4.append(Defect("cond4", "family_union", tuple(combo) + tuple(assignment), result))
    totals["cond4_truncated"] = next(fam_iter, None) is not None

    for i, x in enumerate(ordered):
        for j, y in enumerate(ordered):
            if j >= i:
                if isinstance(x, QSet) and isinstance(y, QSet):
                    totals["theorem1_checked"] += 1
                    un = algebra.union(x, y)
                    if universe.count(un) == 0:
                        theorem1.append(Defect("theorem1", "union", (x, y), un))
                totals["theorem1_checked"] += 1
                pr = algebra.pair_in(x, y, universe)
                if universe.count(pr) == 0:
                    theorem1.append(Defect("theorem1", "pair", (x, y), pr))
            totals["theorem1_checked"] += 1
            op = algebra.opair_in(x, y, universe)
            if universe.count(op) == 0:
                theorem1.append(Defect("theorem1", "opair", (x, y), op))

    return ClosureReport(
        elements=universe,
        cond1=cond1,
        cond2=cond2,
        cond3=cond3,
        cond4=cond4,
        theorem1=theorem1,
        totals=totals,
    )


# -- classification --------------------------------------------------


class Classification(Enum):
    U_QSET = "UQset"
    U_QCLASS = "UQclass"
    U_PROPER_QCLASS = "UProperQclass"
    NEITHER = "Neither"


def classify(x: QSet, u: Union[QSet, Fragment]) -> Classification:
    """Place x relative to a universe fragment.

    Membership makes it a universe-qset.  Otherwise, if every class of x
    occurs in the fragment with at least x's count, x is a qclass that
    is not a member, i.e. a proper qclass.  A qclass that is also a
    member reports as a qset; the bare qclass verdict never wins, it is
    kept for schema completeness.
    """
    universe = _as_universe(u)
    if universe.count(x) > 0:
        return Classification.U_QSET
    if all(universe.count(d) >= n for d, n in x.classes()):
        return Classification.U_PROPER_QCLASS
    return Classification.NEITHER


def is_small_category(c: CategoryPresentation, u: Union[QSet, Fragment]) -> bool:
    """Small means both the object and morphism collections are members."""
    universe = _as_universe(u)
    return (
        classify(c.objects, universe) is Classification.U_QSET
        and classify(c.morphisms, universe) is Classification.U_QSET
    )
