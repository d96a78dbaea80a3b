"""Constructors on canonical quasi-sets.

Everything here enumerates finitely and completely: when a bound makes
an operation too large to enumerate, it raises CapExceeded instead of
returning a truncated value.

The counting rule that drives ``power`` and ``product``: a quasi-set
only knows class counts, so a "sub-quasi-set" is a choice of how many
elements to take from each class, and it occurs in the power quasi-set
with multiplicity C(n, k) per class taken k-from-n.  This way
qcard(power(x)) == 2 ** qcard(x), matching the count of labeled subsets
while the value itself stays label-free.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

from .errors import CapExceeded, NonClassicalIndex, NotInUniverse
from .kernel import ElementDesc, PrimPair, QSet, as_descriptor, canonical_text

__all__ = [
    "POWER_QCARD_CAP",
    "PRODUCT_QCARD_CAP",
    "power",
    "singleton_in",
    "pair_in",
    "opair_in",
    "product",
    "union",
    "IndexedFamily",
    "family_union",
    "family_from_pairs",
]

POWER_QCARD_CAP = 16
PRODUCT_QCARD_CAP = 4096


def power(x: QSet, *, cap: int = POWER_QCARD_CAP) -> QSet:
    """The quasi-set of all sub-quasi-set forms of x, binomially counted."""
    if not isinstance(x, QSet):
        raise TypeError("power is defined on quasi-sets, got %r" % (x,))
    if x.qcard > cap:
        raise CapExceeded("power operand has qcard %d, cap is %d" % (x.qcard, cap))
    classes = list(x.classes())
    members: list[tuple[QSet, int]] = []
    for picks in itertools.product(*(range(n + 1) for _, n in classes)):
        mult = 1
        chosen = []
        for (desc, n), k in zip(classes, picks):
            mult *= math.comb(n, k)
            if k:
                chosen.append((desc, k))
        members.append((QSet(chosen), mult))
    return QSet(members)


def singleton_in(x, universe: QSet) -> QSet:
    """The class of x inside a universe: every element indistinguishable
    from x, with the universe's own multiplicity.  qcard can exceed 1."""
    desc = as_descriptor(x)
    n = universe.count(desc)
    if n == 0:
        raise NotInUniverse("%s is not an element of the universe" % canonical_text(desc))
    return QSet([(desc, n)])


def pair_in(x, y, universe: QSet) -> QSet:
    """Unordered pair relative to a universe: union of the two classes."""
    return union(singleton_in(x, universe), singleton_in(y, universe))


def opair_in(x, y, universe: QSet) -> QSet:
    """Ordered pair relative to a universe, two-set style.

    Built as {class-of-x, pair-of-x-y}; when the two components coincide
    (x and y indistinguishable) the forms collapse to a single member.
    """
    s = singleton_in(x, universe)
    p = pair_in(x, y, universe)
    if s == p:
        return QSet([s])
    return QSet([s, p])


def product(x: QSet, y: QSet, *, cap: int = PRODUCT_QCARD_CAP) -> QSet:
    """Cartesian product: primitive pairs of classes, counts multiplied."""
    if not isinstance(x, QSet) or not isinstance(y, QSet):
        raise TypeError("product is defined on quasi-sets")
    size = x.qcard * y.qcard
    if size > cap:
        raise CapExceeded("product result would have qcard %d, cap is %d" % (size, cap))
    return QSet(
        (PrimPair(a, b), na * nb)
        for a, na in x.classes()
        for b, nb in y.classes()
    )


def union(x: QSet, y: QSet) -> QSet:
    """Classwise maximum of counts; idempotent and commutative."""
    if not isinstance(x, QSet) or not isinstance(y, QSet):
        raise TypeError("union is defined on quasi-sets")
    counts: dict[ElementDesc, int] = dict(x.classes())
    for desc, n in y.classes():
        if counts.get(desc, 0) < n:
            counts[desc] = n
    return QSet(counts.items())


@dataclass(frozen=True, eq=True)
class IndexedFamily:
    """A family of quasi-sets indexed by a classical quasi-set.

    Only classical indices are allowed: indexing by indistinguishable
    atoms would let the index secretly distinguish them.  ``entries``
    maps each element descriptor of ``index`` to a quasi-set.
    """

    index: QSet
    entries: Mapping[ElementDesc, QSet]

    def __post_init__(self):
        if not isinstance(self.index, QSet):
            raise TypeError("family index must be a quasi-set")
        if not self.index.is_classical:
            raise NonClassicalIndex("family index must be classical (no m-atoms anywhere)")
        index_classes = {desc for desc, _ in self.index.classes()}
        keys = set(self.entries.keys())
        if keys != index_classes:
            raise ValueError("family entries must be keyed by exactly the index's elements")
        for v in self.entries.values():
            if not isinstance(v, QSet):
                raise TypeError("family entries must be quasi-sets")


def family_union(family: IndexedFamily) -> QSet:
    """Union of all entries of a classically-indexed family."""
    out = QSet()
    for desc in sorted(family.entries, key=lambda d: canonical_text(d)):
        out = union(out, family.entries[desc])
    return out


def family_from_pairs(graph: QSet) -> IndexedFamily:
    """Read a family off a quasi-set of pairs <index-element, entry>.

    The firsts become the index (each once); every first must be paired
    with exactly one entry, and every entry must be a quasi-set.
    """
    entries: dict[ElementDesc, QSet] = {}
    for desc, _ in graph.classes():
        if not isinstance(desc, PrimPair):
            raise TypeError("family graph elements must be pairs, got %s" % canonical_text(desc))
        i, v = desc.first, desc.second
        if not isinstance(v, QSet):
            raise TypeError("family entry for %s must be a quasi-set" % canonical_text(i))
        if i in entries and entries[i] != v:
            raise ValueError("family assigns two entries to index element %s" % canonical_text(i))
        entries[i] = v
    index = QSet((desc, 1) for desc in entries)
    return IndexedFamily(index=index, entries=entries)
