"""Independent reference implementations backing the test suite.

Every function here recomputes a result from labeled occurrences using
its own nested normal form, sharing no canonicalization or counting
code with the package under test.  Expected values frozen into the
tests come from these oracles (or from hand computation where noted in
the individual tests).
"""

from __future__ import annotations

from collections import Counter
from itertools import product as iproduct

from qset import CAtom, Kind, MAtom, PrimPair, QSet, RawPair
from qset.morphism import QuasiRelation

# -- independent normal form ------------------------------------------
#
# Atoms become ("m", kind) / ("c", id) tags, pairs become ("p", a, b),
# collections become ("q", sorted (form, count) tuples).  m-atom labels
# are erased; repeated labels inside one collection are one occurrence.


def onf_build(node):
    """Normal form of a labeled build (lists, RawPair, atoms)."""
    if isinstance(node, MAtom):
        return ("m", node.kind.ident)
    if isinstance(node, CAtom):
        return ("c", node.ident)
    if isinstance(node, (RawPair, PrimPair)):
        return ("p", onf_build(node.first), onf_build(node.second))
    if isinstance(node, list):
        seen: set = set()
        forms = []
        for child in node:
            if isinstance(child, MAtom):
                key = ("atom", child.kind.ident, child.label)
                if key in seen:
                    continue
                seen.add(key)
                forms.append(("m", child.kind.ident))
            elif isinstance(child, CAtom):
                key = ("catom", child.ident)
                if key in seen:
                    continue
                seen.add(key)
                forms.append(("c", child.ident))
            else:
                forms.append(onf_build(child))
        return ("q", tuple(sorted(Counter(forms).items())))
    raise TypeError("not a build node: %r" % (node,))


def onf_value(value):
    """Normal form of a package value (QSet, descriptor, atom, pair)."""
    if isinstance(value, Kind):
        return ("m", value.ident)
    if isinstance(value, MAtom):
        return ("m", value.kind.ident)
    if isinstance(value, CAtom):
        return ("c", value.ident)
    if isinstance(value, PrimPair):
        return ("p", onf_value(value.first), onf_value(value.second))
    if isinstance(value, QSet):
        return ("q", tuple(sorted((onf_value(d), n) for d, n in value.classes())))
    raise TypeError("not a value: %r" % (value,))


def classes_by_onf(x: QSet) -> dict:
    return {onf_value(d): n for d, n in x.classes()}


def indist_oracle(a, b) -> bool:
    """Brute-force indistinguishability: equal normal forms."""
    return onf_value(a) == onf_value(b)


# -- labeled expansions ------------------------------------------------


def _occurrences(x: QSet) -> list:
    """One entry per top-level occurrence, tagged with its class form."""
    out = []
    for d, n in x.classes():
        form = onf_value(d)
        out.extend((form, i) for i in range(n))
    return out


def power_oracle(x: QSet) -> Counter:
    """Sub-qset forms of x with multiplicities, via labeled subsets.

    Every subset of the occurrence list is normalized; the returned
    counter maps each distinct sub-form to how many labeled subsets
    realize it.
    """
    occs = _occurrences(x)
    tally: Counter = Counter()
    for mask in range(1 << len(occs)):
        chosen = [occs[i][0] for i in range(len(occs)) if mask >> i & 1]
        tally[("q", tuple(sorted(Counter(chosen).items())))] += 1
    return tally


def product_oracle(x: QSet, y: QSet) -> Counter:
    """Ordered-pair forms with multiplicities, via labeled occurrences."""
    tally: Counter = Counter()
    for (fx, _), (fy, _) in iproduct(_occurrences(x), _occurrences(y)):
        tally[("p", fx, fy)] += 1
    return tally


def union_oracle(x: QSet, y: QSet) -> dict:
    cx, cy = classes_by_onf(x), classes_by_onf(y)
    return {f: max(cx.get(f, 0), cy.get(f, 0)) for f in set(cx) | set(cy)}


# -- the congruence formula at the labeled level -----------------------


def congruence_oracle(rel: QuasiRelation) -> bool:
    """Evaluate the quasi-function condition on a labeled expansion.

    The relation's class graph is expanded to individual occurrences
    x of the domain and y of the codomain; the labeled relation holds
    of (x, y) when their classes are related.  Checked literally:

      * congruence: related (x,y) and (x',y') with x = x' up to the
        kind/form equivalence force y = y' up to that equivalence;
      * totality: every domain occurrence is related to some y.
    """
    xs = [("x", i, f) for i, (f, _) in enumerate(_occurrences(rel.dom))]
    ys = [("y", i, f) for i, (f, _) in enumerate(_occurrences(rel.cod))]
    graph_forms = {(onf_value(a), onf_value(b)) for a, b in rel.graph}
    related = [(x, y) for x in xs for y in ys if (x[2], y[2]) in graph_forms]

    for x1, y1 in related:
        for x2, y2 in related:
            if x1[2] == x2[2] and y1[2] != y2[2]:
                return False
    for x in xs:
        if not any(px is x for px, _ in related):
            return False
    return True
