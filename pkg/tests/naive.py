"""From-scratch reference implementations used as test oracles.

Everything here is deliberately naive and independent of the ontosim
package internals: plain dicts and sets, recursive closures, exhaustive
scans. Inputs are raw (ids, child->parent edges) before any virtual-root
attachment; the oracle adds its own root.
"""

import math

ROOT = "__root__"


class NaiveOntology:
    """Brute-force ontology queries over a child->parent edge list.

    Results of the pure per-concept queries are memoized; the computation
    itself stays naive (DFS closures, exhaustive scans).
    """

    def __init__(self, ids, edges):
        self.ids = set(ids)
        parents = {c: set() for c in self.ids}
        children = {c: set() for c in self.ids}
        for child, parent in edges:
            parents[child].add(parent)
            children[parent].add(child)
        # attach every parentless concept to a synthetic root
        self.ids.add(ROOT)
        parents[ROOT] = set()
        children[ROOT] = set()
        for c in sorted(self.ids - {ROOT}):
            if not parents[c]:
                parents[c].add(ROOT)
                children[ROOT].add(c)
        self.parents = parents
        self.children = children
        self._cache = {}

    def _memo(self, key, compute):
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]

    def ancestors(self, c):
        """Reflexive-transitive closure over parent edges (DFS)."""
        return self._memo(("anc", c), lambda: self._ancestors(c))

    def _ancestors(self, c):
        seen = set()
        stack = [c]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(self.parents[v])
        return seen

    def descendants(self, c):
        return self._memo(("desc", c), lambda: self._descendants(c))

    def _descendants(self, c):
        seen = set()
        stack = [c]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(self.children[v])
        return seen

    def leaves_under(self, c):
        return {d for d in self.descendants(c) if not self.children[d]}

    def up_distance(self, c, a):
        """Min number of parent edges from c up to a; None if unreachable."""
        return self._memo(("up", c, a), lambda: self._up_distance(c, a))

    def _up_distance(self, c, a):
        frontier = {c}
        dist = 0
        seen = set()
        while frontier:
            if a in frontier:
                return dist
            seen |= frontier
            frontier = {p for v in frontier for p in self.parents[v]} - seen
            dist += 1
        return None

    def depth(self, c):
        """Root has depth 1."""
        return self.up_distance(c, ROOT) + 1

    def max_depth(self):
        return self._memo(("max_depth",),
                          lambda: max(self.depth(c) for c in self.ids))

    def ic(self, c):
        return self._memo(("ic", c), lambda: self._ic(c))

    def _ic(self, c):
        total_leaves = len(self.leaves_under(ROOT))
        leaves = len(self.leaves_under(c))
        subsumers = len(self.ancestors(c))
        return -math.log((leaves / subsumers + 1.0) / (total_leaves + 1.0))

    def max_ic(self):
        return self._memo(("max_ic",),
                          lambda: max(self.ic(c) for c in self.ids))

    def lca(self, c1, c2):
        """Scan all common ancestors: max ic, then max depth, then min id."""
        common = self.ancestors(c1) & self.ancestors(c2)
        return min(common, key=lambda a: (-self.ic(a), -self.depth(a), a))

    def path_nodes(self, c1, c2):
        """Exhaustive min over common ancestors of up+up+1, in nodes."""
        common = self.ancestors(c1) & self.ancestors(c2)
        return min(self.up_distance(c1, a) + self.up_distance(c2, a) + 1
                   for a in common)

    # measure formulas evaluated straight from the naive primitives

    def lch(self, c1, c2):
        return -math.log(self.path_nodes(c1, c2) / (2.0 * self.max_depth()))

    def wu_palmer(self, c1, c2):
        a = self.lca(c1, c2)
        value = 2.0 * self.depth(a) / (self.depth(c1) + self.depth(c2))
        return min(1.0, value)  # bounded by contract

    def resnik(self, c1, c2):
        return self.ic(self.lca(c1, c2))

    def lin(self, c1, c2):
        denom = self.ic(c1) + self.ic(c2)
        if denom == 0.0:
            return 0.0
        return min(1.0, 2.0 * self.ic(self.lca(c1, c2)) / denom)

    def intrinsic_lch(self, c1, c2):
        num = self.ic(c1) + self.ic(c2) - 2.0 * self.ic(self.lca(c1, c2)) + 1.0
        return max(0.0, -math.log(num / (2.0 * self.max_ic())))

    def sokal(self, c1, c2):
        ic_a = self.ic(self.lca(c1, c2))
        if ic_a == 0.0:
            return 0.0
        if c1 == c2:
            return 1.0  # denominator reduces to ic algebraically
        value = ic_a / (2.0 * (self.ic(c1) + self.ic(c2)) - 3.0 * ic_a)
        return min(1.0, value)


def random_dag(rng, n, multi_parent_p=0.2, extra_root_p=0.05):
    """Seeded random DAG: ids N000.., parents drawn among earlier nodes."""
    ids = [f"N{i:03d}" for i in range(n)]
    edges = []
    for i in range(1, n):
        if rng.random() < extra_root_p:
            continue  # parentless: becomes another branch under the root
        p = rng.randrange(i)
        edges.append((ids[i], ids[p]))
        if rng.random() < multi_parent_p and i > 1:
            q = rng.randrange(i)
            if q != p:
                edges.append((ids[i], ids[q]))
    return ids, edges


def naive_full_inclusion(scores, targets):
    """Linear-scan oracle for the full-inclusion threshold triple."""
    thr = min(scores[t] for t in targets)
    external = [c for c in scores if c not in targets]
    count = sum(1 for c in external if scores[c] >= thr)
    prop = count / len(external) if external else 0.0
    return thr, count, prop


def naive_kappa(a, b):
    """Direct 2x2 contingency arithmetic."""
    n = len(a)
    yy = sum(1 for k in a if a[k] and b[k])
    yn = sum(1 for k in a if a[k] and not b[k])
    ny = sum(1 for k in a if not a[k] and b[k])
    nn = sum(1 for k in a if not a[k] and not b[k])
    po = (yy + nn) / n
    pe = ((yy + yn) * (yy + ny) + (ny + nn) * (yn + nn)) / (n * n)
    if pe == 1.0:
        return po, pe, 1.0
    return po, pe, (po - pe) / (1.0 - pe)
