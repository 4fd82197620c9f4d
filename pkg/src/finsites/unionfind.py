"""Disjoint-set forest over hashable keys."""


class UnionFind:
    def __init__(self, items=()):
        self.parent = {}
        self.rank = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def groups(self, order=None):
        """Classes as lists, each sorted by `order` (insertion order by default),
        and the list of classes sorted by least member."""
        keys = list(self.parent) if order is None else list(order)
        pos = {k: i for i, k in enumerate(keys)}
        buckets = {}
        for k in keys:
            buckets.setdefault(self.find(k), []).append(k)
        out = [sorted(b, key=pos.__getitem__) for b in buckets.values()]
        out.sort(key=lambda b: pos[b[0]])
        return out
