"""
Система непересекающихся множеств

Компоненты цепной связности на масштабе r и слияние кластеров
при поиске разбиений.
"""

from collections import Counter
from typing import Dict, FrozenSet, Generic, List, TypeVar

T = TypeVar("T")


class UnionFind(Generic[T]):
    """
    Система непересекающихся множеств с объединением по рангу
    и сжатием путей

    >>> uf = UnionFind()
    >>> uf.union(0, 1)
    >>> uf.union(3, 4)
    >>> uf.find(1) == uf.find(0)
    True
    >>> uf.find(2)
    2
    """

    def __init__(self) -> None:
        self.parent: Dict[T, T] = {}
        self.rank: Dict[T, int] = Counter()

    def find(self, x: T) -> T:
        try:
            if self.parent[x] != x:
                self.parent[x] = self.find(self.parent[x])
        except KeyError:
            self.parent[x] = x

        return self.parent[x]

    def union(self, x: T, y: T) -> None:
        px = self.find(x)
        py = self.find(y)

        if px == py:
            return

        if self.rank[px] == self.rank[py]:
            self.parent[py] = px
            self.rank[px] += 1
        elif self.rank[px] > self.rank[py]:
            self.parent[py] = px
        else:
            self.parent[px] = py

    def components(self) -> List[FrozenSet[T]]:
        """Классы, упорядоченные по наименьшему элементу"""
        groups: Dict[T, set] = {}
        for x in list(self.parent):
            groups.setdefault(self.find(x), set()).add(x)
        return sorted((frozenset(g) for g in groups.values()), key=min)
