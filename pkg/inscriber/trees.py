"""Dual trees of stacked polytopes and rooted subdivision plans."""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from inscriber.errors import EmptyTree, InvalidPlan, NotStacked, UnknownNode

logger = logging.getLogger(__name__)

MAX_INSCRIBABLE_DEGREE = 3


@dataclass(frozen=True)
class DualTree:
    nodes: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.nodes < 1:
            raise EmptyTree("a dual tree needs at least one node")
        edges = tuple(sorted(tuple(sorted((int(a), int(b)))) for a, b in self.edges))
        object.__setattr__(self, "edges", edges)
        for a, b in edges:
            if a == b or a < 0 or b >= self.nodes:
                raise InvalidPlan(f"edge ({a}, {b}) is not between two distinct nodes of 0..{self.nodes - 1}")
        if len(set(edges)) != len(edges) or len(edges) != self.nodes - 1:
            raise InvalidPlan(f"a tree on {self.nodes} nodes has exactly {self.nodes - 1} distinct edges")
        if len(_reachable(self.adjacency(), 0)) != self.nodes:
            raise InvalidPlan("the edges do not connect all nodes")

    def adjacency(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {v: [] for v in range(self.nodes)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {v: sorted(ns) for v, ns in adj.items()}

    def degree(self, v: int) -> int:
        self._check(v)
        return sum(1 for e in self.edges if v in e)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.nodes:
            raise UnknownNode(f"node {v} is not in the tree")


def _reachable(adj: Mapping[int, Sequence[int]], start: int) -> Set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


@dataclass(frozen=True)
class PlanChild:
    node: int
    face: Optional[int] = None


@dataclass(frozen=True, eq=True)
class RootedPlan:
    """A rooted subdivision plan; the root is the first stellar subdivision."""

    root: int
    children: Mapping[int, Tuple[PlanChild, ...]] = field(hash=False)

    def __post_init__(self):
        table = {int(k): tuple(v) for k, v in self.children.items()}
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            labels = [c.face for c in table.get(v, ()) if c.face is not None]
            if len(set(labels)) != len(labels):
                raise InvalidPlan(f"node {v} has children with repeated face labels {labels}")
            for child in table.get(v, ()):
                if child.node in seen:
                    raise InvalidPlan(f"node {child.node} appears twice in the plan")
                seen.add(child.node)
                queue.append(child.node)
        unreachable = set(table) - seen
        if unreachable:
            raise InvalidPlan(f"nodes {sorted(unreachable)} are not below the root")
        object.__setattr__(self, "children", MappingProxyType(table))

    def children_of(self, node: int) -> Tuple[PlanChild, ...]:
        return self.children.get(node, ())

    def nodes(self) -> List[int]:
        order = [self.root]
        for v in order:
            order.extend(c.node for c in self.children_of(v))
        return order


@dataclass(frozen=True)
class Decision:
    inscribable: bool
    max_degree: int
    witness: Optional[int]


class PlanStatus(Enum):
    OK = "ok"
    TOO_MANY_CHILDREN = "too_many_children"
    LABEL_OUT_OF_RANGE = "label_out_of_range"


@dataclass(frozen=True)
class PlanDiagnosis:
    status: PlanStatus
    node: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.status is PlanStatus.OK


@dataclass(frozen=True)
class StackingStep:
    vertex: int
    facet: Tuple[int, ...]


@dataclass(frozen=True)
class StackingOrder:
    base: Tuple[int, ...]
    steps: Tuple[StackingStep, ...]


def max_degree(t: DualTree) -> Tuple[int, int]:
    degrees = [len(ns) for _, ns in sorted(t.adjacency().items())]
    best = max(degrees)
    return best, degrees.index(best)


def decide_inscribable(t: DualTree) -> Decision:
    degree, node = max_degree(t)
    if degree <= MAX_INSCRIBABLE_DEGREE:
        return Decision(inscribable=True, max_degree=degree, witness=None)
    return Decision(inscribable=False, max_degree=degree, witness=node)


def root_plan(t: DualTree, root: int) -> RootedPlan:
    t._check(root)
    adj = t.adjacency()
    children: Dict[int, Tuple[PlanChild, ...]] = {}
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        below = [w for w in adj[v] if w not in seen]
        seen.update(below)
        queue.extend(below)
        children[v] = tuple(PlanChild(node=w) for w in below)
    return RootedPlan(root=root, children=children)


def buildable_root(t: DualTree) -> int:
    """Smallest node that can serve as plan root (at most two neighbours)."""
    adj = t.adjacency()
    for v in range(t.nodes):
        if len(adj[v]) <= 2:
            return v
    raise InvalidPlan("every node has degree three or more")


def plan_is_buildable(p: RootedPlan, d: int) -> PlanDiagnosis:
    for node in p.nodes():
        kids = p.children_of(node)
        if len(kids) > 2:
            return PlanDiagnosis(PlanStatus.TOO_MANY_CHILDREN, node)
        if any(c.face is not None and not 0 <= c.face < d for c in kids):
            return PlanDiagnosis(PlanStatus.LABEL_OUT_OF_RANGE, node)
    return PlanDiagnosis(PlanStatus.OK)


def count_simple_vertices(t: DualTree) -> int:
    """Leaf count of the dual tree.

    With a designated root that has a single child the root simplex carries one
    more simple vertex; over all roots the root-independent count is the leaf count.
    """
    if t.nodes < 2:
        raise EmptyTree("simple vertices are counted on trees with at least two nodes")
    return sum(1 for ns in t.adjacency().values() if len(ns) == 1)


def extract_dual_tree(facets: Iterable[Sequence[int]], d: int) -> Tuple[DualTree, StackingOrder]:
    current: Set[Tuple[int, ...]] = {tuple(sorted(f)) for f in facets}
    if not current or any(len(f) != d or len(set(f)) != d for f in current):
        raise NotStacked(f"facets of a simplicial {d}-polytope have {d} distinct vertices")
    ridge_count: Dict[Tuple[int, ...], int] = {}
    for f in current:
        for ridge in combinations(f, d - 1):
            ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
    bad = [r for r, n in ridge_count.items() if n != 2]
    if bad:
        raise NotStacked(f"ridge {min(bad)} does not lie in exactly two facets")

    peeled: List[StackingStep] = []
    while True:
        vertices = sorted({v for f in current for v in f})
        if len(vertices) == d + 1 and len(current) == d + 1:
            base = tuple(vertices)
            break
        step = _peel_smallest_simple(current, vertices, d)
        if step is None:
            raise NotStacked(f"no simple vertex left among {len(vertices)} vertices")
        current = {f for f in current if step.vertex not in f}
        current.add(step.facet)
        peeled.append(step)
        logger.debug("peeled simple vertex %d with link %s", step.vertex, step.facet)

    steps = tuple(reversed(peeled))
    simplices = [base] + [tuple(sorted(s.facet + (s.vertex,))) for s in steps]
    edges = [
        (i, j)
        for i, j in combinations(range(len(simplices)), 2)
        if len(set(simplices[i]) & set(simplices[j])) == d
    ]
    return DualTree(nodes=len(simplices), edges=tuple(edges)), StackingOrder(base=base, steps=steps)


def _peel_smallest_simple(current: Set[Tuple[int, ...]], vertices: Sequence[int], d: int) -> Optional[StackingStep]:
    for v in vertices:
        star = [f for f in current if v in f]
        if len(star) != d:
            continue
        link = tuple(sorted({u for f in star for u in f if u != v}))
        if len(link) == d and link not in current:
            return StackingStep(vertex=v, facet=link)
    return None


def stacked_facets(t: DualTree, d: int, root: int = 0, rng=None) -> List[Tuple[int, ...]]:
    """Boundary facets of a stacked d-polytope whose dual tree is t.

    The root simplex has vertices 0..d; each further node adds the next vertex
    id. With a numpy Generator the glued facet is picked at random.
    """
    degree, node = max_degree(t)
    if degree > d + 1:
        raise InvalidPlan(f"node {node} has degree {degree} > {d + 1}; no stacked {d}-polytope has this dual tree")
    t._check(root)
    adj = t.adjacency()
    simplex = {root: tuple(range(d + 1))}
    glued: Dict[int, Set[Tuple[int, ...]]] = {root: set()}
    next_vertex = d + 1
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w in simplex:
                continue
            options = [f for f in combinations(simplex[v], d) if f not in glued[v]]
            face = options[int(rng.integers(len(options)))] if rng is not None else options[0]
            glued[v].add(face)
            simplex[w] = face + (next_vertex,)
            glued[w] = {face}
            next_vertex += 1
            queue.append(w)
    counts: Dict[Tuple[int, ...], int] = {}
    for s in simplex.values():
        for f in combinations(s, d):
            counts[f] = counts.get(f, 0) + 1
    return sorted(f for f, n in counts.items() if n == 1)


def _encode(adj: Mapping[int, Sequence[int]], v: int, parent: Optional[int]) -> str:
    return "(" + "".join(sorted(_encode(adj, w, v) for w in adj[v] if w != parent)) + ")"


def canonical_form(t: DualTree) -> str:
    """AHU encoding of the unrooted tree, taken at its center(s)."""
    adj = t.adjacency()
    remaining = set(range(t.nodes))
    degree = {v: len(ns) for v, ns in adj.items()}
    layer = [v for v in remaining if degree[v] <= 1]
    while len(remaining) > 2:
        nxt = []
        for v in layer:
            remaining.discard(v)
            for w in adj[v]:
                if w in remaining:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    return min(_encode(adj, c, None) for c in remaining)


def plan_canonical_form(p: RootedPlan) -> str:
    def encode(v: int) -> str:
        return "(" + "".join(sorted(encode(c.node) for c in p.children_of(v))) + ")"

    return encode(p.root)


@lru_cache(maxsize=None)
def _rooted_shapes(n: int) -> Tuple[tuple, ...]:
    if n == 1:
        return ((),)
    return tuple(_forests(n - 1, None))


def _forests(total: int, bound: Optional[Tuple[int, tuple]]) -> Iterator[tuple]:
    if total == 0:
        yield ()
        return
    for size in range(total, 0, -1):
        for shape in _rooted_shapes(size):
            key = (size, shape)
            if bound is not None and key > bound:
                continue
            for rest in _forests(total - size, key):
                yield (shape,) + rest


def _shape_to_tree(shape: tuple) -> DualTree:
    edges: List[Tuple[int, int]] = []
    counter = [0]

    def walk(s: tuple) -> int:
        me = counter[0]
        counter[0] += 1
        for child in s:
            edges.append((me, walk(child)))
        return me

    walk(shape)
    return DualTree(nodes=counter[0], edges=tuple(edges))


def enumerate_trees(n: int) -> List[DualTree]:
    """All trees on n nodes, one per isomorphism class."""
    if n < 1:
        raise EmptyTree("trees have at least one node")
    seen: Dict[str, DualTree] = {}
    for shape in _rooted_shapes(n):
        tree = _shape_to_tree(shape)
        seen.setdefault(canonical_form(tree), tree)
    return [seen[key] for key in sorted(seen)]


def random_tree(rng, n: int, max_degree: Optional[int] = None) -> DualTree:
    """Random tree on n nodes by attaching each node to an earlier one."""
    degrees = [0] * n
    edges = []
    for v in range(1, n):
        candidates = [u for u in range(v) if max_degree is None or degrees[u] < max_degree]
        u = candidates[int(rng.integers(len(candidates)))]
        degrees[u] += 1
        degrees[v] += 1
        edges.append((u, v))
    return DualTree(nodes=n, edges=tuple(edges))
