"""Plane trees with colored vertices and buds: mobiles and blossoming trees.

An :class:`MNode` is a vertex of a rooted plane tree.  Colors:

* ``white``  - round vertex,
* ``black``  - square branch vertex (the light square for p >= 3),
* ``dark``   - dark square vertex (p >= 3 only),
* ``bud``    - a dangling half-edge, stored as a special leaf child.

The rooted tree *is* the corner-rooted object: the root corner sits just
before the first child of the root.  Unrooted comparisons go through
:func:`canon_unrooted`, the minimum over every (vertex, rotation) rooting of
the structural encoding, so two trees are equal as plane trees iff their
canonical forms coincide.

Mobile conditions checked by :func:`validate_mobile`, for p = 2: no
white-white edge and every black vertex has exactly as many buds as white
neighbours; the black-black edges of a valid mobile are empty (bipartite) or
form a path joining the two odd-degree blacks (quasi-bipartite).  For p >= 3
the conditions are the ones for p-mobiles (dark squares of degree p acting as
big buds on light squares of degree p*i) and, in the quasi case, an
alternating light/dark path joining the two light squares whose degree is not
divisible by p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Sequence, Tuple

from .exactnum import binomial

WHITE = "white"
BLACK = "black"
DARK = "dark"
BUD = "bud"

_COLOR_CODE = {WHITE: 0, BLACK: 1, DARK: 2, BUD: 3}


class MobileError(ValueError):
    """Structurally invalid mobile/tree data."""


@dataclass(frozen=True)
class MNode:
    color: str
    children: Tuple["MNode", ...] = ()
    mark: int | None = None

    def __post_init__(self):
        if self.color not in _COLOR_CODE:
            raise MobileError(f"unknown color {self.color!r}")
        if self.color == BUD and self.children:
            raise MobileError("buds cannot have children")

    @property
    def is_bud(self) -> bool:
        return self.color == BUD


def white(children: Iterable[MNode] = (), mark: int | None = None) -> MNode:
    return MNode(WHITE, tuple(children), mark)


def black(children: Iterable[MNode] = (), mark: int | None = None) -> MNode:
    return MNode(BLACK, tuple(children), mark)


def dark(children: Iterable[MNode] = (), mark: int | None = None) -> MNode:
    return MNode(DARK, tuple(children), mark)


def bud() -> MNode:
    return MNode(BUD)


def big_bud(p: int) -> MNode:
    """A dark square carrying p-1 buds: the unit hanging off light squares."""
    return dark([bud()] * (p - 1))


def is_big_bud(node: MNode, p: int) -> bool:
    return (
        node.color == DARK
        and len(node.children) == p - 1
        and all(c.is_bud for c in node.children)
    )


# -- traversal helpers -------------------------------------------------------


def iter_nodes(root: MNode):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children)


def white_count(root: MNode) -> int:
    return sum(1 for n in iter_nodes(root) if n.color == WHITE)


def degree(node: MNode, is_root: bool) -> int:
    """Incident half-edges: children (buds included) plus the parent edge."""
    return len(node.children) + (0 if is_root else 1)


def black_degree_multiset(root: MNode, unmarked_only: bool = False) -> Tuple[int, ...]:
    out = []
    def walk(node: MNode, is_root: bool) -> None:
        if node.color == BLACK and not (unmarked_only and node.mark is not None):
            out.append(degree(node, is_root))
        for c in node.children:
            walk(c, False)
    walk(root, True)
    return tuple(sorted(out))


def black_profile(root: MNode, p: int, unmarked_only: bool = False) -> Tuple[Tuple[int, int], ...]:
    """Degrees of (unmarked) black vertices as sorted (i, count) pairs with
    degree = p*i; raises when some degree is not a multiple of p."""
    counts: Dict[int, int] = {}
    for deg in black_degree_multiset(root, unmarked_only):
        if deg % p != 0:
            raise MobileError(f"black vertex of degree {deg} not a multiple of {p}")
        i = deg // p
        counts[i] = counts.get(i, 0) + 1
    return tuple(sorted(counts.items()))


# -- JSON ---------------------------------------------------------------------


def to_json_obj(node: MNode) -> dict:
    obj: dict = {
        "bud": node.is_bud,
        "children": [to_json_obj(c) for c in node.children],
        "color": node.color,
    }
    if node.mark is not None:
        obj["mark"] = node.mark
    return obj


def to_json_str(node: MNode) -> str:
    return json.dumps(to_json_obj(node), sort_keys=True, separators=(",", ":"))


def from_json_obj(obj: dict) -> MNode:
    try:
        color = obj["color"]
        children = tuple(from_json_obj(c) for c in obj.get("children", []))
    except (KeyError, TypeError) as exc:
        raise MobileError(f"bad mobile JSON: {exc}") from exc
    if bool(obj.get("bud", False)) != (color == BUD):
        raise MobileError("bud flag disagrees with color")
    return MNode(color, children, obj.get("mark"))


def from_json_str(text: str) -> MNode:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MobileError(f"bad mobile JSON: {exc}") from exc
    return from_json_obj(obj)


# -- canonical forms ----------------------------------------------------------


class _AdjNode:
    __slots__ = ("color", "mark", "neighbors")

    def __init__(self, color: str, mark: int | None):
        self.color = color
        self.mark = mark
        self.neighbors: List[int] = []  # cyclic order; parent spliced in place


def _adjacency(root: MNode) -> List[_AdjNode]:
    """Flatten to vertices with cyclic neighbor lists.

    The parent occupies the position just before the first child, which is
    exactly where the root corner sat, so no corner information is lost.
    """
    nodes: List[_AdjNode] = []

    def build(node: MNode, parent: int | None) -> int:
        idx = len(nodes)
        nodes.append(_AdjNode(node.color, node.mark))
        order: List[int] = []
        if parent is not None:
            order.append(parent)
        for c in node.children:
            order.append(build(c, idx))
        nodes[idx].neighbors = order
        return idx

    build(root, None)
    return nodes


def _encode_from(nodes: List[_AdjNode], v: int, parent: int | None, start: int):
    node = nodes[v]
    nbrs = node.neighbors
    k = len(nbrs)
    mark = -1 if node.mark is None else node.mark
    children = []
    for off in range(k):
        w = nbrs[(start + off) % k]
        if parent is not None and w == parent:
            continue
        children.append(_encode_from(nodes, w, v, nodes[w].neighbors.index(v) + 1))
    return (_COLOR_CODE[node.color], mark, tuple(children))


def canon_rooted(root: MNode):
    """Structural encoding of the corner-rooted tree (no re-rooting)."""
    def enc(node: MNode):
        mark = -1 if node.mark is None else node.mark
        return (_COLOR_CODE[node.color], mark, tuple(enc(c) for c in node.children))
    return enc(root)


def canon_unrooted(root: MNode):
    """Minimum of canon_rooted over all corner rootings of the plane tree."""
    nodes = _adjacency(root)
    best = None
    for v, node in enumerate(nodes):
        if node.color == BUD:
            continue
        k = max(len(node.neighbors), 1)
        for start in range(k):
            enc = _encode_from(nodes, v, None, start % k)
            if best is None or enc < best:
                best = enc
    return best


def _node_from_encoding(enc) -> MNode:
    code_to_color = {v: k for k, v in _COLOR_CODE.items()}
    color, mark, children = enc
    return MNode(
        code_to_color[color],
        tuple(_node_from_encoding(c) for c in children),
        None if mark == -1 else mark,
    )


def canonical_representative(root: MNode) -> MNode:
    """The tree re-rooted at its canonical corner."""
    return _node_from_encoding(canon_unrooted(root))


# -- classification ------------------------------------------------------------


class MobileClass(Enum):
    BIPARTITE = "bipartite"
    QUASI_BIPARTITE = "quasi-bipartite"
    P_REGULAR = "p-regular"
    QUASI_P = "quasi-p"
    INVALID = "invalid"


def classify_mobile(root: MNode, p: int) -> Tuple[MobileClass, str]:
    """Classify with a reason string; INVALID is a return, never a raise."""
    if p < 2:
        raise ValueError("p must be at least 2")
    if root.color == BUD:
        return MobileClass.INVALID, "a lone bud is not a mobile"
    nodes = _adjacency(root)
    if p == 2:
        return _classify_classical(nodes)
    return _classify_p(nodes, p)


def validate_mobile(root: MNode, p: int) -> MobileClass:
    return classify_mobile(root, p)[0]


def _neighbor_colors(nodes: List[_AdjNode], v: int) -> List[str]:
    return [nodes[w].color for w in nodes[v].neighbors]


def _classify_classical(nodes: List[_AdjNode]) -> Tuple[MobileClass, str]:
    odd_blacks = []
    black_ids = []
    for v, node in enumerate(nodes):
        cols = _neighbor_colors(nodes, v)
        if node.color == DARK:
            return MobileClass.INVALID, "dark squares do not occur when p = 2"
        if node.color == WHITE:
            if BUD in cols:
                return MobileClass.INVALID, "bud at a white vertex"
            if WHITE in cols:
                return MobileClass.INVALID, "white-white edge"
        elif node.color == BLACK:
            black_ids.append(v)
            buds = cols.count(BUD)
            whites = cols.count(WHITE)
            if buds != whites:
                return MobileClass.INVALID, (
                    f"black vertex with {buds} buds but {whites} white neighbours"
                )
            if len(cols) % 2 == 1:
                odd_blacks.append(v)
    if not odd_blacks:
        return MobileClass.BIPARTITE, "all black degrees even"
    if len(odd_blacks) != 2:
        return MobileClass.INVALID, f"{len(odd_blacks)} odd black vertices"
    # Quasi case: black-black edges must form exactly the path joining them.
    path = _tree_path(nodes, odd_blacks[0], odd_blacks[1])
    path_set = set(path)
    bb_edges = set()
    for v in black_ids:
        for w in nodes[v].neighbors:
            if nodes[w].color == BLACK:
                bb_edges.add((min(v, w), max(v, w)))
    path_edges = {
        (min(a, b), max(a, b)) for a, b in zip(path, path[1:])
    }
    if any(nodes[v].color != BLACK for v in path):
        return MobileClass.INVALID, "path between odd blacks leaves the black forest"
    if bb_edges != path_edges:
        return MobileClass.INVALID, "black-black edges do not form the odd-odd path"
    return MobileClass.QUASI_BIPARTITE, "two odd blacks joined by a black path"


def _classify_p(nodes: List[_AdjNode], p: int) -> Tuple[MobileClass, str]:
    non_regular = []
    for v, node in enumerate(nodes):
        cols = _neighbor_colors(nodes, v)
        deg = len(cols)
        if node.color == WHITE:
            if any(c != BLACK for c in cols):
                return MobileClass.INVALID, "round vertices may only touch light squares"
        elif node.color == DARK:
            if deg != p:
                return MobileClass.INVALID, f"dark square of degree {deg} != {p}"
            lights = cols.count(BLACK)
            budn = cols.count(BUD)
            if lights not in (1, 2) or lights + budn != p:
                return MobileClass.INVALID, "dark square must carry buds plus 1 or 2 light edges"
        elif node.color == BLACK:
            if BUD in cols:
                return MobileClass.INVALID, "bare bud directly on a light square"
            if BLACK in cols:
                return MobileClass.INVALID, "light-light edge"
            if deg % p != 0:
                non_regular.append(v)
    # Dark squares with two light neighbours are the intermediates; they may
    # occur only along the alternating path of a quasi mobile.
    intermediates = {
        v
        for v, node in enumerate(nodes)
        if node.color == DARK and _neighbor_colors(nodes, v).count(BLACK) == 2
    }
    if not non_regular:
        if intermediates:
            return MobileClass.INVALID, "intermediate dark squares without odd light squares"
        ok, why = _check_light_dark_counts(nodes, p, set())
        if not ok:
            return MobileClass.INVALID, why
        return MobileClass.P_REGULAR, "all light squares have degree divisible by p"
    if len(non_regular) != 2:
        return MobileClass.INVALID, f"{len(non_regular)} non-regular light squares"
    v1, v2 = non_regular
    d1 = len(nodes[v1].neighbors) % p
    d2 = len(nodes[v2].neighbors) % p
    if (d1 + d2) % p != 0:
        return MobileClass.INVALID, "non-regular degrees do not pair up modulo p"
    path = _tree_path(nodes, v1, v2)
    for u in path:
        if nodes[u].color == WHITE:
            return MobileClass.INVALID, "alternating path passes a round vertex"
    path_darks = {u for u in path if nodes[u].color == DARK}
    if intermediates != path_darks:
        return MobileClass.INVALID, "two-light dark squares off the alternating path"
    ok, why = _check_light_dark_counts(nodes, p, set(path))
    if not ok:
        return MobileClass.INVALID, why
    return MobileClass.QUASI_P, "alternating path joins the two non-regular lights"


def _check_light_dark_counts(nodes: List[_AdjNode], p: int, path_set) -> Tuple[bool, str]:
    """Dark-neighbour counts forced at every light square.

    Off the path, degree p*i means i big buds.  On the path, a regular light
    square of degree p*i has two path darks plus i-1 big buds; a non-regular
    end of degree l has one path dark plus floor(l/p) big buds, i.e.
    floor(l/p) + 1 darks in both on-path cases.
    """
    for v, node in enumerate(nodes):
        if node.color != BLACK:
            continue
        deg = len(node.neighbors)
        darks = sum(1 for w in node.neighbors if nodes[w].color == DARK)
        if v in path_set:
            expected = deg // p + 1
        else:
            expected = deg // p
        if darks != expected:
            return False, (
                f"light square of degree {deg} has {darks} dark neighbours, expected {expected}"
            )
    return True, ""


def _tree_path(nodes: List[_AdjNode], a: int, b: int) -> List[int]:
    parent = {a: None}
    frontier = [a]
    while frontier and b not in parent:
        nxt = []
        for v in frontier:
            for w in nodes[v].neighbors:
                if nodes[w].color != BUD and w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    path = [b]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    return path


# -- pruning -------------------------------------------------------------------


def _compositions_count(total: int, parts: int) -> int:
    return binomial(total + parts - 1, parts - 1)


def composition_unrank(total: int, parts: int, rank: int) -> Tuple[int, ...]:
    """The rank-th weak composition of ``total`` into ``parts`` parts, in
    lexicographic order."""
    if rank < 0 or rank >= _compositions_count(total, parts):
        raise MobileError(f"composition rank {rank} out of range")
    out = []
    remaining = total
    for slot in range(parts - 1, 0, -1):
        k = 0
        while True:
            block = _compositions_count(remaining - k, slot)
            if rank < block:
                break
            rank -= block
            k += 1
        out.append(k)
        remaining -= k
    out.append(remaining)
    return tuple(out)


def composition_rank(comp: Sequence[int]) -> int:
    total = sum(comp)
    rank = 0
    remaining = total
    parts = len(comp)
    for pos, k in enumerate(comp[:-1]):
        slot = parts - pos - 1
        for j in range(k):
            rank += _compositions_count(remaining - j, slot)
        remaining -= k
    return rank


def unprune_count(p: int, a: int) -> int:
    """Number of ways to re-insert the a (big) buds at a pruned marked vertex
    of original degree p*a: C(pa-1, a)."""
    if p < 2 or a < 1:
        raise ValueError("need p >= 2 and a >= 1")
    return binomial(p * a - 1, a)


def prune(root: MNode, p: int = 2) -> MNode:
    """Remove the buds (p = 2) or big buds (p >= 3) at every marked black.

    Marked blacks must have degree p*a for some a >= 1; their degree drops to
    (p-1)*a.  Unmarked vertices are untouched.
    """
    def walk(node: MNode, is_root: bool) -> MNode:
        children = tuple(walk(c, False) for c in node.children)
        if node.color == BLACK and node.mark is not None:
            deg = len(node.children) + (0 if is_root else 1)
            if deg % p != 0 or deg == 0:
                raise MobileError(
                    f"marked vertex of degree {deg} is not a degree p*a light square"
                )
            if p == 2:
                children = tuple(c for c in children if not c.is_bud)
            else:
                children = tuple(c for c in children if not is_big_bud(c, p))
        return MNode(node.color, children, node.mark)

    return walk(root, True)


def unprune_rank(root: MNode, ranks: Dict[int, int], p: int = 2) -> MNode:
    """Re-insert (big) buds at each marked black, one composition rank per
    mark.  At a marked black with q non-bud children, the a buds fall into
    the q+1 gaps of its child list per the lexicographic composition of rank
    ``ranks[mark]``.

    The marked vertex's pruned degree (p-1)*a determines a.  Inverse of
    :func:`prune` in the sense that pruning the result gives back ``root``.
    """
    def walk(node: MNode, is_root: bool) -> MNode:
        children = [walk(c, False) for c in node.children]
        if node.color == BLACK and node.mark is not None:
            deg = len(node.children) + (0 if is_root else 1)
            if deg % (p - 1) != 0:
                raise MobileError(
                    f"pruned marked vertex degree {deg} is not a multiple of p-1"
                )
            a = deg // (p - 1)
            rank = ranks.get(node.mark)
            if rank is None:
                raise MobileError(f"no placement rank for mark {node.mark}")
            gaps = len(children) + 1
            comp = composition_unrank(a, gaps, rank)
            unit = bud if p == 2 else (lambda: big_bud(p))
            rebuilt: List[MNode] = []
            for g in range(gaps):
                rebuilt.extend(unit() for _ in range(comp[g]))
                if g < len(children):
                    rebuilt.append(children[g])
            children = rebuilt
        return MNode(node.color, tuple(children), node.mark)

    return walk(root, True)


# -- forests and blossoming trees ----------------------------------------------

MarkRef = Tuple[int, Tuple[int, ...]]  # (component index, child path)


@dataclass(frozen=True)
class MobileForest:
    """Ordered rooted mobiles plus ordered marks on distinct white vertices.

    A mark is addressed as (component index, path of child indices from the
    component root).
    """

    components: Tuple[MNode, ...]
    marks: Tuple[MarkRef, ...] = ()

    def __post_init__(self):
        seen = set()
        for comp, path in self.marks:
            node = self.node_at(comp, path)
            if node.color != WHITE:
                raise MobileError(f"mark at {(comp, path)} is not a white vertex")
            if (comp, path) in seen:
                raise MobileError("marks must sit on distinct white vertices")
            seen.add((comp, path))

    def node_at(self, comp: int, path: Tuple[int, ...]) -> MNode:
        node = self.components[comp]
        for idx in path:
            node = node.children[idx]
        return node


@dataclass(frozen=True)
class BlossomingTree:
    """Planted blossoming p-tree.

    ``top`` is the subtree hanging from the planted root stub: a white leaf,
    or (p = 2) a black vertex of arity i carrying i subtrees and i-1 buds in
    its 2i-1 child slots, or (p >= 3) an intermediate dark square carrying
    p-2 buds and one light square child, the light square of arity (p-1)i
    carrying i-1 big buds among its p*i - 1 child slots.
    """

    p: int
    top: MNode

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be at least 2")
        _validate_blossom_top(self.top, self.p)

    def leaf_count(self) -> int:
        """Non-root (round) leaves; the planted root stub is not counted."""
        return white_count(self.top)

    def internal_profile(self) -> Tuple[Tuple[int, int], ...]:
        counts: Dict[int, int] = {}
        for node in iter_nodes(self.top):
            if node.color == BLACK:
                # Child slots plus the edge up (to the root stub for p = 2,
                # to the intermediate dark square above for p >= 3).
                deg = len(node.children) + 1
                if deg % self.p != 0:
                    raise MobileError(f"light square of degree {deg}")
                i = deg // self.p
                counts[i] = counts.get(i, 0) + 1
        return tuple(sorted(counts.items()))


def _validate_blossom_top(node: MNode, p: int) -> None:
    if node.color == WHITE:
        if node.children:
            raise MobileError("blossoming leaves carry no children")
        return
    if p == 2:
        if node.color != BLACK:
            raise MobileError("p=2 blossoming internals are black")
        slots = len(node.children)
        subtrees = [c for c in node.children if not c.is_bud]
        buds = slots - len(subtrees)
        i = len(subtrees)
        if i < 1 or slots != 2 * i - 1 or buds != i - 1:
            raise MobileError(
                f"black arity {i} needs 2i-1 slots with i-1 buds, got {slots} slots {buds} buds"
            )
        for c in subtrees:
            _validate_blossom_top(c, p)
        return
    if node.color != DARK:
        raise MobileError("p>=3 blossoming subtrees start at an intermediate dark square")
    lights = [c for c in node.children if c.color == BLACK]
    buds = [c for c in node.children if c.is_bud]
    if len(node.children) != p - 1 or len(lights) != 1 or len(buds) != p - 2:
        raise MobileError("intermediate dark square must carry p-2 buds and one light child")
    light = lights[0]
    slots = len(light.children)
    bigbuds = [c for c in light.children if is_big_bud(c, p)]
    subtrees = [c for c in light.children if not is_big_bud(c, p)]
    deg = slots + 1
    if deg % p != 0:
        raise MobileError(f"light square of degree {deg} not a multiple of p")
    i = deg // p
    if len(bigbuds) != i - 1 or len(subtrees) != (p - 1) * i:
        raise MobileError(
            f"light square of degree {deg} needs {i-1} big buds and {(p-1)*i} subtrees"
        )
    for c in subtrees:
        _validate_blossom_top(c, p)
