"""Rotation-system representation of maps on oriented surfaces.

A map on ``n`` darts (n even) is a permutation ``sigma`` giving the
counterclockwise successor of each dart around its vertex, with the edge
involution hardwired as ``alpha(d) = d ^ 1`` (darts 2k and 2k+1 form edge k).
Faces are the orbits of ``phi = sigma o alpha``; that convention is fixed
once here and used everywhere (the opposite choice mirrors every map and
changes no count).

Vertices and faces are numbered by their smallest dart, in increasing order,
and that numbering is what the JSON format and the pointed-vertex field
refer to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple


class MapError(ValueError):
    """Structurally invalid map data."""


class PlanarMap:
    """Immutable-by-convention rotation system with alpha(d) = d ^ 1."""

    __slots__ = ("n_darts", "sigma", "pointed_vertex", "_vertices", "_faces", "_vid")

    def __init__(self, sigma: Sequence[int], pointed_vertex: int | None = None):
        sigma = tuple(sigma)
        n = len(sigma)
        if n < 2 or n % 2 != 0:
            raise MapError(f"n_darts must be even and positive, got {n}")
        if sorted(sigma) != list(range(n)):
            raise MapError("sigma is not a permutation of the darts")
        self.n_darts = n
        self.sigma = sigma
        self._vertices: Tuple[Tuple[int, ...], ...] | None = None
        self._faces: Tuple[Tuple[int, ...], ...] | None = None
        self._vid: Dict[int, int] | None = None
        self.pointed_vertex = pointed_vertex
        if pointed_vertex is not None and not (
            0 <= pointed_vertex < self.vertex_count()
        ):
            raise MapError(f"pointed_vertex {pointed_vertex} out of range")

    # -- permutations --------------------------------------------------

    @staticmethod
    def alpha(d: int) -> int:
        return d ^ 1

    def phi(self, d: int) -> int:
        return self.sigma[d ^ 1]

    @staticmethod
    def _orbits(images: Sequence[int], n: int) -> Tuple[Tuple[int, ...], ...]:
        seen = [False] * n
        out: List[Tuple[int, ...]] = []
        for start in range(n):
            if seen[start]:
                continue
            cyc = []
            d = start
            while not seen[d]:
                seen[d] = True
                cyc.append(d)
                d = images[d]
            out.append(tuple(cyc))
        return tuple(out)

    def vertices(self) -> Tuple[Tuple[int, ...], ...]:
        if self._vertices is None:
            self._vertices = self._orbits(self.sigma, self.n_darts)
        return self._vertices

    def faces(self) -> Tuple[Tuple[int, ...], ...]:
        if self._faces is None:
            phi = [self.sigma[d ^ 1] for d in range(self.n_darts)]
            self._faces = self._orbits(phi, self.n_darts)
        return self._faces

    # -- derived counts --------------------------------------------------

    def vertex_count(self) -> int:
        return len(self.vertices())

    def edge_count(self) -> int:
        return self.n_darts // 2

    def face_count(self) -> int:
        return len(self.faces())

    def vertex_of_dart(self, d: int) -> int:
        if self._vid is None:
            self._vid = {}
            for vid, cyc in enumerate(self.vertices()):
                for dart in cyc:
                    self._vid[dart] = vid
        return self._vid[d]

    def face_degrees(self) -> Tuple[int, ...]:
        return tuple(sorted(len(f) for f in self.faces()))

    def is_connected(self) -> bool:
        n = self.n_darts
        seen = [False] * n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            d = stack.pop()
            for e in (self.sigma[d], d ^ 1):
                if not seen[e]:
                    seen[e] = True
                    count += 1
                    stack.append(e)
        return count == n

    def genus(self) -> int:
        chi = self.vertex_count() - self.edge_count() + self.face_count()
        if (2 - chi) % 2 != 0:
            raise MapError("Euler characteristic has wrong parity; corrupt map")
        return (2 - chi) // 2

    def require_planar(self) -> None:
        if not self.is_connected():
            raise MapError("map is not connected")
        g = self.genus()
        if g != 0:
            raise MapError(f"map has genus {g}, expected 0")

    # -- JSON ----------------------------------------------------------

    def to_json_obj(self) -> dict:
        obj: dict = {"n_darts": self.n_darts, "sigma": list(self.sigma)}
        if self.pointed_vertex is not None:
            obj["pointed_vertex"] = self.pointed_vertex
        return obj

    def to_json_str(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json_obj(obj: dict) -> "PlanarMap":
        try:
            sigma = obj["sigma"]
            n = obj["n_darts"]
        except (KeyError, TypeError) as exc:
            raise MapError(f"map JSON missing field: {exc}") from exc
        if not isinstance(sigma, list) or len(sigma) != n:
            raise MapError("sigma length disagrees with n_darts")
        return PlanarMap(sigma, obj.get("pointed_vertex"))

    @staticmethod
    def from_json_str(text: str) -> "PlanarMap":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MapError(f"bad map JSON: {exc}") from exc
        return PlanarMap.from_json_obj(obj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlanarMap):
            return NotImplemented
        return self.sigma == other.sigma and self.pointed_vertex == other.pointed_vertex

    def __repr__(self) -> str:
        return f"PlanarMap(sigma={list(self.sigma)}, pointed_vertex={self.pointed_vertex})"


def bfs_distances(pmap: PlanarMap, v0: int) -> Dict[int, int]:
    """Graph distances from vertex v0 on the underlying vertex graph."""
    if not (0 <= v0 < pmap.vertex_count()):
        raise MapError(f"vertex {v0} out of range")
    if not pmap.is_connected():
        raise MapError("map is not connected")
    dist = {v0: 0}
    frontier = [v0]
    verts = pmap.vertices()
    while frontier:
        nxt = []
        for v in frontier:
            for d in verts[v]:
                w = pmap.vertex_of_dart(d ^ 1)
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


DARK = "dark"
LIGHT = "light"


@dataclass(frozen=True)
class HypermapColoring:
    """A proper dark/light 2-coloring of the faces with all dark faces of
    degree p.  ``colors[fid]`` is "dark" or "light" per face id."""

    pmap: PlanarMap
    colors: Tuple[str, ...]

    def light_faces(self) -> Tuple[int, ...]:
        return tuple(f for f, c in enumerate(self.colors) if c == LIGHT)

    def dark_faces(self) -> Tuple[int, ...]:
        return tuple(f for f, c in enumerate(self.colors) if c == DARK)


def hypermap_colorings(pmap: PlanarMap, p: int) -> List[HypermapColoring]:
    """All 2-colorings making the map a p-hypermap (0, 1, or 2 of them).

    Every edge must separate a dark face from a light one, so loops bounded
    by a single face kill all colorings; the face-adjacency graph of a
    connected map is connected, leaving at most two proper colorings (color
    swaps of each other), then the dark-degree filter applies.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if not pmap.is_connected():
        raise MapError("map is not connected")
    faces = pmap.faces()
    fid = {}
    for i, cyc in enumerate(faces):
        for d in cyc:
            fid[d] = i
    nf = len(faces)
    # 2-color the face-adjacency graph (one constraint per edge).
    color = [-1] * nf
    color[0] = 0
    changed = True
    edges = [(fid[2 * k], fid[2 * k + 1]) for k in range(pmap.edge_count())]
    while changed:
        changed = False
        for a, b in edges:
            for u, w in ((a, b), (b, a)):
                if color[u] >= 0 and color[w] < 0:
                    color[w] = 1 - color[u]
                    changed = True
    for a, b in edges:
        if a == b or color[a] == color[b]:
            return []
    out = []
    for darkside in (0, 1):
        names = tuple(DARK if color[f] == darkside else LIGHT for f in range(nf))
        if all(len(faces[f]) == p for f in range(nf) if names[f] == DARK):
            out.append(HypermapColoring(pmap, names))
    return out
