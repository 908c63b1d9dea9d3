"""Square-tiled surfaces (origamis) and their orbit under the integer shears.

An origami is a pair of permutations ``(h, v)`` of the squares: ``h`` sends
each square to its right neighbour, ``v`` to its upper neighbour.  The pair
must generate a transitive group (connected surface).  Two origamis present
the same surface iff they differ by a simultaneous relabeling of squares, so
we work with a canonical form throughout.

The two integer shears act by

    T_horizontal: (h, v) -> (h, v h^-1)
    T_vertical:   (h, v) -> (h v^-1, v)

and generate the full integer Moebius group.  Closing an origami under both
shears yields its finite orbit; the stabilizer of the basepoint is a
finite-index subgroup whose index equals the orbit size.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

Perm = tuple[int, ...]

DEFAULT_ORBIT_CAP = 10**6


class OrigamiError(ValueError):
    pass


class OrbitCapExceeded(RuntimeError):
    """Raised when an orbit enumeration exceeds the configured vertex cap."""


# ---------------------------------------------------------------------------
# permutation helpers

def perm_inverse(p: Perm) -> Perm:
    q = [0] * len(p)
    for i, x in enumerate(p):
        q[x] = i
    return tuple(q)


def perm_compose(p: Perm, q: Perm) -> Perm:
    """Composition p after q: (p*q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    cycles = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        cycles.append(tuple(cyc))
    return cycles


def _is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


# ---------------------------------------------------------------------------
# core types

@dataclass(frozen=True)
class Origami:
    """A square-tiled surface given by right- and up-neighbour permutations."""

    h: Perm
    v: Perm

    def __post_init__(self):
        h, v = tuple(self.h), tuple(self.v)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)
        if len(h) != len(v) or len(h) == 0:
            raise OrigamiError("h and v must be nonempty permutations of equal length")
        if not _is_permutation(h) or not _is_permutation(v):
            raise OrigamiError("h and v must be bijections on {0,...,N-1}")
        if not self._is_connected():
            raise OrigamiError("the group generated by h and v must act transitively")

    @property
    def n_squares(self) -> int:
        return len(self.h)

    def _is_connected(self) -> bool:
        n = len(self.h)
        seen = {0}
        stack = [0]
        hi, vi = perm_inverse(self.h), perm_inverse(self.v)
        while stack:
            i = stack.pop()
            for j in (self.h[i], self.v[i], hi[i], vi[i]):
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == n


@dataclass(frozen=True)
class StratumSignature:
    """Genus together with the multiset of cone-point orders."""

    genus: int
    cone_orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cone_orders", tuple(sorted(self.cone_orders)))
        if self.genus >= 1 and sum(self.cone_orders) != 2 * self.genus - 2:
            raise OrigamiError("cone orders must sum to 2g-2")


class Shear(enum.Enum):
    T_HORIZONTAL = "Th"
    T_VERTICAL = "Tv"


# ---------------------------------------------------------------------------
# canonical form

def _bfs_labeling(o: Origami, start: int) -> tuple[Perm, Perm] | None:
    """Relabel squares by breadth-first order from ``start`` (h-edge first)."""
    n = o.n_squares
    label = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        x = order[i]
        for y in (o.h[x], o.v[x]):
            if y not in label:
                label[y] = len(order)
                order.append(y)
        i += 1
    if len(order) < n:
        return None
    h2 = tuple(label[o.h[order[k]]] for k in range(n))
    v2 = tuple(label[o.v[order[k]]] for k in range(n))
    return h2, v2


def canonical_form(o: Origami) -> Origami:
    """Lexicographically minimal BFS relabeling over all starting squares.

    Two origamis differ by a simultaneous conjugation iff their canonical
    forms coincide.
    """
    best = None
    for s in range(o.n_squares):
        cand = _bfs_labeling(o, s)
        if cand is not None and (best is None or cand < best):
            best = cand
    assert best is not None
    return Origami(*best)


# ---------------------------------------------------------------------------
# stratum data

def vertex_permutation(o: Origami) -> Perm:
    """Permutation whose cycles are the vertices of the square complex.

    A cycle of length ell corresponds to a cone point of total angle
    2*pi*ell.
    """
    hi, vi = perm_inverse(o.h), perm_inverse(o.v)
    return perm_compose(o.h, perm_compose(o.v, perm_compose(hi, vi)))


def stratum_of(o: Origami) -> StratumSignature:
    """Stratum signature: genus from Euler characteristic, cone orders from
    the vertex permutation (V - E + F with F = N squares and E = 2N edges)."""
    cycles = perm_cycles(vertex_permutation(o))
    n = o.n_squares
    chi = len(cycles) - 2 * n + n
    genus = (2 - chi) // 2
    cone_orders = tuple(len(c) - 1 for c in cycles if len(c) > 1)
    return StratumSignature(genus=genus, cone_orders=cone_orders)


# ---------------------------------------------------------------------------
# shear action

def act_shear(o: Origami, gen: Shear) -> Origami:
    """Image of the origami under one integer shear, in canonical form."""
    if gen is Shear.T_HORIZONTAL:
        out = Origami(o.h, perm_compose(o.v, perm_inverse(o.h)))
    elif gen is Shear.T_VERTICAL:
        out = Origami(perm_compose(o.h, perm_inverse(o.v)), o.v)
    else:
        raise OrigamiError(f"unknown shear {gen!r}")
    return canonical_form(out)


def act_shear_inverse(o: Origami, gen: Shear) -> Origami:
    if gen is Shear.T_HORIZONTAL:
        out = Origami(o.h, perm_compose(o.v, o.h))
    else:
        out = Origami(perm_compose(o.h, o.v), o.v)
    return canonical_form(out)


def half_turn(o: Origami) -> Origami:
    """Image under the projective identification (h, v) -> (h^-1, v^-1)."""
    return canonical_form(Origami(perm_inverse(o.h), perm_inverse(o.v)))


# ---------------------------------------------------------------------------
# orbit enumeration

@dataclass
class OrbitGraph:
    """Closure of an origami under both shear generators.

    ``edge_h[i]`` / ``edge_v[i]`` give the successor of vertex ``i`` under
    T_horizontal / T_vertical.  Vertices are canonical forms in deterministic
    BFS order from the basepoint.

    The half-turn map partitions vertices into projective classes; the
    geometry of the quotient lives on those classes (``n_classes``,
    ``class_of`` and the induced class-level edge maps).
    """

    vertices: list[Origami]
    edge_h: np.ndarray
    edge_v: np.ndarray
    basepoint: int = 0
    iota: np.ndarray = field(default=None, repr=False)
    class_of: np.ndarray = field(default=None, repr=False)
    n_classes: int = 0
    class_edge_h: np.ndarray = field(default=None, repr=False)
    class_edge_v: np.ndarray = field(default=None, repr=False)

    @property
    def index(self) -> int:
        return len(self.vertices)

    @property
    def projective_index(self) -> int:
        return self.n_classes

    def stratum(self) -> StratumSignature:
        return stratum_of(self.vertices[self.basepoint])


def enumerate_orbit(o: Origami, cap: int = DEFAULT_ORBIT_CAP) -> OrbitGraph:
    """Breadth-first closure of ``o`` under both shears, on canonical forms."""
    base = canonical_form(o)
    verts = [base]
    index = {base: 0}
    eh: list[int] = []
    ev: list[int] = []
    i = 0
    while i < len(verts):
        x = verts[i]
        for gen, edges in ((Shear.T_HORIZONTAL, eh), (Shear.T_VERTICAL, ev)):
            y = act_shear(x, gen)
            j = index.get(y)
            if j is None:
                j = len(verts)
                if j >= cap:
                    raise OrbitCapExceeded(f"orbit exceeds cap of {cap} vertices")
                index[y] = j
                verts.append(y)
            edges.append(j)
        i += 1

    edge_h = np.asarray(eh, dtype=np.int64)
    edge_v = np.asarray(ev, dtype=np.int64)

    iota = np.asarray([index[half_turn(x)] for x in verts], dtype=np.int64)
    # projective classes: orbits of the (involutive) half-turn map
    class_of = np.full(len(verts), -1, dtype=np.int64)
    n_classes = 0
    for k in range(len(verts)):
        if class_of[k] < 0:
            class_of[k] = n_classes
            class_of[iota[k]] = n_classes
            n_classes += 1
    # edge maps descend to classes (shears commute with the half turn)
    class_edge_h = np.zeros(n_classes, dtype=np.int64)
    class_edge_v = np.zeros(n_classes, dtype=np.int64)
    for k in range(len(verts)):
        class_edge_h[class_of[k]] = class_of[edge_h[k]]
        class_edge_v[class_of[k]] = class_of[edge_v[k]]

    return OrbitGraph(
        vertices=verts,
        edge_h=edge_h,
        edge_v=edge_v,
        basepoint=0,
        iota=iota,
        class_of=class_of,
        n_classes=n_classes,
        class_edge_h=class_edge_h,
        class_edge_v=class_edge_v,
    )


# ---------------------------------------------------------------------------
# text formats

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _parse_perm_text(text: str, n: int | None) -> list[list[int]]:
    cycles = []
    rest = text.strip()
    if not _CYCLE_RE.fullmatch(rest.replace(")(", ")(")) and rest and not rest.startswith("("):
        raise OrigamiError(f"malformed cycle text {text!r}")
    for m in _CYCLE_RE.finditer(text):
        body = m.group(1).replace(",", " ").split()
        if not body:
            continue
        cyc = [int(t) for t in body]
        if any(x < 1 for x in cyc):
            raise OrigamiError("cycle entries are 1-based positive integers")
        cycles.append([x - 1 for x in cyc])
    return cycles


def parse_origami(line: str) -> Origami:
    """Parse ``h=<cycles> v=<cycles>`` (1-based; fixed points may be omitted)."""
    m = re.fullmatch(r"\s*h\s*=\s*(\S*)\s+v\s*=\s*(\S*)\s*", line)
    if not m:
        raise OrigamiError(f"expected 'h=<cycles> v=<cycles>', got {line!r}")
    hc = _parse_perm_text(m.group(1), None)
    vc = _parse_perm_text(m.group(2), None)
    top = max([x for c in hc + vc for x in c], default=0)
    n = top + 1
    perms = []
    for cycles in (hc, vc):
        p = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if a in seen:
                    raise OrigamiError("repeated square index in cycles")
                seen.add(a)
            for k, a in enumerate(cyc):
                p[a] = cyc[(k + 1) % len(cyc)]
        perms.append(tuple(p))
    return Origami(perms[0], perms[1])


def format_perm(p: Perm) -> str:
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in perm_cycles(p))


def format_origami(o: Origami) -> str:
    return f"h={format_perm(o.h)} v={format_perm(o.v)}"


def orbit_to_csv(graph: OrbitGraph) -> str:
    """Adjacency rows ``vertex_id,gen,successor_id``."""
    lines = ["vertex_id,gen,successor_id"]
    for i in range(graph.index):
        lines.append(f"{i},{Shear.T_HORIZONTAL.value},{graph.edge_h[i]}")
        lines.append(f"{i},{Shear.T_VERTICAL.value},{graph.edge_v[i]}")
    return "\n".join(lines) + "\n"


# canonical fixtures
TORUS = Origami((0,), (0,))
L3 = canonical_form(Origami((1, 0, 2), (2, 1, 0)))
