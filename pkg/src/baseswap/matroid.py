"""Element-indexed matroid backends with rank and basis queries.

Every matroid lives on a ground set of small nonnegative integers.  Concrete
backends: binary matrices over GF(2), multigraphs, lazy duals and minors, and
binary 1-/2-/3-sums.  Instances are immutable after construction and all
queries are read-only, so values can be shared freely between threads; rank
caches fill idempotently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class MatroidError(Exception):
    """Base class for matroid domain errors."""


class GroundSetError(MatroidError):
    """A query referenced elements outside the ground set."""


class CompositionError(MatroidError):
    """A 1-/2-/3-sum precondition is violated; the message names the clause."""


def _as_frozen(subset) -> frozenset:
    return subset if isinstance(subset, frozenset) else frozenset(subset)


class Matroid:
    """Abstract rank oracle over an integer ground set.

    Subclasses implement ``_rank``.  All derived queries (independence, basis
    tests, fundamental circuits, duals, minors) are provided here in terms of
    rank.
    """

    def __init__(self, ground: frozenset):
        self.ground = frozenset(ground)
        self._full_rank = None
        self._rank_cache: dict = {}

    # -- rank machinery ----------------------------------------------------

    def _rank(self, subset: frozenset) -> int:
        raise NotImplementedError

    def rank(self, subset) -> int:
        s = _as_frozen(subset)
        if not s <= self.ground:
            raise GroundSetError(f"elements {sorted(s - self.ground)} not in ground set")
        cached = self._rank_cache.get(s)
        if cached is None:
            cached = self._rank(s)
            self._rank_cache[s] = cached
        return cached

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self.rank(self.ground)
        return self._full_rank

    def is_independent(self, subset) -> bool:
        s = _as_frozen(subset)
        return self.rank(s) == len(s)

    def is_basis(self, subset) -> bool:
        s = _as_frozen(subset)
        return len(s) == self.full_rank and self.rank(s) == self.full_rank

    def is_circuit(self, subset) -> bool:
        s = _as_frozen(subset)
        if self.is_independent(s):
            return False
        return all(self.is_independent(s - {x}) for x in s)

    def spans(self, subset, e: int) -> bool:
        s = _as_frozen(subset)
        return self.rank(s | {e}) == self.rank(s)

    def is_coindependent(self, subset) -> bool:
        s = _as_frozen(subset)
        return self.rank(self.ground - s) == self.full_rank

    # -- circuits ----------------------------------------------------------

    def circuit_in(self, independent, e: int):
        """Circuit created by adding ``e`` to an independent set, else None.

        x belongs to the circuit exactly when independent + e - x is still
        independent.  Backends override this with cheaper searches.
        """
        s = _as_frozen(independent)
        se = s | {e}
        r = len(s)
        if self.rank(se) == r + 1:
            return None
        circuit = {e}
        for x in s:
            if self.rank(se - {x}) == r:
                circuit.add(x)
        return frozenset(circuit)

    def fundamental_circuit(self, basis, e: int) -> frozenset:
        """The unique circuit inside ``basis + e`` for a basis and e outside it."""
        b = _as_frozen(basis)
        if e in b:
            raise GroundSetError(f"element {e} already in the basis")
        if e not in self.ground:
            raise GroundSetError(f"element {e} not in ground set")
        if not self.is_basis(b):
            raise GroundSetError("fundamental_circuit requires a basis")
        circuit = self.circuit_in(b, e)
        if circuit is None:
            raise MatroidError("basis does not span the requested element")
        return circuit

    # -- views -------------------------------------------------------------

    def dual(self) -> "Matroid":
        return DualMatroid(self)

    def minor(self, contract=(), delete=()) -> "Matroid":
        c = _as_frozen(contract)
        d = _as_frozen(delete)
        if c & d:
            raise GroundSetError(f"contract/delete overlap: {sorted(c & d)}")
        if not c <= self.ground or not d <= self.ground:
            raise GroundSetError("minor sets must lie in the ground set")
        if not c and not d:
            return self
        return MinorMatroid(self, c, d)

    def contract(self, subset) -> "Matroid":
        return self.minor(contract=subset)

    def delete(self, subset) -> "Matroid":
        return self.minor(delete=subset)

    def restrict(self, subset) -> "Matroid":
        return self.minor(delete=self.ground - _as_frozen(subset))


class Gf2Matroid(Matroid):
    """Matroid of a 0/1 matrix over GF(2), one column per element.

    Columns are stored as integer bitmasks over the row index.  Rank queries
    run bitset Gaussian elimination; results are memoized since rank queries
    dominate every algorithm built on top.
    """

    def __init__(self, columns: dict):
        super().__init__(frozenset(columns))
        self.columns = dict(columns)

    @classmethod
    def from_rows(cls, rows, elements=None) -> "Gf2Matroid":
        """Build from a list of rows, each a sequence of 0/1 entries."""
        if not rows:
            return cls({})
        width = len(rows[0])
        if elements is None:
            elements = range(width)
        elements = list(elements)
        cols = {e: 0 for e in elements}
        for i, row in enumerate(rows):
            if len(row) != width:
                raise GroundSetError("ragged GF(2) matrix")
            for j, entry in enumerate(row):
                if int(entry) % 2:
                    cols[elements[j]] |= 1 << i
        return cls(cols)

    def _rank(self, subset: frozenset) -> int:
        pivots = []
        rank = 0
        for e in sorted(subset):
            vec = self.columns[e]
            for p in pivots:
                low = p & -p
                if vec & low:
                    vec ^= p
            if vec:
                pivots.append(vec)
                rank += 1
        return rank

    def circuit_in(self, independent, e: int):
        s = _as_frozen(independent)
        if e not in self.ground:
            raise GroundSetError(f"element {e} not in ground set")
        # Eliminate e's column against the set's columns, remembering which
        # ones were used; those form the circuit.
        reduced = []
        for x in sorted(s):
            vec, support = self.columns[x], {x}
            for rvec, rsupp in reduced:
                low = rvec & -rvec
                if vec & low:
                    vec ^= rvec
                    support = support ^ rsupp
            if vec:
                reduced.append((vec, support))
        target = self.columns[e]
        used = {e}
        for rvec, rsupp in reduced:
            low = rvec & -rvec
            if target & low:
                target ^= rvec
                used ^= rsupp
        if target:
            return None
        return frozenset(used)


class Multigraph:
    """Loopless-or-not multigraph given as an edge dict {id: (u, v)}.

    Vertices are arbitrary hashables.  Instances are treated as immutable;
    contraction and deletion return fresh graphs.
    """

    def __init__(self, edges: dict):
        self.edges = dict(edges)

    def vertices(self) -> set:
        verts = set()
        for u, v in self.edges.values():
            verts.add(u)
            verts.add(v)
        return verts

    def degree(self) -> dict:
        deg: dict = {}
        for u, v in self.edges.values():
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return deg

    def incident(self, vertex) -> frozenset:
        return frozenset(e for e, (u, v) in self.edges.items() if vertex in (u, v))

    def restrict(self, edge_ids) -> "Multigraph":
        keep = _as_frozen(edge_ids)
        return Multigraph({e: uv for e, uv in self.edges.items() if e in keep})

    def delete_edges(self, edge_ids) -> "Multigraph":
        drop = _as_frozen(edge_ids)
        return Multigraph({e: uv for e, uv in self.edges.items() if e not in drop})

    def contract_edge(self, edge_id) -> "Multigraph":
        u, v = self.edges[edge_id]
        new_edges = {}
        for e, (a, b) in self.edges.items():
            if e == edge_id:
                continue
            a2 = u if a == v else a
            b2 = u if b == v else b
            new_edges[e] = (a2, b2)
        return Multigraph(new_edges)

    def contract_edges(self, edge_ids) -> "Multigraph":
        # contracting a loop deletes it
        g = self
        for e in sorted(_as_frozen(edge_ids)):
            if e in g.edges and g.edges[e][0] != g.edges[e][1]:
                g = g.contract_edge(e)
            else:
                g = g.delete_edges({e})
        return g

    def forest_rank(self, edge_ids) -> int:
        """Rank of an edge subset: vertices touched minus components."""
        parent: dict = {}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        rank = 0
        for e in edge_ids:
            u, v = self.edges[e]
            if u not in parent:
                parent[u] = u
            if v not in parent:
                parent[v] = v
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank



class GraphicMatroid(Matroid):
    """Graphic matroid of a multigraph; elements are edge ids."""

    def __init__(self, graph: Multigraph):
        super().__init__(frozenset(graph.edges))
        self.graph = graph

    def _rank(self, subset: frozenset) -> int:
        return self.graph.forest_rank(subset)

    def circuit_in(self, independent, e: int):
        if e not in self.ground:
            raise GroundSetError(f"element {e} not in ground set")
        u, v = self.graph.edges[e]
        if u == v:
            return frozenset({e})
        # walk the forest from u to v; the path plus e is the circuit
        adj: dict = {}
        for x in independent:
            a, c = self.graph.edges[x]
            adj.setdefault(a, []).append((c, x))
            adj.setdefault(c, []).append((a, x))
        prev = {u: (None, None)}
        stack = [u]
        while stack:
            node = stack.pop()
            if node == v:
                break
            for nxt, via in adj.get(node, ()):
                if nxt not in prev:
                    prev[nxt] = (node, via)
                    stack.append(nxt)
        if v not in prev:
            return None
        circuit = {e}
        node = v
        while prev[node][0] is not None:
            node, via = prev[node]
            circuit.add(via)
        return frozenset(circuit)

    def graph_minor(self, contract=(), delete=()) -> "GraphicMatroid":
        """Explicitly re-represented graphic minor (not a lazy view)."""
        c = _as_frozen(contract)
        d = _as_frozen(delete)
        if c & d:
            raise GroundSetError("contract/delete overlap")
        return GraphicMatroid(self.graph.delete_edges(d).contract_edges(c))


class DualMatroid(Matroid):
    """Lazy dual view: r*(Z) = |Z| - r(E) + r(E - Z)."""

    def __init__(self, base: Matroid):
        super().__init__(base.ground)
        self.base = base

    def _rank(self, subset: frozenset) -> int:
        b = self.base
        return len(subset) - b.full_rank + b.rank(b.ground - subset)

    def dual(self) -> Matroid:
        return self.base


class MinorMatroid(Matroid):
    """Lazy minor view: r(Z) = r_base(Z + contracted) - r_base(contracted)."""

    def __init__(self, base: Matroid, contracted: frozenset, deleted: frozenset):
        super().__init__(base.ground - contracted - deleted)
        self.base = base
        self.contracted = contracted
        self.deleted = deleted
        self._contract_rank = base.rank(contracted)

    def _rank(self, subset: frozenset) -> int:
        return self.base.rank(subset | self.contracted) - self._contract_rank

    def minor(self, contract=(), delete=()) -> Matroid:
        c = _as_frozen(contract)
        d = _as_frozen(delete)
        if c & d:
            raise GroundSetError(f"contract/delete overlap: {sorted(c & d)}")
        if not c <= self.ground or not d <= self.ground:
            raise GroundSetError("minor sets must lie in the ground set")
        if not c and not d:
            return self
        return MinorMatroid(self.base, self.contracted | c, self.deleted | d)


@dataclass(frozen=True)
class SumSpec:
    """Arity and shared set of a binary matroid sum.

    arity 1: shared empty.  arity 2: one shared element, neither a loop nor
    a coloop on either side.  arity 3: shared set is a coindependent triangle
    of both parts.
    """

    arity: int
    shared: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        sizes = {1: 0, 2: 1, 3: 3}
        if self.arity not in sizes:
            raise CompositionError(f"unsupported sum arity {self.arity}")
        if len(self.shared) != sizes[self.arity]:
            raise CompositionError(
                f"{self.arity}-sum needs {sizes[self.arity]} shared elements, "
                f"got {len(self.shared)}"
            )


def validate_sum(m1: Matroid, m2: Matroid, spec: SumSpec) -> None:
    """Check the sum preconditions, raising CompositionError naming the clause."""
    t = spec.shared
    if m1.ground & m2.ground != t:
        raise CompositionError("shared set must equal the intersection of the ground sets")
    e_new = (m1.ground | m2.ground) - t
    if len(m1.ground) >= len(e_new) or len(m2.ground) >= len(e_new):
        raise CompositionError("each part must be smaller than the composed ground set")
    if spec.arity == 2:
        (elt,) = t
        for name, m in (("first", m1), ("second", m2)):
            if m.rank({elt}) == 0:
                raise CompositionError(f"shared element is a loop of the {name} part")
            if not m.is_coindependent({elt}):
                raise CompositionError(f"shared element is a coloop of the {name} part")
    elif spec.arity == 3:
        for name, m in (("first", m1), ("second", m2)):
            if not m.is_circuit(t):
                raise CompositionError(f"shared set is not a triangle of the {name} part")
            if not m.is_coindependent(t):
                raise CompositionError(f"shared triangle is not coindependent in the {name} part")


class SumMatroid(Matroid):
    """Binary 1-/2-/3-sum of two matroids along a shared set T.

    Rank of a subset S is computed from cycle-space dimensions of the parts:
    cycles of the sum inside S are symmetric differences of part cycles that
    agree on T, so

        r(S) = |S| - (dim ker1 + dim ker2 + dim(V1 cap V2) - dim K)

    where ker_i counts part cycles avoiding T inside S_i, V_i is the space of
    T-projections of part cycles supported in S_i + T, and K is the space of
    cycles common to both parts inside T itself.  All dimensions come from
    rank queries on the parts.

    Basis membership is decided directly from the basis descriptions of
    binary sums (three branches for the 3-sum), not from the rank formula.
    """

    def __init__(self, m1: Matroid, m2: Matroid, spec: SumSpec, validated: bool = True):
        t = spec.shared
        ground = (m1.ground | m2.ground) - t
        super().__init__(ground)
        self.m1 = m1
        self.m2 = m2
        self.spec = spec
        self.side1 = m1.ground - t
        self.side2 = m2.ground - t
        self.valid_spec = validated
        # dim of the common cycle space inside T: {0, T} for triangles
        self._ker_dim = 1 if spec.arity == 3 else 0
        self._t_sorted = tuple(sorted(t))

    # -- rank --------------------------------------------------------------

    def _projection_space(self, m: Matroid, part_side: frozenset, s_part: frozenset):
        """Subsets of T arising as C ∩ T for a cycle C of ``m`` inside s_part + T."""
        t = self.spec.shared
        cycle_dim = {}
        for k in range(len(self._t_sorted) + 1):
            for tau in itertools.combinations(self._t_sorted, k):
                tau = frozenset(tau)
                cycle_dim[tau] = len(s_part) + len(tau) - m.rank(s_part | tau)
        members = set()
        for tau in cycle_dim:
            count = 0
            for k in range(len(tau) + 1):
                for sigma in itertools.combinations(sorted(tau), k):
                    sign = -1 if (len(tau) - k) % 2 else 1
                    count += sign * (1 << cycle_dim[frozenset(sigma)])
            if count > 0:
                members.add(tau)
        return members, cycle_dim[frozenset()]

    def _rank(self, subset: frozenset) -> int:
        s1 = subset & self.side1
        s2 = subset & self.side2
        v1, ker1 = self._projection_space(self.m1, self.side1, s1)
        v2, ker2 = self._projection_space(self.m2, self.side2, s2)
        common = v1 & v2
        vdim = len(common).bit_length() - 1  # |subspace| = 2**dim
        cycle_dim = ker1 + ker2 + vdim - self._ker_dim
        return len(subset) - cycle_dim

    # -- direct basis membership --------------------------------------------

    def is_basis(self, subset) -> bool:
        s = _as_frozen(subset)
        if not s <= self.ground:
            raise GroundSetError("is_basis: elements outside ground set")
        if not self.valid_spec:
            return super().is_basis(s)
        b1 = s & self.side1
        b2 = s & self.side2
        if self.spec.arity == 1:
            return self.m1.is_basis(b1) and self.m2.is_basis(b2)
        if self.spec.arity == 2:
            (t,) = self.spec.shared
            return (self.m1.is_basis(b1 | {t}) and self.m2.is_basis(b2)) or (
                self.m1.is_basis(b1) and self.m2.is_basis(b2 | {t})
            )
        t1, t2, t3 = self._t_sorted
        r1 = self.m1.full_rank
        r2 = self.m2.full_rank
        n1, n2 = len(b1), len(b2)
        if n1 + n2 != r1 + r2 - 2:
            return False
        if n1 == r1 - 2:
            return self.m1.is_basis(b1 | {t1, t2}) and self.m2.is_basis(b2)
        if n1 == r1:
            return self.m1.is_basis(b1) and self.m2.is_basis(b2 | {t1, t2})
        if n1 == r1 - 1:
            p1 = frozenset(t for t in self._t_sorted if self.m1.is_basis(b1 | {t}))
            if len(p1) != 2:
                return False
            p2 = frozenset(t for t in self._t_sorted if self.m2.is_basis(b2 | {t}))
            return len(p2) == 2 and p1 != p2
        return False


def compose_sum(m1: Matroid, m2: Matroid, spec: SumSpec) -> SumMatroid:
    """Compose two binary matroids along ``spec``, checking its preconditions."""
    validate_sum(m1, m2, spec)
    return SumMatroid(m1, m2, spec, validated=True)


def graphic_matroid(edges: dict) -> GraphicMatroid:
    return GraphicMatroid(Multigraph(edges))
