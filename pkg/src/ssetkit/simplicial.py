"""Finite simplicial sets with explicit face/degeneracy tables.

A simplicial set here is truncated at a dimension cap and stores every
simplex, degenerate ones included, so the simplicial identities and the
degeneracy bookkeeping are direct table lookups. Identifiers are arbitrary
hashable values, unique within each dimension; the standard constructions
use canonical tuple identifiers (vertex tuples for simplices of standard
objects, pairs for products).

Conventions for the identities, with d below s in the usual order:

    d_i d_j = d_{j-1} d_i            (i < j)
    d_i s_j = s_{j-1} d_i            (i < j)
    d_j s_j = id = d_{j+1} s_j
    d_i s_j = s_j d_{i-1}            (i > j + 1)
    s_i s_j = s_{j+1} s_i            (i <= j)
"""

from __future__ import annotations

import itertools

from .errors import CapExceededError, ParameterError, StructureError


class SimplicialSet:
    """Dimension-capped simplicial set with total face/degeneracy tables.

    simplices[n]   ordered tuple of identifiers, 0 <= n <= dim_cap
    face[(n, i)]   dict id -> id, for 1 <= n <= dim_cap, 0 <= i <= n
    deg[(n, i)]    dict id -> id, for 0 <= n < dim_cap, 0 <= i <= n
    degenerate[n]  frozenset of degenerate identifiers
    witness[(n, x)] = (i, y) with x = s_i(y), for each degenerate x
    """

    def __init__(self, dim_cap, simplices, face, deg, degenerate=None, witness=None):
        if dim_cap < 0:
            raise ParameterError("dim_cap must be >= 0")
        self.dim_cap = int(dim_cap)
        self.simplices = {n: tuple(simplices.get(n, ())) for n in range(dim_cap + 1)}
        self.face = {k: dict(v) for k, v in face.items()}
        self.deg = {k: dict(v) for k, v in deg.items()}
        if degenerate is None or witness is None:
            degenerate, witness = self._infer_degeneracies()
        self.degenerate = {n: frozenset(degenerate.get(n, ())) for n in range(dim_cap + 1)}
        self.witness = dict(witness)
        self._index = {
            n: {x: i for i, x in enumerate(self.simplices[n])}
            for n in range(dim_cap + 1)
        }
        for n, idx in self._index.items():
            if len(idx) != len(self.simplices[n]):
                raise StructureError("duplicate identifier in dimension %d" % n)

    def _infer_degeneracies(self):
        degenerate = {}
        witness = {}
        for (n, i), table in sorted(self.deg.items(), key=lambda kv: kv[0]):
            for y, x in table.items():
                degenerate.setdefault(n + 1, set()).add(x)
                witness.setdefault((n + 1, x), (i, y))
        return degenerate, witness

    # -- basic access -------------------------------------------------

    def dims(self):
        return range(self.dim_cap + 1)

    def has(self, n, x):
        return 0 <= n <= self.dim_cap and x in self._index.get(n, {})

    def d(self, n, i, x):
        return self.face[(n, i)][x]

    def s(self, n, i, x):
        return self.deg[(n, i)][x]

    def is_degenerate(self, n, x):
        return x in self.degenerate[n]

    def nondegenerate(self, n):
        if n > self.dim_cap:
            return ()
        return tuple(x for x in self.simplices[n] if x not in self.degenerate[n])

    def counts(self):
        return tuple(len(self.nondegenerate(n)) for n in self.dims())

    def vertices_of(self, n, x):
        """Images of the n+1 vertex inclusions, in order."""
        verts = []
        for j in range(n + 1):
            y, m = x, n
            # delete every position except j, from the top down
            for i in range(n, -1, -1):
                if i != j:
                    y = self.d(m, i, y)
                    m -= 1
            verts.append(y)
        return tuple(verts)

    # -- validation ---------------------------------------------------

    def validate(self):
        """Check tables and simplicial identities; return list of violations.

        Structural problems (dangling identifiers, missing table entries)
        raise StructureError; identity violations are reported, not raised.
        """
        self._check_tables()
        bad = []
        for n in range(2, self.dim_cap + 1):
            for x in self.simplices[n]:
                for j in range(n + 1):
                    for i in range(j):
                        lhs = self.d(n - 1, i, self.d(n, j, x))
                        rhs = self.d(n - 1, j - 1, self.d(n, i, x))
                        if lhs != rhs:
                            bad.append(("d_i d_j = d_{j-1} d_i", n, x, (i, j)))
        for n in range(self.dim_cap):
            for x in self.simplices[n]:
                for j in range(n + 1):
                    sx = self.s(n, j, x)
                    if self.d(n + 1, j, sx) != x:
                        bad.append(("d_j s_j = id", n, x, (j, j)))
                    if self.d(n + 1, j + 1, sx) != x:
                        bad.append(("d_{j+1} s_j = id", n, x, (j + 1, j)))
        for n in range(1, self.dim_cap):
            for x in self.simplices[n]:
                for j in range(n + 1):
                    sx = self.s(n, j, x)
                    for i in range(n + 2):
                        if i == j or i == j + 1:
                            continue
                        if i < j:
                            rhs = self.s(n - 1, j - 1, self.d(n, i, x))
                            name = "d_i s_j = s_{j-1} d_i (i<j)"
                        else:
                            rhs = self.s(n - 1, j, self.d(n, i - 1, x))
                            name = "d_i s_j = s_j d_{i-1} (i>j+1)"
                        if self.d(n + 1, i, sx) != rhs:
                            bad.append((name, n, x, (i, j)))
        for n in range(self.dim_cap - 1):
            for x in self.simplices[n]:
                for j in range(n + 1):
                    for i in range(j + 1):
                        lhs = self.s(n + 1, i, self.s(n, j, x))
                        rhs = self.s(n + 1, j + 1, self.s(n, i, x))
                        if lhs != rhs:
                            bad.append(("s_i s_j = s_{j+1} s_i (i<=j)", n, x, (i, j)))
        # degenerate flags match the degeneracy images exactly
        for n in range(1, self.dim_cap + 1):
            image = set()
            for i in range(n):
                image.update(self.deg[(n - 1, i)].values())
            if image != set(self.degenerate[n]):
                for x in image ^ set(self.degenerate[n]):
                    bad.append(("degenerate_flag mismatch", n, x, None))
        for (n, x), (i, y) in self.witness.items():
            if not self.has(n - 1, y) or self.s(n - 1, i, y) != x:
                bad.append(("degeneracy witness mismatch", n, x, (i, y)))
        return bad

    def _check_tables(self):
        for n in range(1, self.dim_cap + 1):
            for i in range(n + 1):
                table = self.face.get((n, i))
                if table is None:
                    raise StructureError("missing face table d_%d in dimension %d" % (i, n))
                for x in self.simplices[n]:
                    if x not in table:
                        raise StructureError("face d_%d undefined on %r" % (i, x))
                    if not self.has(n - 1, table[x]):
                        raise StructureError(
                            "face d_%d of %r hits unknown identifier %r" % (i, x, table[x])
                        )
        for n in range(self.dim_cap):
            for i in range(n + 1):
                table = self.deg.get((n, i))
                if table is None:
                    raise StructureError("missing degeneracy table s_%d in dimension %d" % (i, n))
                for x in self.simplices[n]:
                    if x not in table:
                        raise StructureError("degeneracy s_%d undefined on %r" % (i, x))
                    if not self.has(n + 1, table[x]):
                        raise StructureError(
                            "degeneracy s_%d of %r hits unknown identifier %r" % (i, x, table[x])
                        )


# -- canonical tuple machinery ----------------------------------------


def _delete(t, i):
    return t[:i] + t[i + 1:]


def _duplicate(t, i):
    return t[: i + 1] + t[i:]


def _tuple_witness(t):
    for i in range(len(t) - 1):
        if t[i] == t[i + 1]:
            return i, _delete(t, i + 1)
    return None


def _weakly_increasing(values, length):
    return itertools.combinations_with_replacement(values, length)


def _tuple_sset(dim_cap, allowed):
    """Simplicial set whose n-simplices are the weakly increasing tuples
    accepted by the predicate `allowed`, with delete/duplicate structure maps."""
    simplices = {}
    for n in range(dim_cap + 1):
        simplices[n] = tuple(sorted(t for t in _all_tuples(n, allowed)))
    face = {}
    deg = {}
    for n in range(1, dim_cap + 1):
        for i in range(n + 1):
            face[(n, i)] = {t: _delete(t, i) for t in simplices[n]}
    for n in range(dim_cap):
        for i in range(n + 1):
            deg[(n, i)] = {t: _duplicate(t, i) for t in simplices[n]}
    degenerate = {}
    witness = {}
    for n in range(1, dim_cap + 1):
        dg = set()
        for t in simplices[n]:
            w = _tuple_witness(t)
            if w is not None:
                dg.add(t)
                witness[(n, t)] = w
        degenerate[n] = dg
    return SimplicialSet(dim_cap, simplices, face, deg, degenerate, witness)


def _all_tuples(n, allowed):
    seen = set()
    for support in allowed:
        support = tuple(sorted(support))
        if len(support) > n + 1:
            continue
        for t in _surjective_tuples(support, n + 1):
            seen.add(t)
    return seen


def _surjective_tuples(support, length):
    """Weakly increasing tuples of the given length with image exactly `support`."""
    k = len(support)
    if k > length:
        return
    # choose which of the length-1 gaps step up (k-1 steps)
    for steps in itertools.combinations(range(length - 1), k - 1):
        out = []
        level = 0
        for pos in range(length):
            out.append(support[level])
            if pos in steps:
                level += 1
        yield tuple(out)


def standard_delta(n, dim_cap=None):
    """The standard n-simplex, truncated at dim_cap (default n)."""
    if n < 0:
        raise ParameterError("delta needs n >= 0")
    cap = n if dim_cap is None else dim_cap
    supports = [tuple(c) for k in range(n + 1) for c in itertools.combinations(range(n + 1), k + 1)]
    return _tuple_sset(cap, supports)


def standard_boundary(n, dim_cap=None):
    """The boundary of the standard n-simplex: every proper face."""
    if n < 1:
        raise ParameterError("boundary needs n >= 1")
    cap = (n - 1) if dim_cap is None else dim_cap
    supports = [
        tuple(c)
        for k in range(n)
        for c in itertools.combinations(range(n + 1), k + 1)
    ]
    return _tuple_sset(cap, supports)


def standard_horn(n, k, dim_cap=None):
    """The horn: all faces of the n-simplex except the k-th, and no interior."""
    if n < 1:
        raise ParameterError("horn needs n >= 1")
    if not 0 <= k <= n:
        raise ParameterError("horn index k=%d out of range for n=%d" % (k, n))
    cap = (n - 1) if dim_cap is None else dim_cap
    full = set(range(n + 1))
    supports = [
        tuple(c)
        for size in range(1, n + 1)
        for c in itertools.combinations(range(n + 1), size)
        if full - set(c) != {k} and set(c) != full
    ]
    return _tuple_sset(cap, supports)


def simplicial_complex(facets, dim_cap):
    """Simplicial set of an ordered simplicial complex given by its facets.

    Facets are iterables of comparable vertex labels; every subset is added.
    """
    supports = set()
    for f in facets:
        f = tuple(sorted(set(f)))
        if not f:
            raise ParameterError("empty facet")
        for k in range(1, len(f) + 1):
            supports.update(itertools.combinations(f, k))
    return _tuple_sset(dim_cap, sorted(supports))


def nerve(table, dim_cap):
    """Nerve of a finite group given by its multiplication table.

    n-simplices are n-tuples of group elements; d_0 and d_n drop an end,
    inner faces multiply adjacent entries, degeneracies insert the identity.
    """
    elements, identity = _check_group(table)
    simplices = {n: tuple(sorted(itertools.product(elements, repeat=n))) for n in range(dim_cap + 1)}
    face = {}
    deg = {}
    for n in range(1, dim_cap + 1):
        for i in range(n + 1):
            t = {}
            for g in simplices[n]:
                if i == 0:
                    t[g] = g[1:]
                elif i == n:
                    t[g] = g[:-1]
                else:
                    t[g] = g[: i - 1] + (table[(g[i - 1], g[i])],) + g[i + 1:]
            face[(n, i)] = t
    for n in range(dim_cap):
        for i in range(n + 1):
            deg[(n, i)] = {g: g[:i] + (identity,) + g[i:] for g in simplices[n]}
    degenerate = {}
    witness = {}
    for n in range(1, dim_cap + 1):
        dg = set()
        for g in simplices[n]:
            for i, gi in enumerate(g):
                if gi == identity:
                    dg.add(g)
                    witness[(n, g)] = (i, _delete(g, i))
                    break
        degenerate[n] = dg
    return SimplicialSet(dim_cap, simplices, face, deg, degenerate, witness)


def cyclic_table(m):
    """Multiplication table of the cyclic group of order m on labels 0..m-1."""
    if m < 1:
        raise ParameterError("cyclic group needs m >= 1")
    return {(a, b): (a + b) % m for a in range(m) for b in range(m)}


def _check_group(table):
    elements = sorted({k[0] for k in table} | {k[1] for k in table})
    for a, b in itertools.product(elements, repeat=2):
        if (a, b) not in table:
            raise ParameterError("incomplete multiplication table at %r" % ((a, b),))
        if table[(a, b)] not in elements:
            raise ParameterError("table not closed at %r" % ((a, b),))
    identity = None
    for e in elements:
        if all(table[(e, a)] == a and table[(a, e)] == a for a in elements):
            identity = e
            break
    if identity is None:
        raise ParameterError("no identity element")
    for a, b, c in itertools.product(elements, repeat=3):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            raise ParameterError("associativity fails at %r" % ((a, b, c),))
    for a in elements:
        if not any(table[(a, b)] == identity for b in elements):
            raise ParameterError("no inverse for %r" % (a,))
    return elements, identity


# -- products ----------------------------------------------------------


def product(x, y, dim_cap=None):
    """Levelwise product with componentwise structure maps.

    The cap defaults to min of the factor caps; asking for more is refused
    rather than silently truncated.
    """
    limit = min(x.dim_cap, y.dim_cap)
    cap = limit if dim_cap is None else dim_cap
    if cap > limit:
        raise CapExceededError(
            "product cap %d exceeds factor caps (%d, %d)" % (cap, x.dim_cap, y.dim_cap)
        )
    simplices = {
        n: tuple(itertools.product(x.simplices[n], y.simplices[n]))
        for n in range(cap + 1)
    }
    face = {}
    deg = {}
    for n in range(1, cap + 1):
        for i in range(n + 1):
            face[(n, i)] = {
                (a, b): (x.d(n, i, a), y.d(n, i, b)) for (a, b) in simplices[n]
            }
    for n in range(cap):
        for i in range(n + 1):
            deg[(n, i)] = {
                (a, b): (x.s(n, i, a), y.s(n, i, b)) for (a, b) in simplices[n]
            }
    return SimplicialSet(cap, simplices, face, deg)


# -- subcomplexes and quotients ----------------------------------------


def close_subcomplex(x, seeds):
    """Smallest sub-simplicial-set of x containing the seed simplices."""
    sets = {n: set(seeds.get(n, ())) for n in x.dims()}
    for n in x.dims():
        for s in sets[n]:
            if not x.has(n, s):
                raise StructureError("seed %r is not a simplex of dimension %d" % (s, n))
    changed = True
    while changed:
        changed = False
        for n in range(x.dim_cap, 0, -1):
            for s in list(sets[n]):
                for i in range(n + 1):
                    f = x.d(n, i, s)
                    if f not in sets[n - 1]:
                        sets[n - 1].add(f)
                        changed = True
        for n in range(x.dim_cap):
            for s in list(sets[n]):
                for i in range(n + 1):
                    t = x.s(n, i, s)
                    if t not in sets[n + 1]:
                        sets[n + 1].add(t)
                        changed = True
    return {n: frozenset(v) for n, v in sets.items()}


def is_subcomplex(x, sub):
    """Closure check; returns None when closed, else an offending (kind, n, simplex)."""
    for n in x.dims():
        for s in sub.get(n, ()):
            if not x.has(n, s):
                return ("unknown", n, s)
    for n in range(1, x.dim_cap + 1):
        for s in sub.get(n, ()):
            for i in range(n + 1):
                if x.d(n, i, s) not in sub.get(n - 1, ()):
                    return ("face", n, s)
    for n in range(x.dim_cap):
        for s in sub.get(n, ()):
            for i in range(n + 1):
                if x.s(n, i, s) not in sub.get(n + 1, ()):
                    return ("degeneracy", n, s)
    return None


def sub_union(a, b):
    keys = set(a) | set(b)
    return {n: frozenset(a.get(n, frozenset()) | b.get(n, frozenset())) for n in keys}


def sub_intersection(a, b):
    keys = set(a) | set(b)
    return {n: frozenset(a.get(n, frozenset()) & b.get(n, frozenset())) for n in keys}


def full_subcomplex(x):
    return {n: frozenset(x.simplices[n]) for n in x.dims()}


def restrict(x, sub):
    """The sub-simplicial-set on a closed family of simplices, as its own object."""
    offending = is_subcomplex(x, sub)
    if offending is not None:
        raise StructureError("not closed under structure maps: %r" % (offending,))
    simplices = {n: tuple(s for s in x.simplices[n] if s in sub.get(n, ())) for n in x.dims()}
    face = {
        (n, i): {s: x.d(n, i, s) for s in simplices[n]}
        for n in range(1, x.dim_cap + 1)
        for i in range(n + 1)
    }
    deg = {
        (n, i): {s: x.s(n, i, s) for s in simplices[n]}
        for n in range(x.dim_cap)
        for i in range(n + 1)
    }
    degenerate = {n: frozenset(set(simplices[n]) & x.degenerate[n]) for n in x.dims()}
    witness = {
        (n, s): x.witness[(n, s)]
        for n in x.dims()
        for s in degenerate[n]
        if (n, s) in x.witness
    }
    return SimplicialSet(x.dim_cap, simplices, face, deg, degenerate, witness)


def quotient(x, sub):
    """Collapse a closed subcomplex to the degeneracy tower of one base point."""
    offending = is_subcomplex(x, sub)
    if offending is not None:
        raise StructureError("quotient needs a closed subcomplex: %r" % (offending,))
    if not sub.get(0):
        raise ParameterError("subcomplex to collapse has no vertices")
    base = "*"
    while any(base in x.simplices[n] for n in x.dims()):
        base = base + "'"

    def wrap(n, s):
        return base if s in sub.get(n, ()) else s

    simplices = {}
    for n in x.dims():
        kept = [s for s in x.simplices[n] if s not in sub.get(n, ())]
        simplices[n] = tuple(kept) + (base,)
    face = {}
    deg = {}
    for n in range(1, x.dim_cap + 1):
        for i in range(n + 1):
            t = {}
            for s in x.simplices[n]:
                if s in sub.get(n, ()):
                    continue
                t[s] = wrap(n - 1, x.d(n, i, s))
            t[base] = base
            face[(n, i)] = t
    for n in range(x.dim_cap):
        for i in range(n + 1):
            t = {}
            for s in x.simplices[n]:
                if s in sub.get(n, ()):
                    continue
                t[s] = wrap(n + 1, x.s(n, i, s))
            t[base] = base
            deg[(n, i)] = t
    degenerate = {0: frozenset(s for s in x.degenerate[0] if s not in sub.get(0, ()))}
    witness = {}
    for n in range(1, x.dim_cap + 1):
        dg = {s for s in x.degenerate[n] if s not in sub.get(n, ())}
        dg.add(base)
        degenerate[n] = frozenset(dg)
        witness[(n, base)] = (0, base)
        for s in dg - {base}:
            i, y = x.witness[(n, s)]
            witness[(n, s)] = (i, wrap(n - 1, y))
    for s in degenerate[0]:
        if (0, s) in x.witness:
            witness[(0, s)] = x.witness[(0, s)]
    return SimplicialSet(x.dim_cap, simplices, face, deg, degenerate, witness)


def sphere_quotient(n, dim_cap=None):
    """The n-sphere model with one nondegenerate simplex in dimensions 0 and n."""
    cap = n if dim_cap is None else dim_cap
    delta = standard_delta(n, cap)
    bdy = {
        m: frozenset(t for t in delta.simplices[m] if set(t) != set(range(n + 1)))
        for m in delta.dims()
    }
    return quotient(delta, bdy)


def truncate(x, dim_cap):
    """The same simplicial set with the cap lowered; raising it is refused."""
    if dim_cap > x.dim_cap:
        raise CapExceededError(
            "cannot raise the cap from %d to %d" % (x.dim_cap, dim_cap)
        )
    simplices = {n: x.simplices[n] for n in range(dim_cap + 1)}
    face = {(n, i): x.face[(n, i)] for n in range(1, dim_cap + 1) for i in range(n + 1)}
    deg = {(n, i): x.deg[(n, i)] for n in range(dim_cap) for i in range(n + 1)}
    degenerate = {n: x.degenerate[n] for n in range(dim_cap + 1)}
    witness = {(n, s): w for (n, s), w in x.witness.items() if n <= dim_cap}
    return SimplicialSet(dim_cap, simplices, face, deg, degenerate, witness)


def standard(kind, dim_cap=None, **params):
    """Dispatcher for the named standard constructions."""
    if kind == "delta":
        return standard_delta(params["n"], dim_cap)
    if kind == "boundary":
        return standard_boundary(params["n"], dim_cap)
    if kind == "horn":
        return standard_horn(params["n"], params["k"], dim_cap)
    if kind == "sphere_quotient":
        return sphere_quotient(params["n"], dim_cap)
    if kind == "nerve":
        if "order" in params:
            table = cyclic_table(params["order"])
        else:
            table = params["table"]
        if dim_cap is None:
            raise ParameterError("nerve needs an explicit dim_cap")
        return nerve(table, dim_cap)
    raise ParameterError("unknown standard construction %r" % (kind,))


# -- generators --------------------------------------------------------


def _identity_surjection(n):
    return tuple(range(n + 1))


def _surjections_onto(m, n):
    """All weakly increasing surjections [n] -> [m] as value tuples."""
    for steps in itertools.combinations(range(n), m):
        out = []
        level = 0
        for pos in range(n + 1):
            out.append(level)
            if pos in steps:
                level += 1
        yield tuple(out)


def _pair_id(eta, gid, gdim):
    return gid if eta == _identity_surjection(gdim + len(eta) - gdim - 1) else ("s", eta, gid)


def from_generators(dim_cap, generators):
    """Simplicial set presented by nondegenerate simplices and their faces.

    generators[n] is a list of (id, faces) pairs where faces[i] is either a
    plain id of a nondegenerate (n-1)-simplex or a pair (eta, id) giving a
    degenerate face: eta is a weakly increasing surjective value tuple.
    Every simplex up to the cap is materialized as (eta, generator).
    """
    gens = {n: list(generators.get(n, [])) for n in range(dim_cap + 1)}
    gen_dims = {}
    gen_faces = {}
    for n, pairs in gens.items():
        for gid, faces in pairs:
            if gid in gen_dims:
                raise StructureError("duplicate generator id %r" % (gid,))
            gen_dims[gid] = n
            norm = []
            for f in faces:
                if isinstance(f, tuple) and len(f) == 2 and isinstance(f[0], tuple):
                    norm.append(f)
                else:
                    norm.append((_identity_surjection(n - 1), f))
            if n > 0 and len(norm) != n + 1:
                raise StructureError("generator %r needs %d faces" % (gid, n + 1))
            gen_faces[gid] = tuple(norm)
    for gid, faces in gen_faces.items():
        for eta, g2 in faces:
            if g2 not in gen_dims:
                raise StructureError("face of %r references unknown generator %r" % (gid, g2))
            if gen_dims[g2] != len(set(eta)) - 1 or gen_dims[gid] - 1 != len(eta) - 1:
                raise StructureError("face arity mismatch on generator %r" % (gid,))

    def face_of_pair(eta, gid, i):
        dropped = _delete(eta, i)
        image = set(eta)
        if set(dropped) == image:
            return dropped, gid
        v = eta[i]
        shifted = tuple(x if x < v else x - 1 for x in dropped)
        theta, g2 = gen_faces[gid][v]
        return tuple(theta[x] for x in shifted), g2

    simplices = {}
    pairs_by_dim = {}
    for n in range(dim_cap + 1):
        pairs = []
        for m in range(n + 1):
            for gid, _ in gens[m]:
                for eta in _surjections_onto(m, n):
                    pairs.append((eta, gid))
        pairs_by_dim[n] = pairs
        simplices[n] = tuple(_pair_id(eta, gid, gen_dims[gid]) for eta, gid in pairs)

    face = {}
    deg = {}
    for n in range(1, dim_cap + 1):
        for i in range(n + 1):
            t = {}
            for eta, gid in pairs_by_dim[n]:
                feta, fgid = face_of_pair(eta, gid, i)
                t[_pair_id(eta, gid, gen_dims[gid])] = _pair_id(feta, fgid, gen_dims[fgid])
            face[(n, i)] = t
    for n in range(dim_cap):
        for i in range(n + 1):
            t = {}
            for eta, gid in pairs_by_dim[n]:
                t[_pair_id(eta, gid, gen_dims[gid])] = _pair_id(_duplicate(eta, i), gid, gen_dims[gid])
            deg[(n, i)] = t
    degenerate = {}
    witness = {}
    for n in range(1, dim_cap + 1):
        dg = set()
        for eta, gid in pairs_by_dim[n]:
            w = _tuple_witness(eta)
            if w is not None:
                i, smaller = w
                xid = _pair_id(eta, gid, gen_dims[gid])
                dg.add(xid)
                witness[(n, xid)] = (i, _pair_id(smaller, gid, gen_dims[gid]))
        degenerate[n] = dg
    return SimplicialSet(dim_cap, simplices, face, deg, degenerate, witness)


def circle_two_edges(dim_cap=2):
    """Circle built from two vertices and two nondegenerate edges."""
    return from_generators(
        dim_cap,
        {
            0: [("p", ()), ("q", ())],
            1: [("a", ("q", "p")), ("b", ("p", "q"))],
        },
    )


# -- simplicial maps ----------------------------------------------------


class SimplicialMap:
    """Levelwise map of simplicial sets; must commute with all structure maps."""

    def __init__(self, source, target, level_map):
        self.source = source
        self.target = target
        cap = min(source.dim_cap, target.dim_cap)
        self.dim_cap = cap
        self.level_map = {n: dict(level_map.get(n, {})) for n in range(cap + 1)}

    def __call__(self, n, x):
        return self.level_map[n][x]

    def validate(self):
        bad = []
        for n in range(self.dim_cap + 1):
            for x in self.source.simplices[n]:
                if x not in self.level_map[n]:
                    raise StructureError("map undefined on %r in dimension %d" % (x, n))
                if not self.target.has(n, self.level_map[n][x]):
                    raise StructureError("map sends %r to unknown identifier" % (x,))
        for n in range(1, self.dim_cap + 1):
            for x in self.source.simplices[n]:
                for i in range(n + 1):
                    if self(n - 1, self.source.d(n, i, x)) != self.target.d(n, i, self(n, x)):
                        bad.append(("face", n, i, x))
        for n in range(self.dim_cap):
            for x in self.source.simplices[n]:
                for i in range(n + 1):
                    if self(n + 1, self.source.s(n, i, x)) != self.target.s(n, i, self(n, x)):
                        bad.append(("degeneracy", n, i, x))
        return bad

    def is_isomorphism(self):
        if self.source.dim_cap != self.target.dim_cap or self.validate():
            return False
        for n in range(self.dim_cap + 1):
            values = set(self.level_map[n].values())
            if len(values) != len(self.source.simplices[n]):
                return False
            if values != set(self.target.simplices[n]):
                return False
        return True

    @classmethod
    def identity(cls, x):
        return cls(x, x, {n: {s: s for s in x.simplices[n]} for n in x.dims()})

    def compose(self, other):
        """self after other."""
        if other.target is not self.source:
            raise ParameterError("maps not composable")
        cap = min(self.dim_cap, other.dim_cap)
        lm = {
            n: {x: self(n, other(n, x)) for x in other.source.simplices[n]}
            for n in range(cap + 1)
        }
        return SimplicialMap(other.source, self.target, lm)
