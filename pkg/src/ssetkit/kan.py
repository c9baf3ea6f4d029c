"""Horn enumeration, filler search, fibrancy and fibration certificates,
and the extra-degeneracy contractibility check.

Every verdict here is exhaustive over the stored tables and therefore only
means "up to the dimension cap"; the certificates say so explicitly. Horn
search uses backtracking over the face tuples but no heuristics: a positive
certificate enumerates every horn, a negative one carries a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParameterError, StructureError
from .homology import chain_complex, homology


@dataclass(frozen=True)
class Horn:
    """Faces x_i (i != k) of a would-be n-simplex, satisfying the horn identities
    d_i x_j = d_{j-1} x_i for i < j, both distinct from k."""

    n: int
    k: int
    faces: tuple  # length n+1, None at position k

    def given(self):
        return [(i, f) for i, f in enumerate(self.faces) if i != self.k]


def _horn_compatible(x, n, k, faces, j, candidate):
    """Check d_i candidate = d_{j-1} faces[i] for already-placed i < j, i != k."""
    for i in range(j):
        if i == k or faces[i] is None:
            continue
        if x.d(n - 1, i, candidate) != x.d(n - 1, j - 1, faces[i]):
            return False
    return True


def enumerate_horns(x, n, k):
    """All (n, k)-horns of x, by backtracking over face tuples.

    A horn is data in dimension n-1, so n may exceed the cap by one; only
    filling it would need dimension n."""
    if not 1 <= n <= x.dim_cap + 1:
        raise ParameterError("horn dimension out of range")
    if not 0 <= k <= n:
        raise ParameterError("horn index out of range")
    level = x.simplices[n - 1]
    out = []
    faces = [None] * (n + 1)

    def place(j):
        if j == n + 1:
            out.append(Horn(n, k, tuple(faces)))
            return
        if j == k:
            place(j + 1)
            return
        for cand in level:
            if n == 1 or _horn_compatible(x, n, k, faces, j, cand):
                faces[j] = cand
                place(j + 1)
                faces[j] = None

    place(0)
    return out


def fill_horn(x, horn):
    """Every n-simplex whose faces match the horn; emptiness certifies a failure.

    Matches are re-verified against the face tables rather than trusted.
    """
    n, k = horn.n, horn.k
    if n > x.dim_cap:
        raise ParameterError(
            "filling a %d-horn needs simplices above the cap %d" % (n, x.dim_cap)
        )
    found = []
    for y in x.simplices[n]:
        ok = True
        for i, f in horn.given():
            if x.d(n, i, y) != f:
                ok = False
                break
        if ok:
            found.append(y)
    for y in found:
        for i, f in horn.given():
            if x.d(n, i, y) != f:
                raise StructureError("filler verification failed")
    return found


@dataclass
class KanCertificate:
    """Horn-filling record up to the cap. fibrant is None when a dimension
    above the cap would be needed to decide."""

    dim_cap: int
    fibrant: bool
    counts: dict = field(default_factory=dict)   # (n, k) -> (horns, unique fillers)
    witness: object = None

    def all_unique(self, min_n=2):
        """Every horn in dimensions >= min_n has exactly one filler.

        Dimension-1 horns are excluded by default: a (1, k)-horn is a bare
        vertex and its fillers are all edges at that vertex.
        """
        return all(
            horns == unique
            for (n, _k), (horns, unique) in self.counts.items()
            if n >= min_n
        )


def is_fibrant(x):
    """Exhaustive horn check in dimensions 1..dim_cap."""
    counts = {}
    for n in range(1, x.dim_cap + 1):
        for k in range(n + 1):
            horns = enumerate_horns(x, n, k)
            unique = 0
            for h in horns:
                fillers = fill_horn(x, h)
                if not fillers:
                    return KanCertificate(x.dim_cap, False, counts, witness=h)
                if len(fillers) == 1:
                    unique += 1
            counts[(n, k)] = (len(horns), unique)
    return KanCertificate(x.dim_cap, True, counts)


@dataclass
class FibrationCertificate:
    dim_cap: int
    fibration: bool
    problems: int = 0
    witness: object = None  # (horn, base simplex) lifting problem with no lift


def is_fibration(p):
    """Right lifting property of a simplicial map against all horn inclusions,
    checked exhaustively up to the shared cap."""
    bad = p.validate()
    if bad:
        raise StructureError("map fails to commute with %d structure maps" % len(bad))
    x, y = p.source, p.target
    cap = p.dim_cap
    problems = 0
    for n in range(1, cap + 1):
        for k in range(n + 1):
            for h in enumerate_horns(x, n, k):
                down = [
                    b
                    for b in y.simplices[n]
                    if all(y.d(n, i, b) == p(n - 1, f) for i, f in h.given())
                ]
                for b in down:
                    problems += 1
                    lift = [
                        z
                        for z in fill_horn(x, h)
                        if p(n, z) == b
                    ]
                    if not lift:
                        return FibrationCertificate(cap, False, problems, witness=(h, b))
    return FibrationCertificate(cap, True, problems)


# -- extra degeneracy ------------------------------------------------------


class ExtraDegeneracy:
    """Maps s_{-1}: X_n -> X_{n+1} for n < dim_cap plus a base vertex.

    The identity set checked is d_0 s_{-1} = id, d_{i+1} s_{-1} = s_{-1} d_i,
    s_{i+1} s_{-1} = s_{-1} s_i, and s_{-1}(base) is the degenerate edge on
    the base vertex.
    """

    def __init__(self, x, maps, base):
        self.x = x
        self.maps = {n: dict(maps.get(n, {})) for n in range(x.dim_cap)}
        self.base = base

    def __call__(self, n, simplex):
        return self.maps[n][simplex]


def connected_components(x):
    """Vertex partition generated by the edges."""
    parent = {v: v for v in x.simplices[0]}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    if x.dim_cap >= 1:
        for e in x.simplices[1]:
            a, b = find(x.d(1, 0, e)), find(x.d(1, 1, e))
            if a != b:
                parent[a] = b
    groups = {}
    for v in x.simplices[0]:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


@dataclass
class ContractibilityReport:
    valid: bool
    witness: object
    connected: bool
    reduced_homology_trivial: bool
    betti: tuple


def check_extra_degeneracy(x, extra):
    """Verify the extra-degeneracy identities table-wise; on success cross-check
    that reduced homology vanishes below the cap."""
    if not x.has(0, extra.base):
        raise StructureError("base vertex %r not in the complex" % (extra.base,))
    components = connected_components(x)
    connected = len(components) == 1
    if not connected:
        raise ParameterError("extra-degeneracy check needs a connected complex")
    witness = None
    for n in range(x.dim_cap):
        table = extra.maps[n]
        for s in x.simplices[n]:
            if s not in table:
                raise StructureError("s_{-1} undefined on %r" % (s,))
            img = table[s]
            if not x.has(n + 1, img):
                raise StructureError("s_{-1} of %r is not a simplex" % (s,))
            if x.d(n + 1, 0, img) != s:
                witness = ("d_0 s_{-1} = id", n, s)
                break
            for i in range(n + 1):
                if n >= 1:
                    if x.d(n + 1, i + 1, img) != extra(n - 1, x.d(n, i, s)):
                        witness = ("d_{i+1} s_{-1} = s_{-1} d_i", n, s)
                        break
                if n + 1 < x.dim_cap:
                    if x.s(n + 1, i + 1, img) != extra(n + 1, x.s(n, i, s)):
                        witness = ("s_{i+1} s_{-1} = s_{-1} s_i", n, s)
                        break
            if witness:
                break
        if witness:
            break
    if witness is None and x.dim_cap >= 1:
        if extra(0, extra.base) != x.s(0, 0, extra.base):
            witness = ("s_{-1}(base) = s_0(base)", 0, extra.base)
    if witness is not None:
        return ContractibilityReport(False, witness, connected, False, ())
    summary = homology(chain_complex(x))
    reduced_trivial = summary.betti[0] == 1 and all(
        b == 0 for b in summary.betti[1 : x.dim_cap]
    ) and all(not summary.torsion.get(n, ()) for n in range(x.dim_cap))
    return ContractibilityReport(True, None, connected, reduced_trivial, summary.betti)


def cone_extra_degeneracy(x, apex_value=0):
    """Extra degeneracy for tuple-identified complexes coning onto a least vertex.

    Works for the standard simplex models where prepending the apex to a
    vertex tuple is again a simplex."""
    maps = {}
    for n in range(x.dim_cap):
        table = {}
        for s in x.simplices[n]:
            if not isinstance(s, tuple):
                raise ParameterError("cone construction needs tuple identifiers")
            table[s] = (apex_value,) + s
        maps[n] = table
    return ExtraDegeneracy(x, maps, (apex_value,))
