"""Line-oriented text formats for every object the command line handles.

All formats are versioned with a header word, human-writable, and parse
back into the structures they came from; serializing a parsed file
reproduces it byte for byte. Identifiers are flattened to strings on
serialization (tuples render as "(a,b)"), so parsed objects use string
identifiers throughout.
"""

from __future__ import annotations

from fractions import Fraction

from .connections import EdgeGluing, U1BundleData, LieValuedForm, abelian_line, gl, sl2
from .errors import ParameterError, StructureError
from .forms import PolyForm, QTau
from .sheaves import FiniteSite, Presheaf
from .simplicial import SimplicialSet


def render_id(value):
    if isinstance(value, tuple):
        return "(" + ",".join(render_id(v) for v in value) + ")"
    text = str(value)
    if not text or any(ch in text for ch in " |;:\t\n"):
        raise ParameterError("identifier %r cannot be serialized" % (value,))
    return text


# -- simplicial sets --------------------------------------------------------


def serialize_complex(x):
    lines = ["sset 1", "cap %d" % x.dim_cap]
    for n in x.dims():
        lines.append("dim %d" % n)
        for s in x.simplices[n]:
            fields = [render_id(s)]
            if n >= 1:
                fields.append("faces " + " ".join(render_id(x.d(n, i, s)) for i in range(n + 1)))
            if n < x.dim_cap:
                fields.append("deg " + " ".join(render_id(x.s(n, i, s)) for i in range(n + 1)))
            if x.is_degenerate(n, s):
                j, base = x.witness[(n, s)]
                fields.append("degen %d %s" % (j, render_id(base)))
            lines.append(" | ".join(fields))
    return "\n".join(lines) + "\n"


def parse_complex(text):
    lines = [ln.rstrip("\n") for ln in text.splitlines()]
    pos = 0

    def fail(msg, ln):
        raise StructureError("line %d: %s" % (ln + 1, msg))

    if pos >= len(lines) or lines[pos].strip() != "sset 1":
        fail("expected header 'sset 1'", pos)
    pos += 1
    if not lines[pos].startswith("cap "):
        fail("expected 'cap N'", pos)
    cap = int(lines[pos].split()[1])
    pos += 1
    simplices = {n: [] for n in range(cap + 1)}
    faces = {}
    degs = {}
    degenerate = {n: set() for n in range(cap + 1)}
    witness = {}
    current = None
    for ln in range(pos, len(lines)):
        line = lines[ln].strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("dim "):
            current = int(line.split()[1])
            if current > cap:
                fail("dimension above the cap", ln)
            continue
        if current is None:
            fail("simplex row before any 'dim' header", ln)
        fields = [f.strip() for f in line.split("|")]
        sid = fields[0]
        if not sid:
            fail("empty identifier", ln)
        simplices[current].append(sid)
        for field in fields[1:]:
            if not field:
                continue
            words = field.split()
            if words[0] == "faces":
                if len(words) != current + 2:
                    fail("need %d faces" % (current + 1), ln)
                faces[(current, sid)] = tuple(words[1:])
            elif words[0] == "deg":
                if len(words) != current + 2:
                    fail("need %d degeneracies" % (current + 1), ln)
                degs[(current, sid)] = tuple(words[1:])
            elif words[0] == "degen":
                degenerate[current].add(sid)
                witness[(current, sid)] = (int(words[1]), words[2])
            else:
                fail("unknown field %r" % (words[0],), ln)
    face_tables = {}
    deg_tables = {}
    known = {n: set(simplices[n]) for n in range(cap + 1)}
    for n in range(1, cap + 1):
        for i in range(n + 1):
            table = {}
            for s in simplices[n]:
                if (n, s) not in faces:
                    raise StructureError("simplex %s of dimension %d has no faces field" % (s, n))
                target = faces[(n, s)][i]
                if target not in known[n - 1]:
                    raise StructureError(
                        "face %d of %s references unknown identifier %s" % (i, s, target)
                    )
                table[s] = target
            face_tables[(n, i)] = table
    for n in range(cap):
        for i in range(n + 1):
            table = {}
            for s in simplices[n]:
                if (n, s) not in degs:
                    raise StructureError("simplex %s of dimension %d has no deg field" % (s, n))
                target = degs[(n, s)][i]
                if target not in known[n + 1]:
                    raise StructureError(
                        "degeneracy %d of %s references unknown identifier %s" % (i, s, target)
                    )
                table[s] = target
            deg_tables[(n, i)] = table
    return SimplicialSet(cap, simplices, face_tables, deg_tables, degenerate, witness)


def relabel_as_strings(x):
    """The same simplicial set with every identifier replaced by its rendering."""
    return parse_complex(serialize_complex(x))


# -- covers ------------------------------------------------------------------


def serialize_cover(sub_a, sub_b):
    lines = ["cover 1"]
    for label, sub in (("A", sub_a), ("B", sub_b)):
        for n in sorted(sub):
            members = sorted(render_id(s) for s in sub[n])
            if members:
                lines.append("%s %d : %s" % (label, n, " ".join(members)))
    return "\n".join(lines) + "\n"


def parse_cover(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != "cover 1":
        raise StructureError("expected header 'cover 1'")
    subs = {"A": {}, "B": {}}
    for ln, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            head, members = line.split(":")
            label, dim = head.split()
            subs[label].setdefault(int(dim), set()).update(members.split())
        except (ValueError, KeyError):
            raise StructureError("line %d: malformed cover row" % ln)
    return (
        {n: frozenset(v) for n, v in subs["A"].items()},
        {n: frozenset(v) for n, v in subs["B"].items()},
    )


# -- matrices ----------------------------------------------------------------


def serialize_matrix(matrix):
    lines = ["matrix %d %d" % (matrix.nrows, matrix.ncols)]
    for i, row in enumerate(matrix.rows):
        for j, v in enumerate(row):
            if v != 0:
                lines.append("%d %d %s" % (i, j, v))
    return "\n".join(lines) + "\n"


def parse_matrix_triples(text):
    """Sparse triplet text as (nrows, ncols, {(i, j): Fraction})."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    head = lines[0].split()
    if head[0] != "matrix":
        raise StructureError("expected 'matrix R C' header")
    nrows, ncols = int(head[1]), int(head[2])
    entries = {}
    for ln in lines[1:]:
        i, j, v = ln.split()
        entries[(int(i), int(j))] = Fraction(v)
    return nrows, ncols, entries


# -- scalars and polynomial forms ---------------------------------------------


def render_scalar(value):
    if isinstance(value, QTau):
        return "%s+%s*tau" % (value.q, value.m)
    return str(Fraction(value))


def parse_scalar(text):
    text = text.strip()
    if "tau" in text:
        qpart, mpart = text.split("+")
        if not mpart.endswith("*tau"):
            raise StructureError("malformed tau scalar %r" % text)
        return QTau(Fraction(qpart), Fraction(mpart[:-4]))
    return Fraction(text)


def render_form(form):
    """PolyForm as 'form n p : coeff | exps | idx ; ...' (canonical terms)."""
    chunks = []
    for (exps, idx), coeff in sorted(form.terms.items(), key=lambda kv: kv[0]):
        chunks.append(
            "%s | %s | %s"
            % (
                render_scalar(coeff),
                " ".join(str(e) for e in exps),
                " ".join(str(i) for i in idx),
            )
        )
    return "form %d %d : %s" % (form.n, form.p, " ; ".join(chunks))


def parse_form(text):
    text = text.strip()
    if not text.startswith("form "):
        raise StructureError("expected 'form n p : ...'")
    head, _, body = text.partition(":")
    words = head.split()
    n, p = int(words[1]), int(words[2])
    terms = []
    body = body.strip()
    if body:
        for chunk in body.split(";"):
            coeff_s, exps_s, idx_s = [part.strip() for part in chunk.split("|")]
            coeff = parse_scalar(coeff_s)
            exps = tuple(int(w) for w in exps_s.split()) if exps_s else ()
            idx = tuple(int(w) for w in idx_s.split()) if idx_s else ()
            terms.append(((exps, idx), coeff))
    return PolyForm(n, p, terms)


# -- affine chains ---------------------------------------------------------------


def serialize_chain(chain):
    """AffineChain as one line per term: coefficient, then vertex tuples."""
    from .subdivision import AffineChain

    lines = ["chain 1"]
    terms = sorted(chain.terms.items(), key=lambda kv: kv[0].points)
    for simplex, coeff in terms:
        points = " ".join(
            "(" + ",".join(str(c) for c in p) + ")" for p in simplex.points
        )
        lines.append("%s : %s" % (coeff, points))
    return "\n".join(lines) + "\n"


def parse_chain(text):
    from .subdivision import AffineChain, AffineSimplex

    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != "chain 1":
        raise StructureError("expected header 'chain 1'")
    terms = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line or line.startswith("#"):
            continue
        coeff_s, _, body = line.partition(":")
        points = []
        for chunk in body.split():
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise StructureError("line %d: malformed point %r" % (ln, chunk))
            points.append(tuple(Fraction(v) for v in chunk[1:-1].split(",")))
        terms.append((AffineSimplex(points), Fraction(coeff_s.strip())))
    return AffineChain(terms)


# -- form fields -------------------------------------------------------------------


def serialize_field(field):
    """FormField as per-simplex form lines keyed by simplex identifier."""
    lines = ["field 1", "degree %d" % field.p]
    for (n, s) in sorted(field.forms, key=lambda k: (k[0], str(k[1]))):
        form = field.forms[(n, s)]
        if form.is_zero():
            continue
        lines.append("on %d %s : %s" % (n, render_id(s), render_form(form)))
    return "\n".join(lines) + "\n"


def parse_field(text, x):
    from .forms import FormField

    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != "field 1":
        raise StructureError("expected header 'field 1'")
    if not lines[1].startswith("degree "):
        raise StructureError("expected 'degree p'")
    degree = int(lines[1].split()[1])
    forms = {}
    for ln, line in enumerate(lines[2:], start=3):
        if not line or line.startswith("#"):
            continue
        if not line.startswith("on "):
            raise StructureError("line %d: expected 'on dim id : form ...'" % ln)
        head, _, body = line.partition(":")
        words = head.split()
        forms[(int(words[1]), words[2])] = parse_form(body)
    return FormField(x, degree, forms)


# -- sites and presheaves ------------------------------------------------------


def serialize_site_presheaf(presheaf):
    site = presheaf.site
    lines = ["site 1"]
    for name in site.names():
        chunks = []
        for n in sorted(site.objects[name]):
            members = sorted(render_id(s) for s in site.objects[name][n])
            if members:
                chunks.append("%d : %s" % (n, " ".join(members)))
        lines.append("object %s = %s" % (name, " ; ".join(chunks)))
    for name in site.names():
        for fam in site.covers.get(name, []):
            lines.append("cover %s = %s" % (name, " ".join(fam)))
    lines.append("presheaf")
    for name in site.names():
        lines.append("sections %s : %s" % (name, " ".join(presheaf.sections[name])))
    for a in site.names():
        for b in site.names():
            if a != b and site.leq(b, a):
                pairs = " ".join(
                    "%s>%s" % (s, presheaf.res[(a, b)][s]) for s in presheaf.sections[a]
                )
                lines.append("restrict %s %s : %s" % (a, b, pairs))
    return "\n".join(lines) + "\n"


def parse_site_presheaf(text, base):
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != "site 1":
        raise StructureError("expected header 'site 1'")
    objects = {}
    covers = {}
    sections = {}
    restrictions = {}
    mode = "site"
    for ln, line in enumerate(lines[1:], start=2):
        if not line or line.startswith("#"):
            continue
        if line == "presheaf":
            mode = "presheaf"
            continue
        words = line.split()
        if mode == "site":
            if words[0] == "object":
                name = words[1]
                _, _, body = line.partition("=")
                sub = {}
                for chunk in body.split(";"):
                    chunk = chunk.strip()
                    if not chunk:
                        continue
                    dim_s, _, members = chunk.partition(":")
                    sub[int(dim_s)] = frozenset(members.split())
                objects[name] = sub
            elif words[0] == "cover":
                name = words[1]
                _, _, body = line.partition("=")
                covers.setdefault(name, []).append(tuple(body.split()))
            else:
                raise StructureError("line %d: unknown site row %r" % (ln, words[0]))
        else:
            if words[0] == "sections":
                name = words[1]
                _, _, body = line.partition(":")
                sections[name] = tuple(body.split())
            elif words[0] == "restrict":
                a, b = words[1], words[2]
                _, _, body = line.partition(":")
                table = {}
                for pair in body.split():
                    s, _, t = pair.partition(">")
                    table[s] = t
                restrictions[(a, b)] = table
            else:
                raise StructureError("line %d: unknown presheaf row %r" % (ln, words[0]))
    site = FiniteSite(base, objects, covers)
    return Presheaf(site, sections, restrictions)


# -- simplicial maps ------------------------------------------------------------


def serialize_map(smap):
    lines = ["smap 1", "source"]
    lines.append(serialize_complex(smap.source).rstrip("\n"))
    lines.append("target")
    lines.append(serialize_complex(smap.target).rstrip("\n"))
    lines.append("map")
    for n in sorted(smap.level_map):
        for s in smap.source.simplices[n]:
            lines.append("%d : %s > %s" % (n, render_id(s), render_id(smap.level_map[n][s])))
    return "\n".join(lines) + "\n"


def parse_map(text):
    from .simplicial import SimplicialMap

    lines = text.splitlines()
    if not lines or lines[0].strip() != "smap 1":
        raise StructureError("expected header 'smap 1'")
    sections = {"source": [], "target": [], "map": []}
    mode = None
    for line in lines[1:]:
        stripped = line.strip()
        if stripped in sections and not stripped.startswith("("):
            mode = stripped
            continue
        if mode is None:
            raise StructureError("content before any section header")
        sections[mode].append(line)
    source = parse_complex("\n".join(sections["source"]))
    target = parse_complex("\n".join(sections["target"]))
    level_map = {}
    for line in sections["map"]:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        dim_s, _, body = line.partition(":")
        src, _, dst = body.partition(">")
        level_map.setdefault(int(dim_s), {})[src.strip()] = dst.strip()
    return SimplicialMap(source, target, level_map)


# -- abelian bundle data ----------------------------------------------------------


def serialize_u1(bundle):
    lines = ["u1 1"]
    for t in bundle.triangles:
        lines.append("triangle %s or %d" % (render_id(t), bundle.orientations[t]))
    for t in bundle.triangles:
        lines.append("A %s : %s" % (render_id(t), render_form(bundle.forms[t])))
    for g in bundle.gluings:
        lines.append(
            "glue %s %d %s %d flip %d wind %d : %s"
            % (
                render_id(g.plus[0]), g.plus[1],
                render_id(g.minus[0]), g.minus[1],
                1 if g.flip else 0, g.winding,
                render_form(g.p),
            )
        )
    return "\n".join(lines) + "\n"


def parse_u1(text):
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != "u1 1":
        raise StructureError("expected header 'u1 1'")
    triangles = []
    orientations = {}
    forms = {}
    gluings = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line or line.startswith("#"):
            continue
        words = line.split()
        if words[0] == "triangle":
            triangles.append(words[1])
            orientations[words[1]] = int(words[3])
        elif words[0] == "A":
            name = words[1]
            _, _, body = line.partition(":")
            forms[name] = parse_form(body)
        elif words[0] == "glue":
            head, _, body = line.partition(":")
            w = head.split()
            gluings.append(
                EdgeGluing(
                    (w[1], int(w[2])),
                    (w[3], int(w[4])),
                    bool(int(w[6])),
                    parse_form(body),
                    int(w[8]),
                )
            )
        else:
            raise StructureError("line %d: unknown u1 row %r" % (ln, words[0]))
    return U1BundleData(triangles, orientations, forms, gluings)


# -- extension problems -------------------------------------------------------------


_ALGEBRAS = {"none": None, "abelian-1d": abelian_line, "sl2": sl2, "gl2": lambda: gl(2)}


def parse_extend(text):
    """Extension problem: ambient dimension, optional missing horn index,
    algebra name, and per-face (and per-entry) forms.

    Returns (n, missing_or_None, algebra_or_None, data dict).
    """
    lines = [ln.strip() for ln in text.splitlines()]
    if not lines or lines[0] != "extend 1":
        raise StructureError("expected header 'extend 1'")
    n = None
    missing = None
    algebra = None
    raw = {}
    for ln, line in enumerate(lines[1:], start=2):
        if not line or line.startswith("#"):
            continue
        words = line.split()
        if words[0] == "n":
            n = int(words[1])
        elif words[0] == "missing":
            missing = int(words[1])
        elif words[0] == "algebra":
            if words[1] not in _ALGEBRAS:
                raise StructureError("unknown algebra %r" % (words[1],))
            algebra = _ALGEBRAS[words[1]]
        elif words[0] == "face":
            i = int(words[1])
            r, c = int(words[3]), int(words[4])
            _, _, body = line.partition(":")
            raw.setdefault(i, {})[(r, c)] = parse_form(body)
        else:
            raise StructureError("line %d: unknown extend row %r" % (ln, words[0]))
    if n is None:
        raise StructureError("missing 'n' row")
    if algebra is None:
        data = {i: entries[(0, 0)] for i, entries in raw.items()}
        return n, missing, None, data
    alg = algebra()
    data = {}
    for i, entries in raw.items():
        sample = next(iter(entries.values()))
        zero = PolyForm.zero(sample.n, sample.p)
        d = alg.size
        rows = [[entries.get((r, c), zero) for c in range(d)] for r in range(d)]
        data[i] = LieValuedForm(alg, sample.n, sample.p, rows)
    return n, missing, alg, data
