"""Text formats, the command line, exit codes, and report determinism."""

import io
from contextlib import redirect_stdout

import pytest

from ssetkit.cli import main
from ssetkit.errors import StructureError
from ssetkit.forms import PolyForm, QTau
from ssetkit.io_text import (
    parse_complex,
    parse_cover,
    parse_form,
    parse_map,
    parse_matrix_triples,
    parse_site_presheaf,
    parse_u1,
    render_form,
    serialize_complex,
    serialize_map,
    serialize_matrix,
    serialize_site_presheaf,
    serialize_u1,
)
from ssetkit.linalg import Matrix

from conftest import fixture_path, fixture_text


SSET_FIXTURES = [
    "point.sset", "delta1.sset", "delta2.sset", "bd_delta3.sset", "sphere2.sset",
    "circle2.sset", "rp2.sset", "torus.sset", "nerve_z2.sset", "nerve_z3.sset",
    "path.sset", "two_points.sset",
]


@pytest.mark.parametrize("name", SSET_FIXTURES)
def test_sset_round_trip(name):
    text = fixture_text(name)
    x = parse_complex(text)
    assert x.validate() == []
    assert serialize_complex(x) == text


def test_parse_boundary_counts():
    x = parse_complex(fixture_text("bd_delta3.sset"))
    assert x.counts() == (4, 6, 4)


def test_dangling_reference_names_the_culprit():
    with pytest.raises(StructureError) as err:
        parse_complex(fixture_text("corrupt_dangling.sset"))
    assert "v1" in str(err.value)


def test_cover_round_trip():
    text = fixture_text("circle2.cover")
    sub_a, sub_b = parse_cover(text)
    assert "a" in sub_a[1] and "b" in sub_b[1]


def test_matrix_round_trip():
    m = Matrix([[1, 0, -3], [0, 2, 5]])
    nrows, ncols, entries = parse_matrix_triples(serialize_matrix(m))
    assert (nrows, ncols) == (2, 3)
    rebuilt = Matrix(
        [[entries.get((i, j), 0) for j in range(ncols)] for i in range(nrows)]
    )
    assert rebuilt == m


def test_form_round_trip_with_tau():
    f = PolyForm(2, 1, {((1, 0), (1,)): QTau(1, 2), ((0, 0), (2,)): QTau(0, -1)})
    assert parse_form(render_form(f)) == f


def test_site_presheaf_round_trip():
    base = parse_complex(fixture_text("two_points.sset"))
    text = fixture_text("site_two_points_constant.site")
    presheaf = parse_site_presheaf(text, base)
    assert serialize_site_presheaf(presheaf) == text


def test_map_round_trip():
    text = fixture_text("incl_bd2.smap")
    smap = parse_map(text)
    assert smap.validate() == []
    assert serialize_map(smap) == text


def test_u1_round_trip():
    for name in ("u1_trivial.u1", "u1_unit.u1"):
        text = fixture_text(name)
        bundle = parse_u1(text)
        assert serialize_u1(bundle) == text


# -- CLI ------------------------------------------------------------------------


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def strip_timing(text):
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("timing-ms"))


def test_cli_homology_bd3():
    code, out = run_cli("homology", fixture_path("bd_delta3.sset"))
    assert code == 0
    assert "record betti exact : (1, 0, 1)" in out


def test_cli_homology_rp2_torsion():
    code, out = run_cli("homology", fixture_path("rp2.sset"))
    assert code == 0
    assert "record torsion.H1 exact : (2)" in out


def test_cli_kan_negative_with_witness():
    code, out = run_cli("kan", fixture_path("delta1.sset"))
    assert code == 1
    assert "record fibrant_up_to_cap exact : False" in out
    assert "witness" in out


def test_cli_kan_positive():
    code, out = run_cli("kan", fixture_path("nerve_z2.sset"))
    assert code == 0
    assert "record fibrant_up_to_cap exact : True" in out


def test_cli_corrupt_input_exit_2():
    code, out = run_cli("homology", fixture_path("corrupt_dangling.sset"))
    assert code == 2
    assert "v1" in out
    assert "status error" in out


def test_cli_unknown_command_exit_2():
    code, _ = run_cli("transmogrify", "x")
    assert code == 2


def test_cli_mv_circle():
    code, out = run_cli("mv", fixture_path("circle2.sset"), fixture_path("circle2.cover"))
    assert code == 0
    assert "record connecting.rank.deg0 exact : 1" in out


def test_cli_sheaf_negative_then_sheafify():
    code, out = run_cli(
        "sheaf", fixture_path("two_points.sset"), fixture_path("site_two_points_constant.site")
    )
    assert code == 1
    assert "record sheaf exact : False" in out
    code, out = run_cli(
        "sheaf", fixture_path("two_points.sset"), fixture_path("site_two_points_constant.site"),
        "--op", "sheafify",
    )
    assert code == 0
    assert "record sheafify.is_sheaf exact : True" in out


def test_cli_fibration_witness():
    code, out = run_cli("fibration", fixture_path("incl_bd2.smap"))
    assert code == 1
    assert "record fibration_up_to_cap exact : False" in out
    code, out = run_cli("fibration", fixture_path("proj_d1_nz2.smap"))
    assert code == 0


def test_cli_chern():
    code, out = run_cli("chern", fixture_path("u1_trivial.u1"))
    assert code == 0 and "record degree exact : 0" in out
    code, out = run_cli("chern", fixture_path("u1_unit.u1"))
    assert code == 0 and "record degree exact : 1" in out


def test_cli_extend_and_witness():
    code, out = run_cli("extend", fixture_path("extend_n2.ext"))
    assert code == 0
    assert "record restrictions_verified exact : True" in out
    code, out = run_cli("extend", fixture_path("extend_horn.ext"))
    assert code == 0
    code, out = run_cli("extend", fixture_path("extend_bad.ext"))
    assert code == 1
    assert "witness" in out


def test_cli_subdivide_and_stokes_exact_flags():
    code, out = run_cli("subdivide-check", "--trials", "5")
    assert code == 0
    assert "numeric" not in out
    code, out = run_cli("derham", "--check-stokes", "--trials", "20")
    assert code == 0
    assert "exact : pass" in out


def test_cli_derham_report():
    code, out = run_cli("derham", fixture_path("delta2.sset"), "--poly-degree", "3")
    assert code == 0
    assert "record betti exact : (1, 0, 0)" in out
    assert "record isomorphism exact : (True, True, True)" in out


def test_cli_json_format():
    code, out = run_cli("--format", "json", "homology", fixture_path("point.sset"))
    assert code == 0
    import json

    payload = json.loads(out)
    assert payload["status"] == "ok"
    assert any(r["name"] == "betti" for r in payload["records"])


DETERMINISM_RUNS = [
    ("homology", "bd_delta3.sset"),
    ("homology", "rp2.sset"),
    ("homology", "torus.sset"),
    ("ring", "torus.sset"),
    ("kan", "nerve_z2.sset"),
    ("kan", "delta1.sset"),
    ("chern", "u1_unit.u1"),
    ("extend", "extend_n2.ext"),
]


@pytest.mark.parametrize("command,fixture", DETERMINISM_RUNS)
def test_cli_determinism(command, fixture):
    _, first = run_cli(command, fixture_path(fixture))
    _, second = run_cli(command, fixture_path(fixture))
    assert strip_timing(first) == strip_timing(second)


def test_chain_round_trip():
    import random

    from ssetkit.io_text import parse_chain, serialize_chain
    from ssetkit.randomsuite import random_affine_simplex
    from ssetkit.subdivision import AffineChain, subdivide

    rng = random.Random(1)
    chain = subdivide(AffineChain.of(random_affine_simplex(rng, 2)))
    text = serialize_chain(chain)
    assert parse_chain(text) == chain
    assert serialize_chain(parse_chain(text)) == text


def test_field_round_trip():
    import random
    from fractions import Fraction

    from ssetkit.forms import Cochain, whitney
    from ssetkit.io_text import parse_field, serialize_field

    rng = random.Random(2)
    x = parse_complex(fixture_text("bd_delta3.sset"))
    cochain = Cochain(x, 1, [(s, Fraction(rng.randint(-2, 2))) for s in x.nondegenerate(1)])
    field = whitney(cochain)
    text = serialize_field(field)
    assert parse_field(text, x) == field


def test_report_numeric_flag_and_digest():
    from ssetkit.reporting import Report

    r = Report(command="demo")
    r.add("bump.at_quarter", 6.14421235332821e-06, mode="numeric:1e-9")
    r.add("exact.value", 1)
    text = r.render_text()
    assert "record bump.at_quarter numeric:1e-9 :" in text
    assert "record exact.value exact : 1" in text
    r.timing_ms = 5
    with_timing = r.render_text()
    assert r.digest() == Report(command="demo", records=r.records).digest()
    assert "timing-ms 5" in with_timing
