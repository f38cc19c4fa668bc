import io
import json
import subprocess
import sys
import xml.dom.minidom

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyoverlap.cli import EXIT_OK, EXIT_PRECONDITION, EXIT_VALIDATION, main
from polyoverlap.errors import ValidationError
from polyoverlap.geometry import ConvexPolygon, SimplePolygon
from polyoverlap.io import (SvgCanvas, format_polygon, format_record, parse_polygon, polygon_from_wkt,
                            read_polygon, write_polygon)
from polyoverlap.shapes import l_shape, rectangle, unit_square


def run(argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, [json.loads(line) for line in out.getvalue().splitlines()], out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, P in [("square", unit_square()), ("l", l_shape()), ("wide", rectangle(10, 1)),
                    ("tall", rectangle(1, 10))]:
        paths[name] = tmp_path / f"{name}.json"
        write_polygon(paths[name], P)
    return paths


class TestFormat:
    def test_round_trip_bit_exact(self, rng, tmp_path):
        for _ in range(20):
            pts = rng.normal(size=(3, 2)) * 10 ** rng.uniform(-8, 8)
            P = SimplePolygon(pts)
            path = tmp_path / "p.json"
            write_polygon(path, P)
            assert np.array_equal(read_polygon(path).ring, P.ring)

    def test_parts_round_trip(self):
        P = l_shape().with_parts([rectangle(2, 1), rectangle(1, 1, 0, 1)])
        back = parse_polygon(format_polygon(P))
        assert len(back.parts) == 2
        assert all(np.array_equal(a.vertices, b.vertices) for a, b in zip(back.parts, P.parts))

    def test_malformed_names_token(self):
        with pytest.raises(ValidationError, match=r"line 2 column \d+.*'oops"):
            parse_polygon('{"ring": [[0, 0], [1, 0],\n oops [0, 1]]}')

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError, match="NaN"):
            parse_polygon('{"ring": [[0, 0], [1, 0], [NaN, 1]]}')

    def test_vertex_diagnostic(self):
        with pytest.raises(ValidationError, match="vertex 2"):
            parse_polygon('{"ring": [[0, 0], [1, 0], [1]]}')

    def test_unknown_field(self):
        with pytest.raises(ValidationError, match="unknown"):
            parse_polygon('{"ring": [[0, 0], [1, 0], [0, 1]], "holes": []}')

    def test_wkt(self):
        P = polygon_from_wkt("POLYGON ((0 0, 2 0, 2 1, 1 1, 1 2, 0 2, 0 0))")
        assert P.area == 3.0
        with pytest.raises(ValidationError, match="holes"):
            polygon_from_wkt("POLYGON ((0 0, 4 0, 4 4, 0 4, 0 0), (1 1, 2 1, 2 2, 1 1))")
        with pytest.raises(ValidationError):
            polygon_from_wkt("POLYGON ((0 0, 1 x, 0 1))")

    def test_record_field_order(self):
        line = format_record({"b": 1, "a": np.float64(0.5), "c": np.arange(2)})
        assert line == '{"b": 1, "a": 0.5, "c": [0, 1]}\n'

    def test_svg_well_formed(self):
        c = SvgCanvas()
        c.parts([ConvexPolygon(rectangle(1, 1).vertices)])
        c.segments([[(0, 0), (1, 1)]])
        c.point((0.5, 0.5))
        c.polygon([(0, 0), (1, 0), (0, 1)], label="a < b")
        xml.dom.minidom.parseString(c.render())


coord = st.floats(-1e12, 1e12, allow_nan=False, allow_infinity=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=12))
def test_text_round_trip_property(points):
    try:
        P = SimplePolygon(points)
    except ValidationError:
        return
    assert np.array_equal(parse_polygon(format_polygon(P)).ring, P.ring)


class TestCommands:
    def test_decompose_l_shape(self, files, tmp_path):
        out = tmp_path / "parts.json"
        svg = tmp_path / "parts.svg"
        code, records, _ = run(["decompose", files["l"], "--out", out, "--svg", svg])
        assert code == EXIT_OK
        assert records[0]["parts"] == 2 and records[0]["notches"] == 1
        assert len(read_polygon(out).parts) == 2
        xml.dom.minidom.parse(str(svg))

    def test_decompose_convex_to_stdout(self, files):
        code, records, _ = run(["decompose", files["square"]])
        assert code == EXIT_OK and len(records[0]["parts"]) == 1

    def test_decompose_malformed(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"ring": [[0, 0], [1, 0] [0, 1]]}')
        code, _, _ = run(["decompose", bad])
        assert code == EXIT_VALIDATION
        assert "'[0," in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run(["decompose", tmp_path / "none.json"])[0] == EXIT_VALIDATION

    def test_match_examples(self, files):
        code, rec, _ = run(["match", files["square"], files["square"], "--eps", 0.2])
        assert code == EXIT_OK and rec[0]["value"] >= 0.8
        assert list(rec[0])[:3] == ["command", "translation", "value"]
        assert run(["match", files["l"], files["l"], "--eps", 0.25])[1][0]["value"] >= 2.25
        assert run(["match", files["wide"], files["tall"], "--eps", 0.1])[1][0]["value"] >= 0.9

    def test_match_output_byte_identical(self, files, tmp_path):
        a = run(["match", files["l"], files["l"], "--svg", tmp_path / "m.svg"])[2]
        b = run(["match", files["l"], files["l"], "--parallel"])[2]
        assert a == b
        timed = run(["match", files["l"], files["l"], "--timings"])[1][0]
        assert "search_seconds" in timed

    def test_match_bad_eps(self, files):
        assert run(["match", files["square"], files["square"], "--eps", 1.5])[0] == EXIT_VALIDATION

    def test_oracle_examples(self, files):
        code, rec, _ = run(["oracle", files["square"], files["square"], "--base", 101])
        assert code == EXIT_OK
        assert abs(rec[0]["best_value"] - 1.0) <= rec[0]["value_slack_bound"]
        rec = run(["oracle", files["l"], files["l"]])[1]
        assert abs(rec[0]["best_value"] - 3.0) <= rec[0]["value_slack_bound"]
        rec = run(["oracle", files["wide"], files["tall"], "--workers", 2])[1]
        assert abs(rec[0]["best_value"] - 1.0) <= rec[0]["value_slack_bound"]

    def test_slice(self, files, tmp_path):
        ring_file = tmp_path / "ring.json"
        code, rec, _ = run(["slice", files["square"], files["square"], "--alpha", 0.25,
                            "--out", ring_file, "--svg", tmp_path / "s.svg"])
        assert code == EXIT_OK
        ring = read_polygon(ring_file)
        assert ConvexPolygon(ring.ring).contains_points(np.array([[0.75, 0.0]]), tol=1e-6)[0]
        assert rec[0]["vertices"] == len(rec[0]["ring"])

    def test_slice_above_maximum(self, files, capsys):
        assert run(["slice", files["square"], files["square"], "--alpha", 1.5])[0] == EXIT_PRECONDITION
        assert "no such slice" in capsys.readouterr().err

    def test_slice_needs_convex(self, files):
        assert run(["slice", files["l"], files["square"], "--alpha", 0.5])[0] == EXIT_VALIDATION

    def test_pair_approx(self, files, tmp_path):
        code, rec, _ = run(["pair-approx", files["wide"], files["tall"], "--eps", 0.25,
                            "--svg", tmp_path / "p.svg"])
        assert code == EXIT_OK
        assert rec[0]["branch"] == "incomparable"
        assert len(rec) == 1 + rec[0]["event_polygons"]
        assert {r["kind"] for r in rec[1:]} == {"vertex-in-region"}

    def test_query_from_context(self, files, tmp_path):
        ctx = tmp_path / "ctx.json"
        _, rec, _ = run(["match", files["l"], files["l"], "--context", ctx])
        t = rec[0]["translation"]
        code, out, _ = run(["query", ctx, "--at", t[0], t[1], "--at", 50, 50])
        assert code == EXIT_OK
        assert abs(out[0]["value"] - rec[0]["value"]) <= 1e-12
        assert out[1]["value"] == 0.0
        scan = run(["query", ctx, "--at", t[0], t[1], "--linear-scan"])[1]
        assert scan[0]["value"] == out[0]["value"]

    def test_query_malformed_context(self, tmp_path):
        ctx = tmp_path / "ctx.json"
        ctx.write_text('{"P": 1}')
        assert run(["query", ctx, "--at", 0, 0])[0] == EXIT_VALIDATION

    def test_module_entry_point(self, files):
        proc = subprocess.run([sys.executable, "-m", "polyoverlap", "oracle", str(files["square"]),
                               str(files["square"]), "--base", "21", "--levels", "1"],
                              capture_output=True, text=True, check=False)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["command"] == "oracle"
