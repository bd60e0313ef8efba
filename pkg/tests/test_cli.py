import json
import math

import pytest

from hyperfour.cli import UsageError, main, parse_complex, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParsing:
    def test_grid_inclusive(self):
        g = parse_grid("-5:5:0.01")
        assert len(g) == 1001 and g[0] == -5 and g[-1] == pytest.approx(5)

    def test_grid_clamped(self):
        assert list(parse_grid("0:1:0.4")) == pytest.approx([0, 0.4, 0.8, 1.0])

    def test_grid_single(self):
        assert list(parse_grid("2:2:1")) == [2]

    @pytest.mark.parametrize("spec", ["1:2", "0:1:-1", "a:b:c"])
    def test_grid_errors(self, spec):
        with pytest.raises(UsageError):
            parse_grid(spec)

    def test_complex(self):
        assert parse_complex("0.2+1.1i") == 0.2 + 1.1j
        with pytest.raises(UsageError):
            parse_complex("one")


class TestCommands:
    def test_coeffs(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--n", "7", "--grid", "-5:5:0.01")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 1003
        assert lines[1] == "x,re_A_n,im_A_n,re_B_n,im_B_n"

    def test_coeffs_a0(self, capsys):
        _, out, _ = run(capsys, "coeffs", "--n", "0", "--grid", "0:0:1")
        row = out.splitlines()[2].split(",")
        assert float(row[1]) == pytest.approx(4 * math.log(2) / math.pi**2, abs=1e-12)

    def test_deterministic(self, capsys):
        first = run(capsys, "coeffs", "--n", "3", "--grid", "-1:1:0.25")[1]
        second = run(capsys, "coeffs", "--n", "3", "--grid", "-1:1:0.25")[1]
        assert first == second

    def test_expand_then_eval(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        code, _, _ = run(capsys, "expand", "--boundary", "exp:1", "--n-max", "3", "--out", str(path))
        assert code == 0
        c = json.loads(path.read_text())
        assert c["a"]["1"][0] == pytest.approx(1, abs=1e-9)
        code, out, _ = run(capsys, "eval", "--coeffs", str(path), "--tau", "0+1i")
        re, im = map(float, out.split(","))
        assert code == 0 and re == pytest.approx(math.exp(-math.pi), abs=1e-8) and abs(im) < 1e-8

    def test_height(self, capsys):
        code, out, _ = run(capsys, "height", "--tau", "0+0.5i")
        assert code == 0 and out.startswith("height 1")
        code, out, _ = run(capsys, "height", "--y", "1e-3")
        assert code == 0 and "mean_height" in out

    def test_kg(self, capsys):
        code, out, _ = run(capsys, "kg", "--n", "2", "--grid", "0:3.2:3.2", "--grid-y", "0:0:1")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "x,y,re_u,im_u" and len(lines) == 3

    def test_usage_errors(self, capsys):
        assert run(capsys, "coeffs", "--n", "1", "--grid", "1:0:1")[0] == 2
        assert run(capsys, "expand", "--boundary", "nope:1")[0] == 2
        assert run(capsys, "coeffs", "--n-max", "-1", "--grid", "0:1:1")[0] == 2
        with pytest.raises(SystemExit):
            main(["frobnicate"])
