"""End-to-end command-line behavior and the exit-code contract."""

from importlib import resources

import numpy as np
import pytest

from fcspin.cli import main
from fcspin.krausfile import write_kraus
from fcspin.states import random_unital_kraus

DATA = str(resources.files("fcspin.data").joinpath("aklt.kraus")).rsplit("/", 1)[0]


@pytest.fixture()
def random_file(tmp_path):
    fam = random_unital_kraus(3, 3, np.random.default_rng(123))
    path = tmp_path / "random.kraus"
    path.write_text(write_kraus(fam, name="random"))
    return str(path)


@pytest.fixture()
def bad_file(tmp_path):
    path = tmp_path / "bad.kraus"
    path.write_text("d 3\nk 2\nmatrix 1\nbogus\n")
    return str(path)


def test_repr_d3(capsys):
    assert main(["repr", "--d", "3"]) == 0
    out = capsys.readouterr().out
    assert "mu +1" in out
    assert "zeta (1.0,0.0)" in out


def test_repr_d2_sigma_y(capsys):
    assert main(["repr", "--d", "2"]) == 0
    out = capsys.readouterr().out
    assert "mu -1" in out
    # r0 rows of sigma_y: (0, i) and (-i, 0)
    assert "(-0.0,1.0)" in out
    assert "(-0.0,-1.0)" in out


def test_repr_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["repr", "--d", "0"])
    assert err.value.code == 2


def test_audit_aklt_passes(capsys):
    assert main(["audit", "@aklt"]) == 0
    out = capsys.readouterr().out
    assert "overall pass" in out
    assert out.count("clause ") == 9


def test_audit_random_fails(capsys):
    assert main(["audit", f"{DATA}/random_unital_d3.kraus"]) == 1
    assert "overall fail" in capsys.readouterr().out


def test_audit_parse_error(bad_file, capsys):
    assert main(["audit", bad_file]) == 2
    assert "line 4" in capsys.readouterr().err


def test_audit_missing_file(capsys):
    assert main(["audit", "/nonexistent/x.kraus"]) == 2


def test_audit_deterministic(capsys):
    main(["audit", "@aklt", "--seed", "5"])
    first = capsys.readouterr().out
    main(["audit", "@aklt", "--seed", "5"])
    second = capsys.readouterr().out
    assert first == second


def test_correlate_aklt(capsys):
    assert main(["correlate", "@aklt", "--n-max", "10"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "n,corr_re,corr_im,abs_corr,bound,margin,ratio"
    rows = [l for l in lines if l[0].isdigit()]
    assert len(rows) == 10
    # ratio column settles at -1/3
    ratio = float(rows[5].split(",")[-1])
    assert abs(ratio - (-1 / 3)) < 1e-9
    assert "# verdict pass" in out


def test_correlate_product_zeros(capsys):
    assert main(["correlate", f"{DATA}/product_d2.kraus"]) == 0
    out = capsys.readouterr().out
    for line in out.strip().splitlines():
        if line[0].isdigit():
            assert abs(float(line.split(",")[3])) < 1e-12


def test_correlate_unknown_observable(capsys):
    assert main(["correlate", "@aklt", "--A", "Qx"]) == 2


def test_spectrum_aklt(capsys):
    assert main(["spectrum", "@aklt"]) == 0
    out = capsys.readouterr().out
    assert "# fixed_multiplicity 1" in out
    values = sorted(
        float(line.split(",")[1])
        for line in out.splitlines() if line and line[0].isdigit()
    )
    assert np.abs(np.array(values) - np.array([-1 / 3] * 3 + [1.0])).max() < 1e-9


def test_ed_xxx(capsys):
    assert main(["ed", "--model", "xxx", "--d", "3", "--n", "6"]) == 0
    out = capsys.readouterr().out
    assert "degeneracy 1" in out
    assert "r,total,zz" in out


def test_ed_rp(capsys):
    assert main(["ed", "--d", "2", "--n", "4", "--beta", "1.0", "--rp"]) == 0
    assert "rp_status pass" in capsys.readouterr().out


def test_ed_oversize(capsys):
    assert main(["ed", "--d", "3", "--n", "12"]) == 4
    assert "refused" in capsys.readouterr().err


def test_demo_aklt(capsys):
    assert main(["demo-aklt"]) == 0
    out = capsys.readouterr().out
    assert "verdict pass" in out
    assert "delta 0.3333333333333333" in out
