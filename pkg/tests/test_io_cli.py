import json

import numpy as np
import pytest

from choimetric import cyclic_group, identity_channel, word_length
from choimetric import io
from choimetric.cli import main
from choimetric.errors import ChoimetricError
from choimetric.experiments import length_dirac
from choimetric.groups import twisted_group_algebra


def write(tmp_path, name, data):
    path = tmp_path / name
    io.save_json(data, str(path))
    return str(path)


def test_algebra_round_trip(tmp_path, m2):
    m2.name = "M2"
    path = write(tmp_path, "m2.json", io.algebra_to_dict(m2))
    back = io.algebra_from_dict(io.load_json(path))
    assert np.abs(back.basis - m2.basis).max() < 1e-12
    assert back.name == "M2"


def test_functional_and_channel_round_trip(tmp_path, m2, tr2):
    m2.name = "M2"
    registry = {"M2": m2}
    tau_path = write(tmp_path, "tr.json", io.functional_to_dict(tr2))
    tau = io.trace_from_dict(io.load_json(tau_path), registry)
    assert np.abs(tau.values - tr2.values).max() < 1e-12
    ch_path = write(tmp_path, "id.json", io.channel_to_dict(identity_channel(m2)))
    ch = io.channel_from_dict(io.load_json(ch_path), registry)
    assert np.abs(ch.matrix - np.eye(4)).max() == 0


def test_group_file_round_trip(tmp_path):
    g = cyclic_group(3)
    length = word_length(g)
    path = write(tmp_path, "z3.json", io.group_to_dict(g, None, length))
    back, cocycle, back_length = io.group_from_dict(io.load_json(path))
    assert back.order == 3 and cocycle is None
    assert np.allclose(back_length.values, length.values)


def test_triple_round_trip(tmp_path):
    ga = twisted_group_algebra(cyclic_group(2))
    ga.algebra.name = "Z2alg"
    t = length_dirac(ga, word_length(cyclic_group(2)))
    path = write(tmp_path, "t.json", io.triple_to_dict(t))
    back = io.triple_from_dict(io.load_json(path), {"Z2alg": ga.algebra})
    assert np.abs(back.dirac - t.dirac).max() < 1e-12


def test_malformed_json_fails_fast(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ChoimetricError):
        io.load_json(str(bad))


def test_cli_validate_and_classify(tmp_path, m2, tr2):
    m2.name = "M2"
    alg = write(tmp_path, "m2.json", io.algebra_to_dict(m2))
    tau = write(tmp_path, "tr.json", io.functional_to_dict(tr2))
    ch = write(tmp_path, "id.json", io.channel_to_dict(identity_channel(m2)))
    assert main(["validate", alg, "--kind", "algebra"]) == 0
    assert main(["validate", tau, "--kind", "trace", "--algebras", alg]) == 0
    assert main(["classify", "--channel", ch, "--trace", tau,
                 "--algebras", alg]) == 0


def test_cli_choi_and_omega(tmp_path, m2, tr2, capsys):
    m2.name = "M2"
    alg = write(tmp_path, "m2.json", io.algebra_to_dict(m2))
    tau = write(tmp_path, "tr.json", io.functional_to_dict(tr2))
    ch = write(tmp_path, "id.json", io.channel_to_dict(identity_channel(m2)))
    assert main(["choi", "--channel", ch, "--algebras", alg]) == 0
    eigs = json.loads(capsys.readouterr().out.strip())
    assert abs(max(eigs) - 2.0) < 1e-9
    assert main(["omega", "--channel", ch, "--trace", tau,
                 "--algebras", alg]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert rec["positive"] and not rec["state"]


def test_cli_group_gen_and_delta(tmp_path, capsys):
    gpath = str(tmp_path / "z2.json")
    assert main(["group-gen", "--kind", "cyclic", "--n", "2",
                 "--out", gpath]) == 0
    phi = write(tmp_path, "phi.json",
                {"group": "Z2", "values": [[1, 0], [0.8, 0]]})
    psi = write(tmp_path, "psi.json",
                {"group": "Z2", "values": [[1, 0], [0.2, 0]]})
    assert main(["delta", "--group", gpath, "--pdf", phi, "--pdf2", psi]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert rec["status"] == "optimal"
    assert rec["value"] > 0


def test_cli_mk(tmp_path, capsys):
    ga = twisted_group_algebra(cyclic_group(2))
    ga.algebra.name = "Z2alg"
    alg = write(tmp_path, "alg.json", io.algebra_to_dict(ga.algebra))
    t = length_dirac(ga, word_length(cyclic_group(2)))
    tpath = write(tmp_path, "t.json", io.triple_to_dict(t))
    phi = write(tmp_path, "phi.json",
                {"algebra": "Z2alg", "values": [[1, 0], [0.5, 0]]})
    psi = write(tmp_path, "psi.json",
                {"algebra": "Z2alg", "values": [[1, 0], [-0.5, 0]]})
    assert main(["mk", "--triple", tpath, "--phi", phi, "--psi", psi,
                 "--algebras", alg]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert abs(rec["value"] - 1.0) < 1e-6


def test_cli_wasserstein(tmp_path, capsys):
    prob = write(tmp_path, "w.json", {
        "l_matrices": [[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]],
        "rho1": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
        "rho2": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
    })
    assert main(["wasserstein", "--problem", prob]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert abs(rec["value"] - 1.0) < 1e-6


def test_cli_kasparov(tmp_path, capsys):
    ga = twisted_group_algebra(cyclic_group(2))
    ga.algebra.name = "Z2alg"
    alg = write(tmp_path, "alg.json", io.algebra_to_dict(ga.algebra))
    t = length_dirac(ga, word_length(cyclic_group(2)))
    tpath = write(tmp_path, "t.json", io.triple_to_dict(t))
    out = str(tmp_path / "prod.json")
    assert main(["kasparov", "--triple", tpath, "--triple2", tpath,
                 "--algebras", alg, "--out", out]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert rec["hilbert_dim"] == 8 and rec["even"]


def test_cli_missing_file_is_an_error(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope.json"),
                 "--kind", "algebra"]) == 1


def test_cli_dl(tmp_path, capsys):
    from choimetric import diagonal_algebra
    d2 = diagonal_algebra(2)
    d2.name = "diag2"
    alg = write(tmp_path, "d2.json", io.algebra_to_dict(d2))
    import numpy as np
    f = write(tmp_path, "f.json", io.channel_to_dict(
        __import__("choimetric").ChannelMap(
            d2, d2, np.array([[0.7, 0.3], [0.3, 0.7]], dtype=complex))))
    g = write(tmp_path, "g.json", io.channel_to_dict(
        __import__("choimetric").ChannelMap(
            d2, d2, np.array([[0.2, 0.8], [0.8, 0.2]], dtype=complex))))
    x = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
    t = write(tmp_path, "t.json", {"algebra": "diag2", "hilbert_dim": 2,
                                   "rep": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
                                           [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]],
                                   "dirac": x, "grading": None})
    assert main(["dl", "--channel", f, "--channel2", g, "--triple", t,
                 "--algebras", alg, "--starts", "4"]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert rec["value"] > 0
    # stabilized path with the operator-norm family
    assert main(["dl", "--channel", f, "--channel2", g, "--algebras", alg,
                 "--m-max", "2", "--starts", "2"]) == 0
    rec2 = json.loads(capsys.readouterr().out.strip())
    assert rec2["status"] == "lower_bound" and len(rec2["per_m"]) == 2
