import json
from fractions import Fraction

import pytest

from fingen import io
from fingen.cli import RunConfig, main, run
from fingen.errors import DomainError
from fingen.fixtures import (
    cyclic_action,
    pointwise_partition,
    random_induced_spec,
    random_partition,
    random_transitive_action,
)


def write_system(path, action, partition=None):
    path.write_text(json.dumps(io.system_dict(action, partition)))
    return str(path)


@pytest.fixture
def cyclic12(tmp_path):
    action = cyclic_action(12)
    return write_system(tmp_path / "c12.json", action, pointwise_partition(action))


def test_verify_pointwise(cyclic12, capsys):
    assert main(["verify", "--input", cyclic12]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["generating"] is True and out["agree"] is True


def test_verify_reports_witness(tmp_path, capsys):
    action = cyclic_action(6)
    path = write_system(tmp_path / "s.json", action, random_partition(action, 1, 0))
    main(["verify", "-i", path])
    out = json.loads(capsys.readouterr().out)
    assert out["generating"] is False
    assert out["join"]["witness"] is not None and out["pairs"]["witness"] is not None


def test_entropy(cyclic12, capsys):
    main(["entropy", "-i", cyclic12])
    out = json.loads(capsys.readouterr().out)
    assert out["entropy"] == pytest.approx(2.4849066497880004, abs=1e-9)


def test_synthesize_report(cyclic12, tmp_path):
    out_path = tmp_path / "report.json"
    assert main(["synthesize", "-i", cyclic12, "-o", str(out_path), "--self-check", "--trace"]) == 0
    report = json.loads(out_path.read_text())
    assert report["max_R"] <= report["C"] + 2
    assert report["generating"] == {"join": True, "pairs": True}
    assert len(report["R"]) == 12
    assert set("".join(report["R"])) <= set("1234")
    assert report["tail_threshold"] == "1/4"


def test_roundtrip(tmp_path, capsys):
    action = random_transitive_action(64, 2, 21)
    weights = [0.9 ** i for i in range(30)]
    path = write_system(tmp_path / "r.json", action, random_partition(action, 30, 21, weights))
    assert main(["roundtrip", "-i", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["decode == L"] is True


def test_demo_is_deterministic(capsys):
    main(["demo", "--seed", "5"])
    first = capsys.readouterr().out
    main(["demo", "--seed", "5"])
    assert capsys.readouterr().out == first
    assert "|alpha|" in json.loads(first)["summary"]


def test_tail_threshold_flag(cyclic12, capsys):
    main(["synthesize", "-i", cyclic12, "--tail-threshold", "1/8"])
    assert json.loads(capsys.readouterr().out)["tail_threshold"] == "1/8"


def test_induced_system_file(tmp_path, capsys):
    spec = random_induced_spec(3, 2, 2, 0, mode="random")
    path = tmp_path / "ind.json"
    path.write_text(json.dumps({"induced": spec.as_dict(), "partition": list(range(6))}))
    status = main(["verify", "-i", str(path)])
    out = capsys.readouterr()
    if status == 0:
        assert json.loads(out.out)["generating"] is True
    else:
        assert json.loads(out.err)["error"] == "NonErgodic"


def test_errors_are_machine_readable(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "-i", str(bad)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "ParseError"

    nonerg = tmp_path / "ne.json"
    nonerg.write_text(json.dumps({"points": 2, "generators": [[0, 1]], "partition": [0, 1]}))
    assert main(["synthesize", "-i", str(nonerg)]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "NonErgodic"

    notgen = tmp_path / "ng.json"
    notgen.write_text(json.dumps({"points": 4, "generators": [[1, 2, 3, 0]], "partition": [0, 1, 0, 1]}))
    assert main(["synthesize", "-i", str(notgen)]) == 3
    assert json.loads(capsys.readouterr().err)["error"] == "NotGenerating"

    nopart = tmp_path / "np.json"
    nopart.write_text(json.dumps({"points": 2, "generators": [[1, 0]]}))
    assert main(["entropy", "-i", str(nopart)]) == 2


def test_run_config_validation():
    with pytest.raises(DomainError):
        run(RunConfig("verify"))
    with pytest.raises(DomainError):
        run(RunConfig("demo", tail_threshold=Fraction(1)))
