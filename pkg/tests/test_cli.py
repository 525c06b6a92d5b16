import json

import pytest

from cyclerules.cli import main
from cyclerules.rdfio import PREDICTIONS_HEADER, RULES_HEADER
from cyclerules.synthetic import family_kb
from cyclerules.rdfio import write_ntriples


@pytest.fixture
def family_nt(tmp_path):
    kb = family_kb(5)
    path = tmp_path / "family.nt"
    with open(path, "w") as fh:
        write_ntriples(kb, kb.facts, fh)
        for e, ts in sorted(kb.type_of.items()):
            for t in sorted(ts):
                fh.write(f"<{kb.entities[e]}> <rdf:type> <{kb.types[t]}> .\n")
    return path


def test_pipeline_writes_artifacts(tmp_path, family_nt, capsys):
    out = tmp_path / "out"
    rc = main([
        "pipeline", str(family_nt), "--out-dir", str(out), "--min-support", "2",
        "--holdout", "0.4", "--with-types", "--threads", "2",
    ])
    assert rc == 0
    assert (out / "rules.tsv").read_text().splitlines()[0] == RULES_HEADER
    assert (out / "predictions.tsv").read_text().splitlines()[0] == PREDICTIONS_HEADER
    ev = json.loads((out / "evaluation.json").read_text())
    assert set(ev) == {"holdout_fraction", "predictions", "hits", "rules_used"}
    report = json.loads((out / "report.json").read_text())
    assert report["counts"]["rules"] > 0 and "typeOf" in (out / "rules.tsv").read_text()
    assert "mine" in capsys.readouterr().err


def test_missing_input_fails_without_outputs(tmp_path):
    out = tmp_path / "out"
    assert main(["pipeline", str(tmp_path / "nope.nt"), "--out-dir", str(out)]) == 1
    assert not out.exists()


def test_stages_compose(tmp_path, family_nt):
    cycles, rules, preds = tmp_path / "c.tsv", tmp_path / "r.tsv", tmp_path / "p.tsv"
    assert main(["mine", str(family_nt), "-o", str(cycles), "--with-types"]) == 0
    assert main(["score", str(family_nt), "--cycles", str(cycles), "-o", str(rules)]) == 0
    assert main(["predict", str(family_nt), "--rules", str(rules), "-o", str(preds), "--top-n", "5"]) == 0
    text = rules.read_text().splitlines()
    assert len(text) > 1
    assert preds.read_text().splitlines()[0] == PREDICTIONS_HEADER
    ev = tmp_path / "e.json"
    assert main(["eval", "--predictions", str(preds), "--test", str(family_nt), "-o", str(ev)]) == 0
    assert json.loads(ev.read_text())["hits"] == 0  # predictions are never training facts


def test_identical_config_identical_bytes(tmp_path, family_nt):
    outs = []
    for i, threads in enumerate(("1", "3")):
        out = tmp_path / f"o{i}"
        main(["pipeline", str(family_nt), "--out-dir", str(out), "--holdout", "0.3", "--threads", threads])
        outs.append(((out / "rules.tsv").read_bytes(), (out / "predictions.tsv").read_bytes()))
    assert outs[0] == outs[1]


def test_bad_option_values(tmp_path, family_nt):
    assert main(["pipeline", str(family_nt), "--out-dir", str(tmp_path), "--min-support", "0"]) == 1
    with pytest.raises(SystemExit):
        main(["pipeline", str(family_nt), "--out-dir", str(tmp_path), "--confidence", "max"])
