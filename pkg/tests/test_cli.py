"""End to end runs of the command line on the bundled data."""
import json
from pathlib import Path

import pandas as pd
import pytest

from src.config.config_defaults import PATH_DATA
from src.inference.cli import EXIT_GOLDEN_FAILURE, EXIT_INVALID_INPUT, EXIT_OK, main
from src.inference.metrics import AVERAGE_ROW
from src.inference.polarity_map import map_file_name, read_polarity_map
from tests.conftest import FIXED_CLOCK


def run(command: str, out: Path, *args: str) -> int:
    return main([command, "--out", str(out), "--fixed-clock", FIXED_CLOCK, *args])


@pytest.mark.slow
def test_analyze_quezon(tmp_path):
    assert run("analyze", tmp_path, "--city", "quezon") == EXIT_OK

    polarity_map = read_polarity_map(Path(tmp_path, map_file_name("Quezon")))
    assert polarity_map.city == "Quezon"
    assert polarity_map.generated_at == FIXED_CLOCK
    names = [f.name for f in polarity_map.features]
    assert names == sorted(names)
    assert "Quezon" not in names

    road = polarity_map.feature("Road")
    assert road.term == "SN"
    assert road.display_value == "0.21"
    assert road.sentence_count == 6
    assert [(c.name, c.reason) for c in road.causes] == [("Accident", "cause-of-jam")]
    assert polarity_map.feature("Accident").term == "SN"
    assert polarity_map.feature("Location").term == "SP"
    assert "TrafficIsJammedBy(Road, Accident)" in polarity_map.derived_facts
    assert polarity_map.incomplete_sentences == 3
    assert polarity_map.city_polarity.term == "Neg"
    assert not Path(tmp_path, map_file_name("New York")).exists()


@pytest.mark.slow
def test_analyze_writes_one_map_per_city(tmp_path):
    assert run("analyze", tmp_path) == EXIT_OK
    assert sorted(p.name for p in tmp_path.glob("polarity_map_*.json")) == [
        "polarity_map_new-york.json",
        "polarity_map_quezon.json",
    ]
    new_york = read_polarity_map(Path(tmp_path, "polarity_map_new-york.json"))
    assert new_york.feature("Subway").term == "SN"
    assert new_york.feature("Hotel").term == "SP"


@pytest.mark.slow
def test_analyze_is_deterministic_across_workers(tmp_path):
    single, threaded = Path(tmp_path, "single"), Path(tmp_path, "threaded")
    assert run("analyze", single, "--num-workers", "1") == EXIT_OK
    assert run("analyze", threaded, "--num-workers", "8") == EXIT_OK
    for city in ["Quezon", "New York"]:
        name = map_file_name(city)
        assert Path(single, name).read_bytes() == Path(threaded, name).read_bytes()


def test_missing_ontology(tmp_path):
    missing = Path(tmp_path, "missing_ontology.txt")
    assert run("analyze", tmp_path, "--path-ontology", str(missing)) == EXIT_INVALID_INPUT
    assert not list(tmp_path.glob("polarity_map_*.json"))


def test_invalid_num_workers(tmp_path):
    assert run("analyze", tmp_path, "--num-workers", "0") == EXIT_INVALID_INPUT


def test_replicate(tmp_path):
    assert run("replicate", tmp_path) == EXIT_OK


def test_replicate_fails_with_other_ip(tmp_path):
    rules = Path(PATH_DATA, "replication_rules.txt").read_text(encoding="utf-8")
    tampered = Path(tmp_path, "replication_rules.txt")
    tampered.write_text(rules.replace("IP 0.25", "IP 0.3"), encoding="utf-8")
    assert (
        run("replicate", tmp_path, "--path-replication-rules", str(tampered))
        == EXIT_GOLDEN_FAILURE
    )


def test_replicate_ignores_configured_mf_bank(tmp_path):
    bank = Path(tmp_path, "mf_bank.txt")
    bank.write_text("term SN 0 0.5 1\n", encoding="utf-8")
    assert run("replicate", tmp_path, "--path-mf-bank", str(bank)) == EXIT_OK


@pytest.mark.slow
def test_eval_writes_metrics(tmp_path):
    assert run("eval", tmp_path) == EXIT_OK

    df = pd.read_csv(Path(tmp_path, "metrics.csv"))
    assert list(df.columns) == ["feature", "P", "R", "Ac", "FM"]
    assert df["feature"].iloc[-1] == AVERAGE_ROW
    assert {"Road", "Accident", "Safety"} <= set(df["feature"])
    assert Path(tmp_path, "metrics.txt").read_text(encoding="utf-8").strip()


def test_only_irrelevant_documents(tmp_path):
    corpus = Path(tmp_path, "corpus.jsonl")
    movie = {
        "id": "qc-017",
        "text": "Watching the new traffic movie in Quezon tonight.",
        "source": "tweet",
        "city": "Quezon",
    }
    corpus.write_text(json.dumps(movie) + "\n", encoding="utf-8")
    assert run("analyze", tmp_path, "--path-corpus", str(corpus)) == EXIT_OK

    polarity_map = read_polarity_map(Path(tmp_path, map_file_name("Quezon")))
    assert polarity_map.features == []
    assert polarity_map.city_polarity.term == "undetermined"
    assert polarity_map.derived_facts == []


def test_config_file(tmp_path):
    config = Path(tmp_path, "run.conf")
    config.write_text(f"city = Quezon\ndecimals = 3\nout = {tmp_path}\n", encoding="utf-8")
    assert main(["analyze", "--config", str(config), "--fixed-clock", FIXED_CLOCK]) == EXIT_OK
    road = read_polarity_map(Path(tmp_path, map_file_name("Quezon"))).feature("Road")
    assert road.display_value == "0.214"
