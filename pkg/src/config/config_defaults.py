"""Default global config.

Important: 0 dependencies except to enums, exceptions and log!
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import pyrootutils
from simple_parsing.helpers import Serializable

from src.config.logger import log
from src.utils.utils_exceptions import InvalidArgument, MissingInputFile
from src.utils.utils_functions import is_iso8601, read_data_lines

# Recorded only: queries with recall above this were kept when the query list was built
QUERY_RECALL_THRESHOLD = 0.85

DEFAULT_DECIMALS = 2
DEFAULT_NUM_WORKERS = 1

PATH_WORKDIR = Path(pyrootutils.find_root(search_from=__file__, indicator=".project-root"))
PATH_DATA = Path(PATH_WORKDIR, "data")

# field name -> bundled file name
BUNDLED_FILES = {
    "path_corpus": "demo_corpus.jsonl",
    "path_queries": "queries.txt",
    "path_weights": "weights.tsv",
    "path_ontology": "ontology.txt",
    "path_sentiwordnet": "sentiwordnet.tsv",
    "path_positive_words": "positive_words.txt",
    "path_negative_words": "negative_words.txt",
    "path_positive_phrases": "positive_phrases.txt",
    "path_neutral_phrases": "neutral_phrases.txt",
    "path_negative_phrases": "negative_phrases.txt",
    "path_tag_lexicon": "tag_lexicon.tsv",
    "path_stopwords": "stopwords.txt",
    "path_mf_bank": "mf_bank.txt",
    "path_fuzzy_rules": "fuzzy_rules.txt",
    "path_causal_rules": "causal_rules.txt",
    "path_speed_table": "speed_table.txt",
    "path_replication_rules": "replication_rules.txt",
}

# Inputs which have to exist for `analyze` and `eval`
ANALYSIS_INPUTS = [k for k in BUNDLED_FILES if k != "path_replication_rules"]

# Inputs which have to exist for `replicate`
REPLICATION_INPUTS = ["path_replication_rules", "path_causal_rules"]


def create(arg, **kwargs):
    """We need this helper function since mutable and None defaults have to go through
    default_factory in ConfigDefault."""
    return field(default_factory=lambda: arg, **kwargs)


def default_path(path: Path | None, default_value: Path, create_if_none=False):
    """Return default value if object is none."""

    if path is not None:  # return explicit path
        return path

    if create_if_none:  # create and return default value
        default_value.mkdir(parents=True, exist_ok=True)
        return default_value

    return default_value


@dataclass
class ConfigDefault(Serializable):
    path_workdir: Path = create(PATH_WORKDIR)
    """Path to the root of the project."""

    path_corpus: Path | None = create(None)
    """Corpus file, one JSON document per line."""

    path_queries: Path | None = create(None)
    """Boolean keyword queries, one per line."""

    path_weights: Path | None = create(None)
    """Relevance weights, `stem<TAB>weight` lines."""

    path_ontology: Path | None = create(None)
    path_sentiwordnet: Path | None = create(None)
    path_positive_words: Path | None = create(None)
    path_negative_words: Path | None = create(None)
    path_positive_phrases: Path | None = create(None)
    path_neutral_phrases: Path | None = create(None)
    path_negative_phrases: Path | None = create(None)
    path_tag_lexicon: Path | None = create(None)
    path_stopwords: Path | None = create(None)

    path_mf_bank: Path | None = create(None)
    """Membership function bank, `term <name> <a> <b> <c> [shoulder-left|shoulder-right]`."""

    path_fuzzy_rules: Path | None = create(None)
    path_causal_rules: Path | None = create(None)

    path_speed_table: Path | None = create(None)
    """Speed words and the scalar ranges of the speed terms."""

    path_replication_rules: Path | None = create(None)
    """Rules and membership overrides of the worked road/accident example."""

    out: Path | None = create(None)
    """Output directory."""

    city: str | None = create(None)
    """Analyze only documents of this city (case-insensitive)."""

    decimals: int | None = create(None)
    """Number of decimals in displayed values."""

    num_workers: int | None = create(None)
    """Number of threads used for per-document stages."""

    fixed_clock: str | None = create(None)
    """ISO-8601 timestamp written as generated_at instead of the current time."""

    def after_init(self):
        """This function sets defaults, dynamically changes some of the arguments based on other
        arguments."""

        path_data = Path(self.path_workdir, "data")
        for field_name, file_name in BUNDLED_FILES.items():
            value = getattr(self, field_name)
            setattr(self, field_name, default_path(value, Path(path_data, file_name)))

        self.out = default_path(
            self.out, Path(self.path_workdir, "outputs"), create_if_none=True
        )
        self.out.mkdir(parents=True, exist_ok=True)

        if self.decimals is None:
            self.decimals = DEFAULT_DECIMALS
        if self.num_workers is None:
            self.num_workers = DEFAULT_NUM_WORKERS

        if self.decimals < 0:
            raise InvalidArgument(f"--decimals has to be >= 0, got {self.decimals}")
        if self.num_workers < 1:
            raise InvalidArgument(
                f"--num-workers has to be >= 1, got {self.num_workers}"
            )
        if self.fixed_clock is not None and not is_iso8601(self.fixed_clock):
            raise InvalidArgument(
                f"--fixed-clock has to be an ISO-8601 timestamp, got {self.fixed_clock}"
            )

    def update_from_file(self, config_path: Path):
        """Fills fields which are still unset with `key = value` entries of a config file.

        Relative paths are resolved against the config file's directory. Values given on the
        command line are never overwritten.
        """
        config_path = Path(config_path)
        if not config_path.is_file():
            raise MissingInputFile(config_path, "--config")

        field_names = {f.name for f in fields(self)}
        for line_number, line in read_data_lines(config_path):
            if "=" not in line:
                raise InvalidArgument(
                    f"{config_path} line {line_number}: expected `key = value`"
                )
            key, value = (s.strip() for s in line.split("=", 1))
            name = key if key in field_names else f"path_{key}"
            if name not in field_names or name == "path_workdir":
                raise InvalidArgument(
                    f"{config_path} line {line_number}: unknown key {key!r}"
                )
            if getattr(self, name) is not None:
                log.debug(f"Config key {key} is set on the command line, skipping")
                continue
            setattr(self, name, self._parse_value(name, value, config_path.parent))

    @staticmethod
    def _parse_value(name: str, value: str, base_dir: Path):
        if name.startswith("path_") or name == "out":
            path = Path(value)
            return path if path.is_absolute() else Path(base_dir, path)
        if name in ("decimals", "num_workers"):
            try:
                return int(value)
            except ValueError:
                raise InvalidArgument(f"{name} has to be an integer, got {value!r}")
        return value

    def required_paths(self, field_names: list[str]):
        """Raises MissingInputFile for the first configured input which doesn't exist."""
        for field_name in field_names:
            path = getattr(self, field_name)
            if path is None or not Path(path).is_file():
                raise MissingInputFile(path, field_name)

    def validate_paths(self):
        self.required_paths(ANALYSIS_INPUTS)

    def __str__(self):
        return self.dumps_yaml(allow_unicode=True, default_flow_style=False)


def get_default_config():
    config = ConfigDefault()
    config.after_init()
    return config


def test_default_config_points_to_bundled_data():
    config = get_default_config()
    assert config.path_ontology == Path(PATH_DATA, "ontology.txt")
    assert config.decimals == 2
    assert config.num_workers == 1
    config.validate_paths()


def test_config_file_fills_unset_fields(tmp_path):
    config_file = Path(tmp_path, "run.conf")
    config_file.write_text(
        "# run config\nontology = my_ontology.txt\ncity = Quezon\nnum_workers = 4\n",
        encoding="utf-8",
    )
    config = ConfigDefault(city="Manila")
    config.update_from_file(config_file)
    config.after_init()
    assert config.path_ontology == Path(tmp_path, "my_ontology.txt")
    assert config.city == "Manila"
    assert config.num_workers == 4


def test_missing_input_names_the_path(tmp_path):
    config = ConfigDefault(path_ontology=Path(tmp_path, "missing.txt"))
    config.after_init()
    try:
        config.validate_paths()
    except MissingInputFile as e:
        assert "missing.txt" in str(e)
    else:
        raise AssertionError("MissingInputFile not raised")
