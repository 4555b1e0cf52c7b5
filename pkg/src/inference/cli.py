"""Command line entry point.

    python3 -m src.inference.cli analyze [--config run.conf] [--city Quezon] [--out outputs]
    python3 -m src.inference.cli eval
    python3 -m src.inference.cli replicate

Exit codes: 0 success, 1 a golden check failed, 2 invalid configuration or input data.
"""
from __future__ import annotations

import sys
from pathlib import Path

from src.config.argparse_with_config import ArgParseWithConfig, SortingHelpFormatter
from src.config.config_defaults import ConfigDefault
from src.config.logger import log
from src.enums.enums import Subcommand
from src.inference.metrics import evaluate, format_metrics_table, save_metrics_csv
from src.inference.pipeline import (
    analyze_corpus,
    build_polarity_map,
    corpus_cities,
    load_resources,
    stage,
)
from src.inference.polarity_map import (
    PolarityMap,
    format_polarity_map,
    map_file_name,
    write_polarity_map,
)
from src.inference.replicate import format_report, run_replication
from src.utils.utils_exceptions import (
    InvalidArgument,
    ReplicationFailure,
    StageError,
)
from src.utils.utils_functions import get_timestamp

EXIT_OK = 0
EXIT_GOLDEN_FAILURE = 1
EXIT_INVALID_INPUT = 2

METRICS_CSV = "metrics.csv"
METRICS_TXT = "metrics.txt"


def parse_args(argv: list[str] | None = None):
    parser = ArgParseWithConfig(
        description="Feature level polarity of a city from tweets, reviews and news.",
        formatter_class=SortingHelpFormatter,
    )
    parser.add_argument(
        "command",
        type=str,
        choices=[c.value for c in Subcommand],
        help="analyze writes the polarity maps, eval the metrics, replicate runs the golden checks.",
    )
    return parser.parse_args(argv)


def cmd_analyze(config: ConfigDefault) -> list[PolarityMap]:
    """One polarity map per city, or only for --city."""
    resources = load_resources(config)
    known = {c.lower(): c for c in corpus_cities(resources.corpus)}
    if config.city is not None:
        cities = [known.get(config.city.lower(), config.city)]
    else:
        cities = list(known.values())
    if not cities:
        log.warning("The corpus has no documents, no polarity map written")

    generated_at = get_timestamp(config.fixed_clock)
    maps = []
    for city in cities:
        analysis = analyze_corpus(resources, city, config.num_workers)
        with stage("emit"):
            polarity_map = build_polarity_map(analysis, city, config.decimals, generated_at)
            path = write_polarity_map(polarity_map, Path(config.out, map_file_name(city)))
        log.info(f"Wrote {path}")
        print(format_polarity_map(polarity_map))
        maps.append(polarity_map)
    return maps


def cmd_eval(config: ConfigDefault):
    resources = load_resources(config)
    analysis = analyze_corpus(resources, config.city, config.num_workers)
    documents = [
        d
        for d in resources.corpus
        if config.city is None or d.city.lower() == config.city.lower()
    ]
    with stage("eval"):
        table = evaluate(documents, analysis.predictions)
        save_metrics_csv(table, Path(config.out, METRICS_CSV))
        text = format_metrics_table(table, config.decimals)
        Path(config.out, METRICS_TXT).write_text(text + "\n", encoding="utf-8")
    log.info(f"Wrote {Path(config.out, METRICS_CSV)}")
    print(text)
    return table


def cmd_replicate(config: ConfigDefault):
    with stage("replicate"):
        results = run_replication(config)
    print(format_report(results))
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise ReplicationFailure(f"Failed checks: {', '.join(failed)}")
    return results


COMMANDS = {
    Subcommand.ANALYZE: cmd_analyze,
    Subcommand.EVAL: cmd_eval,
    Subcommand.REPLICATE: cmd_replicate,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args, config = parse_args(argv)
        COMMANDS[Subcommand(args.command)](config)
    except ReplicationFailure as e:
        log.error(str(e))
        return EXIT_GOLDEN_FAILURE
    except StageError as e:
        log.error(str(e))
        return EXIT_INVALID_INPUT
    except InvalidArgument as e:
        log.error(f"[config] {e}")
        return EXIT_INVALID_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
