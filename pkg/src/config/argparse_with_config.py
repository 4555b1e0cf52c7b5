import argparse
from operator import attrgetter
from pathlib import Path

import simple_parsing
from simple_parsing import DashVariant

from src.config.config_defaults import ConfigDefault


class ArgParseWithConfig(simple_parsing.ArgumentParser):
    """Class which connects the ConfigDefault class and argparse.

    Every field in ConfigDefault will become exposed via the argparse. Values given on the command
    line take precedence over the `--config` file, which takes precedence over bundled defaults.
    """

    config_dest_str = "Config arguments"
    script_dest_group = "Script arguments"

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(
            add_option_string_dash_variants=DashVariant.DASH, *args, **kwargs
        )

        self.add_arguments(
            ConfigDefault,
            dest=ArgParseWithConfig.config_dest_str,
        )
        self.additional_args_group = self.add_argument_group(
            ArgParseWithConfig.script_dest_group
        )
        self.additional_args_group.add_argument(
            "--config",
            type=Path,
            default=None,
            help="Config file with one `key = value` entry per line.",
        )

    def add_argument(self, *name_or_flags: str, **kwargs):
        return self.additional_args_group.add_argument(*name_or_flags, **kwargs)

    def parse_args(
        self,
        *n_args,
        **kwargs,
    ) -> tuple[argparse.Namespace, ConfigDefault]:
        args = super().parse_args(*n_args, **kwargs)
        # Extract Config from args
        config: ConfigDefault = getattr(args, ArgParseWithConfig.config_dest_str)

        # Remove Config from args
        delattr(args, ArgParseWithConfig.config_dest_str)

        if args.config is not None:
            config.update_from_file(args.config)

        # Apply after_init
        config.after_init()

        args_dict: dict[str, argparse.Namespace] = {}
        for group in self._action_groups:
            group_dict = {
                a.dest: getattr(args, a.dest, None) for a in group._group_actions
            }
            if group.title:
                args_dict[group.title] = argparse.Namespace(**group_dict)

        args = args_dict[ArgParseWithConfig.script_dest_group]
        return args, config


class SortingHelpFormatter(
    simple_parsing.SimpleHelpFormatter, argparse.RawTextHelpFormatter
):
    """Alphabetically sort --help."""

    def add_arguments(self, actions):
        actions = sorted(actions, key=attrgetter("option_strings"))
        super().add_arguments(actions)


def test_args_parse_with_config():
    fake_cli_args = ["--my-cool-arg", "3", "--city", "Quezon", "--decimals", "3"]
    parser = ArgParseWithConfig()
    parser.add_argument("--my-cool-arg", type=int, default=3)
    args, config = parser.parse_args(fake_cli_args)
    assert args.my_cool_arg == 3
    assert args.config is None
    assert config.city == "Quezon"
    assert config.decimals == 3


def test_cli_overrides_config_file(tmp_path):
    config_file = Path(tmp_path, "run.conf")
    config_file.write_text("city = Manila\ndecimals = 4\n", encoding="utf-8")
    parser = ArgParseWithConfig()
    args, config = parser.parse_args(
        ["--config", str(config_file), "--city", "Quezon"]
    )
    assert config.city == "Quezon"
    assert config.decimals == 4
