from datetime import datetime, timezone
from decimal import ROUND_DOWN, Decimal
from pathlib import Path
from typing import Iterator


def read_data_lines(path: Path, comment="#") -> Iterator[tuple[int, str]]:
    """Yields (line number, stripped line) for every non-empty, non-comment line.

    Example:
        file content: "# header\\n\\nroad\\t0.5\\n"
        yields (3, "road\\t0.5")
    """
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith(comment):
                continue
            yield line_number, stripped


def format_value(value: float | None, decimals: int = 2) -> str:
    """Formats a polarity value for display. Digits past `decimals` are cut off.

    Example:
        value = 0.14594, decimals = 2
        returns "0.14"
    """
    if value is None:
        return "-"
    quantum = Decimal(1).scaleb(-decimals)
    return str(Decimal(repr(value)).quantize(quantum, rounding=ROUND_DOWN))


def get_timestamp(fixed_clock: str | None = None) -> str:
    """ISO-8601 timestamp in UTC, or the fixed clock if one is given."""
    if fixed_clock is not None:
        return fixed_clock
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def is_iso8601(value: str) -> bool:
    try:
        datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        return False
    return True


def test_format_value_cuts_digits():
    assert format_value(0.14594) == "0.14"
    assert format_value(0.0575, decimals=3) == "0.057"
    assert format_value(0.129) == "0.12"
    assert format_value(0.5) == "0.50"
    assert format_value(None) == "-"


def test_is_iso8601():
    assert is_iso8601("2020-01-01T00:00:00Z")
    assert not is_iso8601("yesterday")
