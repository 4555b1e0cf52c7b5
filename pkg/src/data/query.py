"""Boolean keyword queries.

Grammar: a comma separates top-level alternatives (OR), `AND` binds tighter than `OR` and
parentheses group. Operators are upper case; lower case `and`/`or` are ordinary words. Adjacent
words form one multi-word keyword which matches a contiguous run of tokens. Geo operands
(`radius:<value>`, `centroid:<lat>;<lon>`) are accepted and dropped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import pyparsing as pp

from src.utils.utils_exceptions import QuerySyntaxError

pp.ParserElement.enable_packrat()

_OPERATORS = ("AND", "OR")
_TEXT_TOKEN_PATTERN = re.compile(r"\w+(?:[-']\w+)*")


@dataclass(frozen=True)
class Keyword:
    text: str

    def __post_init__(self):
        normalized = " ".join(self.text.lower().split())
        if not normalized:
            raise ValueError("Keyword can't be empty.")
        object.__setattr__(self, "text", normalized)

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self.text.split(" "))


@dataclass(frozen=True)
class And:
    children: tuple[QueryAst, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And node needs at least 2 children.")


@dataclass(frozen=True)
class Or:
    children: tuple[QueryAst, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or node needs at least 2 children.")


QueryAst = Union[Keyword, And, Or]


class _GeoOperand:
    """Placeholder for a dropped radius/centroid operand."""


_GEO = _GeoOperand()


def _combine(node_cls, operands: list):
    children: list[QueryAst] = []
    for operand in operands:
        if operand is _GEO:
            continue
        if isinstance(operand, node_cls):
            children.extend(operand.children)
        else:
            children.append(operand)
    if not children:
        return _GEO
    if len(children) == 1:
        return children[0]
    return node_cls(tuple(children))


def _build_grammar() -> pp.ParserElement:
    and_op = pp.Keyword("AND")
    or_op = pp.Keyword("OR")

    geo = pp.Regex(r"(?i)(?:radius|centroid)[:=][^\s(),]+")
    geo.set_parse_action(lambda: _GEO)

    word = ~(and_op | or_op) + pp.Regex(r"[^\s(),]+")
    phrase = pp.OneOrMore(word)
    phrase.set_parse_action(lambda t: Keyword(" ".join(t)))

    expression = pp.infix_notation(
        geo | phrase,
        [
            (and_op, 2, pp.OpAssoc.LEFT, lambda t: _combine(And, t[0][0::2])),
            (or_op, 2, pp.OpAssoc.LEFT, lambda t: _combine(Or, t[0][0::2])),
        ],
        lpar=pp.Suppress("("),
        rpar=pp.Suppress(")"),
    )
    query = pp.delimited_list(expression, delim=",")
    query.set_parse_action(lambda t: _combine(Or, list(t)))
    return query


_GRAMMAR = _build_grammar()


def _check_structure(text: str):
    """Reports unbalanced parentheses and dangling operators with their positions."""
    depth = 0
    open_positions = []
    for i, char in enumerate(text):
        if char == "(":
            depth += 1
            open_positions.append(i)
        elif char == ")":
            if depth == 0:
                raise QuerySyntaxError("unbalanced ')'", i)
            depth -= 1
            open_positions.pop()
    if depth != 0:
        raise QuerySyntaxError("unbalanced '('", open_positions[-1])

    stripped = text.rstrip()
    last_word = stripped.split()[-1] if stripped.split() else ""
    if last_word in _OPERATORS or stripped.endswith(","):
        operator = "," if stripped.endswith(",") else last_word
        raise QuerySyntaxError(
            f"dangling operator {operator!r} at end of input", len(text)
        )
    leading = text.lstrip()
    first_word = leading.split()[0] if leading.split() else ""
    if first_word in _OPERATORS or leading.startswith(","):
        raise QuerySyntaxError(
            "dangling operator at start of input", len(text) - len(leading)
        )


def parse_query(text: str) -> QueryAst:
    """Parses a query into its AST.

    Example:
        text = "accident AND (car OR vehicle)"
        returns And((Keyword("accident"), Or((Keyword("car"), Keyword("vehicle")))))
    """
    if not text.strip():
        raise QuerySyntaxError("empty query", 0)
    _check_structure(text)
    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise QuerySyntaxError(e.msg, e.loc)
    ast = result[0]
    if ast is _GEO:
        raise QuerySyntaxError("query has no keyword operand", 0)
    return ast


def print_query(ast: QueryAst) -> str:
    """Canonical text form of a query, parse_query(print_query(q)) prints the same."""
    if isinstance(ast, Keyword):
        return ast.text
    if isinstance(ast, And):
        parts = []
        for child in ast.children:
            printed = print_query(child)
            parts.append(f"({printed})" if isinstance(child, Or) else printed)
        return " AND ".join(parts)
    return " OR ".join(print_query(child) for child in ast.children)


def text_tokens(text: str) -> tuple[str, ...]:
    """Lowercased whole-word tokens of raw text; `#`, `@` and punctuation split tokens."""
    return tuple(t.lower() for t in _TEXT_TOKEN_PATTERN.findall(text))


def _contains_run(tokens: tuple[str, ...], words: tuple[str, ...]) -> bool:
    n = len(words)
    return any(tokens[i : i + n] == words for i in range(len(tokens) - n + 1))


def match_tokens(ast: QueryAst, tokens: tuple[str, ...]) -> bool:
    if isinstance(ast, Keyword):
        return _contains_run(tokens, ast.words)
    if isinstance(ast, And):
        return all(match_tokens(child, tokens) for child in ast.children)
    return any(match_tokens(child, tokens) for child in ast.children)


def match_query(q: QueryAst, doc) -> bool:
    """True iff the document's raw text satisfies the query. Keywords match whole tokens,
    case-insensitive, before any stemming."""
    return match_tokens(q, text_tokens(doc.text))


def test_parse_query_precedence():
    ast = parse_query("accident AND (car OR vehicle)")
    assert ast == And((Keyword("accident"), Or((Keyword("car"), Keyword("vehicle")))))
    assert parse_query("a AND b OR c") == Or((And((Keyword("a"), Keyword("b"))), Keyword("c")))
    assert parse_query("traffic") == Keyword("traffic")


def test_parse_query_comma_is_top_level_or():
    ast = parse_query("traffic AND accident, car AND collision")
    assert ast == Or(
        (
            And((Keyword("traffic"), Keyword("accident"))),
            And((Keyword("car"), Keyword("collision"))),
        )
    )


def test_parse_query_phrases_and_geo_operands():
    ast = parse_query("road closed AND radius:10km, centroid:14.6;121.0 OR Accident")
    assert ast == Or((Keyword("road closed"), Keyword("accident")))


def test_parse_query_errors():
    for text, position in [("car AND", 7), ("(car OR bus", 0), ("car)", 3), ("OR car", 0)]:
        try:
            parse_query(text)
        except QuerySyntaxError as e:
            assert e.position == position, (text, e.position)
        else:
            raise AssertionError(f"{text!r} should not parse")


def test_match_query_whole_tokens():
    q = parse_query("accident AND (car OR vehicle)")

    @dataclass
    class _Doc:
        text: str

    assert match_query(q, _Doc("Car accident on highway 5"))
    assert not match_query(q, _Doc("sunny day in the park"))
    assert not match_query(Keyword("car"), _Doc("cars everywhere"))
    assert match_query(Keyword("road closed"), _Doc("The road closed at 5"))
    assert not match_query(Keyword("road closed"), _Doc("closed road"))


def test_print_query_parenthesizes_or_inside_and():
    ast = And((Or((Keyword("car"), Keyword("bus"))), Keyword("crash")))
    printed = print_query(ast)
    assert printed == "(car OR bus) AND crash"
    assert print_query(parse_query(printed)) == printed
