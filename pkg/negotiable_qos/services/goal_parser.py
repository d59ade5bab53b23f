"""
Parser for negotiable maintenance goal sentences.

    stmt := plist "is high priority"
          | plist "is less than" quantity
          | plist "is greater than" quantity
          | "if" plist "upgrades by" pct "then" plist "degrades by" pct

Sentences end with '.', except a '.' between two digits which is a decimal point.
Case and whitespace are insignificant. Parameter names are kept as normalized text and
unit tokens are kept raw; resolve() binds both to the parameter catalog.
"""

import re
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from ..errors import EmptyList, GoalSyntaxError, PolarityMismatch, UnitMismatch
from ..models.goal import Conditional, GoalStatement, GreaterThan, HighPriority, LessThan, Quantity, ResolvedGoal
from ..models.parameter import ParameterCatalog, Polarity

SENTENCE_SPLIT = re.compile(r"(?<!\d)\.|\.(?!\d)")
TOKEN_PATTERN = re.compile(r"\d+(?:\.\d+)?|[^\W\d][\w\-]*|%|,|\S")
NUMBER_PATTERN = re.compile(r"^\d+(?:\.\d+)?$")
WORD_PATTERN = re.compile(r"^[^\W\d][\w\-]*$")
VERB_STARTS = ("high", "less", "greater")
END = "<end of sentence>"


def split_sentences(text: str) -> List[str]:
    return [s.strip() for s in SENTENCE_SPLIT.split(text) if s.strip()]


def tokenize(sentence: str) -> List[str]:
    return TOKEN_PATTERN.findall(sentence.lower())


def parse_goals(text: str) -> List[GoalStatement]:
    """Parses goal text into statements, preserving sentence order."""
    return [_SentenceParser(index, tokenize(sentence)).parse()
            for index, sentence in enumerate(split_sentences(text))]


class _SentenceParser:
    def __init__(self, index: int, tokens: List[str]):
        self.index = index
        self.tokens = tokens

    def error(self, position: int, reason: str = "unexpected token") -> GoalSyntaxError:
        token = self.tokens[position] if position < len(self.tokens) else END
        return GoalSyntaxError(self.index, token, reason)

    def parse(self) -> GoalStatement:
        if self.tokens and self.tokens[0] == "if":
            return self._conditional()
        return self._comparison()

    def _comparison(self) -> GoalStatement:
        verb = self._find_verb()
        params = self._plist(0, verb)
        rest = verb + 1
        kind = self.tokens[rest]
        if kind == "high":
            self._expect(rest + 1, "priority")
            self._expect_end(rest + 2)
            return HighPriority(params)
        self._expect(rest + 1, "than")
        value, end = self._quantity(rest + 2)
        self._expect_end(end)
        if kind == "less":
            return LessThan(params, value)
        return GreaterThan(params, value)

    def _conditional(self) -> Conditional:
        upgrades = self._find("upgrades", 1)
        first = self._plist(1, upgrades)
        self._expect(upgrades + 1, "by")
        first_value, position = self._percentage(upgrades + 2)
        self._expect(position, "then")
        degrades = self._find("degrades", position + 1)
        second = self._plist(position + 1, degrades)
        self._expect(degrades + 1, "by")
        second_value, position = self._percentage(degrades + 2)
        self._expect_end(position)
        return Conditional(first, first_value, second, second_value)

    def _find_verb(self) -> int:
        for i, token in enumerate(self.tokens[:-1]):
            if token == "is" and self.tokens[i + 1] in VERB_STARTS:
                return i
        for i, token in enumerate(self.tokens):
            if token == "is":
                raise self.error(i + 1, "unknown goal form at")
        for i, token in enumerate(self.tokens):
            if not (WORD_PATTERN.match(token) or token == ","):
                raise self.error(i, "expected 'is' before")
        raise self.error(len(self.tokens), "expected 'is' before")

    def _find(self, keyword: str, start: int) -> int:
        for i in range(start, len(self.tokens)):
            if self.tokens[i] == keyword:
                return i
        for i in range(start, len(self.tokens)):
            if not (WORD_PATTERN.match(self.tokens[i]) or self.tokens[i] == ","):
                raise self.error(i, f"expected '{keyword}' before")
        raise self.error(len(self.tokens), f"expected '{keyword}' before")

    def _plist(self, start: int, stop: int) -> Tuple[str, ...]:
        if start >= stop:
            raise EmptyList(self.index)
        names: List[str] = []
        words: List[str] = []
        for i in range(start, stop + 1):
            token = self.tokens[i] if i < stop else ","
            if token == ",":
                if not words:
                    raise EmptyList(self.index)
                name = " ".join(words)
                if name in names:
                    raise GoalSyntaxError(self.index, name, "duplicate parameter")
                names.append(name)
                words = []
            elif WORD_PATTERN.match(token):
                words.append(token)
            else:
                raise self.error(i)
        return tuple(names)

    def _quantity(self, position: int) -> Tuple[Quantity, int]:
        magnitude = self._number(position)
        unit = ""
        following = position + 1
        if following < len(self.tokens) and (self.tokens[following] == "%" or WORD_PATTERN.match(self.tokens[following])):
            unit = self.tokens[following]
            following += 1
        return Quantity(magnitude, unit), following

    def _percentage(self, position: int) -> Tuple[Fraction, int]:
        value = self._number(position)
        if value <= 0:
            raise self.error(position, "percentage must be positive, got")
        following = position + 1
        if following < len(self.tokens) and self.tokens[following] == "%":
            following += 1
        return value, following

    def _number(self, position: int) -> Fraction:
        if position >= len(self.tokens) or not NUMBER_PATTERN.match(self.tokens[position]):
            raise self.error(position, "expected a number, got")
        return Fraction(self.tokens[position])

    def _expect(self, position: int, keyword: str) -> None:
        if position >= len(self.tokens) or self.tokens[position] != keyword:
            raise self.error(position, f"expected '{keyword}', got")

    def _expect_end(self, position: int) -> None:
        if position < len(self.tokens):
            raise self.error(position)


def format_goal(statement: GoalStatement) -> str:
    """Renders a statement back into goal text; parse_goals(format_goal(s)) == [s]."""
    if isinstance(statement, HighPriority):
        return f"{', '.join(statement.params)} is high priority."
    if isinstance(statement, LessThan):
        return f"{', '.join(statement.params)} is less than {statement.value}."
    if isinstance(statement, GreaterThan):
        return f"{', '.join(statement.params)} is greater than {statement.value}."
    return (f"If {', '.join(statement.first_params)} upgrades by {_percent(statement.first_value)} "
            f"then {', '.join(statement.second_params)} degrades by {_percent(statement.second_value)}.")


def format_goals(statements: Iterable[GoalStatement]) -> str:
    return " ".join(format_goal(s) for s in statements)


def _percent(value: Fraction) -> str:
    return f"{Quantity(value)}%"


def resolve(goals: Sequence[GoalStatement], catalog: ParameterCatalog) -> List[ResolvedGoal]:
    """Binds names to parameter ids and converts quantities to canonical units."""
    return [_resolve_statement(statement, catalog) for statement in goals]


def _resolve_names(names: Sequence[str], catalog: ParameterCatalog) -> Tuple[str, ...]:
    ids: List[str] = []
    for name in names:
        parameter_id = catalog.lookup(name).id
        if parameter_id not in ids:
            ids.append(parameter_id)
    return tuple(ids)


def _resolve_threshold(ids: Tuple[str, ...], value: Quantity, catalog: ParameterCatalog,
                       comparator: str, polarity: Polarity) -> Quantity:
    converted = None
    for parameter_id in ids:
        parameter = catalog.get(parameter_id)
        if parameter.polarity is not polarity:
            raise PolarityMismatch(parameter_id, comparator, parameter.polarity.value)
        candidate = Quantity(value.magnitude * parameter.conversion_factor(value.unit), parameter.canonical_unit)
        if converted is not None and candidate != converted:
            raise UnitMismatch(parameter_id, value.unit or "<canonical>")
        converted = candidate
    return converted


def _resolve_statement(statement: GoalStatement, catalog: ParameterCatalog) -> ResolvedGoal:
    if isinstance(statement, HighPriority):
        return HighPriority(_resolve_names(statement.params, catalog))
    if isinstance(statement, LessThan):
        ids = _resolve_names(statement.params, catalog)
        return LessThan(ids, _resolve_threshold(ids, statement.value, catalog, "is less than", Polarity.NEGATIVE))
    if isinstance(statement, GreaterThan):
        ids = _resolve_names(statement.params, catalog)
        return GreaterThan(ids, _resolve_threshold(ids, statement.value, catalog, "is greater than", Polarity.POSITIVE))
    return Conditional(
        _resolve_names(statement.first_params, catalog), statement.first_value,
        _resolve_names(statement.second_params, catalog), statement.second_value,
    )
