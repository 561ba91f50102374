"""Textual grammars for ordinals, families, vectors, measures and spaces.

Every printer in the package produces text these grammars accept, e.g.
``w^{2}+3``, ``comb(A(2),S(w))``, ``gen(prefix=[1,4],start=9,step=2)``,
``[1:1/2,4:-2]``, ``{3:1/3,4:1/3,5:1/3}``, ``baernstein(S(1),p=2)``,
``mixed(base=A(2),theta=1/2)`` and ``1/sqrt(3)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Any, Callable

import pyparsing as pp

from .family import A, Comb, Drv, Family, FinSet, Pre, S, SetGen, EVENS, NAT, as_finset
from .norms import (
    Baernstein,
    ExplicitLayers,
    GeometricRule,
    LayeredRule,
    Mixed,
    Schreier,
    SpaceSpec,
    Vector,
)
from .numeric import Threshold
from .ordinal import ONE, Ordinal, add, from_terms, of_int
from .ravg import ProbMeasure
from .szlenk import FunctionalFamily


class GrammarError(ValueError):
    """Raised when text does not parse; ``column`` is 1-based."""

    def __init__(self, message: str, text: str = "", column: int = 1):
        super().__init__(message)
        self.text = text
        self.column = column

    def __str__(self) -> str:
        base = super().__str__()
        return f"{base} (column {self.column})" if self.text else base


def _one(build: Callable[[pp.ParseResults], Any]) -> Callable[[pp.ParseResults], list]:
    return lambda tokens: [build(tokens)]


def _keyword_call(name: str) -> pp.ParserElement:
    return pp.Suppress(pp.Keyword(name) + "(")


def _key(name: str) -> pp.ParserElement:
    return pp.Suppress(pp.Keyword(name) + "=")


LPAR, RPAR, COMMA = map(pp.Suppress, "(),")
LBRACK, RBRACK = pp.Suppress("["), pp.Suppress("]")

natural = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0])).set_name("natural")
rational = (
    pp.Regex(r"[+-]?\d+(/\d+)?").set_parse_action(_one(lambda t: Fraction(t[0])))
).set_name("rational")

# Ordinals: sums of terms w^{e}*c, w^k*c, w*c, w or c.
ordinal = pp.Forward().set_name("ordinal")
exponent = (pp.Suppress("{") + ordinal + pp.Suppress("}")) | natural.copy().add_parse_action(
    _one(lambda t: of_int(t[0]))
)
omega_term = (
    pp.Suppress(pp.Keyword("w"))
    + pp.Opt(pp.Suppress("^") + exponent)
    + pp.Opt(pp.Suppress("*") + natural)
)


def _omega_term(tokens: pp.ParseResults) -> Ordinal:
    # exponents arrive as ordinals, coefficients as ints
    exp = next((t for t in tokens if isinstance(t, Ordinal)), ONE)
    coefficient = next((t for t in tokens if isinstance(t, int)), 1)
    return from_terms([(exp, coefficient)]) if coefficient else Ordinal()


omega_term.set_parse_action(_one(_omega_term))
finite_term = natural.copy().add_parse_action(_one(lambda t: of_int(t[0])))
ordinal <<= (omega_term | finite_term) + pp.ZeroOrMore(
    pp.Suppress("+") + (omega_term | finite_term)
)
ordinal.set_parse_action(_one(lambda t: reduce(add, t, Ordinal())))

# Finite sets and infinite sets.
finset = (LBRACK + pp.Opt(pp.DelimitedList(natural)) + RBRACK).set_parse_action(
    _one(lambda t: as_finset(list(t)))
)


def _setgen(tokens: pp.ParseResults) -> SetGen:
    items = list(tokens)
    prefix = items.pop(0) if isinstance(items[0], tuple) else ()
    return SetGen(prefix, items[0], items[1] if len(items) > 1 else 1)


gen_call = (
    _keyword_call("gen")
    + pp.Opt(_key("prefix") + finset + COMMA)
    + _key("start")
    + natural
    + pp.Opt(COMMA + _key("step") + natural)
    + RPAR
).set_parse_action(_one(_setgen))
setgen = (
    gen_call
    | pp.Keyword("nat").set_parse_action(_one(lambda t: NAT))
    | pp.Keyword("evens").set_parse_action(_one(lambda t: EVENS))
).set_name("set")

# Families.
family = pp.Forward().set_name("family")
family <<= (
    (_keyword_call("A") + natural + RPAR).set_parse_action(_one(lambda t: A(t[0])))
    | (_keyword_call("S") + ordinal + RPAR).set_parse_action(_one(lambda t: S(t[0])))
    | (_keyword_call("comb") + family + COMMA + family + RPAR).set_parse_action(
        _one(lambda t: Comb(t[0], t[1]))
    )
    | (_keyword_call("pre") + family + COMMA + setgen + RPAR).set_parse_action(
        _one(lambda t: Pre(t[0], t[1]))
    )
    | (_keyword_call("drv") + family + pp.Opt(COMMA + ordinal) + RPAR).set_parse_action(
        _one(lambda t: Drv(t[0], t[1]) if len(t) > 1 else Drv(t[0]))
    )
)

# Vectors and measures.
coordinate = pp.Group(natural + pp.Suppress(":") + rational)
vector = (LBRACK + pp.Opt(pp.DelimitedList(coordinate)) + RBRACK).set_parse_action(
    _one(lambda t: Vector.from_mapping({i: v for i, v in t}))
)
measure = (
    pp.Suppress("{") + pp.DelimitedList(coordinate) + pp.Suppress("}")
).set_parse_action(_one(lambda t: ProbMeasure(tuple((i, v) for i, v in t))))

# Spaces.
p_value = pp.Regex(r"inf|1|2").set_parse_action(
    _one(lambda t: math.inf if t[0] == "inf" else int(t[0]))
)
schreier_spec = (_keyword_call("schreier") + family + RPAR).set_parse_action(
    _one(lambda t: Schreier(t[0]))
)
baernstein_spec = (
    _keyword_call("baernstein") + family + pp.Opt(COMMA + _key("p") + p_value) + RPAR
).set_parse_action(_one(lambda t: Baernstein(t[0], t[1]) if len(t) > 1 else Baernstein(t[0])))
layer = pp.Group(LPAR + family + COMMA + rational + RPAR)
geometric_rule = (
    _key("base")
    + family
    + COMMA
    + _key("theta")
    + rational
    + pp.Opt(COMMA + _key("g0") + family)
).set_parse_action(_one(lambda t: GeometricRule(*t)))
explicit_rule = (_key("layers") + LBRACK + pp.DelimitedList(layer) + RBRACK).set_parse_action(
    _one(lambda t: ExplicitLayers(tuple((g, theta) for g, theta in t)))
)
layered_rule = (
    _key("beta") + ordinal + COMMA + _key("gamma") + ordinal + COMMA + _key("theta") + rational
).set_parse_action(_one(lambda t: LayeredRule(t[0], t[1], t[2])))
mixed_spec = (
    _keyword_call("mixed") + (geometric_rule | explicit_rule | layered_rule) + RPAR
).set_parse_action(_one(lambda t: Mixed(t[0])))
space = (schreier_spec | baernstein_spec | mixed_spec).set_name("space")

# Thresholds and functional families.
threshold = (
    rational + pp.Opt(pp.Suppress("/") + _keyword_call("sqrt") + natural + RPAR)
).set_parse_action(
    _one(lambda t: Threshold.over_sqrt(t[0], t[1]) if len(t) > 1 else Threshold.of(t[0]))
)
functional_layer = pp.Group(LPAR + rational + COMMA + family + RPAR)
functionals = (
    _keyword_call("functionals") + LBRACK + pp.DelimitedList(functional_layer) + RBRACK + RPAR
).set_parse_action(_one(lambda t: FunctionalFamily(tuple((theta, g) for theta, g in t))))


def _parse(element: pp.ParserElement, text: str, what: str) -> Any:
    try:
        return element.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise GrammarError(f"cannot parse {what} {text!r}: {exc.msg}", text, exc.col) from exc
    except (ValueError, TypeError, ArithmeticError) as exc:
        raise GrammarError(f"invalid {what} {text!r}: {exc}", text) from exc


def parse_ordinal(text: str) -> Ordinal:
    return _parse(ordinal, text, "ordinal")


def parse_finset(text: str) -> FinSet:
    return _parse(finset, text, "finite set")


def parse_setgen(text: str) -> SetGen:
    return _parse(setgen, text, "set")


def parse_family(text: str) -> Family:
    return _parse(family, text, "family")


def parse_vector(text: str) -> Vector:
    return _parse(vector, text, "vector")


def parse_measure(text: str) -> ProbMeasure:
    return _parse(measure, text, "measure")


def parse_space(text: str) -> SpaceSpec:
    return _parse(space, text, "space")


def parse_mixed(text: str) -> Mixed:
    spec = parse_space(text)
    if not isinstance(spec, Mixed):
        raise GrammarError(f"{text!r} is not a mixed Schreier space", text)
    return spec


def parse_threshold(text: str) -> Threshold:
    return _parse(threshold, text, "threshold")


def parse_rational(text: str) -> Fraction:
    return _parse(rational, text, "rational")


def parse_functionals(text: str) -> FunctionalFamily:
    return _parse(functionals, text, "functional family")
