"""Command-line front end for schreier-lab.

Every command parses its literals with :mod:`schreier_lab.grammar`, prints a
deterministic report on stdout and logs through rich on stderr. Exit codes:
0 on success, 1 when ``check`` finds a violated property, 2 on malformed
input.
"""

import json
import logging
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any, Iterator, Optional

import typer
import yaml
from rich.console import Console
from rich.logging import RichHandler

from .checks import SUITES, run_suites
from .config import get_settings
from .family import (
    cb_index,
    format_finset,
    max_decomposition,
    member,
    rank,
    rank_oracle,
)
from .grammar import (
    GrammarError,
    parse_family,
    parse_finset,
    parse_functionals,
    parse_measure,
    parse_mixed,
    parse_ordinal,
    parse_rational,
    parse_setgen,
    parse_space,
    parse_threshold,
    parse_vector,
)
from .norms import bset_family_probe, bset_member, format_spec, space_norm
from .numeric import format_fraction
from .ordinal import format_ordinal
from .ravg import measure_max, repeated_average
from .renorm import vee_norm, wedge_bracket, wedge_norm_bounds
from .search import SearchLimitError
from .szlenk import (
    FunctionalFamily,
    factorization_condition,
    factorization_constant_bounds,
    factorization_regime,
    h_member,
    h_sandwich_probe,
    szlenk_lower,
    szlenk_upper,
    well_constructed_spec,
)

app = typer.Typer(help="Exact ordinal, Schreier family and renorming computations.")
console = Console(stderr=True)
logger = logging.getLogger(__name__)


class Format(str, Enum):
    text = "text"
    json = "json"


class Bound(str, Enum):
    lower = "lower"
    upper = "upper"


def setup_logging(level: str = "INFO") -> None:
    """Configure logging with rich handler."""
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=console, rich_tracebacks=True)],
    )


@contextmanager
def _usage_errors() -> Iterator[None]:
    """Map malformed literals and violated preconditions to exit code 2."""
    try:
        yield
    except GrammarError as e:
        logger.error(f"Parse error: {e}")
        raise typer.Exit(code=2)
    except (ValueError, ArithmeticError, SearchLimitError) as e:
        logger.error(f"Invalid input: {e}")
        raise typer.Exit(code=2)


def _emit(report: dict[str, Any], fmt: Format) -> None:
    if fmt is Format.json:
        typer.echo(json.dumps(report))
        return
    for key, value in report.items():
        if isinstance(value, list):
            for item in value:
                typer.echo(f"{key} = {item}")
        else:
            typer.echo(f"{key} = {value}")


def _emit_value(key: str, value: Any, fmt: Format) -> None:
    """Single results print bare in text mode."""
    if fmt is Format.json:
        typer.echo(json.dumps({key: value}))
    else:
        typer.echo(value)


FORMAT_OPTION = typer.Option(Format.text, "--format", "-f", help="Report format")


@app.callback()
def configure(
    log_level: Optional[str] = typer.Option(
        None,
        "--log-level",
        help="Logging level (default from SCHREIER_LOG_LEVEL)",
    ),
) -> None:
    """Exact ordinal, Schreier family and renorming computations."""
    setup_logging((log_level or get_settings().log_level).upper())


@app.command()
def norm(
    spec: str = typer.Option(..., "--spec", "-s", help="Space, e.g. schreier(S(1))"),
    vec: str = typer.Option(..., "--vec", "-v", help="Vector, e.g. [1:1,2:-1/2]"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Norm of a finitely supported vector."""
    with _usage_errors():
        value = space_norm(parse_space(spec), parse_vector(vec))
    _emit_value("norm", str(value), fmt)


@app.command("member")
def member_command(
    family: str = typer.Option(..., "--family", "-g", help="Family, e.g. comb(A(2),S(1))"),
    finset: str = typer.Option(..., "--set", "-e", help="Finite set, e.g. [2,5,6]"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Decide membership of a finite set in a family."""
    with _usage_errors():
        value = member(parse_family(family), parse_finset(finset))
    _emit_value("member", str(value).lower(), fmt)


@app.command("rank")
def rank_command(
    family: str = typer.Option(..., "--family", "-g", help="Family expression"),
    finset: str = typer.Option("[]", "--set", "-e", help="Member of the family"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Cantor-Bendixson rank of a member."""
    with _usage_errors():
        value = rank(parse_family(family), parse_finset(finset))
    _emit_value("rank", format_ordinal(value), fmt)


@app.command()
def cb(
    family: str = typer.Option(..., "--family", "-g", help="Family expression"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Cantor-Bendixson index of a family."""
    with _usage_errors():
        value = cb_index(parse_family(family))
    _emit_value("cb", format_ordinal(value), fmt)


@app.command()
def oracle(
    family: str = typer.Option(..., "--family", "-g", help="Family expression"),
    finset: str = typer.Option("[]", "--set", "-e", help="Member of the family"),
    cap: Optional[int] = typer.Option(None, "--cap", help="Extension cap"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Rank by explicit extension recursion, next to the closed form."""
    with _usage_errors():
        g, e = parse_family(family), parse_finset(finset)
        report = {
            "set": format_finset(e),
            "oracle": format_ordinal(rank_oracle(g, e, cap=cap)),
            "rank": format_ordinal(rank(g, e)),
        }
    _emit(report, fmt)


@app.command()
def maxdecomp(
    xi: str = typer.Option(..., "--xi", help="Ordinal level"),
    setgen: str = typer.Option(..., "--set", "-m", help="Infinite set, e.g. gen(start=3)"),
    count: int = typer.Option(3, "--count", "-n", help="Number of blocks"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Consecutive maximal S(xi) blocks of an infinite set."""
    with _usage_errors():
        blocks = max_decomposition(parse_setgen(setgen), parse_ordinal(xi), count)
    _emit({"block": [format_finset(b) for b in blocks]}, fmt)


@app.command()
def ravg(
    xi: str = typer.Option(..., "--xi", help="Ordinal level"),
    setgen: str = typer.Option(..., "--set", "-m", help="Infinite set"),
    n: int = typer.Option(1, "--n", "-n", help="Position, counting from 1"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Repeated average S^xi_{M,n}."""
    with _usage_errors():
        mu = repeated_average(parse_ordinal(xi), parse_setgen(setgen), n)
    _emit_value("measure", str(mu), fmt)


@app.command("measure-max")
def measure_max_command(
    family: str = typer.Option(..., "--family", "-g", help="Family expression"),
    measure: str = typer.Option(..., "--measure", "-u", help="Measure, e.g. {3:1/2,4:1/2}"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Largest mass a member of the family carries."""
    with _usage_errors():
        value = measure_max(parse_family(family), parse_measure(measure))
    _emit_value("max", format_fraction(value), fmt)


@app.command()
def bset(
    spec: str = typer.Option(..., "--spec", "-s", help="Space expression"),
    eps: str = typer.Option(..., "--eps", help="Threshold, e.g. 1/sqrt(3)"),
    finset: str = typer.Option(..., "--set", "-e", help="Finite set"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Decide membership in the family of eps-separated supports."""
    with _usage_errors():
        value = bset_member(parse_space(spec), parse_threshold(eps), parse_finset(finset))
    _emit_value("member", str(value).lower(), fmt)


@app.command()
def probe(
    spec: str = typer.Option(..., "--spec", "-s", help="Space expression"),
    eps: str = typer.Option(..., "--eps", help="Threshold"),
    window: int = typer.Option(6, "--window", "-w", help="Classify subsets of {1..window}"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Classify a window of finite sets by eps-separation."""
    with _usage_errors():
        report = bset_family_probe(parse_space(spec), parse_threshold(eps), window).report()
    report["maximal"] = [format_finset(e) for e in report["maximal"]]
    _emit(report, fmt)


def _renorm_options(x_space: str, e_space: str, vec: str):
    return parse_space(x_space), parse_space(e_space), parse_vector(vec)


X_SPACE = typer.Option(..., "--x", "--x-space", "-x", help="Base space")
E_SPACE = typer.Option(..., "--e", "--e-space", "-E", help="Outer space")
VEC = typer.Option(..., "--vec", "-v", help="Vector")


@app.command()
def vee(
    x_space: str = X_SPACE,
    e_space: str = E_SPACE,
    vec: str = VEC,
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Sup over interval decompositions."""
    with _usage_errors():
        value = vee_norm(*_renorm_options(x_space, e_space, vec))
    _emit_value("vee", str(value), fmt)


@app.command()
def wedge(
    x_space: str = X_SPACE,
    e_space: str = E_SPACE,
    vec: str = VEC,
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Inf over interval partitions."""
    with _usage_errors():
        value = wedge_bracket(*_renorm_options(x_space, e_space, vec))
    _emit_value("wedge", str(value), fmt)


@app.command("wedge-bounds")
def wedge_bounds(
    x_space: str = X_SPACE,
    e_space: str = E_SPACE,
    vec: str = VEC,
    budget: int = typer.Option(64, "--budget", help="Decompositions tried for the upper bound"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Certified bracket of the convexified wedge norm."""
    with _usage_errors():
        value = wedge_norm_bounds(*_renorm_options(x_space, e_space, vec), budget=budget)
    _emit({"lower": format_fraction(value.lo), "upper": format_fraction(value.hi)}, fmt)


@app.command()
def szlenk(
    bound: Bound = typer.Argument(..., help="lower or upper"),
    spec: str = typer.Option(..., "--spec", "-s", help="Mixed Schreier space"),
    eps: str = typer.Option(..., "--eps", help="Threshold"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Symbolic eps-Szlenk index bound of a mixed Schreier space."""
    with _usage_errors():
        mixed, threshold = parse_mixed(spec), parse_threshold(eps)
        compute = szlenk_lower if bound is Bound.lower else szlenk_upper
        value = compute(mixed, threshold)
    _emit({"spec": format_spec(mixed), "eps": str(threshold), bound.value: format_ordinal(value)}, fmt)


def _functionals(text: Optional[str], spec, eps, window: int) -> FunctionalFamily:
    return parse_functionals(text) if text else FunctionalFamily.of_spec(spec, eps, window)


FUNCTIONALS_OPTION = typer.Option(
    None, "--functionals", "-k", help="Layers, e.g. functionals([(1,S(1))]); default from the space"
)


@app.command()
def hmember(
    spec: str = typer.Option(..., "--spec", "-s", help="Mixed Schreier space"),
    eps: str = typer.Option(..., "--eps", help="Threshold"),
    finset: str = typer.Option(..., "--set", "-e", help="Finite set"),
    functionals: Optional[str] = FUNCTIONALS_OPTION,
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Decide membership in the H-family of eps-pairing block patterns."""
    with _usage_errors():
        mixed, threshold, e = parse_mixed(spec), parse_threshold(eps), parse_finset(finset)
        k = _functionals(functionals, mixed, threshold, max(e, default=1))
        value = h_member(mixed, k, threshold, e)
    _emit_value("member", str(value).lower(), fmt)


@app.command()
def hprobe(
    spec: str = typer.Option(..., "--spec", "-s", help="Mixed Schreier space"),
    eps: str = typer.Option(..., "--eps", help="Threshold"),
    window: int = typer.Option(5, "--window", "-w", help="Classify subsets of {1..window}"),
    functionals: Optional[str] = FUNCTIONALS_OPTION,
    fmt: Format = FORMAT_OPTION,
) -> None:
    """H-family window next to the symbolic Szlenk bounds."""
    with _usage_errors():
        mixed, threshold = parse_mixed(spec), parse_threshold(eps)
        k = _functionals(functionals, mixed, threshold, window)
        report = h_sandwich_probe(mixed, k, threshold, window).report()
    _emit(report, fmt)


def _load_sz_values(path: Path) -> list[tuple[int, Any]]:
    """Read ``n: bound`` pairs from a YAML mapping or a list of {n, bound} records."""
    with open(path, "r") as f:
        data = yaml.safe_load(f) or {}
    if isinstance(data, dict):
        data = data.get("values", data)
    if isinstance(data, dict):
        pairs = list(data.items())
    elif isinstance(data, list):
        pairs = [(item["n"], item["bound"]) for item in data]
    else:
        raise ValueError(f"{path} must hold a mapping or a list of records")
    return [(int(n), parse_ordinal(str(bound))) for n, bound in pairs]


@app.command("factor-check")
def factor_check(
    xi: str = typer.Option(..., "--xi", help="Ordinal xi >= 1"),
    gamma: str = typer.Option(..., "--gamma", help="Candidate gamma"),
    data: Optional[Path] = typer.Option(
        None, "--data", "-d", help="YAML file of Szlenk bounds n: Sz(A, 1/2^n)"
    ),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Check gamma < w^xi and Sz(A, 1/2^n) <= gamma^n on supplied bounds."""
    if data is not None and not data.exists():
        logger.error(f"Data file not found: {data}")
        raise typer.Exit(code=2)
    with _usage_errors():
        values = _load_sz_values(data) if data is not None else []
        value = factorization_condition(parse_ordinal(xi), parse_ordinal(gamma), values)
    _emit_value("condition", str(value).lower(), fmt)


@app.command("factor-const")
def factor_const(
    m: int = typer.Option(..., "--m", help="Power of two"),
    l: int = typer.Option(1, "--l", help="Norm constant"),
    beta: str = typer.Option(..., "--beta", help="Rational beta > 1"),
    s: str = typer.Option(..., "--s", help="Rational s > beta"),
    tol: str = typer.Option("1/1000000", "--tol", help="Width of the certified bracket"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Certified bracket of the explicit factorization constant."""
    with _usage_errors():
        value = factorization_constant_bounds(
            m, l, parse_rational(beta), parse_rational(s), parse_rational(tol)
        )
    _emit(
        {
            "lower": format_fraction(value.lo),
            "upper": format_fraction(value.hi),
            "approx": f"{float(value.hi):.9f}",
        },
        fmt,
    )


@app.command()
def regime(
    xi: str = typer.Option(..., "--xi", help="Ordinal xi >= 1"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Which factorization statement applies to xi."""
    with _usage_errors():
        value = factorization_regime(parse_ordinal(xi))
    _emit_value("regime", value.value, fmt)


@app.command()
def wellcons(
    xi: str = typer.Option(..., "--xi", help="Ordinal xi >= 1"),
    theta: str = typer.Option("1/2", "--theta", help="Layer ratio in (0, 1)"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """A canonical xi-well-constructed mixed Schreier space."""
    with _usage_errors():
        spec = well_constructed_spec(parse_ordinal(xi), parse_rational(theta))
    _emit_value("spec", format_spec(spec), fmt)


@app.command()
def check(
    suites: list[str] = typer.Argument(..., help=f"Suites: {', '.join(SUITES)}, all"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed (default from settings)"),
    cases: Optional[int] = typer.Option(None, "--cases", "-c", help="Override instance counts"),
    fmt: Format = FORMAT_OPTION,
) -> None:
    """Run seeded property suites; exit 1 when a property fails."""
    unknown = [name for name in suites if name != "all" and name not in SUITES]
    if unknown:
        logger.error(f"Unknown suite(s): {', '.join(unknown)}")
        raise typer.Exit(code=2)
    seed = get_settings().default_seed if seed is None else seed
    results = run_suites(suites, seed=seed, cases=cases)
    if fmt is Format.json:
        typer.echo(json.dumps([r.report() for r in results]))
    else:
        for r in results:
            report = r.report()
            report["failure"] = report.pop("failures")
            report["note"] = report.pop("notes")
            _emit(report, fmt)
    if not all(r.passed for r in results):
        for r in results:
            for failure in r.failures:
                logger.error(f"{r.name}: {failure}")
        raise typer.Exit(code=1)


def main() -> None:
    """Entry point for the schreier-lab CLI."""
    app()


if __name__ == "__main__":
    main()
