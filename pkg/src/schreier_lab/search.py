"""Depth-first branch and bound over hereditary admissibility predicates."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .config import default_settings

logger = logging.getLogger(__name__)

FinSet = tuple[int, ...]


class SearchLimitError(RuntimeError):
    """Raised when a search visits more nodes than allowed."""


@dataclass(frozen=True)
class SearchResult:
    value: Fraction
    chosen: FinSet
    nodes: int


def max_admissible_weight(
    weights: Iterable[tuple[int, Fraction]],
    admissible: Callable[[FinSet], bool],
    node_limit: Optional[int] = None,
) -> SearchResult:
    """Maximum total weight of an admissible subset of the weighted indices.

    ``admissible`` must be hereditary, so a rejected partial set prunes its
    whole subtree. Weights are nonnegative; the bound is the current weight
    plus the mass still available to the right.

    Args:
        weights: (index, weight) pairs; zero weights are ignored.
        admissible: Membership test for increasing tuples of indices.
        node_limit: Optional guard on visited nodes.

    Returns:
        The best value, one optimal set and the node count.
    """
    items = sorted((i, Fraction(w)) for i, w in weights if w)
    if any(w < 0 for _, w in items):
        raise ValueError("weights must be nonnegative")
    limit = node_limit or default_settings().search_node_limit
    remaining = [Fraction(0)] * (len(items) + 1)
    for k in range(len(items) - 1, -1, -1):
        remaining[k] = remaining[k + 1] + items[k][1]

    best_value = Fraction(0)
    best_set: FinSet = ()
    nodes = 0

    def visit(position: int, current: FinSet, value: Fraction) -> None:
        nonlocal best_value, best_set, nodes
        nodes += 1
        if nodes > limit:
            raise SearchLimitError(f"branch and bound exceeded {limit} nodes")
        if value > best_value:
            best_value, best_set = value, current
        for k in range(position, len(items)):
            if value + remaining[k] <= best_value:
                return
            index, weight = items[k]
            candidate = current + (index,)
            if admissible(candidate):
                visit(k + 1, candidate, value + weight)

    if admissible(()):
        visit(0, (), Fraction(0))
    logger.debug(f"branch and bound: best {best_value} on {best_set} after {nodes} nodes")
    return SearchResult(best_value, best_set, nodes)
