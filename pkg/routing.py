# routing.py
"""
File: routing.py
Function:
    Scores probe scattering orders by the class of the operators their propagation loss
    leaks onto the register, and searches all orders of a stabilizer for one whose leaked
    prefixes are harmless or correctable.

Functions Contained:
    - prefix_operators: Prefix products of a generator in scattering order.
    - score_route: Classification of every prefix of one order.
    - optimize_route: Exhaustive or greedy search for the best order.
"""

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from codes import ErrorClass, ErrorTag, StabilizerCode, classify_operator, describe_class
from pauli import PauliString

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_SUPPORT = 12
_TAG_RANK = {ErrorTag.HARMLESS: 0, ErrorTag.CORRECTABLE: 1, ErrorTag.UNCORRECTABLE: 2}


class RouteError(ValueError):
    """Raised for orders that are not permutations of a support and for unsupported searches."""


@dataclass(frozen=True)
class RouteReport:
    generator: PauliString
    order: tuple
    per_prefix: tuple  # ((PauliString, ErrorClass), ...)

    @property
    def counts(self) -> tuple:
        """(harmless, correctable, uncorrectable)."""
        tags = [c.tag for _, c in self.per_prefix]
        return (
            tags.count(ErrorTag.HARMLESS),
            tags.count(ErrorTag.CORRECTABLE),
            tags.count(ErrorTag.UNCORRECTABLE),
        )

    @property
    def objective(self) -> tuple:
        _, correctable, uncorrectable = self.counts
        return uncorrectable, correctable

    def render(self, code: StabilizerCode) -> str:
        """One line per prefix, e.g. "Z4Z7Z8  CORRECTABLE  (= Z4 * gauge[Z7Z8])"."""
        display = tuple(reversed(self.order))
        labels = [p.label(display) for p, _ in self.per_prefix]
        width = max(len(label) for label in labels)
        lines = []
        for label, (_, error_class) in zip(labels, self.per_prefix):
            witness = describe_class(code, error_class)
            line = f"{label:<{width}}  {error_class.tag.value:<13}  {witness}"
            lines.append(line.rstrip())
        return "\n".join(lines)


def _check_order(generator: PauliString, order: Sequence[int]) -> tuple:
    order = tuple(int(q) for q in order)
    if sorted(order) != list(generator.support):
        raise RouteError(
            f"Order {'-'.join(map(str, order))} is not a permutation of the support "
            f"{generator.support} of {generator.label()}."
        )
    return order


def prefix_operators(generator: PauliString, order: Sequence[int]) -> list:
    """j-th entry: product of the generator's single-qubit factors at order[:j]; the last is the generator."""
    order = _check_order(generator, order)
    return [generator.restrict(order[:j]) for j in range(1, len(order) + 1)]


def _require_stabilizer(code: StabilizerCode, generator: PauliString) -> None:
    if generator.n_qubits != code.n_qubits or code.stabilizer_index(generator) is None:
        raise RouteError(f"{generator} is not a stabilizer generator of {code.name}.")


def score_route(code: StabilizerCode, generator: PauliString, order: Sequence[int]) -> RouteReport:
    _require_stabilizer(code, generator)
    prefixes = prefix_operators(generator, order)
    per_prefix = tuple((p, classify_operator(code, p)) for p in prefixes)
    return RouteReport(generator, tuple(order), per_prefix)


def _exhaustive(code: StabilizerCode, generator: PauliString) -> RouteReport:
    support = generator.support
    if len(support) > MAX_EXHAUSTIVE_SUPPORT:
        raise RouteError(
            f"Exhaustive search over {len(support)}! orders is not supported; "
            f"the limit is support size {MAX_EXHAUSTIVE_SUPPORT}."
        )
    memo = {}

    def classify_prefix(qubits) -> ErrorClass:
        key = frozenset(qubits)
        if key not in memo:
            memo[key] = classify_operator(code, generator.restrict(qubits))
        return memo[key]

    best_order, best_key = None, None
    for order in permutations(support):
        uncorrectable = correctable = 0
        for j in range(1, len(order) + 1):
            tag = classify_prefix(order[:j]).tag
            uncorrectable += tag is ErrorTag.UNCORRECTABLE
            correctable += tag is ErrorTag.CORRECTABLE
        key = (uncorrectable, correctable)
        # permutations() yields lexicographic order, so strict < keeps the smallest tie
        if best_key is None or key < best_key:
            best_order, best_key = order, key
    logger.debug("Exhaustive search on %s: best %s with %s.", generator, best_order, best_key)
    return score_route(code, generator, best_order)


def _greedy(code: StabilizerCode, generator: PauliString) -> RouteReport:
    remaining = list(generator.support)
    order = []
    while remaining:
        choice = min(
            remaining,
            key=lambda q: (_TAG_RANK[classify_operator(code, generator.restrict(order + [q])).tag], q),
        )
        order.append(choice)
        remaining.remove(choice)
    return score_route(code, generator, order)


def optimize_route(code: StabilizerCode, generator: PauliString, strategy: str = "exhaustive") -> RouteReport:
    """
    Purpose: Order minimizing (uncorrectable count, correctable count); ties go to the
             lexicographically smallest order. "greedy" picks, at each step, the qubit whose
             prefix has the mildest class, lowest index first; it is not guaranteed optimal.
    """
    _require_stabilizer(code, generator)
    if strategy == "exhaustive":
        return _exhaustive(code, generator)
    if strategy == "greedy":
        return _greedy(code, generator)
    raise RouteError(f"Unknown strategy '{strategy}'. Use 'exhaustive' or 'greedy'.")
