# modules/route_report.py
from typing import Optional, Sequence

from codes import StabilizerCode, catalog_get
from routing import RouteError, RouteReport, optimize_route, score_route

STRATEGIES = ("exhaustive", "greedy", "naive", "given")


def _generators(code: StabilizerCode, selector: str) -> list:
    if selector == "all":
        return list(range(1, code.n_stabilizers + 1))
    if selector.isdigit():
        index = int(selector)
        if not 1 <= index <= code.n_stabilizers:
            raise RouteError(f"Stabilizer index {index} out of range 1..{code.n_stabilizers}.")
        return [index]
    index = code.stabilizer_index(code.parse(selector))
    if index is None:
        raise RouteError(f"{selector} is not a stabilizer generator of {code.name}.")
    return [index]


def build_report(code: StabilizerCode, index: int, strategy: str, order: Optional[Sequence[int]] = None) -> RouteReport:
    generator = code.stabilizers[index - 1]
    if strategy in ("exhaustive", "greedy"):
        return optimize_route(code, generator, strategy)
    if strategy == "naive":
        naive = code.naive_routes[index - 1] if code.naive_routes else sorted(generator.support, reverse=True)
        return score_route(code, generator, naive)
    if strategy == "given":
        if not order:
            raise RouteError("Strategy 'given' needs an explicit order.")
        return score_route(code, generator, order)
    raise RouteError(f"Unknown strategy '{strategy}'. Use one of {STRATEGIES}.")


def show_page(code_name: str, selector: str, strategy: str, order: Optional[Sequence[int]] = None) -> str:
    code = catalog_get(code_name)
    blocks = []
    for index in _generators(code, selector):
        report = build_report(code, index, strategy, order)
        harmless, correctable, uncorrectable = report.counts
        header = (
            f"M{index} = {report.generator.label()}  order {'-'.join(map(str, report.order))}  "
            f"(harmless {harmless}, correctable {correctable}, uncorrectable {uncorrectable})"
        )
        blocks.append(header + "\n" + report.render(code))
    return "\n\n".join(blocks)
