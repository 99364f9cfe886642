# builder.py
"""
File: builder.py
Function:
    Mechanical construction of the autonomous-memory master-equation model over the joint
    register (x) relay space: the coherent feedback Hamiltonian, the syndrome probe Lindblads,
    register decoherence, routing-dependent loss Lindblads and optional relay dephasing.
    Operators stay symbolic (Pauli sums x relay operators) so the dynamics kernels can
    apply them without dense matrices.

Functions Contained:
    - build_probe_lindblads: The two probe operators of stabilizer n.
    - build_feedback_hamiltonian: One corrective term per syndrome class.
    - build_decoherence: Bit-flip or spontaneous-emission channels on every register qubit.
    - build_loss_lindblads: Prefix loss operators for one scattering order.
    - build_relay_dephasing: sqrt(kappa) (Ph - Pg) on every relay.
    - resolve_routes / assemble_model: Full MemoryModel from a code and rates.
    - render_model: Deterministic text dump used for golden regression files.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence, Union

from codes import (
    ErrorTag,
    StabilizerCode,
    classify_operator,
    is_separable,
    syndrome,
)
from pauli import PauliString, identity, multiply, single
from routing import RouteError, optimize_route, prefix_operators

logger = logging.getLogger(__name__)

RELAY_KINDS = ("sigma_plus", "sigma_minus", "proj_g", "proj_h")
_RELAY_SYMBOLS = {"sigma_plus": "sigma+", "sigma_minus": "sigma-", "proj_g": "Pg", "proj_h": "Ph"}
NOISE_KINDS = ("bit_flip", "spontaneous", "none")


class ModelError(ValueError):
    """Raised for invalid model inputs: bad index, negative rate, ambiguous syndrome, bad route."""


@dataclass(frozen=True)
class RelayOperatorSpec:
    """Two-level relay operator; basis {g, h}, sigma_plus = |h><g|."""

    relay_index: int  # 1-based
    kind: str

    def __post_init__(self):
        if self.kind not in RELAY_KINDS:
            raise ModelError(f"Unknown relay operator kind '{self.kind}'.")
        if self.relay_index < 1:
            raise ModelError(f"Relay indices are 1-based, got {self.relay_index}.")

    def render(self) -> str:
        return f"{_RELAY_SYMBOLS[self.kind]}[R{self.relay_index}]"


@dataclass(frozen=True)
class ModelTerm:
    """
    coefficient * (sum of signed register Paulis) (x) relay operators (x) identity elsewhere.
    `label_order` only affects rendering: qubits listed in that order.
    """

    coefficient: complex
    register_part: tuple  # ((sign, PauliString), ...)
    relay_parts: tuple = ()
    label_order: Optional[tuple] = None

    def __post_init__(self):
        relays = [r.relay_index for r in self.relay_parts]
        if len(set(relays)) != len(relays):
            raise ModelError(f"Relay operators must reference distinct relays, got {relays}.")

    def _register_text(self) -> Optional[str]:
        parts = self.register_part
        if not parts:
            return None
        if len(parts) == 1:
            sign, p = parts[0]
            if p.is_identity and self.relay_parts:
                return None
            text = p.label(self.label_order)
            return text if sign == 1 else f"(-{text})"
        pieces = []
        for i, (sign, p) in enumerate(parts):
            text = p.label(self.label_order)
            if i == 0:
                pieces.append(text if sign == 1 else f"-{text}")
            else:
                pieces.append(f"{'+' if sign == 1 else '-'} {text}")
        return "(" + " ".join(pieces) + ")"

    def body(self) -> str:
        register = self._register_text()
        relays = [r.render() for r in self.relay_parts]
        if register is None:
            factors = relays
        elif len(self.register_part) > 1:
            factors = relays + [register]
        else:
            factors = [register] + relays
        return "*".join(factors)


def _signed_body(coefficient: complex, body: str) -> tuple:
    c = complex(coefficient)
    if c == 1:
        return "+", body
    if c == -1:
        return "-", body
    if c == 1j:
        return "+", f"i*{body}"
    if c == -1j:
        return "-", f"i*{body}"
    return "+", f"({c.real:g}{c.imag:+g}i)*{body}"


@dataclass(frozen=True)
class ModelOperator:
    """scale * sum(terms); `scale_name` is the symbolic prefactor shown in dumps."""

    label: str
    family: str  # feedback, probe, noise, loss, relay_noise
    scale_name: str
    scale: float
    terms: tuple

    def render(self) -> str:
        pieces = []
        for i, term in enumerate(self.terms):
            sign, body = _signed_body(term.coefficient, term.body())
            if i == 0:
                pieces.append(body if sign == "+" else f"- {body}")
            else:
                pieces.append(f"{sign} {body}")
        return f"{self.label} = {self.scale_name}*( {' '.join(pieces)} )"


@dataclass(frozen=True)
class ModelParameters:
    Omega: float
    alpha: float
    theta: float
    Gamma: float
    noise_kind: str = "bit_flip"
    kappa: float = 0.0


@dataclass(frozen=True)
class MemoryModel:
    """Feedback Hamiltonian plus Lindblad list over 2^(Q+N) basis states."""

    code: StabilizerCode
    hamiltonian: ModelOperator
    lindblads: tuple
    parameters: ModelParameters
    routes: tuple = field(default_factory=tuple)

    @property
    def n_register(self) -> int:
        return self.code.n_qubits

    @property
    def n_relays(self) -> int:
        return self.code.n_stabilizers

    @property
    def dimension(self) -> int:
        return 2 ** (self.n_register + self.n_relays)

    def lindblads_of(self, family: str) -> list:
        return [op for op in self.lindblads if op.family == family]


def _check_rate(name: str, value: float) -> None:
    if value < 0 or not math.isfinite(value):
        raise ModelError(f"{name} must be a finite non-negative number, got {value}.")


# --- Probes ---


def build_probe_lindblads(code: StabilizerCode, n: int, alpha: float) -> tuple:
    """
    Purpose: Probe operators of stabilizer M_n:
             L_odd  = alpha*( sigma+[Rn]*(I + M) - Pg[Rn]*(I - M) )
             L_even = alpha*( sigma-[Rn]*(I - M) + Ph[Rn]*(I + M) )
    Outputs: (L_odd, L_even) labelled L(2n-1), L(2n).
    """
    if not 1 <= n <= code.n_stabilizers:
        raise ModelError(f"Stabilizer index {n} out of range 1..{code.n_stabilizers}.")
    _check_rate("alpha", alpha)
    m = code.stabilizers[n - 1]
    ident = identity(code.n_qubits)
    plus = ((1, ident), (1, m))
    minus = ((1, ident), (-1, m))

    def relay(kind):
        return (RelayOperatorSpec(n, kind),)

    odd = ModelOperator(
        f"L{2 * n - 1}", "probe", "alpha", alpha,
        (ModelTerm(1, plus, relay("sigma_plus")), ModelTerm(-1, minus, relay("proj_g"))),
    )
    even = ModelOperator(
        f"L{2 * n}", "probe", "alpha", alpha,
        (ModelTerm(1, minus, relay("sigma_minus")), ModelTerm(1, plus, relay("proj_h"))),
    )
    return odd, even


# --- Feedback ---


def _relay_pattern(stabilizer_indices: Sequence[int], values: Sequence[int]) -> tuple:
    # h <-> +1, g <-> -1; relay n latches stabilizer n
    return tuple(
        RelayOperatorSpec(i + 1, "proj_h" if v == 1 else "proj_g")
        for i, v in zip(stabilizer_indices, values)
    )


def correction_classes(code: StabilizerCode, errors: Sequence[PauliString], stabilizer_indices: Sequence[int]) -> list:
    """
    Purpose: Groups designed errors by their syndrome restricted to `stabilizer_indices`.
             The representative of a class is its first member in catalog order (the
             lowest-index qubit); every other member must differ from it by a harmless
             operator.
    Outputs: [(representative, restricted SyndromeVector), ...] in order of first appearance.
    """
    classes = {}
    for error in errors:
        restricted = syndrome(code, error).restricted(stabilizer_indices)
        if restricted.is_trivial:
            if classify_operator(code, error).tag is not ErrorTag.HARMLESS:
                raise ModelError(f"{code.name}: correctable error {error} has a trivial syndrome.")
            continue
        classes.setdefault(restricted, []).append(error)

    table = []
    for restricted, members in classes.items():
        representative = members[0]
        for other in members[1:]:
            if classify_operator(code, multiply(representative, other)).tag is not ErrorTag.HARMLESS:
                raise ModelError(
                    f"{code.name}: ambiguous syndrome {restricted.render()} shared by "
                    f"{representative} and {other}."
                )
        table.append((representative, restricted))
    return table


def build_feedback_hamiltonian(code: StabilizerCode, Omega: float) -> ModelOperator:
    """
    Purpose: H = Omega * sum_E E (x) F[E], where F maps the syndrome of E to a product of relay
             projectors. Separable codes get X terms conditioned on the Z-type generators and Z
             terms conditioned on the X-type ones; other codes get X, Z and Y terms conditioned
             on every relay.
    """
    if not math.isfinite(Omega):
        raise ModelError(f"Omega must be finite, got {Omega}.")
    partition = is_separable(code)
    terms = []
    if partition is not None:
        locate_x, locate_z = partition
        for indices, selector in ((locate_x, "is_x_type"), (locate_z, "is_z_type")):
            errors = [e for e in code.correctable_errors if getattr(e, selector)]
            for error, restricted in correction_classes(code, errors, indices):
                terms.append(ModelTerm(1, ((1, error),), _relay_pattern(indices, restricted.values)))
    else:
        every = tuple(range(code.n_stabilizers))
        for error, restricted in correction_classes(code, code.correctable_errors, every):
            terms.append(ModelTerm(1, ((1, error),), _relay_pattern(every, restricted.values)))
    logger.debug("Feedback Hamiltonian for %s has %d terms.", code.name, len(terms))
    return ModelOperator("H", "feedback", "Omega", Omega, tuple(terms))


# --- Noise ---


def build_decoherence(kind: str, Gamma: float, Q: int) -> list:
    """sqrt(Gamma) X_n ("bit_flip") or sqrt(Gamma) (X_n - i Y_n) ("spontaneous"), n = 1..Q."""
    if kind not in NOISE_KINDS:
        raise ModelError(f"Unknown noise kind '{kind}'. Use one of {NOISE_KINDS}.")
    _check_rate("Gamma", Gamma)
    if kind == "none":
        return []
    operators = []
    for q in range(1, Q + 1):
        terms = [ModelTerm(1, ((1, single("X", q, Q)),))]
        if kind == "spontaneous":
            terms.append(ModelTerm(-1j, ((1, single("Y", q, Q)),)))
        operators.append(ModelOperator(f"L{q}", "noise", "sqrt(Gamma)", math.sqrt(Gamma), tuple(terms)))
    return operators


def build_relay_dephasing(N: int, kappa: float) -> list:
    """sqrt(kappa) (Ph - Pg) on each relay."""
    _check_rate("kappa", kappa)
    operators = []
    for n in range(1, N + 1):
        terms = (
            ModelTerm(1, (), (RelayOperatorSpec(n, "proj_h"),)),
            ModelTerm(-1, (), (RelayOperatorSpec(n, "proj_g"),)),
        )
        operators.append(ModelOperator(f"L{n}", "relay_noise", "sqrt(kappa)", math.sqrt(kappa), terms))
    return operators


# --- Loss ---


def build_loss_lindblads(generator: PauliString, order: Sequence[int], alpha: float, theta: float) -> list:
    """
    Purpose: Loss after the j-th scatterer leaks the product of the generator's factors at the
             first j positions of `order`. Returns k operators alpha*theta*prefix_j.
    """
    _check_rate("alpha", alpha)
    _check_rate("theta", theta)
    try:
        prefixes = prefix_operators(generator, order)
    except RouteError as exc:
        raise ModelError(str(exc)) from exc
    display = tuple(reversed(tuple(order)))
    return [
        ModelOperator(
            f"L{j}", "loss", "alpha*theta", alpha * theta,
            (ModelTerm(1, ((1, prefix),), (), display),),
        )
        for j, prefix in enumerate(prefixes, start=1)
    ]


# --- Assembly ---

RouteSpec = Union[str, Mapping[int, Sequence[int]], Sequence[Sequence[int]]]


def _default_route(code: StabilizerCode, n: int) -> tuple:
    if code.naive_routes:
        return tuple(code.naive_routes[n - 1])
    return tuple(sorted(code.stabilizers[n - 1].support, reverse=True))


def resolve_routes(code: StabilizerCode, routes: RouteSpec = "naive") -> tuple:
    """
    Purpose: One scattering order per stabilizer.
    Inputs:
        - routes: "naive" (catalog orders), "optimal" (exhaustive search per stabilizer), a mapping
          {stabilizer index: order} overriding the naive orders, or a full list of orders.
    """
    if isinstance(routes, str):
        if routes == "naive":
            return tuple(_default_route(code, n) for n in range(1, code.n_stabilizers + 1))
        if routes == "optimal":
            return tuple(
                optimize_route(code, m, "exhaustive").order for m in code.stabilizers
            )
        raise ModelError(f"Unknown route preset '{routes}'. Use 'naive', 'optimal' or explicit orders.")

    if isinstance(routes, Mapping):
        resolved = []
        for n in range(1, code.n_stabilizers + 1):
            resolved.append(tuple(routes[n]) if n in routes else _default_route(code, n))
        unknown = set(routes) - set(range(1, code.n_stabilizers + 1))
        if unknown:
            raise ModelError(f"Routes given for unknown stabilizers {sorted(unknown)}.")
    else:
        resolved = [tuple(order) for order in routes]
        if len(resolved) != code.n_stabilizers:
            raise ModelError(f"Expected {code.n_stabilizers} routes, got {len(resolved)}.")

    for n, order in enumerate(resolved, start=1):
        if sorted(order) != list(code.stabilizers[n - 1].support):
            raise ModelError(f"Route {order} for M{n} is not a permutation of its support.")
    return tuple(resolved)


def _relabel(operators: Sequence[ModelOperator]) -> tuple:
    return tuple(replace(op, label=f"L{i}") for i, op in enumerate(operators, start=1))


def assemble_model(
    code: StabilizerCode,
    Omega: float,
    alpha: float,
    theta: float,
    Gamma: float,
    noise_kind: str = "bit_flip",
    routes: RouteSpec = "naive",
    relay_dephasing: float = 0.0,
) -> MemoryModel:
    """
    Purpose: Full model: 2N probe operators, Q noise operators, sum_n k_n loss operators
             (only when theta > 0), optional relay dephasing and the feedback Hamiltonian.
             Lindblads are numbered L1, L2, ... in that order.
    """
    for name, value in (("alpha", alpha), ("theta", theta), ("Gamma", Gamma), ("kappa", relay_dephasing)):
        _check_rate(name, value)

    orders = resolve_routes(code, routes)
    hamiltonian = build_feedback_hamiltonian(code, Omega)

    lindblads = []
    for n in range(1, code.n_stabilizers + 1):
        lindblads.extend(build_probe_lindblads(code, n, alpha))
    lindblads.extend(build_decoherence(noise_kind, Gamma, code.n_qubits))
    if theta > 0:
        for m, order in zip(code.stabilizers, orders):
            lindblads.extend(build_loss_lindblads(m, order, alpha, theta))
    if relay_dephasing > 0:
        lindblads.extend(build_relay_dephasing(code.n_stabilizers, relay_dephasing))

    model = MemoryModel(
        code=code,
        hamiltonian=hamiltonian,
        lindblads=_relabel(lindblads),
        parameters=ModelParameters(Omega, alpha, theta, Gamma, noise_kind, relay_dephasing),
        routes=orders,
    )
    logger.info(
        "Assembled %s model: %d Hamiltonian terms, %d Lindblads, dimension %d.",
        code.name, len(hamiltonian.terms), len(model.lindblads), model.dimension,
    )
    return model


def render_model(model: MemoryModel) -> str:
    """One operator per line; the Hamiltonian line is omitted when Omega is zero."""
    lines = []
    if model.parameters.Omega != 0 and model.hamiltonian.terms:
        lines.append(model.hamiltonian.render())
    lines.extend(op.render() for op in model.lindblads)
    return "\n".join(lines)
