"""Encoder, disentangle-measure-re-entangle cycle, and the n-cycle runner.

A protocol run entangles the data qubit with one or two auxiliaries, then
alternates short noise evolutions with measurement cycles. Each cycle
disentangles an auxiliary with a CNOT, measures it, and (on the no-error
outcome) re-entangles with a second CNOT. A clean encoded state passes
through a cycle untouched; a noise-perturbed state has its leakage outside
the code space removed by the auxiliary projection, and a measured 1 flags
that the protection failed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import (
    PAULI_X,
    StateVector,
    ZeroProbabilityError,
    append_aux,
    apply_cnot,
    apply_single,
    fidelity,
    measure_qubit,
    project_qubit,
)
from .noise import NoiseSpec, apply_propagator, build_hamiltonian, propagator

AUX_SINGLE = "single"
AUX_DUAL_ALTERNATING = "dual-alternating"
AUX_STRATEGIES = (AUX_SINGLE, AUX_DUAL_ALTERNATING)

MODE_POST_SELECTED = "post-selected"
MODE_STOCHASTIC = "stochastic"
MEASUREMENT_MODES = (MODE_POST_SELECTED, MODE_STOCHASTIC)

ABORT_ON_DETECT = "abort-on-detect"
RESET_AND_CONTINUE = "reset-and-continue"
ABORT_POLICIES = (ABORT_ON_DETECT, RESET_AND_CONTINUE)

#: residual auxiliary amplitude tolerated when decoding
DECODE_TOL = 1e-9


@dataclass
class ZenoSchedule:
    """How a protocol run is sliced: total time, cycle count, strategy, mode.

    The per-cycle interval total_time / cycles is always recomputed from the
    current fields, never stored.
    """

    total_time: float
    cycles: int
    aux_strategy: str = AUX_SINGLE
    measurement_mode: str = MODE_POST_SELECTED
    seed: int | None = None
    abort_policy: str = ABORT_ON_DETECT

    def __post_init__(self):
        if not isinstance(self.cycles, (int, np.integer)) or self.cycles < 1:
            raise ValueError(f"cycles must be a positive integer, got {self.cycles!r}")
        self.cycles = int(self.cycles)
        self.total_time = float(self.total_time)
        if not math.isfinite(self.total_time) or self.total_time < 0:
            raise ValueError(f"total_time must be finite and >= 0, got {self.total_time!r}")
        if self.aux_strategy not in AUX_STRATEGIES:
            raise ValueError(
                f"aux_strategy must be one of {AUX_STRATEGIES}, got {self.aux_strategy!r}"
            )
        if self.measurement_mode not in MEASUREMENT_MODES:
            raise ValueError(
                f"measurement_mode must be one of {MEASUREMENT_MODES}, got {self.measurement_mode!r}"
            )
        if self.abort_policy not in ABORT_POLICIES:
            raise ValueError(
                f"abort_policy must be one of {ABORT_POLICIES}, got {self.abort_policy!r}"
            )
        if self.measurement_mode == MODE_STOCHASTIC:
            if self.seed is None or not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
                raise ValueError("stochastic mode requires a non-negative integer seed")
            self.seed = int(self.seed)

    @property
    def interval(self) -> float:
        """Duration of one noise slice, total_time / cycles."""
        return self.total_time / self.cycles

    @property
    def aux_count(self) -> int:
        return 1 if self.aux_strategy == AUX_SINGLE else 2


@dataclass(frozen=True)
class CycleOutcome:
    """Result of one measurement cycle: the auxiliary bit, its Born
    probability at measurement time, and the register state afterwards."""

    aux_outcome: int
    branch_probability: float
    state_after: StateVector


@dataclass
class ProtocolResult:
    """Aggregate of a full run.

    survival_probability is the product of no-error branch probabilities in
    post-selected mode, and the 0/1 all-outcomes-zero indicator in stochastic
    mode. final_fidelity compares the terminal register state against the
    ideal noiseless encoded state.
    """

    survival_probability: float
    final_fidelity: float
    detected: bool
    cycle_log: list[CycleOutcome] = field(default_factory=list)
    final_state: StateVector | None = None


def encode(data: StateVector, aux_count: int) -> StateVector:
    """Entangle a one-qubit state with aux_count fresh |0> auxiliaries.

    (a0, a1) becomes a0|00> + a1|11> for one auxiliary, a0|000> + a1|111>
    for two; the data qubit stays at index 0.
    """
    if data.num_qubits != 1:
        raise ValueError(f"data must be a single qubit, got {data.num_qubits}")
    if not data.is_normalized:
        raise ValueError("data state must be normalized")
    if aux_count not in (1, 2):
        raise ValueError(f"aux_count must be 1 or 2, got {aux_count!r}")
    state = append_aux(data, aux_count)
    for aux in range(1, aux_count + 1):
        state = apply_cnot(state, 0, aux)
    return state


def zeno_cycle(
    state: StateVector,
    data_q: int,
    aux_q: int,
    mode: str = MODE_POST_SELECTED,
    rng: np.random.Generator | None = None,
) -> CycleOutcome:
    """One disentangle-measure-re-entangle cycle on (data_q, aux_q).

    The circuit is CNOT(data->aux), measure aux, CNOT(data->aux). In
    post-selected mode the aux=0 branch is taken and its probability
    recorded; a zero-probability branch raises ZeroProbabilityError, which
    signals certain detection. In stochastic mode the outcome is sampled with
    ``rng``; on outcome 1 the re-entangling CNOT is skipped (the process has
    failed) and the post-measurement state is returned as-is.
    """
    if data_q == aux_q:
        raise ValueError("data_q and aux_q must differ")
    if mode not in MEASUREMENT_MODES:
        raise ValueError(f"mode must be one of {MEASUREMENT_MODES}, got {mode!r}")
    disentangled = apply_cnot(state, data_q, aux_q)
    if mode == MODE_POST_SELECTED:
        prob, collapsed = project_qubit(disentangled, aux_q, 0)
        return CycleOutcome(0, prob, apply_cnot(collapsed, data_q, aux_q))
    if rng is None:
        raise ValueError("stochastic mode requires an rng")
    record, collapsed = measure_qubit(disentangled, aux_q, rng)
    if record.outcome == 0:
        return CycleOutcome(0, record.probability, apply_cnot(collapsed, data_q, aux_q))
    return CycleOutcome(1, record.probability, collapsed)


def run_protocol(data: StateVector, noise: NoiseSpec, schedule: ZenoSchedule) -> ProtocolResult:
    """Encode, then alternate noise slices with measurement cycles.

    The register evolves under the noise Hamiltonian for total_time / cycles
    between cycles. With the dual-alternating strategy, cycles address the
    two auxiliaries in turn so the idle one stays entangled throughout. A
    measured 1 (or an impossible no-error branch in post-selected mode) sets
    ``detected``; abort-on-detect stops the loop, reset-and-continue re-zeros
    the auxiliary, re-entangles, and keeps going.
    """
    aux_count = schedule.aux_count
    register_size = 1 + aux_count
    if noise.num_qubits != register_size:
        raise ValueError(
            f"noise spec covers {noise.num_qubits} qubit(s) but the encoded register has "
            f"{register_size} ({aux_count} auxiliaries)"
        )
    encoded = encode(data, aux_count)
    hamiltonian = build_hamiltonian(noise, register_size)
    step = propagator(hamiltonian, schedule.interval)
    rng = (
        np.random.default_rng(schedule.seed)
        if schedule.measurement_mode == MODE_STOCHASTIC
        else None
    )

    state = encoded
    survival = 1.0
    detected = False
    cycle_log: list[CycleOutcome] = []
    for k in range(schedule.cycles):
        state = apply_propagator(state, step)
        aux_q = 1 if aux_count == 1 else 1 + (k % 2)
        try:
            outcome = zeno_cycle(state, 0, aux_q, schedule.measurement_mode, rng)
        except ZeroProbabilityError:
            # the no-error branch is impossible: detection is certain
            survival = 0.0
            detected = True
            break
        cycle_log.append(outcome)
        state = outcome.state_after
        if schedule.measurement_mode == MODE_POST_SELECTED:
            survival *= outcome.branch_probability
        elif outcome.aux_outcome == 1:
            detected = True
            if schedule.abort_policy == ABORT_ON_DETECT:
                break
            # reset-and-continue: re-zero the measured auxiliary, re-entangle
            state = apply_single(state, PAULI_X, aux_q)
            state = apply_cnot(state, 0, aux_q)

    if schedule.measurement_mode == MODE_STOCHASTIC:
        survival = 0.0 if detected else 1.0
    return ProtocolResult(
        survival_probability=survival,
        final_fidelity=fidelity(state, encoded),
        detected=detected,
        cycle_log=cycle_log,
        final_state=state,
    )


def decode(state: StateVector, aux_count: int) -> StateVector:
    """Invert the encoder and drop the auxiliaries.

    The state must sit in the code space: after the inverse CNOTs, any
    residual amplitude on a non-zero auxiliary pattern above DECODE_TOL is an
    error.
    """
    if aux_count not in (1, 2):
        raise ValueError(f"aux_count must be 1 or 2, got {aux_count!r}")
    if state.num_qubits != 1 + aux_count:
        raise ValueError(
            f"expected a {1 + aux_count}-qubit register for {aux_count} auxiliaries, "
            f"got {state.num_qubits}"
        )
    for aux in range(1, aux_count + 1):
        state = apply_cnot(state, 0, aux)
    amps = state.amplitudes
    aux_mask = (1 << aux_count) - 1  # auxiliaries occupy the low index bits
    residual_idx = (np.arange(amps.size) & aux_mask) != 0
    residual = float(np.linalg.norm(amps[residual_idx]))
    if residual > DECODE_TOL:
        raise ValueError(
            f"residual auxiliary amplitude {residual:.3e} exceeds tolerance {DECODE_TOL}"
        )
    return StateVector(1, [amps[0], amps[1 << aux_count]])
