"""The four experiments: trajectories, process matrices, and parameter sweeps."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..engine import evolve
from ..linalg import embed_qubit, projector, state_fidelity
from ..protocols import Protocol, build_schedule, target_unitary
from ..tomography import (
    TOMO_INPUTS, chi_from_outputs, ideal_chi, process_fidelity, reconstruct_state,
    simulate_measurement, stokes_from_record,
)
from .config import RunConfig, SweepSpec

TRAJECTORY_COLUMNS = ("protocol", "t_us", "p_e", "p_g", "p_a", "s_x", "s_y", "s_z", "fidelity_to_target")
SWEEP_COLUMNS = ("param_name", "param_value", "protocol", "state_fidelity", "process_fidelity",
                 "accumulated_pa_us", "final_leakage")


def stream_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator for one independent stream of measurements."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


def initial_qubit_state(label: str) -> np.ndarray:
    return TOMO_INPUTS[label]


def measured_fidelity(rho: np.ndarray, target: np.ndarray, shots: int, rng) -> float:
    """Fidelity of the qubit block, as seen through (possibly sampled) tomography.

    The reconstruction keeps the leaked population out of the qubit trace,
    so for ``shots=0`` this equals the fidelity of the exact qubit block.
    """
    record = simulate_measurement(rho, shots, rng)
    rec = reconstruct_state(record, project=shots > 0, leakage_consistent=True)
    return state_fidelity(rec, target)


def run_trajectory(config: RunConfig, protocol: Protocol) -> list[dict]:
    p = config.gate_params()
    psi0 = initial_qubit_state(config.initial_state)
    target = projector(target_unitary(p) @ psi0)
    result = evolve(build_schedule(protocol, p), embed_qubit(projector(psi0)),
                    config.noise_model(), config.sim_config())
    rng = stream_rng(config.seed, list(Protocol).index(protocol))
    rows = []
    pops = result.trajectory.populations()
    for t, rho, pop in zip(result.trajectory.times, result.trajectory.states, pops):
        record = simulate_measurement(rho, config.shots, rng)
        s = stokes_from_record(record)
        rec = reconstruct_state(record, project=config.shots > 0, leakage_consistent=True)
        rows.append({
            "protocol": protocol.value,
            "t_us": t * 1e6,
            "p_e": pop[0], "p_g": pop[1], "p_a": pop[2],
            "s_x": s.s_x, "s_y": s.s_y, "s_z": s.s_z,
            "fidelity_to_target": state_fidelity(rec, target),
        })
    return rows


def run_tomography(config: RunConfig, protocol: Protocol, seed: int | None = None) -> dict:
    """Process tomography of one protocol on the four probe inputs.

    Returns chi from the raw reconstructions and from physicality-projected
    ones, the process fidelity of each against the ideal gate, and the raw
    measurement records.
    """
    seed = config.seed if seed is None else seed
    p = config.gate_params()
    schedule = build_schedule(protocol, p)
    noise, sim = config.noise_model(), config.sim_config()
    pidx = list(Protocol).index(protocol)
    records, raw, projected, results = {}, {}, {}, {}
    for i, (label, psi) in enumerate(TOMO_INPUTS.items()):
        res = evolve(schedule, embed_qubit(projector(psi)), noise, sim)
        rec = simulate_measurement(res.final_state, config.shots, stream_rng(seed, pidx, i))
        records[label] = rec
        results[label] = res
        raw[label] = reconstruct_state(rec, project=False)
        projected[label] = reconstruct_state(rec, project=True)
    chi = chi_from_outputs(raw)
    chi_proj = chi_from_outputs(projected)
    chi_id = ideal_chi(target_unitary(p))
    return {
        "protocol": protocol.value,
        "chi": chi,
        "chi_projected": chi_proj,
        "chi_ideal": chi_id,
        "process_fidelity": process_fidelity(chi, chi_id),
        "process_fidelity_projected": process_fidelity(chi_proj, chi_id),
        "records": records,
        "results": results,
    }


def sweep_point(config: RunConfig, protocol: Protocol, seed: int) -> dict:
    p = config.gate_params()
    psi0 = initial_qubit_state(config.initial_state)
    target = projector(target_unitary(p) @ psi0)
    res = evolve(build_schedule(protocol, p), embed_qubit(projector(psi0)),
                 config.noise_model(), config.sim_config())
    pidx = list(Protocol).index(protocol)
    fid = measured_fidelity(res.final_state, target, config.shots, stream_rng(seed, pidx, 99))
    tomo = run_tomography(config, protocol, seed)
    return {
        "state_fidelity": fid,
        "process_fidelity": tomo["process_fidelity"],
        "accumulated_pa_us": res.accumulated_pa * 1e6,
        "final_leakage": res.final_leakage,
        "final_state": res.final_state,
    }


def run_sweep(config: RunConfig, sweep: SweepSpec, workers: int = 1) -> list[dict]:
    """Evaluate every protocol on the same grid.

    Point ``i`` draws its measurement noise from ``seed ^ i``; tasks may run
    concurrently but rows come back in grid order.
    """
    grid = sweep.grid()
    tasks = [(i, float(x), proto) for i, x in enumerate(grid) for proto in config.protocols]

    def work(task):
        i, x, proto = task
        return sweep_point(sweep.apply(config, x), proto, config.seed ^ i)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, tasks))
    else:
        results = [work(t) for t in tasks]
    rows = []
    for (i, x, proto), res in zip(tasks, results):
        rows.append({
            "param_name": sweep.parameter,
            "param_value": x,
            "protocol": proto.value,
            **{k: res[k] for k in SWEEP_COLUMNS[3:]},
            "_final_state": res["final_state"],
        })
    return rows


def asymmetry(rows: list[dict], column: str = "state_fidelity") -> list[dict]:
    """Signed ``F(+x) - F(-x)`` for every mirrored pair of grid points ``x > 0``."""
    table = {(r["protocol"], round(r["param_value"], 12)): r[column] for r in rows}
    out = []
    for (proto, x), f_plus in sorted(table.items()):
        if x > 0 and (proto, -x) in table:
            out.append({"protocol": proto, "abs_value": x, "difference": f_plus - table[(proto, -x)]})
    return out
