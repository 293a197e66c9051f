"""Command-line driver: config parsing, experiment execution, structured output.

Configs are single JSON files (nested sections as objects); complex vectors
and matrices are encoded as row-major lists of [re, im] pairs so fixtures stay
diffable and language-neutral. Series output is CSV with a fixed header,
structural dumps are JSON. All commands are deterministic given (config,
seed); per-trajectory streams are derived as default_rng([master_seed, index]).

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .config import DEFAULT_TOLERANCES
from .decomposition import von_neumann_entropy
from .dynamics import (MasterGenerator, ResetSchedule, assemble_hamiltonian,
                       master_evolve, unitary_evolve)
from .errors import (BranchCapError, ConfigError, DimensionMismatchError, MatgravError,
                     NumericalError, ValidationError)
from .events import (ALTERNATIVE, PLAIN, VARIANTS, compare_statistical_vs_unreset,
                     declare_events_alternative, declare_events_modified,
                     declare_events_plain, enumerate_branches, run_trajectory,
                     statistical_operator)
from .linalg import (GRAVITY, MATTER, BipartiteSpace, DensityOperator, HermitianOperator,
                     PureState, basis_state, partial_trace, random_pure_state, tensor_state,
                     trace_distance)
from .scenarios import (PartitionBoxModel, ToyModelSpec, binary_entropy, build_toy_model,
                        entanglement_growth_curve, parity_operator, swap_operator,
                        symmetry_demo)

SERIES_HEADER = "t,S_matter,S_gravity,purity,trace_distance_to_unreset"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _matrix_pairs(mat: np.ndarray) -> list[list[float]]:
    flat = np.asarray(mat, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _write_json(obj, path: str | None):
    _write(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n", path)


# ---------------------------------------------------------------------------
# config parsing


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError("config", f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}")


def _get(cfg: dict, key: str, expected=None, default=None, required=False):
    parts = key.split(".")
    node = cfg
    for p in parts:
        if not isinstance(node, dict) or p not in node:
            if required:
                raise ConfigError(key, "missing required key")
            return default
        node = node[p]
    if expected is not None and not isinstance(node, expected):
        names = expected.__name__ if isinstance(expected, type) else \
            "/".join(t.__name__ for t in expected)
        raise ConfigError(key, f"expected {names}, got {type(node).__name__}")
    return node


def _complex_vector(obj, length: int, key: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != length:
        raise ConfigError(key, f"expected a list of {length} [re, im] pairs")
    out = np.zeros(length, dtype=complex)
    for i, pair in enumerate(obj):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(key, f"entry {i} is not an [re, im] pair")
        out[i] = complex(pair[0], pair[1])
    return out


def _complex_matrix(obj, dim: int, key: str) -> np.ndarray:
    return _complex_vector(obj, dim * dim, key).reshape(dim, dim)


def parse_space(cfg: dict) -> BipartiteSpace:
    dm = _get(cfg, "space.dim_matter", int, required=True)
    dg = _get(cfg, "space.dim_gravity", int, required=True)
    try:
        return BipartiteSpace(dm, dg)
    except ValidationError as exc:
        raise ConfigError("space", str(exc))


def parse_hamiltonian(cfg: dict, space: BipartiteSpace) -> HermitianOperator:
    kind = _get(cfg, "hamiltonian.kind", str, default="toy")
    if kind == "toy":
        spec = parse_toy_spec(cfg, space)
        _, h = build_toy_model(spec)
        return h
    if kind == "inline":
        dm, dg, dt = space.dim_matter, space.dim_gravity, space.total
        def piece(key, dim):
            raw = _get(cfg, key, list)
            mat = np.zeros((dim, dim), dtype=complex) if raw is None \
                else _complex_matrix(raw, dim, key)
            try:
                return HermitianOperator(mat)
            except (ValidationError, DimensionMismatchError) as exc:
                raise ConfigError(key, str(exc))
        try:
            return assemble_hamiltonian(piece("hamiltonian.h_matter", dm),
                                        piece("hamiltonian.h_gravity", dg),
                                        piece("hamiltonian.h_int", dt))
        except DimensionMismatchError as exc:
            raise ConfigError("hamiltonian", str(exc))
    raise ConfigError("hamiltonian.kind", f"unknown kind {kind!r} (expected toy or inline)")


def parse_toy_spec(cfg: dict, space: BipartiteSpace) -> ToyModelSpec:
    ms = _get(cfg, "hamiltonian.matter_spectrum", list,
              default=list(np.arange(space.dim_matter, dtype=float)))
    gs = _get(cfg, "hamiltonian.gravity_spectrum", list,
              default=list(np.arange(space.dim_gravity, dtype=float)))
    try:
        return ToyModelSpec(
            dim_matter=space.dim_matter,
            dim_gravity=space.dim_gravity,
            coupling_strength=float(_get(cfg, "hamiltonian.coupling", (int, float), default=1.0)),
            seed=_get(cfg, "hamiltonian.seed", int, default=42),
            matter_spectrum=tuple(float(x) for x in ms),
            gravity_spectrum=tuple(float(x) for x in gs),
        )
    except (ValidationError, DimensionMismatchError) as exc:
        raise ConfigError("hamiltonian", str(exc))


def parse_generator(cfg: dict, h: HermitianOperator) -> MasterGenerator:
    dim = h.dimension
    raw_jumps = _get(cfg, "generator.jump_operators", list, default=[])
    raw_rates = _get(cfg, "generator.rates", list, default=[])
    if len(raw_jumps) != len(raw_rates):
        raise ConfigError("generator.rates",
                          f"{len(raw_rates)} rates for {len(raw_jumps)} jump operators")
    jumps = tuple(_complex_matrix(j, dim, f"generator.jump_operators[{k}]")
                  for k, j in enumerate(raw_jumps))
    try:
        return MasterGenerator(h, jumps, np.asarray(raw_rates, dtype=float))
    except (ValidationError, DimensionMismatchError) as exc:
        raise ConfigError("generator", str(exc))


def parse_initial_pure(cfg: dict, space: BipartiteSpace) -> PureState:
    kind = _get(cfg, "initial_state.kind", str, required=True)
    try:
        if kind == "product":
            m = _complex_vector(_get(cfg, "initial_state.matter", list, required=True),
                                space.dim_matter, "initial_state.matter")
            g = _complex_vector(_get(cfg, "initial_state.gravity", list, required=True),
                                space.dim_gravity, "initial_state.gravity")
            return tensor_state(m, g, space)
        if kind == "total":
            amps = _complex_vector(_get(cfg, "initial_state.amplitudes", list, required=True),
                                   space.total, "initial_state.amplitudes")
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ConfigError("initial_state.amplitudes", "zero vector")
            return PureState(amps / norm, space)
        if kind == "basis":
            return basis_state(_get(cfg, "initial_state.index", int, required=True), space)
        if kind == "random_pure":
            seed = _get(cfg, "initial_state.seed", int, required=True)
            return random_pure_state(space, np.random.default_rng(seed))
    except (ValidationError, DimensionMismatchError) as exc:
        raise ConfigError("initial_state", str(exc))
    raise ConfigError("initial_state.kind",
                      f"unknown kind {kind!r} (expected product, total, basis or random_pure)")


def parse_initial_density(cfg: dict, space: BipartiteSpace) -> DensityOperator:
    kind = _get(cfg, "initial_state.kind", str, required=True)
    if kind == "density":
        mat = _complex_matrix(_get(cfg, "initial_state.matrix", list, required=True),
                              space.total, "initial_state.matrix")
        try:
            return DensityOperator(mat)
        except (ValidationError, DimensionMismatchError) as exc:
            raise ConfigError("initial_state.matrix", str(exc))
    # any pure-state kind is accepted and converted to its projector
    return parse_initial_pure(cfg, space).density()


def parse_schedule(cfg: dict) -> ResetSchedule:
    times = _get(cfg, "schedule.times", list, default=[])
    t0 = float(_get(cfg, "schedule.initial_time", (int, float), default=0.0))
    try:
        return ResetSchedule(np.asarray(times, dtype=float), t0)
    except (ValidationError, ValueError) as exc:
        raise ConfigError("schedule", str(exc))


def parse_variant(cfg: dict) -> str:
    variant = _get(cfg, "events.variant", str, default=PLAIN)
    if variant not in VARIANTS:
        raise ConfigError("events.variant", f"unknown variant {variant!r}")
    return variant


def parse_times(cfg: dict) -> np.ndarray:
    raw = _get(cfg, "times", (list, dict), required=True)
    if isinstance(raw, dict):
        start = _get(cfg, "times.start", (int, float), required=True)
        stop = _get(cfg, "times.stop", (int, float), required=True)
        num = _get(cfg, "times.num", int, required=True)
        if num < 1:
            raise ConfigError("times.num", "must be >= 1")
        return np.linspace(float(start), float(stop), num)
    return np.asarray(raw, dtype=float)


def _resolve_seed(cfg: dict, args, required: bool) -> int | None:
    seed = args.seed if args.seed is not None else _get(cfg, "seed", int)
    if seed is None and required:
        raise ConfigError("seed", "a seed is required for randomized operations")
    if seed is not None and not 0 <= seed < 2**64:
        raise ConfigError("seed", "seed must fit in an unsigned 64-bit integer")
    return seed


def _resolve_out(cfg: dict, args) -> str | None:
    return args.out if args.out is not None else _get(cfg, "output.path", str)


def _resolve_format(cfg: dict, args, default: str) -> str:
    fmt = args.format if args.format is not None else \
        _get(cfg, "output.format", str, default=default)
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format", f"unknown format {fmt!r}")
    return fmt


def _dt_max(cfg: dict) -> float:
    dt = float(_get(cfg, "dt_max", (int, float), default=1e-3))
    if dt <= 0:
        raise ConfigError("dt_max", "must be positive")
    return dt


# ---------------------------------------------------------------------------
# commands


def _series_rows(space, h, psi0, times):
    rows = []
    for t in times:
        psi_t = unitary_evolve(psi0, h, float(t))
        rho_m = partial_trace(psi_t, space, MATTER)
        rho_g = partial_trace(psi_t, space, GRAVITY)
        s_m = von_neumann_entropy(rho_m)
        s_g = von_neumann_entropy(rho_g)
        if abs(s_m - s_g) > 1e-8:
            raise NumericalError(
                f"entropy equality violated at t={t}: |{s_m} - {s_g}| > 1e-8")
        if s_m < -1e-12 or s_g < -1e-12:
            raise NumericalError(f"negative entropy at t={t}")
        rows.append((float(t), s_m, s_g, rho_m.purity(), None))
    return rows


def _series_text(rows, fmt: str) -> str:
    if fmt == "csv":
        lines = [SERIES_HEADER]
        for t, s_m, s_g, purity, dist in rows:
            tail = "" if dist is None else _fmt(dist)
            lines.append(",".join([_fmt(t), _fmt(s_m), _fmt(s_g), _fmt(purity), tail]))
        return "\n".join(lines) + "\n"
    records = [{"t": t, "S_matter": s_m, "S_gravity": s_g, "purity": purity,
                "trace_distance_to_unreset": dist}
               for t, s_m, s_g, purity, dist in rows]
    return json.dumps(_jsonable(records), indent=2, sort_keys=True) + "\n"


def cmd_evolve(cfg: dict, args) -> int:
    space = parse_space(cfg)
    h = parse_hamiltonian(cfg, space)
    psi0 = parse_initial_pure(cfg, space)
    times = parse_times(cfg)
    fmt = _resolve_format(cfg, args, "csv")
    rows = _series_rows(space, h, psi0, times)
    _write(_series_text(rows, fmt), _resolve_out(cfg, args))
    return 0


def _state_and_dynamics(cfg: dict, variant: str):
    """Initial state plus matching dynamics for the chosen variant."""
    space = parse_space(cfg)
    h = parse_hamiltonian(cfg, space)
    if variant == ALTERNATIVE:
        return space, parse_initial_pure(cfg, space), h
    gen = parse_generator(cfg, h)
    rho0 = parse_initial_density(cfg, space)
    if rho0.dimension != gen.dimension:
        raise ConfigError("initial_state",
                          f"dimension {rho0.dimension} != generator dimension {gen.dimension}")
    return space, rho0, gen


def cmd_events(cfg: dict, args) -> int:
    variant = parse_variant(cfg)
    schedule = parse_schedule(cfg)
    seed = _resolve_seed(cfg, args, required=(variant != PLAIN))
    rng = np.random.default_rng(seed) if seed is not None else None
    space, state, dynamics = _state_and_dynamics(cfg, variant)
    at_time = float(_get(cfg, "events.at_time", (int, float),
                         default=schedule.initial_time))
    if at_time > schedule.initial_time:
        if variant == ALTERNATIVE:
            state = unitary_evolve(state, dynamics, at_time - schedule.initial_time)
        else:
            state = master_evolve(state, dynamics, schedule.initial_time, at_time,
                                  _dt_max(cfg))
    if variant == PLAIN:
        ev = declare_events_plain(state)
    elif variant == ALTERNATIVE:
        ev = declare_events_alternative(state, space, rng=rng)
    else:
        ev = declare_events_modified(state, rng=rng)
    dump = {
        "variant": variant,
        "at_time": at_time,
        "probabilities": list(ev.probabilities),
        "multiplicities": list(ev.multiplicities()),
        "probability_sum": float(ev.probabilities.sum()),
    }
    if _get(cfg, "events.include_matrices", bool, default=False):
        if variant == PLAIN:
            dump["projectors"] = [_matrix_pairs(e.projector) for e in ev.events]
        elif variant == ALTERNATIVE:
            dump["matter_vectors"] = [_matrix_pairs(e.matter_vector) for e in ev.events]
            dump["gravity_vectors"] = [_matrix_pairs(e.gravity_vector) for e in ev.events]
        else:
            dump["vectors"] = [_matrix_pairs(e.vector) for e in ev.events]
    _write_json(dump, _resolve_out(cfg, args))
    return 0


def _final_time(cfg: dict, schedule: ResetSchedule) -> float:
    return float(_get(cfg, "final_time", (int, float), default=schedule.last_time))


def _trajectory_log(traj, variant: str) -> dict:
    resets = []
    for t, idx, probs, state in zip(traj.reset_times, traj.chosen_indices,
                                    traj.probabilities_at_reset, traj.states_after_reset):
        if variant == ALTERNATIVE:
            rho_m = partial_trace(state, state.space, MATTER)
            entropy = von_neumann_entropy(rho_m)
        else:
            entropy = von_neumann_entropy(state)
        resets.append({"time": float(t), "chosen_index": int(idx),
                       "probabilities": list(probs),
                       "entropy_after_reset": entropy})
    return {"variant": variant, "seed": traj.seed, "resets": resets,
            "final_time": traj.final_time}


def cmd_trajectory(cfg: dict, args) -> int:
    variant = parse_variant(cfg)
    schedule = parse_schedule(cfg)
    seed = _resolve_seed(cfg, args, required=True)
    _, state, dynamics = _state_and_dynamics(cfg, variant)
    traj = run_trajectory(state, dynamics, schedule, variant,
                          np.random.default_rng(seed), dt_max=_dt_max(cfg),
                          final_time=_final_time(cfg, schedule), seed=seed)
    _write_json(_trajectory_log(traj, variant), _resolve_out(cfg, args))
    return 0


def cmd_ensemble(cfg: dict, args) -> int:
    variant = parse_variant(cfg)
    schedule = parse_schedule(cfg)
    seed = _resolve_seed(cfg, args, required=True)
    samples = args.samples if args.samples is not None else \
        _get(cfg, "samples", int, default=1000)
    if samples < 1:
        raise ConfigError("samples", "must be >= 1")
    space, state, dynamics = _state_and_dynamics(cfg, variant)
    dt_max = _dt_max(cfg)
    t_final = _final_time(cfg, schedule)

    counts: dict[tuple[int, ...], int] = {}
    mean_state = None
    for index in range(samples):
        rng_i = np.random.default_rng([seed, index])
        traj = run_trajectory(state, dynamics, schedule, variant, rng_i, dt_max=dt_max,
                              final_time=t_final, seed=index)
        counts[traj.chosen_indices] = counts.get(traj.chosen_indices, 0) + 1
        if variant == ALTERNATIVE:
            final = partial_trace(traj.final_state, space, MATTER).matrix
        else:
            final = traj.final_state.matrix
        mean_state = final if mean_state is None else mean_state + final
    mean_state = mean_state / samples
    mean_state = 0.5 * (mean_state + mean_state.conj().T)
    mean_rho = DensityOperator(mean_state,
                               tolerances=DEFAULT_TOLERANCES.for_integrator_output())

    tree = enumerate_branches(state, dynamics, schedule, variant, dt_max=dt_max)
    stat = statistical_operator(tree, dynamics, t_final)
    table = []
    for b in sorted(tree.branches, key=lambda b: b.indices):
        freq = counts.get(b.indices, 0) / samples
        sigma = float(np.sqrt(b.probability * (1.0 - b.probability) / samples))
        table.append({"indices": list(b.indices), "probability": b.probability,
                      "frequency": freq, "sigma": sigma,
                      "deviation_sigmas": abs(freq - b.probability) / sigma if sigma else 0.0})
    summary = {
        "variant": variant,
        "samples": samples,
        "master_seed": seed,
        "final_time": t_final,
        "branches": table,
        "mean_state_distance_to_statistical": trace_distance(mean_rho, stat),
        "statistical_entropy": von_neumann_entropy(stat),
    }
    _write_json(summary, _resolve_out(cfg, args))
    return 0


def cmd_branches(cfg: dict, args) -> int:
    variant = parse_variant(cfg)
    schedule = parse_schedule(cfg)
    seed = _resolve_seed(cfg, args, required=(variant != PLAIN))
    rng = np.random.default_rng(seed) if seed is not None else None
    _, state, dynamics = _state_and_dynamics(cfg, variant)
    dt_max = _dt_max(cfg)
    prune_eps = float(_get(cfg, "prune_eps", (int, float), default=0.0))
    cap = _get(cfg, "branch_cap", int)
    t_final = _final_time(cfg, schedule)
    tree = enumerate_branches(state, dynamics, schedule, variant, prune_eps=prune_eps,
                              rng=rng, dt_max=dt_max, branch_cap=cap)
    report = compare_statistical_vs_unreset(state, dynamics, schedule, variant, t_final,
                                            dt_max=dt_max, prune_eps=prune_eps,
                                            rng=np.random.default_rng(seed) if seed is not None else None,
                                            branch_cap=cap)
    dump = {
        "variant": variant,
        "depth": tree.depth,
        "pruned_mass": tree.pruned_mass,
        "branches": [{"indices": list(b.indices), "probability": b.probability}
                     for b in tree.branches],
        "probability_sum": float(sum(b.probability for b in tree.branches)),
        "final_time": t_final,
        "comparison": {
            "trace_distance": report.trace_distance,
            "entropy_statistical": report.entropy_statistical,
            "entropy_unreset": report.entropy_unreset,
            "entropy_difference": report.entropy_difference,
        },
    }
    _write_json(dump, _resolve_out(cfg, args))
    return 0


def cmd_scenario(cfg: dict, args) -> int:
    name = _get(cfg, "scenario.name", str, required=True)
    if name == "partition_box":
        return _scenario_partition_box(cfg, args)
    if name == "symmetry_demo":
        return _scenario_symmetry_demo(cfg, args)
    if name == "growth":
        return _scenario_growth(cfg, args)
    raise ConfigError("scenario.name",
                      f"unknown scenario {name!r} (expected partition_box, symmetry_demo or growth)")


def _scenario_partition_box(cfg: dict, args) -> int:
    n_sites = _get(cfg, "scenario.n_sites", int, default=8)
    try:
        model = PartitionBoxModel(n_sites)
    except ValidationError as exc:
        raise ConfigError("scenario.n_sites", str(exc))
    kind = _get(cfg, "scenario.state.kind", str, default="symmetric")
    if kind == "symmetric":
        half = n_sites // 2
        left = np.concatenate([np.ones(half), np.zeros(half)]) / np.sqrt(half)
        right = np.concatenate([np.zeros(half), np.ones(half)]) / np.sqrt(half)
        psi = (left + right) / np.sqrt(2.0)
    elif kind == "random":
        seed = _get(cfg, "scenario.state.seed", int, required=True)
        rng = np.random.default_rng(seed)
        psi = rng.standard_normal(n_sites) + 1j * rng.standard_normal(n_sites)
        psi /= np.linalg.norm(psi)
    elif kind == "inline":
        psi = _complex_vector(_get(cfg, "scenario.state.amplitudes", list, required=True),
                              n_sites, "scenario.state.amplitudes")
        psi /= np.linalg.norm(psi)
    else:
        raise ConfigError("scenario.state.kind", f"unknown kind {kind!r}")
    rho = model.measure_left_right(psi)
    p_left = model.left_weight(psi)
    entropy = von_neumann_entropy(rho)
    _write_json({
        "scenario": "partition_box",
        "n_sites": n_sites,
        "p_left": p_left,
        "entropy": entropy,
        "binary_entropy_of_p_left": binary_entropy(p_left),
    }, _resolve_out(cfg, args))
    return 0


def _scenario_symmetry_demo(cfg: dict, args) -> int:
    variant = parse_variant(cfg)
    seed = _resolve_seed(cfg, args, required=(variant != PLAIN))
    rng = np.random.default_rng(seed) if seed is not None else None
    sym_name = _get(cfg, "scenario.symmetry", str, default="parity")
    if variant == ALTERNATIVE:
        space = parse_space(cfg)
        state = parse_initial_pure(cfg, space)
        dim = space.dim_matter
    else:
        space = parse_space(cfg)
        state = parse_initial_density(cfg, space)
        dim = state.dimension
    if sym_name == "parity":
        u = parity_operator(dim)
    elif sym_name == "swap":
        u = swap_operator(dim)
    else:
        raise ConfigError("scenario.symmetry", f"unknown symmetry {sym_name!r}")
    try:
        report = symmetry_demo(u, state, variant, rng=rng)
    except ValidationError as exc:
        raise ConfigError("initial_state", str(exc))
    _write_json({
        "scenario": "symmetry_demo",
        "variant": variant,
        "symmetry": sym_name,
        "precondition_norm": report.precondition_norm,
        "probabilities": list(report.probabilities),
        "event_commutator_norms": list(report.event_norms),
        "post_reset_commutator_norms": list(report.post_reset_norms),
    }, _resolve_out(cfg, args))
    return 0


def _scenario_growth(cfg: dict, args) -> int:
    space = parse_space(cfg)
    spec = parse_toy_spec(cfg, space)
    psi0 = parse_initial_pure(cfg, space)
    times = parse_times(cfg)
    fmt = _resolve_format(cfg, args, "csv")
    try:
        curve = entanglement_growth_curve(spec, psi0, times)
    except ValidationError as exc:
        raise ConfigError("initial_state", str(exc))
    _, h = build_toy_model(spec)
    rows = _series_rows(space, h, psi0, times)
    rows = [(t, s, s_g, purity, dist) for (t, _, s_g, purity, dist), s
            in zip(rows, curve)]
    _write(_series_text(rows, fmt), _resolve_out(cfg, args))
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matgrav",
        description="Bipartite matter-gravity entanglement and reset-event simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("evolve", "unitary evolution series: entropies, purity per time"),
        ("events", "dump the event set declared at a given time"),
        ("trajectory", "run one stochastic reset trajectory"),
        ("ensemble", "run many trajectories and compare to the branch tree"),
        ("branches", "exhaustive branch tree and statistical-operator report"),
        ("scenario", "run a named shipped scenario"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--seed", type=int, default=None,
                       help="unsigned 64-bit seed, overrides the config")
        p.add_argument("--out", default=None, help="output path (default: config or stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--samples", type=int, default=None,
                       help="ensemble size (ensemble command only)")
    return parser


_DISPATCH = {
    "evolve": cmd_evolve,
    "events": cmd_events,
    "trajectory": cmd_trajectory,
    "ensemble": cmd_ensemble,
    "branches": cmd_branches,
    "scenario": cmd_scenario,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return _DISPATCH[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, DimensionMismatchError) as exc:
        print(f"error: invalid configuration or state: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 3
    except BranchCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except MatgravError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
