"""JSON-config command-line driver emitting machine-readable reports.

One command per invocation: spectrum, entangle, supercharge, jc or verify.
Configs are fail-closed (unknown keys rejected) and fully validated before any
computation starts. All numeric text is 17 significant digits with LF line
endings, files are written atomically (temp file + rename), and every code
path is deterministic, so rerunning a config reproduces its outputs byte for
byte. Exit codes: 0 success, 1 physics-invariant violation, 2 config error.
"""

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict

import numpy as np

from .entanglement import (
    analyze,
    build_energy_eigenstate,
    concurrence_from_spin,
    supercharge_eigenstates,
    supercharge_residual,
)
from .errors import ConfigError, PhysicsViolationError, SusyQMError
from .grid import Grid, inner_product, make_grid, wavefunction_to_csv
from .jaynescummings import build_jc, numeric_vs_analytic, verify_susy_algebra
from .operators import (
    build_supercharges,
    build_susy_hamiltonian,
    build_susy_system,
    witten_parity,
)
from .spectral import (
    EPS0,
    align_phase,
    intertwine_down,
    operator_norm,
    pair_partner_levels,
    solve_spectrum,
    zero_mode,
)
from .superpotentials import REGISTRY_NAMES, get_superpotential

PAIR_TOL = 1e-10
INTERTWINE_TOL = 1e-8
MATRIX_SQ_TOL = 1e-13
ANTICOMM_TOL = 1e-12

COMMANDS = ("spectrum", "entangle", "supercharge", "jc", "verify")

SWEEP_COLUMNS = (
    "|c1|", "phase_diff", "overlap_abs", "sigma_x", "sigma_y", "sigma_z",
    "lambda1", "lambda2", "C_spin", "C_overlap", "C_svd",
)


def _g(value) -> str:
    return format(float(value), ".17g")


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".susyqm-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------- validation

def _check_keys(obj, required, optional, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ConfigError(f"missing required field(s) in {where}: {', '.join(missing)}")


def _real(obj, key, where):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(f"{where}.{key} must be finite, got {v!r}")
    return float(v)


def _integer(obj, key, where, minimum=None):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{where}.{key} must be >= {minimum}, got {v}")
    return v


def _parse_superpotential(cfg):
    obj = cfg["superpotential"]
    _check_keys(obj, ("name",), ("params",), "superpotential")
    name = obj["name"]
    if name not in REGISTRY_NAMES:
        raise ConfigError(
            f"unknown superpotential {name!r}; known: {', '.join(REGISTRY_NAMES)}"
        )
    params = obj.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("superpotential.params must be a JSON object")
    for key in params:
        _real(params, key, "superpotential.params")
    try:
        return get_superpotential(name, **params)
    except TypeError as exc:
        raise ConfigError(f"bad parameter(s) for superpotential {name!r}: {exc}") from exc


def _parse_grid(cfg) -> Grid:
    obj = cfg["grid"]
    _check_keys(obj, ("x_min", "x_max", "n_points"), (), "grid")
    x_min = _real(obj, "x_min", "grid")
    x_max = _real(obj, "x_max", "grid")
    n_points = _integer(obj, "n_points", "grid")
    try:
        return make_grid(x_min, x_max, n_points)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_levels(cfg, grid: Grid, key="levels"):
    # solving k states of an n-point discretization is only trusted for k <= n/10
    levels = _integer(cfg, key, "config", minimum=1)
    if (levels + 1) * 10 > grid.n_points:
        raise ConfigError(
            f"config.{key} = {levels} too large for n_points = {grid.n_points}; "
            f"need (levels + 1) * 10 <= n_points"
        )
    return levels


def _grid_payload(grid: Grid):
    return {"x_min": grid.x_min, "x_max": grid.x_max, "n_points": grid.n_points}


def _solve_both_sides(W, grid, levels):
    """Eigenpairs of both partners plus the validated pairing report."""
    system = build_susy_system(W, grid)
    k = levels + 1  # room for the zero mode / closure artifact below EPS0
    plus = solve_spectrum(system.H_plus, k, grid=grid, partner_tag="plus")
    minus = solve_spectrum(system.H_minus, k, grid=grid, partner_tag="minus")
    report = pair_partner_levels(
        [p.energy for p in plus], [m.energy for m in minus], PAIR_TOL
    )
    plus_nz = [p for p in plus if p.energy >= EPS0]
    minus_nz = [m for m in minus if m.energy >= EPS0]
    return system, plus_nz, minus_nz, report


# ------------------------------------------------------------------ commands

def run_spectrum(cfg, outdir, fmt):
    W = _parse_superpotential(cfg)
    grid = _parse_grid(cfg)
    levels = _parse_levels(cfg, grid)

    system, plus_nz, minus_nz, report = _solve_both_sides(W, grid, levels)
    psi0 = zero_mode(system)
    resid = np.linalg.norm(np.dot(system.H_minus, psi0.amplitudes))
    resid /= np.linalg.norm(psi0.amplitudes)
    bound = 1e-12 * operator_norm(system.H_minus)

    violations = []
    if report.zero_mode_energy is None:
        violations.append(
            f"no H- eigenvalue below the zero-mode threshold {EPS0} "
            "(box truncation lifted the ground state)"
        )
    if resid > bound:
        violations.append(
            f"zero-mode residual ||H- psi0|| = {resid:.3e} exceeds "
            f"1e-12 ||H-|| = {bound:.3e}"
        )

    if fmt == "csv":
        rows = [
            (str(i), _g(p.e_plus), _g(p.e_minus), _g(p.gap))
            for i, p in enumerate(report.pairs, start=1)
        ]
        spectrum_text = _csv_text(("index", "E_plus", "E_minus", "gap"), rows)
        zero_text = wavefunction_to_csv(psi0)
    else:
        spectrum_text = _json_text({
            "superpotential": W.name,
            "grid": _grid_payload(grid),
            "zero_mode_energy": report.zero_mode_energy,
            "closure_artifacts": list(report.closure_artifacts),
            "pairs": [
                {"index": i, "E_plus": p.e_plus, "E_minus": p.e_minus, "gap": p.gap}
                for i, p in enumerate(report.pairs, start=1)
            ],
        })
        amps = psi0.amplitudes
        zero_text = _json_text({
            "x": [float(v) for v in grid.nodes()],
            "re": [float(v) for v in np.real(amps)],
            "im": [float(v) for v in np.imag(amps)],
        })

    _write(outdir, "spectrum." + fmt, spectrum_text)
    _write(outdir, "zero_mode." + fmt, zero_text)
    return _finish(violations)


def run_entangle(cfg, outdir, fmt):
    W = _parse_superpotential(cfg)
    grid = _parse_grid(cfg)
    level = _parse_levels(cfg, grid, key="level")
    sweep = cfg.get("sweep", {})
    _check_keys(sweep, (), ("c1_points", "phase_points"), "sweep")
    c1_points = _integer(sweep, "c1_points", "sweep", minimum=2) if "c1_points" in sweep else 21
    phase_points = _integer(sweep, "phase_points", "sweep", minimum=1) if "phase_points" in sweep else 8

    _, plus_nz, minus_nz, _ = _solve_both_sides(W, grid, level)
    if level > min(len(plus_nz), len(minus_nz)):
        raise ConfigError(f"level {level} outside the solved band of {min(len(plus_nz), len(minus_nz))} paired levels")
    pp = plus_nz[level - 1]
    mm = minus_nz[level - 1]
    overlap = inner_product(pp.state, mm.state)

    rows = []
    for c1 in np.linspace(0.0, 1.0, c1_points):
        c2_mod = math.sqrt(max(0.0, 1.0 - c1 * c1))
        for phase in np.linspace(0.0, 2.0 * math.pi, phase_points, endpoint=False):
            c2 = c2_mod * complex(math.cos(phase), math.sin(phase))
            state = build_energy_eigenstate(c1, c2, pp.state, mm.state)
            rep = analyze(state, c1, c2, overlap)
            rows.append((
                float(c1), float(phase), abs(overlap),
                rep.sigma_mean[0], rep.sigma_mean[1], rep.sigma_mean[2],
                rep.schmidt[0], rep.schmidt[1],
                rep.concurrence_spin, rep.concurrence_overlap, rep.concurrence_svd,
            ))

    if fmt == "csv":
        text = _csv_text(SWEEP_COLUMNS, [tuple(_g(v) for v in row) for row in rows])
    else:
        text = _json_text({
            "superpotential": W.name,
            "grid": _grid_payload(grid),
            "level": level,
            "E_plus": pp.energy,
            "E_minus": mm.energy,
            "rows": [dict(zip(SWEEP_COLUMNS, row)) for row in rows],
        })
    _write(outdir, "entangle." + fmt, text)
    return _finish([])


def run_supercharge(cfg, outdir, fmt):
    W = _parse_superpotential(cfg)
    grid = _parse_grid(cfg)
    levels = _parse_levels(cfg, grid)

    system, plus_nz, _, _ = _solve_both_sides(W, grid, levels)
    violations = []
    rows = []
    for i, pp in enumerate(plus_nz[:levels], start=1):
        mapped = intertwine_down(system, pp)  # carries the phase the eigenstates need
        states = supercharge_eigenstates(system, pp.energy, pp.state, mapped)
        root = math.sqrt(pp.energy)
        for family, sign, st in (
            ("q1", +1, states.q1_plus), ("q1", -1, states.q1_minus),
            ("q2", +1, states.q2_plus), ("q2", -1, states.q2_minus),
        ):
            resid = supercharge_residual(system, st, sign * root, family)
            conc = concurrence_from_spin(st)
            rows.append((i, pp.energy, family, sign, resid, conc))
            if resid > INTERTWINE_TOL:
                violations.append(
                    f"supercharge eigenstate residual {resid:.3e} at level {i} "
                    f"({family}, sign {sign:+d}) exceeds {INTERTWINE_TOL}"
                )

    header = ("index", "energy", "family", "sign", "residual", "concurrence")
    if fmt == "csv":
        text = _csv_text(header, [
            (str(i), _g(e), fam, f"{s:+d}", _g(r), _g(c))
            for i, e, fam, s, r, c in rows
        ])
    else:
        text = _json_text({
            "superpotential": W.name,
            "grid": _grid_payload(grid),
            "rows": [dict(zip(header, row)) for row in rows],
        })
    _write(outdir, "supercharge." + fmt, text)
    return _finish(violations)


def run_jc(cfg, outdir, fmt):
    obj = cfg["jc_params"]
    _check_keys(obj, ("omega", "gamma", "n_max"), (), "jc_params")
    omega = _real(obj, "omega", "jc_params")
    gamma = _real(obj, "gamma", "jc_params")
    n_max = _integer(obj, "n_max", "jc_params")
    try:
        jc = build_jc(omega, gamma, n_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    match = numeric_vs_analytic(jc)
    alg = verify_susy_algebra(jc)

    def row_cells(r):
        conc = "" if r.concurrence is None else _g(r.concurrence)
        return (str(r.n), str(r.branch), _g(r.E_analytic), _g(r.E_numeric),
                _g(r.gap), conc)

    header = ("n", "branch", "E_analytic", "E_numeric", "gap", "concurrence")
    if fmt == "csv":
        levels_text = _csv_text(header, [row_cells(r) for r in match.rows])
    else:
        levels_text = _json_text({
            "omega": omega, "gamma": gamma, "n_max": n_max,
            "rows": [
                {"n": r.n, "branch": r.branch, "E_analytic": r.E_analytic,
                 "E_numeric": r.E_numeric, "gap": r.gap,
                 "concurrence": r.concurrence}
                for r in match.rows
            ],
        })

    algebra_payload = {
        "omega": omega, "gamma": gamma, "n_max": n_max,
        "guard_n_max": jc.fock.guard_n_max,
        "identities": asdict(alg),
        "eigenstate_label_check": {
            "implemented_upper_label_n_minus_1": match.label_residual_implemented,
            "alternative_upper_label_n_plus_1": match.label_residual_alternative,
        },
        "match_summary": {
            "max_gap": match.max_gap,
            "min_fidelity": match.min_fidelity,
            "min_excited_concurrence": match.min_excited_concurrence,
            "ground_concurrence_svd": match.ground_concurrence_svd,
            "degenerate": match.degenerate,
            "all_matched": match.all_matched,
        },
    }

    _write(outdir, "jc_levels." + fmt, levels_text)
    _write(outdir, "jc_algebra.json", _json_text(algebra_payload))
    violations = [
        f"level n={n} branch={b}: {kind} = {value!r} out of tolerance"
        for n, b, kind, value in match.failures
    ]
    return _finish(violations)


def run_verify(cfg, outdir, fmt):
    W = _parse_superpotential(cfg)
    grid = _parse_grid(cfg)
    levels = _parse_levels(cfg, grid)

    system, plus_nz, minus_nz, report = _solve_both_sides(W, grid, levels)
    checks = []

    def check(name, value, bound):
        checks.append({"name": name, "value": float(value), "bound": float(bound),
                       "passed": bool(value <= bound)})

    check("pairing_max_gap", report.max_gap, PAIR_TOL)
    if report.zero_mode_energy is None:
        # nothing under the threshold; report the lowest minus-side level,
        # which must stay finite for the JSON encoder
        lowest = min(p.e_minus for p in report.pairs)
        checks.append({"name": "zero_mode_present", "value": float(lowest),
                       "bound": EPS0, "passed": False})
    else:
        check("zero_mode_present", abs(report.zero_mode_energy), EPS0)

    psi0 = zero_mode(system)
    resid = np.linalg.norm(np.dot(system.H_minus, psi0.amplitudes))
    resid /= np.linalg.norm(psi0.amplitudes)
    check("zero_mode_residual", resid, 1e-12 * operator_norm(system.H_minus))

    worst_map = 0.0
    worst_energy = 0.0
    worst_eig = 0.0
    dx = grid.dx
    n_pairs = min(levels, len(plus_nz), len(minus_nz))
    for i in range(n_pairs):
        pp, mm = plus_nz[i], minus_nz[i]
        mapped = align_phase(intertwine_down(system, pp), mm.state)
        worst_map = max(worst_map, math.sqrt(dx) * float(
            np.linalg.norm(mapped.amplitudes - mm.state.amplitudes)))
        worst_energy = max(worst_energy, abs(
            dx * float(np.linalg.norm(np.dot(system.B, mm.state.amplitudes)) ** 2)
            - mm.energy))
        raw = intertwine_down(system, pp)
        states = supercharge_eigenstates(system, pp.energy, pp.state, raw)
        root = math.sqrt(pp.energy)
        for family, sign, st in (
            ("q1", +1, states.q1_plus), ("q1", -1, states.q1_minus),
            ("q2", +1, states.q2_plus), ("q2", -1, states.q2_minus),
        ):
            worst_eig = max(worst_eig,
                            supercharge_residual(system, st, sign * root, family))
    check("intertwine_map_residual", worst_map, INTERTWINE_TOL)
    check("intertwine_energy_deviation", worst_energy, INTERTWINE_TOL)
    check("supercharge_eigenstate_residual", worst_eig, INTERTWINE_TOL)

    q1, q2 = build_supercharges(system)
    h_susy = build_susy_hamiltonian(system)
    parity = witten_parity(grid.n_points)
    check("q1_squared_vs_hamiltonian",
          np.max(np.abs(np.dot(q1, q1) - h_susy)), MATRIX_SQ_TOL)
    check("q2_squared_vs_hamiltonian",
          np.max(np.abs(np.dot(q2, q2) - h_susy)), MATRIX_SQ_TOL)
    check("anticommutator_q1_q2",
          np.max(np.abs(np.dot(q1, q2) + np.dot(q2, q1))), ANTICOMM_TOL)
    check("anticommutator_parity_q1",
          np.max(np.abs(np.dot(parity, q1) + np.dot(q1, parity))), ANTICOMM_TOL)
    check("q2_hermiticity", np.max(np.abs(q2 - q2.conj().T)), ANTICOMM_TOL)

    passed = all(c["passed"] for c in checks)
    payload = {
        "superpotential": W.name,
        "grid": _grid_payload(grid),
        "levels": levels,
        "checks": checks,
        "passed": passed,
    }
    _write(outdir, "verify.json", _json_text(payload))
    if passed:
        return 0
    for c in checks:
        if not c["passed"]:
            print(f"verify: {c['name']} = {c['value']:.6e} exceeds {c['bound']:.6e}",
                  file=sys.stderr)
    return 1


def _write(outdir, filename, text):
    path = os.path.join(outdir, filename)
    _atomic_write(path, text)
    print(f"wrote {path}")


def _finish(violations):
    if not violations:
        return 0
    for msg in violations:
        print(f"physics violation: {msg}", file=sys.stderr)
    return 1


RUNNERS = {
    "spectrum": run_spectrum,
    "entangle": run_entangle,
    "supercharge": run_supercharge,
    "jc": run_jc,
    "verify": run_verify,
}

REQUIRED_KEYS = {
    "spectrum": ("command", "superpotential", "grid", "levels"),
    "entangle": ("command", "superpotential", "grid", "level"),
    "supercharge": ("command", "superpotential", "grid", "levels"),
    "jc": ("command", "jc_params"),
    "verify": ("command", "superpotential", "grid", "levels"),
}

OPTIONAL_KEYS = {
    "spectrum": ("output",),
    "entangle": ("sweep", "output"),
    "supercharge": ("output",),
    "jc": ("output",),
    "verify": ("output",),
}


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    command = raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(
            f"config.command must be one of {', '.join(COMMANDS)}, got {command!r}"
        )
    _check_keys(raw, REQUIRED_KEYS[command], OPTIONAL_KEYS[command], "config")
    output = raw.get("output", {})
    _check_keys(output, (), ("path", "format"), "output")
    if "path" in output and not isinstance(output["path"], str):
        raise ConfigError("output.path must be a string")
    if "format" in output and output["format"] not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json, got {output['format']!r}")
    return raw


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="susyqm",
        description="Partner-Hamiltonian spectra, entanglement sweeps and "
                    "Jaynes-Cummings reports driven by a JSON config.",
    )
    parser.add_argument("--config", required=True, metavar="PATH",
                        help="JSON run configuration")
    parser.add_argument("--out", metavar="DIR", default=None,
                        help="output directory (default: config output.path or '.')")
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="report format (default: config output.format or csv)")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        output = cfg.get("output", {})
        outdir = args.out if args.out is not None else output.get("path", ".")
        fmt = args.format if args.format is not None else output.get("format", "csv")
        os.makedirs(outdir, exist_ok=True)
        return RUNNERS[cfg["command"]](cfg, outdir, fmt)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PhysicsViolationError as exc:
        print(f"physics violation: {exc}", file=sys.stderr)
        return 1
    except SusyQMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
