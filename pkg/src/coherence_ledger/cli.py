"""Command-line interface.

One JSON document describes a computation: the system (local spectra), the
inverse temperature, and the state (a named constructor or a dense matrix
of [re, im] pairs).  Scalar reports are emitted as JSON, curves/sweeps/
histograms as CSV; every number is printed with 12 significant digits and
runs are deterministic for a fixed seed.

Exit codes: 0 success, 1 input error, 2 numerical failure, 3 bound
violation in verify mode.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import clock, divergence, ising, model, states, tradeoff
from .errors import CoherenceLedgerError, InputError, NumericsError

DEFAULT_SEED = 42


@dataclass
class JobSpec:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    beta: float | None = None
    epsilon: float | None = None
    seed: int = DEFAULT_SEED
    samples: int = 1000
    n: int = 2
    suite: str = "all"


def thread_cap() -> int:
    """Parallelism ceiling from COHERENCE_LEDGER_THREADS (>= 1).

    The current implementation evaluates sweeps serially with per-index
    seeding, which respects any cap; the variable is parsed here so callers
    can rely on it.
    """
    raw = os.environ.get("COHERENCE_LEDGER_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise InputError(f"COHERENCE_LEDGER_THREADS={raw!r} is not an integer")


# ---------------------------------------------------------------------------
# serialization: 12 significant digits, deterministic order
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        if math.isnan(v):
            return '"nan"'
        return format(v, ".12g")
    raise TypeError(f"unsupported scalar {type(x)}")


def dump_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{k}": {dump_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dump_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _fmt(obj)


def _write_text(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def write_csv(path: str | None, header: list[str], rows):
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif isinstance(cell, (int, np.integer)):
                cells.append(str(int(cell)))
            else:
                cells.append(format(float(cell), ".12g"))
        lines.append(",".join(cells))
    _write_text(path, "\n".join(lines))


# ---------------------------------------------------------------------------
# input document parsing
# ---------------------------------------------------------------------------

def _load_doc(path: str | None) -> dict:
    if path is None:
        raise InputError("this command needs --input")
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}")


def _system_from(doc: dict) -> model.CompositeSystem | None:
    spec = doc.get("system")
    if spec is None:
        return None
    try:
        spectra = tuple(tuple(float(e) for e in s) for s in spec["local_spectra"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad system block: {exc}")
    tol = float(spec.get("block_tolerance", -1.0))
    return model.CompositeSystem(spectra, tol)


def _matrix_from(entries) -> np.ndarray:
    try:
        rows = [[complex(re, im) for re, im in row] for row in entries]
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad dense matrix (need [re, im] pairs): {exc}")
    return np.asarray(rows, dtype=complex)


def _state_from(doc: dict, key: str, system: model.CompositeSystem | None,
                beta: float) -> states.QuantumState:
    spec = doc.get(key)
    if spec is None:
        raise InputError(f"input document has no {key!r} block")
    kind = spec.get("kind")
    if kind is None:
        raise InputError(f"{key}.kind missing")
    params = dict(spec.get("params", {}))
    if kind == "dense":
        if system is None:
            raise InputError("dense states need a system block")
        if "matrix" not in spec:
            raise InputError("dense states need a matrix")
        return states.dense(system, _matrix_from(spec["matrix"]))
    if kind == "coherent_gibbs":
        if system is None:
            raise InputError("coherent_gibbs needs a system block")
        params.setdefault("system", system)
        params.setdefault("beta", beta)
    if kind == "tensor_power":
        base_doc = {key: params.pop("base", None)}
        if base_doc[key] is None:
            raise InputError("tensor_power needs params.base")
        params["rho"] = _state_from(base_doc, key, system, beta)
    try:
        return states.make_state(kind, **params)
    except TypeError as exc:
        raise InputError(f"bad params for {kind}: {exc}")


def _beta_of(doc: dict, job: JobSpec) -> float:
    beta = doc.get("beta", job.beta)
    if beta is None:
        beta = 1.0
    beta = float(beta)
    if beta <= 0:
        raise InputError("beta must be positive")
    return beta


def state_to_doc(rho: states.QuantumState, beta: float) -> dict:
    """Round-trippable JSON document for a state."""
    return {
        "system": {
            "local_spectra": [list(s) for s in rho.system.local_spectra],
            "block_tolerance": rho.system.block_tolerance,
        },
        "beta": beta,
        "state": {
            "kind": "dense",
            "matrix": [[[float(z.real), float(z.imag)] for z in row]
                       for row in rho.matrix],
        },
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _entry_dict(e: tradeoff.TradeoffEntry) -> dict:
    return {"lhs": e.lhs, "rhs": e.rhs, "slack": e.slack, "holds": e.holds}


def cmd_compute(job: JobSpec) -> int:
    doc = _load_doc(job.input_path)
    system = _system_from(doc)
    beta = _beta_of(doc, job)
    rho = _state_from(doc, "state", system, beta)
    g = model.gibbs(rho.system, beta)

    w, scan = divergence.w_coh(rho, g)
    report = tradeoff.tradeoff_report(rho, g)
    out = {
        "beta": beta,
        "w_coh": w,
        "w_coh_alpha_star": scan.alpha_star,
        "w_incoh": divergence.w_incoh(rho, g),
        "w_tot": divergence.w_tot(rho, g),
        "qfi": report.qfi,
        "skew_half": clock.skew_information(rho, alpha=0.5),
        "variance": clock.variance(rho),
        "bounds": {name: _entry_dict(e) for name, e in report.entries.items()},
    }
    purity = float(np.trace(rho.matrix @ rho.matrix).real)
    if purity >= 1.0 - 1e-9:
        crit = divergence.pure_state_work_criterion(rho, g)
        out["pure_state_criterion"] = {
            "extractable": crit.extractable,
            "e_star": crit.e_star,
            "tied": crit.tied,
        }
    _write_text(job.output_path, dump_json(out))
    return 0


def cmd_tradeoff(job: JobSpec) -> int:
    doc = _load_doc(job.input_path)
    system = _system_from(doc)
    if system is None:
        raise InputError("tradeoff sweep needs a system block")
    beta = _beta_of(doc, job)
    rows, violations = tradeoff.bound_sweep(system, beta, job.samples, job.seed)
    write_csv(job.output_path,
              ["state_id", "w_coh", "qfi", "bound_name", "lhs", "rhs", "slack"],
              rows)
    return 0 if not violations else 3


def cmd_monotones(job: JobSpec) -> int:
    doc = _load_doc(job.input_path)
    system = _system_from(doc)
    beta = _beta_of(doc, job)
    rho = _state_from(doc, "state", system, beta)
    if "state2" in doc:
        sigma = _state_from(doc, "state2", system, beta)
    else:
        sigma = states.dephase_blocks(rho)
    g = model.gibbs(rho.system, beta)
    audit = clock.monotonicity_audit(rho, sigma, g)
    out = {
        "delta_qfi": audit.delta_qfi,
        "delta_skew": {str(a): v for a, v in audit.delta_skew.items()},
        "free_energy_nonincreasing": audit.free_energy_nonincreasing,
        "asymmetry_nonincreasing": audit.asymmetry_nonincreasing,
        "modes_nonincreasing": audit.modes_nonincreasing,
        "modes_rho": {format(k, ".6g"): v for k, v in audit.modes_rho.items()},
        "modes_sigma": {format(k, ".6g"): v for k, v in audit.modes_sigma.items()},
        "forbidden_by": list(audit.forbidden_by),
    }
    _write_text(job.output_path, dump_json(out))
    return 0


def cmd_thermomajorize(job: JobSpec) -> int:
    doc = _load_doc(job.input_path)
    system = _system_from(doc)
    beta = _beta_of(doc, job)
    rho = _state_from(doc, "state", system, beta)
    g = model.gibbs(rho.system, beta)
    deph = states.dephase_blocks(rho)
    diag = states.dephase_full(rho)
    curve_d = divergence.thermomajorization_curve(deph, g)
    curve_pi = divergence.thermomajorization_curve(diag, g)

    prefix = job.output_path or "thermomajorization"
    write_csv(f"{prefix}_block_dephased.csv", ["x", "y"], curve_d.tolist())
    write_csv(f"{prefix}_incoherent.csv", ["x", "y"], curve_pi.tolist())
    verdict = {
        "block_dephased_majorizes_incoherent":
            divergence.thermomajorizes(deph, diag, g),
        "curves_equal": divergence.curves_equal(deph, diag, g),
    }
    _write_text(f"{prefix}_verdict.json", dump_json(verdict))
    return 0


def _ising_from(doc: dict) -> ising.IsingChain:
    spec = doc.get("ising")
    if spec is None:
        raise InputError("input document has no 'ising' block")
    try:
        return ising.IsingChain(int(spec["n"]), float(spec["h"]), float(spec["j"]))
    except KeyError as exc:
        raise InputError(f"ising block missing {exc}")


def cmd_ising_spectrum(job: JobSpec) -> int:
    chain = _ising_from(_load_doc(job.input_path))
    rows = []
    for sector in ("NS", "R"):
        spec = ising.sector_spectrum(chain, sector)
        rows.extend((sector, e) for e in spec.levels)
    rows.sort(key=lambda r: (r[1], r[0]))
    write_csv(job.output_path, ["sector", "energy"], rows)
    return 0


def cmd_ising_histogram(job: JobSpec) -> int:
    chain = _ising_from(_load_doc(job.input_path))
    if job.epsilon is None:
        raise InputError("ising-histogram needs --epsilon")
    hist = ising.degeneracy_histogram(chain, job.epsilon)
    centers = hist.centers()
    rows = [(chain.h, chain.j, hist.epsilon, centers[m], hist.counts[m])
            for m in sorted(hist.counts)]
    write_csv(job.output_path, ["h", "J", "epsilon", "window_center", "count"], rows)
    return 0


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

def _report(lines: list[str], name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    lines.append(f"{status} {name}" + (f": {detail}" if detail else ""))
    return ok


def _suite_binomial(job: JobSpec, lines: list[str]) -> bool:
    ok = all(tradeoff.verify_binomial_inequality(n) for n in range(1, 101))
    return _report(lines, "binomial-inequality N<=100", ok)


def _suite_tradeoff(job: JobSpec, lines: list[str]) -> bool:
    system = model.qubit_system(job.n)
    _, violations = tradeoff.bound_sweep(system, 1.0, job.samples, job.seed)
    return _report(lines, f"tradeoff-sweep n={job.n} samples={job.samples}",
                   not violations, f"{len(violations)} violations")


def _suite_monotones(job: JobSpec, lines: list[str]) -> bool:
    system = model.qubit_system(max(job.n, 2))
    g = model.gibbs(system, 1.0)
    channels = [("block_dephase", clock.covariant_channel("block_dephase"))]
    for lam in (0.1, 0.5, 0.9):
        channels.append((f"partial_dephase({lam})",
                         clock.covariant_channel("partial_dephase", lam=lam)))
        channels.append((f"gibbs_mix({lam})",
                         clock.covariant_channel("gibbs_mix", p=lam, gibbs=g)))
    bad = 0
    for i in range(job.samples):
        rng = np.random.default_rng(job.seed + i)
        rho = states.random_mixed_state(system, rng)
        q0 = clock.qfi(rho)
        s0 = clock.skew_information(rho, alpha=0.5)
        for _, ch in channels:
            out = ch(rho)
            if clock.qfi(out) > q0 + 1e-9 or \
               clock.skew_information(out, alpha=0.5) > s0 + 1e-9:
                bad += 1
    return _report(lines, f"channel-monotones samples={job.samples}",
                   bad == 0, f"{bad} increases")


def _suite_ising(job: JobSpec, lines: list[str]) -> bool:
    ok = True
    rng = np.random.default_rng(job.seed)
    for n in (2, 4, 6, 8):
        for _ in range(5):
            chain = ising.IsingChain(n, float(rng.uniform(0, 2)),
                                     float(rng.uniform(0, 2)))
            free = ising.full_spectrum(chain)
            ed = ising.ed_oracle(chain)
            if not np.allclose(free, ed, atol=1e-8):
                ok = False
    return _report(lines, "ising-sector-vs-ed N in {2,4,6,8}", ok)


def _suite_epsilon(job: JobSpec, lines: list[str]) -> bool:
    system = model.qubit_system(3)
    g = model.gibbs(system, 1.0)
    bad = 0
    for i in range(min(job.samples, 200)):
        rng = np.random.default_rng(job.seed + i)
        rho = states.random_pure_state(system, rng)
        for eps in (0.1, 0.3, 1.0):
            if not tradeoff.energy_window_tradeoff(rho, g, eps).all_hold:
                bad += 1
    return _report(lines, "epsilon-window-bounds", bad == 0, f"{bad} violations")


_SUITES = {
    "binomial": _suite_binomial,
    "tradeoff": _suite_tradeoff,
    "monotones": _suite_monotones,
    "ising": _suite_ising,
    "epsilon": _suite_epsilon,
}


def cmd_verify(job: JobSpec) -> int:
    if job.suite == "all":
        selected = list(_SUITES)
    elif job.suite in _SUITES:
        selected = [job.suite]
    else:
        raise InputError(f"unknown suite {job.suite!r}; "
                         f"choose from {sorted(_SUITES)} or 'all'")
    lines: list[str] = []
    ok = True
    for name in selected:
        ok = _SUITES[name](job, lines) and ok
    _write_text(job.output_path, "\n".join(lines))
    return 0 if ok else 3


_COMMANDS = {
    "compute": cmd_compute,
    "tradeoff": cmd_tradeoff,
    "monotones": cmd_monotones,
    "thermomajorize": cmd_thermomajorize,
    "ising-spectrum": cmd_ising_spectrum,
    "ising-histogram": cmd_ising_histogram,
    "verify": cmd_verify,
}


def run(job: JobSpec) -> int:
    """Execute a job; returns the process exit code."""
    thread_cap()
    handler = _COMMANDS.get(job.command)
    if handler is None:
        raise InputError(f"unknown command {job.command!r}")
    return handler(job)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherence-ledger",
        description="Work and clock resources of quantum coherence",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", dest="input_path")
        p.add_argument("--output", dest="output_path")
        p.add_argument("--beta", type=float, default=None)
        p.add_argument("--epsilon", type=float, default=None)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--suite", default="all")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = JobSpec(command=args.command, input_path=args.input_path,
                  output_path=args.output_path, beta=args.beta,
                  epsilon=args.epsilon, seed=args.seed,
                  samples=args.samples, n=args.n, suite=args.suite)
    try:
        code = run(job)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        code = 1
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        code = 2
    except CoherenceLedgerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
