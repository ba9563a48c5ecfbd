"""Command-line front end: dataset ingestion, circuit emission,
simulation/verification runs, noise-curve generation, forking demos.

Exit codes: 0 success, 2 input error, 3 runtime-impossible operation
(e.g. post-selecting a zero-probability outcome).
"""

from __future__ import annotations

import csv
import json
import math
import sys
import time
from pathlib import Path

import click
import numpy as np

import ffqram

from . import forking, noise
from . import statevector as sv
from .circuits import Circuit, schedule, simulate
from .errors import FFQRAMError, PostSelectionError
from .qsvm import TrainingSet, prepare_chi, synthesize_chi_circuit, target_chi
from .serialize import parse, parse_json, serialize, serialize_json
from .statevector import StateVector
from .synthesis import (AMPLITUDE_MODE, ANGLE_MODE, BINARY_MODE, BusSpec,
                        DataRecord, Dataset, SynthesisOptions,
                        address_width, angles_from_amplitudes,
                        complex_amplitude_write, postselection_probability,
                        simulate_write, synthesize, synthesize_complex,
                        write_binary, zero_amplitude_addresses)

INPUT_ERROR = 2
IMPOSSIBLE = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_complex(text: str) -> complex:
    cleaned = text.replace(" ", "").replace("i", "j")
    return complex(cleaned)


def _read_rows(path: str) -> list[tuple[int, list[str]]]:
    p = Path(path)
    if not p.exists():
        _fail(INPUT_ERROR, f"no such file: {path}")
    with p.open(newline="") as fh:
        return [(no, [c.strip() for c in row])
                for no, row in enumerate(csv.reader(fh), start=1)
                if row and any(c.strip() for c in row)]


def load_dataset_csv(path: str, mode: str) -> Dataset:
    """CSV columns bits,value[,label]; a `bits,...` header row is optional."""
    rows = _read_rows(path)
    if rows and rows[0][1][0].lower() == "bits":
        rows = rows[1:]
    if not rows:
        _fail(INPUT_ERROR, f"{path}: no data rows")
    records = []
    n = len(rows[0][1][0])
    for no, row in rows:
        if len(row) not in (2, 3):
            _fail(INPUT_ERROR, f"{path} row {no}: expected bits,value[,label]")
        bits, raw = row[0], row[1]
        try:
            if mode == ANGLE_MODE:
                value = float(raw)
            elif mode == AMPLITUDE_MODE:
                value = _parse_complex(raw)
            else:
                if set(raw) - {"0", "1"} or not raw:
                    raise ValueError(f"not a bit value: {raw!r}")
                value = raw if len(raw) > 1 else int(raw)
            label = int(row[2]) if len(row) == 3 else None
            records.append(DataRecord(bits, value, label))
        except (ValueError, FFQRAMError) as exc:
            _fail(INPUT_ERROR, f"{path} row {no}: {exc}")
    try:
        return Dataset(tuple(records), n, mode)
    except FFQRAMError as exc:
        _fail(INPUT_ERROR, f"{path}: {exc}")


def load_bus(source: str, width: int) -> BusSpec:
    if source == "uniform":
        return BusSpec.uniform()
    rows = _read_rows(source)
    weights = {}
    for no, row in rows:
        if len(row) != 2:
            _fail(INPUT_ERROR, f"{source} row {no}: expected bits,amplitude")
        try:
            weights[row[0]] = _parse_complex(row[1])
        except ValueError as exc:
            _fail(INPUT_ERROR, f"{source} row {no}: {exc}")
    try:
        bus = BusSpec.basis_list(weights)
        bus.realize(width)  # validate widths early
        return bus
    except FFQRAMError as exc:
        _fail(INPUT_ERROR, f"{source}: {exc}")


def load_circuit_file(path: str) -> Circuit:
    p = Path(path)
    if not p.exists():
        _fail(INPUT_ERROR, f"no such file: {path}")
    text = p.read_text()
    try:
        if text.lstrip().startswith("{"):
            return parse_json(text)
        return parse(text)
    except FFQRAMError as exc:
        _fail(INPUT_ERROR, f"{path}: {exc}")


def _write_circuit(circuit: Circuit, path: str) -> None:
    text = serialize_json(circuit) if path.endswith(".json") \
        else serialize(circuit)
    Path(path).write_text(text)


def _emit_report(report: dict, out_path: str | None, stamp: bool,
                 seed) -> None:
    report["seed"] = seed
    if stamp:
        report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    text = json.dumps(report, sort_keys=True, indent=2)
    if out_path:
        Path(out_path).write_text(text + "\n")
    click.echo(text)


def _resolve_seed(seed) -> int:
    if seed is not None:
        return seed
    return int(np.random.SeedSequence().entropy % (2 ** 32))


@click.group()
@click.version_option(ffqram.__version__, prog_name="ffqram")
def main():
    """Write classical data into quantum-state amplitudes, inspect the
    circuits that do it, and budget their noise."""


@main.command()
@click.option("--data", required=True, help="dataset CSV (bits,value[,label])")
@click.option("--mode", required=True,
              type=click.Choice([AMPLITUDE_MODE, ANGLE_MODE, BINARY_MODE]))
@click.option("--bus", default="uniform", show_default=True,
              help="'uniform' or a CSV of bits,amplitude")
@click.option("--decompose", default="none",
              type=click.Choice(["none", "toffoli"]), show_default=True)
@click.option("--merge-flips/--no-merge-flips", default=True,
              show_default=True)
@click.option("--simulate", "run_sim", is_flag=True,
              help="simulate the write and report probabilities/fidelity")
@click.option("--out", default=None, help="circuit file (.txt or .json)")
@click.option("--report", "report_path", default=None,
              help="also write the JSON report here")
@click.option("--seed", type=int, default=None)
@click.option("--no-timestamp", is_flag=True)
def encode(data, mode, bus, decompose, merge_flips, run_sim, out,
           report_path, seed, no_timestamp):
    """Compile a dataset into a write circuit (and optionally verify it)."""
    ds = load_dataset_csv(data, mode)
    duplicates = ds.duplicate_addresses()
    if duplicates:
        click.echo(f"warning: repeated addresses accumulate their "
                   f"rotations: {','.join(duplicates)}", err=True)
    opts = SynthesisOptions(merge_flips=merge_flips, decompose=decompose)
    seed = _resolve_seed(seed)

    try:
        complex_data = mode == AMPLITUDE_MODE and any(
            complex(r.value).imag != 0 for r in ds.records)
        bus_spec = load_bus(bus, address_width(ds))
        if mode == AMPLITUDE_MODE and not complex_data:
            ds_write = angles_from_amplitudes(ds, bus_spec)
            circuit = synthesize(ds_write, opts)
        elif complex_data:
            ds_write = ds
            circuit = synthesize_complex(ds, opts)
        else:
            ds_write = ds
            circuit = synthesize(ds, opts)
    except PostSelectionError as exc:
        _fail(IMPOSSIBLE, str(exc))
    except FFQRAMError as exc:
        _fail(INPUT_ERROR, str(exc))

    if out:
        _write_circuit(circuit, out)

    n_bus = address_width(ds)
    report = {
        "mode": mode,
        "n_bits": ds.n,
        "m_records": ds.M,
        "bus_qubits": n_bus,
        "register_qubits": 1,
        "ancilla_qubits": len(circuit.ancilla_qubits),
        "depth": schedule(circuit).depth,
        "duplicate_addresses": ",".join(duplicates),
        "circuit_file": out or "",
    }
    for kind, count in sorted(circuit.counts_by_kind().items()):
        report[f"gates_{kind}"] = count
    if mode != BINARY_MODE:
        report["tau_full"] = (noise.count_tau(n_bus, ds.M, noise.FULL)
                              if n_bus >= 2
                              else noise.count_tau_single_bit(ds.M))
        report["tau_mild"] = noise.count_tau(n_bus, ds.M, noise.MILD)
        if decompose == "toffoli" and not complex_data:
            report["tau_counted"] = noise.count_locations_in_circuit(circuit)

    if run_sim:
        try:
            _simulate_into_report(report, mode, bus_spec, ds, ds_write,
                                  complex_data)
        except PostSelectionError as exc:
            _fail(IMPOSSIBLE, str(exc))
        except FFQRAMError as exc:
            _fail(INPUT_ERROR, str(exc))
    _emit_report(report, report_path, not no_timestamp, seed)


def _simulate_into_report(report, mode, bus_spec, ds, ds_write,
                          complex_data) -> None:
    n = address_width(ds)
    if mode == BINARY_MODE:
        r = len(str(ds.records[0].value)) if isinstance(ds.records[0].value, str) else 1
        start = sv.tensor(bus_spec.realize(n), StateVector.zero_state(r))
        final = write_binary(start, ds)
        report["norm"] = final.norm()
        report["fidelity_oracle"] = sv.fidelity(final,
                                                _binary_oracle(bus_spec, ds, r))
        report["post_selected"] = False
        return
    if complex_data:
        state = complex_amplitude_write(bus_spec, ds)
    else:
        state = simulate_write(bus_spec, ds_write)
        report["p1_analytic"] = postselection_probability(bus_spec, ds_write)
    report["p1_simulated"] = sv.probability_of(state, n, 1)
    report["zero_amplitude_addresses"] = ",".join(
        zero_amplitude_addresses(bus_spec, ds_write))
    weights = _register_weights(ds_write, complex_data)
    if "p1_analytic" not in report:
        psi = bus_spec.realize(n).amplitudes
        report["p1_analytic"] = float(sum(
            abs(psi[int(bits, 2)] * w) ** 2 for bits, w in weights.items()))
    selected, _ = sv.post_select(state, n, 1)
    report["fidelity_oracle"] = sv.fidelity(
        selected, _qdb_oracle(bus_spec, ds_write, weights))
    report["post_selected"] = True


def _register_weights(ds: Dataset, complex_data: bool) -> dict[str, complex]:
    """Exact |1>-component per address from composing each record's 2x2
    register action (handles repeated addresses)."""
    from .gates import phase_matrix, roty_matrix
    from .synthesis import address_bits
    if complex_data:
        scale = max(abs(complex(r.value)) for r in ds.records)
    register: dict[str, np.ndarray] = {}
    for bits, rec in zip(address_bits(ds), ds.records):
        if complex_data:
            b = complex(rec.value)
            theta = math.asin(abs(b) / scale)
            phi = np.angle(b) if abs(b) > 0 else 0.0
            step = phase_matrix(phi) @ roty_matrix(theta)
        else:
            step = roty_matrix(float(np.real(complex(rec.value))))
        register[bits] = step @ register.get(bits, np.eye(2))
    return {bits: complex(u[1, 0]) for bits, u in register.items()}


def _qdb_oracle(bus_spec: BusSpec, ds: Dataset,
                weights: dict[str, complex]) -> StateVector:
    """Directly constructed target: bus amplitude times weight per address."""
    n = address_width(ds)
    psi = bus_spec.realize(n).amplitudes
    target = np.zeros(1 << n, dtype=np.complex128)
    for bits, w in weights.items():
        target[int(bits, 2)] = psi[int(bits, 2)] * w
    norm = np.linalg.norm(target)
    if norm == 0:
        raise PostSelectionError("target state is empty")
    return StateVector(n, target / norm, _validate=False)


def _binary_oracle(bus_spec: BusSpec, ds: Dataset, r: int) -> StateVector:
    n = ds.n
    psi = bus_spec.realize(n).amplitudes
    out = np.zeros(1 << (n + r), dtype=np.complex128)
    stored = {rec.bits: (rec.value if isinstance(rec.value, str)
                         else str(int(rec.value)))
              for rec in ds.records}
    for j in range(1 << n):
        bits = format(j, f"0{n}b")
        value = stored.get(bits, "0" * r)
        out[(j << r) | int(value, 2)] = psi[j]
    return StateVector(n + r, out, _validate=False)


@main.command("noise")
@click.option("--m", "--M", "m_values", required=True,
              help="comma list of record counts, e.g. 2,4,8")
@click.option("--ps", required=True, help="comma list of target p_s values")
@click.option("--model", default="full", show_default=True,
              help="full, mild, both, or a comma list")
@click.option("--n-rule", default="log2M", show_default=True,
              help="log2M or fixed:<n>")
@click.option("--out", default=None, help="write the CSV here as well")
def noise_cmd(m_values, ps, model, n_rule, out):
    """Emit the per-location error rate required for each (M, p_s)."""
    try:
        m_list = [int(v) for v in m_values.split(",")]
        ps_list = [float(v) for v in ps.split(",")]
    except ValueError as exc:
        _fail(INPUT_ERROR, str(exc))
    models = ["full", "mild"] if model == "both" else model.split(",")
    n_of_m = None
    if n_rule != "log2M":
        if not n_rule.startswith("fixed:"):
            _fail(INPUT_ERROR, f"unknown --n-rule {n_rule!r}")
        try:
            fixed_n = int(n_rule.split(":", 1)[1])
        except ValueError:
            _fail(INPUT_ERROR, f"bad --n-rule {n_rule!r}")
        n_of_m = lambda M: fixed_n  # noqa: E731
    rows = []
    try:
        for mdl in models:
            rows.extend(noise.curve(m_list, ps_list, mdl.strip(), n_of_m))
    except FFQRAMError as exc:
        _fail(INPUT_ERROR, str(exc))
    text = noise.curve_csv(rows)
    if out:
        Path(out).write_text(text)
    click.echo(text, nl=False)


def _resolve_branch(source: str, width: int) -> Circuit:
    if Path(source).exists():
        frag = load_circuit_file(source)
        if frag.num_qubits != width:
            _fail(INPUT_ERROR,
                  f"{source}: fragment is {frag.num_qubits} qubits wide, "
                  f"data state is {width}")
        return frag
    try:
        return forking.preset_fragment(source, width)
    except FFQRAMError as exc:
        _fail(INPUT_ERROR, str(exc))


def _load_phi(path: str) -> StateVector:
    if path.endswith(".csv"):
        ds = load_dataset_csv(path, ANGLE_MODE)
        state = simulate_write(BusSpec.uniform(), ds)
        phi, _ = sv.post_select(state, address_width(ds), 1)
        return phi
    circuit = load_circuit_file(path)
    return simulate(circuit)


@main.command()
@click.option("--phi", "phi_path", required=True,
              help="angle dataset (.csv, written then post-selected) or a "
                   "circuit file simulated from |0...0>")
@click.option("--u1", required=True, help="branch preset or circuit file")
@click.option("--u2", required=True, help="branch preset or circuit file")
@click.option("--u3", default=None, help="third branch (enables d=3 sums)")
@click.option("--part", default="real", show_default=True,
              type=click.Choice(["real", "imag", "sum"]))
@click.option("--shots", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--no-timestamp", is_flag=True)
def fork(phi_path, u1, u2, u3, part, shots, seed, no_timestamp):
    """Estimate signed inner products with one state preparation."""
    try:
        phi = _load_phi(phi_path)
    except PostSelectionError as exc:
        _fail(IMPOSSIBLE, str(exc))
    n = phi.num_qubits
    branches = [_resolve_branch(u1, n), _resolve_branch(u2, n)]
    if u3 is not None:
        branches.append(_resolve_branch(u3, n))
    seed = _resolve_seed(seed)
    evolved = [simulate(frag, initial=phi) for frag in branches]
    report = {"part": part, "block_qubits": n, "branches": len(branches)}

    try:
        if part == "sum":
            total = forking.pairwise_sum(phi, branches)
            d = len(branches)
            report["pairwise_sum"] = total
            report["p0"] = total / d ** 2
            report["oracle_sum"] = float(sum(
                sv.inner_product(a, b).real
                for a in evolved for b in evolved))
        else:
            if len(branches) != 2:
                _fail(INPUT_ERROR, "--part real/imag takes exactly 2 branches")
            test = forking.swap_test_real if part == "real" \
                else forking.swap_test_imag
            p0, estimate = test(phi, branches[0], branches[1])
            ip = sv.inner_product(evolved[0], evolved[1])
            report["p0"] = p0
            report["estimate_exact"] = estimate
            report["oracle_inner_product"] = (ip.real if part == "real"
                                              else ip.imag)
            if shots:
                est = forking.sample_control(p0, shots, seed)
                report["shots"] = shots
                report["estimate_sampled"] = 2.0 * est.estimate - 1.0
                report["stderr"] = 2.0 * est.stderr
    except FFQRAMError as exc:
        _fail(INPUT_ERROR, str(exc))
    _emit_report(report, None, not no_timestamp, seed)


@main.command()
@click.option("--train", required=True, help="matrix CSV, one row per vector")
@click.option("--simulate", "run_sim", is_flag=True)
@click.option("--out", default=None, help="circuit file (.txt or .json)")
@click.option("--report", "report_path", default=None)
@click.option("--seed", type=int, default=None)
@click.option("--no-timestamp", is_flag=True)
def qsvm(train, run_sim, out, report_path, seed, no_timestamp):
    """Build (and optionally verify) the training-state loader circuit."""
    rows = _read_rows(train)
    widths = {len(row) for _, row in rows}
    if len(widths) != 1:
        _fail(INPUT_ERROR, f"{train}: ragged matrix (row widths {sorted(widths)})")
    try:
        matrix = [[float(v) for v in row] for _, row in rows]
    except ValueError as exc:
        _fail(INPUT_ERROR, f"{train}: {exc}")
    try:
        t = TrainingSet.from_matrix(matrix)
        circuit = synthesize_chi_circuit(t)
    except FFQRAMError as exc:
        _fail(INPUT_ERROR, str(exc))
    seed = _resolve_seed(seed)
    if out:
        _write_circuit(circuit, out)
    report = {
        "rows": t.orig_shape[0],
        "cols": t.orig_shape[1],
        "padded_rows": t.M,
        "padded_cols": t.N,
        "bus_qubits": circuit.num_qubits - 1 - len(circuit.ancilla_qubits),
        "register_qubits": 1,
        "ancilla_qubits": len(circuit.ancilla_qubits),
        "write_blocks": t.M * t.N,
        "zero_angle_blocks": int(np.sum(t.x == 0)),
        "depth": schedule(circuit).depth,
        "circuit_file": out or "",
    }
    for kind, count in sorted(circuit.counts_by_kind().items()):
        report[f"gates_{kind}"] = count
    if run_sim:
        try:
            chi, p_success = prepare_chi(t)
        except PostSelectionError as exc:
            _fail(IMPOSSIBLE, str(exc))
        report["p_success"] = p_success
        report["fidelity_oracle"] = sv.fidelity(chi, target_chi(t))
        report["signed_overlap"] = sv.inner_product(chi, target_chi(t)).real
    _emit_report(report, report_path, not no_timestamp, seed)


if __name__ == "__main__":
    main()
