"""``floquet-pxp`` command line entry point."""

from __future__ import annotations

import logging
import math
import os
import sys
import time
from dataclasses import asdict

import numpy as np

from . import __version__
from .basis import enumerate_basis
from .config import RunConfig, UsageError, n_values, parse_config, render
from .exceptions import DecompositionError, FitError, FloquetPXPError, IntegrationError
from .floquet import decompose, overlaps
from .io import (
    NREV_HEADER, PEAKS_HEADER, SPECTRUM_HEADER, SWEEP_HEADER, THERMAL_HEADER,
    ensure_dir, gnuplot_script, read_csv, thermal_rows, write_csv, write_json,
)
from .operators import DriveParams
from .propagation import one_period_propagator
from .states import parse_state
from .sweep import (
    SweepGrid, crest_trajectory, fidelity_sweep, fit_nrev, min_revival_index, nrev_profile,
    track_peaks,
)
from .thermal import thermalization_trace

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_INTEGRATION = 3
EXIT_FIT = 4
EXIT_IO = 5
EXIT_DECOMPOSITION = 6


class _Run:
    """Collects outputs and metrics for the manifest."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.outputs: list[dict] = []
        self.metrics: dict = {}
        self.partial = False
        self.notes: list[str] = []
        ensure_dir(config.output)

    def path(self, name: str) -> str:
        return os.path.join(self.config.output, name)

    def csv(self, name, header, rows):
        digest = write_csv(self.path(name), header, rows)
        self.outputs.append({"path": name, "sha256": digest})
        if self.config.plot_script:
            script = name.rsplit(".", 1)[0] + ".gp"
            with open(self.path(script), "w") as fh:
                fh.write(gnuplot_script(self.config.command, name))

    def json(self, name, payload):
        self.outputs.append({"path": name, "sha256": write_json(self.path(name), payload)})


def _spectrum(run: _Run):
    c = run.config
    basis = enumerate_basis(c.L)
    psi0 = parse_state(c.state, basis)
    rows, bandwidths, unitarity, recon = [], [], 0.0, 0.0
    for w in c.omega_d:
        for h in c.h:
            U = one_period_propagator(basis, DriveParams(h, w), c.steps)
            unitarity = max(unitarity, U.unitarity_error())
            dec = decompose(U)
            recon = max(recon, float(np.max(np.abs(dec.reconstruct() - U.U))))
            prof = overlaps(dec, psi0)
            for m, (e, p) in enumerate(zip(prof.quasi_energies, prof.weights)):
                rows.append((c.L, w, h, m, e, p, c.state))
            bandwidths.append({"omega_d": w, "h": h, "bandwidth": dec.bandwidth})
    run.csv("spectrum.csv", SPECTRUM_HEADER, rows)
    run.metrics.update(max_unitarity_error=unitarity, max_reconstruction_error=recon)
    run.json("bandwidth.json", {"L": c.L, "bandwidths": bandwidths})


def _sweep(c: RunConfig):
    grid = SweepGrid(c.L, c.h, c.omega_d, n_values(c), c.state, c.steps)
    return fidelity_sweep(grid, n_jobs=c.workers)


def _fidelity_sweep(run: _Run):
    result = _sweep(run.config)
    run.csv("sweep.csv", SWEEP_HEADER, result.rows())
    run.metrics["max_norm_drift"] = result.max_norm_drift
    flagged = int(result.flagged.sum())
    if flagged:
        run.partial = True
        run.notes.append(f"{flagged} grid cells flagged for integration failure")


def _nrev_fit(run: _Run):
    c = run.config
    rows, fits, failed = [], [], []
    for w in c.omega_d:
        window = (c.fit_h_min, c.fit_ratio_max * w)
        h = c.h or tuple(np.round(np.arange(window[0], window[1] + 1e-9, 0.1), 10).tolist())
        points = nrev_profile(h, w, c.L, c.eta, c.state, c.steps, n_jobs=c.workers)
        rows.extend((c.L, c.state, w, hh, nr) for hh, nr in points)
        entry = {"omega_d": w}
        for model in ("with_offset", "proportional"):
            try:
                fit = fit_nrev(points, w, model, window)
            except FitError as exc:
                failed.append(f"omega_d={w} {model}: {exc}")
                continue
            entry[model] = fit.to_dict() | {"eta": c.eta}
            if model == "with_offset":
                entry["n_rev_min"] = min_revival_index(fit, w)
        fits.append(entry)
    run.csv("nrev.csv", NREV_HEADER, rows)
    run.json("fit.json", {"L": c.L, "state": c.state, "eta": c.eta, "fits": fits})
    missing = sum(1 for r in rows if not math.isfinite(r[-1]))
    run.metrics["points_without_arc"] = missing
    if failed:
        run.partial = True
        run.notes.extend(failed)
        raise FitError("; ".join(failed))


def _thermalize(run: _Run):
    c = run.config
    basis = enumerate_basis(c.L)
    U = one_period_propagator(basis, DriveParams(c.h[0], c.omega_d[0]), c.steps)
    trace = thermalization_trace(U, parse_state(c.state, basis), c.n_max)
    run.csv("thermalization.csv", THERMAL_HEADER, thermal_rows(trace))
    run.metrics.update(
        max_unitarity_error=U.unitarity_error(),
        records=len(trace),
        max_bloch_norm=float(np.max(np.linalg.norm(trace.bloch, axis=-1))),
    )


def _load_sweep(path: str):
    table: dict[tuple[float, int], dict[float, float]] = {}
    meta = None
    for row in read_csv(path):
        meta = meta or (int(row["L"]), row["state"])
        key = (float(row["omega_d"]), int(row["n"]))
        table.setdefault(key, {})[float(row["h"])] = float(row["fidelity"])
    return meta, table


def _peaks(run: _Run):
    c = run.config
    if c.input:
        (L, state), table = _load_sweep(c.input)
    else:
        result = _sweep(c)
        L, state = c.L, c.state
        table = {}
        for a, w in enumerate(result.grid.omega_d):
            for k, n in enumerate(result.grid.n):
                table[(w, n)] = dict(zip(result.grid.h, result.fidelity[a, :, k]))
    rows = []
    for (w, n), series in sorted(table.items()):
        h = sorted(series)
        f = [series[x] for x in h]
        for p in track_peaks(h, f, c.min_height, c.min_separation):
            rows.append((L, state, w, n, p.h, p.height, p.width))
    run.csv("peaks.csv", PEAKS_HEADER, rows)
    # crest below the first narrowing, per frequency, for quick inspection
    crests = {}
    for w in sorted({k[0] for k in table}):
        by_n = {}
        for (ww, n), series in table.items():
            if ww == w:
                h = sorted(series)
                by_n[n] = np.array([series[x] for x in h])
        traj = crest_trajectory(h, dict(sorted(by_n.items())), 0.95 * 2.4048 * w,
                                c.min_height, c.min_separation)
        crests[repr(w)] = {str(n): (None if p is None else asdict(p)) for n, p in traj.items()}
    run.json("crests.json", {"L": L, "state": state, "crests": crests})


HANDLERS = {
    "spectrum": _spectrum,
    "fidelity-sweep": _fidelity_sweep,
    "nrev-fit": _nrev_fit,
    "thermalize": _thermalize,
    "peaks": _peaks,
}


def run_command(config: RunConfig) -> int:
    """Execute ``config`` and write its outputs plus ``manifest.json``; return the exit code."""
    start = time.perf_counter()
    try:
        run = _Run(config)
    except OSError as exc:
        log.error("cannot create output directory: %s", exc)
        return EXIT_IO
    status, error = EXIT_OK, None
    try:
        HANDLERS[config.command](run)
    except IntegrationError as exc:
        status, error = EXIT_INTEGRATION, exc
    except FitError as exc:
        status, error = EXIT_FIT, exc
    except DecompositionError as exc:
        status, error = EXIT_DECOMPOSITION, exc
    except OSError as exc:
        status, error = EXIT_IO, exc
    except FloquetPXPError as exc:
        status, error = EXIT_ERROR, exc
    if error is not None:
        log.error("%s failed: %s", config.command, error)
        run.partial = True
    manifest = {
        "command": config.command,
        "config": asdict(config),
        "config_text": render(config),
        "version": __version__,
        "wall_time_s": time.perf_counter() - start,
        "convergence": run.metrics,
        "outputs": run.outputs,
        "partial": run.partial,
        "notes": run.notes + ([str(error)] if error else []),
        "exit_code": status,
    }
    try:
        write_json(run.path("manifest.json"), manifest)
    except OSError as exc:
        log.error("cannot write manifest: %s", exc)
        return EXIT_IO
    return status


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"floquet-pxp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run_command(config)


if __name__ == "__main__":
    sys.exit(main())
