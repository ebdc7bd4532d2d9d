"""CSV and manifest writers.

Floats are written with 17 significant digits and ``\\n`` line endings so that
identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os

import numpy as np

SPECTRUM_HEADER = ("L", "omega_d", "h", "m", "quasi_energy", "overlap_sq", "state_label")
SWEEP_HEADER = ("L", "state", "omega_d", "h", "n", "fidelity")
THERMAL_HEADER = ("n", "t", "site", "x", "y", "z", "d_inst", "d_avg")
NREV_HEADER = ("L", "state", "omega_d", "h", "n_rev")
PEAKS_HEADER = ("L", "state", "omega_d", "n", "h_peak", "height", "width")


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def write_csv(path: str, header, rows) -> str:
    """Write ``rows`` under ``header`` and return the file's SHA-256."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return sha256_file(path)


def read_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_json(path: str, payload: dict) -> str:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return sha256_file(path)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def thermal_rows(trace):
    """Per-site rows followed by one chain-average row (``site = 0``) for each record.

    The chain-average distances compare the site-averaged Bloch vector with the
    site-averaged ergodic vector.
    """
    d_inst, d_avg = trace.d_inst, trace.d_avg
    avg = trace.chain_average
    erg = trace.chain_ergodic
    running = trace.running_mean.mean(axis=1)
    for k, n in enumerate(trace.n):
        t = float(trace.t[k])
        for j in range(trace.L):
            x, y, z = trace.bloch[k, j]
            yield int(n), t, j + 1, x, y, z, d_inst[k, j], d_avg[k, j]
        x, y, z = avg[k]
        yield (int(n), t, 0, x, y, z, 0.5 * float(np.linalg.norm(avg[k] - erg)),
               0.5 * float(np.linalg.norm(running[k] - erg)))


def gnuplot_script(command: str, csv_name: str) -> str:
    """A small gnuplot script that plots ``csv_name``; the CSV stays the source of truth."""
    head = f'set datafile separator ","\nset key autotitle columnhead\nfile = "{csv_name}"\n'
    body = {
        "spectrum": 'set xlabel "h"\nset ylabel "quasi-energy"\n'
                    "plot file using 3:5 with points pt 7 ps 0.3 notitle\n",
        "fidelity-sweep": 'set xlabel "h"\nset ylabel "F(nT)"\n'
                          "plot for [k=0:*] file using 4:($5==k ? $6 : 1/0) with lines title sprintf('n=%d', k)\n",
        "nrev-fit": 'set xlabel "h"\nset ylabel "n_rev"\nplot file using 4:5 with linespoints\n',
        "thermalize": 'set xlabel "t"\nset ylabel "chain average"\n'
                      "plot file using 2:($3==0 ? $4 : 1/0) with lines title 'X', "
                      "'' using 2:($3==0 ? $6 : 1/0) with lines title 'Z'\n",
        "peaks": 'set xlabel "n"\nset ylabel "h_peak"\nplot file using 4:5 with linespoints\n',
    }[command]
    return head + body


def ensure_dir(path: str) -> None:
    os.makedirs(path, exist_ok=True)
