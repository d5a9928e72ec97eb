"""Artifact formats: CSV (plot-ready), JSON summaries, raw binary dumps.

Every text artifact starts with ``# tfc <version> config=<hash>`` so a stray
file can be traced back to the exact run that produced it.  Floats are written
with 17 significant digits -- lossless for float64 round-trips.  JSON carries
the same version/config as ordinary fields.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ._version import __version__
from .errors import ConfigError
from .grids import SampleGrid, Signal

__all__ = [
    "config_hash",
    "write_csv",
    "read_signal_csv",
    "write_signal_csv",
    "read_signal_raw",
    "write_signal_raw",
    "write_coefficients_csv",
    "write_power_csv",
    "write_spectrum_csv",
    "write_scaling_csv",
    "write_decay_csv",
    "write_hermite_csv",
    "write_autocorr_csv",
    "write_operator_binary",
    "read_mask_csv",
    "write_mask_csv",
    "write_json",
]

_REL_TOL = 1e-9


def config_hash(config: dict) -> str:
    """12-hex digest of a flat config mapping, order-independent."""
    canon = "\n".join(f"{k}={config[k]}" for k in sorted(config))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def _header(tag: str) -> str:
    return f"# tfc {__version__} config={tag}"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path, columns, rows, tag: str = "-") -> None:
    lines = [_header(tag), ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    return value


def write_json(path, payload: dict, tag: str = "-") -> None:
    body = {"version": __version__, "config": tag, **_jsonable(payload)}
    Path(path).write_text(
        json.dumps(body, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )


# ---------------------------------------------------------------------------
# signals


def write_signal_csv(path, signal: Signal, tag: str = "-") -> None:
    rows = zip(signal.grid.times, signal.samples.real, signal.samples.imag)
    write_csv(path, ("t", "re", "im"), rows, tag)


def read_signal_csv(path) -> Signal:
    """Parse a ``t,re,im`` CSV back into a Signal.

    The time column must be a uniform centered grid; malformed rows are
    reported with their (1-based) line number.
    """
    ts, res, ims = [], [], []
    saw_header = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not saw_header:
                if [c.strip().lower() for c in line.split(",")] != ["t", "re", "im"]:
                    raise ConfigError(
                        f"{path}: row {lineno}: expected header 't,re,im', got {line!r}"
                    )
                saw_header = True
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ConfigError(f"{path}: row {lineno}: expected 3 fields, got {len(parts)}")
            try:
                t, re_v, im_v = (float(p) for p in parts)
            except ValueError as exc:
                raise ConfigError(f"{path}: row {lineno}: {exc}") from exc
            ts.append(t)
            res.append(re_v)
            ims.append(im_v)
    if not saw_header:
        raise ConfigError(f"{path}: missing 't,re,im' header")
    if len(ts) < 2:
        raise ConfigError(f"{path}: need at least 2 samples, got {len(ts)}")
    t = np.array(ts)
    n = len(t)
    dt = (t[-1] - t[0]) / (n - 1)
    if dt <= 0 or np.max(np.abs(np.diff(t) - dt)) > _REL_TOL * max(dt, 1.0):
        raise ConfigError(f"{path}: time column is not a uniform increasing grid")
    if abs(t[0] + (n - 1) * dt / 2) > _REL_TOL * max(abs(t[0]), 1.0):
        raise ConfigError(f"{path}: time grid must be centered around 0")
    return Signal(SampleGrid(n, float(dt)), np.array(res) + 1j * np.array(ims))


def write_signal_raw(path, signal: Signal) -> None:
    """Little-endian float64, re/im interleaved (complex128 layout)."""
    signal.samples.astype("<c16").tofile(path)


def read_signal_raw(path, dt: float) -> Signal:
    """Inverse of :func:`write_signal_raw`; the time step is not stored."""
    flat = np.fromfile(path, dtype="<f8")
    if len(flat) % 2 or len(flat) < 4:
        raise ConfigError(
            f"{path}: raw signal must hold an even number (>= 4) of float64 values"
        )
    samples = flat[0::2] + 1j * flat[1::2]
    return Signal(SampleGrid(len(samples), dt), samples)


# ---------------------------------------------------------------------------
# phase-space tables


def write_coefficients_csv(path, coeffs, tag: str = "-") -> None:
    pg = coeffs.phase_grid
    rows = (
        (tau, sigma, val.real, val.imag)
        for i, tau in enumerate(pg.tau_values)
        for sigma, val in zip(pg.sigma_values, coeffs.values[i])
    )
    write_csv(path, ("tau", "sigma", "re", "im"), rows, tag)


def write_power_csv(path, coeffs, tag: str = "-") -> None:
    pg = coeffs.phase_grid
    power = np.abs(coeffs.values) ** 2
    rows = (
        (tau, sigma, power[i, j])
        for i, tau in enumerate(pg.tau_values)
        for j, sigma in enumerate(pg.sigma_values)
    )
    write_csv(path, ("tau", "sigma", "power"), rows, tag)


def write_spectrum_csv(path, eigenvalues, tag: str = "-") -> None:
    rows = ((k, lam) for k, lam in enumerate(np.asarray(eigenvalues)))
    write_csv(path, ("k", "lambda"), rows, tag)


def write_scaling_csv(path, report, tag: str = "-") -> None:
    rows = (
        (row.r, row.area, row.trace, row.sum_sq, row.n_lambda, row.n_plunge)
        for row in report.rows
    )
    write_csv(path, ("r", "area", "trace", "sum_sq", "n_lambda", "n_plunge"), rows, tag)


def write_decay_csv(path, rows, tag: str = "-") -> None:
    """Rows of (k, lambda, C_fit, ok)."""
    write_csv(path, ("k", "lambda", "C_fit", "ok"), rows, tag)


def write_hermite_csv(path, rows, tag: str = "-") -> None:
    """Rows of (cluster, overlap, lambda_mean)."""
    write_csv(path, ("cluster", "overlap", "lambda_mean"), rows, tag)


def write_autocorr_csv(path, rows, tag: str = "-") -> None:
    write_csv(path, ("r", "value"), rows, tag)


def write_operator_binary(path, matrix: np.ndarray) -> None:
    """Row-major little-endian float64, re/im interleaved, full Hermitian."""
    np.ascontiguousarray(matrix).astype("<c16").tofile(path)


# ---------------------------------------------------------------------------
# masks


def write_mask_csv(path, mask_region, tag: str = "-") -> None:
    rows = (
        (tau, sigma, bool(mask_region.inside[i, j]))
        for i, tau in enumerate(mask_region.tau_values)
        for j, sigma in enumerate(mask_region.sigma_values)
    )
    write_csv(path, ("tau", "sigma", "inside"), rows, tag)


def read_mask_csv(path):
    """Read a ``tau,sigma,inside`` cell list into a Mask region.

    The rows must enumerate a full product lattice (any order); cell flags
    are 0/1.
    """
    from .regions import Mask

    taus, sigmas, flags = [], [], []
    saw_header = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not saw_header:
                if [c.strip().lower() for c in line.split(",")] != [
                    "tau",
                    "sigma",
                    "inside",
                ]:
                    raise ConfigError(
                        f"{path}: row {lineno}: expected header 'tau,sigma,inside'"
                    )
                saw_header = True
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ConfigError(f"{path}: row {lineno}: expected 3 fields")
            try:
                taus.append(float(parts[0]))
                sigmas.append(float(parts[1]))
                flags.append(int(float(parts[2])))
            except ValueError as exc:
                raise ConfigError(f"{path}: row {lineno}: {exc}") from exc
    if not flags:
        raise ConfigError(f"{path}: empty mask file")
    tau_axis = np.unique(np.array(taus))
    sigma_axis = np.unique(np.array(sigmas))
    if len(tau_axis) * len(sigma_axis) != len(flags):
        raise ConfigError(
            f"{path}: rows do not enumerate a full {len(tau_axis)}x{len(sigma_axis)} lattice"
        )
    inside = np.zeros((len(tau_axis), len(sigma_axis)), dtype=bool)
    for t, s, f in zip(taus, sigmas, flags):
        i = int(np.searchsorted(tau_axis, t))
        j = int(np.searchsorted(sigma_axis, s))
        inside[i, j] = bool(f)
    return Mask(tau_axis, sigma_axis, inside)
