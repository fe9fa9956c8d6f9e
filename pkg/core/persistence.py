"""Utilities for writing sampler outputs atomically and reproducibly."""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

import config
from core.errors import InputError

logger = logging.getLogger(__name__)


def _prepare_for_json(value: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): _prepare_for_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_prepare_for_json(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_prepare_for_json(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    return value


def format_float(x: float, digits: int | None = None) -> str:
    """Fixed significant-digit text; 17 digits round-trip every double."""
    digits = digits or config.CSV_SIGNIFICANT_DIGITS
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{digits}g")


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write to a temp file in the target directory, then rename over ``path``."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, target)
    except Exception:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.info("Wrote %s (%d bytes)", target, len(text.encode("utf-8")))
    return target


def render_json(payload: dict[str, Any]) -> str:
    return json.dumps(_prepare_for_json(payload), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], run_config: dict[str, Any] | None = None) -> str:
    """CSV text; the resolved run configuration rides along as a leading comment line."""
    lines: list[str] = []
    if run_config is not None:
        lines.append("# config: " + json.dumps(_prepare_for_json(run_config), sort_keys=True, separators=(",", ":")))
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def write_json(path: str | Path, payload: dict[str, Any]) -> Path:
    return atomic_write_text(path, render_json(payload))


def write_csv(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    run_config: dict[str, Any] | None = None,
) -> Path:
    return atomic_write_text(path, render_csv(header, rows, run_config))


def read_csv_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a CSV written by ``write_csv`` (comment lines skipped)."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln and not ln.startswith("#")]
    if not lines:
        return [], []
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def load_values(path: str | Path) -> np.ndarray:
    """One decimal value per line; blank lines and ``#`` comments ignored.

    Raises:
        InputError: If the file is not UTF-8 text or a line is not a finite number.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: not UTF-8 text ({e.reason})") from e
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = float(line)
        except ValueError:
            raise InputError(f"{path}:{lineno}: not a number: {line[:40]!r}") from None
        if not math.isfinite(value):
            raise InputError(f"{path}:{lineno}: value must be finite, got {line!r}")
        values.append(value)
    return np.asarray(values, dtype=float)
