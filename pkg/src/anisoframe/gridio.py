"""File formats: PGM / headerless-CSV grids and line-oriented coefficients.

Numbers are serialized with 17 significant digits so that a round trip
through text is bit-faithful for doubles.
"""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .indices import format_index, parse_index

FLOAT_FMT = "%.17g"


def fmt(x: float) -> str:
    return FLOAT_FMT % float(x)


# ---------------------------------------------------------------------------
# PGM (P2 ascii / P5 binary, 8- or 16-bit)
# ---------------------------------------------------------------------------

def read_pgm(path) -> np.ndarray:
    """Read a PGM image into floats in [0, 1]."""
    data = Path(path).read_bytes()
    if not data[:2] in (b"P2", b"P5"):
        raise ValueError("not a PGM file (expected P2 or P5 magic)")
    magic = data[:2].decode()
    # header tokens: magic, width, height, maxval, with # comments allowed
    tokens = []
    pos = 2
    while len(tokens) < 3:
        m = re.match(rb"(?:\s+|#[^\n]*\n)*(\d+)", data[pos:])
        if not m:
            raise ValueError("truncated PGM header")
        tokens.append(int(m.group(1)))
        pos += m.end()
    width, height, maxval = tokens
    if magic == "P2":
        values = np.array(data[pos:].split(), dtype=float)
        if values.size != width * height:
            raise ValueError("PGM sample count mismatch")
    else:
        pos += 1  # single whitespace after maxval
        dtype = ">u2" if maxval > 255 else "u1"
        count = width * height
        values = np.frombuffer(data[pos:], dtype=dtype, count=count).astype(float)
    return (values / maxval).reshape(height, width)


def write_pgm(path, img: np.ndarray, maxval: int = 255, binary: bool = True):
    img = np.asarray(img, dtype=float)
    arr = np.clip(np.rint(img * maxval), 0, maxval)
    h, w = arr.shape
    header = f"P5\n{w} {h}\n{maxval}\n" if binary else f"P2\n{w} {h}\n{maxval}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode())
        if binary:
            dtype = ">u2" if maxval > 255 else "u1"
            fh.write(arr.astype(dtype).tobytes())
        else:
            body = "\n".join(" ".join(str(int(v)) for v in row) for row in arr)
            fh.write(body.encode() + b"\n")


# ---------------------------------------------------------------------------
# headerless CSV grids
# ---------------------------------------------------------------------------

def read_csv_grid(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", dtype=float)


def write_csv_grid(path, img: np.ndarray):
    np.savetxt(path, np.asarray(img, dtype=float), delimiter=",", fmt=FLOAT_FMT)


def read_grid(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return read_pgm(path)
    return read_csv_grid(path)


# ---------------------------------------------------------------------------
# coefficient files: index tokens plus real and imaginary part per line
# ---------------------------------------------------------------------------

def dump_coeffs(seq) -> str:
    lines = []
    for idx in sorted(seq):
        v = complex(seq[idx])
        lines.append(f"{format_index(idx)} {fmt(v.real)} {fmt(v.imag)}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_coeffs(text: str, d: int = 2) -> dict:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        idx = parse_index(" ".join(tokens[:-2]), d)
        out[idx] = complex(float(tokens[-2]), float(tokens[-1]))
    return out


def write_coeffs(path, seq):
    Path(path).write_text(dump_coeffs(seq))


def read_coeffs(path, d: int = 2) -> dict:
    return load_coeffs(Path(path).read_text(), d)
