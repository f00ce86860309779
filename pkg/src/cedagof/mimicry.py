"""Seeded mimicry simulation, count matrix and row proportions."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .binning import BinIntervals, count_bins
from .ingest import Sample, SummaryStats

Sampler = Callable[[np.random.Generator, int, dict], np.ndarray]


def _normal(rng: np.random.Generator, n: int, params: dict) -> np.ndarray:
    # PCG64 + ziggurat: table driven, so draws do not depend on libm rounding
    return params["mean"] + params["sd"] * rng.standard_normal(n)


DISTRIBUTIONS: dict[str, Sampler] = {"normal": _normal}


def register_distribution(name: str, sampler: Sampler) -> None:
    """Add a mimicry family. ``sampler(rng, n, params)`` must return n draws."""
    DISTRIBUTIONS[name] = sampler


@dataclass(frozen=True)
class MimicryConfig:
    m: int
    seed: int
    mean: float
    sd: float
    dist: str = "normal"
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if not self.sd > 0:
            raise ValueError(f"sd must be positive, got {self.sd}")
        if self.dist not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.dist!r}")

    @classmethod
    def from_stats(cls, stats: SummaryStats, m: int = 100, seed: int = 1, dist: str = "normal") -> "MimicryConfig":
        return cls(m=m, seed=seed, mean=stats.mean, sd=stats.sd, dist=dist)

    @property
    def params(self) -> dict:
        return {"mean": self.mean, "sd": self.sd, **self.extra}


def row_generator(seed: int, row: int) -> np.random.Generator:
    """Independent stream for simulation ``row`` (1-based) under ``seed``."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(row,))
    return np.random.Generator(np.random.PCG64(ss))


def simulate_mimicries(cfg: MimicryConfig, n: int) -> np.ndarray:
    """An ``(m, n)`` array; row i depends only on (seed, i + 1)."""
    sampler = DISTRIBUTIONS[cfg.dist]
    out = np.empty((cfg.m, n), dtype=np.float64)
    for i in range(cfg.m):
        out[i] = sampler(row_generator(cfg.seed, i + 1), n, cfg.params)
    return out


@dataclass(frozen=True, eq=False)
class CountMatrix:
    """Row 0 holds the observed sample's bin counts, rows 1..m the mimicries."""

    counts: np.ndarray
    intervals: BinIntervals

    @property
    def n(self) -> int:
        return int(self.counts[0].sum())

    @property
    def m(self) -> int:
        return self.counts.shape[0] - 1

    def to_csv(self) -> str:
        return _matrix_csv(self.counts, self.intervals, "{:d}")


@dataclass(frozen=True, eq=False)
class P0Matrix:
    values: np.ndarray
    intervals: BinIntervals

    def to_csv(self) -> str:
        return _matrix_csv(self.values, self.intervals, "{!r}")


def _matrix_csv(mat: np.ndarray, b: BinIntervals, fmt: str) -> str:
    buf = io.StringIO()
    buf.write("row," + ",".join(f'"{lab}"' for lab in b.labels()) + "\n")
    for i, row in enumerate(mat):
        name = "observed" if i == 0 else f"sim{i}"
        buf.write(name + "," + ",".join(fmt.format(x.item()) for x in row) + "\n")
    return buf.getvalue()


def build_count_matrix(s: Sample, mims: np.ndarray, b: BinIntervals) -> CountMatrix:
    mims = np.asarray(mims, dtype=np.float64).reshape(-1, s.n) if np.size(mims) else np.empty((0, s.n))
    rows = [count_bins(s.values, b)] + [count_bins(r, b) for r in mims]
    counts = np.vstack(rows)
    counts.setflags(write=False)
    return CountMatrix(counts, b)


def to_p0(c: CountMatrix) -> P0Matrix:
    p0 = c.counts / c.n
    p0.setflags(write=False)
    return P0Matrix(p0, c.intervals)
