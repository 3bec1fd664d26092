"""Price panels, asset metadata, log-returns and a synthetic factor-model panel."""
from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from marketmap.errors import DataError

__all__ = [
    "PricePanel",
    "AssetMeta",
    "ReturnPanel",
    "SectorSpec",
    "load_prices",
    "write_prices",
    "load_metadata",
    "write_metadata",
    "compute_log_returns",
    "generate_synthetic_panel",
]


def _frozen(array, dtype=np.float64):
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def _check_tickers(tickers):
    seen = set()
    for t in tickers:
        if not isinstance(t, str) or not t.strip():
            raise DataError(f"empty ticker in {tickers!r}")
        if t in seen:
            raise DataError(f"duplicate ticker {t!r}")
        seen.add(t)


@dataclass(frozen=True)
class PricePanel:
    """Daily closing prices, one row per date and one column per ticker."""

    dates: tuple[dt.date, ...]
    tickers: tuple[str, ...]
    prices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "prices", _frozen(self.prices))
        _check_tickers(self.tickers)
        if self.prices.ndim != 2 or self.prices.shape != (len(self.dates), len(self.tickers)):
            raise DataError(
                f"price matrix shape {self.prices.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers"
            )
        for a, b in zip(self.dates, self.dates[1:]):
            if not b > a:
                raise DataError(f"dates not strictly increasing at {a} -> {b}")
        bad = np.argwhere(~(self.prices > 0) | ~np.isfinite(self.prices))
        if bad.size:
            r, c = bad[0]
            raise DataError(
                f"price at row {r} ({self.dates[r]}), column {self.tickers[c]!r} "
                f"must be a positive finite number, got {self.prices[r, c]!r}"
            )

    @property
    def shape(self):
        return self.prices.shape


@dataclass(frozen=True)
class AssetMeta:
    ticker: str
    company: str
    sector: str

    def __post_init__(self):
        if not self.ticker.strip():
            raise DataError("metadata row has an empty ticker")
        if not self.sector.strip():
            raise DataError(f"metadata for {self.ticker!r} has an empty sector")


@dataclass(frozen=True)
class ReturnPanel:
    """Log-returns: ``returns[t, i] = ln P[t+1, i] - ln P[t, i]``."""

    tickers: tuple[str, ...]
    returns: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "returns", _frozen(self.returns))
        _check_tickers(self.tickers)
        if self.returns.ndim != 2 or self.returns.shape[1] != len(self.tickers):
            raise DataError(
                f"returns shape {self.returns.shape} does not match {len(self.tickers)} tickers"
            )
        if not np.all(np.isfinite(self.returns)):
            raise DataError("returns contain non-finite values")

    @property
    def n_obs(self):
        return self.returns.shape[0]

    @property
    def n_assets(self):
        return self.returns.shape[1]


def _parse_date(text, lineno):
    try:
        return dt.date.fromisoformat(text.strip())
    except ValueError:
        raise DataError(f"line {lineno}: unparseable date {text!r}") from None


def load_prices(path, format="wide-csv"):
    """Read a wide price CSV: header ``date,T1,...,TN`` then one row per date.

    Column order is preserved.  Any nonpositive, missing or unparseable
    price is rejected with its line number and ticker.
    """
    if format != "wide-csv":
        raise DataError(f"unsupported price format {format!r}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if not header or header[0].strip().lower() != "date":
            raise DataError(f"{path}: header must start with 'date'")
        tickers = [h.strip() for h in header[1:]]
        if not tickers:
            raise DataError(f"{path}: no ticker columns")
        _check_tickers(tickers)
        dates, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{path}: line {lineno} has {len(row)} fields, expected {len(header)}"
                )
            dates.append(_parse_date(row[0], lineno))
            values = []
            for ticker, cell in zip(tickers, row[1:]):
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: line {lineno}, column {ticker!r}: unparseable price {cell!r}"
                    ) from None
                if not (value > 0 and math.isfinite(value)):
                    raise DataError(
                        f"{path}: line {lineno}, column {ticker!r}: price must be positive, got {cell!r}"
                    )
                values.append(value)
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no price rows")
    return PricePanel(dates, tickers, np.asarray(rows, dtype=np.float64))


def write_prices(panel, path):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", *panel.tickers])
        for date, row in zip(panel.dates, panel.prices):
            writer.writerow([date.isoformat(), *(repr(float(x)) for x in row)])
    return path


def load_metadata(path):
    """Read ``ticker,company,sector`` rows.  Tickers are not checked against any panel."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = [f.strip().lower() for f in (reader.fieldnames or [])]
        if fields[:3] != ["ticker", "company", "sector"]:
            raise DataError(f"{path}: header must be ticker,company,sector")
        for lineno, row in enumerate(reader, start=2):
            values = list(row.values())
            if len(values) < 3 or any(v is None for v in values[:3]):
                raise DataError(f"{path}: line {lineno} is missing fields")
            ticker, company, sector = (v.strip() for v in values[:3])
            try:
                out.append(AssetMeta(ticker, company, sector))
            except DataError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    return out


def write_metadata(meta, path):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["ticker", "company", "sector"])
        for m in meta:
            writer.writerow([m.ticker, m.company, m.sector])
    return path


def compute_log_returns(panel):
    if panel.prices.shape[0] < 2:
        raise DataError("need at least 2 price rows to form a return")
    return ReturnPanel(panel.tickers, np.diff(np.log(panel.prices), axis=0))


@dataclass(frozen=True)
class SectorSpec:
    """A block of ``size`` assets sharing one sector factor.

    ``loading`` is either one weight for the whole sector or a sequence of
    ``size`` per-asset weights (a single heavily loaded member makes a hub).
    """

    label: str
    size: int
    loading: float | tuple[float, ...] = field(default=0.0)

    def loadings(self):
        if np.ndim(self.loading) == 0:
            return np.full(self.size, float(self.loading))
        out = np.asarray(self.loading, dtype=np.float64)
        if out.shape != (self.size,):
            raise DataError(f"sector {self.label!r}: {out.size} loadings for {self.size} assets")
        return out


def _business_days(start, count):
    days, day = [], start
    while len(days) < count:
        if day.weekday() < 5:
            days.append(day)
        day += dt.timedelta(days=1)
    return days


def generate_synthetic_panel(
    n_assets: int,
    n_days: int,
    sectors: Sequence[SectorSpec | tuple],
    market_loading: float,
    seed: int,
    volatility: float = 0.02,
):
    """Simulate a one-market-factor plus one-factor-per-sector price panel.

    Each standardized daily return is

        r_i = m * F + s_i * G_sector(i) + sqrt(1 - m**2 - s_i**2) * eps_i

    with independent standard normal ``F``, ``G`` and ``eps``, so every
    return series has unit variance before scaling by ``volatility``.
    Prices start at 100 on the first day.

    Parameters
    ----------
    n_assets, n_days : int
        Panel width and number of price rows.
    sectors : sequence of SectorSpec or (label, size, loading)
        Sector sizes must add up to ``n_assets``.  ``loading`` may be a
        per-asset sequence.
    market_loading : float
        Weight ``m`` of the common factor, in [0, 1).
    seed : int
        Seed of the Philox stream; the output depends on nothing else.

    Returns
    -------
    (PricePanel, list of AssetMeta)
    """
    specs = [s if isinstance(s, SectorSpec) else SectorSpec(*s) for s in sectors]
    if n_days < 2:
        raise DataError("n_days must be at least 2")
    if sum(s.size for s in specs) != n_assets:
        raise DataError(
            f"sector sizes sum to {sum(s.size for s in specs)}, expected {n_assets}"
        )
    if not 0.0 <= market_loading < 1.0:
        raise DataError(f"market_loading {market_loading} outside [0, 1)")
    for s in specs:
        if s.size < 0:
            raise DataError(f"sector {s.label!r} has negative size")
        w = s.loadings()
        if np.any(w < 0.0) or np.any(w >= 1.0):
            raise DataError(f"sector {s.label!r} loading {s.loading} outside [0, 1)")
        if np.any(market_loading**2 + w**2 >= 1.0):
            raise DataError(
                f"sector {s.label!r}: market_loading**2 + loading**2 must be < 1"
            )
    if not 0 <= seed < 2**64:
        raise DataError("seed must be a 64-bit unsigned integer")

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    n_steps = n_days - 1
    market = rng.standard_normal(n_steps)
    sector_factors = rng.standard_normal((n_steps, len(specs)))
    noise = rng.standard_normal((n_steps, n_assets))

    membership = np.repeat(np.arange(len(specs)), [s.size for s in specs])
    loading = np.concatenate([s.loadings() for s in specs]) if specs else np.zeros(0)
    residual = np.sqrt(1.0 - market_loading**2 - loading**2)
    z = (market_loading * market[:, None]
         + loading * sector_factors[:, membership]
         + residual * noise)

    log_prices = np.vstack([np.zeros(n_assets), np.cumsum(volatility * z, axis=0)])
    prices = 100.0 * np.exp(log_prices)

    width = max(3, len(str(n_assets)))
    tickers = [f"S{i:0{width}d}" for i in range(n_assets)]
    meta = [
        AssetMeta(t, f"Synthetic {specs[k].label} {i}", specs[k].label)
        for i, (t, k) in enumerate(zip(tickers, membership))
    ]
    dates = _business_days(dt.date(2010, 1, 4), n_days)
    return PricePanel(dates, tickers, prices), meta
