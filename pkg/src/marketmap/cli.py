"""Command line entry point: ``marketmap run`` and ``marketmap synth``."""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from marketmap import __version__
from marketmap import centrality as cent
from marketmap.correl import (
    distance_from_correlation,
    estimate_noise_threshold,
    spearman_correlation,
    write_matrix,
)
from marketmap.embed import pcoa_embedding
from marketmap.errors import MarketMapError
from marketmap.netgraph import build_mst, export_network, threshold_sweep
from marketmap.panel import (
    SectorSpec,
    compute_log_returns,
    generate_synthetic_panel,
    load_metadata,
    load_prices,
    write_metadata,
    write_prices,
)

DEFAULT_THRESHOLDS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7)
ANALYSIS_THRESHOLD = 0.7
NETWORK_FORMATS = {"json": "json", "dot": "dot", "graphml": "graphml", "edge-csv": "csv"}


class PipelineError(MarketMapError):
    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    prices: str
    out: str
    meta: Optional[str] = None
    thresholds: tuple = DEFAULT_THRESHOLDS
    n_shuffles: int = 1000
    seed: int = 0
    closeness: str = "sum"
    fit_range: tuple = (0.1, 0.9)
    asset_bin_width: int = 10
    workers: int = 1

    def __post_init__(self):
        self.thresholds = tuple(float(t) for t in self.thresholds)
        self.fit_range = tuple(float(q) for q in self.fit_range)
        if not self.thresholds:
            raise MarketMapError("at least one threshold is required")
        if any(not 0.0 <= t <= 2.0 for t in self.thresholds):
            raise MarketMapError(f"thresholds must lie in [0, 2]: {self.thresholds}")
        if any(b < a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise MarketMapError(f"thresholds must be ascending: {self.thresholds}")
        if self.n_shuffles < 1:
            raise MarketMapError("n_shuffles must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise MarketMapError("seed must be a 64-bit unsigned integer")
        if self.closeness not in ("sum", "mean"):
            raise MarketMapError(f"closeness must be 'sum' or 'mean', got {self.closeness!r}")
        lo, hi = self.fit_range
        if not 0.0 <= lo < hi <= 1.0:
            raise MarketMapError(f"fit range must satisfy 0 <= lo < hi <= 1: {self.fit_range}")

    def to_dict(self):
        d = asdict(self)
        d["thresholds"] = list(self.thresholds)
        d["fit_range"] = list(self.fit_range)
        d.pop("workers")  # execution detail, does not affect results
        return d


def parse_thresholds(text):
    """``"0.1:0.7:0.1"`` (inclusive range) or ``"0.1,0.3,0.5"``."""
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(p) for p in text.split(":"))
        if step <= 0:
            raise MarketMapError("threshold step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 10) for k in range(count))
    return tuple(float(p) for p in text.split(",") if p.strip())


def parse_sectors(text):
    """``"Banking:60:0.9,Mining:40:0.5"`` -> list of SectorSpec.

    A loading written as ``0.9/0.6/0.6`` gives one weight per asset.
    """
    specs = []
    for part in text.split(","):
        try:
            label, size, loading = part.split(":")
            weights = tuple(float(w) for w in loading.split("/"))
        except ValueError:
            raise MarketMapError(f"bad sector spec {part!r}; expected label:size:loading") from None
        specs.append(SectorSpec(label.strip(), int(size),
                                weights[0] if len(weights) == 1 else weights))
    return specs


def read_config_file(path):
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MarketMapError(f"{path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = value.strip("\"'")
    return out


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _clean(value):
    """JSON-safe scalar: nan/inf become null."""
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (MarketMapError, OSError, ValueError) as exc:
        raise PipelineError(name, exc) from exc


def _network_outputs(net, config, out, files, noise_mean):
    label = net.label
    for fmt, ext in NETWORK_FORMATS.items():
        path = export_network(net, fmt, out / f"network_{label}.{ext}")
        files.append(path)

    report = cent.centrality_report(net, closeness_mode=config.closeness)
    files.append(report.write_csv(out / f"centrality_{label}.csv"))

    width = 1 if net.kind == "mst" else config.asset_bin_width
    table = cent.degree_distribution(report.degree, width)
    path = out / f"degreedist_{label}.csv"
    path.write_text(
        "lower_edge,frequency\n"
        + "".join(f"{b},{f}\n" for b, f in zip(table.lower_edges, table.frequencies)),
        encoding="utf-8",
    )
    files.append(path)

    pairs = cent.degree_vs_kshell(net)
    path = out / f"kshell_{label}.csv"
    path.write_text("kshell,degree\n" + "".join(f"{k},{d}\n" for k, d in pairs), encoding="utf-8")
    files.append(path)

    fits = {}
    for measure in cent.MEASURES:
        values = report.measure(measure)
        try:
            series = cent.ccdf(values, fit=config.fit_range)
        except MarketMapError:
            series, fit = cent.ccdf(values), None
        else:
            fit = series.fit
        files.append(series.write_tsv(out / f"ccdf_{label}-{measure}.tsv"))
        fits[measure] = None if fit is None else {
            "alpha": _clean(fit.alpha), "c": _clean(fit.c), "x_min": _clean(fit.x_min),
            "x_max": _clean(fit.x_max), "n_points": fit.n_points}

    summary = {
        "label": label,
        "kind": net.kind,
        "threshold": net.threshold,
        "nodes": net.n,
        "edges": len(net.edges),
        "isolated_nodes": int(np.sum(report.degree == 0)),
        "random_edges": sum(e.random for e in net.edges),
        "total_distance": _clean(net.total_distance()),
        "max_kshell": int(report.kshell.max()) if net.n else 0,
        "eigenvalue": _clean(report.eigenvalue),
        "top": {m: [[t, _clean(v)] for t, v in report.top(m, 4)] for m in cent.MEASURES},
        "powerlaw": fits,
    }
    if net.kind == "asset-graph" and net.threshold > noise_mean:
        summary["note"] = "threshold exceeds the shuffled-noise distance floor"
    return summary


def run_pipeline(config):
    """Run every stage and write all outputs plus ``manifest.json`` into ``config.out``.

    Returns the manifest dictionary.  The manifest and every output are pure
    functions of the input files and the configuration.
    """
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    notes = []

    prices = _stage("load", load_prices, config.prices)
    meta = _stage("load", load_metadata, config.meta) if config.meta else None
    if meta is not None:
        known = {m.ticker for m in meta}
        missing = [t for t in prices.tickers if t not in known]
        if missing:
            notes.append(f"{len(missing)} tickers have no metadata; sector set to 'unknown'")
    returns = _stage("returns", compute_log_returns, prices)
    corr = _stage("correlation", spearman_correlation, returns)
    dist = _stage("distance", distance_from_correlation, corr)
    files.append(write_matrix(corr, out / "correlation_spearman.csv"))
    files.append(write_matrix(dist, out / "distance_spearman.csv"))

    noise = _stage("noise", estimate_noise_threshold, returns, config.n_shuffles, config.seed,
                   workers=config.workers)
    mst = _stage("mst", build_mst, dist, meta, noise)
    graphs = _stage("asset-graphs", threshold_sweep, dist, meta, config.thresholds)

    for t in config.thresholds:
        if t > ANALYSIS_THRESHOLD:
            notes.append(f"threshold {t} is above {ANALYSIS_THRESHOLD}: beyond about 0.8 "
                         "the asset graph is dominated by noise")
    networks = [_stage(f"centrality:{net.label}", _network_outputs, net, config, out, files,
                       noise.mean)
                for net in [mst, *graphs]]

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        emb = _stage("embedding", pcoa_embedding, dist, 3)
    notes.extend(str(w.message) for w in caught)
    sectors = [node.sector for node in mst.nodes]
    files.append(emb.write_csv(out / "embedding_pcoa3.csv", sectors))

    analysis = [g.label for g in graphs if g.threshold == ANALYSIS_THRESHOLD]
    manifest = {
        "tool": "marketmap",
        "version": __version__,
        "config": config.to_dict(),
        "panel": {
            "assets": len(prices.tickers),
            "price_rows": prices.prices.shape[0],
            "return_rows": returns.n_obs,
            "first_date": prices.dates[0].isoformat(),
            "last_date": prices.dates[-1].isoformat(),
        },
        "noise_threshold": {k: _clean(v) for k, v in noise.to_dict().items()},
        "networks": networks,
        "analysis_graph": analysis[0] if analysis else None,
        "embedding": {
            "eigenvalues": [_clean(v) for v in emb.eigenvalues],
            "negative_mass": _clean(emb.negative_mass),
        },
        "warnings": notes,
        "files": {p.name: _sha256(p) for p in sorted(files, key=lambda p: p.name)},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, ensure_ascii=False) + "\n",
                                       encoding="utf-8")
    return manifest


def default_sectors(n_assets, n_sectors=5, loading=0.6):
    n_sectors = max(1, min(n_sectors, n_assets))
    base, extra = divmod(n_assets, n_sectors)
    return [SectorSpec(f"Sector{k + 1}", base + (1 if k < extra else 0), loading)
            for k in range(n_sectors)]


def cmd_synth(args):
    if args.seed is None:
        raise MarketMapError("synth requires an explicit --seed (outputs must be reproducible)")
    sectors = parse_sectors(args.sectors) if args.sectors else default_sectors(args.assets)
    panel, meta = generate_synthetic_panel(args.assets, args.days, sectors, args.market,
                                           args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    p = write_prices(panel, out / "prices.csv")
    m = write_metadata(meta, out / "meta.csv")
    print(f"wrote {p} ({panel.shape[0]} rows x {panel.shape[1]} assets) and {m}")
    return p, m


_RUN_KEYS = {
    "prices": str, "meta": str, "out": str, "thresholds": parse_thresholds,
    "shuffles": int, "n_shuffles": int, "seed": int, "closeness": str,
    "fit_range": lambda s: tuple(float(x) for x in s.split(",")),
    "asset_bin_width": int, "workers": int,
}


def config_from_args(args):
    values = {}
    if args.config:
        for key, raw in read_config_file(args.config).items():
            if key not in _RUN_KEYS:
                raise MarketMapError(f"unknown config key {key!r}")
            values["n_shuffles" if key == "shuffles" else key] = _RUN_KEYS[key](raw)
    for key in ("prices", "meta", "out", "seed", "closeness", "asset_bin_width", "workers"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if args.thresholds is not None:
        values["thresholds"] = parse_thresholds(args.thresholds)
    if args.shuffles is not None:
        values["n_shuffles"] = args.shuffles
    if args.fit_range is not None:
        values["fit_range"] = _RUN_KEYS["fit_range"](args.fit_range)
    for required in ("prices", "out"):
        if required not in values:
            raise MarketMapError(f"missing --{required} (flag or config file)")
    allowed = {f.name for f in fields(PipelineConfig)}
    return PipelineConfig(**{k: v for k, v in values.items() if k in allowed})


def build_parser():
    parser = argparse.ArgumentParser(prog="marketmap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="full pipeline from a price CSV")
    run.add_argument("--config", help="key = value file; flags override it")
    run.add_argument("--prices")
    run.add_argument("--meta")
    run.add_argument("--thresholds", help="start:stop:step or comma list (default 0.1:0.7:0.1)")
    run.add_argument("--shuffles", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--closeness", choices=["sum", "mean"])
    run.add_argument("--fit-range", help="quantile pair, e.g. 0.1,0.9")
    run.add_argument("--asset-bin-width", type=int)
    run.add_argument("--workers", type=int)
    run.add_argument("--out")

    synth = sub.add_parser("synth", help="write a synthetic factor-model panel")
    synth.add_argument("--assets", type=int, required=True)
    synth.add_argument("--days", type=int, required=True)
    synth.add_argument("--seed", type=int)
    synth.add_argument("--sectors", help="label:size:loading,... (default 5 equal sectors, 0.6)")
    synth.add_argument("--market", type=float, default=0.3)
    synth.add_argument("--out", default=".")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            cmd_synth(args)
        else:
            config = config_from_args(args)
            manifest = run_pipeline(config)
            print(f"wrote {len(manifest['files'])} files and manifest.json to {config.out}")
    except PipelineError as exc:
        print(f"marketmap: error in stage {exc.stage}: {exc.cause}", file=sys.stderr)
        return 2
    except (MarketMapError, OSError, ValueError) as exc:
        print(f"marketmap: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
