"""Filtered correlation networks of asset returns.

Price panel -> log-returns -> Spearman correlation -> distance ``1 - c`` ->
minimum spanning tree and threshold asset graphs -> centralities, k-shells,
distributions and a 3-D principal coordinates map.
"""
__version__ = "0.1.0"

from marketmap.centrality import (  # noqa: E402
    betweenness_centrality,
    ccdf,
    centrality_report,
    closeness_centrality,
    degree_distribution,
    degree_vs_kshell,
    eigenvector_centrality,
    k_shell_decomposition,
    node_degree,
    node_strength,
)
from marketmap.correl import (  # noqa: E402
    CorrelationMatrix,
    DistanceMatrix,
    NoiseThreshold,
    distance_from_correlation,
    estimate_noise_threshold,
    spearman_correlation,
)
from marketmap.embed import EmbeddingCoordinates, pcoa_embedding  # noqa: E402
from marketmap.kernels import BACKEND  # noqa: E402
from marketmap.netgraph import (  # noqa: E402
    AssetNetwork,
    build_asset_graph,
    build_mst,
    export_network,
    read_network_json,
    threshold_sweep,
)
from marketmap.panel import (  # noqa: E402
    AssetMeta,
    PricePanel,
    ReturnPanel,
    SectorSpec,
    compute_log_returns,
    generate_synthetic_panel,
    load_metadata,
    load_prices,
)


def sample_metadata_path():
    """Path of the bundled 190-stock ticker/company/sector table (BM&F-Bovespa, 2010)."""
    from importlib.resources import files

    return files("marketmap") / "data" / "bovespa2010_meta.csv"
