"""recnet: recommendation-network analysis and social-graph extension.

The package covers the full pipeline for studying how a sparse directed
recommendation network relates to the social graph underneath it: edge-list
ingestion and component analysis, a structural-metric suite, power-law
degree fitting, level-limited BFS crawling of a friend-list provider,
transition-network extraction, and construction of weighted extended
recommendation networks.
"""

from .errors import (
    ConfigError,
    ConsistencyError,
    DomainError,
    EmptyInputError,
    FitError,
    ModeError,
    ParseError,
    ProtocolError,
    RecnetError,
    UnknownNodeError,
)
from .graphs import (
    ComponentDecomposition,
    DirectedGraph,
    IngestReport,
    UndirectedGraph,
    components,
    induced_subgraph,
    ingest_directed,
    ingest_undirected,
    read_seed_list,
    to_undirected,
    write_edge_list,
)
from .metrics import (
    BehaviorClass,
    MetricsReport,
    classify_behavior,
    clustering,
    compute_metrics,
    degree_ecdf,
    knn_by_degree,
    path_metrics,
    reciprocity,
    subnetwork_table,
)
from .powerlaw import PowerLawFit, fit_mle, sample_discrete_powerlaw, select_xmin
from .crawler import (
    CrawlResult,
    FriendListServer,
    GraphProvider,
    RemoteProvider,
    crawl,
    crawl_component_trace,
)
from .extend import (
    SeederDistanceMatrix,
    WeightedGraph,
    build_ern,
    ern_series,
    expand_ern,
    extract_tn,
    seeder_apl,
    weighted_path_metrics,
)
from .synth import (
    DEFAULT_RN_HISTOGRAM,
    Scenario,
    ScenarioSpec,
    gen_ba,
    gen_er,
    gen_rn_forest,
    read_seeder_map,
    scenario_generate,
    write_seeder_map,
)

__version__ = "0.1.0"
