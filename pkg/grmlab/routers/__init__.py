from prometheus_client import Histogram

# Shared by every router that runs an analysis
analysis_seconds = Histogram(
    "grmlab_analysis_seconds",
    "Wall time of HTTP analyses in seconds",
    ["operation"],
)
