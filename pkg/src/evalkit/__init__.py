"""Top-1 model-selection metrics and benchmark reports."""

from .metrics import best_model_index, map_score, mrr, ndcg_at_1, score_metrics, top1_auc
from .report import (
    EvaluationReport,
    GraphResult,
    Timing,
    evaluate,
    evaluate_predictions,
    markdown_table,
    render_report_csv,
    report_frame,
    write_report,
    write_timings,
)

__all__ = [
    "best_model_index",
    "map_score",
    "mrr",
    "ndcg_at_1",
    "score_metrics",
    "top1_auc",
    "EvaluationReport",
    "GraphResult",
    "Timing",
    "evaluate",
    "evaluate_predictions",
    "markdown_table",
    "render_report_csv",
    "report_frame",
    "write_report",
    "write_timings",
]
