"""Signed PSD matrix completion on odd-K4 minor free signed graphs.

Graphs are passed as (n, edges) where edges is a list of
(edge_id, u, v, "even" | "odd") tuples; edge weights are
{edge_id: value} dicts. Cosine weights c and normalized angle
weights x = arccos(c) / pi are interchangeable via to_metric /
to_cosines.
"""

from sgc._sgc import (
    check_met,
    classify_rigidity,
    classify_unique,
    feasibility_oracle,
    generate_instance,
    has_minor,
    lambda_value,
    met_oracle,
    parse_instance,
    solve,
    super_stable,
    to_cosines,
    to_metric,
)

__all__ = [
    "check_met",
    "classify_rigidity",
    "classify_unique",
    "feasibility_oracle",
    "generate_instance",
    "has_minor",
    "lambda_value",
    "met_oracle",
    "parse_instance",
    "solve",
    "super_stable",
    "to_cosines",
    "to_metric",
]
