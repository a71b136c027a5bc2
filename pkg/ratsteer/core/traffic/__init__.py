"""Traffic mix assignment and packet arrivals"""

from .generator import (
    TrafficConfigError,
    largest_remainder_counts,
    assign_traffic_mix,
    arrival_count,
    arrival_counts,
    arrival_means,
    make_packet,
    generate_arrivals,
)

__all__ = [
    "TrafficConfigError",
    "largest_remainder_counts",
    "assign_traffic_mix",
    "arrival_count",
    "arrival_counts",
    "arrival_means",
    "make_packet",
    "generate_arrivals",
]
