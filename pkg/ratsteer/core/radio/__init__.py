"""Channel, SINR and link-capacity computation"""

from .channel import (
    RadioDomainError,
    SPEED_OF_LIGHT,
    db_to_linear,
    linear_to_db,
    dbm_to_watt,
    path_loss_db,
    compute_sinr,
    link_capacity,
    check_link_constraint,
)
from .scheduler import RoundRobinScheduler
from .radio_map import RadioMap
from .topology import build_base_stations, place_ues

__all__ = [
    "RadioDomainError",
    "SPEED_OF_LIGHT",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watt",
    "path_loss_db",
    "compute_sinr",
    "link_capacity",
    "check_link_constraint",
    "RoundRobinScheduler",
    "RadioMap",
    "build_base_stations",
    "place_ues",
]
