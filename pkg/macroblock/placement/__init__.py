from .stream import RngStream, BASE_STATION_STREAM, INTERFERER_STREAM, BLOCKAGE_STREAM
from .network import (
    NetworkRealization,
    distances_from_uniforms,
    polar_to_points,
    sample_ordered_distances,
    sample_base_stations,
    sample_blockages,
    sample_blockage_fields,
    place_interferers,
    cell_radius,
)
