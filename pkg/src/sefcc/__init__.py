"""Single-error-correcting function-correcting codes for the [7,4,3] Hamming
membership function: construction, validation, census and AWGN simulation."""

from .hamming import (
    Distance3Graph,
    HammingCodebook,
    Word,
    distance3_graph,
    encode_hamming,
    hamming_codebook,
    hamming_distance,
    is_member,
    nearest_codeword,
)
from .fcc import (
    BooleanFunction,
    DistanceSpectrum,
    InvalidAssignmentError,
    ParityAssignment,
    SefccCode,
    construct_max_sum,
    construct_optimal_fer,
    cross_class_min_distance,
    distance_matrix,
    encode,
    extend_to_full,
    has_dmin_2,
    is_valid,
    optimal_fer_assignment,
    parse_assignment,
    spectrum,
)

__version__ = "0.1.0"
