"""advstream: an arena for turnstile streaming against memory-bounded
adaptive adversaries.

The library pits tracking algorithms (an exact net-rounding tracker, a
sketch-median robust wrapper, an amplified oblivious baseline) against
adversaries that see only their last estimate, a few persistent bits and
fresh randomness.  A referee scores every round exactly and measures the
stream statistics (flip number, density) that make adaptive streams hard.
"""

from .adversaries import (
    AttackerParams,
    EstimateHashAdversary,
    MemorylessAttacker,
    ObliviousReplayer,
    OneBitAttacker,
    TauStreamAdversary,
    ToggleAdversary,
    uniform_stream,
)
from .arena import (
    GameConfig,
    GameTranscript,
    attack_metrics,
    read_config,
    run_game,
    run_trials,
    scaling_sweep,
    summary_json,
    transcript_csv,
    verify_transcript,
    write_config,
    write_transcript,
)
from .core import (
    ApproxSpec,
    ConfigError,
    FrequencyVector,
    ProtocolError,
    Update,
    apply_update,
    density,
    exact_moment,
    flip_number,
    is_correct_estimate,
)
from .net import EstimateNet, build_net, round_to_net
from .oblivious import (
    AmsSketch,
    SketchBank,
    SketchConfig,
    amplification_copies,
    bucket_count_for,
    median_amplify,
)
from .robust import (
    AmplifiedOblivious,
    ExactTracker,
    RobustSketchTracker,
    robust_copies,
    tau_for_bounded_memory,
)

__version__ = "0.1.0"

__all__ = [
    "AmplifiedOblivious",
    "AmsSketch",
    "ApproxSpec",
    "AttackerParams",
    "ConfigError",
    "EstimateHashAdversary",
    "EstimateNet",
    "ExactTracker",
    "FrequencyVector",
    "GameConfig",
    "GameTranscript",
    "MemorylessAttacker",
    "ObliviousReplayer",
    "OneBitAttacker",
    "ProtocolError",
    "RobustSketchTracker",
    "SketchBank",
    "SketchConfig",
    "TauStreamAdversary",
    "ToggleAdversary",
    "Update",
    "amplification_copies",
    "apply_update",
    "attack_metrics",
    "bucket_count_for",
    "build_net",
    "density",
    "exact_moment",
    "flip_number",
    "is_correct_estimate",
    "median_amplify",
    "read_config",
    "robust_copies",
    "round_to_net",
    "run_game",
    "run_trials",
    "scaling_sweep",
    "summary_json",
    "tau_for_bounded_memory",
    "transcript_csv",
    "uniform_stream",
    "verify_transcript",
    "write_config",
    "write_transcript",
]
