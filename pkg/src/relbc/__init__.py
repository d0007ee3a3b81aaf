"""Relativistic bit-commitment simulator: field arithmetic, the CHSH-style
game over GF(Q), the multi-round protocol, and recursive cheating attacks."""

from .adversary import (
    CausalModel,
    CausalView,
    CheatStrategy,
    attack_base,
    attack_general,
    build_attack,
    causality_check,
    compute_eta,
    desymmetrize,
    extend_symmetrized,
    symmetrize_up,
    tower_gamma,
    zeros_strategy,
)
from .analysis import (
    CheatReport,
    McEstimate,
    SweepRow,
    clopper_pearson,
    empirical_upper_constant,
    exact_cheat_probability,
    make_report,
    mc_cheat_probability,
    predicted_attack_probability,
    theory_lower_bound,
    theory_upper_bound,
    trend_sweep,
    write_sweep_csv,
)
from .errors import CapabilityError, FieldMismatchError
from .field import FieldElement, FieldSpec
from .games import (
    BestShift,
    DetStrategy,
    GameDist,
    GameValueResult,
    best_response_search,
    best_shift,
    brute_force_value,
    shift_strategy,
    win_probability,
)
from .protocol import (
    HonestSharedRandomness,
    ProtocolParams,
    Transcript,
    Variant,
    hiding_distribution,
    honest_response,
    run_honest,
    tilde_transform,
    verify_values,
)

__all__ = [name for name in dir() if not name.startswith("_")]
