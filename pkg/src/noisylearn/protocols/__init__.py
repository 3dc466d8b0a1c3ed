"""Learning protocols: two-copy Pauli identification, noisy classical shadows and SWAP-test purity testing."""
from .identify import PauliIdentResult, identify_pauli, required_samples_ident, run_dec_ip_trial
from .shadows import (ShadowData, ShadowEstimate, ShadowSnapshot, channel_eigenvalue, haar_unitary_1q,
                      median_of_means, shadow_collect, shadow_estimate, shadow_weight)
from .swap import acceptance_means, purity_test_noisy, swap_test

__all__ = [
    "PauliIdentResult", "ShadowData", "ShadowEstimate", "ShadowSnapshot", "acceptance_means",
    "channel_eigenvalue",     "haar_unitary_1q", "identify_pauli", "median_of_means", "purity_test_noisy", "required_samples_ident",
    "run_dec_ip_trial", "shadow_collect", "shadow_estimate", "shadow_weight", "swap_test",
]
