"""Dense exact diagonalization of spin and boson chains with spectral
statistics, eigenbasis-observable, submatrix and entanglement diagnostics."""

from edspec._core import (  # noqa: F401
    Bipartition,
    BosonBasis,
    SpinBasis,
    __version__,
    bipartition,
    block_as_hamiltonian,
    boson_basis,
    brody_fit,
    build_bose_hubbard,
    build_nn_exchange,
    build_nnn_exchange,
    build_occupation,
    build_xxz,
    diagonal_profile,
    eigenstate_entropy,
    eigh,
    ensemble_spacing_ratios,
    extract_blocks,
    fit_exponential_decay,
    fit_gaussian_mixture,
    gaussianity_ratio,
    log_time_grid,
    mean_entropy_curve,
    nnsd,
    normalized_energies,
    number_variance,
    offdiag_window,
    page_curve,
    partition_spectrum,
    reference_curve,
    sff,
    sff_single_realization,
    spacing_ratios,
    spin_basis,
    to_eigenbasis,
    unfold,
    variance_profile,
    variance_ratio,
)
