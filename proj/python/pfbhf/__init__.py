"""Quasifree ground-state energy of the translation-invariant Pauli-Fierz
Hamiltonian: momentum-shell grids, three cross-validating solvers, the
perturbative expansion, and a truncated Fock-space oracle."""

from ._core import (  # noqa: F401
    CoherentReport,
    CouplingField,
    DescentStrategy,
    EnergyBreakdown,
    FockContext,
    LagrangeReport,
    LagrangeState,
    MomentumGrid,
    PerturbativeSummary,
    QuasifreeState,
    ResidualSet,
    RunConfig,
    RunReport,
    SolverKind,
    VariationalReport,
    analytic_g_norm2,
    build_fock,
    build_grid,
    c22_closed_form,
    c22_quadrature,
    c22_reduced,
    c40_grid_form,
    c40_quadrature,
    coercivity_check,
    coherent_p2_expansion,
    convexity_check,
    coupling_field,
    csv_header,
    csv_row,
    dressed_momentum,
    effective_tol,
    energy,
    energy_coherent,
    energy_fourth_order,
    energy_squeeze,
    estimate_convexity_radius,
    fock_oracle_energy,
    gamma_from_pair,
    lagrange_iterate,
    minimize_quasifree,
    pair_solve,
    pert_f,
    pert_r,
    pureness_residual,
    randomize_frames,
    report_json,
    run,
    sample_mixed,
    sample_pure,
    select_nodes,
    solve_coherent,
    solver_from_name,
    solver_name,
    state_from_squeeze,
    sweep_csv,
    sylvester_solve,
    validate,
)

__version__ = "0.1.0"
