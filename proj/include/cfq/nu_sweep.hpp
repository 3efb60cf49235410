// Convergence study of the lattice path integral: for a ladder of diffusion
// constants nu, evaluate the calibrated composed amplitude with the step size
// and grid resolved automatically from nu, compare against the exact
// truncated-space propagator for the anti-Wick operator of the same symbol,
// and tabulate the relative errors.  The physical statement under test is
// that the regularized amplitude approaches the true matrix element as nu
// grows.  Measured rates: O(1/nu) for nonzero symbols (the h-term couples the
// lowest Landau level of the regulator to its neighbours, giving a damping
// and a phase drift both ~ 2/nu for the oscillator at T=0.5), and O(e^{-nu T})
// when h = 0 (pure mass-gap correction).
#pragma once

#include <vector>

#include "cfq/lattice.hpp"

namespace cfq {

struct SweepPolicy {
    double eps_coeff = 0.05;    // eps = eps_coeff / nu, so sqrt(nu eps) is constant
    double spacing_ratio = 0.5; // grid spacing <= ratio * sqrt(nu eps)
    double bound_pad = 4.0;     // grid half-width = max endpoint coordinate + pad
    int oracle_cutoff = 64;     // Fock cutoff of the exact reference
    LatticeOptions lattice;
};

struct SweepRow {
    double nu = 0.0;
    double eps = 0.0;
    int steps = 0;       // L, with L * eps = T exactly
    int points = 0;      // lattice points per axis
    double spacing = 0.0;
    cxd estimate = 0.0;  // calibrated lattice amplitude
    cxd oracle = 0.0;    // exact truncated-space propagator
    double rel_error = 0.0;
};

struct ConvergenceTable {
    std::vector<SweepRow> rows;

    bool monotone_decreasing() const;  // each row strictly below the previous
    double final_rel_error() const;
};

ConvergenceTable run_nu_sweep(const PolySymbol& h, const std::vector<double>& nus,
                              double T, const PhasePoint& x_end,
                              const PhasePoint& x_start, const SweepPolicy& policy = {},
                              Warnings* warnings = nullptr);

// Optional comment lines (e.g. the config fingerprint) are emitted verbatim
// as "# <line>" before the header row.
void write_sweep_csv(const ConvergenceTable& table, const std::string& filename,
                     const std::vector<std::string>& comments = {});

}  // namespace cfq
