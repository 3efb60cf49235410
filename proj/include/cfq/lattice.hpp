// Deterministic evaluation of the Wiener-regularized phase-space path
// integral for one degree of freedom: a one-step transfer kernel on a uniform
// (p,q) grid, composed L times between pinned endpoints.
//
// One step from cell x to cell y (displacement d = y - x):
//   w(y, x) = cellarea * (1/(2 pi nu eps)) exp(-||d||^2 / (2 nu eps))
//             * exp( i [ (p_y - d_p/2) d_q  -  h((x+y)/2) eps ] )
// i.e. a Gaussian transition density for diffusion constant nu times the
// midpoint-rule phase of int (p dq - h dt).  Composition with a delta pin at
// the start (bilinear weights / cellarea), a bilinear readout at the end and
// the overall  2 pi e^{nu T / 2}  factor yields the "raw" amplitude.
//
// The raw amplitude still carries the finite-nu mass of the pinned Wiener
// measure; dividing by the raw h=0 amplitude of the coincident-endpoint
// configuration (a pure normalization, fixed once per (nu, eps, L, grid))
// gives the calibrated amplitude that converges to <x''|exp(-iHT)|x'> as
// nu grows.
#pragma once

#include "cfq/poly_symbol.hpp"

#include <Eigen/Sparse>

namespace cfq {

struct GridSpec {
    double pmin = -4.0, pmax = 4.0;
    double qmin = -4.0, qmax = 4.0;
    int np = 96, nq = 96;  // lattice points per axis

    double dp() const { return (pmax - pmin) / (np - 1); }
    double dq() const { return (qmax - qmin) / (nq - 1); }
    double cell_area() const { return dp() * dq(); }
    long size() const { return static_cast<long>(np) * nq; }
    bool contains(double p, double q, double margin = 0.0) const {
        return p >= pmin + margin && p <= pmax - margin && q >= qmin + margin &&
               q <= qmax - margin;
    }
};

struct LatticeOptions {
    double band_sigmas = 6.5;      // keep |d| <= band_sigmas * sqrt(nu eps)
    double hard_spacing_ratio = 1.0;   // reject spacing > ratio * sqrt(nu eps)
    double warn_spacing_ratio = 0.5;   // warn above this
    double endpoint_margin_sigmas = 5.0;
    bool pre_point_phase = false;  // pre-point (non-midpoint) rule, for contrast
};

class LatticeKernel {
  public:
    LatticeKernel(const PolySymbol& h, double nu, double eps, const GridSpec& grid,
                  const LatticeOptions& opt = {}, Warnings* warnings = nullptr);

    const GridSpec& grid() const { return grid_; }
    double nu() const { return nu_; }
    double eps() const { return eps_; }
    double endpoint_margin() const { return endpoint_margin_; }
    const Eigen::SparseMatrix<cxd>& matrix() const { return W_; }

    // One transfer step applied to a grid vector.
    Vec step(const Vec& v) const { return W_ * v; }

  private:
    GridSpec grid_;
    double nu_, eps_;
    double endpoint_margin_;  // required distance from endpoints to the edge
    Eigen::SparseMatrix<cxd> W_;
};

// Raw composed amplitude: delta pin at x_start, L kernel steps, bilinear
// readout at x_end, times 2 pi e^{nu T/2} (unless apply_prefactor = false).
cxd compose_raw(const LatticeKernel& kernel, int L, const PhasePoint& x_end,
                const PhasePoint& x_start, bool apply_prefactor = true);

struct LatticeAmplitude {
    cxd raw = 0.0;          // prefactored composed amplitude
    cxd h0_diagonal = 0.0;  // raw h=0 amplitude at coincident endpoints x'=x''=x_start
    cxd calibrated = 0.0;   // raw / h0_diagonal
};

// Builds the h and the h=0 kernels on the same grid and returns both the raw
// and the normalization-calibrated amplitudes.
LatticeAmplitude compose_calibrated(const PolySymbol& h, double nu, double eps, int L,
                                    const GridSpec& grid, const PhasePoint& x_end,
                                    const PhasePoint& x_start,
                                    const LatticeOptions& opt = {},
                                    Warnings* warnings = nullptr);

// Exact continuum value of the h=0 regularized integral at finite nu:
//   2 pi e^{nu T/2} * Integral e^{i int p dq} dmu_W^nu
//     = 1/(1 - e^{-nu T})
//       * exp{ -1/4 (coth(nu T/2) - 1) ||Delta||^2 } * <x''|x'>  (per mode).
// Used as an independent oracle for the lattice at h = 0.
cxd free_regularized_reference(double nu, double T, const PhasePoint& x_end,
                               const PhasePoint& x_start);

}  // namespace cfq
