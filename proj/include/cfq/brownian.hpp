// Pinned Brownian bridges on flat phase space with diffusion constant nu,
// plus the pre-point and midpoint discretizations of the line integral
// int p dq and the change-of-variables residual through the action-angle
// chart.  RNG: mt19937_64 per path, seeded through the splitmix64 ladder, so
// every path is reproducible from (base seed, path index).
#pragma once

#include <cstdint>

#include "cfq/action_angle.hpp"
#include "cfq/common.hpp"

namespace cfq {

class BrownianPath {
  public:
    BrownianPath(double nu, double T, int steps, int dof, std::uint64_t seed);

    double nu() const { return nu_; }
    double T() const { return T_; }
    int steps() const { return steps_; }          // L; nodes are 0..L
    int dof() const { return dof_; }
    double eps() const { return T_ / steps_; }
    std::uint64_t seed() const { return seed_; }

    double p(int node, int mode = 0) const { return data_[slot(node, mode)]; }
    double q(int node, int mode = 0) const { return data_[slot(node, mode) + dof_]; }
    double& p(int node, int mode = 0) { return data_[slot(node, mode)]; }
    double& q(int node, int mode = 0) { return data_[slot(node, mode) + dof_]; }

    PhasePoint point(int node) const;

  private:
    std::size_t slot(int node, int mode) const {
        return static_cast<std::size_t>(node) * 2 * dof_ + mode;
    }
    double nu_, T_;
    int steps_, dof_;
    std::uint64_t seed_;
    std::vector<double> data_;  // per node: p_1..p_N, q_1..q_N (contiguous slice)
};

// Conditional-Gaussian forward construction; endpoints pinned exactly.
BrownianPath sample_bridge(double nu, double T, int steps, const PhasePoint& x_start,
                           const PhasePoint& x_end, std::uint64_t seed);

// Pre-point discretization  sum_l p_l (q_{l+1} - q_l), summed over modes.
double ito_integral(const BrownianPath& path);
// Midpoint discretization  sum_l (p_{l+1}+p_l)/2 (q_{l+1} - q_l).
double strat_integral(const BrownianPath& path);
// Midpoint discretization of  int q dp  (for the discrete Leibniz identity).
double strat_integral_qdp(const BrownianPath& path);

// Sum of squared q-increments of one mode (discrete quadratic variation).
double quadratic_variation_q(const BrownianPath& path, int mode = 0);

// Maps a single-mode path through (r, s) = action-angle(p, q) with the angle
// unwrapped along the path, and returns
//   | strat p dq  -  [ strat r ds + G(end) - G(start) ] |.
// Paths passing within `min_radius` of the origin are rejected (the chart is
// singular there).
double chain_rule_residual(const BrownianPath& path, double min_radius = 1e-6);

void write_path_csv(const BrownianPath& path, const std::string& filename);

}  // namespace cfq
