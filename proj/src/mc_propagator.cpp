#include "cfq/mc_propagator.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "cfq/brownian.hpp"

namespace cfq {

double discrete_h0_normalization(double nu, double T, int L) {
    if (!(nu > 0.0) || !(T > 0.0))
        throw DomainError("discrete_h0_normalization: nu, T must be positive");
    if (L < 2) throw DomainError("discrete_h0_normalization: need at least two time steps");

    const double mass = std::exp(0.5 * nu * T) / (nu * T);
    const double eps = T / L;
    const int n = L - 1;

    Eigen::MatrixXd C(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Constant(n, n, -1.0 / L);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            C(i, j) = nu * eps *
                      (std::min(i, j) + 1 - double(i + 1) * double(j + 1) / L);
        B(i, i) += 0.5;
        if (i + 1 < n) {
            B(i, i + 1) += 0.25;
            B(i + 1, i) += 0.25;
        }
    }
    const Eigen::MatrixXd M =
        Eigen::MatrixXd::Identity(n, n) + nu * eps * C * B;
    return mass / std::sqrt(M.partialPivLu().determinant());
}

McEstimate mc_estimate(const PolySymbol& h, double nu, double T, int L,
                       const PhasePoint& x_end, const PhasePoint& x_start,
                       long n_paths, std::uint64_t seed, bool calibrated,
                       Warnings* warnings) {
    const int dof = h.dof();
    if (x_end.dof() != dof || x_start.dof() != dof)
        throw DimensionError("mc_estimate: endpoint/symbol mode count mismatch");
    if (!(nu > 0.0) || !(T > 0.0)) throw DomainError("mc_estimate: nu, T must be positive");
    if (L < 2) throw DomainError("mc_estimate: need at least two time steps");
    if (n_paths < 2) throw DomainError("mc_estimate: need at least two paths");

    const double eps = T / L;
    const bool h_zero = h.is_zero();
    PhasePoint mid(std::vector<double>(dof, 0.0), std::vector<double>(dof, 0.0));

    std::vector<cxd> samples;
    samples.reserve(static_cast<std::size_t>(n_paths));
    cxd acc = 0.0;
    for (long i = 0; i < n_paths; ++i) {
        const std::uint64_t path_seed = splitmix64(seed ^ static_cast<std::uint64_t>(i));
        const BrownianPath path = sample_bridge(nu, T, L, x_start, x_end, path_seed);
        double phi = strat_integral(path);
        if (!h_zero) {
            double action = 0.0;
            for (int l = 0; l < L; ++l) {
                for (int j = 0; j < dof; ++j) {
                    mid.p[j] = 0.5 * (path.p(l, j) + path.p(l + 1, j));
                    mid.q[j] = 0.5 * (path.q(l, j) + path.q(l + 1, j));
                }
                action += h.evaluate(mid);
            }
            phi -= action * eps;
        }
        const cxd s = std::polar(1.0, phi);
        samples.push_back(s);
        acc += s;
    }

    const double n = static_cast<double>(n_paths);
    const cxd phase_mean = acc / n;
    double var = 0.0;
    for (const cxd& s : samples) var += std::norm(s - phase_mean);
    var /= (n - 1.0);

    double delta2 = 0.0;
    for (int j = 0; j < dof; ++j) {
        const double dp = x_end.p[j] - x_start.p[j];
        const double dq = x_end.q[j] - x_start.q[j];
        delta2 += dp * dp + dq * dq;
    }
    const double nt = nu * T;
    double factor = std::pow(std::exp(0.5 * nt) / nt, dof) * std::exp(-delta2 / (2.0 * nt));
    if (calibrated) factor /= std::pow(discrete_h0_normalization(nu, T, L), dof);

    McEstimate est;
    est.mean = factor * phase_mean;
    est.std_error = factor * std::sqrt(var / n);
    est.n_paths = n_paths;
    est.unreliable = !(est.std_error <= 0.5 * std::abs(est.mean));
    if (est.unreliable)
        warn(warnings,
             "mc_estimate: standard error exceeds half the estimated modulus; "
             "the sign-problem average is unresolved at this sample size");
    return est;
}

}  // namespace cfq
