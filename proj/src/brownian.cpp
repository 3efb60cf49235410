#include "cfq/brownian.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace cfq {

BrownianPath::BrownianPath(double nu, double T, int steps, int dof, std::uint64_t seed)
    : nu_(nu), T_(T), steps_(steps), dof_(dof), seed_(seed) {
    if (!(nu > 0.0)) throw DomainError("BrownianPath: nu must be positive");
    if (!(T > 0.0)) throw DomainError("BrownianPath: T must be positive");
    if (steps < 2) throw DomainError("BrownianPath: need at least 2 steps");
    if (dof < 1) throw DomainError("BrownianPath: dof must be positive");
    data_.assign(static_cast<std::size_t>(steps + 1) * 2 * dof, 0.0);
}

PhasePoint BrownianPath::point(int node) const {
    PhasePoint x;
    x.p.resize(dof_);
    x.q.resize(dof_);
    for (int j = 0; j < dof_; ++j) {
        x.p[j] = p(node, j);
        x.q[j] = q(node, j);
    }
    return x;
}

BrownianPath sample_bridge(double nu, double T, int steps, const PhasePoint& x_start,
                           const PhasePoint& x_end, std::uint64_t seed) {
    if (x_start.dof() != x_end.dof())
        throw DimensionError("sample_bridge: endpoint dof mismatch");
    const int dof = x_start.dof();
    BrownianPath path(nu, T, steps, dof, seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double eps = path.eps();

    // One coordinate at a time: forward conditional construction
    //   x_{l+1} = x_l + (b - x_l) eps / (T - t_l)
    //           + sqrt(nu eps (T - t_l - eps)/(T - t_l)) xi_l .
    // The deviation from the straight line between the endpoints is exactly
    // linear in sqrt(nu) for a fixed draw of the xi's.
    auto fill = [&](auto get, double a, double b) {
        get(0) = a;
        double x = a;
        for (int l = 0; l < steps - 1; ++l) {
            const double remaining = T - l * eps;
            const double mean = x + (b - x) * eps / remaining;
            const double var = nu * eps * (remaining - eps) / remaining;
            x = mean + std::sqrt(var) * gauss(rng);
            get(l + 1) = x;
        }
        get(steps) = b;  // pinned exactly
    };

    for (int j = 0; j < dof; ++j) {
        fill([&](int l) -> double& { return path.p(l, j); }, x_start.p[j], x_end.p[j]);
        fill([&](int l) -> double& { return path.q(l, j); }, x_start.q[j], x_end.q[j]);
    }
    return path;
}

double ito_integral(const BrownianPath& path) {
    double total = 0.0;
    for (int j = 0; j < path.dof(); ++j)
        for (int l = 0; l < path.steps(); ++l)
            total += path.p(l, j) * (path.q(l + 1, j) - path.q(l, j));
    return total;
}

double strat_integral(const BrownianPath& path) {
    double total = 0.0;
    for (int j = 0; j < path.dof(); ++j)
        for (int l = 0; l < path.steps(); ++l)
            total += 0.5 * (path.p(l + 1, j) + path.p(l, j)) * (path.q(l + 1, j) - path.q(l, j));
    return total;
}

double strat_integral_qdp(const BrownianPath& path) {
    double total = 0.0;
    for (int j = 0; j < path.dof(); ++j)
        for (int l = 0; l < path.steps(); ++l)
            total += 0.5 * (path.q(l + 1, j) + path.q(l, j)) * (path.p(l + 1, j) - path.p(l, j));
    return total;
}

double quadratic_variation_q(const BrownianPath& path, int mode) {
    double total = 0.0;
    for (int l = 0; l < path.steps(); ++l) {
        const double dq = path.q(l + 1, mode) - path.q(l, mode);
        total += dq * dq;
    }
    return total;
}

double chain_rule_residual(const BrownianPath& path, double min_radius) {
    if (path.dof() != 1)
        throw DimensionError("chain_rule_residual: action-angle chart is single-mode");
    const int L = path.steps();
    std::vector<double> r(L + 1), s(L + 1);
    double prev_angle = 0.0;
    double offset = 0.0;
    for (int l = 0; l <= L; ++l) {
        const double pp = path.p(l), qq = path.q(l);
        if (pp * pp + qq * qq < min_radius * min_radius)
            throw DomainError("chain_rule_residual: path passes through the chart singularity");
        const ActionAngle aa = to_action_angle(pp, qq);
        r[l] = aa.r;
        // unwrap: keep successive angle differences in (-pi, pi]
        double angle = aa.s + offset;
        if (l > 0) {
            while (angle - prev_angle > kPi) {
                angle -= 2.0 * kPi;
                offset -= 2.0 * kPi;
            }
            while (angle - prev_angle <= -kPi) {
                angle += 2.0 * kPi;
                offset += 2.0 * kPi;
            }
        }
        s[l] = angle;
        prev_angle = angle;
    }
    double strat_pdq = 0.0, strat_rds = 0.0;
    for (int l = 0; l < L; ++l) {
        strat_pdq += 0.5 * (path.p(l + 1) + path.p(l)) * (path.q(l + 1) - path.q(l));
        strat_rds += 0.5 * (r[l + 1] + r[l]) * (s[l + 1] - s[l]);
    }
    // G is pi-periodic in the angle, so unwrapping does not change it.
    const double boundary = generating_term_G(r[L], s[L]) - generating_term_G(r[0], s[0]);
    return std::abs(strat_pdq - (strat_rds + boundary));
}

void write_path_csv(const BrownianPath& path, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw DomainError("write_path_csv: cannot open " + filename);
    out << "t";
    for (int j = 0; j < path.dof(); ++j) out << ",p_" << (j + 1);
    for (int j = 0; j < path.dof(); ++j) out << ",q_" << (j + 1);
    out << "\n";
    char buf[64];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    for (int l = 0; l <= path.steps(); ++l) {
        emit(l * path.eps());
        for (int j = 0; j < path.dof(); ++j) { out << ","; emit(path.p(l, j)); }
        for (int j = 0; j < path.dof(); ++j) { out << ","; emit(path.q(l, j)); }
        out << "\n";
    }
}

}  // namespace cfq
