#include "cfq/classical_flow.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace cfq {

namespace {

// Phase-space velocity at point x for the Hamiltonian drift dsymbol plus the
// multiplier-weighted constraint drift.  Canonical equations:
//   dq^j/dt = + dH/dp_j,  dp_j/dt = - dH/dq^j.
struct Velocity {
    std::vector<double> dp;
    std::vector<double> dq;
};

Velocity total_velocity(const PolySymbol& h, const ConstraintSet& set,
                        const std::vector<double>& lambda_now, const PhasePoint& x) {
    const std::size_t n = x.dof();
    Velocity v;
    v.dp.assign(n, 0.0);
    v.dq.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double dq = h.d_dp(j).evaluate(x);
        double dp = -h.d_dq(j).evaluate(x);
        for (std::size_t a = 0; a < set.count(); ++a) {
            dq += lambda_now[a] * set.phis[a].d_dp(j).evaluate(x);
            dp -= lambda_now[a] * set.phis[a].d_dq(j).evaluate(x);
        }
        v.dp[j] = dp;
        v.dq[j] = dq;
    }
    return v;
}

PhasePoint advance(const PhasePoint& x, const Velocity& v, double scale) {
    PhasePoint y = x;
    for (std::size_t j = 0; j < x.dof(); ++j) {
        y.p[j] += scale * v.dp[j];
        y.q[j] += scale * v.dq[j];
    }
    return y;
}

double inf_norm(const PhasePoint& x) {
    double m = 0.0;
    for (double v : x.p) m = std::max(m, std::abs(v));
    for (double v : x.q) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

Trajectory constrained_flow(const PolySymbol& h, const ConstraintSet& set,
                            const PhasePoint& x0,
                            const std::vector<MultiplierSchedule>& lambdas, double T,
                            double dt, const FlowOptions& opt) {
    if (x0.dof() != static_cast<std::size_t>(set.dof))
        throw DimensionError("constrained_flow: point dof does not match constraint set");
    if (lambdas.size() != set.count())
        throw DimensionError("constrained_flow: one multiplier schedule per constraint required");
    if (!(dt > 0.0) || !(T >= 0.0))
        throw DomainError("constrained_flow: need dt > 0 and T >= 0");

    const int nsteps = std::max(1, static_cast<int>(std::llround(T / dt)));
    const double eps = T / nsteps;

    auto lambda_at = [&](double t) {
        std::vector<double> lam(set.count());
        for (std::size_t a = 0; a < set.count(); ++a) lam[a] = lambdas[a](t);
        return lam;
    };

    Trajectory traj;
    auto record = [&](double t, const PhasePoint& x) {
        traj.times.push_back(t);
        traj.points.push_back(x);
        std::vector<double> phiv(set.count()), lamv = lambda_at(t);
        for (std::size_t a = 0; a < set.count(); ++a) phiv[a] = set.phis[a].evaluate(x);
        traj.constraint_values.push_back(std::move(phiv));
        traj.multiplier_values.push_back(std::move(lamv));
    };

    PhasePoint x = x0;
    record(0.0, x);
    for (int l = 0; l < nsteps; ++l) {
        const double t = l * eps;
        const auto lam0 = lambda_at(t);
        const auto lamh = lambda_at(t + 0.5 * eps);
        const auto lam1 = lambda_at(t + eps);
        const Velocity k1 = total_velocity(h, set, lam0, x);
        const Velocity k2 = total_velocity(h, set, lamh, advance(x, k1, 0.5 * eps));
        const Velocity k3 = total_velocity(h, set, lamh, advance(x, k2, 0.5 * eps));
        const Velocity k4 = total_velocity(h, set, lam1, advance(x, k3, eps));
        for (std::size_t j = 0; j < x.dof(); ++j) {
            x.p[j] += eps / 6.0 * (k1.dp[j] + 2.0 * k2.dp[j] + 2.0 * k3.dp[j] + k4.dp[j]);
            x.q[j] += eps / 6.0 * (k1.dq[j] + 2.0 * k2.dq[j] + 2.0 * k3.dq[j] + k4.dq[j]);
        }
        if (inf_norm(x) > opt.blow_up_norm)
            throw BlowUpError("constrained_flow: trajectory norm exceeded " +
                              std::to_string(opt.blow_up_norm));
        const bool last = (l == nsteps - 1);
        if (last || ((l + 1) % std::max(1, opt.record_stride) == 0)) record((l + 1) * eps, x);
    }
    return traj;
}

PhasePoint gauge_flow(const ConstraintSet& set, const std::vector<double>& Omega,
                      const PhasePoint& x, int steps) {
    if (x.dof() != static_cast<std::size_t>(set.dof))
        throw DimensionError("gauge_flow: point dof does not match constraint set");
    if (Omega.size() != set.count())
        throw DimensionError("gauge_flow: one angle per constraint required");
    if (steps < 1) throw DomainError("gauge_flow: steps must be positive");
    // The shift-plus-rotation (affine) form of the flow map holds only for
    // constraints linear in the momenta; anything else is rejected.
    for (const PolySymbol& phi : set.phis) {
        for (const auto& [key, coeff] : phi.terms()) {
            int pdeg = 0;
            for (int j = 0; j < set.dof; ++j) pdeg += key[static_cast<std::size_t>(j)];
            if (pdeg > 1)
                throw DomainError("gauge_flow: constraint is not linear in the momenta");
        }
    }

    // dx/ds = Omega^a {phi_a, x}: for coordinates this gives
    //   dq^j/ds = -Omega^a dphi_a/dp_j ... with the bracket convention
    //   {f,g} = sum_j (df/dq^j dg/dp_j - df/dp_j dg/dq^j), so
    //   {phi, q^j} = -dphi/dp_j and {phi, p_j} = +dphi/dq^j.
    auto velocity = [&](const PhasePoint& y) {
        Velocity v;
        v.dp.assign(y.dof(), 0.0);
        v.dq.assign(y.dof(), 0.0);
        for (std::size_t j = 0; j < y.dof(); ++j) {
            for (std::size_t a = 0; a < set.count(); ++a) {
                v.dp[j] += Omega[a] * set.phis[a].d_dq(j).evaluate(y);
                v.dq[j] -= Omega[a] * set.phis[a].d_dp(j).evaluate(y);
            }
        }
        return v;
    };

    const double ds = 1.0 / steps;
    PhasePoint y = x;
    for (int l = 0; l < steps; ++l) {
        const Velocity k1 = velocity(y);
        const Velocity k2 = velocity(advance(y, k1, 0.5 * ds));
        const Velocity k3 = velocity(advance(y, k2, 0.5 * ds));
        const Velocity k4 = velocity(advance(y, k3, ds));
        for (std::size_t j = 0; j < y.dof(); ++j) {
            y.p[j] += ds / 6.0 * (k1.dp[j] + 2.0 * k2.dp[j] + 2.0 * k3.dp[j] + k4.dp[j]);
            y.q[j] += ds / 6.0 * (k1.dq[j] + 2.0 * k2.dq[j] + 2.0 * k3.dq[j] + k4.dq[j]);
        }
    }
    return y;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw DomainError("write_trajectory_csv: cannot open " + path);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    const std::size_t n = traj.points.empty() ? 0 : traj.points.front().dof();
    const std::size_t k = traj.constraint_values.empty() ? 0 : traj.constraint_values.front().size();
    out << "t";
    for (std::size_t j = 0; j < n; ++j) out << ",p_" << (j + 1);
    for (std::size_t j = 0; j < n; ++j) out << ",q_" << (j + 1);
    for (std::size_t a = 0; a < k; ++a) out << ",phi_" << (a + 1);
    for (std::size_t a = 0; a < k; ++a) out << ",lambda_" << (a + 1);
    out << "\n";
    char buf[64];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        emit(traj.times[i]);
        for (std::size_t j = 0; j < n; ++j) { out << ","; emit(traj.points[i].p[j]); }
        for (std::size_t j = 0; j < n; ++j) { out << ","; emit(traj.points[i].q[j]); }
        for (std::size_t a = 0; a < k; ++a) { out << ","; emit(traj.constraint_values[i][a]); }
        for (std::size_t a = 0; a < k; ++a) { out << ","; emit(traj.multiplier_values[i][a]); }
        out << "\n";
    }
}

}  // namespace cfq
