#include "cfq/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace cfq {

namespace {

// Evaluate the orthonormal polynomials p_0..p_n of the measure described by
// the monic recurrence coefficients (alpha, beta, mu0) at x, together with the
// derivative of p_n.  Returns {p_n, p_n', sum_{k<n} p_k^2}.
struct OrthoEval {
    double pn;
    double dpn;
    double christoffel_sum;
};

OrthoEval eval_orthonormal(const std::vector<double>& alpha, const std::vector<double>& beta,
                           double mu0, double x) {
    const int n = static_cast<int>(alpha.size());
    double pm1 = 0.0, dm1 = 0.0;
    double p = 1.0 / std::sqrt(mu0), dp = 0.0;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += p * p;
        const double bk = (k == 0) ? 0.0 : std::sqrt(beta[k]);
        const double bk1 = std::sqrt(beta[k + 1]);
        const double pnext = ((x - alpha[k]) * p - bk * pm1) / bk1;
        const double dnext = ((x - alpha[k]) * dp + p - bk * dm1) / bk1;
        pm1 = p;
        dm1 = dp;
        p = pnext;
        dp = dnext;
    }
    return {p, dp, sum};
}

// Nodes are eigenvalues of the Jacobi matrix of the monic three-term
// recurrence pi_{k+1} = (x - alpha_k) pi_k - beta_k pi_{k-1} (Golub-Welsch).
// Weights from eigenvectors lose all relative accuracy once they fall below
// ~1e-32 (first components reach the eigensolver noise floor), so instead each
// node is Newton-polished on the orthonormal recurrence and the weight is the
// Christoffel function 1/sum_k p_k(x)^2, which is accurate term by term.
// alpha has size n; beta has size n + 1 (beta_n normalizes p_n in the
// orthonormal recurrence; beta_0 is unused).
GaussRule golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta,
                       double mu0) {
    const int n = static_cast<int>(alpha.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = alpha[i];
        if (i + 1 < n) {
            const double b = std::sqrt(beta[i + 1]);
            J(i, i + 1) = b;
            J(i + 1, i) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = es.eigenvalues()(i);
        OrthoEval e{};
        for (int iter = 0; iter < 8; ++iter) {
            e = eval_orthonormal(alpha, beta, mu0, x);
            const double step = e.pn / e.dpn;
            x -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) {
                e = eval_orthonormal(alpha, beta, mu0, x);
                break;
            }
        }
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / e.christoffel_sum;
    }
    return rule;
}

}  // namespace

GaussRule gauss_laguerre(int order) {
    if (order < 1) throw DomainError("gauss_laguerre: order must be >= 1");
    std::vector<double> alpha(order), beta(order + 1);
    for (int k = 0; k <= order; ++k) {
        if (k < order) alpha[k] = 2.0 * k + 1.0;
        beta[k] = static_cast<double>(k) * k;
    }
    return golub_welsch(alpha, beta, 1.0);
}

GaussRule gauss_hermite(int order) {
    if (order < 1) throw DomainError("gauss_hermite: order must be >= 1");
    std::vector<double> alpha(order, 0.0), beta(order + 1);
    for (int k = 0; k <= order; ++k) beta[k] = 0.5 * k;
    return golub_welsch(alpha, beta, std::sqrt(kPi));
}

bool PhaseQuadrature::exact_for_polar(int fock_cutoff, int sym_degree) const {
    if (angular_points <= 0 || radial_order <= 0) return false;
    const int m = fock_cutoff - 1;
    // Radial: after the exact angular average only integer powers of u
    // survive, of degree at most (m + m + sym_degree)/2.
    const int u_degree = (2 * m + sym_degree) / 2;
    if (u_degree > 2 * radial_order - 1) return false;
    // Angular: every harmonic of the integrand has |frequency| <= m + sym_degree;
    // the uniform grid is exact as long as no nonzero frequency aliases to 0.
    return (m + sym_degree) < angular_points;
}

bool PhaseQuadrature::exact_for_cartesian(int fock_cutoff, int sym_degree) const {
    if (radial_order <= 0 || angular_points != 0) return false;
    const int m = fock_cutoff - 1;
    // Worst single-axis degree after p = sqrt2 s, q = sqrt2 t substitution.
    const int axis_degree = 2 * m + sym_degree;
    return axis_degree <= 2 * radial_order - 1;
}

PhaseQuadrature polar_phase_rule(int radial_order, int angular_points) {
    if (radial_order < 1 || angular_points < 1)
        throw DomainError("polar_phase_rule: orders must be >= 1");
    const GaussRule glr = gauss_laguerre(radial_order);
    PhaseQuadrature rule;
    rule.radial_order = radial_order;
    rule.angular_points = angular_points;
    rule.mode.p.reserve(static_cast<std::size_t>(radial_order) * angular_points);
    rule.mode.q.reserve(rule.mode.p.capacity());
    rule.mode.w.reserve(rule.mode.p.capacity());
    for (int i = 0; i < radial_order; ++i) {
        const double u = glr.nodes[i];
        const double r = std::sqrt(2.0 * u);
        const double w = glr.weights[i] * std::exp(u) / angular_points;
        for (int k = 0; k < angular_points; ++k) {
            const double t = 2.0 * kPi * k / angular_points;
            rule.mode.q.push_back(r * std::cos(t));
            rule.mode.p.push_back(r * std::sin(t));
            rule.mode.w.push_back(w);
        }
    }
    return rule;
}

PhaseQuadrature cartesian_phase_rule(int order_per_axis) {
    if (order_per_axis < 1) throw DomainError("cartesian_phase_rule: order must be >= 1");
    const GaussRule ghr = gauss_hermite(order_per_axis);
    PhaseQuadrature rule;
    rule.radial_order = order_per_axis;
    rule.angular_points = 0;
    const double root2 = std::sqrt(2.0);
    for (int i = 0; i < order_per_axis; ++i) {
        const double s = ghr.nodes[i];
        const double ws = ghr.weights[i] * std::exp(s * s);
        for (int j = 0; j < order_per_axis; ++j) {
            const double t = ghr.nodes[j];
            const double wt = ghr.weights[j] * std::exp(t * t);
            rule.mode.p.push_back(root2 * s);
            rule.mode.q.push_back(root2 * t);
            rule.mode.w.push_back(ws * wt / kPi);
        }
    }
    return rule;
}

PhaseQuadrature default_phase_rule(int fock_cutoff, int sym_degree) {
    const int m = fock_cutoff - 1;
    const int radial = (2 * m + sym_degree) / 2 / 2 + 1;  // ceil((u_degree+1)/2)
    const int angular = m + sym_degree + 1;
    PhaseQuadrature rule = polar_phase_rule(std::max(radial, 2), std::max(angular, 4));
    if (!rule.exact_for_polar(fock_cutoff, sym_degree))
        throw DomainError("default_phase_rule: internal sizing error");
    return rule;
}

}  // namespace cfq
