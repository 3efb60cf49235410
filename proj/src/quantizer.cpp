#include "cfq/quantizer.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "cfq/action_angle.hpp"
#include "cfq/state_vector.hpp"

namespace cfq {

namespace {

// Expansion of the single-mode monomial p^a q^b in the variables
// (z, conj z), z = (q+ip)/sqrt2, i.e. p = -i(z - conj z)/sqrt2 and
// q = (z + conj z)/sqrt2.  Key = (m, n) for conj(z)^m z^n.
using ZbarZ = std::map<std::pair<int, int>, cxd>;

ZbarZ mode_zbar_z_expansion(int a, int b) {
    std::vector<double> binom_a(a + 1), binom_b(b + 1);
    binom_a[0] = 1.0;
    for (int k = 1; k <= a; ++k) binom_a[k] = binom_a[k - 1] * (a - k + 1) / k;
    binom_b[0] = 1.0;
    for (int k = 1; k <= b; ++k) binom_b[k] = binom_b[k - 1] * (b - k + 1) / k;

    cxd front(1.0, 0.0);
    const cxd minus_i_over_root2(0.0, -1.0 / std::sqrt(2.0));
    for (int k = 0; k < a; ++k) front *= minus_i_over_root2;
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < b; ++k) front *= inv_root2;

    ZbarZ out;
    for (int alpha = 0; alpha <= a; ++alpha) {
        const double sign = ((a - alpha) % 2 == 0) ? 1.0 : -1.0;
        for (int beta = 0; beta <= b; ++beta) {
            const int m = (a - alpha) + (b - beta);
            const int n = alpha + beta;
            out[{m, n}] += front * sign * binom_a[alpha] * binom_b[beta];
        }
    }
    return out;
}

// Matrix of the antinormal-ordered monomial a^n (adag)^m on the occupation
// window 0..D-1, with exact matrix elements of the untruncated operator:
//   a^n (adag)^m |s> = [prod_{i=1..m} sqrt(s+i)] [prod_{i=0..n-1} sqrt(s+m-i)]
//                      |s+m-n>   (zero when s+m < n).
// Intermediate occupations above the window are fine: these are elements of
// the full operator projected onto the window, free of clipping artifacts.
Mat antinormal_monomial_matrix(int cutoff, int m, int n) {
    Mat M = Mat::Zero(cutoff, cutoff);
    for (int s = 0; s < cutoff; ++s) {
        const int r = s + m - n;
        if (r < 0 || r >= cutoff) continue;
        double amp = 1.0;
        for (int i = 1; i <= m; ++i) amp *= std::sqrt(static_cast<double>(s + i));
        for (int i = 0; i < n; ++i) amp *= std::sqrt(static_cast<double>(s + m - i));
        M(r, s) = amp;
    }
    return M;
}

Mat mode_matrix_combinatorial(int cutoff, int a, int b) {
    const ZbarZ expansion = mode_zbar_z_expansion(a, b);
    Mat M = Mat::Zero(cutoff, cutoff);
    for (const auto& [mn, coeff] : expansion)
        M += coeff * antinormal_monomial_matrix(cutoff, mn.first, mn.second);
    return M;
}

Mat kron_fold(const std::vector<Mat>& factors) {
    Mat out = factors.front();
    for (std::size_t j = 1; j < factors.size(); ++j) out = kron(out, factors[j]);
    return out;
}

// Amplitude matrix of closed-form single-mode coherent states at the rule's
// nodes: Amp(i, nocc) = <nocc | p_i, q_i>.
Mat node_amplitudes(int cutoff, const ModeRule& rule) {
    const auto nodes = static_cast<Eigen::Index>(rule.size());
    Mat Amp(nodes, cutoff);
    for (Eigen::Index i = 0; i < nodes; ++i) {
        const double p = rule.p[i], q = rule.q[i];
        const cxd z(q / std::sqrt(2.0), p / std::sqrt(2.0));
        const double u = 0.5 * (p * p + q * q);
        cxd amp = std::exp(cxd(0.0, -0.5 * p * q)) * std::exp(-0.5 * u);
        Amp(i, 0) = amp;
        for (int nocc = 1; nocc < cutoff; ++nocc) {
            amp *= z / std::sqrt(static_cast<double>(nocc));
            Amp(i, nocc) = amp;
        }
    }
    return Amp;
}

// sum_i w_i p_i^a q_i^b |x_i><x_i| over the single-mode rule.
Mat mode_matrix_quadrature(const Mat& Amp, const ModeRule& rule, int a, int b) {
    const auto nodes = static_cast<Eigen::Index>(rule.size());
    Vec v(nodes);
    for (Eigen::Index i = 0; i < nodes; ++i) {
        double w = rule.w[i];
        for (int k = 0; k < a; ++k) w *= rule.p[i];
        for (int k = 0; k < b; ++k) w *= rule.q[i];
        v(i) = w;
    }
    // entry (r, s) = sum_i v_i Amp(i, r) conj(Amp(i, s))
    return Amp.transpose() * v.asDiagonal() * Amp.conjugate();
}

void split_key(const PolySymbol::Key& key, int dof, std::vector<int>& pexp,
               std::vector<int>& qexp) {
    pexp.assign(key.begin(), key.begin() + dof);
    qexp.assign(key.begin() + dof, key.end());
}

}  // namespace

FockOperator anti_wick(const FockSpace& space, const PolySymbol& h) {
    if (h.dof() != space.dof())
        throw DimensionError("anti_wick: symbol dof does not match space");
    const int D = space.cutoff();
    Mat total = Mat::Zero(space.dim(), space.dim());
    std::vector<int> pexp, qexp;
    for (const auto& [key, coeff] : h.terms()) {
        split_key(key, space.dof(), pexp, qexp);
        std::vector<Mat> factors(space.dof());
        for (int j = 0; j < space.dof(); ++j)
            factors[j] = mode_matrix_combinatorial(D, pexp[j], qexp[j]);
        total += coeff * kron_fold(factors);
    }
    return FockOperator(space, std::move(total));
}

FockOperator anti_wick_quadrature(const FockSpace& space, const PolySymbol& h,
                                  const PhaseQuadrature& rule) {
    if (h.dof() != space.dof())
        throw DimensionError("anti_wick_quadrature: symbol dof does not match space");
    const int D = space.cutoff();
    const Mat Amp = node_amplitudes(D, rule.mode);
    Mat total = Mat::Zero(space.dim(), space.dim());
    std::vector<int> pexp, qexp;
    for (const auto& [key, coeff] : h.terms()) {
        split_key(key, space.dof(), pexp, qexp);
        std::vector<Mat> factors(space.dof());
        for (int j = 0; j < space.dof(); ++j)
            factors[j] = mode_matrix_quadrature(Amp, rule.mode, pexp[j], qexp[j]);
        total += coeff * kron_fold(factors);
    }
    return FockOperator(space, std::move(total));
}

FockOperator anti_wick_checked(const FockSpace& space, const PolySymbol& h,
                               double agreement_tol) {
    const PhaseQuadrature rule = default_phase_rule(space.cutoff(), h.degree());
    const FockOperator combinatorial = anti_wick(space, h);
    const FockOperator quadrature = anti_wick_quadrature(space, h, rule);
    const double dev = low_block_max_abs(combinatorial - quadrature);
    if (dev > agreement_tol)
        throw DomainError("anti_wick backends disagree on the low block: deviation " +
                          std::to_string(dev));
    return combinatorial;
}

cxd lower_symbol(const FockOperator& A, const PhasePoint& x, const FockTolerances& tol,
                 Warnings* warnings) {
    const StateVector cs = coherent_state(A.space(), x, tol, warnings);
    return cs.vector().dot(A.matrix() * cs.vector());
}

ResolutionReport resolution_check(const FockSpace& space, const PhaseQuadrature& rule) {
    const int D = space.cutoff();
    const Mat Amp = node_amplitudes(D, rule.mode);
    const Mat mode_res = mode_matrix_quadrature(Amp, rule.mode, 0, 0);
    std::vector<Mat> factors(space.dof(), mode_res);
    const Mat full = kron_fold(factors);
    const Mat defect = full - Mat::Identity(space.dim(), space.dim());
    ResolutionReport report;
    report.low_block_deviation = low_block_max_abs(space, defect);
    report.full_deviation = defect.cwiseAbs().maxCoeff();
    return report;
}

StateVector transformed_state(const FockSpace& space, double r, double s,
                              const FockTolerances& tol, Warnings* warnings) {
    if (space.dof() != 1)
        throw DimensionError("transformed_state: action-angle labels are single-mode");
    if (!(r > 0.0)) throw DomainError("transformed_state: action r must be positive");
    double p = 0.0, q = 0.0;
    from_action_angle(r, s, p, q);
    StateVector base = coherent_state(space, PhasePoint::single(p, q), tol, warnings);
    const cxd phase = std::exp(cxd(0.0, -generating_term_G(r, s)));
    return StateVector(space, phase * base.vector());
}

FockOperator anti_wick_action_angle(const FockSpace& space,
                                    const std::function<double(double, double)>& hbar,
                                    int radial_order, int angular_points) {
    if (space.dof() != 1)
        throw DimensionError("anti_wick_action_angle: single-mode construction");
    if (radial_order < 1 || angular_points < 1)
        throw DomainError("anti_wick_action_angle: orders must be >= 1");
    const int D = space.cutoff();
    const GaussRule glr = gauss_laguerre(radial_order);
    Mat total = Mat::Zero(D, D);
    for (int i = 0; i < radial_order; ++i) {
        const double r = glr.nodes[i];
        const double w = glr.weights[i] * std::exp(r) / angular_points;
        for (int k = 0; k < angular_points; ++k) {
            const double s = 2.0 * kPi * k / angular_points;
            double p = 0.0, q = 0.0;
            from_action_angle(r, s, p, q);
            // closed-form coherent amplitudes with the action-angle phase
            const cxd z(q / std::sqrt(2.0), p / std::sqrt(2.0));
            Vec state(D);
            cxd amp = std::exp(cxd(0.0, -generating_term_G(r, s))) *
                      std::exp(cxd(0.0, -0.5 * p * q)) * std::exp(-0.5 * r);
            state(0) = amp;
            for (int nocc = 1; nocc < D; ++nocc) {
                amp *= z / std::sqrt(static_cast<double>(nocc));
                state(nocc) = amp;
            }
            total += (w * hbar(r, s)) * (state * state.adjoint());
        }
    }
    return FockOperator(space, std::move(total));
}

}  // namespace cfq
