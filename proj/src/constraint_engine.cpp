#include "cfq/constraint_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "cfq/fock_operator.hpp"

namespace cfq {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double low_block_max_abs_sparse(const FockSpace& space, const SpMat& A) {
    std::vector<char> low(static_cast<std::size_t>(space.dim()), 0);
    for (long i : space.low_block_indices()) low[static_cast<std::size_t>(i)] = 1;
    double m = 0.0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            if (low[static_cast<std::size_t>(it.row())] &&
                low[static_cast<std::size_t>(it.col())])
                m = std::max(m, std::abs(it.value()));
    return m;
}

double sparse_hermiticity_defect(const SpMat& A) {
    SpMat diff = A - SpMat(A.adjoint());
    double m = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SpMat::InnerIterator it(diff, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constraint operators

SpMat quantize_linear_symbol(const FockSpace& space, const PolySymbol& phi) {
    if (phi.dof() != space.dof())
        throw DimensionError("quantize_linear_symbol: symbol/space mode count mismatch");
    const int dof = space.dof();
    const int D = space.cutoff();

    const Mat a = ladder_matrix(D);
    const Mat Q1 = (a + a.adjoint()) / kSqrt2;
    const Mat P1 = (a - a.adjoint()) / cxd(0.0, kSqrt2);

    int max_qexp = 0;
    for (const auto& [key, coeff] : phi.terms()) {
        (void)coeff;
        for (int j = 0; j < dof; ++j) max_qexp = std::max(max_qexp, key[dof + j]);
    }
    std::vector<Mat> qpow(static_cast<std::size_t>(max_qexp) + 1,
                          Mat::Identity(D, D));
    for (int e = 1; e <= max_qexp; ++e) qpow[e] = qpow[e - 1] * Q1;

    SpMat op(space.dim(), space.dim());
    for (const auto& [key, coeff] : phi.terms()) {
        int pdeg = 0;
        for (int j = 0; j < dof; ++j) {
            if (key[j] < 0 || key[dof + j] < 0)
                throw DomainError("quantize_linear_symbol: negative exponent");
            pdeg += key[j];
        }
        if (pdeg > 1)
            throw DegreeOverflowError(
                "quantize_linear_symbol: momentum degree above one is outside the "
                "linear quantization rule");
        SpMat term;
        for (int j = 0; j < dof; ++j) {
            Mat factor = qpow[static_cast<std::size_t>(key[dof + j])];
            if (key[j] == 1) factor = 0.5 * (factor * P1 + P1 * factor);
            const SpMat sp = to_sparse(factor);
            if (j == 0)
                term = sp;
            else
                term = kroneckerProduct(term, sp).eval();
        }
        op += coeff * term;
    }
    op.makeCompressed();
    return op;
}

QuantumConstraintSet quantize_constraints(const FockSpace& space, const ConstraintSet& set,
                                          double closure_tol) {
    if (set.count() == 0) throw DomainError("quantize_constraints: empty constraint set");
    QuantumConstraintSet out;
    out.space = space;
    out.classical = set;
    for (const PolySymbol& phi : set.phis)
        out.ops.push_back(quantize_linear_symbol(space, phi));
    for (const SpMat& op : out.ops)
        out.hermiticity_defect =
            std::max(out.hermiticity_defect, sparse_hermiticity_defect(op));

    out.classical_report = classify_constraints(set, PolySymbol(set.dof));
    if (!out.classical_report.first_class() || out.classical_report.ambiguous_expansion) {
        out.flagged = true;
        return out;
    }

    const auto& s = out.classical_report.structure;
    const cxd i_unit(0.0, 1.0);
    for (int a = 0; a < set.count(); ++a) {
        for (int b = a + 1; b < set.count(); ++b) {
            SpMat residual = SpMat(out.ops[a] * out.ops[b]) -
                             SpMat(out.ops[b] * out.ops[a]);
            for (int c = 0; c < set.count(); ++c)
                if (s[a][b][c] != 0.0)
                    residual -= SpMat((i_unit * s[a][b][c]) * out.ops[c]);
            out.closure_defect =
                std::max(out.closure_defect, low_block_max_abs_sparse(space, residual));
        }
    }
    out.flagged = out.closure_defect > closure_tol;
    return out;
}

SpMat weighted_generator(const QuantumConstraintSet& qset, const std::vector<double>& omega) {
    if (static_cast<int>(omega.size()) != qset.classical.count())
        throw DimensionError("weighted_generator: weight count mismatch");
    SpMat G(qset.space.dim(), qset.space.dim());
    for (std::size_t a = 0; a < omega.size(); ++a) G += omega[a] * qset.ops[a];
    G.makeCompressed();
    return G;
}

double quantum_mixing_defect(const QuantumConstraintSet& qset, const Mat& H,
                             const std::vector<std::vector<double>>& mixing) {
    if (H.rows() != qset.space.dim())
        throw DimensionError("quantum_mixing_defect: generator dimension mismatch");
    const cxd i_unit(0.0, 1.0);
    double defect = 0.0;
    for (int a = 0; a < qset.classical.count(); ++a) {
        Mat R = Mat(qset.ops[a]) * H - H * Mat(qset.ops[a]);
        if (!mixing.empty()) {
            if (static_cast<int>(mixing.size()) != qset.classical.count())
                throw DimensionError("quantum_mixing_defect: mixing matrix shape");
            for (int b = 0; b < qset.classical.count(); ++b)
                if (mixing[a][b] != 0.0) R -= (i_unit * mixing[a][b]) * Mat(qset.ops[b]);
        }
        defect = std::max(defect, low_block_max_abs(qset.space, R));
    }
    return defect;
}

// ---------------------------------------------------------------------------
// Group averaging

GroupQuadrature u1_quadrature(int points) {
    if (points < 1) throw DomainError("u1_quadrature: need at least one node");
    GroupQuadrature q;
    q.nodes.resize(static_cast<std::size_t>(points));
    q.weights.assign(static_cast<std::size_t>(points), 1.0 / points);
    for (int k = 0; k < points; ++k) q.nodes[static_cast<std::size_t>(k)] = 2.0 * kPi * k / points;
    return q;
}

ProjectorResult build_projector(const FockOperator& Phi, const GroupQuadrature& quad) {
    if (quad.nodes.empty() || quad.nodes.size() != quad.weights.size())
        throw DimensionError("build_projector: malformed group quadrature");
    double wsum = 0.0;
    for (double w : quad.weights) {
        if (!(w > 0.0)) throw DomainError("build_projector: weights must be positive");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw DomainError("build_projector: weights must sum to one");
    if (!Phi.is_hermitian(1e-10))
        throw HermiticityError("build_projector: generator is not Hermitian");

    const FockSpace& space = Phi.space();
    Eigen::SelfAdjointEigenSolver<Mat> es(Phi.matrix());
    const RVec& mu = es.eigenvalues();
    const Mat& V = es.eigenvectors();

    Vec g = Vec::Zero(mu.size());
    for (std::size_t k = 0; k < quad.nodes.size(); ++k)
        for (long j = 0; j < mu.size(); ++j)
            g(j) += quad.weights[k] * std::polar(1.0, quad.nodes[k] * mu(j));

    ProjectorResult out;
    out.E = V * g.asDiagonal() * V.adjoint();
    out.group_points = static_cast<int>(quad.nodes.size());

    long lo = 0, hi = 0;
    bool any_integer = false;
    for (long j = 0; j < mu.size(); ++j) {
        const double r = std::round(mu(j));
        const double dist = std::abs(mu(j) - r);
        out.max_integer_distance = std::max(out.max_integer_distance, dist);
        if (dist <= 1e-6) {
            const long ri = static_cast<long>(r);
            if (!any_integer) {
                lo = hi = ri;
                any_integer = true;
            } else {
                lo = std::min(lo, ri);
                hi = std::max(hi, ri);
            }
        }
    }
    out.required_points = any_integer ? static_cast<int>(hi - lo + 1) : 1;
    out.sufficient = out.group_points >= out.required_points;

    out.idempotency_defect = low_block_max_abs(space, Mat(out.E * out.E - out.E));
    out.hermiticity_defect = low_block_max_abs(space, Mat(out.E - out.E.adjoint()));
    return out;
}

Mat zero_charge_projector(const FockOperator& Phi, double window) {
    if (!Phi.is_hermitian(1e-10))
        throw HermiticityError("zero_charge_projector: generator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(Phi.matrix());
    const RVec& mu = es.eigenvalues();
    std::vector<long> keep;
    for (long j = 0; j < mu.size(); ++j)
        if (std::abs(mu(j)) < window) keep.push_back(j);
    Mat Vsel(mu.size(), static_cast<long>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        Vsel.col(static_cast<long>(c)) = es.eigenvectors().col(keep[c]);
    return Vsel * Vsel.adjoint();
}

double shift_absorption_defect(const FockOperator& Phi, const Mat& E,
                               const std::vector<double>& taus) {
    double defect = 0.0;
    for (double tau : taus) {
        const Mat U = exp_i_hermitian(Phi.matrix(), tau);
        defect = std::max(defect, low_block_max_abs(Phi.space(), Mat(U * E - E)));
    }
    return defect;
}

// ---------------------------------------------------------------------------
// Projected propagation

ProjectedPropagatorResult projected_propagator(const FockOperator& H, const Mat& E,
                                               double T, const PhasePoint& x_end,
                                               const PhasePoint& x_start,
                                               double commutator_tol,
                                               const FockTolerances& tol,
                                               Warnings* warnings) {
    const FockSpace& space = H.space();
    if (E.rows() != space.dim() || E.cols() != space.dim())
        throw DimensionError("projected_propagator: projector dimension mismatch");

    ProjectedPropagatorResult out;
    out.commutator_defect =
        low_block_max_abs(space, Mat(H.matrix() * E - E * H.matrix()));
    if (out.commutator_defect > commutator_tol)
        throw DomainError(
            "projected_propagator: generator does not commute with the projector "
            "(first-class compatibility violated); low-block defect " +
            std::to_string(out.commutator_defect));

    const Vec start = coherent_state(space, x_start, tol, warnings).vector();
    const Vec end = coherent_state(space, x_end, tol, warnings).vector();

    const Mat U = exp_i_hermitian(H.matrix(), -T);
    const Mat EHE = 0.5 * (Mat(E * H.matrix() * E) + Mat(E * H.matrix() * E).adjoint());
    const Mat U3 = exp_i_hermitian(EHE, -T);

    const Vec Estart = E * start;
    const cxd f1 = end.dot(U * Estart);
    const cxd f2 = (E.adjoint() * end).dot(U * Estart);
    const cxd f3 = (E.adjoint() * end).dot(U3 * Estart);

    out.value = f1;
    out.form_disagreement =
        std::max({std::abs(f1 - f2), std::abs(f1 - f3), std::abs(f2 - f3)});
    return out;
}

// ---------------------------------------------------------------------------
// Coherent label transport

TransportResult coherent_transport_check(const QuantumConstraintSet& qset,
                                         const std::vector<double>& omega,
                                         const PhasePoint& x, int flow_steps,
                                         const FockTolerances& tol, Warnings* warnings) {
    const FockSpace& space = qset.space;
    TransportResult out;
    out.flowed = gauge_flow(qset.classical, omega, x, flow_steps);
    if (!space.label_in_guard(out.flowed))
        throw DomainError("coherent_transport_check: flowed label leaves the truncation guard");

    const SpMat G = weighted_generator(qset, omega);
    const Vec psi = coherent_state(space, x, tol, warnings).vector();
    const Vec transported = exp_i_times_vector(G, 1.0, psi);
    const Vec target = coherent_state(space, out.flowed, tol, warnings).vector();

    out.overlap = target.dot(transported) / (target.norm() * transported.norm());
    out.fidelity = std::abs(out.overlap);
    return out;
}

// ---------------------------------------------------------------------------
// Constraint-averaged propagators

cxd label_average_propagator(const FockOperator& H, const ConstraintSet& set,
                             const GroupQuadrature& quad, double T,
                             const PhasePoint& x_end, const PhasePoint& x_start,
                             int flow_steps, const FockTolerances& tol,
                             Warnings* warnings) {
    if (set.count() != 1)
        throw DomainError("label_average_propagator: one compact direction supported");
    if (quad.nodes.empty() || quad.nodes.size() != quad.weights.size())
        throw DimensionError("label_average_propagator: malformed group quadrature");
    const FockSpace& space = H.space();

    const SpectralPropagator prop(H);
    const Vec chi = prop.evolve(-T, coherent_state(space, x_end, tol, warnings).vector());

    cxd acc = 0.0;
    for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
        const PhasePoint flowed =
            gauge_flow(set, {quad.nodes[k]}, x_start, flow_steps);
        const Vec psi = coherent_state(space, flowed, tol, warnings).vector();
        acc += quad.weights[k] * chi.dot(psi);
    }
    return acc;
}

MultiplierAverageResult multiplier_average_propagator(
    const FockOperator& H, const FockOperator& Phi, double T, const PhasePoint& x_end,
    const PhasePoint& x_start, long n_samples, std::uint64_t seed,
    const MultiplierMeasure& measure, double commute_tol, const FockTolerances& tol,
    Warnings* warnings) {
    H.require_same_space(Phi);
    if (!(T > 0.0)) throw DomainError("multiplier_average_propagator: T must be positive");
    if (!H.is_hermitian(1e-10) || !Phi.is_hermitian(1e-10))
        throw HermiticityError("multiplier_average_propagator: generators must be Hermitian");
    const FockSpace& space = H.space();

    // Simultaneous eigenbasis: diagonalize Phi, then re-diagonalize H inside
    // each (near-)degenerate Phi eigenspace.  Residual off-diagonal H means
    // the pair does not commute and the splitting argument fails; reject.
    Eigen::SelfAdjointEigenSolver<Mat> es(Phi.matrix());
    const RVec& mu = es.eigenvalues();
    Mat V = es.eigenvectors();
    const long dim = mu.size();
    long c0 = 0;
    while (c0 < dim) {
        long c1 = c0 + 1;
        while (c1 < dim && mu(c1) - mu(c1 - 1) <= 1e-6) ++c1;
        const long sz = c1 - c0;
        if (sz > 1) {
            const Mat block = V.middleCols(c0, sz).adjoint() * H.matrix() * V.middleCols(c0, sz);
            Eigen::SelfAdjointEigenSolver<Mat> bs(0.5 * (block + block.adjoint()));
            V.middleCols(c0, sz) = V.middleCols(c0, sz) * bs.eigenvectors();
        }
        c0 = c1;
    }
    const Mat M = V.adjoint() * H.matrix() * V;
    double offdiag = 0.0;
    for (long i = 0; i < dim; ++i)
        for (long j = 0; j < dim; ++j)
            if (i != j) offdiag = std::max(offdiag, std::abs(M(i, j)));
    if (offdiag > commute_tol)
        throw DomainError(
            "multiplier_average_propagator: H and the constraint generator do not "
            "commute (simultaneous-eigenbasis residual " +
            std::to_string(offdiag) + "); the splitting is not exact for this pair");

    const Vec c = V.adjoint() * coherent_state(space, x_start, tol, warnings).vector();
    const Vec d = V.adjoint() * coherent_state(space, x_end, tol, warnings).vector();
    Vec w(dim);
    for (long j = 0; j < dim; ++j)
        w(j) = std::conj(d(j)) * c(j) * std::polar(1.0, -M(j, j).real() * T);

    MultiplierAverageResult out;

    // Offset lift: theta0 uniform on [-pi n, pi n) with n T integral makes the
    // accumulated angle tau exactly uniform modulo 2 pi for every integer
    // charge, so charged sectors average to zero at any path resolution.
    int n = measure.period_multiplier;
    if (n <= 0) {
        for (int k = 1; k <= 64; ++k) {
            const double kt = k * T;
            if (std::abs(kt - std::round(kt)) <= 1e-9 * std::max(1.0, std::abs(kt))) {
                n = k;
                break;
            }
        }
        if (n <= 0)
            throw ConfigError(
                "multiplier_average_propagator: no integer n <= 64 with n*T integral; "
                "set period_multiplier explicitly for this T");
    } else {
        const double nt = n * T;
        if (std::abs(nt - std::round(nt)) > 1e-6)
            throw ConfigError(
                "multiplier_average_propagator: period_multiplier * T must be an integer");
    }
    out.period_multiplier = n;

    const auto sample_value = [&](double tau) {
        cxd v = 0.0;
        for (long j = 0; j < dim; ++j) v += w(j) * std::polar(1.0, -mu(j) * tau);
        return v;
    };

    std::vector<cxd> samples;
    if (measure.deterministic_theta_nodes > 0) {
        if (measure.gamma != 0.0)
            throw ConfigError(
                "multiplier_average_propagator: the deterministic offset grid is the "
                "gamma = 0 degenerate measure; set gamma to zero");
        const int K = measure.deterministic_theta_nodes;
        out.time_steps = 1;
        samples.reserve(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            const double theta = -kPi * n + 2.0 * kPi * n * (k + 0.5) / K;
            samples.push_back(sample_value(theta * T));
        }
    } else {
        if (n_samples < 2)
            throw DomainError("multiplier_average_propagator: need at least two samples");
        if (!(measure.gamma >= 0.0))
            throw DomainError("multiplier_average_propagator: gamma must be nonnegative");
        int L = measure.time_steps;
        if (L <= 0) {
            const double lambda_sup = kPi * n + 3.0 * std::sqrt(measure.gamma * T);
            L = std::max(2, static_cast<int>(std::ceil(T * lambda_sup / 1e-2)));
        }
        out.time_steps = L;
        const double eps = T / L;
        const double root = std::sqrt(measure.gamma * eps);
        samples.reserve(static_cast<std::size_t>(n_samples));
        for (long i = 0; i < n_samples; ++i) {
            std::mt19937_64 rng(splitmix64(seed ^ static_cast<std::uint64_t>(i)));
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const double theta0 = -kPi * n + 2.0 * kPi * n * unif(rng);
            double walk = 0.0, tau = 0.0;
            for (int l = 0; l < L; ++l) {
                tau += (theta0 + walk) * eps;
                walk += root * gauss(rng);
            }
            samples.push_back(sample_value(tau));
        }
    }

    cxd acc = 0.0;
    for (const cxd& s : samples) acc += s;
    out.n_samples = static_cast<long>(samples.size());
    out.mean = acc / static_cast<double>(out.n_samples);
    double var = 0.0;
    for (const cxd& s : samples) var += std::norm(s - out.mean);
    if (out.n_samples > 1) var /= static_cast<double>(out.n_samples - 1);
    out.std_error = std::sqrt(var / static_cast<double>(out.n_samples));
    out.unreliable = !(out.std_error <= 0.5 * std::abs(out.mean));
    if (out.unreliable)
        warn(warnings,
             "multiplier_average_propagator: standard error exceeds half the "
             "estimated modulus");
    return out;
}

}  // namespace cfq
