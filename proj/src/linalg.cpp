#include "cfq/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace cfq {

Mat exp_i_hermitian(const Mat& A, double c, double herm_tol) {
    const double defect = (A - A.adjoint()).cwiseAbs().maxCoeff();
    if (defect > herm_tol)
        throw HermiticityError("exp_i_hermitian: generator is not Hermitian (defect " +
                               std::to_string(defect) + ")");
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    const RVec& lam = es.eigenvalues();
    Vec phases(lam.size());
    for (long k = 0; k < lam.size(); ++k)
        phases(k) = std::exp(cxd(0.0, c * lam(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

SpectralPropagator::SpectralPropagator(const FockOperator& H, double herm_tol)
    : space_(H.space()) {
    const double defect = H.hermiticity_defect();
    if (defect > herm_tol)
        throw HermiticityError("SpectralPropagator: generator is not Hermitian (defect " +
                               std::to_string(defect) + ")");
    Eigen::SelfAdjointEigenSolver<Mat> es(H.matrix());
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
}

Mat SpectralPropagator::unitary(double T) const {
    Vec phases(evals_.size());
    for (long k = 0; k < evals_.size(); ++k)
        phases(k) = std::exp(cxd(0.0, -T * evals_(k)));
    return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

Vec SpectralPropagator::evolve(double T, const Vec& v) const {
    Vec coeff = evecs_.adjoint() * v;
    for (long k = 0; k < evals_.size(); ++k)
        coeff(k) *= std::exp(cxd(0.0, -T * evals_(k)));
    return evecs_ * coeff;
}

StateVector evolve(const FockOperator& H, double T, const StateVector& s, double herm_tol) {
    if (H.space() != s.space())
        throw DimensionError("evolve: operator and state live on different spaces");
    SpectralPropagator prop(H, herm_tol);
    return StateVector(s.space(), prop.evolve(T, s.vector()));
}

SpMat to_sparse(const Mat& A, double drop_tol) {
    SpMat S(A.rows(), A.cols());
    std::vector<Eigen::Triplet<cxd>> trip;
    for (long j = 0; j < A.cols(); ++j)
        for (long i = 0; i < A.rows(); ++i)
            if (std::abs(A(i, j)) > drop_tol) trip.emplace_back(i, j, A(i, j));
    S.setFromTriplets(trip.begin(), trip.end());
    return S;
}

Vec exp_i_times_vector(const SpMat& A, double c, const Vec& x) {
    // 1-norm of c*A decides the number of unit-size sub-steps; each sub-step
    // sums the Taylor series until terms fall below machine-level tolerance.
    double norm1 = 0.0;
    for (int k = 0; k < A.outerSize(); ++k) {
        double colsum = 0.0;
        for (SpMat::InnerIterator it(A, k); it; ++it) colsum += std::abs(it.value());
        norm1 = std::max(norm1, colsum);
    }
    const double total = std::abs(c) * norm1;
    const int substeps = std::max(1, static_cast<int>(std::ceil(total / 0.5)));
    const cxd ic(0.0, c / static_cast<double>(substeps));

    Vec y = x;
    for (int s = 0; s < substeps; ++s) {
        Vec term = y;
        Vec acc = y;
        const double target = 1e-16 * std::max(1.0, y.norm());
        for (int k = 1; k <= 40; ++k) {
            term = (ic / static_cast<double>(k)) * (A * term).eval();
            acc += term;
            if (term.norm() < target) break;
        }
        y.swap(acc);
    }
    return y;
}

}  // namespace cfq
