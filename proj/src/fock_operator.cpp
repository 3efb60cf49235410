#include "cfq/fock_operator.hpp"

#include <cmath>

namespace cfq {

double FockOperator::hermiticity_defect() const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
}

Mat ladder_matrix(int cutoff) {
    Mat a = Mat::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Mat kron(const Mat& A, const Mat& B) {
    Mat K(A.rows() * B.rows(), A.cols() * B.cols());
    for (long i = 0; i < A.rows(); ++i)
        for (long j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

Vec kron(const Vec& a, const Vec& b) {
    Vec k(a.size() * b.size());
    for (long i = 0; i < a.size(); ++i) k.segment(i * b.size(), b.size()) = a(i) * b;
    return k;
}

FockOperator embed_mode_operator(const FockSpace& space, const Mat& single, int mode) {
    if (single.rows() != space.cutoff() || single.cols() != space.cutoff())
        throw DimensionError("embed_mode_operator: single-mode matrix has wrong size");
    if (mode < 0 || mode >= space.dof())
        throw DomainError("embed_mode_operator: mode index out of range");
    Mat result = (mode == 0) ? single : Mat(Mat::Identity(space.cutoff(), space.cutoff()));
    for (int j = 1; j < space.dof(); ++j) {
        const Mat& next = (j == mode)
                              ? single
                              : static_cast<const Mat&>(Mat::Identity(space.cutoff(), space.cutoff()));
        result = kron(result, next);
    }
    return FockOperator(space, std::move(result));
}

std::vector<CanonicalPair> canonical_ops(const FockSpace& space) {
    const int D = space.cutoff();
    const Mat a = ladder_matrix(D);
    const Mat ad = a.adjoint();
    const Mat Q1 = (a + ad) / std::sqrt(2.0);
    const Mat P1 = (a - ad) / (cxd(0.0, 1.0) * std::sqrt(2.0));
    std::vector<CanonicalPair> pairs;
    pairs.reserve(space.dof());
    for (int j = 0; j < space.dof(); ++j)
        pairs.push_back({embed_mode_operator(space, Q1, j), embed_mode_operator(space, P1, j)});
    return pairs;
}

FockOperator identity_operator(const FockSpace& space) {
    return FockOperator(space, Mat::Identity(space.dim(), space.dim()));
}

double low_block_max_abs(const FockSpace& space, const Mat& A) {
    const auto idx = space.low_block_indices();
    double m = 0.0;
    for (long r : idx)
        for (long c : idx) m = std::max(m, std::abs(A(r, c)));
    return m;
}

double low_block_max_abs(const FockOperator& A) {
    return low_block_max_abs(A.space(), A.matrix());
}

Mat low_block_submatrix(const FockSpace& space, const Mat& A) {
    const auto idx = space.low_block_indices();
    Mat S(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) S(i, j) = A(idx[i], idx[j]);
    return S;
}

}  // namespace cfq
