// Dense operators on a truncated Fock space, ladder-matrix constructions and
// the canonical position/momentum pairs Q_j = (a+a†)/√2, P_j = (a−a†)/(i√2).
#pragma once

#include "cfq/fock_space.hpp"

namespace cfq {

class FockOperator {
  public:
    FockOperator() = default;
    FockOperator(FockSpace space, Mat m) : space_(space), mat_(std::move(m)) {
        if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim())
            throw DimensionError("FockOperator: matrix does not match space dimension");
    }

    const FockSpace& space() const { return space_; }
    const Mat& matrix() const { return mat_; }
    Mat& matrix() { return mat_; }

    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

    FockOperator adjoint() const { return FockOperator(space_, mat_.adjoint()); }

    FockOperator operator+(const FockOperator& o) const {
        require_same_space(o);
        return FockOperator(space_, mat_ + o.mat_);
    }
    FockOperator operator-(const FockOperator& o) const {
        require_same_space(o);
        return FockOperator(space_, mat_ - o.mat_);
    }
    FockOperator operator*(const FockOperator& o) const {
        require_same_space(o);
        return FockOperator(space_, mat_ * o.mat_);
    }
    friend FockOperator operator*(cxd c, const FockOperator& o) {
        return FockOperator(o.space_, c * o.mat_);
    }

    FockOperator commutator(const FockOperator& o) const {
        require_same_space(o);
        return FockOperator(space_, mat_ * o.mat_ - o.mat_ * mat_);
    }

    void require_same_space(const FockOperator& o) const {
        if (space_ != o.space_)
            throw DimensionError("FockOperator: operands live on different spaces");
    }

  private:
    FockSpace space_;
    Mat mat_;
};

// Single-mode ladder matrix: a[n-1, n] = sqrt(n).
Mat ladder_matrix(int cutoff);

// Kronecker product helpers (row-major basis ordering of FockSpace).
Mat kron(const Mat& A, const Mat& B);
Vec kron(const Vec& a, const Vec& b);

// Embed a single-mode operator at mode j (identity on all other modes).
FockOperator embed_mode_operator(const FockSpace& space, const Mat& single, int mode);

struct CanonicalPair {
    FockOperator Q;
    FockOperator P;
};

// All canonical pairs (Q_j, P_j) of the space.
std::vector<CanonicalPair> canonical_ops(const FockSpace& space);

FockOperator identity_operator(const FockSpace& space);

// max |entry| over the low-block rows/columns of A.
double low_block_max_abs(const FockOperator& A);
double low_block_max_abs(const FockSpace& space, const Mat& A);

// Low-block principal submatrix.
Mat low_block_submatrix(const FockSpace& space, const Mat& A);

}  // namespace cfq
