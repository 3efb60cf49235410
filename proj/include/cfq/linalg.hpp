// Matrix-function utilities for Hermitian generators: unitary exponentials by
// eigendecomposition and a sub-stepped Taylor exponential-times-vector for
// large sparse generators.
#pragma once

#include <Eigen/Sparse>

#include "cfq/state_vector.hpp"

namespace cfq {

using SpMat = Eigen::SparseMatrix<cxd>;

// exp(i*c*A) for Hermitian A, via A = V diag(lambda) V^dagger.
Mat exp_i_hermitian(const Mat& A, double c, double herm_tol = 1e-10);

// Cached eigendecomposition of a Hermitian generator; apply(T) yields
// exp(-i*H*T) and apply(T, v) the evolved vector.
class SpectralPropagator {
  public:
    explicit SpectralPropagator(const FockOperator& H, double herm_tol = 1e-12);

    const FockSpace& space() const { return space_; }
    Mat unitary(double T) const;           // exp(-i H T)
    Vec evolve(double T, const Vec& v) const;
    const RVec& eigenvalues() const { return evals_; }
    const Mat& eigenvectors() const { return evecs_; }

  private:
    FockSpace space_;
    RVec evals_;
    Mat evecs_;
};

// Unitary evolution of a state: exp(-i H T) s.  H must be Hermitian within
// herm_tol (the defect is checked and rejected otherwise).
StateVector evolve(const FockOperator& H, double T, const StateVector& s,
                   double herm_tol = 1e-12);

// y = exp(i*c*A) x for (sparse) A, computed by uniform sub-stepping with a
// Taylor series per sub-step.  Robust for skew products where a full
// eigendecomposition would be too expensive.
Vec exp_i_times_vector(const SpMat& A, double c, const Vec& x);

// Drop explicit zeros of a dense matrix into sparse storage.
SpMat to_sparse(const Mat& A, double drop_tol = 0.0);

}  // namespace cfq
