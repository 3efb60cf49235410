// State vectors on a truncated Fock space.
#pragma once

#include "cfq/fock_operator.hpp"

namespace cfq {

class StateVector {
  public:
    StateVector() = default;
    StateVector(FockSpace space, Vec v) : space_(space), vec_(std::move(v)) {
        if (vec_.size() != space_.dim())
            throw DimensionError("StateVector: vector does not match space dimension");
    }

    const FockSpace& space() const { return space_; }
    const Vec& vector() const { return vec_; }
    Vec& vector() { return vec_; }

    double norm() const { return vec_.norm(); }

  private:
    FockSpace space_;
    Vec vec_;
};

StateVector vacuum(const FockSpace& space);

// <a|b>, conjugate-linear in the first argument.
cxd overlap(const StateVector& a, const StateVector& b);

StateVector apply(const FockOperator& A, const StateVector& s);

}  // namespace cfq
