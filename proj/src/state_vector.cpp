#include "cfq/state_vector.hpp"

namespace cfq {

StateVector vacuum(const FockSpace& space) {
    Vec v = Vec::Zero(space.dim());
    v(0) = 1.0;
    return StateVector(space, std::move(v));
}

cxd overlap(const StateVector& a, const StateVector& b) {
    if (a.space() != b.space())
        throw DimensionError("overlap: states live on different spaces");
    return a.vector().dot(b.vector());  // Eigen dot conjugates the left factor
}

StateVector apply(const FockOperator& A, const StateVector& s) {
    if (A.space() != s.space())
        throw DimensionError("apply: operator and state live on different spaces");
    return StateVector(s.space(), A.matrix() * s.vector());
}

}  // namespace cfq
