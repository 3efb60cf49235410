#include "cfq/fock_space.hpp"

namespace cfq {

FockSpace::FockSpace(int cutoff, int dof) : cutoff_(cutoff), dof_(dof) {
    if (cutoff < 2) throw DomainError("FockSpace: cutoff must be >= 2");
    if (dof < 1) throw DomainError("FockSpace: dof must be >= 1");
    long d = 1;
    for (int j = 0; j < dof; ++j) {
        d *= cutoff;
        if (d > kDimensionCeiling)
            throw CapacityError("FockSpace: dimension " + std::to_string(d) +
                                " exceeds ceiling " + std::to_string(kDimensionCeiling));
    }
    dim_ = d;
}

long FockSpace::flat_index(const std::vector<int>& occ) const {
    if (static_cast<int>(occ.size()) != dof_)
        throw DimensionError("flat_index: wrong number of modes");
    long idx = 0;
    for (int j = 0; j < dof_; ++j) {
        if (occ[j] < 0 || occ[j] >= cutoff_)
            throw DomainError("flat_index: occupation out of range");
        idx = idx * cutoff_ + occ[j];
    }
    return idx;
}

std::vector<int> FockSpace::occupation(long flat) const {
    if (flat < 0 || flat >= dim_) throw DomainError("occupation: index out of range");
    std::vector<int> occ(dof_);
    for (int j = dof_ - 1; j >= 0; --j) {
        occ[j] = static_cast<int>(flat % cutoff_);
        flat /= cutoff_;
    }
    return occ;
}

int FockSpace::total_occupation(long flat) const {
    int total = 0;
    for (int j = 0; j < dof_; ++j) {
        total += static_cast<int>(flat % cutoff_);
        flat /= cutoff_;
    }
    return total;
}

std::vector<long> FockSpace::low_block_indices() const {
    std::vector<long> idx;
    const int half = cutoff_ / 2;
    for (long i = 0; i < dim_; ++i)
        if (total_occupation(i) <= half) idx.push_back(i);
    return idx;
}

FockSpace build_space(int cutoff, int dof) { return FockSpace(cutoff, dof); }

}  // namespace cfq
