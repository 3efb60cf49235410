// Truncated Fock space: per-mode occupation cutoff over N modes, with the
// flat basis ordered row-major in the occupation multi-index (last mode
// varies fastest).
#pragma once

#include "cfq/common.hpp"

namespace cfq {

class FockSpace {
  public:
    static constexpr long kDimensionCeiling = 16384;

    FockSpace() = default;
    FockSpace(int cutoff, int dof);

    int cutoff() const { return cutoff_; }
    int dof() const { return dof_; }
    long dim() const { return dim_; }

    bool operator==(const FockSpace& o) const {
        return cutoff_ == o.cutoff_ && dof_ == o.dof_;
    }
    bool operator!=(const FockSpace& o) const { return !(*this == o); }

    // flat index <-> occupation multi-index
    long flat_index(const std::vector<int>& occ) const;
    std::vector<int> occupation(long flat) const;
    int total_occupation(long flat) const;

    // Basis states forming the "low block": total occupation at most
    // cutoff/2.  For one mode this is just the indices <= cutoff/2; for
    // several modes the total-occupation form keeps the block inside the
    // region where truncated operator products are exact.
    std::vector<long> low_block_indices() const;

    // Guard: the cutoff comfortably exceeds the label radius of x, so a
    // coherent state at x fits in the truncated basis.
    bool label_in_guard(const PhasePoint& x) const {
        return static_cast<double>(cutoff_) >= 4.0 * x.max_mode_radius();
    }

  private:
    int cutoff_ = 0;
    int dof_ = 0;
    long dim_ = 0;
};

FockSpace build_space(int cutoff, int dof);

}  // namespace cfq
