// Shared scalar types, phase-space labels and error categories used across the
// library.  Everything lives in namespace cfq.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfq {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// A point of flat phase space for `dof` degrees of freedom: momenta first,
// positions second.
struct PhasePoint {
    std::vector<double> p;
    std::vector<double> q;

    PhasePoint() = default;
    PhasePoint(std::vector<double> p_, std::vector<double> q_)
        : p(std::move(p_)), q(std::move(q_)) {
        if (p.size() != q.size())
            throw std::invalid_argument("PhasePoint: p and q must have equal length");
    }
    static PhasePoint single(double p0, double q0) { return PhasePoint({p0}, {q0}); }

    int dof() const { return static_cast<int>(p.size()); }

    // Largest per-mode energy-like label radius (p_j^2+q_j^2)/2; used by the
    // cutoff guard.
    double max_mode_radius() const {
        double r = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j)
            r = std::max(r, 0.5 * (p[j] * p[j] + q[j] * q[j]));
        return r;
    }
    double max_abs_label() const {
        double m = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j)
            m = std::max({m, std::abs(p[j]), std::abs(q[j])});
        return m;
    }
};

// Non-fatal diagnostics (e.g. truncation warnings). Callers that care pass a
// pointer; everything still works when it is null.
struct Warnings {
    std::vector<std::string> messages;
    void add(std::string m) { messages.push_back(std::move(m)); }
    bool contains(const std::string& needle) const {
        for (const auto& m : messages)
            if (m.find(needle) != std::string::npos) return true;
        return false;
    }
};

inline void warn(Warnings* w, std::string msg) {
    if (w) w->add(std::move(msg));
}

// Error categories surfaced by the library.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegreeOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct HermiticityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical policy knobs shared by Fock-space constructions.
struct FockTolerances {
    double label_max = 6.0;        // |p_j|,|q_j| beyond this is always flagged
    double truncation_tol = 1e-8;  // acceptable norm defect of truncated states
};

// splitmix64: tiny, well-known seed scrambler; used to derive independent
// per-sample seeds from (base seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace cfq
