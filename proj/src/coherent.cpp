#include "cfq/coherent.hpp"

#include <cmath>
#include <sstream>

namespace cfq {

StateVector coherent_state(const FockSpace& space, const PhasePoint& x,
                           const FockTolerances& tol, Warnings* warnings) {
    if (x.dof() != space.dof())
        throw DimensionError("coherent_state: label has wrong number of modes");

    if (x.max_abs_label() > tol.label_max) {
        std::ostringstream os;
        os << "coherent_state: label magnitude " << x.max_abs_label()
           << " exceeds label_max " << tol.label_max;
        warn(warnings, os.str());
    }
    if (!space.label_in_guard(x)) {
        std::ostringstream os;
        os << "coherent_state: cutoff " << space.cutoff()
           << " below guard 4*max_j (p_j^2+q_j^2)/2 = " << 4.0 * x.max_mode_radius();
        warn(warnings, os.str());
    }

    const int D = space.cutoff();
    const Mat a = ladder_matrix(D);
    const Mat Q1 = (a + a.adjoint()) / std::sqrt(2.0);
    const Mat P1 = (a - a.adjoint()) / (cxd(0.0, 1.0) * std::sqrt(2.0));

    Vec state;
    for (int j = 0; j < space.dof(); ++j) {
        Vec mode = Vec::Zero(D);
        mode(0) = 1.0;
        mode = exp_i_hermitian(Q1, x.p[j]) * mode;   // exp(+i p Q)|0>
        mode = exp_i_hermitian(P1, -x.q[j]) * mode;  // exp(-i q P) ...
        state = (j == 0) ? mode : kron(state, mode);
    }

    const double defect = 1.0 - state.norm();
    if (defect > tol.truncation_tol) {
        std::ostringstream os;
        os << "coherent_state: truncation norm defect " << defect << " exceeds tolerance "
           << tol.truncation_tol;
        warn(warnings, os.str());
    }
    return StateVector(space, std::move(state));
}

StateVector coherent_state_closed_form(const FockSpace& space, const PhasePoint& x) {
    if (x.dof() != space.dof())
        throw DimensionError("coherent_state_closed_form: label has wrong number of modes");
    const int D = space.cutoff();
    Vec state;
    for (int j = 0; j < space.dof(); ++j) {
        const double p = x.p[j], q = x.q[j];
        const cxd z((q) / std::sqrt(2.0), (p) / std::sqrt(2.0));
        const double u = 0.5 * (p * p + q * q);
        Vec mode(D);
        cxd amp = std::exp(cxd(0.0, -0.5 * p * q)) * std::exp(-0.5 * u);
        mode(0) = amp;
        for (int n = 1; n < D; ++n) {
            amp *= z / std::sqrt(static_cast<double>(n));
            mode(n) = amp;
        }
        state = (j == 0) ? mode : kron(state, mode);
    }
    return StateVector(space, std::move(state));
}

double coherent_norm_defect(const FockSpace& space, const PhasePoint& x) {
    return 1.0 - coherent_state_closed_form(space, x).norm();
}

}  // namespace cfq
