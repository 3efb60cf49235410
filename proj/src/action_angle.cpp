#include "cfq/action_angle.hpp"

#include <cmath>

namespace cfq {

ActionAngle to_action_angle(double p, double q) {
    if (p == 0.0 && q == 0.0)
        throw DomainError("to_action_angle: angle undefined at the origin");
    return {0.5 * (p * p + q * q), std::atan2(q, p)};
}

void from_action_angle(double r, double s, double& p, double& q) {
    if (r <= 0.0) throw DomainError("from_action_angle: action must be positive");
    const double amp = std::sqrt(2.0 * r);
    p = amp * std::cos(s);
    q = amp * std::sin(s);
}

double generating_term_G(double r, double s) { return r * std::cos(s) * std::sin(s); }

double generating_term_F(double q, double s) {
    const double sn = std::sin(s);
    if (sn == 0.0) throw DomainError("generating_term_F: cot(s) undefined at sin(s)=0");
    return -0.5 * q * q * std::cos(s) / sn;
}

}  // namespace cfq
