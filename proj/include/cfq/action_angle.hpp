// Action-angle chart for one degree of freedom:
//   r = (p^2+q^2)/2,  s = atan2(q, p) in (-pi, pi],
//   p = sqrt(2r) cos s,  q = sqrt(2r) sin s.
// G(r,s) = r cos(s) sin(s) is the boundary term connecting the Stratonovich
// line integrals: int p dq = int r ds + G(end) - G(start); F(q,s) =
// -q^2 cot(s)/2 = -G is the same generating data in (q,s) variables.
#pragma once

#include "cfq/common.hpp"

namespace cfq {

struct ActionAngle {
    double r;
    double s;
};

ActionAngle to_action_angle(double p, double q);
void from_action_angle(double r, double s, double& p, double& q);

double generating_term_G(double r, double s);
double generating_term_F(double q, double s);

}  // namespace cfq
