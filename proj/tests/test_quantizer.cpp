// Antinormal-ordering quantization (combinatorial and quadrature backends),
// lower symbols, resolution of the identity, Gaussian quadrature rules and
// the action-angle-labeled construction.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfq/action_angle.hpp"
#include "cfq/propagator.hpp"
#include "cfq/quantizer.hpp"

using namespace cfq;

namespace {

double lb_distance(const FockSpace& s, const Mat& A, const Mat& B) {
    return low_block_max_abs(s, Mat(A - B));
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double double_factorial_odd(int k) {  // (2k-1)!!
    double f = 1.0;
    for (int i = 1; i <= k; ++i) f *= (2 * i - 1);
    return f;
}

}  // namespace

TEST_CASE("laguerre rule integrates polynomial moments exactly") {
    for (int order : {4, 12, 33}) {
        const GaussRule rule = gauss_laguerre(order);
        REQUIRE(rule.nodes.size() == std::size_t(order));
        for (double w : rule.weights) CHECK(w > 0.0);
        for (int k : {0, 1, 2, 2 * order - 1}) {
            double sum = 0.0;
            for (int i = 0; i < order; ++i)
                sum += rule.weights[i] * std::pow(rule.nodes[i], k);
            CHECK(std::abs(sum - factorial(k)) <= 1e-10 * factorial(k) + 1e-13);
        }
    }
}

TEST_CASE("hermite rule integrates even moments exactly") {
    const double root_pi = std::sqrt(kPi);
    for (int order : {5, 16, 33}) {
        const GaussRule rule = gauss_hermite(order);
        for (double w : rule.weights) CHECK(w > 0.0);
        for (int k : {0, 1, 2, (order - 1)}) {
            // integral x^{2k} e^{-x^2} = sqrt(pi) (2k-1)!! / 2^k
            const double expect = root_pi * double_factorial_odd(k) / std::pow(2.0, k);
            double sum = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                sum += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
            CHECK(std::abs(sum - expect) <= 1e-10 * expect);
            // odd moments vanish by symmetry, up to cancellation rounding
            double odd = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                odd += rule.weights[i] * std::pow(rule.nodes[i], 2 * k + 1);
                scale += rule.weights[i] * std::pow(std::abs(rule.nodes[i]), 2 * k + 1);
            }
            CHECK(std::abs(odd) <= 1e-12 * scale + 1e-12);
        }
    }
}

TEST_CASE("phase rules integrate gaussian-enveloped monomials") {
    // rules absorb the envelope: sum w F(p,q) = integral F e^{-u} du dt form
    for (const PhaseQuadrature& rule :
         {polar_phase_rule(16, 32), cartesian_phase_rule(16)}) {
        double mass = 0.0, second = 0.0;
        for (std::size_t i = 0; i < rule.mode.size(); ++i) {
            const double p = rule.mode.p[i], q = rule.mode.q[i], w = rule.mode.w[i];
            CHECK(w > 0.0);
            const double env = std::exp(-0.5 * (p * p + q * q));
            mass += w * env;
            second += w * env * q * q;
        }
        // integral e^{-u} dp dq/(2pi) = 1 and integral q^2 e^{-u} dp dq/(2pi) = 1
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(second == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exactness windows are reported honestly") {
    const PhaseQuadrature small = polar_phase_rule(4, 8);
    CHECK(small.exact_for_polar(4, 2));
    CHECK_FALSE(small.exact_for_polar(16, 8));
    const PhaseQuadrature fitted = default_phase_rule(16, 4);
    CHECK(fitted.exact_for_polar(16, 4));
}

TEST_CASE("linear symbols quantize to the canonical operators") {
    const FockSpace s(32, 1);
    const auto pairs = canonical_ops(s);
    const FockOperator Qhat = anti_wick(s, PolySymbol::position(1, 0));
    const FockOperator Phat = anti_wick(s, PolySymbol::momentum(1, 0));
    CHECK(lb_distance(s, Qhat.matrix(), pairs[0].Q.matrix()) <= 1e-10);
    CHECK(lb_distance(s, Phat.matrix(), pairs[0].P.matrix()) <= 1e-10);

    const PhaseQuadrature rule = default_phase_rule(32, 1);
    CHECK(lb_distance(s, anti_wick_quadrature(s, PolySymbol::position(1, 0), rule).matrix(),
                      pairs[0].Q.matrix()) <= 1e-10);
}

TEST_CASE("constant symbol quantizes to the identity") {
    const FockSpace s(16, 1);
    const FockOperator one = anti_wick(s, PolySymbol::constant(1, 1.0));
    CHECK(lb_distance(s, one.matrix(), Mat::Identity(16, 16)) <= 1e-10);
}

TEST_CASE("oscillator symbol quantizes to (P^2+Q^2+1)/2 on the low block") {
    const FockSpace s(64, 1);
    const auto pairs = canonical_ops(s);
    const Mat expect = 0.5 * (pairs[0].P.matrix() * pairs[0].P.matrix() +
                              pairs[0].Q.matrix() * pairs[0].Q.matrix() +
                              Mat::Identity(64, 64));

    const FockOperator comb = anti_wick(s, oscillator_symbol(1));
    CHECK(lb_distance(s, comb.matrix(), expect) <= 1e-8);
    CHECK(comb.hermiticity_defect() <= 1e-12);

    const FockOperator quad =
        anti_wick_quadrature(s, oscillator_symbol(1), default_phase_rule(64, 2));
    CHECK(lb_distance(s, quad.matrix(), expect) <= 1e-8);

    const FockOperator checked = anti_wick_checked(s, oscillator_symbol(1));
    CHECK(lb_distance(s, checked.matrix(), comb.matrix()) == 0.0);
}

TEST_CASE("backends agree on every monomial of degree at most four") {
    const FockSpace s(16, 1);
    const PhaseQuadrature rule = default_phase_rule(16, 4);
    for (int a = 0; a <= 4; ++a) {
        for (int b = 0; a + b <= 4; ++b) {
            const PolySymbol m = PolySymbol::monomial(1, {a}, {b}, 1.0);
            const FockOperator comb = anti_wick(s, m);
            const FockOperator quad = anti_wick_quadrature(s, m, rule);
            CHECK(lb_distance(s, comb.matrix(), quad.matrix()) <= 1e-8);
        }
    }
}

TEST_CASE("two-mode quantization factorizes and matches the rotation generator") {
    const FockSpace s(8, 2);
    const auto pairs = canonical_ops(s);
    // q^0 p_1 - q^1 p_0 has no ordering ambiguity across distinct modes
    const FockOperator L = anti_wick(s, rotation_symbol(2, 0, 1));
    const Mat expect = pairs[0].Q.matrix() * pairs[1].P.matrix() -
                       pairs[1].Q.matrix() * pairs[0].P.matrix();
    CHECK(lb_distance(s, L.matrix(), expect) <= 1e-8);
    CHECK(L.hermiticity_defect() <= 1e-12);
}

TEST_CASE("lower symbol of the identity and of position") {
    const FockSpace s(32, 1);
    const PhasePoint x = PhasePoint::single(0.7, -0.4);
    CHECK(std::abs(lower_symbol(identity_operator(s), x) - 1.0) <= 1e-12);

    const auto pairs = canonical_ops(s);
    CHECK(std::abs(lower_symbol(pairs[0].Q, x) - x.q[0]) <= 1e-8);
    CHECK(std::abs(lower_symbol(pairs[0].P, x) - x.p[0]) <= 1e-8);
}

TEST_CASE("lower symbol of a quantized symbol is its unit gaussian smoothing") {
    const FockSpace s(48, 1);
    // oscillator: E[h(x+G)] = h(x) + 1 for a 2d standard normal G
    const FockOperator H = anti_wick(s, oscillator_symbol(1));
    for (const PhasePoint& x :
         {PhasePoint::single(0, 0), PhasePoint::single(1.0, 0.5), PhasePoint::single(-0.8, 1.2)}) {
        const double expect = oscillator_symbol(1).evaluate(x) + 1.0;
        CHECK(std::abs(lower_symbol(H, x) - expect) <= 1e-8);
    }
    // at the origin the value is exactly the vacuum eigenvalue, one
    CHECK(std::abs(lower_symbol(H, PhasePoint::single(0, 0)) - 1.0) <= 1e-10);

    // quartic: E[(q+g)^4] = q^4 + 6 q^2 + 3
    const FockOperator Q4 = anti_wick(s, PolySymbol::monomial(1, {0}, {4}, 1.0));
    const double q = 1.1;
    const double expect = std::pow(q, 4) + 6.0 * q * q + 3.0;
    CHECK(std::abs(lower_symbol(Q4, PhasePoint::single(0.0, q)) - expect) <= 1e-7);
}

TEST_CASE("berezin sandwich on bounded sides of quadratic symbols") {
    const FockSpace s(48, 1);
    // bounded below: h = (0.3 q + 0.7 p)^2 + 0.2  >= 0.2
    const PolySymbol lin = 0.3 * PolySymbol::position(1, 0) + 0.7 * PolySymbol::momentum(1, 0);
    const PolySymbol below = lin * lin + PolySymbol::constant(1, 0.2);
    const FockOperator Hb = anti_wick(s, below);
    // bounded above: -h <= -0.2
    const FockOperator Ha = anti_wick(s, -1.0 * below);
    for (const PhasePoint& x : {PhasePoint::single(0.2, 0.4), PhasePoint::single(-1.0, 0.9)}) {
        CHECK(lower_symbol(Hb, x).real() >= 0.2 - 1e-8);
        CHECK(lower_symbol(Ha, x).real() <= -0.2 + 1e-8);
    }
}

TEST_CASE("nonnegative symbols give positive semidefinite low blocks") {
    const FockSpace s(32, 1);
    const PolySymbol lin = 0.3 * PolySymbol::position(1, 0) + 0.7 * PolySymbol::momentum(1, 0);
    const PolySymbol h = lin * lin;
    const Mat lb = low_block_submatrix(s, anti_wick(s, h).matrix());
    Eigen::SelfAdjointEigenSolver<Mat> es(lb);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("resolution of the identity converges with the radial order") {
    const FockSpace s(16, 1);
    double previous = 1e300;
    for (int r : {4, 8, 16, 32}) {
        const ResolutionReport rep = resolution_check(s, polar_phase_rule(r, 2 * r));
        CHECK(rep.low_block_deviation <= previous + 1e-12);
        previous = rep.low_block_deviation;
    }
    const ResolutionReport fine = resolution_check(s, polar_phase_rule(32, 64));
    CHECK(fine.low_block_deviation <= 1e-6);
    // a rule whose radial order covers the top basis state is exact on the
    // whole window, so even the full-matrix deviation collapses
    CHECK(fine.full_deviation <= 1e-8);
    // an under-resolved rule leaves an O(1) residue near the truncation edge
    const ResolutionReport coarse = resolution_check(s, polar_phase_rule(4, 8));
    CHECK(coarse.full_deviation > 0.05);
}

TEST_CASE("cartesian rule also resolves the identity") {
    const FockSpace s(16, 1);
    const ResolutionReport rep = resolution_check(s, cartesian_phase_rule(24));
    CHECK(rep.low_block_deviation <= 1e-6);
}

TEST_CASE("action-angle relabeling carries the generating phase") {
    const FockSpace s(32, 1);
    const double r = 0.9, sangle = 0.7;
    double p, q;
    from_action_angle(r, sangle, p, q);
    const StateVector t = transformed_state(s, r, sangle);
    const StateVector c = coherent_state(s, PhasePoint::single(p, q));
    const cxd ov = overlap(c, t);  // <x | r,s> = e^{-iG}
    CHECK(std::abs(std::abs(ov) - 1.0) <= 1e-10);
    CHECK(std::abs(ov - std::polar(1.0, -generating_term_G(r, sangle))) <= 1e-10);

    // the phase vanishes on the positive-p axis
    const StateVector t0 = transformed_state(s, 0.5, 0.0);
    const StateVector c0 = coherent_state(s, PhasePoint::single(1.0, 0.0));
    CHECK((t0.vector() - c0.vector()).norm() <= 1e-12);

    CHECK_THROWS_AS(transformed_state(s, -0.5, 0.0), DomainError);
    CHECK_THROWS_AS(transformed_state(s, 0.0, 0.0), DomainError);
}

TEST_CASE("action-angle quantization of the action reproduces the oscillator operator") {
    const FockSpace s(16, 1);
    const FockOperator cartesian = anti_wick(s, oscillator_symbol(1));
    const FockOperator relabeled =
        anti_wick_action_angle(s, [](double r, double) { return r; }, 16, 32);
    CHECK(lb_distance(s, relabeled.matrix(), cartesian.matrix()) <= 1e-6);
}

TEST_CASE("quantization input guards") {
    const FockSpace s(16, 1);
    CHECK_THROWS_AS(anti_wick(s, oscillator_symbol(2)), DimensionError);
    CHECK_THROWS_AS(anti_wick_action_angle(s, [](double, double) { return 1.0; }, 0, 8),
                    DomainError);
}
