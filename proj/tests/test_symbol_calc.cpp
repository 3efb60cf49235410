// Phase-space polynomial symbols, Poisson brackets, constraint
// classification, multiplier-extended flows, finite gauge maps and the
// action-angle chart.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cfq/action_angle.hpp"
#include "cfq/classical_flow.hpp"
#include "cfq/constraints.hpp"
#include "cfq/poly_symbol.hpp"

using namespace cfq;

namespace {

// Deterministic pseudo-random symbol of total degree <= 3.
PolySymbol random_symbol(int dof, std::uint64_t seed) {
    PolySymbol f(dof);
    std::uint64_t s = seed;
    const auto next = [&] {
        s = splitmix64(s);
        return 2.0 * (double(s >> 11) / double(1ULL << 53)) - 1.0;
    };
    std::vector<int> pe(dof, 0), qe(dof, 0);
    for (int t = 0; t < 6; ++t) {
        int total = 0;
        for (int j = 0; j < dof; ++j) {
            pe[j] = int(splitmix64(s ^ (t * 4 + j)) % 2);
            qe[j] = int(splitmix64(s ^ (t * 4 + j + 97)) % 2);
            total += pe[j] + qe[j];
        }
        if (total > 3) continue;
        f = f + PolySymbol::monomial(dof, pe, qe, next());
    }
    return f;
}

double coeff_distance(const PolySymbol& a, const PolySymbol& b) {
    return (a - b).max_abs_coeff();
}

}  // namespace

TEST_CASE("symbol construction, arithmetic and evaluation") {
    const PolySymbol p = PolySymbol::momentum(1, 0);
    const PolySymbol q = PolySymbol::position(1, 0);
    const PolySymbol h = 0.5 * (p * p + q * q);

    CHECK(h.degree() == 2);
    CHECK(h.coefficient({2}, {0}) == doctest::Approx(0.5));
    CHECK(h.coefficient({0}, {2}) == doctest::Approx(0.5));
    CHECK(h.evaluate(PhasePoint::single(3.0, 4.0)) == doctest::Approx(12.5));

    // exact cancellation removes the stored term
    const PolySymbol zero = h - h;
    CHECK(zero.is_zero());
    CHECK(zero.terms().empty());

    // derivative rules
    const PolySymbol f = PolySymbol::monomial(1, {2}, {1}, 3.0);  // 3 p^2 q
    CHECK(coeff_distance(f.d_dp(0), PolySymbol::monomial(1, {1}, {1}, 6.0)) == 0.0);
    CHECK(coeff_distance(f.d_dq(0), PolySymbol::monomial(1, {2}, {0}, 3.0)) == 0.0);

    CHECK_THROWS_AS(PolySymbol::monomial(1, {5}, {4}, 1.0), DegreeOverflowError);
    CHECK_THROWS_AS(p + PolySymbol::momentum(2, 0), DimensionError);
}

TEST_CASE("oscillator and rotation builders") {
    const PolySymbol osc = oscillator_symbol(2);
    CHECK(osc.evaluate(PhasePoint({1.0, 2.0}, {3.0, 4.0})) == doctest::Approx(15.0));
    const PolySymbol L = rotation_symbol(2, 0, 1);  // q^0 p_1 - q^1 p_0
    CHECK(L.evaluate(PhasePoint({1.0, 2.0}, {3.0, 4.0})) == doctest::Approx(3.0 * 2 - 4.0 * 1));
}

TEST_CASE("poisson bracket canonical relations") {
    const PolySymbol p = PolySymbol::momentum(1, 0);
    const PolySymbol q = PolySymbol::position(1, 0);
    const PolySymbol one = poisson_bracket(q, p);
    CHECK(one.degree() == 0);
    CHECK(one.coefficient({0}, {0}) == doctest::Approx(1.0));

    CHECK(poisson_bracket(p, p).is_zero());
    CHECK(poisson_bracket(q, q).is_zero());

    const PolySymbol f = random_symbol(2, 5);
    CHECK(poisson_bracket(f, f).is_zero());
}

TEST_CASE("rotation generator commutes with the isotropic oscillator") {
    const PolySymbol L = rotation_symbol(2, 0, 1);
    const PolySymbol h = oscillator_symbol(2);
    CHECK(poisson_bracket(L, h).is_zero());
}

TEST_CASE("bracket is antisymmetric, bilinear and Leibniz") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const PolySymbol f = random_symbol(2, seed);
        const PolySymbol g = random_symbol(2, seed + 100);
        const PolySymbol h = random_symbol(2, seed + 200);

        CHECK(coeff_distance(poisson_bracket(f, g), -1.0 * poisson_bracket(g, f)) <= 1e-10);
        CHECK(coeff_distance(poisson_bracket(f + g, h),
                             poisson_bracket(f, h) + poisson_bracket(g, h)) <= 1e-10);
        CHECK(coeff_distance(poisson_bracket(f, g * h),
                             poisson_bracket(f, g) * h + g * poisson_bracket(f, h)) <= 1e-10);
    }
}

TEST_CASE("jacobi identity on random degree-3 symbols") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        const PolySymbol f = random_symbol(2, seed);
        const PolySymbol g = random_symbol(2, seed + 100);
        const PolySymbol h = random_symbol(2, seed + 200);
        const PolySymbol cyc = poisson_bracket(f, poisson_bracket(g, h)) +
                               poisson_bracket(g, poisson_bracket(h, f)) +
                               poisson_bracket(h, poisson_bracket(f, g));
        CHECK(cyc.max_abs_coeff() <= 1e-10);
    }
}

TEST_CASE("single rotation constraint is first class with zero structure") {
    ConstraintSet set;
    set.dof = 2;
    set.phis.push_back(rotation_symbol(2, 0, 1));
    const auto rep = classify_constraints(set, oscillator_symbol(2));
    CHECK(rep.first_class());
    CHECK(rep.max_closure_residual <= 1e-10);
    CHECK(rep.structure[0][0][0] == 0.0);
    CHECK(rep.h_mixing[0][0] == 0.0);
    CHECK(rep.offending_brackets.empty());
    CHECK_FALSE(rep.ambiguous_expansion);
}

TEST_CASE("canonical pair of constraints is second class") {
    ConstraintSet set;
    set.dof = 1;
    set.phis.push_back(PolySymbol::position(1, 0));
    set.phis.push_back(PolySymbol::momentum(1, 0));
    const auto rep = classify_constraints(set, PolySymbol(1));
    CHECK(rep.cls == ConstraintClass::SecondClass);
    CHECK(rep.max_closure_residual >= 0.5);
    REQUIRE(!rep.offending_brackets.empty());
    CHECK(rep.offending_brackets[0].find("phi_1") != std::string::npos);
}

TEST_CASE("partially closing set is reported as mixed") {
    ConstraintSet set;
    set.dof = 2;
    set.phis.push_back(PolySymbol::position(2, 0));  // q^0
    set.phis.push_back(PolySymbol::momentum(2, 0));  // p_0 -- clashes with q^0
    set.phis.push_back(PolySymbol::momentum(2, 1));  // p_1 -- commutes with both
    const auto rep = classify_constraints(set, PolySymbol(2));
    CHECK(rep.cls == ConstraintClass::Mixed);
}

TEST_CASE("duplicate constraints flag an ambiguous expansion") {
    ConstraintSet set;
    set.dof = 1;
    set.phis.push_back(PolySymbol::momentum(1, 0));
    set.phis.push_back(PolySymbol::momentum(1, 0));
    const auto rep = classify_constraints(set, PolySymbol(1));
    CHECK(rep.ambiguous_expansion);
}

TEST_CASE("euclidean-algebra coupling closes with its own structure constants") {
    // phi_0 = p_0 + q^1 p_2 - q^2 p_1, phi_1 = p_1, phi_2 = p_2:
    // {phi_0, phi_1} = phi_2, {phi_0, phi_2} = -phi_1, {phi_1, phi_2} = 0.
    std::vector<std::vector<std::vector<double>>> A(
        3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
    A[0][1][2] = 1.0;
    A[0][2][1] = -1.0;
    const ConstraintSet set = make_linear_constraint_set(3, A);
    CHECK(set.count() == 3);

    const auto rep = classify_constraints(set, PolySymbol(3));
    CHECK(rep.first_class());
    CHECK(rep.structure[0][1][2] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.structure[0][2][1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(std::abs(rep.structure[1][2][0]) <= 1e-12);

    // antisymmetry of the coupling is enforced at construction
    auto bad = A;
    bad[0][1][1] = 0.3;
    CHECK_THROWS_AS(make_linear_constraint_set(3, bad), DomainError);
}

TEST_CASE("free oscillator flow follows the analytic circle and conserves energy") {
    const PolySymbol h = oscillator_symbol(1);
    ConstraintSet set;
    set.dof = 1;
    set.phis.push_back(PolySymbol(1));  // inert zero constraint
    const PhasePoint x0 = PhasePoint::single(0.8, -0.4);
    const double T = 1.0, dt = 1e-3;
    const auto traj = constrained_flow(h, set, x0, {[](double) { return 0.0; }}, T, dt);

    REQUIRE(traj.points.size() == traj.times.size());
    const PhasePoint& xe = traj.points.back();
    const double c = std::cos(T), s = std::sin(T);
    CHECK(std::abs(xe.p[0] - (x0.p[0] * c - x0.q[0] * s)) <= 1e-10);
    CHECK(std::abs(xe.q[0] - (x0.q[0] * c + x0.p[0] * s)) <= 1e-10);

    double emax = 0.0;
    for (const auto& pt : traj.points)
        emax = std::max(emax, std::abs(h.evaluate(pt) - h.evaluate(x0)));
    CHECK(emax <= 1e-10);
}

TEST_CASE("first-class motion stays on the constraint surface for bounded multipliers") {
    const PolySymbol h = oscillator_symbol(2);
    ConstraintSet set;
    set.dof = 2;
    set.phis.push_back(rotation_symbol(2, 0, 1));
    const PhasePoint x0({0.6, 0.6}, {0.5, 0.5});  // phi(x0) = 0
    REQUIRE(std::abs(set.phis[0].evaluate(x0)) <= 1e-15);

    for (std::uint64_t seed : {1u, 2u, 3u}) {
        // piecewise-constant multiplier, 10 random levels in [-1, 1]
        auto lambda = [seed](double t) {
            const int k = std::min(9, int(t));
            const std::uint64_t u = splitmix64(seed * 1000 + k);
            return 2.0 * (double(u >> 11) / double(1ULL << 53)) - 1.0;
        };
        const auto traj = constrained_flow(h, set, x0, {lambda}, 10.0, 1e-3);
        double drift = 0.0;
        for (const auto& vals : traj.constraint_values)
            drift = std::max(drift, std::abs(vals[0]));
        CHECK(drift <= 1e-8);
    }
}

TEST_CASE("gauge-invariant observables agree across multiplier choices") {
    const PolySymbol h = oscillator_symbol(2);
    ConstraintSet set;
    set.dof = 2;
    set.phis.push_back(rotation_symbol(2, 0, 1));
    const PhasePoint x0({0.6, 0.6}, {0.5, 0.5});
    const PolySymbol O = PolySymbol::monomial(2, {2, 0}, {0, 0}, 1.0) +
                         PolySymbol::monomial(2, {0, 2}, {0, 0}, 1.0) +
                         PolySymbol::monomial(2, {0, 0}, {2, 0}, 1.0) +
                         PolySymbol::monomial(2, {0, 0}, {0, 2}, 1.0);  // p.p + q.q
    REQUIRE(poisson_bracket(set.phis[0], O).is_zero());

    const auto t1 = constrained_flow(h, set, x0, {[](double) { return 0.7; }}, 2.0, 1e-3);
    const auto t2 =
        constrained_flow(h, set, x0, {[](double t) { return -0.4 + 0.2 * t; }}, 2.0, 1e-3);
    CHECK(std::abs(O.evaluate(t1.points.back()) - O.evaluate(t2.points.back())) <= 1e-6);

    // a gauge-variant quantity must disagree (the flows genuinely differ)
    CHECK(std::abs(t1.points.back().q[0] - t2.points.back().q[0]) > 1e-3);
}

TEST_CASE("flow integration guards") {
    const PolySymbol h = oscillator_symbol(1);
    ConstraintSet set;
    set.dof = 1;
    set.phis.push_back(PolySymbol(1));
    const PhasePoint x0 = PhasePoint::single(1.0, 0.0);
    CHECK_THROWS_AS(constrained_flow(h, set, x0, {[](double) { return 0.0; }}, 1.0, 0.0),
                    DomainError);
    CHECK_THROWS_AS(constrained_flow(h, set, x0, {}, 1.0, 1e-2), DimensionError);

    // hyperbolic generator blows up past the norm guard
    const PolySymbol pq = PolySymbol::monomial(1, {1}, {1}, 1.0);
    CHECK_THROWS_AS(constrained_flow(pq, set, PhasePoint::single(1.0, 1.0),
                                     {[](double) { return 0.0; }}, 16.0, 1e-2),
                    BlowUpError);
}

TEST_CASE("gauge flow reproduces the closed-form rotation") {
    ConstraintSet set;
    set.dof = 2;
    set.phis.push_back(rotation_symbol(2, 0, 1));

    const PhasePoint x({1.2, -0.8}, {0.9, 1.1});
    CHECK(coeff_distance(set.phis[0], set.phis[0]) == 0.0);

    // identity at zero angle
    const PhasePoint same = gauge_flow(set, {0.0}, x);
    CHECK(std::abs(same.p[0] - x.p[0]) + std::abs(same.q[1] - x.q[1]) <= 1e-14);

    for (double omega : {kPi / 2, 0.8}) {
        const PhasePoint y = gauge_flow(set, {omega}, x, 2048);
        const double c = std::cos(omega), s = std::sin(omega);
        CHECK(std::abs(y.p[0] - (c * x.p[0] + s * x.p[1])) <= 1e-11);
        CHECK(std::abs(y.p[1] - (-s * x.p[0] + c * x.p[1])) <= 1e-11);
        CHECK(std::abs(y.q[0] - (c * x.q[0] + s * x.q[1])) <= 1e-11);
        CHECK(std::abs(y.q[1] - (-s * x.q[0] + c * x.q[1])) <= 1e-11);
    }

    // quarter turn permutes the components
    const PhasePoint z = gauge_flow(set, {kPi / 2}, x, 4096);
    CHECK(z.p[0] == doctest::Approx(x.p[1]).epsilon(1e-10));
    CHECK(z.p[1] == doctest::Approx(-x.p[0]).epsilon(1e-10));
    CHECK(z.q[0] == doctest::Approx(x.q[1]).epsilon(1e-10));
    CHECK(z.q[1] == doctest::Approx(-x.q[0]).epsilon(1e-10));
}

TEST_CASE("momentum constraint generates a pure coordinate shift") {
    std::vector<std::vector<std::vector<double>>> A(
        1, std::vector<std::vector<double>>(1, std::vector<double>(1, 0.0)));
    const ConstraintSet set = make_linear_constraint_set(1, A);  // phi = p_0
    const PhasePoint x = PhasePoint::single(0.7, 0.2);
    const PhasePoint y = gauge_flow(set, {0.9}, x);
    CHECK(y.p[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(y.q[0] == doctest::Approx(0.2 - 0.9).epsilon(1e-12));
}

TEST_CASE("abelian gauge flows compose additively") {
    ConstraintSet set;
    set.dof = 2;
    set.phis.push_back(rotation_symbol(2, 0, 1));
    const PhasePoint x({0.3, -1.0}, {0.8, 0.4});
    const PhasePoint two_step = gauge_flow(set, {0.7}, gauge_flow(set, {0.4}, x, 2048), 2048);
    const PhasePoint direct = gauge_flow(set, {1.1}, x, 2048);
    double d = 0.0;
    for (int j = 0; j < 2; ++j)
        d = std::max({d, std::abs(two_step.p[j] - direct.p[j]),
                      std::abs(two_step.q[j] - direct.q[j])});
    CHECK(d <= 1e-10);
}

TEST_CASE("gauge flow preserves the canonical brackets") {
    ConstraintSet set;
    set.dof = 2;
    set.phis.push_back(rotation_symbol(2, 0, 1));
    const double omega = 0.6, delta = 1e-5;
    const PhasePoint x({0.5, -0.2}, {0.3, 0.9});

    // 4x4 Jacobian of the map z = (p0,p1,q0,q1) -> flowed z
    const auto eval = [&](const PhasePoint& y) {
        return std::array<double, 4>{y.p[0], y.p[1], y.q[0], y.q[1]};
    };
    Eigen::Matrix4d J;
    for (int c = 0; c < 4; ++c) {
        PhasePoint plus = x, minus = x;
        double* pp = (c < 2) ? &plus.p[c] : &plus.q[c - 2];
        double* pm = (c < 2) ? &minus.p[c] : &minus.q[c - 2];
        *pp += delta;
        *pm -= delta;
        const auto fp = eval(gauge_flow(set, {omega}, plus, 1024));
        const auto fm = eval(gauge_flow(set, {omega}, minus, 1024));
        for (int r = 0; r < 4; ++r) J(r, c) = (fp[r] - fm[r]) / (2 * delta);
    }
    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();  // {z_i, z_j} in this ordering
    S(0, 2) = -1;
    S(1, 3) = -1;
    S(2, 0) = 1;
    S(3, 1) = 1;
    CHECK((J * S * J.transpose() - S).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("gauge flow rejects constraints nonlinear in the momenta") {
    ConstraintSet set;
    set.dof = 1;
    set.phis.push_back(PolySymbol::monomial(1, {2}, {0}, 1.0));  // p^2
    CHECK_THROWS_AS(gauge_flow(set, {0.3}, PhasePoint::single(1.0, 0.0)), DomainError);

    ConstraintSet rot;
    rot.dof = 2;
    rot.phis.push_back(rotation_symbol(2, 0, 1));
    CHECK_THROWS_AS(gauge_flow(rot, {0.3, 0.1}, PhasePoint({1, 0}, {0, 1})), DimensionError);
}

TEST_CASE("action-angle chart forward, inverse and generators") {
    const auto aa = to_action_angle(1.0, 0.0);
    CHECK(aa.r == doctest::Approx(0.5));
    CHECK(aa.s == doctest::Approx(0.0));

    // round trips away from the origin
    for (double p : {1.0, -0.7}) {
        for (double q : {0.4, -1.3}) {
            const auto c = to_action_angle(p, q);
            double pb, qb;
            from_action_angle(c.r, c.s, pb, qb);
            CHECK(std::abs(pb - p) <= 1e-12);
            CHECK(std::abs(qb - q) <= 1e-12);
        }
    }

    CHECK(generating_term_G(0.8, kPi / 4) == doctest::Approx(0.4));

    // F(q,s) = -G(r,s) when (p,q) and (r,s) label the same point
    const double r = 0.9, s = 1.1;
    double p, q;
    from_action_angle(r, s, p, q);
    CHECK(generating_term_F(q, s) == doctest::Approx(-generating_term_G(r, s)).epsilon(1e-12));

    CHECK_THROWS_AS(to_action_angle(0.0, 0.0), DomainError);
    double dp, dq;
    CHECK_THROWS_AS(from_action_angle(-0.1, 0.0, dp, dq), DomainError);
    CHECK_THROWS_AS(generating_term_F(1.0, 0.0), DomainError);  // cot singular
}

TEST_CASE("trajectory csv export writes one row per node") {
    const PolySymbol h = oscillator_symbol(1);
    ConstraintSet set;
    set.dof = 1;
    set.phis.push_back(PolySymbol(1));
    const auto traj = constrained_flow(h, set, PhasePoint::single(1.0, 0.0),
                                       {[](double) { return 0.0; }}, 0.1, 1e-2);
    const std::string path = "symbol_calc_traj_test.csv";
    write_trajectory_csv(traj, path, "unit test artifact");

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::size_t rows = 0, comments = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) {
            ++comments;
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            CHECK(line.find("t") == 0);
            continue;
        }
        ++rows;
    }
    CHECK(comments >= 1);
    CHECK(rows == traj.times.size());
    std::remove(path.c_str());
}
