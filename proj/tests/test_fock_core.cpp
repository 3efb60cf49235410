// Truncated Fock space, ladder operators, coherent states, overlaps,
// unitary evolution and the JSON matrix dump format.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>

#include "cfq/coherent.hpp"
#include "cfq/fock_operator.hpp"
#include "cfq/linalg.hpp"
#include "cfq/matrix_io.hpp"
#include "cfq/state_vector.hpp"

using namespace cfq;

TEST_CASE("space dimensions and index round trip") {
    const FockSpace s(4, 3);
    CHECK(s.cutoff() == 4);
    CHECK(s.dof() == 3);
    CHECK(s.dim() == 64);

    // last mode varies fastest
    CHECK(s.flat_index({0, 0, 1}) == 1);
    CHECK(s.flat_index({0, 1, 0}) == 4);
    CHECK(s.flat_index({1, 0, 0}) == 16);
    CHECK(s.flat_index({3, 3, 3}) == 63);

    for (long f = 0; f < s.dim(); ++f) {
        const auto occ = s.occupation(f);
        CHECK(s.flat_index(occ) == f);
        int tot = 0;
        for (int n : occ) tot += n;
        CHECK(s.total_occupation(f) == tot);
    }
}

TEST_CASE("low block collects total occupation at most half the cutoff") {
    const FockSpace s(6, 2);
    const auto idx = s.low_block_indices();
    for (long f : idx) CHECK(s.total_occupation(f) <= 3);
    long count = 0;
    for (long f = 0; f < s.dim(); ++f)
        if (s.total_occupation(f) <= 3) ++count;
    CHECK(static_cast<long>(idx.size()) == count);
}

TEST_CASE("space construction guards") {
    CHECK_THROWS_AS(FockSpace(1, 1), DomainError);
    CHECK_THROWS_AS(FockSpace(4, 0), DomainError);
    CHECK_THROWS_AS(FockSpace(64, 3), CapacityError);  // 64^3 over the ceiling
    CHECK_NOTHROW(FockSpace(128, 2));                  // exactly at the ceiling
}

TEST_CASE("ladder matrix entries and canonical commutator") {
    const int D = 16;
    const Mat a = ladder_matrix(D);
    for (int n = 1; n < D; ++n)
        CHECK(std::abs(a(n - 1, n) - std::sqrt(double(n))) <= 1e-15);
    CHECK(a.cwiseAbs().sum() == doctest::Approx(a.diagonal(1).cwiseAbs().sum()));

    const FockSpace s(D, 1);
    const auto pairs = canonical_ops(s);
    const Mat comm = pairs[0].Q.commutator(pairs[0].P).matrix();
    // truncation artifact confined to the top row/column
    for (int n = 0; n < D - 1; ++n)
        for (int m = 0; m < D - 1; ++m)
            CHECK(std::abs(comm(n, m) - (n == m ? cxd(0, 1) : cxd(0, 0))) <= 1e-14);
    CHECK(std::abs(comm(D - 1, D - 1) - cxd(0, 1)) > 1.0);  // top corner is corrupted
}

TEST_CASE("annihilator kills the vacuum exactly") {
    const FockSpace s(32, 1);
    const auto pairs = canonical_ops(s);
    // a = (Q + iP)/sqrt(2)
    const Mat annihilate =
        (pairs[0].Q.matrix() + cxd(0, 1) * pairs[0].P.matrix()) / std::sqrt(2.0);
    const Vec v = vacuum(s).vector();
    CHECK((annihilate * v).norm() == 0.0);
}

TEST_CASE("embedding acts on its own mode only") {
    const FockSpace s(3, 2);
    const Mat n1 = ladder_matrix(3).adjoint() * ladder_matrix(3);
    const FockOperator N0 = embed_mode_operator(s, n1, 0);
    const FockOperator N1 = embed_mode_operator(s, n1, 1);
    for (long f = 0; f < s.dim(); ++f) {
        const auto occ = s.occupation(f);
        CHECK(std::abs(N0.matrix()(f, f) - double(occ[0])) <= 1e-14);
        CHECK(std::abs(N1.matrix()(f, f) - double(occ[1])) <= 1e-14);
    }
    CHECK_THROWS_AS(embed_mode_operator(s, n1, 2), DomainError);
}

TEST_CASE("coherent state production path matches the closed-form amplitudes") {
    const FockSpace s(64, 1);
    const PhasePoint x = PhasePoint::single(0.9, -0.7);
    Warnings w;
    const StateVector built = coherent_state(s, x, {}, &w);
    const StateVector exact = coherent_state_closed_form(s, x);
    CHECK((built.vector() - exact.vector()).norm() <= 1e-10);
    CHECK(w.messages.empty());

    // two modes: tensor ordering must agree too
    const FockSpace s2(16, 2);
    const PhasePoint x2({0.5, -0.3}, {0.2, 0.8});
    const StateVector built2 = coherent_state(s2, x2, {}, &w);
    const StateVector exact2 = coherent_state_closed_form(s2, x2);
    CHECK((built2.vector() - exact2.vector()).norm() <= 1e-10);
}

TEST_CASE("coherent state at the origin is the vacuum") {
    const FockSpace s(16, 1);
    const StateVector cf = coherent_state_closed_form(s, PhasePoint::single(0, 0));
    CHECK((cf.vector() - vacuum(s).vector()).norm() == 0.0);  // exact
    const StateVector prod = coherent_state(s, PhasePoint::single(0, 0));
    CHECK((prod.vector() - vacuum(s).vector()).norm() <= 1e-12);
}

TEST_CASE("norm defect small in guard, warning outside") {
    const FockSpace s(64, 1);
    CHECK(coherent_norm_defect(s, PhasePoint::single(1.5, 1.0)) <= 1e-10);

    Warnings w;
    const FockSpace tiny(4, 1);
    coherent_state(tiny, PhasePoint::single(2.0, 1.5), {}, &w);  // guard needs 12.5
    CHECK(w.contains("below guard"));
}

TEST_CASE("overlap basics") {
    const FockSpace s(32, 1);
    const StateVector c = coherent_state(s, PhasePoint::single(0.8, 0.3));
    CHECK(std::abs(overlap(c, c) - cxd(c.norm() * c.norm(), 0)) <= 1e-14);

    // projection onto the vacuum is the first amplitude
    const cxd first = c.vector()(0);
    CHECK(std::abs(overlap(vacuum(s), c) - first) <= 1e-15);

    // distinct unit vectors: strict Cauchy-Schwarz
    const StateVector d = coherent_state(s, PhasePoint::single(-0.4, 1.1));
    CHECK(std::abs(overlap(c, d)) < 1.0);

    const FockSpace other(16, 1);
    CHECK_THROWS_AS(overlap(c, vacuum(other)), DimensionError);
}

TEST_CASE("overlap is stable under cutoff doubling for in-guard labels") {
    const PhasePoint x = PhasePoint::single(0.8, 0.3);
    const PhasePoint y = PhasePoint::single(-0.4, 1.1);
    const cxd at32 = overlap(coherent_state(FockSpace(32, 1), x),
                             coherent_state(FockSpace(32, 1), y));
    const cxd at64 = overlap(coherent_state(FockSpace(64, 1), x),
                             coherent_state(FockSpace(64, 1), y));
    CHECK(std::abs(at32 - at64) <= 1e-8);
}

TEST_CASE("evolution is unitary and trivial at T = 0") {
    const FockSpace s(32, 1);
    const auto pairs = canonical_ops(s);
    const FockOperator H = pairs[0].Q * pairs[0].Q + pairs[0].P * pairs[0].P;
    const StateVector c = coherent_state(s, PhasePoint::single(1.0, -0.5));

    const StateVector same = evolve(H, 0.0, c);
    CHECK((same.vector() - c.vector()).norm() <= 1e-14);

    const StateVector moved = evolve(H, 0.7, c);
    CHECK(std::abs(moved.norm() - c.norm()) <= 1e-10);

    // non-Hermitian generators are rejected
    Mat bad = H.matrix();
    bad(0, 1) += cxd(0.0, 0.3);
    CHECK_THROWS_AS(evolve(FockOperator(s, bad), 0.1, c), HermiticityError);
}

TEST_CASE("diagonal generator applies per-component phases") {
    const FockSpace s(8, 1);
    Mat diag = Mat::Zero(8, 8);
    for (int n = 0; n < 8; ++n) diag(n, n) = double(n);
    Vec v = Vec::Constant(8, cxd(1.0 / std::sqrt(8.0), 0));
    const StateVector out = evolve(FockOperator(s, diag), 0.3, StateVector(s, v));
    for (int n = 0; n < 8; ++n) {
        const cxd expect = std::polar(1.0 / std::sqrt(8.0), -0.3 * n);
        CHECK(std::abs(out.vector()(n) - expect) <= 1e-13);
    }
}

TEST_CASE("oscillator hamiltonian (P^2+Q^2+1)/2 has vacuum eigenvalue one") {
    const FockSpace s(64, 1);
    const auto pairs = canonical_ops(s);
    const FockOperator H =
        0.5 * (pairs[0].P * pairs[0].P + pairs[0].Q * pairs[0].Q + identity_operator(s));
    const Vec v = vacuum(s).vector();

    CHECK((H.matrix() * v - v).norm() <= 1e-12);  // H|0> = 1 |0>

    const double T = 1.3;
    const StateVector evolved = evolve(H, T, vacuum(s));
    const Vec expect = std::polar(1.0, -T) * v;
    CHECK((evolved.vector() - expect).norm() <= 1e-10);
}

TEST_CASE("hermiticity defect measures the anti-Hermitian part") {
    const FockSpace s(8, 1);
    const auto pairs = canonical_ops(s);
    CHECK(pairs[0].Q.hermiticity_defect() <= 1e-15);
    CHECK(pairs[0].P.hermiticity_defect() <= 1e-15);
    Mat skew = Mat::Zero(8, 8);
    skew(2, 5) = cxd(0, 0.25);
    skew(5, 2) = cxd(0, 0.25);  // anti-Hermitian pair
    CHECK(FockOperator(s, skew).hermiticity_defect() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("operator arithmetic rejects mismatched spaces") {
    const FockSpace a(8, 1), b(16, 1);
    CHECK_THROWS_AS(identity_operator(a) + identity_operator(b), DimensionError);
    CHECK_THROWS_AS(apply(identity_operator(a), vacuum(b)), DimensionError);
}

TEST_CASE("json dump round-trips operators and states") {
    const FockSpace s(6, 2);
    const auto pairs = canonical_ops(s);
    const FockOperator A = pairs[0].Q * pairs[1].P;
    const FockOperator back = operator_from_json(operator_to_json(A));
    CHECK(back.space() == s);
    CHECK((back.matrix() - A.matrix()).norm() == 0.0);

    const StateVector c = coherent_state(s, PhasePoint({0.3, -0.2}, {0.1, 0.5}));
    const StateVector sback = state_from_json(state_to_json(c));
    CHECK((sback.vector() - c.vector()).norm() == 0.0);

    nlohmann::json wrong = state_to_json(c);
    wrong["kind"] = "operator";
    CHECK_THROWS_AS(operator_from_json(wrong), ConfigError);
}

TEST_CASE("g17 formatting is shortest-exact") {
    CHECK(format_g17(0.5) == "0.5");
    CHECK(format_g17(1.0 / 3.0) == "0.33333333333333331");
    const double v = 0.1 + 0.2;
    CHECK(std::stod(format_g17(v)) == v);
}
