#include "cfq/constraints.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <sstream>

namespace cfq {

ConstraintSet make_linear_constraint_set(
    int dof, const std::vector<std::vector<std::vector<double>>>& A) {
    const int K = static_cast<int>(A.size());
    if (K < 1 || K > dof)
        throw DomainError("make_linear_constraint_set: need 1 <= K <= dof constraints");
    ConstraintSet set;
    set.dof = dof;
    for (int a = 0; a < K; ++a) {
        if (static_cast<int>(A[a].size()) != dof)
            throw DimensionError("make_linear_constraint_set: A[a] must be dof x dof");
        PolySymbol phi = PolySymbol::momentum(dof, a);
        for (int b = 0; b < dof; ++b) {
            if (static_cast<int>(A[a][b].size()) != dof)
                throw DimensionError("make_linear_constraint_set: A[a] must be dof x dof");
            for (int c = 0; c < dof; ++c) {
                if (std::abs(A[a][b][c] + A[a][c][b]) > 1e-14)
                    throw DomainError(
                        "make_linear_constraint_set: coupling must be antisymmetric in (b,c)");
                if (A[a][b][c] != 0.0)
                    phi = phi + A[a][b][c] * (PolySymbol::position(dof, b) *
                                              PolySymbol::momentum(dof, c));
            }
        }
        set.phis.push_back(phi);
    }
    return set;
}

namespace {

// Least-squares expansion of `target` over the constraint polynomials.
// Returns coefficients, the residual max-norm, and whether the design matrix
// is rank deficient (non-unique expansion).
struct Expansion {
    Eigen::VectorXd coeffs;
    double residual = 0.0;
    bool ambiguous = false;
};

Expansion expand_over(const std::vector<PolySymbol>& phis, const PolySymbol& target) {
    std::set<PolySymbol::Key> monomials;
    for (const auto& phi : phis)
        for (const auto& [k, c] : phi.terms()) monomials.insert(k);
    for (const auto& [k, c] : target.terms()) monomials.insert(k);

    const int rows = static_cast<int>(monomials.size());
    const int cols = static_cast<int>(phis.size());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(std::max(rows, 1), cols);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(std::max(rows, 1));
    int r = 0;
    for (const auto& k : monomials) {
        for (int c = 0; c < cols; ++c) {
            auto it = phis[c].terms().find(k);
            if (it != phis[c].terms().end()) M(r, c) = it->second;
        }
        auto it = target.terms().find(k);
        if (it != target.terms().end()) rhs(r) = it->second;
        ++r;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    Expansion e;
    e.coeffs = qr.solve(rhs);
    e.residual = (M * e.coeffs - rhs).cwiseAbs().maxCoeff();
    e.ambiguous = qr.rank() < cols;
    return e;
}

}  // namespace

ClassificationReport classify_constraints(const ConstraintSet& set, const PolySymbol& h,
                                          double residual_tol) {
    const int K = set.count();
    if (K == 0) throw DomainError("classify_constraints: empty constraint set");

    ClassificationReport rep;
    rep.structure.assign(K, std::vector<std::vector<double>>(K, std::vector<double>(K, 0.0)));
    rep.h_mixing.assign(K, std::vector<double>(K, 0.0));

    std::vector<bool> offending(K, false);

    for (int a = 0; a < K; ++a) {
        for (int b = a + 1; b < K; ++b) {
            const PolySymbol bracket = poisson_bracket(set.phis[a], set.phis[b]);
            Expansion e = expand_over(set.phis, bracket);
            rep.ambiguous_expansion = rep.ambiguous_expansion || e.ambiguous;
            rep.max_closure_residual = std::max(rep.max_closure_residual, e.residual);
            if (e.residual <= residual_tol) {
                for (int c = 0; c < K; ++c) {
                    rep.structure[a][b][c] = e.coeffs(c);
                    rep.structure[b][a][c] = -e.coeffs(c);
                }
            } else {
                offending[a] = offending[b] = true;
                std::ostringstream os;
                os << "{phi_" << (a + 1) << ", phi_" << (b + 1) << "} residual " << e.residual;
                rep.offending_brackets.push_back(os.str());
            }
        }
        const PolySymbol hb = poisson_bracket(set.phis[a], h);
        Expansion e = expand_over(set.phis, hb);
        rep.ambiguous_expansion = rep.ambiguous_expansion || e.ambiguous;
        rep.max_closure_residual = std::max(rep.max_closure_residual, e.residual);
        if (e.residual <= residual_tol) {
            for (int b = 0; b < K; ++b) rep.h_mixing[a][b] = e.coeffs(b);
        } else {
            offending[a] = true;
            std::ostringstream os;
            os << "{phi_" << (a + 1) << ", h} residual " << e.residual;
            rep.offending_brackets.push_back(os.str());
        }
    }

    const int bad = static_cast<int>(std::count(offending.begin(), offending.end(), true));
    rep.cls = (bad == 0)  ? ConstraintClass::FirstClass
              : (bad == K) ? ConstraintClass::SecondClass
                           : ConstraintClass::Mixed;
    return rep;
}

}  // namespace cfq
