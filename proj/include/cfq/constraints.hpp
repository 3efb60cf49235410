// Classical constraint sets and their first/second-class classification.
// A bracket {phi_a, phi_b} (or {phi_a, h}) "closes" when it equals a
// constant-coefficient combination of the constraints themselves, detected by
// least-squares expansion over the constraint polynomials.
#pragma once

#include "cfq/poly_symbol.hpp"

namespace cfq {

struct ConstraintSet {
    int dof = 0;
    std::vector<PolySymbol> phis;

    int count() const { return static_cast<int>(phis.size()); }
};

// Rotation-plus-shift constraints phi_a = p_a + sum_{b,c} A[a][b][c] q^b p_c
// with A[a] antisymmetric in (b,c).
ConstraintSet make_linear_constraint_set(int dof,
                                         const std::vector<std::vector<std::vector<double>>>& A);

enum class ConstraintClass { FirstClass, SecondClass, Mixed };

struct ClassificationReport {
    ConstraintClass cls = ConstraintClass::FirstClass;
    // {phi_a, phi_b} = sum_c structure[a][b][c] phi_c   (when it closes)
    std::vector<std::vector<std::vector<double>>> structure;
    // {phi_a, h} = sum_b h_mixing[a][b] phi_b           (when it closes)
    std::vector<std::vector<double>> h_mixing;
    double max_closure_residual = 0.0;
    std::vector<std::string> offending_brackets;
    bool ambiguous_expansion = false;  // the phi's are linearly dependent

    bool first_class() const { return cls == ConstraintClass::FirstClass; }
};

ClassificationReport classify_constraints(const ConstraintSet& set, const PolySymbol& h,
                                          double residual_tol = 1e-10);

}  // namespace cfq
