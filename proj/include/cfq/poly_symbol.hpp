// Sparse real polynomials on flat phase space (variables p_1..p_N, q^1..q^N)
// with exact rational-free coefficient arithmetic on doubles, partial
// derivatives, evaluation and the canonical Poisson bracket
//   {f,g} = sum_j  df/dq^j dg/dp_j - df/dp_j dg/dq^j .
#pragma once

#include <map>

#include "cfq/common.hpp"

namespace cfq {

class PolySymbol {
  public:
    // Exponent key: p exponents for all modes, then q exponents.
    using Key = std::vector<int>;
    using TermMap = std::map<Key, double>;

    static constexpr int kDefaultMaxDegree = 8;

    explicit PolySymbol(int dof = 1, int max_degree = kDefaultMaxDegree);

    static PolySymbol constant(int dof, double c, int max_degree = kDefaultMaxDegree);
    // single monomial  coeff * prod p_j^{pexp_j} q^j^{qexp_j}
    static PolySymbol monomial(int dof, const std::vector<int>& pexp,
                               const std::vector<int>& qexp, double coeff,
                               int max_degree = kDefaultMaxDegree);
    static PolySymbol momentum(int dof, int j, int max_degree = kDefaultMaxDegree);
    static PolySymbol position(int dof, int j, int max_degree = kDefaultMaxDegree);

    int dof() const { return dof_; }
    int max_degree() const { return max_degree_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;

    double coefficient(const std::vector<int>& pexp, const std::vector<int>& qexp) const;

    PolySymbol operator+(const PolySymbol& o) const;
    PolySymbol operator-(const PolySymbol& o) const;
    PolySymbol operator*(const PolySymbol& o) const;
    PolySymbol scaled(double c) const;
    friend PolySymbol operator*(double c, const PolySymbol& s) { return s.scaled(c); }

    PolySymbol d_dp(int j) const;
    PolySymbol d_dq(int j) const;

    double evaluate(const PhasePoint& x) const;

    double max_abs_coeff() const;

    // stable textual form, useful in reports and tests
    std::string to_string() const;

  private:
    void insert_term(const Key& k, double c);
    void check_degree(const char* who) const;

    int dof_;
    int max_degree_;
    TermMap terms_;
};

PolySymbol poisson_bracket(const PolySymbol& f, const PolySymbol& g);

// Convenience builders used throughout tests and experiments.
PolySymbol oscillator_symbol(int dof);             // sum_j (p_j^2 + q_j^2)/2
PolySymbol rotation_symbol(int dof, int a, int b); // q^a p_b - q^b p_a

}  // namespace cfq
