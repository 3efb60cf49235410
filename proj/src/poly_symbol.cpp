#include "cfq/poly_symbol.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace cfq {

PolySymbol::PolySymbol(int dof, int max_degree) : dof_(dof), max_degree_(max_degree) {
    if (dof < 1) throw DomainError("PolySymbol: dof must be >= 1");
    if (max_degree < 0) throw DomainError("PolySymbol: max_degree must be >= 0");
}

PolySymbol PolySymbol::constant(int dof, double c, int max_degree) {
    PolySymbol s(dof, max_degree);
    if (c != 0.0) s.terms_[Key(2 * dof, 0)] = c;
    return s;
}

PolySymbol PolySymbol::monomial(int dof, const std::vector<int>& pexp,
                                const std::vector<int>& qexp, double coeff, int max_degree) {
    if (static_cast<int>(pexp.size()) != dof || static_cast<int>(qexp.size()) != dof)
        throw DimensionError("PolySymbol::monomial: exponent vectors must have length dof");
    PolySymbol s(dof, max_degree);
    Key k;
    k.reserve(2 * dof);
    k.insert(k.end(), pexp.begin(), pexp.end());
    k.insert(k.end(), qexp.begin(), qexp.end());
    for (int e : k)
        if (e < 0) throw DomainError("PolySymbol::monomial: negative exponent");
    if (coeff != 0.0) s.terms_[k] = coeff;
    s.check_degree("monomial");
    return s;
}

PolySymbol PolySymbol::momentum(int dof, int j, int max_degree) {
    std::vector<int> pe(dof, 0), qe(dof, 0);
    pe.at(j) = 1;
    return monomial(dof, pe, qe, 1.0, max_degree);
}

PolySymbol PolySymbol::position(int dof, int j, int max_degree) {
    std::vector<int> pe(dof, 0), qe(dof, 0);
    qe.at(j) = 1;
    return monomial(dof, pe, qe, 1.0, max_degree);
}

int PolySymbol::degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_)
        d = std::max(d, std::accumulate(k.begin(), k.end(), 0));
    return d;
}

double PolySymbol::coefficient(const std::vector<int>& pexp,
                               const std::vector<int>& qexp) const {
    Key k;
    k.insert(k.end(), pexp.begin(), pexp.end());
    k.insert(k.end(), qexp.begin(), qexp.end());
    auto it = terms_.find(k);
    return it == terms_.end() ? 0.0 : it->second;
}

void PolySymbol::insert_term(const Key& k, double c) {
    if (c == 0.0) return;
    auto [it, fresh] = terms_.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

void PolySymbol::check_degree(const char* who) const {
    if (degree() > max_degree_)
        throw DegreeOverflowError(std::string("PolySymbol::") + who + ": total degree " +
                                  std::to_string(degree()) + " exceeds cap " +
                                  std::to_string(max_degree_));
}

PolySymbol PolySymbol::operator+(const PolySymbol& o) const {
    if (dof_ != o.dof_) throw DimensionError("PolySymbol: mixed dof in +");
    PolySymbol r(dof_, std::max(max_degree_, o.max_degree_));
    r.terms_ = terms_;
    for (const auto& [k, c] : o.terms_) r.insert_term(k, c);
    return r;
}

PolySymbol PolySymbol::operator-(const PolySymbol& o) const {
    return *this + o.scaled(-1.0);
}

PolySymbol PolySymbol::operator*(const PolySymbol& o) const {
    if (dof_ != o.dof_) throw DimensionError("PolySymbol: mixed dof in *");
    PolySymbol r(dof_, std::max(max_degree_, o.max_degree_));
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_) {
            Key k(ka.size());
            for (std::size_t i = 0; i < ka.size(); ++i) k[i] = ka[i] + kb[i];
            r.insert_term(k, ca * cb);
        }
    r.check_degree("operator*");
    return r;
}

PolySymbol PolySymbol::scaled(double c) const {
    PolySymbol r(dof_, max_degree_);
    if (c == 0.0) return r;
    for (const auto& [k, v] : terms_) r.terms_[k] = c * v;
    return r;
}

PolySymbol PolySymbol::d_dp(int j) const {
    if (j < 0 || j >= dof_) throw DomainError("d_dp: mode out of range");
    PolySymbol r(dof_, max_degree_);
    for (const auto& [k, c] : terms_) {
        if (k[j] == 0) continue;
        Key kd = k;
        kd[j] -= 1;
        r.insert_term(kd, c * k[j]);
    }
    return r;
}

PolySymbol PolySymbol::d_dq(int j) const {
    if (j < 0 || j >= dof_) throw DomainError("d_dq: mode out of range");
    PolySymbol r(dof_, max_degree_);
    for (const auto& [k, c] : terms_) {
        if (k[dof_ + j] == 0) continue;
        Key kd = k;
        kd[dof_ + j] -= 1;
        r.insert_term(kd, c * k[dof_ + j]);
    }
    return r;
}

double PolySymbol::evaluate(const PhasePoint& x) const {
    if (x.dof() != dof_) throw DimensionError("PolySymbol::evaluate: wrong dof");
    double total = 0.0;
    for (const auto& [k, c] : terms_) {
        double t = c;
        for (int j = 0; j < dof_; ++j) {
            for (int e = 0; e < k[j]; ++e) t *= x.p[j];
            for (int e = 0; e < k[dof_ + j]; ++e) t *= x.q[j];
        }
        total += t;
    }
    return total;
}

double PolySymbol::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

std::string PolySymbol::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (int j = 0; j < dof_; ++j) {
            if (k[j] > 0) os << " p" << (j + 1) << (k[j] > 1 ? "^" + std::to_string(k[j]) : "");
            if (k[dof_ + j] > 0)
                os << " q" << (j + 1) << (k[dof_ + j] > 1 ? "^" + std::to_string(k[dof_ + j]) : "");
        }
    }
    return os.str();
}

PolySymbol poisson_bracket(const PolySymbol& f, const PolySymbol& g) {
    if (f.dof() != g.dof()) throw DimensionError("poisson_bracket: mixed dof");
    PolySymbol r(f.dof(), std::max(f.max_degree(), g.max_degree()));
    for (int j = 0; j < f.dof(); ++j) {
        r = r + f.d_dq(j) * g.d_dp(j) - f.d_dp(j) * g.d_dq(j);
    }
    return r;
}

PolySymbol oscillator_symbol(int dof) {
    PolySymbol h(dof);
    for (int j = 0; j < dof; ++j) {
        h = h + 0.5 * (PolySymbol::momentum(dof, j) * PolySymbol::momentum(dof, j)) +
            0.5 * (PolySymbol::position(dof, j) * PolySymbol::position(dof, j));
    }
    return h;
}

PolySymbol rotation_symbol(int dof, int a, int b) {
    return PolySymbol::position(dof, a) * PolySymbol::momentum(dof, b) -
           PolySymbol::position(dof, b) * PolySymbol::momentum(dof, a);
}

}  // namespace cfq
