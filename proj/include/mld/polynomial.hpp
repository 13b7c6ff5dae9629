#pragma once

#include "mld/common.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace mld {

// Sparse polynomial with rational coefficients in a fixed number of variables.
class Poly {
public:
    using Exps = std::vector<int>;

    Poly() = default;
    explicit Poly(int vars) : vars_(vars) {}
    static Poly constant(int vars, const Rat& c);
    static Poly variable(int vars, int i);

    int vars() const { return vars_; }
    const std::map<Exps, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    int degree() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rat& c) const;
    Poly derivative(int i) const;
    bool operator==(const Poly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    void add_term(const Exps& e, const Rat& c);
    int vars_ = 0;
    std::map<Exps, Rat> terms_;
};

Poly poly_determinant(const std::vector<std::vector<Poly>>& m);

// Conversion of exact rationals into a floating scalar type.
template <typename R>
R rat_to(const Rat& q) {
    if constexpr (std::is_same_v<R, double>) {
        return q.get_d();
    } else {
        return R(q.get_num().get_str()) / R(q.get_den().get_str());
    }
}

// Polynomial compiled for fast evaluation over a complex scalar C with real type R.
template <typename C, typename R>
struct CompiledPoly {
    std::vector<std::vector<int>> exps;
    std::vector<C> coefs;

    CompiledPoly() = default;
    explicit CompiledPoly(const Poly& p) {
        for (const auto& [e, c] : p.terms()) {
            exps.push_back(e);
            coefs.push_back(C(rat_to<R>(c)));
        }
    }

    // pw[j][e] = x_j^e
    C eval(const std::vector<std::vector<C>>& pw) const {
        C s(0);
        for (std::size_t t = 0; t < coefs.size(); ++t) {
            C m = coefs[t];
            for (std::size_t j = 0; j < exps[t].size(); ++j)
                if (exps[t][j]) m *= pw[j][exps[t][j]];
            s += m;
        }
        return s;
    }

    // Sum of the absolute values of the terms.
    R abs_eval(const std::vector<std::vector<C>>& pw) const {
        using std::abs;
        R s(0);
        for (std::size_t t = 0; t < coefs.size(); ++t) {
            C m = coefs[t];
            for (std::size_t j = 0; j < exps[t].size(); ++j)
                if (exps[t][j]) m *= pw[j][exps[t][j]];
            s += abs(m);
        }
        return s;
    }
};

}  // namespace mld
