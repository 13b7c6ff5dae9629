#include "mld/polynomial.hpp"

#include <algorithm>

namespace mld {

Poly Poly::constant(int vars, const Rat& c) {
    Poly p(vars);
    p.add_term(Exps(vars, 0), c);
    return p;
}

Poly Poly::variable(int vars, int i) {
    if (i < 0 || i >= vars) fail(ErrorCode::invalid_argument, "variable index out of range");
    Poly p(vars);
    Exps e(vars, 0);
    e[i] = 1;
    p.add_term(e, Rat(1));
    return p;
}

void Poly::add_term(const Exps& e, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool Poly::is_constant() const {
    for (const auto& [e, c] : terms_)
        if (std::any_of(e.begin(), e.end(), [](int x) { return x != 0; })) return false;
    return true;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r.vars_ = std::max(vars_, o.vars_);
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * Rat(-1); }

Poly Poly::operator*(const Poly& o) const {
    if (vars_ != o.vars_) fail(ErrorCode::internal, "polynomial variable count mismatch");
    Poly r(vars_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) {
            Exps e(vars_);
            for (int i = 0; i < vars_; ++i) e[i] = a[i] + b[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Poly Poly::operator*(const Rat& c) const {
    Poly r(vars_);
    for (const auto& [e, x] : terms_) r.add_term(e, x * c);
    return r;
}

Poly Poly::derivative(int i) const {
    Poly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        Exps f = e;
        --f[i];
        r.add_term(f, c * e[i]);
    }
    return r;
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        bool constant = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
        Rat a = abs(c);
        s += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        first = false;
        std::string mono;
        for (int i = 0; i < vars_; ++i) {
            if (!e[i]) continue;
            if (!mono.empty()) mono += "*";
            mono += names.size() > static_cast<std::size_t>(i) ? names[i] : "x" + std::to_string(i);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (constant) s += rat_str(a);
        else if (a == 1) s += mono;
        else s += rat_str(a) + "*" + mono;
    }
    return s;
}

Poly poly_determinant(const std::vector<std::vector<Poly>>& m) {
    const std::size_t n = m.size();
    if (n == 0) fail(ErrorCode::invalid_argument, "empty matrix");
    if (n == 1) return m[0][0];
    Poly r(m[0][0].vars());
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        std::vector<std::vector<Poly>> sub;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Poly> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(m[i][j]);
            sub.push_back(std::move(row));
        }
        Poly t = m[0][c] * poly_determinant(sub);
        r = (c % 2 == 0) ? r + t : r - t;
    }
    return r;
}

}  // namespace mld
