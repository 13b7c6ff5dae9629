#include "mld/linalg.hpp"

namespace mld {

std::vector<int> rref(RatMat& a) {
    std::vector<int> piv;
    if (a.empty()) return piv;
    const std::size_t cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        Rat inv = 1 / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        piv.push_back(static_cast<int>(c));
        ++r;
    }
    a.resize(r);
    return piv;
}

int matrix_rank(RatMat a) { return static_cast<int>(rref(a).size()); }

RatMat nullspace(const RatMat& a, std::size_t ncols) {
    RatMat r = a;
    auto piv = rref(r);
    std::vector<char> is_piv(ncols, 0);
    for (int p : piv) is_piv[p] = 1;
    RatMat out;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_piv[f]) continue;
        RatVec v(ncols, Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r[i][f];
        out.push_back(std::move(v));
    }
    return out;
}

RatMat transpose(const RatMat& a) {
    if (a.empty()) return {};
    RatMat t(a[0].size(), RatVec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

}  // namespace mld
