#include "persym/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace persym {

int MultiIndex::inf_norm() const {
    int m = 0;
    for (int v : k) m = std::max(m, std::abs(v));
    return m;
}

bool MultiIndex::is_zero() const {
    return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
}

std::vector<double> PhasePoint::flat() const {
    std::vector<double> z(x);
    z.insert(z.end(), w.begin(), w.end());
    return z;
}

PhasePoint PhasePoint::from_flat(std::span<const double> z) {
    auto [a, b] = split_components(z);
    return {std::move(a), std::move(b)};
}

namespace {

// LU factorization with partial pivoting; returns false on (near) singularity.
bool lu_factor(std::vector<double>& a, int n, std::vector<int>& piv, double& det) {
    det = 1.0;
    piv.resize(static_cast<std::size_t>(n));
    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::abs(a[static_cast<std::size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a[static_cast<std::size_t>(r) * n + col]);
            if (v > best) { best = v; p = r; }
        }
        if (best == 0.0) return false;
        piv[static_cast<std::size_t>(col)] = p;
        if (p != col) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(p) * n + j],
                          a[static_cast<std::size_t>(col) * n + j]);
            det = -det;
        }
        det *= a[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[static_cast<std::size_t>(r) * n + col] /
                       a[static_cast<std::size_t>(col) * n + col];
            a[static_cast<std::size_t>(r) * n + col] = f;
            for (int j = col + 1; j < n; ++j)
                a[static_cast<std::size_t>(r) * n + j] -=
                    f * a[static_cast<std::size_t>(col) * n + j];
        }
    }
    return true;
}

void lu_solve(const std::vector<double>& lu, int n, const std::vector<int>& piv,
              std::vector<double>& b) {
    for (int i = 0; i < n; ++i)
        if (piv[static_cast<std::size_t>(i)] != i)
            std::swap(b[static_cast<std::size_t>(i)],
                      b[static_cast<std::size_t>(piv[static_cast<std::size_t>(i)])]);
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j)
            b[static_cast<std::size_t>(i)] -= lu[static_cast<std::size_t>(i) * n + j] *
                                              b[static_cast<std::size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j)
            b[static_cast<std::size_t>(i)] -= lu[static_cast<std::size_t>(i) * n + j] *
                                              b[static_cast<std::size_t>(j)];
        b[static_cast<std::size_t>(i)] /= lu[static_cast<std::size_t>(i) * n + i];
    }
}

double one_norm(const std::vector<double>& a, int n) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i)
            col += std::abs(a[static_cast<std::size_t>(i) * n + j]);
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

PeriodMatrix::PeriodMatrix(int n, std::vector<double> row_major_entries)
    : n_(n), entries_(std::move(row_major_entries)) {
    if (n < 1) throw std::invalid_argument("PeriodMatrix: dimension must be positive");
    if (entries_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw std::invalid_argument("PeriodMatrix: entry count != n*n");
    if (!all_finite(entries_)) throw std::invalid_argument("PeriodMatrix: non-finite entry");

    std::vector<double> lu = entries_;
    std::vector<int> piv;
    if (!lu_factor(lu, n_, piv, det_) || det_ == 0.0 || !std::isfinite(det_))
        throw std::invalid_argument("PeriodMatrix: matrix is singular");

    // inv(L), then transpose into linv_t_.
    std::vector<double> inv(entries_.size());
    std::vector<double> col(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[static_cast<std::size_t>(j)] = 1.0;
        lu_solve(lu, n_, piv, col);
        for (int i = 0; i < n_; ++i)
            inv[static_cast<std::size_t>(i) * n_ + j] = col[static_cast<std::size_t>(i)];
    }
    double cond = one_norm(entries_, n_) * one_norm(inv, n_);
    if (!(cond <= 1e12))
        throw std::invalid_argument("PeriodMatrix: condition estimate " + std::to_string(cond) +
                                    " exceeds 1e12");

    linv_t_.resize(entries_.size());
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            linv_t_[idx(i, j)] = inv[idx(j, i)];

    // L (L^{-T})^T = I to 1e-12 entrywise.
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            double s = 0.0;
            for (int m = 0; m < n_; ++m) s += entry(i, m) * linv_t_[idx(j, m)];
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12)
                throw std::invalid_argument("PeriodMatrix: inverse verification failed");
        }
}

PeriodMatrix PeriodMatrix::identity(int n) {
    std::vector<double> e(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = 1.0;
    return PeriodMatrix(n, std::move(e));
}

PeriodMatrix PeriodMatrix::diagonal(std::span<const double> diag) {
    int n = static_cast<int>(diag.size());
    std::vector<double> e(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i) * n + i] = diag[i];
    return PeriodMatrix(n, std::move(e));
}

std::vector<double> PeriodMatrix::dual_point(const MultiIndex& kappa) const {
    if (kappa.dim() != n_) throw std::invalid_argument("dual_point: index dimension mismatch");
    std::vector<double> mu(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j)
            s += linv_t_[idx(i, j)] * static_cast<double>(kappa.k[static_cast<std::size_t>(j)]);
        mu[static_cast<std::size_t>(i)] = s;
    }
    return mu;
}

std::vector<double> PeriodMatrix::apply(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("apply: length mismatch");
    std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += entry(i, j) * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

std::vector<double> PeriodMatrix::apply_transpose(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != n_)
        throw std::invalid_argument("apply_transpose: length mismatch");
    std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += entry(j, i) * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

std::vector<double> PeriodMatrix::apply_inv_transpose(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != n_)
        throw std::invalid_argument("apply_inv_transpose: length mismatch");
    std::vector<double> out(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += linv_t_[idx(i, j)] * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> split_components(std::span<const double> mu) {
    if (mu.size() % 2 != 0)
        throw std::invalid_argument("split_components: expected even-length vector");
    std::size_t d = mu.size() / 2;
    return {std::vector<double>(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(d)),
            std::vector<double>(mu.begin() + static_cast<std::ptrdiff_t>(d), mu.end())};
}

std::vector<double> symplectic_apply(std::span<const double> z) {
    auto [x, w] = split_components(z);
    std::vector<double> out;
    out.reserve(z.size());
    for (double v : w) out.push_back(-v);
    for (double v : x) out.push_back(v);
    return out;
}

double symplectic_form(std::span<const double> z1, std::span<const double> z2) {
    if (z1.size() != z2.size()) throw std::invalid_argument("symplectic_form: length mismatch");
    auto jz2 = symplectic_apply(z2);
    return dot(z1, jz2);
}

std::vector<MultiIndex> enumerate_truncation(int K, int n) {
    if (K < 0) throw std::invalid_argument("enumerate_truncation: K must be >= 0");
    if (n < 1) throw std::invalid_argument("enumerate_truncation: n must be >= 1");
    std::vector<MultiIndex> out;
    out.reserve(static_cast<std::size_t>(std::pow(2.0 * K + 1.0, n)));
    std::vector<int> k(static_cast<std::size_t>(n), -K);
    while (true) {  // odometer over the box, lexicographic
        out.emplace_back(k);
        int axis = n - 1;
        while (axis >= 0 && k[static_cast<std::size_t>(axis)] == K) {
            k[static_cast<std::size_t>(axis)] = -K;
            --axis;
        }
        if (axis < 0) break;
        ++k[static_cast<std::size_t>(axis)];
    }
    std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
        return a.inf_norm() < b.inf_norm();
    });
    return out;
}

}  // namespace persym
