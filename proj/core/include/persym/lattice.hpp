// Period-matrix algebra: dual lattice points, the I1/I2 block split and the
// symplectic map J acting on phase-space vectors.
#pragma once

#include <compare>
#include <span>
#include <utility>
#include <vector>

#include "persym/common.hpp"

namespace persym {

/// Integer lattice index kappa in Z^n.
struct MultiIndex {
    std::vector<int> k;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries) : k(std::move(entries)) {}
    MultiIndex(std::initializer_list<int> entries) : k(entries) {}

    [[nodiscard]] int dim() const { return static_cast<int>(k.size()); }
    [[nodiscard]] int inf_norm() const;
    [[nodiscard]] bool is_zero() const;

    auto operator<=>(const MultiIndex&) const = default;
};

/// Phase-space point z = (x, omega) in R^{2d}.
struct PhasePoint {
    std::vector<double> x;
    std::vector<double> w;

    PhasePoint() = default;
    PhasePoint(std::vector<double> pos, std::vector<double> freq)
        : x(std::move(pos)), w(std::move(freq)) {
        if (x.size() != w.size()) throw std::invalid_argument("PhasePoint: x/omega length mismatch");
    }
    PhasePoint(double pos, double freq) : x{pos}, w{freq} {}

    [[nodiscard]] int dim() const { return static_cast<int>(x.size()); }
    [[nodiscard]] std::vector<double> flat() const;
    static PhasePoint from_flat(std::span<const double> z);
};

/// Invertible n x n matrix L defining the periodicity lattice L Z^n.
/// L^{-T} is factored once at construction (LU with partial pivoting) and
/// matrices with 1-norm condition estimate above 1e12 are rejected.
class PeriodMatrix {
  public:
    PeriodMatrix(int n, std::vector<double> row_major_entries);

    static PeriodMatrix identity(int n);
    static PeriodMatrix diagonal(std::span<const double> diag);

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] double det() const { return det_; }
    [[nodiscard]] double entry(int i, int j) const { return entries_[idx(i, j)]; }
    [[nodiscard]] double inv_transpose_entry(int i, int j) const { return linv_t_[idx(i, j)]; }
    [[nodiscard]] const std::vector<double>& entries() const { return entries_; }

    /// mu = L^{-T} kappa, a point of the dual lattice.
    [[nodiscard]] std::vector<double> dual_point(const MultiIndex& kappa) const;
    /// L v (used by periodization and cell sampling).
    [[nodiscard]] std::vector<double> apply(std::span<const double> v) const;
    /// L^T v.
    [[nodiscard]] std::vector<double> apply_transpose(std::span<const double> v) const;
    /// L^{-T} v for real-valued v.
    [[nodiscard]] std::vector<double> apply_inv_transpose(std::span<const double> v) const;

    bool operator==(const PeriodMatrix& other) const {
        return n_ == other.n_ && entries_ == other.entries_;
    }

  private:
    [[nodiscard]] std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(j);
    }

    int n_;
    std::vector<double> entries_;
    std::vector<double> linv_t_;
    double det_;
};

/// (I1 mu, I2 mu): first and last d entries of a 2d-vector.
std::pair<std::vector<double>, std::vector<double>> split_components(std::span<const double> mu);

/// J z = (-omega, x).
std::vector<double> symplectic_apply(std::span<const double> z);

/// [z1, z2] = <z1, J z2> = x2.omega1 - x1.omega2.
double symplectic_form(std::span<const double> z1, std::span<const double> z2);

/// All kappa in Z^n with ||kappa||_inf <= K, ordered by ||kappa||_inf then
/// lexicographically.  The order is the summation order of every truncated
/// series in the library.
std::vector<MultiIndex> enumerate_truncation(int K, int n);

}  // namespace persym
