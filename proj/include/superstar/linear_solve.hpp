#pragma once

// Gaussian elimination shared by the exact (Rational) and floating-point
// solvers. Both routines are templates so the same elimination code runs
// over either scalar type.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace superstar {

class SingularSystem : public std::runtime_error {
 public:
  SingularSystem() : std::runtime_error("linear system is singular") {}
};

namespace detail {

template <class Scalar>
bool is_zero(const Scalar& x) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return x == Scalar(0);
  } else {
    return sgn(x) == 0;
  }
}

template <class Scalar>
double magnitude(const Scalar& x) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return std::abs(x);
  } else {
    return 0.0;  // exact pivots only need to be non-zero
  }
}

}  // namespace detail

/// Solves A x = b by elimination with row pivoting: largest magnitude for
/// floating point, first non-zero entry for exact types. Throws
/// SingularSystem when no usable pivot exists.
template <class Scalar>
std::vector<Scalar> solve_dense(std::vector<std::vector<Scalar>> a, std::vector<Scalar> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("right-hand side size mismatch");
  for (const auto& row : a) {
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    double best = -1.0;
    for (std::size_t row = col; row < n; ++row) {
      if (detail::is_zero(a[row][col])) continue;
      if constexpr (std::is_floating_point_v<Scalar>) {
        if (detail::magnitude(a[row][col]) > best) {
          best = detail::magnitude(a[row][col]);
          pivot = row;
        }
      } else {
        pivot = row;
        break;
      }
    }
    if (pivot == n) throw SingularSystem();
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      if (detail::is_zero(a[row][col])) continue;
      const Scalar factor = a[row][col] / a[col][col];
      for (std::size_t k = col + 1; k < n; ++k) {
        if (!detail::is_zero(a[col][k])) a[row][k] -= factor * a[col][k];
      }
      b[row] -= factor * b[col];
      a[row][col] = Scalar(0);
    }
  }
  std::vector<Scalar> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Scalar acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) {
      if (!detail::is_zero(a[i][k])) acc -= a[i][k] * x[k];
    }
    x[i] = acc / a[i][i];
  }
  return x;
}

/// One equation of a sparse system; `cols` is strictly increasing.
template <class Scalar>
struct SparseRow {
  std::vector<std::uint32_t> cols;
  std::vector<Scalar> vals;
  Scalar rhs{};
};

/// Sparse LU factors from elimination in a fixed order without pivoting.
/// `updates` replays the row operations on a right-hand side; `upper`
/// holds the reduced rows used for back substitution.
template <class Scalar>
struct SparseFactorization {
  struct Update {
    std::uint32_t target;
    std::uint32_t source;
    Scalar factor;
  };
  std::vector<std::uint32_t> order;
  std::vector<Update> updates;
  std::vector<SparseRow<Scalar>> upper;

  std::vector<Scalar> solve(std::vector<Scalar> b) const {
    const std::size_t n = upper.size();
    if (b.size() != n) throw std::invalid_argument("right-hand side size mismatch");
    for (const auto& u : updates) b[u.target] -= u.factor * b[u.source];
    std::vector<Scalar> x(n);
    for (std::size_t k = n; k-- > 0;) {
      const std::uint32_t v = order[k];
      const SparseRow<Scalar>& row = upper[v];
      Scalar acc = b[v];
      Scalar diag{};
      for (std::size_t i = 0; i < row.cols.size(); ++i) {
        if (row.cols[i] == v) {
          diag = row.vals[i];
        } else {
          acc -= row.vals[i] * x[row.cols[i]];
        }
      }
      x[v] = acc / diag;
    }
    return x;
  }
};

/// Factors a sparse matrix whose row i carries the pivot for variable i,
/// eliminating variables in `order` without pivoting. Valid for
/// nonsingular M-matrices such as the transient part of an absorbing
/// chain, where every Schur complement keeps a non-zero diagonal. Throws
/// SingularSystem on a zero pivot. Right-hand sides in `rows` are ignored.
template <class Scalar>
SparseFactorization<Scalar> factor_sparse_in_order(std::vector<SparseRow<Scalar>> rows,
                                                   const std::vector<std::uint32_t>& order) {
  const std::size_t n = rows.size();
  if (order.size() != n) throw std::invalid_argument("elimination order size mismatch");
  std::vector<std::uint32_t> rank(n, 0);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = static_cast<std::uint32_t>(k);

  std::vector<std::vector<std::uint32_t>> col_rows(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t c : rows[i].cols) {
      if (c != i) col_rows[c].push_back(i);
    }
  }

  auto find = [](const SparseRow<Scalar>& row, std::uint32_t col) -> std::ptrdiff_t {
    const auto it = std::lower_bound(row.cols.begin(), row.cols.end(), col);
    return (it != row.cols.end() && *it == col) ? it - row.cols.begin() : -1;
  };

  SparseFactorization<Scalar> f;
  f.order = order;
  SparseRow<Scalar> merged;
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t v = order[k];
    const SparseRow<Scalar>& pivot_row = rows[v];
    const auto pivot_at = find(pivot_row, v);
    if (pivot_at < 0 || detail::is_zero(pivot_row.vals[pivot_at])) throw SingularSystem();
    const Scalar pivot_inverse = Scalar(1) / pivot_row.vals[pivot_at];

    auto targets = std::move(col_rows[v]);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (std::uint32_t u : targets) {
      if (rank[u] <= k) continue;
      SparseRow<Scalar>& row = rows[u];
      const auto at = find(row, v);
      if (at < 0) continue;
      const Scalar factor = row.vals[at] * pivot_inverse;

      merged.cols.clear();
      merged.vals.clear();
      std::size_t i = 0, j = 0;
      while (i < row.cols.size() || j < pivot_row.cols.size()) {
        const std::uint32_t ci = i < row.cols.size() ? row.cols[i] : UINT32_MAX;
        const std::uint32_t cj = j < pivot_row.cols.size() ? pivot_row.cols[j] : UINT32_MAX;
        if (ci < cj) {
          merged.cols.push_back(ci);
          merged.vals.push_back(std::move(row.vals[i]));
          ++i;
        } else if (cj < ci) {
          if (cj != v) {
            merged.cols.push_back(cj);
            merged.vals.push_back(-factor * pivot_row.vals[j]);
            col_rows[cj].push_back(u);
          }
          ++j;
        } else {
          if (ci != v) {
            Scalar value = row.vals[i] - factor * pivot_row.vals[j];
            if (!detail::is_zero(value)) {
              merged.cols.push_back(ci);
              merged.vals.push_back(std::move(value));
            }
          }
          ++i;
          ++j;
        }
      }
      std::swap(row.cols, merged.cols);
      std::swap(row.vals, merged.vals);
      f.updates.push_back({u, v, factor});
    }
  }
  for (auto& row : rows) row.rhs = Scalar{};
  f.upper = std::move(rows);
  return f;
}

/// Factors and solves in one go; see factor_sparse_in_order.
template <class Scalar>
std::vector<Scalar> solve_sparse_in_order(const std::vector<SparseRow<Scalar>>& rows,
                                          const std::vector<std::uint32_t>& order) {
  std::vector<Scalar> b;
  b.reserve(rows.size());
  for (const auto& row : rows) b.push_back(row.rhs);
  return factor_sparse_in_order(rows, order).solve(std::move(b));
}

}  // namespace superstar
