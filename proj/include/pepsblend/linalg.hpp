#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pepsblend/errors.hpp"
#include "pepsblend/field.hpp"

namespace pepsblend {

// Dense matrix over an exact field. Deliberately minimal: the library only
// needs exact solves and kernel vectors at desk scale.
template <FieldType F>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const F& fill)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const F& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
  }

  std::vector<F> mul(const std::vector<F>& x) const {
    if (x.size() != cols_) throw ConfigInvalid("matrix-vector size mismatch");
    std::vector<F> y;
    y.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      F acc = zero_like(at(i, 0));
      for (std::size_t j = 0; j < cols_; ++j) acc += at(i, j) * x[j];
      y.push_back(std::move(acc));
    }
    return y;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<F> a_;
};

// Fraction-free elimination keeps entries as minors of the input, which is
// the right growth control for big exact fields (Q, Q(i)). Word-size fields
// are better served by plain Gaussian elimination with normalized pivot rows
// (one multiplication per inner element instead of a division).
template <typename F>
struct uses_fraction_free : std::true_type {};
template <>
struct uses_fraction_free<PrimeFieldElement> : std::false_type {};

namespace detail {

// Forward elimination on the leftmost `limit` columns; row swaps only.
// Returns the pivot columns in echelon order.
template <FieldType F>
std::vector<std::size_t> bareiss_forward(Matrix<F>& m, std::size_t limit) {
  std::vector<std::size_t> pivot_cols;
  const bool fraction_free = uses_fraction_free<F>::value;
  F prev = one_like(m.at(0, 0));
  std::size_t row = 0;
  for (std::size_t col = 0; col < limit && row < m.rows(); ++col) {
    std::size_t pr = row;
    while (pr < m.rows() && is_zero(m.at(pr, col))) ++pr;
    if (pr == m.rows()) continue;  // free column
    m.swap_rows(row, pr);
    const F pivot = m.at(row, col);
    if (fraction_free) {
      for (std::size_t i = row + 1; i < m.rows(); ++i) {
        const F lead = m.at(i, col);
        for (std::size_t j = col + 1; j < m.cols(); ++j) {
          m.at(i, j) = (pivot * m.at(i, j) - lead * m.at(row, j)) / prev;
        }
        m.at(i, col) = zero_like(pivot);
      }
      prev = pivot;
    } else {
      const F inv = one_like(pivot) / pivot;
      for (std::size_t j = col + 1; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
      m.at(row, col) = one_like(pivot);
      for (std::size_t i = row + 1; i < m.rows(); ++i) {
        const F lead = m.at(i, col);
        if (is_zero(lead)) continue;
        for (std::size_t j = col + 1; j < m.cols(); ++j) {
          m.at(i, j) = m.at(i, j) - lead * m.at(row, j);
        }
        m.at(i, col) = zero_like(pivot);
      }
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

}  // namespace detail

// Exact solution of a square system A x = b. Throws SingularMatrix when A has
// no inverse. Fraction-free elimination with partial (first-nonzero) pivoting,
// then back substitution in the field.
template <FieldType F>
std::vector<F> solve_linear_system(Matrix<F> a, const std::vector<F>& b) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n || b.size() != n) throw ConfigInvalid("solve_linear_system wants a square system");
  Matrix<F> aug(n, n + 1, zero_like(a.at(0, 0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, n) = b[i];
  }
  auto pivots = detail::bareiss_forward(aug, n);
  if (pivots.size() != n) throw SingularMatrix();
  std::vector<F> x(n, zero_like(aug.at(0, 0)));
  for (std::size_t ii = n; ii-- > 0;) {
    F acc = aug.at(ii, n);
    for (std::size_t j = ii + 1; j < n; ++j) acc -= aug.at(ii, j) * x[j];
    x[ii] = acc / aug.at(ii, ii);
  }
  return x;
}

// One nonzero kernel vector of A (A v = 0), or nullopt when the kernel is
// trivial. The free variable chosen is the first non-pivot column, set to 1.
template <FieldType F>
std::optional<std::vector<F>> kernel_vector(Matrix<F> a) {
  const std::size_t n = a.cols();
  if (n == 0) return std::nullopt;
  auto pivots = detail::bareiss_forward(a, n);
  if (pivots.size() == n) return std::nullopt;
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::size_t free_col = 0;
  while (free_col < n && is_pivot[free_col]) ++free_col;
  std::vector<F> v(n, zero_like(a.at(0, 0)));
  v[free_col] = one_like(a.at(0, 0));
  // Pivot rows are in echelon order; solve bottom-up.
  for (std::size_t ri = pivots.size(); ri-- > 0;) {
    const std::size_t pc = pivots[ri];
    if (pc > free_col) continue;  // variable already forced to zero
    F acc = zero_like(v[free_col]);
    for (std::size_t j = pc + 1; j < n; ++j) {
      if (!is_zero(v[j])) acc += a.at(ri, j) * v[j];
    }
    v[pc] = -acc / a.at(ri, pc);
  }
  return v;
}

}  // namespace pepsblend
