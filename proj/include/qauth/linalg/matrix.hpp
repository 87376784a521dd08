#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qauth/errors.hpp"

namespace qauth::linalg {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Every quantum object in the library
/// (states, unitaries, projectors, blocks) is carried by this type.
///
/// Entries are always finite: the checked constructors reject NaN/Inf, and
/// the arithmetic below cannot introduce them from finite operands except by
/// overflow, which does not occur at the sizes used here (dim <= 64).
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
      throw DimensionError("ComplexMatrix: dimensions must be positive, got " + shape_string(rows, cols));
    }
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
      throw DimensionError("ComplexMatrix: dimensions must be positive, got " + shape_string(rows, cols));
    }
    if (data_.size() != rows * cols) {
      throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) + " entries for shape " +
                           shape_string(rows, cols));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvariantError("ComplexMatrix: non-finite entry");
      }
    }
  }

  /// Builds from nested row lists: `ComplexMatrix{{1, 0}, {0, 1}}`.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : ComplexMatrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size(), flatten(rows)) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

  static ComplexMatrix diagonal(std::span<const Complex> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Column vector |k> of dimension n.
  static ComplexMatrix basis_vector(std::size_t n, std::size_t k) {
    ComplexMatrix v(n, 1);
    v(k, 0) = 1.0;
    return v;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  std::string shape() const { return shape_string(rows_, cols_); }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) noexcept {
    for (auto& z : data_) z *= s;
    return *this;
  }

  static std::string shape_string(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
  }

 private:
  static std::vector<Complex> flatten(std::initializer_list<std::initializer_list<Complex>> rows) {
    std::vector<Complex> out;
    const std::size_t width = rows.size() == 0 ? 0 : rows.begin()->size();
    for (const auto& r : rows) {
      if (r.size() != width) throw DimensionError("ComplexMatrix: ragged initializer rows");
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }

  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionError(std::string("ComplexMatrix ") + op + ": shapes " + shape() + " and " + o.shape());
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: cannot multiply " + a.shape() + " by " + b.shape());
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }

/// Conjugate transpose.
inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

/// Kronecker product; the left operand carries the slow (outer) index.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      if (s == Complex{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

template <typename... Rest>
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, const Rest&... rest) {
  return tensor(tensor(a, b), rest...);
}

inline Complex trace(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("trace: matrix is " + a.shape());
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

inline double distance(const ComplexMatrix& a, const ComplexMatrix& b) { return frobenius_norm(a - b); }

/// |v><v| for a column vector v.
inline ComplexMatrix projector(const ComplexMatrix& v) { return v * adjoint(v); }

/// ||A^dagger A - I||_F.
inline double unitarity_residual(const ComplexMatrix& a) {
  if (!a.is_square()) return INFINITY;
  return distance(adjoint(a) * a, ComplexMatrix::identity(a.rows()));
}

/// ||A - A^dagger||_F.
inline double hermiticity_residual(const ComplexMatrix& a) {
  if (!a.is_square()) return INFINITY;
  return distance(a, adjoint(a));
}

/// Copy of the rows [r0, r0+nr) x cols [c0, c0+nc).
inline ComplexMatrix submatrix(const ComplexMatrix& a, std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) {
  if (r0 + nr > a.rows() || c0 + nc > a.cols()) {
    throw DimensionError("submatrix: window exceeds " + a.shape());
  }
  ComplexMatrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = a(r0 + i, c0 + j);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const ComplexMatrix& m) {
  std::ostringstream ss;
  ss.precision(6);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ss << (i == 0 ? "[" : " ");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      ss << (j ? ", " : "") << m(i, j).real() << (m(i, j).imag() < 0 ? "-" : "+") << std::abs(m(i, j).imag())
         << "i";
    }
    ss << (i + 1 == m.rows() ? "]" : "\n");
  }
  return os << ss.str();
}

}  // namespace qauth::linalg
