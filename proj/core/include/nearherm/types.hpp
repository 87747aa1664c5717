#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace nearherm {

using cplx = std::complex<double>;

/// Raised when a run configuration (file, CLI flags, experiment parameters)
/// is structurally invalid.  The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a caller violates a documented precondition (wrong shape,
/// non-Hermitian input to a Hermitian routine, degenerate atom, ...).
class contract_error : public std::invalid_argument {
 public:
  explicit contract_error(const std::string& what)
      : std::invalid_argument(what) {}
};

/// Raised when an iterative numerical routine fails to converge within its
/// iteration budget or meets a singular/ill-conditioned system.
class solver_error : public std::runtime_error {
 public:
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major complex matrix; the universal value carrier of the
/// library.  Constructors reject empty shapes and non-finite entries so that
/// downstream numerics never have to re-validate.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  /// Zero matrix of the given shape.
  ComplexMatrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major entries; validates shape and finiteness.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  /// Row-wise literal, mainly for tests: ComplexMatrix({{1, 2}, {3, 4}}).
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(const std::vector<cplx>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  cplx* row(std::size_t i) { return data_.data() + i * cols_; }
  const cplx* row(std::size_t i) const { return data_.data() + i * cols_; }

  ComplexMatrix conj_transpose() const;
  ComplexMatrix transpose() const;

  cplx trace() const;

  /// Largest entry magnitude; zero matrix gives 0.
  double max_abs() const;

  /// max_ij |A_ij - conj(A_ji)|, the deviation from being Hermitian.
  double hermitian_defect() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend ComplexMatrix operator*(ComplexMatrix lhs, cplx scale) {
    lhs *= scale;
    return lhs;
  }
  friend ComplexMatrix operator*(cplx scale, ComplexMatrix rhs) {
    rhs *= scale;
    return rhs;
  }

  /// Dense product; shapes must be compatible.
  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b);

  /// Throws contract_error if any entry is NaN or infinite.
  void require_finite(const char* who) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Matrix-vector product A*x.
std::vector<cplx> mat_vec(const ComplexMatrix& a, const std::vector<cplx>& x);

/// Conjugate-transposed product A^* x.
std::vector<cplx> adj_vec(const ComplexMatrix& a, const std::vector<cplx>& x);

/// Inner product <x, y> = sum conj(x_i) y_i.
cplx dot(const std::vector<cplx>& x, const std::vector<cplx>& y);

/// Euclidean norm of a complex vector.
double vec_norm(const std::vector<cplx>& x);

}  // namespace nearherm
