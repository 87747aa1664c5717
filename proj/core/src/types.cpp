#include "nearherm/types.hpp"

#include <cmath>
#include <utility>

namespace nearherm {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw contract_error("ComplexMatrix: dimensions must be at least 1x1");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {
  check_shape(rows, cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  check_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw contract_error("ComplexMatrix: entry count does not match shape");
  }
  require_finite("ComplexMatrix");
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  check_shape(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw contract_error("ComplexMatrix: ragged initializer rows");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite("ComplexMatrix");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cplx>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  m.require_finite("ComplexMatrix::diagonal");
  return m;
}

ComplexMatrix ComplexMatrix::conj_transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out(j, i) = std::conj((*this)(i, j));
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out(j, i) = (*this)(i, j);
    }
  }
  return out;
}

cplx ComplexMatrix::trace() const {
  if (!is_square()) {
    throw contract_error("trace: matrix must be square");
  }
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermitian_defect() const {
  if (!is_square()) {
    throw contract_error("hermitian_defect: matrix must be square");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) {
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return d;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw contract_error("operator+=: shape mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw contract_error("operator-=: shape mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (cplx& v : data_) v *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw contract_error("operator*: inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  // i-k-j ordering keeps the two inner accesses contiguous in row-major.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx* out_row = out.row(i);
    const cplx* a_row = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a_row[k];
      if (aik == cplx{0.0, 0.0}) continue;
      const cplx* b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out_row[j] += aik * b_row[j];
      }
    }
  }
  return out;
}

void ComplexMatrix::require_finite(const char* who) const {
  for (const cplx& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw contract_error(std::string(who) + ": non-finite entry");
    }
  }
}

std::vector<cplx> mat_vec(const ComplexMatrix& a, const std::vector<cplx>& x) {
  if (a.cols() != x.size()) {
    throw contract_error("mat_vec: dimension mismatch");
  }
  std::vector<cplx> y(a.rows(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const cplx* row = a.row(i);
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<cplx> adj_vec(const ComplexMatrix& a, const std::vector<cplx>& x) {
  if (a.rows() != x.size()) {
    throw contract_error("adj_vec: dimension mismatch");
  }
  std::vector<cplx> y(a.cols(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const cplx* row = a.row(i);
    const cplx xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += std::conj(row[j]) * xi;
  }
  return y;
}

cplx dot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  if (x.size() != y.size()) {
    throw contract_error("dot: length mismatch");
  }
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double vec_norm(const std::vector<cplx>& x) {
  double acc = 0.0;
  for (const cplx& v : x) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace nearherm
