#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

// Dense complex linear algebra for small matrices (dimension <= 64).
// Values are immutable in practice: every operation returns a fresh object,
// so concurrent use from multiple threads is safe.

namespace opmeas {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr std::size_t kMaxDim = 64;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);
  static CMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  const cplx* data() const { return data_.data(); }
  cplx* data() { return data_.data(); }

  CMatrix adjoint() const;
  CMatrix operator*(const CMatrix& rhs) const;
  CMatrix operator+(const CMatrix& rhs) const;
  CMatrix operator-(const CMatrix& rhs) const;
  CMatrix operator*(cplx scale) const;

  CVector apply(const CVector& x) const;          // M x
  CVector apply_adjoint(const CVector& x) const;  // M* x

  bool all_finite() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

// All eigenvalues with algebraic multiplicity, sorted by descending modulus;
// ties broken by descending real part, then descending imaginary part.
// Downstream dominance checks rely on this order.
std::vector<cplx> eigenvalues(const CMatrix& m);

// Solves A x = b by partially pivoted LU. A pivot below 1e-14 * ||A||_inf
// raises SingularMatrixError. b == 0 short-circuits to the zero vector.
CVector solve(const CMatrix& a, const CVector& b);

struct PsdResidual {
  double hermitian_defect;  // ||M - M*|| (operator norm)
  double min_eigenvalue;    // smallest eigenvalue of the Hermitian part
};
PsdResidual psd_residual(const CMatrix& m);

double operator_norm(const CMatrix& m);  // largest singular value
double frobenius_norm(const CMatrix& m);
cplx trace(const CMatrix& m);

double norm2(const CVector& x);  // squared Euclidean norm
double norm(const CVector& x);
cplx inner(const CVector& a, const CVector& b);  // conjugate-linear in a

}  // namespace opmeas
