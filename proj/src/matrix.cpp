#include "opmeas/matrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "opmeas/errors.hpp"

namespace opmeas {

namespace {

using EigenMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenMat> as_eigen(const CMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

void require_square(const CMatrix& m, const char* op) {
  if (!m.is_square() || m.rows() == 0)
    throw ShapeError(std::string(op) + ": square matrix required");
  if (m.rows() > kMaxDim)
    throw ShapeError(std::string(op) + ": dimension exceeds 64");
}

double inf_norm(const CMatrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

}  // namespace

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::from_rows(
    std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  CMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("from_rows: ragged rows");
    std::size_t j = 0;
    for (const cplx& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw ShapeError("matrix product: dimension mismatch");
  CMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const cplx a = (*this)(i, k);
      if (a == cplx{}) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw ShapeError("matrix sum: dimension mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw ShapeError("matrix difference: dimension mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

CMatrix CMatrix::operator*(cplx scale) const {
  CMatrix out = *this;
  for (cplx& v : out.data_) v *= scale;
  return out;
}

CVector CMatrix::apply(const CVector& x) const {
  if (x.size() != cols_) throw ShapeError("apply: dimension mismatch");
  CVector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    cplx s{};
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

CVector CMatrix::apply_adjoint(const CVector& x) const {
  if (x.size() != rows_) throw ShapeError("apply_adjoint: dimension mismatch");
  CVector y(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const cplx xi = x[i];
    for (std::size_t j = 0; j < cols_; ++j) y[j] += std::conj((*this)(i, j)) * xi;
  }
  return y;
}

bool CMatrix::all_finite() const {
  for (const cplx& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

std::vector<cplx> eigenvalues(const CMatrix& m) {
  require_square(m, "eigenvalues");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(as_eigen(m),
                                                     /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigenvalues: QR iteration did not converge");
  std::vector<cplx> out(solver.eigenvalues().data(),
                        solver.eigenvalues().data() + m.rows());
  std::sort(out.begin(), out.end(), [](const cplx& a, const cplx& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

CVector solve(const CMatrix& a, const CVector& b) {
  require_square(a, "solve");
  if (b.size() != a.rows()) throw ShapeError("solve: rhs dimension mismatch");
  if (norm2(b) == 0.0) return CVector(b.size());
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(as_eigen(a));
  const double scale = inf_norm(a);
  const auto& u = lu.matrixLU();
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    if (std::abs(u(i, i)) <= 1e-14 * scale)
      throw SingularMatrixError("solve: pivot below 1e-14 * ||A||");
  Eigen::Map<const Eigen::VectorXcd> rhs(b.data(),
                                         static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXcd x = lu.solve(rhs);
  return CVector(x.data(), x.data() + x.size());
}

PsdResidual psd_residual(const CMatrix& m) {
  require_square(m, "psd_residual");
  const CMatrix defect = m - m.adjoint();
  const CMatrix herm = (m + m.adjoint()) * cplx(0.5, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      as_eigen(herm), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("psd_residual: eigensolver failed");
  return {operator_norm(defect), solver.eigenvalues().minCoeff()};
}

double operator_norm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::MatrixXcd a = as_eigen(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.adjoint() * a,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("operator_norm: eigensolver failed");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

cplx trace(const CMatrix& m) {
  require_square(m, "trace");
  cplx s{};
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
  return s;
}

double norm2(const CVector& x) {
  double s = 0.0;
  for (const cplx& v : x) s += std::norm(v);
  return s;
}

double norm(const CVector& x) { return std::sqrt(norm2(x)); }

cplx inner(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw ShapeError("inner: dimension mismatch");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace opmeas
