#include "opmeas/measurement.hpp"

#include <cmath>

#include "opmeas/errors.hpp"

namespace opmeas {

MeasurementSystem::MeasurementSystem(std::vector<CMatrix> ops, std::string label,
                                     bool validated)
    : ops_(std::move(ops)), label_(std::move(label)), validated_(validated) {
  if (ops_.empty())
    throw ShapeError("measurement system: at least one operator required");
  dim_ = ops_.front().rows();
  if (dim_ == 0 || dim_ > kMaxDim)
    throw ShapeError("measurement system: dimension must be in [1, 64]");
  for (const CMatrix& f : ops_) {
    if (f.rows() != dim_ || f.cols() != dim_)
      throw ShapeError("measurement system: all operators must be d x d");
    if (!f.all_finite())
      throw ShapeError("measurement system: non-finite operator entry");
  }
}

MeasurementSystem MeasurementSystem::build(std::vector<CMatrix> operators,
                                           std::string label) {
  MeasurementSystem sys(std::move(operators), std::move(label), true);
  const double residual = column_isometry_residual(sys);
  if (residual > kIsometryTol)
    throw ValidationError("measurement system '" + sys.label_ +
                              "': column-isometry residual " +
                              std::to_string(residual) + " exceeds 1e-10",
                          residual);
  return sys;
}

MeasurementSystem MeasurementSystem::build_unvalidated(
    std::vector<CMatrix> operators, std::string label) {
  return MeasurementSystem(std::move(operators), std::move(label), false);
}

MeasurementSystem builtin_system(std::string_view name) {
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "lebesgue2") {
    CMatrix f0 = CMatrix::identity(2) * cplx(r);
    CMatrix f1 = CMatrix::from_rows({{r, 0.0}, {0.0, -r}});
    return MeasurementSystem::build({f0, f1}, "lebesgue2");
  }
  if (name == "cantor3") {
    CMatrix f0 = CMatrix::from_rows({{r, 0, 0}, {0, r, 0}, {0, 0, 0}});
    CMatrix f1 = CMatrix::from_rows({{0, 0, 0}, {0, 0, 1}, {0, 0, 0}});
    CMatrix f2 = CMatrix::from_rows({{r, 0, 0}, {0, -r, 0}, {0, 0, 0}});
    return MeasurementSystem::build({f0, f1, f2}, "cantor3");
  }
  throw LookupError("unknown builtin system '" + std::string(name) +
                    "' (expected lebesgue2 or cantor3)");
}

MeasurementSystem from_filter_bank(const FilterBank& fb) {
  if (!fb.validated())
    throw ValidationError(
        "from_filter_bank: taps fail the quadrature-mirror condition",
        fb.qmf_residual());
  CMatrix f0 = slanted_matrix(fb.taps());
  const std::vector<cplx> hp = highpass_taps(fb);
  CMatrix f1 = slanted_matrix(hp);
  std::string label = "filter_bank";
  if (fb.beta()) label = "beta=" + std::to_string(*fb.beta());
  return MeasurementSystem::build({std::move(f0), std::move(f1)},
                                  std::move(label));
}

double column_isometry_residual(const MeasurementSystem& sys) {
  const std::size_t d = sys.dim();
  CMatrix acc(d, d);
  for (std::size_t i = 0; i < sys.alphabet_size(); ++i)
    acc = acc + sys.op(i).adjoint() * sys.op(i);
  return operator_norm(acc - CMatrix::identity(d));
}

double cuntz_residual(const MeasurementSystem& sys) {
  const std::size_t d = sys.dim();
  double best = 0.0;
  for (std::size_t i = 0; i < sys.alphabet_size(); ++i)
    for (std::size_t j = 0; j < sys.alphabet_size(); ++j) {
      CMatrix m = sys.op(i) * sys.op(j).adjoint();
      if (i == j) m = m - CMatrix::identity(d);
      best = std::max(best, operator_norm(m));
    }
  return best;
}

PureState PureState::from(CVector v) {
  const double n = norm(v);
  if (std::abs(n - 1.0) > 1e-12)
    throw ValidationError("pure state: norm deviates from 1", std::abs(n - 1.0));
  return PureState(std::move(v));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw ShapeError("pure state: basis index out of range");
  CVector v(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

}  // namespace opmeas
