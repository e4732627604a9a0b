#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "opmeas/filter_bank.hpp"
#include "opmeas/matrix.hpp"

// Finite measurement systems: N operators F_i of size d x d forming a
// column isometry, sum_i F_i* F_i = I. Immutable after construction.

namespace opmeas {

inline constexpr double kIsometryTol = 1e-10;

class MeasurementSystem {
 public:
  // Throws ValidationError (carrying the residual) when the column-isometry
  // residual exceeds 1e-10 in operator norm.
  static MeasurementSystem build(std::vector<CMatrix> operators,
                                 std::string label);
  // For experiments with deliberately broken inputs.
  static MeasurementSystem build_unvalidated(std::vector<CMatrix> operators,
                                             std::string label);

  std::size_t alphabet_size() const { return ops_.size(); }  // N
  std::size_t dim() const { return dim_; }
  const CMatrix& op(std::size_t i) const { return ops_[i]; }
  const std::vector<CMatrix>& operators() const { return ops_; }
  const std::string& label() const { return label_; }
  bool validated() const { return validated_; }

 private:
  MeasurementSystem(std::vector<CMatrix> ops, std::string label, bool validated);
  std::vector<CMatrix> ops_;
  std::size_t dim_ = 0;
  std::string label_;
  bool validated_ = false;
};

// "lebesgue2": N=2, d=2, F_0 = I/sqrt2, F_1 = diag(1,-1)/sqrt2.
// "cantor3":  N=3, d=3, the middle-third system.
MeasurementSystem builtin_system(std::string_view name);

// N=2 system of the two slanted matrices (low and high channel).
// Requires a validated bank; complex taps whose finite matrices miss the
// isometry are rejected with the residual attached.
MeasurementSystem from_filter_bank(const FilterBank& fb);

// Operator norm of sum_i F_i* F_i - I.
double column_isometry_residual(const MeasurementSystem& sys);

// max over (i, j) of || F_i F_j* - delta_{ij} I ||.
double cuntz_residual(const MeasurementSystem& sys);

// Unit vector in the system's Hilbert space.
class PureState {
 public:
  // Throws ValidationError unless || psi || = 1 within 1e-12.
  static PureState from(CVector v);
  static PureState basis(std::size_t dim, std::size_t index);

  const CVector& vec() const { return v_; }
  std::size_t dim() const { return v_.size(); }

 private:
  explicit PureState(CVector v) : v_(std::move(v)) {}
  CVector v_;
};

}  // namespace opmeas
