#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "opmeas/matrix.hpp"

// Quadrature-mirror filter taps, the one-parameter beta family, slanted
// Toeplitz matrices and the two-channel operators on finitely supported
// sequences. Pure functions over immutable values.

namespace opmeas {

class FilterBank {
 public:
  // Even-length tap sequence a_0 .. a_{2D-1}, D >= 1. Residuals against the
  // quadrature-mirror and sum conditions are computed once at construction.
  static FilterBank from_taps(std::vector<cplx> taps);
  // Length-4 real family: a_0 = (1 + sqrt2 cos b)/(2 sqrt2) and cyclic
  // sin/cos variants; satisfies both tap conditions identically in b.
  static FilterBank from_beta(double beta);

  const std::vector<cplx>& taps() const { return taps_; }
  std::size_t length() const { return taps_.size(); }      // 2D
  std::size_t half_length() const { return taps_.size() / 2; }  // D
  std::optional<double> beta() const { return beta_; }

  double qmf_residual() const { return qmf_residual_; }
  double sum_residual() const { return sum_residual_; }
  // True when the taps satisfy the quadrature-mirror condition to 1e-10.
  bool validated() const { return qmf_residual_ <= 1e-10; }
  bool is_real(double tol = 0.0) const;

 private:
  FilterBank() = default;
  std::vector<cplx> taps_;
  std::optional<double> beta_;
  double qmf_residual_ = 0.0;
  double sum_residual_ = 0.0;
};

struct TapValidation {
  double qmf_residual;  // max_k |sum_j conj(a_j) a_{j+2k} - delta_{0,k}|
  double sum_residual;  // |sum_j a_j - sqrt(2)|
};
TapValidation validate_taps(std::span<const cplx> taps);
inline TapValidation validate_taps(const FilterBank& fb) {
  return {fb.qmf_residual(), fb.sum_residual()};
}

// High-pass companion taps b_k = (-1)^k conj(a_{2D-1-k}).
std::vector<cplx> highpass_taps(const FilterBank& fb);

// (2D-1) x (2D-1) matrix with entry (m, n) = taps[2m - n] (0-indexed),
// zero outside the tap range.
CMatrix slanted_matrix(std::span<const cplx> taps);

enum class Region { i, ii, boundary, neither };
const char* region_name(Region r);

struct BetaDiagnostics {
  double beta;
  FilterBank taps;
  double alpha;            // max(|a_0|^2, |a_3|^2)
  double circle_residual;  // |(a_0 - c)^2 + (a_3 - c)^2 - 1/4|, c = 1/(2 sqrt2)
  Region region;
  std::array<cplx, 3> closed_form_spectrum;  // {a_0, 1/sqrt2, (sin b - cos b)/2}
  bool dominance_ok;  // a_0 > 1/sqrt2 > |(sin b - cos b)/2|
};
BetaDiagnostics beta_diagnostics(double beta);

// Two-sided sequences with finite support; coeffs[0] sits at index `first`.
struct FiniteSequence {
  long first = 0;
  std::vector<cplx> coeffs;

  static FiniteSequence delta(long index, cplx value = 1.0);
  cplx at(long index) const;
  long last() const { return first + static_cast<long>(coeffs.size()) - 1; }
  bool empty() const { return coeffs.empty(); }
  void trim();  // drop exact-zero margins
};

double norm2(const FiniteSequence& x);
cplx inner(const FiniteSequence& a, const FiniteSequence& b);

enum class Channel { low, high };

// low:  y_j = sum_k a_{2j-k} x_k
// high: y_j = sum_k (-1)^k conj(a_{1-2j+k}) x_k
FiniteSequence ell2_apply(Channel ch, const FilterBank& fb,
                          const FiniteSequence& x);
// Adjoints of the above with respect to the ell^2 inner product.
FiniteSequence ell2_adjoint_apply(Channel ch, const FilterBank& fb,
                                  const FiniteSequence& x);

}  // namespace opmeas
