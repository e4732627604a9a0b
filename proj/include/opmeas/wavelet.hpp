#pragma once

#include <cstdint>
#include <vector>

#include "opmeas/filter_bank.hpp"

// Cascade approximation of the scaling function and wavelet on the dyadic
// grid { m 2^-J } over [0, 2D-1], plus the wavelet-packet recursion.
//
// Quadrature: integrals are dyadic cell sums (left endpoints, h * sum f_m
// over m < last). The cascade iterates are piecewise constant on width-h
// cells, so the cell sum integrates them exactly; for functions vanishing
// at both support endpoints it coincides with the trapezoid rule.

namespace opmeas {

struct DyadicFunction {
  std::uint32_t depth = 0;        // J; grid spacing 2^-J
  std::uint32_t support_end = 0;  // 2D-1; sample count (2D-1) 2^J + 1
  std::vector<double> samples;
  bool divergence_warning = false;
  double last_sup_delta = 0.0;  // sup |f_J - f_{J-1}| of the final iteration

  double spacing() const { return std::ldexp(1.0, -static_cast<int>(depth)); }
  double x(std::size_t m) const { return static_cast<double>(m) * spacing(); }
};

// Iterates f -> sqrt2 sum_k a_k f(2x - k) from the indicator of [0, 1),
// `depth` times on the fixed grid, then divides by the cell integral so the
// result integrates to 1. Requires real taps with sum sqrt2 (within 1e-8)
// and 1 <= depth <= 24. A non-decreasing tail of sup distances marks the
// result with divergence_warning; samples are returned regardless.
DyadicFunction cascade_phi(const FilterBank& fb, std::uint32_t depth);

// psi(x) = sqrt2 sum_k b_k phi(2x - k) with the high-pass taps b.
DyadicFunction wavelet_psi(const FilterBank& fb, const DyadicFunction& phi);

// Wavelet packets: phi_0 = phi, phi_1 = psi, phi_{2n} low-channel and
// phi_{2n+1} high-channel recursion. Supports stay inside [0, 2D-1].
DyadicFunction packet(const FilterBank& fb, std::uint32_t n, std::uint32_t depth);

double cell_integral(const DyadicFunction& f);

struct OrthoMoments {
  double shift_residual;  // max over |integral f f(.-k)| (1 <= k <= K) and
                          // | ||f||^2 - 1 |
  double moment;          // integral of f
};
// Requires depth >= 8.
OrthoMoments orthonormality_and_moments(const DyadicFunction& f,
                                        std::uint32_t max_shift);

}  // namespace opmeas
