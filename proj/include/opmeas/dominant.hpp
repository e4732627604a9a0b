#pragma once

#include "opmeas/filter_bank.hpp"
#include "opmeas/matrix.hpp"

// Principal-vector construction for a matrix with a strictly dominant,
// algebraically simple eigenvalue a and a known unit left eigenvector w
// (F* w = conj(a) w), the normalized power limit a^{-n} F^n x -> <w|x> xi,
// and the polynomial-times-geometric convergence envelope.

namespace opmeas {

struct DominantTriple {
  CMatrix f;
  cplx a;
  CVector w;
};

// Validates all invariants: || F* w - conj(a) w || <= 1e-10, |a| exceeds
// every other eigenvalue modulus by a relative gap of 1e-9, and the
// algebraic multiplicity of a is one. Throws on violation.
DominantTriple make_dominant_triple(CMatrix f, cplx a, CVector w);

// Relative modulus of the largest non-dominant eigenvalue.
double spectral_gap(const DominantTriple& t);

// Block decomposition over C w (+) w-perp: with F = [[a, 0...0], [eta, G]]
// in that basis, returns xi = w + (a - G)^{-1} eta, the unique vector with
// <w|xi> = 1 and F xi = a xi. Throws DegenerateSpectrumError when a lies in
// spec(G) within tolerance.
CVector principal_right_vector(const DominantTriple& t);

// v = e_0 + (a_0 I - G)^{-1} (first column of F_0 below the corner), where
// G is the low-pass slanted matrix with its first row and column deleted.
// Satisfies F_0 v = a_0 v and <e_0|v> = 1. Requires the dominance
// hypotheses on F_0; throws when det(a_0 I - G) falls below 1e-12.
CVector filter_principal_vector(const FilterBank& fb);

// || a^{-n} F^n x - <w|x> xi ||, computed by dividing by a after each
// multiplication so magnitudes stay bounded.
double power_limit_error(const DominantTriple& t, const CVector& x,
                         std::size_t n);

struct RateEnvelope {
  bool passed;      // error(n) <= 1.1 * C * n^{d-1} * gap^n for n in [1, n_max]
  double fitted_c;  // C fitted at n = 1
  double gap;
};
RateEnvelope rate_envelope_check(const DominantTriple& t, const CVector& x,
                                 std::size_t n_max);

}  // namespace opmeas
