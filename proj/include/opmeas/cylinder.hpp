#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "opmeas/matrix.hpp"
#include "opmeas/measurement.hpp"

// Words over Z_N, the operator-valued measure on cylinder sets, the induced
// scalar measures, the N-adic interval dictionary and trajectory sampling.
//
// Digit-application order: the first digit of a word acts first, i.e. the
// word (i_1, ..., i_k) produces the product F_{i_k} ... F_{i_1}. This is
// load-bearing for non-commuting operators and is pinned by tests.

namespace opmeas {

class Word {
 public:
  Word(std::size_t alphabet, std::vector<std::uint8_t> digits = {});
  // Parses a digit string such as "0212"; every digit must be < alphabet.
  static Word parse(std::string_view text, std::size_t alphabet);

  std::size_t alphabet() const { return n_; }
  std::size_t length() const { return digits_.size(); }
  bool empty() const { return digits_.empty(); }
  std::uint8_t digit(std::size_t j) const { return digits_[j]; }
  const std::vector<std::uint8_t>& digits() const { return digits_; }

  Word extended(std::uint8_t next) const;
  Word repeated_extension(std::uint8_t digit, std::size_t count) const;
  std::size_t count_digit(std::uint8_t digit) const;
  std::string str() const;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> digits_;
};

// Half-open interval [xi, xi + N^-level) with xi = xi_num / N^level held
// exactly as an integer pair.
struct NAdicInterval {
  std::uint64_t xi_num = 0;
  std::uint32_t level = 0;
  std::uint32_t base = 2;
};

NAdicInterval word_to_interval(const Word& w);

// P(C(w)) = F_{i_1}* ... F_{i_k}* F_{i_k} ... F_{i_1}; the empty word gives
// the identity. Diagnostics (hermitian defect, minimum eigenvalue, norm) are
// available through psd_residual / operator_norm on the result.
CMatrix operator_measure(const MeasurementSystem& sys, const Word& w);

// mu_psi(C(w)) = || F_{i_k} ... F_{i_1} psi ||^2 (raw, not clamped).
double scalar_measure(const MeasurementSystem& sys, const PureState& psi,
                      const Word& w);

// Natural log of the above, renormalizing the state after each application;
// -infinity once the running squared norm falls below 1e-300.
double log_scalar_measure(const MeasurementSystem& sys, const PureState& psi,
                          const Word& w);

// || P(C(w)) - sum_j P(C(w j)) ||.
double consistency_residual(const MeasurementSystem& sys, const Word& w);

// || sum_{|w| = k} P(C(w)) - I ||; guarded by N^k <= 2^20.
double partition_identity_residual(const MeasurementSystem& sys,
                                   std::uint32_t level);

// One seeded trajectory: each digit drawn with probability
// || F_i psi' ||^2 from the normalized post-measurement state psi'.
// Deterministic for a fixed seed (mt19937_64, 53-bit uniforms).
Word sample_trajectory(const MeasurementSystem& sys, const PureState& psi,
                       std::size_t length, std::uint64_t seed);

// splitmix64 stream derivation for per-trajectory seeds in ensembles.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + index * 0x9e3779b97f4a7c15ull + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// max over triadic level-k intervals J of
//   | mu(J) - (mu(3J inter [0,1)) + mu((3J - 2) inter [0,1))) / 2 |
// for the cantor3 measure; both dilates are grid-aligned, so the
// intersections are all-or-nothing.
double cantor_self_similarity_residual(std::uint32_t level);

}  // namespace opmeas
