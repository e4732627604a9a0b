#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "opmeas/cylinder.hpp"
#include "opmeas/filter_bank.hpp"
#include "opmeas/measurement.hpp"

// Theoretical fractal scales, dominance hypotheses, empirical exponent
// envelopes over N-adic trees and the asymptotic ratio checks.

namespace opmeas {

// log(replicas) / log(magnification) for a self-similar set.
double ifs_dimension(std::uint64_t replicas, double magnification);

struct TheoreticalScale {
  double alpha;  // max(|a_0|^2, |a_{2D-1}|^2)
  double s;      // log2(1 / alpha)
};
// Requires a_0 * a_{2D-1} != 0.
TheoreticalScale theoretical_scale(const FilterBank& fb);

struct Thm31Hypotheses {
  bool nonvanishing_ok;  // a_0 * a_{2D-1} != 0
  bool dominance_ok;     // |a_0| strictly dominates spec(F_0) \ {a_0}
  bool multiplicity_ok;  // algebraic multiplicity of a_0 is one
  double spectral_gap;   // |second largest| / |a_0|
  bool all() const { return nonvanishing_ok && dominance_ok && multiplicity_ok; }
};
// Flags computed from the eigenvalues of the slanted low-pass matrix with a
// relative gap tolerance of 1e-9.
Thm31Hypotheses check_thm31_hypotheses(const FilterBank& fb);

struct ScaleLevel {
  std::uint32_t level;
  double min_exponent;  // over words with log-measure above the threshold
  double max_exponent;
  std::uint64_t positive_words;  // surviving words (sample size when sampled)
  bool sampled;
  double zeros_branch_exponent;  // exponent of the all-zeros word
};

struct ScaleReport {
  std::optional<double> theoretical_s;
  std::vector<ScaleLevel> levels;
};

struct ScaleProfileOptions {
  std::uint64_t exhaustive_budget = 1u << 18;  // words per level
  std::uint64_t sample_budget = 1u << 14;      // kept branches beyond that
  bool allow_sampling = true;
  double log_threshold = -700.0;  // natural-log pruning cut
  std::uint64_t seed = 0;
};

// Per level k, the exponent of a word w is log mu(C(w)) / log N^{-k}.
// Exhaustive through the word budget, then seeded uniform subtree sampling.
// Log-space throughout, so deep levels do not underflow.
ScaleReport empirical_scale_profile(const MeasurementSystem& sys,
                                    const PureState& psi,
                                    std::uint32_t max_level,
                                    const ScaleProfileOptions& opts = {});

// r_n = mu_0(base extended by n low digits) / 2^{-s (k+n)} for n = 0..n_max,
// with s from theoretical_scale. When alpha = |a_{2D-1}|^2 the extension
// uses the high digit instead (right-end subintervals).
std::vector<double> thm21_lower_bound_check(const FilterBank& fb,
                                            const Word& base,
                                            std::size_t n_max);

struct Thm31Limit {
  std::vector<double> r;   // r_n = |a_0|^{-2n} mu_0(base . 0^n), n = 0..n_max
  double predicted_limit;  // |a_0|^{2#0} |a_{2D-1}|^{2#1} ||v||^2 over base
  double gap;
  std::size_t dimension;
  bool slow_convergence;  // gap >= 0.95: expect C n^{d-1} gap^n decay only
};
// Requires all Theorem 3.1 hypotheses.
Thm31Limit thm31_limit_check(const FilterBank& fb, const Word& base,
                             std::size_t n_max);

}  // namespace opmeas
