#include "opmeas/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "opmeas/dominant.hpp"
#include "opmeas/errors.hpp"
#include "opmeas/kernels.hpp"

namespace opmeas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Keeps the planar batch arrays below ~128 MiB regardless of dimension.
std::uint64_t effective_budget(std::uint64_t requested, std::size_t dim,
                               std::size_t alphabet) {
  const std::uint64_t cap = (1ull << 23) / (dim * alphabet);
  return std::min(requested, std::max<std::uint64_t>(cap, 1));
}

}  // namespace

double ifs_dimension(std::uint64_t replicas, double magnification) {
  if (replicas < 1) throw DomainError("ifs_dimension: replicas must be >= 1");
  if (!(magnification > 1.0))
    throw DomainError("ifs_dimension: magnification must exceed 1");
  return std::log(static_cast<double>(replicas)) / std::log(magnification);
}

TheoreticalScale theoretical_scale(const FilterBank& fb) {
  const auto& taps = fb.taps();
  const cplx a0 = taps.front(), alast = taps.back();
  if (std::abs(a0 * alast) <= 1e-12)
    throw HypothesisError("theoretical_scale: a_0 * a_{2D-1} vanishes");
  const double alpha = std::max(std::norm(a0), std::norm(alast));
  return {alpha, -std::log(alpha) / std::log(2.0)};
}

Thm31Hypotheses check_thm31_hypotheses(const FilterBank& fb) {
  const auto& taps = fb.taps();
  const cplx a0 = taps.front(), alast = taps.back();
  Thm31Hypotheses h{};
  h.nonvanishing_ok = std::abs(a0 * alast) > 1e-12;

  const std::vector<cplx> eigs = eigenvalues(slanted_matrix(taps));
  const double tol = 1e-9 * (std::abs(a0) + 1e-30);
  std::size_t nearest = 0;
  double best = std::abs(eigs[0] - a0);
  for (std::size_t i = 1; i < eigs.size(); ++i)
    if (std::abs(eigs[i] - a0) < best) {
      best = std::abs(eigs[i] - a0);
      nearest = i;
    }
  std::size_t mult = 0;
  for (const cplx& l : eigs)
    if (std::abs(l - a0) <= tol) ++mult;
  h.multiplicity_ok = (mult == 1);

  double second = 0.0;
  bool dominated = true;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (i == nearest) continue;
    second = std::max(second, std::abs(eigs[i]));
    if (std::abs(a0) - std::abs(eigs[i]) <= 1e-9 * std::abs(a0)) dominated = false;
  }
  h.dominance_ok = dominated && std::abs(a0) > 0.0;
  h.spectral_gap = (std::abs(a0) > 0.0) ? second / std::abs(a0) : kInf;
  return h;
}

ScaleReport empirical_scale_profile(const MeasurementSystem& sys,
                                    const PureState& psi,
                                    std::uint32_t max_level,
                                    const ScaleProfileOptions& opts) {
  const std::size_t d = sys.dim();
  const std::size_t nch = sys.alphabet_size();
  const double logN = std::log(static_cast<double>(nch));
  const std::uint64_t exhaustive =
      effective_budget(opts.exhaustive_budget, d, nch);
  const std::uint64_t sample_keep =
      std::max<std::uint64_t>(1, effective_budget(opts.sample_budget, d, nch));
  std::mt19937_64 rng(opts.seed);

  ScaleReport report;

  // planar batch: comp[j][m] = component j of (unit) state m
  std::vector<std::vector<cplx>> comp(d);
  for (std::size_t j = 0; j < d; ++j) comp[j].assign(1, psi.vec()[j]);
  std::vector<double> logmu{0.0};

  // the all-zeros branch is tracked separately in log space
  CVector zstate = psi.vec();
  double zlog = 0.0;

  double words_at_level = 1.0;
  for (std::uint32_t k = 1; k <= max_level && !logmu.empty(); ++k) {
    words_at_level *= static_cast<double>(nch);
    const bool beyond = words_at_level > static_cast<double>(exhaustive);
    if (beyond && !opts.allow_sampling)
      throw ResourceError("scale profile: level budget exceeded at level " +
                          std::to_string(k) + " and sampling is disabled");

    const std::size_t m = logmu.size();
    const std::size_t mn = m * nch;
    std::vector<std::vector<cplx>> next(d);
    for (std::size_t i = 0; i < d; ++i) next[i].assign(mn, cplx{});
    for (std::size_t c = 0; c < nch; ++c) {
      const CMatrix& f = sys.op(c);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          const cplx a = f(i, j);
          if (a == cplx{}) continue;
          kernels::zaxpy(a, comp[j].data(), next[i].data() + c * m, m);
        }
    }
    std::vector<double> nrm2(mn, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      kernels::zabs2_accum(next[i].data(), nrm2.data(), mn);

    // child log measures; block c holds children by digit c of parent m
    std::vector<double> childlog(mn);
    for (std::size_t idx = 0; idx < mn; ++idx)
      childlog[idx] =
          (nrm2[idx] < 1e-300)
              ? -kInf
              : logmu[idx % m] + std::log(nrm2[idx]);

    std::vector<std::size_t> keep;
    keep.reserve(mn);
    for (std::size_t idx = 0; idx < mn; ++idx)
      if (childlog[idx] > opts.log_threshold) keep.push_back(idx);

    ScaleLevel lvl{};
    lvl.level = k;
    lvl.positive_words = keep.size();
    lvl.sampled = beyond;
    const double denom = static_cast<double>(k) * logN;
    if (!keep.empty()) {
      double lo = kInf, hi = -kInf;
      for (std::size_t idx : keep) {
        lo = std::min(lo, childlog[idx]);
        hi = std::max(hi, childlog[idx]);
      }
      lvl.min_exponent = -hi / denom;
      lvl.max_exponent = -lo / denom;
    } else {
      lvl.min_exponent = lvl.max_exponent = kInf;
    }

    // zeros branch
    zstate = sys.op(0).apply(zstate);
    const double zn2 = norm2(zstate);
    if (zn2 < 1e-300 || zlog == -kInf) {
      zlog = -kInf;
      lvl.zeros_branch_exponent = kInf;
    } else {
      zlog += std::log(zn2);
      const double inv = 1.0 / std::sqrt(zn2);
      for (cplx& cval : zstate) cval *= inv;
      lvl.zeros_branch_exponent = -zlog / denom;
    }
    report.levels.push_back(lvl);

    if (beyond && keep.size() > sample_keep) {
      std::vector<std::size_t> sampled;
      sampled.reserve(sample_keep);
      std::sample(keep.begin(), keep.end(), std::back_inserter(sampled),
                  sample_keep, rng);
      keep = std::move(sampled);
    }

    // compact survivors and renormalize them to unit states
    const std::size_t kept = keep.size();
    std::vector<double> inv_norm(kept);
    std::vector<double> new_log(kept);
    for (std::size_t t = 0; t < kept; ++t) {
      inv_norm[t] = 1.0 / std::sqrt(nrm2[keep[t]]);
      new_log[t] = childlog[keep[t]];
    }
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<cplx> packed(kept);
      for (std::size_t t = 0; t < kept; ++t) packed[t] = next[i][keep[t]];
      kernels::zscale_real(inv_norm.data(), packed.data(), kept);
      comp[i] = std::move(packed);
    }
    logmu = std::move(new_log);
  }
  return report;
}

std::vector<double> thm21_lower_bound_check(const FilterBank& fb,
                                            const Word& base,
                                            std::size_t n_max) {
  const TheoreticalScale ts = theoretical_scale(fb);
  const auto& taps = fb.taps();
  const std::uint8_t ext =
      (std::norm(taps.front()) >= std::norm(taps.back())) ? 0 : 1;
  const MeasurementSystem sys = from_filter_bank(fb);
  const PureState e0 = PureState::basis(sys.dim(), 0);

  const double ln2 = std::log(2.0);
  const std::size_t k = base.length();
  std::vector<double> out;
  out.reserve(n_max + 1);

  CVector state = e0.vec();
  double acc = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    state = sys.op(base.digit(j)).apply(state);
    const double n2 = norm2(state);
    if (n2 < 1e-300) throw NumericError("thm21 check: base word has zero measure");
    acc += std::log(n2);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& c : state) c *= inv;
  }
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.push_back(std::exp(acc + ts.s * static_cast<double>(k + n) * ln2));
    state = sys.op(ext).apply(state);
    const double n2 = norm2(state);
    if (n2 < 1e-300) throw NumericError("thm21 check: extension hit zero measure");
    acc += std::log(n2);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& c : state) c *= inv;
  }
  return out;
}

Thm31Limit thm31_limit_check(const FilterBank& fb, const Word& base,
                             std::size_t n_max) {
  const Thm31Hypotheses hyps = check_thm31_hypotheses(fb);
  if (!hyps.all())
    throw HypothesisError("thm31 check: dominance hypotheses fail for F_0");
  const auto& taps = fb.taps();
  const CVector v = filter_principal_vector(fb);
  const MeasurementSystem sys = from_filter_bank(fb);
  const PureState e0 = PureState::basis(sys.dim(), 0);

  Thm31Limit result;
  result.gap = hyps.spectral_gap;
  result.dimension = sys.dim();
  result.slow_convergence = hyps.spectral_gap >= 0.95;
  const std::size_t zeros = base.count_digit(0);
  const std::size_t ones = base.length() - zeros;
  result.predicted_limit = std::pow(std::norm(taps.front()), double(zeros)) *
                           std::pow(std::norm(taps.back()), double(ones)) *
                           norm2(v);

  const double log_a0_sq = std::log(std::norm(taps.front()));
  CVector state = e0.vec();
  double acc = 0.0;
  for (std::size_t j = 0; j < base.length(); ++j) {
    state = sys.op(base.digit(j)).apply(state);
    const double n2 = norm2(state);
    if (n2 < 1e-300) throw NumericError("thm31 check: base word has zero measure");
    acc += std::log(n2);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& c : state) c *= inv;
  }
  result.r.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    result.r.push_back(std::exp(acc - static_cast<double>(n) * log_a0_sq));
    state = sys.op(0).apply(state);
    const double n2 = norm2(state);
    if (n2 < 1e-300) throw NumericError("thm31 check: extension hit zero measure");
    acc += std::log(n2);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& c : state) c *= inv;
  }
  return result;
}

}  // namespace opmeas
