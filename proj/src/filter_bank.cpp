#include "opmeas/filter_bank.hpp"

#include <cmath>

#include "opmeas/errors.hpp"

namespace opmeas {

namespace {

constexpr double kPi = 3.14159265358979323846;

long div_floor(long a, long b) {
  long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
long div_ceil(long a, long b) { return -div_floor(-a, b); }

// beta normalized into (-pi, pi].
double normalize_beta(double beta) {
  double b = std::remainder(beta, 2.0 * kPi);
  if (b <= -kPi) b += 2.0 * kPi;
  return b;
}

}  // namespace

FilterBank FilterBank::from_taps(std::vector<cplx> taps) {
  if (taps.size() < 2 || taps.size() % 2 != 0)
    throw ShapeError("filter bank: tap count must be even and >= 2");
  FilterBank fb;
  fb.taps_ = std::move(taps);
  const TapValidation v = validate_taps(std::span<const cplx>(fb.taps_));
  fb.qmf_residual_ = v.qmf_residual;
  fb.sum_residual_ = v.sum_residual;
  return fb;
}

FilterBank FilterBank::from_beta(double beta) {
  const double s2 = std::sqrt(2.0);
  const double c = s2 * std::cos(beta), s = s2 * std::sin(beta);
  const double d = 2.0 * s2;
  FilterBank fb = from_taps(
      {cplx{(1 + c) / d}, cplx{(1 + s) / d}, cplx{(1 - c) / d}, cplx{(1 - s) / d}});
  fb.beta_ = beta;
  return fb;
}

bool FilterBank::is_real(double tol) const {
  for (const cplx& t : taps_)
    if (std::abs(t.imag()) > tol) return false;
  return true;
}

TapValidation validate_taps(std::span<const cplx> taps) {
  if (taps.size() < 2 || taps.size() % 2 != 0)
    throw ShapeError("validate_taps: tap count must be even and >= 2");
  const std::size_t len = taps.size();
  double qmf = 0.0;
  for (std::size_t k = 0; 2 * k < len; ++k) {
    cplx acc{};
    for (std::size_t j = 0; j + 2 * k < len; ++j)
      acc += std::conj(taps[j]) * taps[j + 2 * k];
    if (k == 0) acc -= 1.0;
    qmf = std::max(qmf, std::abs(acc));
  }
  cplx sum{};
  for (const cplx& t : taps) sum += t;
  return {qmf, std::abs(sum - std::sqrt(2.0))};
}

std::vector<cplx> highpass_taps(const FilterBank& fb) {
  const auto& a = fb.taps();
  const std::size_t len = a.size();
  std::vector<cplx> b(len);
  for (std::size_t k = 0; k < len; ++k) {
    const cplx v = std::conj(a[len - 1 - k]);
    b[k] = (k % 2 == 0) ? v : -v;
  }
  return b;
}

CMatrix slanted_matrix(std::span<const cplx> taps) {
  if (taps.size() < 2 || taps.size() % 2 != 0)
    throw ShapeError("slanted_matrix: tap count must be even and >= 2");
  const std::size_t n = taps.size() - 1;  // 2D - 1
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const long idx = 2 * static_cast<long>(i) - static_cast<long>(j);
      if (idx >= 0 && idx < static_cast<long>(taps.size()))
        m(i, j) = taps[static_cast<std::size_t>(idx)];
    }
  return m;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::i: return "i";
    case Region::ii: return "ii";
    case Region::boundary: return "boundary";
    case Region::neither: return "neither";
  }
  return "?";
}

BetaDiagnostics beta_diagnostics(double beta) {
  if (!std::isfinite(beta)) throw DomainError("beta_diagnostics: beta not finite");
  FilterBank bank = FilterBank::from_beta(beta);
  const auto& a = bank.taps();
  const double a0 = a[0].real(), a3 = a[3].real();
  const double alpha = std::max(a0 * a0, a3 * a3);
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  const double circle =
      std::abs((a0 - c) * (a0 - c) + (a3 - c) * (a3 - c) - 0.25);

  const double bn = normalize_beta(beta);
  const double q = kPi / 4.0;
  const double btol = 1e-12;
  Region region;
  if (std::abs(std::abs(bn) - q) <= btol || std::abs(std::abs(bn) - 3 * q) <= btol)
    region = Region::boundary;
  else if (std::abs(bn) < q)
    region = Region::i;
  else if (bn > -3 * q && bn < -q)
    region = Region::ii;
  else
    region = Region::neither;

  const double lambda = (std::sin(beta) - std::cos(beta)) / 2.0;
  const double half = 1.0 / std::sqrt(2.0);
  const bool dominance = a0 > half && half > std::abs(lambda);
  return BetaDiagnostics{beta,   std::move(bank),
                         alpha,  circle,
                         region, {cplx{a0}, cplx{half}, cplx{lambda}},
                         dominance};
}

FiniteSequence FiniteSequence::delta(long index, cplx value) {
  return {index, {value}};
}

cplx FiniteSequence::at(long index) const {
  const long off = index - first;
  if (off < 0 || off >= static_cast<long>(coeffs.size())) return {};
  return coeffs[static_cast<std::size_t>(off)];
}

void FiniteSequence::trim() {
  std::size_t lo = 0, hi = coeffs.size();
  while (lo < hi && coeffs[lo] == cplx{}) ++lo;
  while (hi > lo && coeffs[hi - 1] == cplx{}) --hi;
  first += static_cast<long>(lo);
  coeffs.assign(coeffs.begin() + static_cast<long>(lo),
                coeffs.begin() + static_cast<long>(hi));
  if (coeffs.empty()) first = 0;
}

double norm2(const FiniteSequence& x) {
  double s = 0.0;
  for (const cplx& v : x.coeffs) s += std::norm(v);
  return s;
}

cplx inner(const FiniteSequence& a, const FiniteSequence& b) {
  cplx s{};
  for (long k = a.first; k <= a.last(); ++k) s += std::conj(a.at(k)) * b.at(k);
  return s;
}

FiniteSequence ell2_apply(Channel ch, const FilterBank& fb,
                          const FiniteSequence& x) {
  FiniteSequence y;
  if (x.empty()) return y;
  const auto& a = fb.taps();
  const long lmax = static_cast<long>(a.size()) - 1;
  const long kmin = x.first, kmax = x.last();
  long jmin, jmax;
  if (ch == Channel::low) {
    // need 0 <= 2j - k <= lmax
    jmin = div_ceil(kmin, 2);
    jmax = div_floor(kmax + lmax, 2);
  } else {
    // need 0 <= 1 - 2j + k <= lmax
    jmin = div_ceil(kmin + 1 - lmax, 2);
    jmax = div_floor(kmax + 1, 2);
  }
  y.first = jmin;
  y.coeffs.assign(static_cast<std::size_t>(jmax - jmin + 1), cplx{});
  for (long j = jmin; j <= jmax; ++j) {
    cplx acc{};
    for (long k = kmin; k <= kmax; ++k) {
      if (ch == Channel::low) {
        const long idx = 2 * j - k;
        if (idx >= 0 && idx <= lmax)
          acc += a[static_cast<std::size_t>(idx)] * x.at(k);
      } else {
        const long idx = 1 - 2 * j + k;
        if (idx >= 0 && idx <= lmax) {
          const cplx t = std::conj(a[static_cast<std::size_t>(idx)]);
          acc += ((k % 2 + 2) % 2 == 0 ? t : -t) * x.at(k);
        }
      }
    }
    y.coeffs[static_cast<std::size_t>(j - jmin)] = acc;
  }
  y.trim();
  return y;
}

FiniteSequence ell2_adjoint_apply(Channel ch, const FilterBank& fb,
                                  const FiniteSequence& x) {
  FiniteSequence y;
  if (x.empty()) return y;
  const auto& a = fb.taps();
  const long lmax = static_cast<long>(a.size()) - 1;
  const long jmin = x.first, jmax = x.last();
  long kmin, kmax;
  if (ch == Channel::low) {
    // z_k = sum_j conj(a_{2j-k}) x_j, need 0 <= 2j - k <= lmax
    kmin = 2 * jmin - lmax;
    kmax = 2 * jmax;
  } else {
    // z_k = (-1)^k sum_j a_{1-2j+k} x_j, need 0 <= 1 - 2j + k <= lmax
    kmin = 2 * jmin - 1;
    kmax = 2 * jmax - 1 + lmax;
  }
  y.first = kmin;
  y.coeffs.assign(static_cast<std::size_t>(kmax - kmin + 1), cplx{});
  for (long k = kmin; k <= kmax; ++k) {
    cplx acc{};
    for (long j = jmin; j <= jmax; ++j) {
      if (ch == Channel::low) {
        const long idx = 2 * j - k;
        if (idx >= 0 && idx <= lmax)
          acc += std::conj(a[static_cast<std::size_t>(idx)]) * x.at(j);
      } else {
        const long idx = 1 - 2 * j + k;
        if (idx >= 0 && idx <= lmax)
          acc += a[static_cast<std::size_t>(idx)] * x.at(j);
      }
    }
    if (ch == Channel::high && ((k % 2 + 2) % 2 != 0)) acc = -acc;
    y.coeffs[static_cast<std::size_t>(k - kmin)] = acc;
  }
  y.trim();
  return y;
}

}  // namespace opmeas
