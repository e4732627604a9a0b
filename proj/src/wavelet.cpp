#include "opmeas/wavelet.hpp"

#include <cmath>
#include <deque>

#include "opmeas/errors.hpp"
#include "opmeas/kernels.hpp"

namespace opmeas {

namespace {

std::vector<double> real_taps(const FilterBank& fb, const char* who) {
  if (!fb.is_real(0.0))
    throw ShapeError(std::string(who) + ": real taps required");
  std::vector<double> t;
  t.reserve(fb.length());
  for (const cplx& c : fb.taps()) t.push_back(c.real());
  return t;
}

// out[m] = sum_k c_k in[2m - k 2^J] for pre-scaled coefficients c. All read
// indices are even, so a packed copy of the even samples turns each tap into
// one contiguous axpy.
std::vector<double> refine(const std::vector<double>& coeffs,
                           const std::vector<double>& in, std::uint32_t depth) {
  const std::size_t n = in.size();
  const std::size_t half = 1ull << (depth - 1);
  const std::size_t ne = (n + 1) / 2;
  std::vector<double> even(ne);
  for (std::size_t i = 0; i < ne; ++i) even[i] = in[2 * i];

  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    // out[m] += c_k even[m - k 2^{J-1}] over the valid m range
    const std::size_t shift = k * half;
    if (shift >= n) continue;
    const std::size_t len = std::min(ne, n - shift);
    kernels::axpy(coeffs[k], even.data(), out.data() + shift, len);
  }
  return out;
}

// The refinement mask sqrt2 * a_k, written as 2 a_k / sum(a): identical when
// the taps sum to sqrt2, and exact for tap sets whose doubled entries divide
// their own sum (the Haar pair in particular stays a bitwise fixed point).
std::vector<double> scaled_mask(const std::vector<double>& taps,
                                const std::vector<double>& low_taps) {
  double sum = 0.0;
  for (double t : low_taps) sum += t;
  std::vector<double> out(taps.size());
  for (std::size_t k = 0; k < taps.size(); ++k) out[k] = 2.0 * taps[k] / sum;
  return out;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace

DyadicFunction cascade_phi(const FilterBank& fb, std::uint32_t depth) {
  if (depth < 1 || depth > 24)
    throw ResourceError("cascade: depth must be in [1, 24]");
  const std::vector<double> taps = real_taps(fb, "cascade");
  if (fb.sum_residual() > 1e-8)
    throw ValidationError("cascade: taps must sum to sqrt2", fb.sum_residual());

  DyadicFunction f;
  f.depth = depth;
  f.support_end = static_cast<std::uint32_t>(taps.size() - 1);
  const std::size_t n = (static_cast<std::size_t>(f.support_end) << depth) + 1;
  f.samples.assign(n, 0.0);
  for (std::size_t m = 0; m < (1ull << depth); ++m) f.samples[m] = 1.0;

  const std::vector<double> mask = scaled_mask(taps, taps);
  std::deque<double> deltas;
  for (std::uint32_t it = 0; it < depth; ++it) {
    std::vector<double> next = refine(mask, f.samples, depth);
    deltas.push_back(sup_distance(next, f.samples));
    if (deltas.size() > 4) deltas.pop_front();
    f.samples = std::move(next);
  }
  f.last_sup_delta = deltas.empty() ? 0.0 : deltas.back();

  // converged iterations have vanishing tails; otherwise a tail without a
  // single strict decrease counts as divergence
  if (deltas.size() == 4) {
    bool all_tiny = true, any_decrease = false;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (deltas[i] > 1e-14) all_tiny = false;
      if (i > 0 && deltas[i] < deltas[i - 1]) any_decrease = true;
    }
    f.divergence_warning = !all_tiny && !any_decrease;
  }

  const double mass = cell_integral(f);
  if (mass <= 0.0)
    throw NumericError("cascade: non-positive mass, cannot normalize");
  if (mass != 1.0) {
    const double inv = 1.0 / mass;
    for (double& v : f.samples) v *= inv;
  }
  return f;
}

DyadicFunction wavelet_psi(const FilterBank& fb, const DyadicFunction& phi) {
  const std::size_t expect =
      (static_cast<std::size_t>(fb.length() - 1) << phi.depth) + 1;
  if (phi.samples.size() != expect || phi.support_end != fb.length() - 1)
    throw ShapeError("wavelet_psi: grid does not match the filter bank");
  const std::vector<double> low = real_taps(fb, "wavelet_psi");
  std::vector<double> b;
  b.reserve(fb.length());
  for (const cplx& c : highpass_taps(fb)) b.push_back(c.real());
  DyadicFunction psi = phi;
  psi.samples = refine(scaled_mask(b, low), phi.samples, phi.depth);
  psi.divergence_warning = phi.divergence_warning;
  return psi;
}

DyadicFunction packet(const FilterBank& fb, std::uint32_t n, std::uint32_t depth) {
  if (n >= (1u << 16)) throw ResourceError("packet: index must be below 2^16");
  DyadicFunction phi = cascade_phi(fb, depth);
  if (n == 0) return phi;
  // digits of n above the leading 1, applied top-down: phi_n comes from
  // phi_{n >> 1} through the (n & 1) channel
  std::vector<std::uint32_t> path;
  for (std::uint32_t m = n; m > 1; m >>= 1) path.push_back(m & 1);
  const std::vector<double> low = real_taps(fb, "packet");
  std::vector<double> high;
  for (const cplx& c : highpass_taps(fb)) high.push_back(c.real());

  const std::vector<double> low_mask = scaled_mask(low, low);
  const std::vector<double> high_mask = scaled_mask(high, low);
  DyadicFunction cur = wavelet_psi(fb, phi);  // phi_1, the leading bit of n
  // remaining channel bits below the leading one, outermost first
  for (auto it = path.rbegin(); it != path.rend(); ++it)
    cur.samples = refine(*it == 0 ? low_mask : high_mask, cur.samples, depth);
  return cur;
}

double cell_integral(const DyadicFunction& f) {
  if (f.samples.empty()) return 0.0;
  return f.spacing() *
         kernels::sum(f.samples.data(), f.samples.size() - 1);
}

OrthoMoments orthonormality_and_moments(const DyadicFunction& f,
                                        std::uint32_t max_shift) {
  if (f.depth < 8)
    throw ShapeError("orthonormality_and_moments: depth >= 8 required");
  const std::size_t cells = f.samples.size() - 1;
  const double h = f.spacing();
  const std::size_t step = 1ull << f.depth;

  double residual = std::abs(
      h * kernels::dot(f.samples.data(), f.samples.data(), cells) - 1.0);
  for (std::uint32_t k = 1; k <= max_shift; ++k) {
    const std::size_t shift = static_cast<std::size_t>(k) * step;
    if (shift >= cells) break;
    const double ip = h * kernels::dot(f.samples.data() + shift,
                                       f.samples.data(), cells - shift);
    residual = std::max(residual, std::abs(ip));
  }
  return {residual, cell_integral(f)};
}

}  // namespace opmeas
