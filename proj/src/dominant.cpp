#include "opmeas/dominant.hpp"

#include <algorithm>
#include <cmath>

#include "opmeas/errors.hpp"

namespace opmeas {

namespace {

constexpr double kGapTol = 1e-9;

// Unitary with first column w (Householder reflector mapping e_0 to w,
// up to phase); columns 1..d-1 form an orthonormal basis of w-perp.
CMatrix basis_with_first_column(const CVector& w) {
  const std::size_t d = w.size();
  CMatrix q = CMatrix::identity(d);
  // u = w - phase * e_0 with phase chosen to avoid cancellation
  const double w0 = std::abs(w[0]);
  const cplx phase = (w0 > 0) ? w[0] / w0 : cplx(1.0);
  CVector u = w;
  u[0] += phase;
  const double un2 = norm2(u);
  if (un2 < 1e-300) return q;
  // H = (I - 2 u u* / ||u||^2) * (-phase) has first column w
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const cplx h = ((i == j) ? 1.0 : 0.0) - 2.0 * u[i] * std::conj(u[j]) / un2;
      q(i, j) = -phase * h;
    }
  return q;
}

struct BlockForm {
  CMatrix q;    // unitary, first column = w
  CVector eta;  // projection of F w onto w-perp, in the q basis (d-1 entries)
  CMatrix g;    // compression of F to w-perp (d-1 x d-1)
};

BlockForm block_decompose(const DominantTriple& t) {
  const std::size_t d = t.w.size();
  BlockForm b;
  b.q = basis_with_first_column(t.w);
  const CMatrix fb = b.q.adjoint() * t.f * b.q;
  b.eta.resize(d - 1);
  b.g = CMatrix(d - 1, d - 1);
  for (std::size_t i = 1; i < d; ++i) {
    b.eta[i - 1] = fb(i, 0);
    for (std::size_t j = 1; j < d; ++j) b.g(i - 1, j - 1) = fb(i, j);
  }
  return b;
}

}  // namespace

DominantTriple make_dominant_triple(CMatrix f, cplx a, CVector w) {
  if (!f.is_square() || f.rows() == 0)
    throw ShapeError("dominant triple: square matrix required");
  if (w.size() != f.rows())
    throw ShapeError("dominant triple: vector dimension mismatch");
  if (std::abs(norm(w) - 1.0) > 1e-10)
    throw ValidationError("dominant triple: w is not a unit vector",
                          std::abs(norm(w) - 1.0));
  CVector fw = f.apply_adjoint(w);
  for (std::size_t i = 0; i < w.size(); ++i) fw[i] -= std::conj(a) * w[i];
  const double eig_res = norm(fw);
  if (eig_res > 1e-10)
    throw ValidationError("dominant triple: F* w != conj(a) w", eig_res);

  const std::vector<cplx> eigs = eigenvalues(f);
  std::size_t nearest = 0;
  double best = std::abs(eigs[0] - a);
  for (std::size_t i = 1; i < eigs.size(); ++i) {
    const double dist = std::abs(eigs[i] - a);
    if (dist < best) {
      best = dist;
      nearest = i;
    }
  }
  if (best > kGapTol * (std::abs(a) + 1e-30))
    throw ValidationError("dominant triple: a is not in spec(F)", best);
  std::size_t mult = 0;
  for (const cplx& l : eigs)
    if (std::abs(l - a) <= kGapTol * (std::abs(a) + 1e-30)) ++mult;
  if (mult != 1)
    throw ValidationError("dominant triple: algebraic multiplicity of a is not one",
                          static_cast<double>(mult));
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (i == nearest) continue;
    if (std::abs(a) - std::abs(eigs[i]) <= kGapTol * std::abs(a))
      throw ValidationError("dominant triple: a is not strictly dominant",
                            std::abs(eigs[i]) / std::abs(a));
  }
  return {std::move(f), a, std::move(w)};
}

double spectral_gap(const DominantTriple& t) {
  const std::vector<cplx> eigs = eigenvalues(t.f);
  std::size_t nearest = 0;
  double best = std::abs(eigs[0] - t.a);
  for (std::size_t i = 1; i < eigs.size(); ++i)
    if (std::abs(eigs[i] - t.a) < best) {
      best = std::abs(eigs[i] - t.a);
      nearest = i;
    }
  double second = 0.0;
  for (std::size_t i = 0; i < eigs.size(); ++i)
    if (i != nearest) second = std::max(second, std::abs(eigs[i]));
  return second / std::abs(t.a);
}

CVector principal_right_vector(const DominantTriple& t) {
  const std::size_t d = t.w.size();
  if (d == 1) return t.w;  // <w|w> = 1 already
  BlockForm b = block_decompose(t);
  // refuse when a sits in spec(G): the inverse is not defined
  for (const cplx& l : eigenvalues(b.g))
    if (std::abs(l - t.a) <= kGapTol * (std::abs(t.a) + 1e-30))
      throw DegenerateSpectrumError(
          "principal vector: a lies in the spectrum of the compression G");
  CMatrix shifted = CMatrix::identity(d - 1) * t.a - b.g;
  CVector y = solve(shifted, b.eta);
  CVector xi_basis(d);
  xi_basis[0] = 1.0;
  for (std::size_t i = 1; i < d; ++i) xi_basis[i] = y[i - 1];
  return b.q.apply(xi_basis);
}

CVector filter_principal_vector(const FilterBank& fb) {
  const auto& taps = fb.taps();
  const cplx a0 = taps[0];
  const cplx alast = taps[taps.size() - 1];
  if (std::abs(a0 * alast) <= 1e-12)
    throw HypothesisError("filter principal vector: a_0 * a_{2D-1} vanishes");
  const CMatrix f0 = slanted_matrix(taps);
  const std::size_t d = f0.rows();
  if (d == 1) return {cplx(1.0)};

  CMatrix g(d - 1, d - 1);
  for (std::size_t i = 1; i < d; ++i)
    for (std::size_t j = 1; j < d; ++j) g(i - 1, j - 1) = f0(i, j);
  CVector rhs(d - 1);
  for (std::size_t i = 1; i < d; ++i) rhs[i - 1] = f0(i, 0);

  if (norm2(rhs) == 0.0) {
    // zero inhomogeneity: e_0 is already the eigenvector
    CVector v(d);
    v[0] = 1.0;
    return v;
  }

  CMatrix shifted = CMatrix::identity(d - 1) * a0 - g;
  // p(a_0) = det(a_0 I - G) must stay away from zero (simple eigenvalue)
  cplx det{1.0};
  for (const cplx& l : eigenvalues(shifted)) det *= l;
  if (std::abs(det) < 1e-12)
    throw DegenerateSpectrumError(
        "filter principal vector: det(a_0 I - G) below 1e-12");
  CVector tail = solve(shifted, rhs);
  CVector v(d);
  v[0] = 1.0;
  for (std::size_t i = 1; i < d; ++i) v[i] = tail[i - 1];
  return v;
}

double power_limit_error(const DominantTriple& t, const CVector& x,
                         std::size_t n) {
  if (x.size() != t.w.size())
    throw ShapeError("power_limit_error: dimension mismatch");
  const CVector xi = principal_right_vector(t);
  const cplx wx = inner(t.w, x);
  CVector y = x;
  for (std::size_t step = 0; step < n; ++step) {
    y = t.f.apply(y);
    for (cplx& c : y) c /= t.a;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::norm(y[i] - wx * xi[i]);
  return std::sqrt(s);
}

RateEnvelope rate_envelope_check(const DominantTriple& t, const CVector& x,
                                 std::size_t n_max) {
  const double gap = spectral_gap(t);
  const std::size_t d = t.w.size();
  const CVector xi = principal_right_vector(t);
  const cplx wx = inner(t.w, x);
  // accuracy floor: once the iterate has converged, the residual sits at
  // rounding level, which scales with the limit vector and the probe
  const double floor = 1e-11 * (1.0 + std::abs(wx) * norm(xi) + norm(x));

  CVector y = x;
  double fitted_c = 0.0;
  bool passed = true;
  for (std::size_t n = 1; n <= n_max; ++n) {
    y = t.f.apply(y);
    for (cplx& c : y) c /= t.a;
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::norm(y[i] - wx * xi[i]);
    const double err = std::sqrt(s);
    if (n == 1) {
      fitted_c = (gap > 0.0) ? err / gap : err;
      continue;
    }
    const double envelope =
        1.1 * fitted_c * std::pow(static_cast<double>(n), static_cast<double>(d - 1)) *
            std::pow(gap, static_cast<double>(n)) +
        floor;
    if (err > envelope) passed = false;
  }
  return {passed, fitted_c, gap};
}

}  // namespace opmeas
