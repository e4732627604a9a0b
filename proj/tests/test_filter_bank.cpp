#include <doctest.h>

#include <cmath>
#include <random>

#include "opmeas/errors.hpp"
#include "opmeas/filter_bank.hpp"

using namespace opmeas;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kR2 = std::sqrt(2.0);

FiniteSequence random_sequence(std::mt19937_64& rng, long first, std::size_t n) {
  std::normal_distribution<double> g;
  FiniteSequence s{first, {}};
  s.coeffs.resize(n);
  for (cplx& c : s.coeffs) c = {g(rng), g(rng)};
  return s;
}

}  // namespace

TEST_CASE("taps_from_beta at the classical parameters") {
  const auto haar = FilterBank::from_beta(kPi / 4).taps();
  CHECK(std::abs(haar[0] - 1.0 / kR2) < 1e-12);
  CHECK(std::abs(haar[1] - 1.0 / kR2) < 1e-12);
  CHECK(std::abs(haar[2]) < 1e-12);
  CHECK(std::abs(haar[3]) < 1e-12);

  // exact radicals for beta = 5 pi / 12
  const auto daub = FilterBank::from_beta(5 * kPi / 12).taps();
  const double s3 = std::sqrt(3.0);
  CHECK(std::abs(daub[0] - (1 + s3) / (4 * kR2)) < 1e-14);
  CHECK(std::abs(daub[1] - (3 + s3) / (4 * kR2)) < 1e-14);
  CHECK(std::abs(daub[2] - (3 - s3) / (4 * kR2)) < 1e-14);
  CHECK(std::abs(daub[3] - (1 - s3) / (4 * kR2)) < 1e-14);

  // frozen numeric evaluation at beta = 0.3
  const auto t = FilterBank::from_beta(0.3).taps();
  CHECK(std::abs(t[0] - 0.83122163515607677) < 1e-12);
  CHECK(std::abs(t[1] - 0.50131349392394355) < 1e-12);
  CHECK(std::abs(t[2] - (-0.12411485396952925)) < 1e-12);
  CHECK(std::abs(t[3] - 0.20579328726260397) < 1e-12);
  cplx sum{};
  for (const cplx& a : t) sum += a;
  CHECK(std::abs(sum - kR2) < 1e-12);
}

TEST_CASE("validate_taps") {
  const auto haar = validate_taps(FilterBank::from_beta(kPi / 4));
  CHECK(haar.qmf_residual < 1e-15);
  CHECK(haar.sum_residual < 1e-15);

  const FilterBank unit = FilterBank::from_taps({1.0, 0.0, 0.0, 0.0});
  CHECK(unit.qmf_residual() == 0.0);
  CHECK(unit.sum_residual() == doctest::Approx(0.41421356237309515).epsilon(1e-14));

  const auto daub = validate_taps(FilterBank::from_beta(5 * kPi / 12));
  CHECK(daub.qmf_residual < 1e-12);
  CHECK(daub.sum_residual < 1e-12);

  CHECK_THROWS_AS(FilterBank::from_taps({1.0, 0.0, 0.0}), ShapeError);
}

TEST_CASE("highpass taps") {
  const auto haar = highpass_taps(FilterBank::from_beta(kPi / 4));
  CHECK(std::abs(haar[0]) < 1e-12);
  CHECK(std::abs(haar[1]) < 1e-12);
  CHECK(std::abs(haar[2] - 1.0 / kR2) < 1e-12);
  CHECK(std::abs(haar[3] + 1.0 / kR2) < 1e-12);

  const FilterBank fb = FilterBank::from_taps({0.1, 0.2, 0.3, 0.4});
  const auto hp = highpass_taps(fb);
  CHECK(hp[0] == cplx{0.4});
  CHECK(hp[1] == cplx{-0.3});
  CHECK(hp[2] == cplx{0.2});
  CHECK(hp[3] == cplx{-0.1});

  // applying the map twice negates real taps
  const auto twice = highpass_taps(FilterBank::from_taps(hp));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(twice[i] == -fb.taps()[i]);
}

TEST_CASE("slanted matrix layout") {
  const cplx a0{0.1}, a1{0.2}, a2{0.3}, a3{0.4};
  const CMatrix m = slanted_matrix(std::vector<cplx>{a0, a1, a2, a3});
  CHECK(m.rows() == 3);
  CHECK(m(0, 0) == a0);
  CHECK(m(0, 1) == cplx{});
  CHECK(m(0, 2) == cplx{});
  CHECK(m(1, 0) == a2);
  CHECK(m(1, 1) == a1);
  CHECK(m(1, 2) == a0);
  CHECK(m(2, 0) == cplx{});
  CHECK(m(2, 1) == a3);
  CHECK(m(2, 2) == a2);

  const CMatrix one = slanted_matrix(std::vector<cplx>{a0, a1});
  CHECK(one.rows() == 1);
  CHECK(one(0, 0) == a0);

  // high-pass slanted rows for real taps
  const auto hp = highpass_taps(FilterBank::from_taps({a0, a1, a2, a3}));
  const CMatrix h = slanted_matrix(hp);
  CHECK(h(0, 0) == a3);
  CHECK(h(1, 0) == a1);
  CHECK(h(1, 1) == -a2);
  CHECK(h(1, 2) == a3);
  CHECK(h(2, 1) == -a0);
  CHECK(h(2, 2) == a1);
}

TEST_CASE("beta diagnostics at pinned parameters") {
  const BetaDiagnostics d = beta_diagnostics(0.3);
  CHECK(d.alpha == doctest::Approx(0.69092940675154200).epsilon(1e-12));
  CHECK(d.region == Region::i);
  CHECK(std::abs(d.closed_form_spectrum[0] - 0.83122163515607677) < 1e-12);
  CHECK(std::abs(d.closed_form_spectrum[1] - 0.70710678118654752) < 1e-12);
  CHECK(std::abs(d.closed_form_spectrum[2] - (-0.32990814123213322)) < 1e-12);
  CHECK(d.dominance_ok);
  CHECK(d.circle_residual < 1e-12);

  const BetaDiagnostics h = beta_diagnostics(kPi / 4);
  CHECK(h.alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(h.region == Region::boundary);
  CHECK(std::abs(h.closed_form_spectrum[0] - 1.0 / kR2) < 1e-12);
  CHECK(std::abs(h.closed_form_spectrum[1] - 1.0 / kR2) < 1e-12);
  CHECK(std::abs(h.closed_form_spectrum[2]) < 1e-12);
  CHECK_FALSE(h.dominance_ok);

  const BetaDiagnostics m = beta_diagnostics(-kPi / 2);
  CHECK(std::abs(m.taps.taps()[3] - 0.85355339059327376) < 1e-12);
  CHECK(m.alpha == doctest::Approx(0.72855339059327376).epsilon(1e-12));
  CHECK(m.region == Region::ii);

  CHECK(beta_diagnostics(5 * kPi / 12).region == Region::neither);
  // normalization into (-pi, pi]
  CHECK(beta_diagnostics(0.3 + 2 * kPi).region == Region::i);
}

TEST_CASE("circle identity for the three tap pairs") {
  const double c = 1.0 / (2.0 * kR2);
  for (int i = 0; i < 64; ++i) {
    const double beta = -kPi + 2 * kPi * (i + 0.5) / 64.0;
    const auto t = FilterBank::from_beta(beta).taps();
    const double a0 = t[0].real(), a1 = t[1].real(), a2 = t[2].real(),
                 a3 = t[3].real();
    CHECK(std::abs((a0 - c) * (a0 - c) + (a3 - c) * (a3 - c) - 0.25) < 1e-12);
    CHECK(std::abs((a0 - c) * (a0 - c) + (a1 - c) * (a1 - c) - 0.25) < 1e-12);
    CHECK(std::abs((a1 - c) * (a1 - c) + (a2 - c) * (a2 - c) - 0.25) < 1e-12);
  }
}

TEST_CASE("slanted spectrum matches the closed form across beta") {
  for (int i = 0; i < 64; ++i) {
    const double beta = -kPi + 2 * kPi * (i + 0.5) / 64.0;
    const BetaDiagnostics d = beta_diagnostics(beta);
    auto eig = eigenvalues(slanted_matrix(d.taps.taps()));
    // compare as multisets: sort the closed form by the same ordering
    std::vector<cplx> expect(d.closed_form_spectrum.begin(),
                             d.closed_form_spectrum.end());
    std::sort(expect.begin(), expect.end(), [](const cplx& a, const cplx& b) {
      if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
      return a.real() > b.real();
    });
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(eig[j] - expect[j]) < 1e-9);
  }
}

TEST_CASE("ell2 channel operators on deltas") {
  const FilterBank haar = FilterBank::from_beta(kPi / 4);
  const FiniteSequence d0 = FiniteSequence::delta(0);

  const FiniteSequence low = ell2_apply(Channel::low, haar, d0);
  CHECK(std::abs(low.at(0) - 1.0 / kR2) < 1e-12);
  CHECK(norm2(low) == doctest::Approx(0.5).epsilon(1e-12));

  const FiniteSequence high = ell2_apply(Channel::high, haar, d0);
  CHECK(std::abs(high.at(0) - 1.0 / kR2) < 1e-12);

  const FiniteSequence zero = ell2_apply(Channel::low, haar, FiniteSequence{});
  CHECK(zero.empty());
  const FiniteSequence az = ell2_adjoint_apply(Channel::low, haar, FiniteSequence{});
  CHECK(az.empty());
}

TEST_CASE("adjoint correctness of the ell2 operators") {
  std::mt19937_64 rng(5);
  for (const double beta : {kPi / 4, 5 * kPi / 12, 0.3}) {
    const FilterBank fb = FilterBank::from_beta(beta);
    for (int trial = 0; trial < 16; ++trial) {
      const FiniteSequence x = random_sequence(rng, -3 + long(rng() % 5), 6);
      const FiniteSequence y = random_sequence(rng, -4 + long(rng() % 5), 7);
      for (Channel ch : {Channel::low, Channel::high}) {
        const cplx lhs = inner(x, ell2_apply(ch, fb, y));
        const cplx rhs = inner(ell2_adjoint_apply(ch, fb, x), y);
        CHECK(std::abs(lhs - rhs) < 1e-12);
      }
    }
  }
}

TEST_CASE("cuntz relations hold for the ell2 operators") {
  for (const double beta : {kPi / 4, 5 * kPi / 12}) {
    const FilterBank fb = FilterBank::from_beta(beta);
    for (long m = -8; m <= 8; ++m) {
      const FiniteSequence dm = FiniteSequence::delta(m);
      for (Channel ci : {Channel::low, Channel::high})
        for (Channel cj : {Channel::low, Channel::high}) {
          const FiniteSequence r =
              ell2_apply(ci, fb, ell2_adjoint_apply(cj, fb, dm));
          if (ci == cj) {
            FiniteSequence diff = r;
            double err2 = 0.0;
            for (long k = std::min(diff.first, m);
                 k <= std::max(diff.last(), m); ++k)
              err2 += std::norm(diff.at(k) - (k == m ? cplx{1.0} : cplx{}));
            CHECK(std::sqrt(err2) < 1e-12);
          } else {
            CHECK(std::sqrt(norm2(r)) < 1e-12);
          }
        }
    }
  }
}

TEST_CASE("column isometry on ell2") {
  std::mt19937_64 rng(9);
  for (const double beta : {kPi / 4, 5 * kPi / 12, 0.3, -1.1}) {
    const FilterBank fb = FilterBank::from_beta(beta);
    for (int trial = 0; trial < 8; ++trial) {
      const FiniteSequence x = random_sequence(rng, -5 + long(rng() % 9), 9);
      const double total = norm2(ell2_apply(Channel::low, fb, x)) +
                           norm2(ell2_apply(Channel::high, fb, x));
      CHECK(total == doctest::Approx(norm2(x)).epsilon(1e-12));
    }
  }
}
