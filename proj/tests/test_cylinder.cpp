#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "opmeas/cylinder.hpp"
#include "opmeas/errors.hpp"

using namespace opmeas;

namespace {

const MeasurementSystem& lebesgue() {
  static const MeasurementSystem sys = builtin_system("lebesgue2");
  return sys;
}
const MeasurementSystem& cantor() {
  static const MeasurementSystem sys = builtin_system("cantor3");
  return sys;
}
const MeasurementSystem& beta03() {
  static const MeasurementSystem sys =
      from_filter_bank(FilterBank::from_beta(0.3));
  return sys;
}

Word random_word(std::mt19937_64& rng, std::size_t alphabet, std::size_t len) {
  std::vector<std::uint8_t> d(len);
  for (auto& x : d) x = static_cast<std::uint8_t>(rng() % alphabet);
  return Word(alphabet, std::move(d));
}

}  // namespace

TEST_CASE("word basics") {
  const Word w = Word::parse("0212", 3);
  CHECK(w.length() == 4);
  CHECK(w.digit(1) == 2);
  CHECK(w.str() == "0212");
  CHECK(w.count_digit(2) == 2);
  CHECK_THROWS_AS(Word::parse("031", 3), ShapeError);
  CHECK_THROWS_AS(Word::parse("0x1", 3), ShapeError);
  CHECK(Word::parse("", 2).empty());
}

TEST_CASE("word to interval") {
  const NAdicInterval a = word_to_interval(Word::parse("1", 2));
  CHECK(a.xi_num == 1);
  CHECK(a.level == 1);
  CHECK(a.base == 2);

  const NAdicInterval b = word_to_interval(Word::parse("01", 2));
  CHECK(b.xi_num == 1);
  CHECK(b.level == 2);  // [1/4, 1/2)

  const NAdicInterval c = word_to_interval(Word::parse("2", 3));
  CHECK(c.xi_num == 2);
  CHECK(c.level == 1);  // [2/3, 1)
}

TEST_CASE("level-k intervals tile [0,1) injectively") {
  const std::uint32_t k = 4;
  std::vector<bool> seen(81, false);
  std::vector<Word> frontier{Word(3)};
  for (std::uint32_t depth = 0; depth < k; ++depth) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (std::uint8_t c = 0; c < 3; ++c) next.push_back(w.extended(c));
    frontier = std::move(next);
  }
  for (const Word& w : frontier) {
    const NAdicInterval iv = word_to_interval(w);
    CHECK(iv.level == k);
    CHECK(iv.xi_num < 81);
    CHECK_FALSE(seen[iv.xi_num]);
    seen[iv.xi_num] = true;
  }
}

TEST_CASE("operator measure on pinned words") {
  // cantor word (1): F_1* F_1 = diag(0, 0, 1)
  const CMatrix p1 = operator_measure(cantor(), Word::parse("1", 3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(p1(i, j) == ((i == 2 && j == 2) ? cplx{1.0} : cplx{}));

  // empty word gives the identity
  const CMatrix pomega = operator_measure(lebesgue(), Word(2));
  CHECK(frobenius_norm(pomega - CMatrix::identity(2)) == 0.0);

  // lebesgue (0,1): quarter identity
  const CMatrix p01 = operator_measure(lebesgue(), Word::parse("01", 2));
  CHECK(frobenius_norm(p01 - CMatrix::identity(2) * cplx(0.25)) < 1e-15);

  CHECK_THROWS_AS(operator_measure(lebesgue(), Word(3)), ShapeError);
}

TEST_CASE("operator measure values are hermitian PSD contractions") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 24; ++trial) {
    const Word w = random_word(rng, 2, 1 + rng() % 6);
    const CMatrix p = operator_measure(beta03(), w);
    const PsdResidual r = psd_residual(p);
    CHECK(r.hermitian_defect < 1e-10);
    CHECK(r.min_eigenvalue > -1e-10);
    CHECK(operator_norm(p) <= 1.0 + 1e-10);
  }
}

TEST_CASE("scalar measures of the prototypes") {
  const PureState e0_2 = PureState::basis(2, 0);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Word w = random_word(rng, 2, 1 + rng() % 10);
    CHECK(scalar_measure(lebesgue(), e0_2, w) ==
          doctest::Approx(std::ldexp(1.0, -int(w.length()))).epsilon(1e-12));
  }
  const PureState e0_3 = PureState::basis(3, 0);
  CHECK(scalar_measure(cantor(), e0_3, Word::parse("021", 3)) == 0.0);
  CHECK(scalar_measure(cantor(), e0_3, Word::parse("022", 3)) ==
        doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("first-level measures of the beta system") {
  const PureState e0 = PureState::basis(3, 0);
  const double mu0 = scalar_measure(beta03(), e0, Word::parse("0", 2));
  const double mu1 = scalar_measure(beta03(), e0, Word::parse("1", 2));
  CHECK(mu0 == doctest::Approx(0.70633390372741957).epsilon(1e-12));
  CHECK(mu1 == doctest::Approx(0.29366609627258043).epsilon(1e-12));
  CHECK(mu0 + mu1 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("digit application order is first digit first") {
  // build F_1 F_0 e0 by hand and compare against the word (0, 1)
  const PureState e0 = PureState::basis(3, 0);
  const CVector via_word = [&] {
    CVector v = e0.vec();
    v = beta03().op(0).apply(v);
    v = beta03().op(1).apply(v);
    return v;
  }();
  CHECK(scalar_measure(beta03(), e0, Word::parse("01", 2)) ==
        doctest::Approx(norm2(via_word)).epsilon(1e-14));
  // the reversed product differs for this non-commuting pair
  CVector rev = e0.vec();
  rev = beta03().op(1).apply(rev);
  rev = beta03().op(0).apply(rev);
  CHECK(std::abs(norm2(via_word) - norm2(rev)) > 1e-3);
}

TEST_CASE("log measures agree with plain measures") {
  const PureState e0 = PureState::basis(2, 0);
  for (std::uint32_t k : {1u, 5u, 12u}) {
    const Word w = Word(2, std::vector<std::uint8_t>(k, 0));
    CHECK(log_scalar_measure(lebesgue(), e0, w) ==
          doctest::Approx(-double(k) * std::log(2.0)).epsilon(1e-12));
  }
  CHECK(log_scalar_measure(cantor(), PureState::basis(3, 0),
                           Word::parse("1", 3)) ==
        -std::numeric_limits<double>::infinity());

  std::mt19937_64 rng(23);
  const PureState e0_3 = PureState::basis(3, 0);
  for (int trial = 0; trial < 16; ++trial) {
    const Word w = random_word(rng, 2, 1 + rng() % 20);
    const double direct = scalar_measure(beta03(), e0_3, w);
    const double logged = std::exp(log_scalar_measure(beta03(), e0_3, w));
    CHECK(logged == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("monotonicity and additivity of scalar measures") {
  std::mt19937_64 rng(29);
  const PureState e0 = PureState::basis(3, 0);
  for (int trial = 0; trial < 24; ++trial) {
    const Word w = random_word(rng, 2, rng() % 8);
    const double parent = scalar_measure(beta03(), e0, w);
    double children = 0.0;
    for (std::uint8_t c = 0; c < 2; ++c) {
      const double child = scalar_measure(beta03(), e0, w.extended(c));
      CHECK(child <= parent + 1e-12);
      children += child;
    }
    CHECK(children == doctest::Approx(parent).epsilon(1e-12));
  }
}

TEST_CASE("consistency residuals") {
  CHECK(consistency_residual(lebesgue(), Word::parse("0", 2)) < 1e-15);
  CHECK(consistency_residual(cantor(), Word::parse("20", 3)) < 1e-14);

  const CMatrix half = CMatrix::identity(2) * cplx(0.5);
  const MeasurementSystem broken =
      MeasurementSystem::build_unvalidated({half, half}, "broken");
  CHECK(consistency_residual(broken, Word::parse("0", 2)) ==
        doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("partition identity residuals") {
  CHECK(partition_identity_residual(lebesgue(), 8) < 1e-12);
  CHECK(partition_identity_residual(cantor(), 6) < 1e-12);
  CHECK(partition_identity_residual(beta03(), 10) < 1e-10);
  CHECK(partition_identity_residual(lebesgue(), 0) < 1e-15);
  CHECK_THROWS_AS(partition_identity_residual(lebesgue(), 21), ResourceError);
}

TEST_CASE("trajectory sampling is deterministic and lawful") {
  const PureState e0_2 = PureState::basis(2, 0);
  const Word a = sample_trajectory(lebesgue(), e0_2, 16, 99);
  const Word b = sample_trajectory(lebesgue(), e0_2, 16, 99);
  CHECK(a.str() == b.str());
  CHECK(a.length() == 16);

  // the middle digit never appears for the cantor system started at e0
  const PureState e0_3 = PureState::basis(3, 0);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Word w = sample_trajectory(cantor(), e0_3, 8, mix_seed(4, i));
    CHECK(w.count_digit(1) == 0);
  }
}

TEST_CASE("sampled cylinder frequencies match the product law") {
  // P(trajectory starts 01011) = 2^-5 for the coin-flip system
  const PureState e0 = PureState::basis(2, 0);
  const std::uint64_t trials = 100000;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Word w = sample_trajectory(lebesgue(), e0, 5, mix_seed(2026, i));
    if (w.str() == "01011") ++hits;
  }
  const double p = 1.0 / 32.0;
  const double sigma = std::sqrt(p * (1 - p) / double(trials));
  CHECK(std::abs(double(hits) / double(trials) - p) < 3 * sigma);
}

TEST_CASE("a dead state raises an error") {
  const CMatrix zero(2, 2);
  const MeasurementSystem dead =
      MeasurementSystem::build_unvalidated({zero}, "dead");
  CHECK_THROWS_AS(sample_trajectory(dead, PureState::basis(2, 0), 1, 0),
                  DeadStateError);
}

TEST_CASE("cantor self-similarity residual vanishes") {
  CHECK(cantor_self_similarity_residual(1) < 1e-15);
  CHECK(cantor_self_similarity_residual(6) < 1e-14);
  CHECK_THROWS_AS(cantor_self_similarity_residual(13), ResourceError);
}
