#include "opmeas/cylinder.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "opmeas/errors.hpp"

namespace opmeas {

namespace {

constexpr double kZeroNorm2 = 1e-300;

void require_alphabet(const MeasurementSystem& sys, const Word& w) {
  if (w.alphabet() != sys.alphabet_size())
    throw ShapeError("word alphabet does not match the system");
}

double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Word::Word(std::size_t alphabet, std::vector<std::uint8_t> digits)
    : n_(alphabet), digits_(std::move(digits)) {
  if (n_ < 1) throw ShapeError("word: alphabet size must be >= 1");
  for (std::uint8_t d : digits_)
    if (d >= n_) throw ShapeError("word: digit out of range");
}

Word Word::parse(std::string_view text, std::size_t alphabet) {
  std::vector<std::uint8_t> digits;
  digits.reserve(text.size());
  for (char c : text) {
    if (c < '0' || c > '9') throw ShapeError("word: non-digit character");
    digits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return Word(alphabet, std::move(digits));
}

Word Word::extended(std::uint8_t next) const {
  Word w = *this;
  if (next >= n_) throw ShapeError("word: digit out of range");
  w.digits_.push_back(next);
  return w;
}

Word Word::repeated_extension(std::uint8_t digit, std::size_t count) const {
  Word w = *this;
  if (digit >= n_) throw ShapeError("word: digit out of range");
  w.digits_.insert(w.digits_.end(), count, digit);
  return w;
}

std::size_t Word::count_digit(std::uint8_t digit) const {
  std::size_t c = 0;
  for (std::uint8_t d : digits_) c += (d == digit);
  return c;
}

std::string Word::str() const {
  std::string s;
  s.reserve(digits_.size());
  for (std::uint8_t d : digits_) s.push_back(static_cast<char>('0' + d));
  return s;
}

NAdicInterval word_to_interval(const Word& w) {
  const std::uint64_t base = w.alphabet();
  // xi_num = sum_j i_j N^{k-j} must fit in 64 bits exactly.
  std::uint64_t num = 0;
  for (std::size_t j = 0; j < w.length(); ++j) {
    if (num > (std::numeric_limits<std::uint64_t>::max() - w.digit(j)) / base)
      throw ResourceError("word_to_interval: N^k exceeds 64-bit range");
    num = num * base + w.digit(j);
  }
  return {num, static_cast<std::uint32_t>(w.length()),
          static_cast<std::uint32_t>(base)};
}

CMatrix operator_measure(const MeasurementSystem& sys, const Word& w) {
  require_alphabet(sys, w);
  CMatrix m = CMatrix::identity(sys.dim());
  for (std::size_t j = 0; j < w.length(); ++j) m = sys.op(w.digit(j)) * m;
  return m.adjoint() * m;
}

double scalar_measure(const MeasurementSystem& sys, const PureState& psi,
                      const Word& w) {
  require_alphabet(sys, w);
  if (psi.dim() != sys.dim()) throw ShapeError("state dimension mismatch");
  CVector v = psi.vec();
  for (std::size_t j = 0; j < w.length(); ++j) v = sys.op(w.digit(j)).apply(v);
  return norm2(v);
}

double log_scalar_measure(const MeasurementSystem& sys, const PureState& psi,
                          const Word& w) {
  require_alphabet(sys, w);
  if (psi.dim() != sys.dim()) throw ShapeError("state dimension mismatch");
  CVector v = psi.vec();
  double acc = 0.0;
  for (std::size_t j = 0; j < w.length(); ++j) {
    v = sys.op(w.digit(j)).apply(v);
    const double n2 = norm2(v);
    if (n2 < kZeroNorm2) return -std::numeric_limits<double>::infinity();
    acc += std::log(n2);
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& c : v) c *= inv;
  }
  return acc;
}

double consistency_residual(const MeasurementSystem& sys, const Word& w) {
  require_alphabet(sys, w);
  CMatrix m = CMatrix::identity(sys.dim());
  for (std::size_t j = 0; j < w.length(); ++j) m = sys.op(w.digit(j)) * m;
  const CMatrix parent = m.adjoint() * m;
  CMatrix children(sys.dim(), sys.dim());
  for (std::size_t i = 0; i < sys.alphabet_size(); ++i) {
    const CMatrix child = sys.op(i) * m;
    children = children + child.adjoint() * child;
  }
  return operator_norm(parent - children);
}

double partition_identity_residual(const MeasurementSystem& sys,
                                   std::uint32_t level) {
  const std::size_t n = sys.alphabet_size();
  double words = 1.0;
  for (std::uint32_t j = 0; j < level; ++j) {
    words *= static_cast<double>(n);
    if (words > static_cast<double>(1u << 20))
      throw ResourceError("partition identity: N^k exceeds 2^20");
  }
  CMatrix acc(sys.dim(), sys.dim());
  // depth-first walk carrying the running product F_{i_j} ... F_{i_1}
  std::vector<CMatrix> stack;
  stack.reserve(level + 1);
  stack.push_back(CMatrix::identity(sys.dim()));
  std::vector<std::size_t> digit(level, 0);
  if (level == 0) {
    acc = stack.back();
  } else {
    std::size_t depth = 0;
    while (true) {
      while (depth < level) {
        stack.push_back(sys.op(digit[depth]) * stack.back());
        ++depth;
      }
      acc = acc + stack.back().adjoint() * stack.back();
      // backtrack to the next branch
      while (depth > 0 && digit[depth - 1] + 1 == n) {
        digit[depth - 1] = 0;
        stack.pop_back();
        --depth;
      }
      if (depth == 0) break;
      ++digit[depth - 1];
      stack.pop_back();
      --depth;
    }
  }
  return operator_norm(acc - CMatrix::identity(sys.dim()));
}

Word sample_trajectory(const MeasurementSystem& sys, const PureState& psi,
                       std::size_t length, std::uint64_t seed) {
  if (psi.dim() != sys.dim()) throw ShapeError("state dimension mismatch");
  std::mt19937_64 rng(seed);
  CVector state = psi.vec();
  std::vector<std::uint8_t> digits;
  digits.reserve(length);
  std::vector<CVector> branch(sys.alphabet_size());
  for (std::size_t step = 0; step < length; ++step) {
    double total = 0.0;
    std::vector<double> prob(sys.alphabet_size());
    for (std::size_t i = 0; i < sys.alphabet_size(); ++i) {
      branch[i] = sys.op(i).apply(state);
      prob[i] = norm2(branch[i]);
      total += prob[i];
    }
    if (total < 1e-28)
      throw DeadStateError("sample_trajectory: every channel annihilates the state");
    const double r = uniform53(rng) * total;
    double cum = 0.0;
    std::size_t pick = sys.alphabet_size() - 1;
    for (std::size_t i = 0; i < sys.alphabet_size(); ++i) {
      cum += prob[i];
      if (r < cum) {
        pick = i;
        break;
      }
    }
    digits.push_back(static_cast<std::uint8_t>(pick));
    const double inv = 1.0 / std::sqrt(prob[pick]);
    state = std::move(branch[pick]);
    for (cplx& c : state) c *= inv;
  }
  return Word(sys.alphabet_size(), std::move(digits));
}

double cantor_self_similarity_residual(std::uint32_t level) {
  if (level < 1 || level > 12)
    throw ResourceError("cantor self-similarity: level must be in [1, 12]");
  const MeasurementSystem sys = builtin_system("cantor3");
  const PureState psi = PureState::basis(3, 0);

  // measures of all triadic intervals at level-1 and level, indexed by xi
  std::uint64_t n_prev = 1;
  for (std::uint32_t j = 0; j + 1 < level; ++j) n_prev *= 3;
  const std::uint64_t n_cur = n_prev * 3;
  std::vector<double> mu_prev(n_prev), mu_cur(n_cur);

  // breadth-first refinement of the states along the word tree
  std::vector<CVector> states{psi.vec()};
  std::vector<double> mus{1.0};
  for (std::uint32_t depth = 1; depth <= level; ++depth) {
    std::vector<CVector> next;
    std::vector<double> next_mu;
    next.reserve(states.size() * 3);
    next_mu.reserve(states.size() * 3);
    for (std::size_t m = 0; m < states.size(); ++m)
      for (std::size_t i = 0; i < 3; ++i) {
        CVector child = sys.op(i).apply(states[m]);
        next.push_back(std::move(child));
        next_mu.push_back(norm2(next.back()));
      }
    states = std::move(next);
    mus = std::move(next_mu);
    if (depth == level - 1)
      mu_prev = mus;
    if (depth == level)
      mu_cur = mus;
  }
  if (level == 1) mu_prev = {1.0};

  double worst = 0.0;
  for (std::uint64_t m = 0; m < n_cur; ++m) {
    const double left = (m < n_prev) ? mu_prev[m] : 0.0;
    const double right = (m >= 2 * n_prev) ? mu_prev[m - 2 * n_prev] : 0.0;
    worst = std::max(worst, std::abs(mu_cur[m] - 0.5 * (left + right)));
  }
  return worst;
}

}  // namespace opmeas
