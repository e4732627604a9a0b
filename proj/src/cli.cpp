#include "opmeas/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "opmeas/cylinder.hpp"
#include "opmeas/dominant.hpp"
#include "opmeas/errors.hpp"
#include "opmeas/io.hpp"
#include "opmeas/kernels.hpp"
#include "opmeas/scale.hpp"
#include "opmeas/version.hpp"
#include "opmeas/wavelet.hpp"

namespace opmeas::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Source {
  std::string builtin;
  std::string system_path;
  std::optional<double> beta;

  int count() const {
    return int(!builtin.empty()) + int(!system_path.empty()) + int(bool(beta));
  }
  bool has_filter_bank() const { return bool(beta); }
};

void add_source_options(CLI::App* cmd, Source& src) {
  auto* b = cmd->add_option("--builtin", src.builtin,
                            "builtin system name (lebesgue2, cantor3)");
  auto* f = cmd->add_option("--system", src.system_path, "system JSON file");
  auto* g = cmd->add_option("--beta", src.beta,
                            "filter-bank parameter (radians)");
  b->excludes(f)->excludes(g);
  f->excludes(g);
}

MeasurementSystem resolve_system(const Source& src, bool validate = true) {
  if (src.count() != 1)
    throw CLI::ValidationError("exactly one of --builtin/--system/--beta required");
  if (!src.builtin.empty()) return builtin_system(src.builtin);
  if (!src.system_path.empty()) return load_system(src.system_path, validate);
  return from_filter_bank(FilterBank::from_beta(*src.beta));
}

std::string resolve_out_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  if (const char* dir = std::getenv("OPMEAS_OUT_DIR"))
    return std::string(dir) + "/" + path;
  return path;
}

// Output sink: file when --out given, otherwise the command stream.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os;

  static Sink open(const std::string& out_path, std::ostream& fallback) {
    Sink s;
    if (out_path.empty()) {
      s.os = &fallback;
      return s;
    }
    const std::string full = resolve_out_path(out_path);
    s.file = std::make_unique<std::ofstream>(full, std::ios::binary);
    if (!*s.file) throw LookupError("cannot open output file '" + full + "'");
    s.os = s.file.get();
    return s;
  }
};

void print_matrix(std::ostream& os, const CMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const cplx v = m(i, j);
      os << "(" << format_g17(v.real()) << "," << format_g17(v.imag()) << ") ";
    }
    os << "\n";
  }
}

std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= b;
  return r;
}

int run_verify(const Source& src, double tol, std::uint32_t level,
               std::ostream& out) {
  const MeasurementSystem sys = resolve_system(src, /*validate=*/false);
  const double iso = column_isometry_residual(sys);
  out << "system = " << sys.label() << " (N=" << sys.alphabet_size()
      << ", dim=" << sys.dim() << ")\n";
  out << "column_isometry_residual = " << format_g17(iso) << "\n";
  out << "cuntz_residual = " << format_g17(cuntz_residual(sys)) << "\n";

  double consistency = 0.0;
  std::vector<Word> frontier{Word(sys.alphabet_size())};
  for (std::uint32_t depth = 0; depth < 2; ++depth) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      consistency = std::max(consistency, consistency_residual(sys, w));
      for (std::size_t c = 0; c < sys.alphabet_size(); ++c)
        next.push_back(w.extended(static_cast<std::uint8_t>(c)));
    }
    frontier = std::move(next);
  }
  out << "consistency_residual(|w|<=1) = " << format_g17(consistency) << "\n";
  out << "partition_identity_residual(level=" << level
      << ") = " << format_g17(partition_identity_residual(sys, level)) << "\n";
  if (iso > tol) {
    out << "FAIL: isometry residual " << format_g17(iso) << " exceeds tolerance "
        << format_g17(tol) << "\n";
    return 2;
  }
  out << "OK\n";
  return 0;
}

int run_measure(const Source& src, const std::string& word_text,
                std::uint32_t levels, const std::string& out_path,
                const std::vector<std::string>& argv, std::ostream& out) {
  const MeasurementSystem sys = resolve_system(src);
  const PureState psi = PureState::basis(sys.dim(), 0);
  if (levels == 0) {
    const Word w = Word::parse(word_text, sys.alphabet_size());
    const NAdicInterval iv = word_to_interval(w);
    const double mu = scalar_measure(sys, psi, w);
    out << "word = " << (w.empty() ? "(empty)" : w.str()) << "\n";
    out << "interval = [" << iv.xi_num << "/" << iv.base << "^" << iv.level
        << ", " << (iv.xi_num + 1) << "/" << iv.base << "^" << iv.level << ")\n";
    out << "mu = " << format_g17(mu) << "\n";
    out << "P(C(w)) =\n";
    print_matrix(out, operator_measure(sys, w));
    return 0;
  }

  if (pow_u64(sys.alphabet_size(), levels) > (1u << 20))
    throw ResourceError("measure sweep: N^k exceeds 2^20");
  Sink sink = Sink::open(out_path, out);
  CsvWriter csv(*sink.os, argv);
  csv.header({"word", "xi_num", "level", "measure", "log2_measure"});
  const double ln2 = std::log(2.0);
  std::vector<Word> frontier{Word(sys.alphabet_size())};
  for (std::uint32_t k = 1; k <= levels; ++k) {
    std::vector<Word> next;
    next.reserve(frontier.size() * sys.alphabet_size());
    for (const Word& w : frontier)
      for (std::size_t c = 0; c < sys.alphabet_size(); ++c)
        next.push_back(w.extended(static_cast<std::uint8_t>(c)));
    frontier = std::move(next);
    for (const Word& w : frontier) {
      const NAdicInterval iv = word_to_interval(w);
      const double logmu = log_scalar_measure(sys, psi, w);
      csv.field(w.str())
          .field(std::uint64_t(iv.xi_num))
          .field(std::uint64_t(k))
          .field(scalar_measure(sys, psi, w))
          .field(logmu / ln2);
      csv.end_row();
    }
  }
  return 0;
}

int run_partition(const Source& src, std::uint32_t level, double tol,
                  std::ostream& out) {
  const MeasurementSystem sys = resolve_system(src);
  const double r = partition_identity_residual(sys, level);
  out << "partition_identity_residual(level=" << level
      << ") = " << format_g17(r) << "\n";
  return r > tol ? 2 : 0;
}

int run_scale(const Source& src, std::uint32_t levels,
              const ScaleProfileOptions& opts, const std::string& out_path,
              const std::string& json_path, const std::vector<std::string>& argv,
              std::ostream& out) {
  const MeasurementSystem sys = resolve_system(src);
  const PureState psi = PureState::basis(sys.dim(), 0);
  ScaleReport report = empirical_scale_profile(sys, psi, levels, opts);
  if (src.beta) {
    try {
      report.theoretical_s = theoretical_scale(FilterBank::from_beta(*src.beta)).s;
    } catch (const HypothesisError&) {
      // end tap vanishes: no theoretical scale for this bank
    }
  }

  Sink sink = Sink::open(out_path, out);
  CsvWriter csv(*sink.os, argv);
  if (report.theoretical_s)
    csv.comment("theoretical_s = " + format_g17(*report.theoretical_s));
  csv.header({"level", "min_exponent", "max_exponent", "positive_words"});
  for (const ScaleLevel& l : report.levels) {
    csv.field(std::uint64_t(l.level))
        .field(l.min_exponent)
        .field(l.max_exponent)
        .field(std::uint64_t(l.positive_words));
    csv.end_row();
  }
  if (!json_path.empty()) {
    std::ofstream jf(resolve_out_path(json_path), std::ios::binary);
    if (!jf) throw LookupError("cannot open output file '" + json_path + "'");
    jf << scale_report_to_json(report) << "\n";
  }
  return 0;
}

int run_spectrum(const Source& src, const std::string& out_path,
                 const std::vector<std::string>& argv, std::ostream& out) {
  CMatrix f0;
  if (src.beta)
    f0 = slanted_matrix(FilterBank::from_beta(*src.beta).taps());
  else
    f0 = resolve_system(src, /*validate=*/false).op(0);
  const std::vector<cplx> eigs = eigenvalues(f0);

  Sink sink = Sink::open(out_path, out);
  CsvWriter csv(*sink.os, argv);
  csv.header({"index", "re", "im", "abs"});
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    csv.field(std::uint64_t(i))
        .field(eigs[i].real())
        .field(eigs[i].imag())
        .field(std::abs(eigs[i]));
    csv.end_row();
  }
  if (src.beta) {
    const BetaDiagnostics d = beta_diagnostics(*src.beta);
    out << "closed_form_spectrum =";
    for (const cplx& l : d.closed_form_spectrum)
      out << " " << format_g17(l.real());
    out << "\nalpha = " << format_g17(d.alpha) << "\nregion = "
        << region_name(d.region)
        << "\ndominance_ok = " << (d.dominance_ok ? 1 : 0)
        << "\ncircle_residual = " << format_g17(d.circle_residual) << "\n";
  }
  return 0;
}

int run_beta_scan(double from, double to, std::uint32_t steps,
                  const std::string& out_path,
                  const std::vector<std::string>& argv, std::ostream& out) {
  if (steps < 2) throw CLI::ValidationError("--steps must be >= 2");
  Sink sink = Sink::open(out_path, out);
  CsvWriter csv(*sink.os, argv);
  csv.header({"beta", "a0", "a1", "a2", "a3", "alpha", "s", "lambda", "region",
              "dominance_ok", "circle_residual"});
  for (std::uint32_t i = 0; i < steps; ++i) {
    const double beta = from + (to - from) * double(i) / double(steps - 1);
    const BetaDiagnostics d = beta_diagnostics(beta);
    const auto& a = d.taps.taps();
    const double s = -std::log(d.alpha) / std::log(2.0);
    csv.field(beta)
        .field(a[0].real())
        .field(a[1].real())
        .field(a[2].real())
        .field(a[3].real())
        .field(d.alpha)
        .field(s)
        .field(d.closed_form_spectrum[2].real())
        .field(std::string(region_name(d.region)))
        .field(std::uint64_t(d.dominance_ok ? 1 : 0))
        .field(d.circle_residual);
    csv.end_row();
  }
  return 0;
}

int run_sample(const Source& src, std::uint32_t length, std::uint64_t count,
               std::uint64_t seed, const std::string& out_path,
               const std::vector<std::string>& argv, std::ostream& out) {
  const MeasurementSystem sys = resolve_system(src);
  const PureState psi = PureState::basis(sys.dim(), 0);
  Sink sink = Sink::open(out_path, out);
  CsvWriter csv(*sink.os, argv);
  csv.header({"index", "word"});
  for (std::uint64_t i = 0; i < count; ++i) {
    const Word w = sample_trajectory(sys, psi, length, mix_seed(seed, i));
    csv.field(std::uint64_t(i)).field(w.str());
    csv.end_row();
  }
  return 0;
}

int run_power(const Source& src, std::uint32_t n_max,
              const std::string& base_text, const std::string& out_path,
              const std::vector<std::string>& argv, std::ostream& out) {
  std::optional<FilterBank> fb;
  if (src.beta) fb = FilterBank::from_beta(*src.beta);
  const MeasurementSystem sys = resolve_system(src);
  const CMatrix& f0 = sys.op(0);
  const cplx a = f0(0, 0);
  const CVector w = PureState::basis(sys.dim(), 0).vec();
  const DominantTriple triple = make_dominant_triple(f0, a, w);
  const CVector xi = principal_right_vector(triple);
  const double gap = spectral_gap(triple);

  out << "a = " << format_g17(a.real());
  if (a.imag() != 0.0) out << " + " << format_g17(a.imag()) << "i";
  out << "\nspectral_gap = " << format_g17(gap) << "\n";
  out << "xi_norm2 = " << format_g17(norm2(xi)) << "\n";
  if (fb) {
    const CVector v = filter_principal_vector(*fb);
    double diff = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) diff += std::norm(v[i] - xi[i]);
    out << "closed_form_vs_block = " << format_g17(std::sqrt(diff)) << "\n";
  }

  const Word base = Word::parse(base_text, sys.alphabet_size());
  const PureState psi = PureState::basis(sys.dim(), 0);
  const double log_a_sq = std::log(std::norm(a));
  const double d = double(sys.dim());
  const double err1 = power_limit_error(triple, psi.vec(), 1);
  const double fitted_c = gap > 0 ? err1 / gap : err1;

  // per-digit factor |op(c)(0,0)|^2, valid because e_0 is a left eigenvector
  double predicted = norm2(xi);
  for (std::size_t j = 0; j < base.length(); ++j)
    predicted *= std::norm(sys.op(base.digit(j))(0, 0));

  Sink sink = Sink::open(out_path, out);
  CsvWriter csv(*sink.os, argv);
  csv.comment("predicted_r_limit = " + format_g17(predicted));
  csv.header({"n", "r", "error", "envelope"});
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    const Word word = base.repeated_extension(0, n);
    const double logmu = log_scalar_measure(sys, psi, word);
    const double r = std::exp(logmu - double(n) * log_a_sq);
    const double err = power_limit_error(triple, psi.vec(), n);
    csv.field(std::uint64_t(n)).field(r).field(err);
    if (n == 0)
      csv.field(std::string());  // the envelope is defined for n >= 1
    else
      csv.field(1.1 * fitted_c * std::pow(double(n), d - 1.0) *
                std::pow(gap, double(n)));
    csv.end_row();
  }
  return 0;
}

int run_cascade(const std::optional<double>& beta, const std::string& taps_path,
                std::uint32_t depth, std::int64_t packet_index,
                const std::string& out_path,
                const std::vector<std::string>& argv, std::ostream& out,
                std::ostream& err) {
  if (bool(beta) == !taps_path.empty())
    throw CLI::ValidationError("cascade: exactly one of --beta/--taps required");
  const FilterBank fb =
      beta ? FilterBank::from_beta(*beta) : load_filter_bank(taps_path);
  const DyadicFunction phi = cascade_phi(fb, depth);
  const DyadicFunction psi = wavelet_psi(fb, phi);
  std::optional<DyadicFunction> pk;
  if (packet_index >= 0)
    pk = packet(fb, static_cast<std::uint32_t>(packet_index), depth);

  const OrthoMoments om = orthonormality_and_moments(phi, 3);
  out << "phi_integral = " << format_g17(cell_integral(phi)) << "\n";
  out << "psi_integral = " << format_g17(cell_integral(psi)) << "\n";
  out << "phi_shift_residual = " << format_g17(om.shift_residual) << "\n";
  if (fb.beta()) {
    const BetaDiagnostics d = beta_diagnostics(*fb.beta());
    if (d.region == Region::boundary)
      out << "note: beta on a region boundary; orthonormality of translates "
             "is not guaranteed there\n";
  }
  if (phi.divergence_warning) {
    err << "warning: cascade iterates did not contract (last sup delta "
        << format_g17(phi.last_sup_delta) << ")\n";
  }

  Sink sink = Sink::open(out_path, out);
  CsvWriter csv(*sink.os, argv);
  if (phi.divergence_warning)
    csv.comment("warning: cascade iterates did not contract; last sup delta = " +
                format_g17(phi.last_sup_delta));
  if (pk)
    csv.header({"x", "phi", "psi", "packet"});
  else
    csv.header({"x", "phi", "psi"});
  for (std::size_t m = 0; m < phi.samples.size(); ++m) {
    csv.field(phi.x(m)).field(phi.samples[m]).field(psi.samples[m]);
    if (pk) csv.field(pk->samples[m]);
    csv.end_row();
  }
  return 0;
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"operator-measure toolkit"};
  app.set_version_flag("--version", std::string("opmeas ") + OPMEAS_VERSION);
  std::string kernels_choice = "auto";
  app.add_option("--kernels", kernels_choice,
                 "kernel backend: auto, scalar, avx2");
  app.require_subcommand(1);

  int rc = 0;
  const std::vector<std::string> argv_copy = args;

  // verify
  Source v_src;
  double v_tol = 1e-10;
  std::uint32_t v_level = 6;
  auto* verify = app.add_subcommand("verify", "check system residuals");
  add_source_options(verify, v_src);
  verify->add_option("--tol", v_tol, "isometry tolerance");
  verify->add_option("--level", v_level, "partition-identity depth");

  // measure
  Source m_src;
  std::string m_word;
  std::uint32_t m_levels = 0;
  std::string m_out;
  auto* measure = app.add_subcommand("measure", "cylinder measures");
  add_source_options(measure, m_src);
  measure->add_option("--word", m_word, "digit string, empty for Omega");
  measure->add_option("--levels", m_levels, "emit a CSV sweep to this depth");
  measure->add_option("--out", m_out, "CSV output path");

  // partition
  Source p_src;
  std::uint32_t p_level = 8;
  double p_tol = 1e-10;
  auto* partition = app.add_subcommand("partition", "partition-identity residual");
  add_source_options(partition, p_src);
  partition->add_option("--level", p_level, "depth k");
  partition->add_option("--tol", p_tol, "tolerance");

  // scale
  Source s_src;
  std::uint32_t s_levels = 12;
  ScaleProfileOptions s_opts;
  std::string s_out, s_json;
  auto* scale = app.add_subcommand("scale", "empirical exponent envelope");
  add_source_options(scale, s_src);
  scale->add_option("--levels", s_levels, "maximum level");
  scale->add_option("--budget", s_opts.exhaustive_budget,
                    "exhaustive words per level");
  scale->add_option("--sample", s_opts.sample_budget, "sampled branches");
  scale->add_option("--seed", s_opts.seed, "sampling seed");
  scale->add_option("--threshold", s_opts.log_threshold,
                    "log-measure pruning threshold");
  scale->add_option("--out", s_out, "CSV output path");
  scale->add_option("--json", s_json, "JSON report path");

  // spectrum
  Source sp_src;
  std::string sp_out;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of F_0");
  add_source_options(spectrum, sp_src);
  spectrum->add_option("--out", sp_out, "CSV output path");

  // beta-scan
  double b_from = -kPi, b_to = kPi;
  std::uint32_t b_steps = 629;
  std::string b_out;
  auto* bscan = app.add_subcommand("beta-scan", "sweep the tap family");
  bscan->add_option("--from", b_from, "start (radians)");
  bscan->add_option("--to", b_to, "end (radians)");
  bscan->add_option("--steps", b_steps, "row count (>= 2)");
  bscan->add_option("--out", b_out, "CSV output path");

  // sample
  Source sa_src;
  std::uint32_t sa_length = 8;
  std::uint64_t sa_count = 1, sa_seed = 0;
  std::string sa_out;
  auto* sample = app.add_subcommand("sample", "seeded trajectories");
  add_source_options(sample, sa_src);
  sample->add_option("--length", sa_length, "digits per trajectory");
  sample->add_option("--count", sa_count, "number of trajectories");
  sample->add_option("--seed", sa_seed, "base seed");
  sample->add_option("--out", sa_out, "CSV output path");

  // power
  Source pw_src;
  std::uint32_t pw_n = 60;
  std::string pw_base, pw_out;
  auto* power = app.add_subcommand("power", "dominant-eigenvalue diagnostics");
  add_source_options(power, pw_src);
  power->add_option("--n", pw_n, "iteration count");
  power->add_option("--base", pw_base, "base word prefix");
  power->add_option("--out", pw_out, "CSV output path");

  // cascade
  std::optional<double> c_beta;
  std::string c_taps, c_out;
  std::uint32_t c_depth = 10;
  std::int64_t c_packet = -1;
  auto* cascade = app.add_subcommand("cascade", "scaling function and wavelet");
  cascade->add_option("--beta", c_beta, "filter-bank parameter");
  cascade->add_option("--taps", c_taps, "filter-bank JSON file");
  cascade->add_option("--depth", c_depth, "grid depth J");
  cascade->add_option("--packet", c_packet, "also emit wavelet packet n");
  cascade->add_option("--out", c_out, "CSV output path");

  try {
    // CLI11 consumes a reversed token vector
    std::vector<std::string> reversed(argv_copy.rbegin(), argv_copy.rend());
    app.parse(reversed);
    if (!kernels::select(kernels_choice))
      throw CLI::ValidationError("--kernels",
                                 "backend '" + kernels_choice + "' unavailable");
    if (verify->parsed())
      rc = run_verify(v_src, v_tol, v_level, out);
    else if (measure->parsed())
      rc = run_measure(m_src, m_word, m_levels, m_out, argv_copy, out);
    else if (partition->parsed())
      rc = run_partition(p_src, p_level, p_tol, out);
    else if (scale->parsed())
      rc = run_scale(s_src, s_levels, s_opts, s_out, s_json, argv_copy, out);
    else if (spectrum->parsed())
      rc = run_spectrum(sp_src, sp_out, argv_copy, out);
    else if (bscan->parsed())
      rc = run_beta_scan(b_from, b_to, b_steps, b_out, argv_copy, out);
    else if (sample->parsed())
      rc = run_sample(sa_src, sa_length, sa_count, sa_seed, sa_out, argv_copy,
                      out);
    else if (power->parsed())
      rc = run_power(pw_src, pw_n, pw_base, pw_out, argv_copy, out);
    else if (cascade->parsed())
      rc = run_cascade(c_beta, c_taps, c_depth, c_packet, c_out, argv_copy, out,
                       err);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "opmeas " << OPMEAS_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "validation failure: " << e.what()
        << " (residual = " << format_g17(e.residual) << ")\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace opmeas::cli
