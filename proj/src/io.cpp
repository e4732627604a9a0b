#include "opmeas/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "opmeas/errors.hpp"
#include "opmeas/version.hpp"

namespace opmeas {

namespace {

using nlohmann::json;

json complex_pair(const cplx& c) { return json::array({c.real(), c.imag()}); }

cplx pair_to_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw LookupError("json: expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw LookupError("json: parse error");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string system_to_json(const MeasurementSystem& sys) {
  json ops = json::array();
  for (const CMatrix& f : sys.operators()) {
    json mat = json::array();
    for (std::size_t i = 0; i < f.rows(); ++i)
      for (std::size_t j = 0; j < f.cols(); ++j)
        mat.push_back(complex_pair(f(i, j)));
    ops.push_back(std::move(mat));
  }
  json j{{"N", sys.alphabet_size()},
         {"dim", sys.dim()},
         {"label", sys.label()},
         {"operators", std::move(ops)}};
  return j.dump(2);
}

MeasurementSystem system_from_json(const std::string& text, bool validate) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("N") || !j.contains("dim") ||
      !j.contains("operators"))
    throw LookupError("system json: need N, dim and operators");
  const auto n = j["N"].get<std::size_t>();
  const auto dim = j["dim"].get<std::size_t>();
  const std::string label = j.value("label", std::string("unnamed"));
  const json& ops = j["operators"];
  if (!ops.is_array() || ops.size() != n)
    throw LookupError("system json: operator count does not match N");
  std::vector<CMatrix> mats;
  mats.reserve(n);
  for (const json& mat : ops) {
    if (!mat.is_array() || mat.size() != dim * dim)
      throw LookupError("system json: operator is not a d*d entry list");
    CMatrix m(dim, dim);
    std::size_t idx = 0;
    for (const json& e : mat) {
      m(idx / dim, idx % dim) = pair_to_complex(e);
      ++idx;
    }
    mats.push_back(std::move(m));
  }
  return validate ? MeasurementSystem::build(std::move(mats), label)
                  : MeasurementSystem::build_unvalidated(std::move(mats), label);
}

MeasurementSystem load_system(const std::string& path, bool validate) {
  return system_from_json(slurp(path), validate);
}

std::string filter_bank_to_json(const FilterBank& fb) {
  if (fb.beta()) return json{{"beta", *fb.beta()}}.dump();
  json taps = json::array();
  for (const cplx& t : fb.taps()) taps.push_back(complex_pair(t));
  return taps.dump();
}

FilterBank filter_bank_from_json(const std::string& text) {
  const json j = parse(text);
  if (j.is_object() && j.contains("beta"))
    return FilterBank::from_beta(j["beta"].get<double>());
  if (j.is_array()) {
    std::vector<cplx> taps;
    taps.reserve(j.size());
    for (const json& e : j) taps.push_back(pair_to_complex(e));
    return FilterBank::from_taps(std::move(taps));
  }
  throw LookupError("filter bank json: expected {\"beta\": x} or a tap array");
}

FilterBank load_filter_bank(const std::string& path) {
  return filter_bank_from_json(slurp(path));
}

std::string scale_report_to_json(const ScaleReport& report) {
  json levels = json::array();
  for (const ScaleLevel& l : report.levels) {
    levels.push_back(json{{"level", l.level},
                          {"min_exponent", l.min_exponent},
                          {"max_exponent", l.max_exponent},
                          {"positive_words", l.positive_words},
                          {"sampled", l.sampled},
                          {"zeros_branch_exponent", l.zeros_branch_exponent}});
  }
  json j;
  if (report.theoretical_s)
    j["theoretical_s"] = *report.theoretical_s;
  else
    j["theoretical_s"] = nullptr;
  j["levels"] = std::move(levels);
  return j.dump(2);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& argv)
    : os_(os) {
  os_ << "# opmeas " << OPMEAS_VERSION << " argv:";
  for (const std::string& a : argv) os_ << ' ' << a;
  os_ << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i)
    os_ << (i ? "," : "") << columns[i];
  os_ << '\n';
}

void CsvWriter::comment(const std::string& text) {
  os_ << "# " << text << '\n';
}

CsvWriter& CsvWriter::field(const std::string& v) {
  if (row_open_) os_ << ',';
  os_ << v;
  row_open_ = true;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_g17(v)); }

CsvWriter& CsvWriter::field(std::uint64_t v) { return field(std::to_string(v)); }

CsvWriter& CsvWriter::field(std::int64_t v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
  os_ << '\n';
  row_open_ = false;
}

}  // namespace opmeas
