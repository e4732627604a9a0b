#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "opmeas/filter_bank.hpp"
#include "opmeas/measurement.hpp"
#include "opmeas/scale.hpp"

// JSON system/filter-bank formats and RFC-4180-style CSV output.
//
// System JSON:
//   {"N": int, "dim": int, "label": string,
//    "operators": [[[re, im], ... row-major ...], ...]}
// Filter-bank JSON: a bare array of [re, im] pairs, or {"beta": number}.

namespace opmeas {

std::string system_to_json(const MeasurementSystem& sys);
// Validates the shape always and the isometry residual when `validate`.
MeasurementSystem system_from_json(const std::string& text, bool validate = true);
MeasurementSystem load_system(const std::string& path, bool validate = true);

std::string filter_bank_to_json(const FilterBank& fb);
FilterBank filter_bank_from_json(const std::string& text);
FilterBank load_filter_bank(const std::string& path);

std::string scale_report_to_json(const ScaleReport& report);

// Doubles with 17 significant digits; "." decimal separator.
std::string format_g17(double v);

// Writes a leading "# opmeas <version> argv: ..." comment, a header row,
// then data rows. Identical argv and inputs give byte-identical output.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& argv);
  void header(const std::vector<std::string>& columns);
  void comment(const std::string& text);

  CsvWriter& field(const std::string& v);
  CsvWriter& field(double v);
  CsvWriter& field(std::uint64_t v);
  CsvWriter& field(std::int64_t v);
  void end_row();

 private:
  std::ostream& os_;
  bool row_open_ = false;
};

}  // namespace opmeas
