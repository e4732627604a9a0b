#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "opmeas/cli.hpp"
#include "opmeas/errors.hpp"
#include "opmeas/io.hpp"

using opmeas::cli::execute;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = execute(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/opmeas_test_") + name;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"verify"}).code == 1);  // no source
  CHECK(run({"verify", "--builtin", "lebesgue2", "--beta", "0.3"}).code == 1);
  CHECK(run({"measure", "--builtin", "cantor3", "--word", "031"}).code == 1);
}

TEST_CASE("verify accepts the builtins") {
  const Run r = run({"verify", "--builtin", "cantor3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("column_isometry_residual") != std::string::npos);
  CHECK(r.out.find("OK") != std::string::npos);
}

TEST_CASE("verify flags a broken system with exit code 2") {
  const std::string path = temp_path("broken.json");
  {
    std::ofstream f(path);
    f << R"({"N":2,"dim":2,"label":"broken","operators":[)"
      << R"([[0.5,0],[0,0],[0,0],[0.5,0]],)"
      << R"([[0.5,0],[0,0],[0,0],[0.5,0]]]})";
  }
  const Run r = run({"verify", "--system", path});
  CHECK(r.code == 2);
  CHECK(r.out.find("0.5") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("measure prints the value and the operator matrix") {
  const Run r = run({"measure", "--beta", "0.3", "--word", "01"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mu = 0.20094507159922") != std::string::npos);
  CHECK(r.out.find("P(C(w)) =") != std::string::npos);
  CHECK(r.out.find("interval = [1/2^2, 2/2^2)") != std::string::npos);
}

TEST_CASE("measure sweep emits the pinned CSV schema") {
  const Run r = run({"measure", "--builtin", "lebesgue2", "--levels", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("word,xi_num,level,measure,log2_measure") != std::string::npos);
  CHECK(r.out.find("# opmeas") != std::string::npos);
  // 2 + 4 + 8 data rows plus comment and header
  int lines = 0;
  for (char c : r.out) lines += (c == '\n');
  CHECK(lines == 16);
  CHECK(r.out.find("011,3,3,0.125") != std::string::npos);
}

TEST_CASE("partition verb") {
  CHECK(run({"partition", "--builtin", "lebesgue2", "--level", "10"}).code == 0);
}

TEST_CASE("beta-scan rows carry the classified regions") {
  const Run r = run({"beta-scan", "--from", "-3.14159265", "--to", "3.14159265",
                     "--steps", "9"});
  CHECK(r.code == 0);
  CHECK(r.out.find("beta,a0,a1,a2,a3,alpha,s,lambda,region,dominance_ok,"
                   "circle_residual") != std::string::npos);
  CHECK(r.out.find("neither") != std::string::npos);
  CHECK(r.out.find(",i,") != std::string::npos);

  // a row exactly at the Haar parameter classifies as boundary with
  // alpha = 1/2 and s = 1 (up to roundoff in the tap formulas)
  const Run h = run({"beta-scan", "--from", "0.78539816339744828",
                     "--to", "1.5", "--steps", "2"});
  CHECK(h.code == 0);
  std::istringstream lines(h.out);
  std::string line, first_row;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#' && line.find("beta,") != 0) {
      first_row = line;
      break;
    }
  REQUIRE_FALSE(first_row.empty());
  std::vector<std::string> fields;
  std::istringstream fs(first_row);
  while (std::getline(fs, line, ',')) fields.push_back(line);
  REQUIRE(fields.size() == 11);
  CHECK(std::stod(fields[5]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::stod(fields[6]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fields[8] == "boundary");

  CHECK(run({"beta-scan", "--steps", "1"}).code == 1);
}

TEST_CASE("identical argv gives byte-identical output") {
  const std::vector<std::string> argv{"beta-scan", "--from", "-1", "--to", "1",
                                      "--steps", "64"};
  CHECK(run(argv).out == run(argv).out);

  const std::vector<std::string> sample{"sample", "--builtin", "lebesgue2",
                                        "--length", "6", "--count", "10",
                                        "--seed", "3"};
  const Run s1 = run(sample);
  CHECK(s1.code == 0);
  CHECK(s1.out == run(sample).out);
  CHECK(s1.out.find("index,word") != std::string::npos);
}

TEST_CASE("scale verb writes the report CSV and JSON") {
  const std::string csv = temp_path("scale.csv");
  const std::string json = temp_path("scale.json");
  const Run r = run({"scale", "--beta", "0.3", "--levels", "6", "--out", csv,
                     "--json", json});
  CHECK(r.code == 0);
  std::ifstream cf(csv);
  std::stringstream cbuf;
  cbuf << cf.rdbuf();
  CHECK(cbuf.str().find("level,min_exponent,max_exponent,positive_words") !=
        std::string::npos);
  CHECK(cbuf.str().find("theoretical_s = 0.533389778") != std::string::npos);
  std::ifstream jf(json);
  std::stringstream jbuf;
  jbuf << jf.rdbuf();
  CHECK(jbuf.str().find("zeros_branch_exponent") != std::string::npos);
  std::remove(csv.c_str());
  std::remove(json.c_str());
}

TEST_CASE("spectrum verb emits eigenvalues and diagnostics") {
  const Run r = run({"spectrum", "--beta", "0.3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0.83122163515607") != std::string::npos);
  CHECK(r.out.find("region = i") != std::string::npos);
}

TEST_CASE("power verb cross-validates the principal vector") {
  const Run r = run({"power", "--beta", "0.3", "--n", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("xi_norm2 = 1.70835398860") != std::string::npos);
  CHECK(r.out.find("closed_form_vs_block = 0") != std::string::npos);
  CHECK(r.out.find("n,r,error,envelope") != std::string::npos);

  // the cantor low-pass channel has a repeated dominant eigenvalue
  CHECK(run({"power", "--builtin", "cantor3", "--n", "5"}).code == 2);
}

TEST_CASE("cascade verb writes samples and flags divergence") {
  const Run ok = run({"cascade", "--beta", "1.3089969389957472", "--depth", "8"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("x,phi,psi") != std::string::npos);
  CHECK(ok.err.empty());

  const Run warn = run({"cascade", "--beta", "-0.78539816339744831", "--depth", "8"});
  CHECK(warn.code == 0);
  CHECK(warn.err.find("warning") != std::string::npos);

  const Run pk = run({"cascade", "--beta", "0.78539816339744828", "--depth", "8",
                      "--packet", "3"});
  CHECK(pk.code == 0);
  CHECK(pk.out.find("x,phi,psi,packet") != std::string::npos);

  CHECK(run({"cascade", "--depth", "8"}).code == 1);
}

TEST_CASE("system json round-trip preserves residuals") {
  const opmeas::MeasurementSystem sys = opmeas::builtin_system("lebesgue2");
  const std::string text = opmeas::system_to_json(sys);
  const opmeas::MeasurementSystem back = opmeas::system_from_json(text);
  CHECK(back.alphabet_size() == 2);
  CHECK(back.dim() == 2);
  CHECK(opmeas::column_isometry_residual(back) < 1e-15);
  CHECK(back.label() == "lebesgue2");
}

TEST_CASE("filter bank json forms") {
  const opmeas::FilterBank beta = opmeas::filter_bank_from_json(R"({"beta":0.3})");
  CHECK(beta.beta().has_value());
  const std::string taps_text = R"([[0.7071067811865476,0],[0.7071067811865476,0],[0,0],[0,0]])";
  const opmeas::FilterBank taps = opmeas::filter_bank_from_json(taps_text);
  CHECK(taps.length() == 4);
  CHECK(taps.validated());
  CHECK_THROWS_AS(opmeas::filter_bank_from_json("3"), opmeas::LookupError);
}
