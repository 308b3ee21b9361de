#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "skewgp/report_io.hpp"

using namespace skewgp;
using doctest::Approx;

namespace {

ValidationReport small_report() {
  ValidationReport r{"covariance", 20000, 123};
  r.checks.push_back(make_check("joint[f0,g1]", 0.1, 0.11, 0.01, 4.0));
  r.checks.push_back(make_check("coverage", 0.9025, 0.5, 0.01, 0.0, 0.0, 0.0, Sidedness::AtLeast));
  r.metrics = {{"jitter_used", 0.0}, {"b_uniform", 2.1630478332327496}};
  r.diagnostics = {"note"};
  r.wall_time_s = 3.5;
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(dump_record(Json{{"b", 1.0 / 3.0}, {"a", 1}}) == "{\n  \"a\": 1,\n  \"b\": 0.33333333333333331\n}\n");
}

TEST_CASE("record round trip and byte stability") {
  const auto r = small_report();
  const std::string text = dump_record(report_to_json(r));
  CHECK(text == dump_record(report_to_json(small_report())));
  const auto back = report_from_json(Json::parse(text));
  CHECK(back.campaign == r.campaign);
  CHECK(back.samples == r.samples);
  CHECK(back.seed == r.seed);
  REQUIRE(back.checks.size() == 2);
  CHECK(back.checks[0].empirical == r.checks[0].empirical);
  CHECK(back.checks[1].sidedness == Sidedness::AtLeast);
  CHECK_FALSE(back.checks[1].pass);
  CHECK(back.metric("b_uniform") == r.metric("b_uniform"));
  CHECK(back.diagnostics == r.diagnostics);
  CHECK(text.find("wall") == std::string::npos);
  CHECK(dump_record(report_to_json(back)) == text);
}

TEST_CASE("csv schemas") {
  const std::string checks = checks_csv(small_report());
  CHECK(first_line(checks) == kChecksCsvHeader);
  CHECK(checks.find("\"joint[f0,g1]\",0.10000000000000001") != std::string::npos);

  const auto k = RadialKernel::squared_exponential(1.0);
  const std::string scan = bounds_scan_csv(k, 0.95, {0.5, 2.0});
  CHECK(first_line(scan) == "R,regime,variance_bound,b_uniform,paper_literal_b");
  CHECK(scan.find("0.5,local,1.7293294335267746") != std::string::npos);
  CHECK(scan.find("2,far_or_transitional,321.7853039181") != std::string::npos);

  const auto dims = lambda1_scaling_scan(0.95, 1.0, {30, 300});
  const std::string d = dim_scan_csv(dims);
  CHECK(first_line(d) == "D,lambda1_exact,lambda1_fisher");
  CHECK(d.find("# slope_exact,") != std::string::npos);

  RowMatrix rows(1, 3);
  rows << 1.5, -2, 0;
  CHECK(first_line(sample_csv(GramLayout{1, 1}, rows)) == "f0,g0,H11_0_0");
}

TEST_CASE("kernel json") {
  const auto k = kernel_from_json(Json{{"family", "rq"}, {"lengthscale", 1.5}, {"alpha", 2.0}});
  CHECK(k.family() == KernelFamily::RationalQuadratic);
  CHECK(k.alpha() == 2.0);
  CHECK(kernel_to_json(k)["alpha"] == 2.0);
  CHECK_FALSE(kernel_to_json(RadialKernel::matern52(1.0)).contains("alpha"));
  CHECK_THROWS_AS(kernel_from_json(Json{{"family", "xx"}, {"lengthscale", 1.0}}), InvalidArgument);
}

TEST_CASE("bound record") {
  const auto r = uniform_bound(RadialKernel::squared_exponential(1.0), BoundConfig{0.95, 0.95, {}, 2, 0.25});
  const Json j = Json::parse(dump_record(bound_to_json(r)));
  CHECK(j["b_uniform"].get<double>() == r.b_uniform);
  CHECK(j["regime"] == "local");
}

TEST_CASE("file output") {
  const std::string path = "report_io_test.tmp";
  write_file(path, "abc\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "abc\n");
  std::remove(path.c_str());
  try {
    write_file("/nonexistent-dir/x.csv", "x");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/x.csv") != std::string::npos);
  }
}
