#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "skewgp/chi_squared.hpp"
#include "skewgp/error_analysis.hpp"
#include "skewgp/errors.hpp"
#include "skewgp/joint_sampler.hpp"
#include "skewgp/validation.hpp"

namespace skewgp {

using Json = nlohmann::json;

/// Failure to write an output artifact; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// %.17g; non-finite values become nan / inf / -inf.
std::string format_double(double v);

/// Serializes a record with sorted keys, two-space indentation and every
/// floating-point number at 17 significant digits. Non-finite numbers are
/// written as null. Output ends with a newline.
std::string dump_record(const Json& record);

Json kernel_to_json(const RadialKernel& kernel);
/// {"family": "se" | "rq" | "matern52", "lengthscale": l, "alpha": a}; alpha only for rq.
RadialKernel kernel_from_json(const Json& j);

Json report_to_json(const ValidationReport& report);
/// Inverse of report_to_json (wall time is not part of the record).
ValidationReport report_from_json(const Json& j);

inline constexpr const char* kChecksCsvHeader =
    "name,closed_form,empirical,mc_standard_error,k,abs_tol,rel_tol,sidedness,tolerance,pass";
std::string checks_csv(const ValidationReport& report);

Json bound_to_json(const BoundReport& report);

inline constexpr const char* kBoundsCsvHeader = "R,regime,variance_bound,b_uniform,paper_literal_b";
/// One row per region radius R (not squared), bound evaluated at confidence p.
std::string bounds_scan_csv(const RadialKernel& kernel, double p, const std::vector<double>& radii);

inline constexpr const char* kDimScanCsvHeader = "D,lambda1_exact,lambda1_fisher";
/// Rows followed by '#'-prefixed footer lines carrying the fitted slopes.
std::string dim_scan_csv(const ScalingScan& scan);
Json dim_scan_to_json(const ScalingScan& scan);

std::string sample_csv(const GramLayout& layout, const RowMatrix& rows);

void write_file(const std::string& path, const std::string& content);

}  // namespace skewgp
