#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "odb/smatrix.hpp"

namespace odb::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Method { perturbative, floquet, both };
enum class Format { csv, json };

// Bad configuration or flags; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric failure at one grid energy; maps to exit code 1.
struct PointError : std::runtime_error {
  PointError(double eps, const std::string& what);
  double eps;
};

struct ScanConfig {
  double g0 = 0.1;
  double eps_min = 0.2;
  double eps_max = 3.0;
  int steps = 50;
  int n_max = 6;
  Method method = Method::both;
  Order order = Order::renormalized;
  double tol = 1e-8;        // largest accepted Floquet unitarity defect
  Format output_format = Format::csv;
  std::string output_path;  // empty: stdout
  int threads = 1;
  double exclude = -1.0;    // compare: resonance half-width, negative = 5 g0^2

  void validate() const;
  double exclusion() const { return exclude >= 0.0 ? exclude : 5.0 * g0 * g0; }
  double eps_at(int i) const { return eps_min + (eps_max - eps_min) * i / (steps - 1); }
};

const std::vector<std::string>& valid_keys();
Method parse_method(const std::string& s);
Format parse_format(const std::string& s);
std::string to_string(Method m);
std::string to_string(Format f);

// key = value lines, '#' starts a comment; values land on top of `base`.
ScanConfig parse_config(std::istream& in, ScanConfig base = {});
ScanConfig parse_config_file(const std::string& path, ScanConfig base = {});

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ScanRow {
  double eps_i = kNaN;
  double T_elastic = kNaN, R_elastic = kNaN;
  double T_total_pert = kNaN, T_total_floquet = kNaN;
  double w0 = kNaN;
  double im_gamma = kNaN, re_gamma = kNaN;
  std::map<int, double> T_n;  // |k_f|/k_i |T(n)|^2, NaN for closed sidebands
};

// One grid point; throws on numeric failure.
ScanRow compute_row(const ScanConfig& c, double eps);

// Grid in index order; points run on c.threads workers. A failure reports
// the smallest failing grid energy.
std::vector<ScanRow> run_scan(const ScanConfig& c);

std::vector<std::string> csv_header(int n_max);
void write_csv(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows);
void write_json(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows);

std::string format_double(double x);  // %.17g, "nan" for NaN

struct CompareSummary {
  int rows = 0, used = 0, excluded = 0;
  double window = 0.0;
  double max_diff = 0.0, mean_diff = 0.0;
};

CompareSummary summarize(const ScanConfig& c, const std::vector<ScanRow>& rows);
void write_compare(std::ostream& out, const ScanConfig& c, const std::vector<ScanRow>& rows);

// Command bodies; reports go to `out`, data to the configured file (or `out`).
// They throw UsageError or a numeric error; main() maps those to exit codes.
void cmd_scan(const ScanConfig& c, std::ostream& out);
void cmd_zero(const ScanConfig& c, std::ostream& out);
void cmd_compare(ScanConfig c, std::ostream& out);
void cmd_w0(const ScanConfig& c, std::ostream& out);

}  // namespace odb::cli
