// odb: transmission through an oscillating delta barrier.
#include <CLI11.hpp>
#include <iostream>

#include "odb/cli.hpp"
#include "odb/errors.hpp"

using namespace odb::cli;

int main(int argc, char** argv) {
  CLI::App app{"Transmission through a delta barrier with oscillating strength"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  double g0 = 0, e_min = 0, e_max = 0, tol = 0, exclude = 0;
  int steps = 0, n_max = 0, threads = 0;
  std::string method, order, output, format;

  auto add_common = [&](CLI::App* c, bool grid) {
    c->add_option("--config", config_path, "key = value config file");
    c->add_option("--g0", g0, "dimensionless coupling");
    c->add_option("--method", method, "perturbative | floquet | both");
    c->add_option("--order", order, "first | second_bare | renormalized");
    c->add_option("--output", output, "output file (default stdout)");
    c->add_option("--format", format, "csv | json");
    c->add_option("--tol", tol, "largest accepted Floquet unitarity defect");
    if (grid) {
      c->add_option("--e-min", e_min, "lowest incoming energy");
      c->add_option("--e-max", e_max, "highest incoming energy");
      c->add_option("--steps", steps, "grid points (>= 2)");
      c->add_option("--n-max", n_max, "largest |n| of reported sidebands");
      c->add_option("--threads", threads, "worker threads");
    }
  };
  auto* scan = app.add_subcommand("scan", "energy scan of transmission quantities");
  add_common(scan, true);
  auto* zero = app.add_subcommand("zero", "locate the elastic transmission zero");
  add_common(zero, false);
  auto* compare = app.add_subcommand("compare", "perturbative vs Floquet total transmission");
  add_common(compare, true);
  compare->add_option("--exclude", exclude, "resonance half-width around eps = 1 (default 5 g0^2)");
  auto* w0c = app.add_subcommand("w0", "relative weight of bound-state processes");
  add_common(w0c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ScanConfig c;
  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--config")) c = parse_config_file(config_path, c);
    auto given = [&](const char* f) { return sub->get_option_no_throw(f) && sub->count(f) > 0; };
    if (given("--g0")) c.g0 = g0;
    if (given("--e-min")) c.eps_min = e_min;
    if (given("--e-max")) c.eps_max = e_max;
    if (given("--steps")) c.steps = steps;
    if (given("--n-max")) c.n_max = n_max;
    if (given("--threads")) c.threads = threads;
    if (given("--tol")) c.tol = tol;
    if (given("--exclude")) c.exclude = exclude;
    if (given("--method")) c.method = parse_method(method);
    if (given("--order")) c.order = odb::parse_order(order);
    if (given("--format")) c.output_format = parse_format(format);
    if (given("--output")) c.output_path = output;
    c.validate();

    if (sub == scan) cmd_scan(c, std::cout);
    else if (sub == zero) cmd_zero(c, std::cout);
    else if (sub == compare) cmd_compare(c, std::cout);
    else cmd_w0(c, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const odb::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
