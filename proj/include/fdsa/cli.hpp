#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdsa/gradest.hpp"
#include "fdsa/rates.hpp"

namespace fdsa::cli {

/// Everything a subcommand needs, validated before any computation starts.
struct ExperimentSpec {
  std::string subcommand;
  std::string problem;
  std::string algo = "kw";
  Scheme scheme = Scheme::symmetric;
  Coupling coupling = Coupling::crn;
  Method method = Method::inversion;
  GainSchedule schedule;
  std::uint64_t n = 100000;
  std::size_t reps = 400;
  std::uint64_t seed = 0;
  unsigned checkpoints_per_decade = 20;
  unsigned threads = 0;
  std::string out;
};

/// 17 significant digits, enough for an exact round trip of any double.
std::string format_double(double v);
/// Shortest representation that round-trips.
std::string format_short(double v);

/// "key=value" lines with '#' comments, turned into "--key value" tokens.
std::vector<std::string> read_config_file(const std::string& path);

void write_rates_csv(std::ostream& os, const RateReport& report);
void write_variance_csv(std::ostream& os, const VarianceProbe& probe);
void write_bias_csv(std::ostream& os, const BiasProbe& probe);
void write_table1_csv(std::ostream& os, const std::vector<Table1Cell>& cells);

/// Entry point of the command-line tool. Exit status: 0 when every requested
/// verdict passes, 1 when a verdict fails, 2 on a usage error, 3 on a runtime
/// or I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fdsa::cli
