#pragma once

// File formats used by the command-line tool: edge lists, key=value run
// configs, CSV helpers and input hashing.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geolatnet/bbvi.hpp"
#include "geolatnet/geometry.hpp"
#include "geolatnet/mcmc.hpp"
#include "geolatnet/network.hpp"

namespace geolatnet {

// One edge per line as two whitespace-separated 1-based ids; '#' starts a
// comment. Duplicates (either orientation) are merged. The node count is the
// largest id unless `nodes` is given, or the file carries a "# nodes N"
// comment line as written by write_edge_list; either must cover every id.
Network read_edge_list(std::istream& in, std::optional<std::size_t> nodes = std::nullopt);
Network read_edge_list_file(const std::string& path, std::optional<std::size_t> nodes = std::nullopt);

void write_edge_list(std::ostream& out, const Network& y);

// "n <N>" followed by sorted 1-based "i j" lines; the hashed form of an input.
std::string canonical_edge_list(const Network& y);

std::string sha256_hex(std::string_view data);

// Shortest round-trip form with 17 significant digits.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws ParseError if absent
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

// Flat key=value pairs with their line numbers. Blank lines and '#' comments
// are ignored; repeated keys are an error.
class KeyValues {
 public:
  static KeyValues parse(std::istream& in);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::pair<std::string, std::size_t>>& entries() const noexcept { return values_; }

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma separated
  std::size_t line(const std::string& key) const;

  void set(const std::string& key, const std::string& value, std::size_t line = 0) {
    values_[key] = {value, line};
  }

 private:
  std::map<std::string, std::pair<std::string, std::size_t>> values_;
};

// Everything a run can be configured with; keys not listed in the README
// are rejected with their line number.
struct RunConfig {
  std::optional<Geometry> geometry;
  McmcConfig mcmc{};
  BbviConfig bbvi{};
  std::size_t burnin = 0;
  std::size_t predictive_draws = 500;
  // generate
  std::size_t nodes = 0;
  double alpha = 0.0;
  double sigma = 1.0;
  double kappa = 1.0;
  std::vector<double> mu;  // empty: canonical origin / north pole
};

RunConfig parse_run_config(const KeyValues& kv);
RunConfig read_run_config_file(const std::string& path);

enum class RunKind { generate, mcmc, bbvi };

// The keys that affect a run of the given kind, with every value spelled out.
// Feeding them back through parse_run_config reproduces the configuration.
std::vector<std::pair<std::string, std::string>> effective_config(const RunConfig& rc, RunKind kind);

}  // namespace geolatnet
