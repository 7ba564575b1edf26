#include "geolatnet/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "geolatnet/errors.hpp"

namespace geolatnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return hash == std::string_view::npos ? s : s.substr(0, hash);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

std::optional<std::uint64_t> parse_uint(std::string_view tok) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) return std::nullopt;
  return v;
}

}  // namespace

Network read_edge_list(std::istream& in, std::optional<std::size_t> nodes) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t max_id = 0;
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> header_nodes;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = trim(line);
    if (comment.starts_with("# nodes ")) {
      const auto n = parse_uint(trim(comment.substr(8)));
      if (n) header_nodes = *n;
    }
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    std::istringstream ss{std::string(body)};
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.size() != 2) throw ParseError("expected two node ids, got \"" + std::string(body) + "\"", lineno);
    const auto a = parse_uint(tok[0]);
    const auto b = parse_uint(tok[1]);
    if (!a || !b) throw ParseError("node ids must be positive integers: \"" + std::string(body) + "\"", lineno);
    if (*a == 0 || *b == 0) throw ParseError("node ids are 1-based; 0 is not allowed", lineno);
    if (*a == *b) throw ParseError("self loop on node " + std::to_string(*a), lineno);
    max_id = std::max<std::size_t>(max_id, std::max(*a, *b));
    edges.emplace_back(*a - 1, *b - 1);
  }
  std::size_t n = max_id;
  if (!nodes) nodes = header_nodes;
  if (nodes) {
    if (*nodes < max_id)
      throw ParseError("node count " + std::to_string(*nodes) + " is smaller than the largest id " +
                       std::to_string(max_id));
    n = *nodes;
  }
  return Network::from_edges(n, edges);
}

Network read_edge_list_file(const std::string& path, std::optional<std::size_t> nodes) {
  auto in = open_input(path);
  return read_edge_list(in, nodes);
}

void write_edge_list(std::ostream& out, const Network& y) {
  out << "# nodes " << y.size() << "\n";
  for (const auto& [i, j] : y.edges()) out << i + 1 << ' ' << j + 1 << '\n';
}

std::string canonical_edge_list(const Network& y) {
  std::string s = "n " + std::to_string(y.size()) + "\n";
  for (const auto& [i, j] : y.edges()) s += std::to_string(i + 1) + ' ' + std::to_string(j + 1) + '\n';
  return s;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out += kHex[md[k] >> 4];
    out += kHex[md[k] & 0xf];
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError("missing CSV column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  const auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.emplace_back(trim(cell));
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw ParseError("expected " + std::to_string(t.header.size()) + " CSV fields, got " +
                           std::to_string(cells.size()),
                       lineno);
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw ParseError("empty CSV file");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_csv(in);
}

KeyValues KeyValues::parse(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got \"" + std::string(body) + "\"", lineno);
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (kv.has(key))
      throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(kv.line(key)) + ")",
                        lineno);
    kv.set(key, value, lineno);
  }
  return kv;
}

std::size_t KeyValues::line(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? 0 : it->second.second;
}

std::string KeyValues::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second.first;
}

double KeyValues::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(d))
    throw ConfigError("key '" + key + "': expected a finite number, got \"" + v + "\"", line(key));
  return d;
}

std::uint64_t KeyValues::get_uint(const std::string& key) const {
  const std::string v = get_string(key);
  const auto u = parse_uint(v);
  if (!u) throw ConfigError("key '" + key + "': expected a non-negative integer, got \"" + v + "\"", line(key));
  return *u;
}

bool KeyValues::get_bool(const std::string& key) const {
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got \"" + v + "\"", line(key));
}

std::vector<double> KeyValues::get_doubles(const std::string& key) const {
  const std::string v = get_string(key);
  std::vector<double> out;
  std::istringstream ss(v);
  for (std::string cell; std::getline(ss, cell, ',');) {
    KeyValues one;
    one.set(key, std::string(trim(cell)), line(key));
    out.push_back(one.get_double(key));
  }
  return out;
}

RunConfig parse_run_config(const KeyValues& kv) {
  static const std::set<std::string> kKnown = {
      "geometry",        "seed",           "iterations",      "thin",           "burnin",
      "samples",         "alpha_step",     "latent_step",     "theta_step",     "prior_param_step",
      "update_prior_params", "update_theta_z", "self_check_every", "latent_sigma", "latent_kappa",
      "alpha_prior_mean", "alpha_prior_sd", "mu_radius",      "sigma_max",      "kappa_scale",
      "anchors",         "mds_restarts",   "mds_iterations",  "learning_rate",  "rmsprop_decay",
      "rmsprop_epsilon", "init_node_scale", "init_node_kappa", "init_alpha_sd", "early_stop",
      "predictive_draws", "nodes",         "alpha",           "sigma",          "kappa",
      "mu"};
  for (const auto& [key, entry] : kv.entries())
    if (!kKnown.count(key)) throw ConfigError("unknown key '" + key + "'", entry.second);

  RunConfig rc;
  auto& m = rc.mcmc;
  auto& b = rc.bbvi;
  const auto wrap = [&](const std::string& key, auto&& fn) {
    if (!kv.has(key)) return;
    try {
      fn();
    } catch (const ConfigError& e) {
      if (e.line() != 0) throw;
      throw ConfigError(e.what(), kv.line(key));
    } catch (const Error& e) {
      throw ConfigError("key '" + key + "': " + e.what(), kv.line(key));
    }
  };

  wrap("geometry", [&] { rc.geometry = parse_geometry(kv.get_string("geometry")); });
  wrap("seed", [&] { m.seed = b.seed = kv.get_uint("seed"); });
  wrap("iterations", [&] { m.iterations = b.iterations = kv.get_uint("iterations"); });
  wrap("thin", [&] { m.thin = kv.get_uint("thin"); });
  wrap("burnin", [&] { rc.burnin = kv.get_uint("burnin"); });
  wrap("samples", [&] { b.samples = kv.get_uint("samples"); });
  wrap("alpha_step", [&] { m.alpha_step = kv.get_double("alpha_step"); });
  wrap("latent_step", [&] { m.latent_step = kv.get_double("latent_step"); });
  wrap("theta_step", [&] { m.theta_step = kv.get_double("theta_step"); });
  wrap("prior_param_step", [&] { m.prior_param_step = kv.get_double("prior_param_step"); });
  wrap("update_prior_params", [&] { m.update_prior_params = kv.get_bool("update_prior_params"); });
  wrap("update_theta_z", [&] { m.update_theta_z = kv.get_bool("update_theta_z"); });
  wrap("self_check_every", [&] { m.self_check_every = kv.get_uint("self_check_every"); });
  wrap("latent_sigma", [&] { m.latent_sigma = b.latent_sigma = kv.get_double("latent_sigma"); });
  wrap("latent_kappa", [&] { m.latent_kappa = b.latent_kappa = kv.get_double("latent_kappa"); });
  wrap("alpha_prior_mean",
       [&] { m.priors.alpha_prior.m = b.priors.alpha_prior.m = kv.get_double("alpha_prior_mean"); });
  wrap("alpha_prior_sd", [&] { m.priors.alpha_prior.s = b.priors.alpha_prior.s = kv.get_double("alpha_prior_sd"); });
  wrap("mu_radius", [&] { m.priors.hyperbolic.radius = b.priors.hyperbolic.radius = kv.get_double("mu_radius"); });
  wrap("sigma_max",
       [&] { m.priors.hyperbolic.sigma_max = b.priors.hyperbolic.sigma_max = kv.get_double("sigma_max"); });
  wrap("kappa_scale",
       [&] { m.priors.spherical.kappa_scale = b.priors.spherical.kappa_scale = kv.get_double("kappa_scale"); });
  wrap("anchors", [&] {
    const auto ids = kv.get_doubles("anchors");
    if (ids.size() != 3) throw ConfigError("key 'anchors': expected three node ids", kv.line("anchors"));
    AnchorSpec a;
    std::size_t* slots[3] = {&a.i1, &a.i2, &a.i3};
    for (std::size_t k = 0; k < 3; ++k) {
      if (ids[k] < 1.0 || ids[k] != std::floor(ids[k]))
        throw ConfigError("key 'anchors': ids must be positive integers", kv.line("anchors"));
      *slots[k] = static_cast<std::size_t>(ids[k]) - 1;
    }
    m.anchors = b.anchors = a;
  });
  wrap("mds_restarts", [&] { m.mds.restarts = b.mds.restarts = static_cast<int>(kv.get_uint("mds_restarts")); });
  wrap("mds_iterations",
       [&] { m.mds.max_iterations = b.mds.max_iterations = static_cast<int>(kv.get_uint("mds_iterations")); });
  wrap("learning_rate", [&] { b.learning_rate = kv.get_double("learning_rate"); });
  wrap("rmsprop_decay", [&] { b.rmsprop_decay = kv.get_double("rmsprop_decay"); });
  wrap("rmsprop_epsilon", [&] { b.rmsprop_epsilon = kv.get_double("rmsprop_epsilon"); });
  wrap("init_node_scale", [&] { b.init_node_scale = kv.get_double("init_node_scale"); });
  wrap("init_node_kappa", [&] { b.init_node_kappa = kv.get_double("init_node_kappa"); });
  wrap("init_alpha_sd", [&] { b.init_alpha_sd = kv.get_double("init_alpha_sd"); });
  wrap("early_stop", [&] { b.early_stop = kv.get_double("early_stop"); });
  wrap("predictive_draws", [&] { rc.predictive_draws = kv.get_uint("predictive_draws"); });
  wrap("nodes", [&] { rc.nodes = kv.get_uint("nodes"); });
  wrap("alpha", [&] { rc.alpha = kv.get_double("alpha"); });
  wrap("sigma", [&] { rc.sigma = kv.get_double("sigma"); });
  wrap("kappa", [&] { rc.kappa = kv.get_double("kappa"); });
  wrap("mu", [&] { rc.mu = kv.get_doubles("mu"); });
  return rc;
}

std::vector<std::pair<std::string, std::string>> effective_config(const RunConfig& rc, RunKind kind) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto shortest = [](double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
  };
  const auto num = [&](const char* key, double v) { out.emplace_back(key, shortest(v)); };
  const auto count = [&](const char* key, std::uint64_t v) { out.emplace_back(key, std::to_string(v)); };
  const auto flag = [&](const char* key, bool v) { out.emplace_back(key, v ? "true" : "false"); };
  if (rc.geometry) out.emplace_back("geometry", std::string(to_string(*rc.geometry)));

  if (kind == RunKind::generate) {
    count("seed", rc.mcmc.seed);
    count("nodes", rc.nodes);
    num("alpha", rc.alpha);
    num("sigma", rc.sigma);
    num("kappa", rc.kappa);
    if (!rc.mu.empty()) {
      std::string mu;
      for (std::size_t k = 0; k < rc.mu.size(); ++k) mu += (k ? "," : "") + shortest(rc.mu[k]);
      out.emplace_back("mu", mu);
    }
    return out;
  }

  const bool mcmc = kind == RunKind::mcmc;
  const auto& priors = mcmc ? rc.mcmc.priors : rc.bbvi.priors;
  const auto& anchors = mcmc ? rc.mcmc.anchors : rc.bbvi.anchors;
  const auto& mds = mcmc ? rc.mcmc.mds : rc.bbvi.mds;
  count("seed", mcmc ? rc.mcmc.seed : rc.bbvi.seed);
  count("iterations", mcmc ? rc.mcmc.iterations : rc.bbvi.iterations);
  if (rc.nodes) count("nodes", rc.nodes);
  num("latent_sigma", mcmc ? rc.mcmc.latent_sigma : rc.bbvi.latent_sigma);
  num("latent_kappa", mcmc ? rc.mcmc.latent_kappa : rc.bbvi.latent_kappa);
  num("alpha_prior_mean", priors.alpha_prior.m);
  num("alpha_prior_sd", priors.alpha_prior.s);
  num("mu_radius", priors.hyperbolic.radius);
  num("sigma_max", priors.hyperbolic.sigma_max);
  num("kappa_scale", priors.spherical.kappa_scale);
  if (anchors)
    out.emplace_back("anchors", std::to_string(anchors->i1 + 1) + "," + std::to_string(anchors->i2 + 1) + "," +
                                    std::to_string(anchors->i3 + 1));
  count("mds_restarts", static_cast<std::uint64_t>(mds.restarts));
  count("mds_iterations", static_cast<std::uint64_t>(mds.max_iterations));
  count("burnin", rc.burnin);
  count("predictive_draws", rc.predictive_draws);
  if (mcmc) {
    const auto& m = rc.mcmc;
    count("thin", m.thin);
    num("alpha_step", m.alpha_step);
    num("latent_step", m.latent_step);
    num("theta_step", m.theta_step);
    num("prior_param_step", m.prior_param_step);
    flag("update_prior_params", m.update_prior_params);
    flag("update_theta_z", m.update_theta_z);
    count("self_check_every", m.self_check_every);
  } else {
    const auto& b = rc.bbvi;
    count("samples", b.samples);
    num("learning_rate", b.learning_rate);
    num("rmsprop_decay", b.rmsprop_decay);
    num("rmsprop_epsilon", b.rmsprop_epsilon);
    num("init_node_scale", b.init_node_scale);
    num("init_node_kappa", b.init_node_kappa);
    num("init_alpha_sd", b.init_alpha_sd);
    num("early_stop", b.early_stop);
  }
  return out;
}

RunConfig read_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_run_config(KeyValues::parse(in));
}

}  // namespace geolatnet
