// geolatnet: generate networks, fit them by MCMC or BBVI, and compute
// posterior-predictive link probabilities.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geolatnet/bbvi.hpp"
#include "geolatnet/errors.hpp"
#include "geolatnet/evaluate.hpp"
#include "geolatnet/io.hpp"
#include "geolatnet/mcmc.hpp"
#include "geolatnet/model.hpp"
#include "geolatnet/parallel.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace geolatnet;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kNumerical = 4 };

struct Options {
  std::string geometry;
  std::string edges;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> thin;
  std::optional<std::size_t> burnin;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> nodes;
  std::size_t chains = 1;
};

template <class F>
decltype(auto) with_geometry(Geometry g, F&& f) {
  if (g == Geometry::hyperbolic) return f.template operator()<Hyperbolic>();
  return f.template operator()<Spherical>();
}

// --- small file helpers ------------------------------------------------------

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

void write_json(const fs::path& path, const json& j) { open_output(path) << j.dump(2) << '\n'; }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

template <class P>
json point_json(const P& p) {
  return json(p.coords());
}

DiskPoint disk_from(const std::vector<double>& c) {
  if (c.size() != 2) throw ParseError("expected 2 coordinates for a disk point");
  return {c[0], c[1]};
}
SpherePoint sphere_from(const std::vector<double>& c) {
  if (c.size() != 3) throw ParseError("expected 3 coordinates for a sphere point");
  return {c[0], c[1], c[2]};
}
template <class G>
typename G::Point point_from(const std::vector<double>& c) {
  if constexpr (std::is_same_v<G, Hyperbolic>) return disk_from(c);
  else return sphere_from(c);
}

json theta_json(const HyperbolicNormalParams& t) { return {{"mu", point_json(t.mu)}, {"sigma", t.sigma}}; }
json theta_json(const VmfParams& t) { return {{"mu", point_json(t.mu)}, {"kappa", t.kappa}}; }

template <class G>
LatentParams<G> theta_from(const json& j) {
  LatentParams<G> t;
  t.mu = point_from<G>(j.at("mu").get<std::vector<double>>());
  if constexpr (std::is_same_v<G, Hyperbolic>) t.sigma = j.at("sigma").get<double>();
  else t.kappa = j.at("kappa").get<double>();
  return t;
}

json anchors_json(const AnchorSpec& a) { return json::array({a.i1 + 1, a.i2 + 1, a.i3 + 1}); }

AnchorSpec anchors_from(const json& j) {
  const auto v = j.get<std::vector<std::size_t>>();
  if (v.size() != 3 || std::find(v.begin(), v.end(), 0) != v.end()) throw ParseError("malformed anchors");
  return {v[0] - 1, v[1] - 1, v[2] - 1};
}

template <class G>
void write_points_csv(std::ostream& out, std::size_t iter, const std::vector<typename G::Point>& z,
                      bool with_iter) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (with_iter) out << iter << ',';
    out << i + 1;
    for (double c : z[i].coords()) out << ',' << format_double(c);
    out << '\n';
  }
}

std::string points_header(Geometry g, bool with_iter) {
  std::string h = with_iter ? "iter,node,c1,c2" : "node,c1,c2";
  if (g == Geometry::spherical) h += ",c3";
  return h;
}

double to_double(const std::string& s, std::size_t row) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParseError("not a number: \"" + s + "\"", row);
  return v;
}

// --- configuration -----------------------------------------------------------

RunConfig load_config(const Options& o, RunKind kind) {
  RunConfig rc = o.config.empty() ? RunConfig{} : read_run_config_file(o.config);
  if (!o.geometry.empty()) {
    try {
      rc.geometry = parse_geometry(o.geometry);
    } catch (const Error& e) {
      throw ConfigError(std::string("--geometry: ") + e.what());
    }
  }
  if (!rc.geometry) throw ConfigError("no geometry given; pass --geometry or set geometry= in the config");
  if (o.seed) rc.mcmc.seed = rc.bbvi.seed = *o.seed;
  if (o.iterations) rc.mcmc.iterations = rc.bbvi.iterations = *o.iterations;
  if (o.thin) rc.mcmc.thin = *o.thin;
  if (o.burnin) rc.burnin = *o.burnin;
  if (o.samples) {
    if (kind == RunKind::bbvi) rc.bbvi.samples = *o.samples;
    else rc.predictive_draws = *o.samples;
  }
  if (o.nodes) rc.nodes = *o.nodes;
  if (kind == RunKind::mcmc) rc.mcmc.validate();
  if (kind == RunKind::bbvi) rc.bbvi.validate();
  if (rc.predictive_draws == 0) throw ConfigError("predictive_draws must be at least 1");
  return rc;
}

json config_json(const RunConfig& rc, RunKind kind) {
  json j = json::object();
  for (const auto& [k, v] : effective_config(rc, kind)) j[k] = v;
  return j;
}

// Rebuilds a RunConfig from a manifest's config object.
RunConfig config_from_manifest(const json& manifest) {
  std::istringstream text;
  std::string s;
  for (const auto& [k, v] : manifest.at("config").items()) s += k + " = " + v.get<std::string>() + "\n";
  text.str(s);
  return parse_run_config(KeyValues::parse(text));
}

// --- generate ------------------------------------------------------------------

template <class G>
void generate(const RunConfig& rc, const fs::path& out) {
  if (rc.nodes == 0) throw ConfigError("generate needs nodes= (or --nodes)");
  LatentParams<G> theta;
  if constexpr (std::is_same_v<G, Hyperbolic>) {
    if (!(rc.sigma > 0.0)) throw ConfigError("sigma must be positive");
    theta.sigma = rc.sigma;
  } else {
    if (!(rc.kappa >= 0.0)) throw ConfigError("kappa must be non-negative");
    theta.kappa = rc.kappa;
  }
  if (!rc.mu.empty()) {
    try {
      theta.mu = point_from<G>(rc.mu);
    } catch (const Error& e) {
      throw ConfigError(std::string("mu: ") + e.what());
    }
  }
  Rng rng = derive_rng(rc.mcmc.seed, 0);
  const auto sample = sample_network<G>(rc.alpha, theta, rc.nodes, rng);

  fs::create_directories(out);
  {
    auto f = open_output(out / "edges.txt");
    write_edge_list(f, sample.y);
  }
  {
    auto f = open_output(out / "truth.csv");
    f << points_header(G::tag, false) << '\n';
    write_points_csv<G>(f, 0, sample.cfg.z, false);
  }
  json truth = {{"geometry", std::string(to_string(G::tag))},
                {"nodes", rc.nodes},
                {"edges", sample.y.edge_count()},
                {"seed", rc.mcmc.seed},
                {"alpha", sample.cfg.alpha},
                {"theta", theta_json(sample.cfg.theta)},
                {"config", config_json(rc, RunKind::generate)}};
  write_json(out / "truth.json", truth);
  std::cerr << "generated " << rc.nodes << " nodes, " << sample.y.edge_count() << " edges -> " << out.string()
            << '\n';
}

// --- fit -----------------------------------------------------------------------

json manifest_base(const char* command, const RunConfig& rc, RunKind kind, const Network& y, const Options& o) {
  return {{"tool", "geolatnet"},
          {"version", kVersion},
          {"command", command},
          {"geometry", std::string(to_string(*rc.geometry))},
          {"input",
           {{"path", fs::absolute(o.edges).string()},
            {"sha256", sha256_hex(canonical_edge_list(y))},
            {"nodes", y.size()},
            {"edges", y.edge_count()}}},
          {"seed", kind == RunKind::mcmc ? rc.mcmc.seed : rc.bbvi.seed},
          {"config", config_json(rc, kind)},
          {"threads", thread_budget()}};
}

template <class G>
void fit_mcmc(const Network& y, const RunConfig& rc, const Options& o, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto trace = run_mcmc<G>(y, rc.mcmc);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(out);
  {
    auto f = open_output(out / "trace.csv");
    f << "iter,alpha,loglik\n";
    for (std::size_t k = 0; k < trace.size(); ++k)
      f << trace.iterations[k] << ',' << format_double(trace.alpha_samples[k]) << ','
        << format_double(trace.loglik_samples[k]) << '\n';
  }
  {
    auto f = open_output(out / "latent.csv");
    f << points_header(G::tag, true) << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) write_points_csv<G>(f, trace.iterations[k], trace.z_samples[k], true);
  }

  const auto first = static_cast<std::size_t>(
      std::upper_bound(trace.iterations.begin(), trace.iterations.end(), rc.burnin) - trace.iterations.begin());
  const std::span<const double> kept(trace.alpha_samples.data() + first, trace.size() - first);
  json state = {{"method", "mcmc"},
                {"geometry", std::string(to_string(G::tag))},
                {"nodes", y.size()},
                {"anchors", anchors_json(trace.anchors)},
                {"burnin", rc.burnin},
                {"retained", kept.size()},
                {"acceptance",
                 {{"alpha", trace.acceptance.alpha},
                  {"latent", trace.acceptance.latent},
                  {"anchor", trace.acceptance.anchor},
                  {"theta", trace.acceptance.theta},
                  {"prior_params", trace.acceptance.prior_params}}},
                {"init_stress", trace.init_stress}};
  if (!kept.empty()) {
    double mean = 0.0;
    for (double a : kept) mean += a;
    mean /= static_cast<double>(kept.size());
    double var = 0.0;
    for (double a : kept) var += (a - mean) * (a - mean);
    state["alpha_mean"] = mean;
    state["alpha_sd"] = kept.size() > 1 ? std::sqrt(var / static_cast<double>(kept.size() - 1)) : 0.0;
    if (kept.size() >= 10) state["alpha_ess"] = effective_sample_size(kept);
    const std::span<const std::vector<typename G::Point>> zs(trace.z_samples.data() + first, kept.size());
    const auto summary = summarize_latent<G>(zs);
    json means = json::array();
    for (const auto& p : summary.mean) means.push_back(point_json(p));
    state["frechet_mean"] = means;
    state["dispersion"] = summary.dispersion;
  }
  if (trace.size() > 0) {
    json z = json::array();
    for (const auto& p : trace.z_samples.back()) z.push_back(point_json(p));
    state["final"] = {{"alpha", trace.alpha_samples.back()}, {"theta", theta_json(trace.theta_samples.back())}, {"z", z}};
  }
  write_json(out / "state.json", state);

  json manifest = manifest_base("fit mcmc", rc, RunKind::mcmc, y, o);
  manifest["anchors"] = anchors_json(trace.anchors);
  manifest["timing"] = {{"seconds", seconds}};
  write_json(out / "manifest.json", manifest);

  std::fprintf(stderr, "mcmc: %zu samples, alpha mean %.4f, acceptance alpha %.2f latent %.2f -> %s\n", trace.size(),
               state.value("alpha_mean", std::nan("")), trace.acceptance.alpha, trace.acceptance.latent,
               out.string().c_str());
}

template <class G>
void fit_bbvi(const Network& y, const RunConfig& rc, const Options& o, const fs::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run_bbvi<G>(y, rc.bbvi);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& q = result.state;

  fs::create_directories(out);
  {
    auto f = open_output(out / "elbo.csv");
    f << "iter,elbo,loglik,m_tilde,sigma_tilde\n";
    for (std::size_t k = 0; k < result.elbo_trace.size(); ++k)
      f << k + 1 << ',' << format_double(result.elbo_trace[k]) << ',' << format_double(result.loglik_trace[k]) << ','
        << format_double(result.m_trace[k]) << ',' << format_double(result.sigma_trace[k]) << '\n';
  }
  json params = json::array();
  json locations = json::array();
  json dispersion = json::array();
  for (std::size_t i = 0; i < q.size(); ++i) {
    params.push_back(q.nodes[i]);
    locations.push_back(point_json(q.location(i)));
    dispersion.push_back(q.node_dispersion(i));
  }
  json state = {{"method", "bbvi"},
                {"geometry", std::string(to_string(G::tag))},
                {"nodes", y.size()},
                {"anchors", anchors_json(q.anchors)},
                {"m_tilde", q.m_tilde},
                {"sigma_tilde", q.sigma_tilde()},
                {"log_sigma_tilde", q.log_sigma_tilde},
                {"theta", theta_json(q.theta)},
                {"node_params", params},
                {"locations", locations},
                {"dispersion", dispersion},
                {"iterations_run", result.iterations_run},
                {"final_elbo", result.elbo_trace.empty() ? 0.0 : result.elbo_trace.back()},
                {"init_stress", result.init_stress}};
  write_json(out / "state.json", state);

  json manifest = manifest_base("fit bbvi", rc, RunKind::bbvi, y, o);
  manifest["anchors"] = anchors_json(q.anchors);
  manifest["timing"] = {{"seconds", seconds}};
  write_json(out / "manifest.json", manifest);

  std::fprintf(stderr, "bbvi: %zu iterations, m_tilde %.4f, sigma_tilde %.4f -> %s\n", result.iterations_run,
               q.m_tilde, q.sigma_tilde(), out.string().c_str());
}

void fit(RunKind kind, const Options& o) {
  const RunConfig rc = load_config(o, kind);
  const Network y = read_edge_list_file(o.edges, rc.nodes ? std::optional<std::size_t>(rc.nodes) : std::nullopt);
  if (y.edge_count() == 0) throw ParseError("'" + o.edges + "' has no edges");
  const fs::path out(o.out);
  if (o.chains == 0) throw ConfigError("--chains must be at least 1");

  const auto run_one = [&](const RunConfig& cfg, const fs::path& dir) {
    with_geometry(*cfg.geometry, [&]<class G>() {
      if (kind == RunKind::mcmc) fit_mcmc<G>(y, cfg, o, dir);
      else fit_bbvi<G>(y, cfg, o, dir);
    });
  };
  if (o.chains == 1) {
    run_one(rc, out);
    return;
  }
  parallel_for(o.chains, [&](std::size_t k) {
    RunConfig cfg = rc;
    cfg.mcmc.seed += k;
    cfg.bbvi.seed += k;
    run_one(cfg, out / ("chain-" + std::to_string(k)));
  });
}

// --- predict -------------------------------------------------------------------

template <class G>
std::vector<PredictiveRecord> predict_mcmc(const Network& y, const fs::path& dir, std::size_t burnin) {
  const auto trace = read_csv_file((dir / "trace.csv").string());
  const auto latent = read_csv_file((dir / "latent.csv").string());
  const std::size_t it_col = trace.column("iter"), a_col = trace.column("alpha");
  std::vector<std::size_t> iters;
  std::vector<double> alphas;
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    const auto it = static_cast<std::size_t>(to_double(trace.rows[r][it_col], r + 2));
    if (it <= burnin) continue;
    slot[it] = iters.size();
    iters.push_back(it);
    alphas.push_back(to_double(trace.rows[r][a_col], r + 2));
  }
  if (alphas.empty()) throw ParseError("no samples remain after burn-in " + std::to_string(burnin));

  constexpr std::size_t dim = std::is_same_v<G, Hyperbolic> ? 2 : 3;
  std::vector<std::size_t> cols{latent.column("iter"), latent.column("node"), latent.column("c1"),
                                latent.column("c2")};
  if constexpr (dim == 3) cols.push_back(latent.column("c3"));
  std::vector<std::vector<typename G::Point>> zs(alphas.size(), std::vector<typename G::Point>(y.size()));
  std::vector<std::size_t> filled(alphas.size(), 0);
  for (std::size_t r = 0; r < latent.rows.size(); ++r) {
    const auto& row = latent.rows[r];
    const auto it = static_cast<std::size_t>(to_double(row[cols[0]], r + 2));
    const auto found = slot.find(it);
    if (found == slot.end()) continue;
    const auto node = static_cast<std::size_t>(to_double(row[cols[1]], r + 2));
    if (node < 1 || node > y.size()) throw ParseError("latent.csv: node id out of range", r + 2);
    std::vector<double> c;
    for (std::size_t d = 0; d < dim; ++d) c.push_back(to_double(row[cols[2 + d]], r + 2));
    zs[found->second][node - 1] = point_from<G>(c);
    ++filled[found->second];
  }
  for (std::size_t k = 0; k < filled.size(); ++k)
    if (filled[k] != y.size())
      throw ParseError("latent.csv: iteration " + std::to_string(iters[k]) + " has " + std::to_string(filled[k]) +
                       " nodes, expected " + std::to_string(y.size()));
  return posterior_predictive_probs<G>(y, alphas, zs);
}

template <class G>
std::vector<PredictiveRecord> predict_bbvi(const Network& y, const json& state, std::size_t draws,
                                           std::uint64_t seed) {
  VariationalState<G> q;
  q.m_tilde = state.at("m_tilde").get<double>();
  q.log_sigma_tilde = state.at("log_sigma_tilde").get<double>();
  q.anchors = anchors_from(state.at("anchors"));
  q.theta = theta_from<G>(state.at("theta"));
  q.nodes = state.at("node_params").get<std::vector<NodeParams>>();
  if (q.nodes.size() != y.size()) throw ParseError("state.json: node count does not match the edge list");
  Rng rng = derive_rng(seed, 2);
  return posterior_predictive_probs<G>(y, q, draws, rng);
}

void predict(const Options& o) {
  const fs::path dir(o.out);
  const json manifest = read_json(dir / "manifest.json");
  const json state = read_json(dir / "state.json");
  RunConfig rc = config_from_manifest(manifest);
  if (o.burnin) rc.burnin = *o.burnin;
  if (o.samples) rc.predictive_draws = *o.samples;
  if (o.seed) rc.mcmc.seed = rc.bbvi.seed = *o.seed;
  if (rc.predictive_draws == 0) throw ConfigError("--samples must be at least 1");

  const std::string edges = o.edges.empty() ? manifest.at("input").at("path").get<std::string>() : o.edges;
  const auto nodes = manifest.at("input").at("nodes").get<std::size_t>();
  const Network y = read_edge_list_file(edges, nodes);
  const std::string expected = manifest.at("input").at("sha256").get<std::string>();
  if (sha256_hex(canonical_edge_list(y)) != expected)
    throw ParseError("'" + edges + "' does not match the input recorded in the manifest");

  const std::string method = state.at("method").get<std::string>();
  const auto records = with_geometry(parse_geometry(manifest.at("geometry").get<std::string>()), [&]<class G>() {
    if (method == "mcmc") return predict_mcmc<G>(y, dir, rc.burnin);
    if (method == "bbvi") return predict_bbvi<G>(y, state, rc.predictive_draws, rc.bbvi.seed);
    throw ParseError("state.json: unknown method '" + method + "'");
  });

  {
    auto f = open_output(dir / "predictive.csv");
    f << "i,j,y,mean_p\n";
    for (const auto& r : records) f << r.i + 1 << ',' << r.j + 1 << ',' << (r.y ? 1 : 0) << ',' << format_double(r.mean_p) << '\n';
  }
  const auto stats = separation_stats(records);
  json summary = {{"method", method},
                  {"burnin", rc.burnin},
                  {"mean_p_link", stats.mean_p_link},
                  {"mean_p_nonlink", stats.mean_p_nonlink},
                  {"separation", stats.mean_p_link - stats.mean_p_nonlink},
                  {"auc", stats.auc},
                  {"links", stats.links},
                  {"nonlinks", stats.nonlinks}};
  if (method == "bbvi") summary["draws"] = rc.predictive_draws;
  write_json(dir / "predictive.json", summary);
  std::fprintf(stderr, "predict: separation %.4f, AUC %.4f -> %s\n", stats.mean_p_link - stats.mean_p_nonlink,
               stats.auc, (dir / "predictive.csv").string().c_str());
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--geometry", o.geometry, "Latent geometry")->check(CLI::IsMember({"hyperbolic", "spherical"}));
  cmd->add_option("--config", o.config, "key=value run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory")->required();
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--nodes", o.nodes, "Node count (covers isolated nodes)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent space network models with hyperbolic or spherical latent geometry"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Sample a network from the generative model");
  add_common(gen, o);

  auto* fit_cmd = app.add_subcommand("fit", "Fit the model to an edge list");
  fit_cmd->require_subcommand(1);
  auto* fit_mcmc_cmd = fit_cmd->add_subcommand("mcmc", "Metropolis-within-Gibbs sampler");
  auto* fit_bbvi_cmd = fit_cmd->add_subcommand("bbvi", "Black-box variational inference");
  for (auto* cmd : {fit_mcmc_cmd, fit_bbvi_cmd}) {
    add_common(cmd, o);
    cmd->add_option("--edges", o.edges, "Edge list")->required()->check(CLI::ExistingFile);
    cmd->add_option("--iterations", o.iterations, "Sweeps (mcmc) or optimizer steps (bbvi)");
    cmd->add_option("--burnin", o.burnin, "Sweeps excluded from the summaries");
    cmd->add_option("--chains", o.chains, "Independent runs with seeds seed..seed+K-1")->check(CLI::PositiveNumber);
  }
  fit_mcmc_cmd->add_option("--thin", o.thin, "Keep every k-th sweep");
  fit_bbvi_cmd->add_option("--samples", o.samples, "Monte Carlo samples per gradient step");

  auto* pred = app.add_subcommand("predict", "Posterior-predictive link probabilities for a fitted run");
  pred->add_option("--out", o.out, "Run directory written by fit")->required();
  pred->add_option("--edges", o.edges, "Edge list (default: the path in the manifest)");
  pred->add_option("--burnin", o.burnin, "Sweeps to drop (mcmc)");
  pred->add_option("--samples", o.samples, "Draws from q (bbvi)");
  pred->add_option("--seed", o.seed, "Seed for the draws from q");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      if (!o.edges.empty()) throw ConfigError("generate does not read an edge list");
      const RunConfig rc = load_config(o, RunKind::generate);
      with_geometry(*rc.geometry, [&]<class G>() { generate<G>(rc, o.out); });
    } else if (*fit_mcmc_cmd) {
      fit(RunKind::mcmc, o);
    } else if (*fit_bbvi_cmd) {
      fit(RunKind::bbvi, o);
    } else if (*pred) {
      predict(o);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kData;
  } catch (const DegenerateAnchors& e) {
    std::cerr << "degenerate anchors: " << e.what() << '\n';
    return kData;
  } catch (const TooFewNodes& e) {
    std::cerr << "too few nodes: " << e.what() << '\n';
    return kData;
  } catch (const SingleClass& e) {
    std::cerr << "single class: " << e.what() << '\n';
    return kData;
  } catch (const SamplerError& e) {
    std::cerr << "sampler failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DivergedOptimization& e) {
    std::cerr << "optimization diverged: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    std::cerr << "numerical domain error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
