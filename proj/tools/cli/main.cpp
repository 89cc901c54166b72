#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "harness/harness.hpp"
#include "tiltlab/tiltlab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tiltlab;

namespace {

struct Options {
  std::string model;
  std::string input;
  std::string theta;
  std::string g = "identity";
  std::size_t n = 10000;
  std::size_t m = 1000;
  std::uint64_t seed = harness::kDefaultSeed;
  std::string out = "out";
  std::string suite = "all";
  std::string figure = "all";
  std::string config;
  double alpha = 1.0;
  double T = 3.0;
  double c1 = 0.0;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(io::parse_double(tok));
  return v;
}

json load_json_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return json::parse(arg);
  std::ifstream f(arg);
  if (!f) throw IngestError("cannot open '" + arg + "'");
  return json::parse(f);
}

// Config values fill in options the command line left unset.
void apply_config(const CLI::App& app, Options& o) {
  if (o.config.empty()) return;
  const json c = load_json_arg(o.config);
  auto take = [&](const char* key, auto& field) {
    const auto* opt = app.get_option_no_throw(std::string("--") + key);
    if (c.contains(key) && (opt == nullptr || opt->count() == 0)) {
      const auto& v = c.at(key);
      using F = std::decay_t<decltype(field)>;
      if constexpr (std::is_same_v<F, std::string>) field = v.is_string() ? v.get<std::string>() : v.dump();
      else field = v.get<F>();
    }
  };
  take("model", o.model);
  take("input", o.input);
  take("g", o.g);
  take("n", o.n);
  take("m", o.m);
  take("seed", o.seed);
  take("out", o.out);
  take("suite", o.suite);
  take("figure", o.figure);
  take("alpha", o.alpha);
  take("T", o.T);
  take("c1", o.c1);
  const auto* theta_opt = app.get_option_no_throw("--theta");
  if (c.contains("theta") && (theta_opt == nullptr || theta_opt->count() == 0)) {
    const auto& t = c.at("theta");
    if (t.is_array()) {
      std::string s;
      for (const auto& x : t) s += (s.empty() ? "" : ",") + io::format_double(x.get<double>());
      o.theta = s;
    } else {
      o.theta = io::format_double(t.get<double>());
    }
  }
}

TiltSpec make_tilt(const Options& o, std::size_t dim) {
  const auto theta = parse_list(o.theta);
  if (theta.size() != dim)
    throw InvalidArgument("theta has " + std::to_string(theta.size()) + " entries but the data has dimension " +
                          std::to_string(dim));
  if (o.g == "identity") return TiltSpec::identity(theta);
  if (o.g.rfind("power:", 0) == 0) return TiltSpec::power(theta, parse_list(o.g.substr(6)));
  throw InvalidArgument("unknown --g '" + o.g + "' (identity or power:a1,...,ad)");
}

std::optional<DistributionModel> maybe_model(const Options& o) {
  if (o.model.empty()) return std::nullopt;
  return io::model_from_json(load_json_arg(o.model));
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p, std::ios::binary);
  f << j.dump(2) << '\n';
}

int cmd_tilt(const Options& o) {
  const auto model = maybe_model(o);
  if (!model && o.input.empty()) throw InvalidArgument("tilt needs --model or --input");
  const SampleSet samples = o.input.empty() ? model->sample(o.n, derive_seed(o.seed, 0))
                                            : io::read_samples_csv_file(o.input, model ? model->dim() : 0);
  const auto tilt = make_tilt(o, samples.dim());
  const auto we = snis_weights(samples, tilt);
  const auto draws = resample(we, o.m, derive_seed(o.seed, 1));
  fs::create_directories(o.out);
  {
    std::ofstream f(fs::path(o.out) / "draws.csv", std::ios::binary);
    io::write_samples_csv(f, draws);
  }
  {
    std::ofstream f(fs::path(o.out) / "weights.csv", std::ios::binary);
    io::write_weighted_csv(f, we);
  }
  const double mh = m_theta_empirical(samples, tilt);
  const double n = static_cast<double>(samples.size());
  json d = {{"n", samples.size()},
            {"dim", samples.dim()},
            {"m", o.m},
            {"seed", o.seed},
            {"m_theta_empirical", mh},
            {"ess", n / mh},
            {"max_weight", max_weight_stat(we)}};
  if (model) {
    d["model"] = io::model_to_json(*model);
    try {
      d["m_theta_analytic"] = m_theta_analytic(*model, tilt);
    } catch (const DivergentMoment& e) {
      d["m_theta_analytic"] = nullptr;
      d["m_theta_analytic_error"] = e.what();
    }
    if (model->is_scalar()) {
      const TiltedCdf F(model->scalar(), tilt);
      d["ks_vs_tilted"] = ks_1d(we, [&](double x) { return F(x); });
      harness::write_histogram_csv(fs::path(o.out) / "histogram.csv",
                                   harness::tilted_histogram(we, model->scalar(), tilt));
    }
  }
  write_json(fs::path(o.out) / "diagnostics.json", d);
  std::cout << d.dump(2) << '\n';
  return 0;
}

// Schedule CSV is (n, M) pairs, or (n, theta) pairs when --model is given.
int cmd_diagnose(const Options& o) {
  if (o.input.empty()) throw InvalidArgument("diagnose needs --input with (n, M) or (n, theta) rows");
  std::ifstream f(o.input);
  if (!f) throw IngestError("cannot open '" + o.input + "'");
  auto rows = io::read_pairs_csv(f);
  if (const auto model = maybe_model(o)) {
    for (auto& [n, v] : rows) v = m_theta_analytic(*model, TiltSpec::scalar(v));
  }
  const auto report = regime_classify(rows);
  const json j = io::to_json(report);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_figures(const Options& o) {
  std::vector<std::string> ids;
  if (o.figure == "all") ids = harness::figure_ids();
  else ids = {o.figure};
  bool ok = true;
  json all = json::array();
  for (const auto& id : ids) {
    const auto fr = harness::run_figure(id, o.seed, o.out);
    ok = ok && fr.pass;
    all.push_back(fr.summary);
  }
  std::cout << all.dump(2) << '\n';
  return ok ? 0 : 1;
}

int cmd_verify(const Options& o) {
  std::vector<std::string> ids;
  if (o.suite == "all") ids = harness::suite_ids();
  else if (harness::is_suite(o.suite)) ids = {o.suite};
  else throw CLI::ValidationError("--suite", "unknown suite '" + o.suite + "'");
  bool ok = true;
  json report = json::array();
  for (const auto& id : ids) {
    const auto r = harness::run_suite(id, o.seed);
    ok = ok && r.pass;
    report.push_back({{"criterion", r.id},
                      {"suite", r.suite},
                      {"pass", r.pass},
                      {"detail", r.detail},
                      {"seconds", r.seconds},
                      {"budget_seconds", r.budget_seconds},
                      {"metrics", r.metrics}});
  }
  std::cout << json{{"seed", o.seed}, {"pass", ok}, {"criteria", report}}.dump(2) << '\n';
  return ok ? 0 : 1;
}

// Atoms of one PRM draw, or Z_cPRM draws when --c1 is given.
int cmd_prm(const Options& o) {
  if (o.c1 > 0.0) {
    const PRMConfig cfg{o.alpha, o.T, o.c1, 1e-8};
    const auto z = sample_z_cprm(cfg, o.n, o.seed);
    fs::create_directories(o.out);
    std::ofstream f(fs::path(o.out) / "z_cprm.csv", std::ios::binary);
    io::write_samples_csv(f, SampleSet::scalar(z.draws), {"z"});
    std::cout << json{{"draws", z.draws.size()}, {"redraws", z.redraws}}.dump(2) << '\n';
    return 0;
  }
  const PRMConfig cfg{o.alpha, o.T, 1.0, 1e-8};
  const auto atoms = simulate_prm_1d(cfg, o.seed);
  std::cout << json{{"alpha", o.alpha}, {"T", o.T}, {"atoms", atoms}}.dump(2) << '\n';
  return 0;
}

int cmd_gauss_sup(const Options& o) {
  const auto model = maybe_model(o);
  if (!model || !model->is_scalar()) throw InvalidArgument("gauss-sup needs a 1-d --model");
  const auto tilt = make_tilt(o, 1);
  const GaussCovSpec spec{*model, tilt, {}};
  const auto sup = simulate_sup_gauss(spec, o.n, o.seed);
  const GaussCovKernel kern(*model, tilt);
  fs::create_directories(o.out);
  {
    std::ofstream f(fs::path(o.out) / "sup_gauss.csv", std::ios::binary);
    io::write_samples_csv(f, SampleSet::scalar(sup.draws), {"sup"});
  }
  json j = {{"reps", o.n}, {"grid_size", sup.grid.size()}, {"min_eigenvalue", sup.min_eigenvalue},
            {"m_theta", kern.m_theta()}};
  if (o.n >= 1000) j["band"] = io::to_json(borell_band_check(sup.draws, kern.m_theta()));
  write_json(fs::path(o.out) / "sup_gauss.json", j);
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential tilting and self-normalized importance sampling toolkit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file or inline object; flags win");
    sub->add_option("--seed", o.seed, "base seed");
    sub->add_option("--out", o.out, "output directory");
  };
  auto model_opts = [&](CLI::App* sub) {
    sub->add_option("--model", o.model, "model JSON (file path or inline object)");
    sub->add_option("--input", o.input, "input CSV");
    sub->add_option("--theta", o.theta, "tilt parameter, comma separated for d > 1");
    sub->add_option("--g", o.g, "statistic: identity or power:a1,...,ad");
    sub->add_option("--n", o.n, "sample size or replicate count");
    sub->add_option("--m", o.m, "resample size");
  };

  auto* tilt = app.add_subcommand("tilt", "reweight a sample and resample from it");
  common(tilt);
  model_opts(tilt);
  auto* diag = app.add_subcommand("diagnose", "classify a (n, M) schedule");
  common(diag);
  model_opts(diag);
  auto* figs = app.add_subcommand("figures", "write figure data files");
  common(figs);
  figs->add_option("--figure", o.figure, "exp1..exp6 or all")
      ->check(CLI::IsMember([] {
        auto v = harness::figure_ids();
        v.push_back("all");
        return v;
      }()));
  auto* verify = app.add_subcommand("verify", "run acceptance suites");
  common(verify);
  verify->add_option("--suite", o.suite, "suite id or all")->check(CLI::IsMember([] {
    auto v = harness::suite_ids();
    v.push_back("all");
    return v;
  }()));
  auto* prm = app.add_subcommand("prm", "simulate the Poisson random measure");
  common(prm);
  prm->add_option("--alpha", o.alpha, "tail index");
  prm->add_option("--T", o.T, "truncation radius");
  prm->add_option("--c1", o.c1, "critical constant; when set, sample Z_cPRM");
  prm->add_option("--n", o.n, "number of Z_cPRM draws");
  auto* gsup = app.add_subcommand("gauss-sup", "draw sup norms of the limiting Gaussian field");
  common(gsup);
  model_opts(gsup);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* sub : app.get_subcommands()) apply_config(*sub, o);
    if (tilt->parsed()) return cmd_tilt(o);
    if (diag->parsed()) return cmd_diagnose(o);
    if (figs->parsed()) return cmd_figures(o);
    if (verify->parsed()) return cmd_verify(o);
    if (prm->parsed()) return cmd_prm(o);
    if (gsup->parsed()) return cmd_gauss_sup(o);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
