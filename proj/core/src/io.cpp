#include "tiltlab/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tiltlab/errors.hpp"

namespace tiltlab::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

bool try_parse(const std::string& f, double& v) {
  if (f.empty()) return false;
  const char* first = f.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), v);
  return ec == std::errc() && ptr == f.data() + f.size();
}

// Rows of numbers; skips blank lines; first non-numeric row is a header.
std::vector<std::vector<double>> read_numeric_rows(std::istream& in, std::size_t expected_cols) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> vals(fields.size());
    bool ok = true;
    for (std::size_t i = 0; i < fields.size() && ok; ++i) ok = try_parse(fields[i], vals[i]);
    if (!ok) {
      if (first_content) {
        first_content = false;
        if (expected_cols == 0) expected_cols = fields.size();
        continue;
      }
      throw IngestError("unparseable number", lineno);
    }
    first_content = false;
    if (expected_cols == 0) expected_cols = vals.size();
    if (vals.size() != expected_cols)
      throw IngestError("expected " + std::to_string(expected_cols) + " columns, found " + std::to_string(vals.size()),
                        lineno);
    for (double v : vals)
      if (!std::isfinite(v)) throw IngestError("non-finite value", lineno);
    rows.push_back(std::move(vals));
  }
  return rows;
}

double num(const json& params, const char* key) {
  if (!params.contains(key) || !params[key].is_number())
    throw InvalidArgument(std::string("model params: missing numeric field '") + key + "'");
  return params[key].get<double>();
}

ScalarModel scalar_from_json(const json& j) {
  const auto m = model_from_json(j);
  if (!m.is_scalar()) throw InvalidArgument("ProductVec components must be one-dimensional");
  return m.scalar();
}

json scalar_to_json(const ScalarModel& m) {
  return std::visit(
      [&](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        json p = json::object();
        if constexpr (std::is_same_v<T, family::Beta>) p = {{"a", f.a}, {"b", f.b}};
        if constexpr (std::is_same_v<T, family::TruncNormal>) p = {{"mu", f.mu}, {"sigma", f.sigma}, {"M", f.upper}};
        if constexpr (std::is_same_v<T, family::TruncExp>) p = {{"lambda", f.lambda}, {"M", f.upper}};
        if constexpr (std::is_same_v<T, family::Exponential>) p = {{"lambda", f.lambda}};
        if constexpr (std::is_same_v<T, family::DiscreteUniform>) p = {{"values", f.values}};
        if constexpr (std::is_same_v<T, family::GenNormal>) p = {{"alpha", f.alpha}, {"K", f.K}};
        return {{"family", m.name()}, {"params", p}};
      },
      m.variant());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericalFailure("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& field) {
  double v;
  if (!try_parse(field, v)) throw InvalidArgument("not a number: '" + field + "'");
  return v;
}

DistributionModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw InvalidArgument("model spec must be an object with a string 'family'");
  const std::string fam = j["family"].get<std::string>();
  const json p = j.value("params", json::object());
  if (fam == "Uniform01") return ScalarModel::uniform01();
  if (fam == "Beta") return ScalarModel::beta(num(p, "a"), num(p, "b"));
  if (fam == "TruncNormal") return ScalarModel::trunc_normal(num(p, "mu"), num(p, "sigma"), num(p, "M"));
  if (fam == "TruncExp") return ScalarModel::trunc_exp(num(p, "lambda"), num(p, "M"));
  if (fam == "Exponential") return ScalarModel::exponential(num(p, "lambda"));
  if (fam == "DiscreteUniform") {
    if (!p.contains("values") || !p["values"].is_array()) throw InvalidArgument("DiscreteUniform needs 'values'");
    return ScalarModel::discrete_uniform(p["values"].get<std::vector<double>>());
  }
  if (fam == "SquaredUniform") return ScalarModel::squared_uniform();
  if (fam == "GenNormal") return ScalarModel::gen_normal(num(p, "alpha"), num(p, "K"));
  if (fam == "StdNormalVec") {
    const double d = num(p, "d");
    if (!(d >= 1.0) || d != std::floor(d)) throw InvalidArgument("StdNormalVec: 'd' must be a positive integer");
    return DistributionModel::std_normal_vec(static_cast<std::size_t>(d));
  }
  if (fam == "ProductVec") {
    if (!p.contains("components") || !p["components"].is_array())
      throw InvalidArgument("ProductVec needs a 'components' array");
    std::vector<ScalarModel> parts;
    for (const auto& c : p["components"]) parts.push_back(scalar_from_json(c));
    return DistributionModel::product(std::move(parts));
  }
  if (fam == "TwoDExample") return DistributionModel::two_d_example();
  throw InvalidArgument("unknown model family '" + fam + "'");
}

json model_to_json(const DistributionModel& model) {
  return std::visit(
      [&](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ScalarModel>) {
          return scalar_to_json(f);
        } else if constexpr (std::is_same_v<T, family::StdNormalVec>) {
          return {{"family", "StdNormalVec"}, {"params", {{"d", f.d}}}};
        } else if constexpr (std::is_same_v<T, family::ProductVec>) {
          json comps = json::array();
          for (const auto& c : f.components) comps.push_back(scalar_to_json(c));
          return {{"family", "ProductVec"}, {"params", {{"components", comps}}}};
        } else {
          return {{"family", "TwoDExample"}, {"params", json::object()}};
        }
      },
      model.variant());
}

SampleSet read_samples_csv(std::istream& in, std::size_t expected_dim) {
  const auto rows = read_numeric_rows(in, expected_dim);
  if (rows.empty()) throw IngestError("no data rows", 0);
  SampleSet s(rows.front().size());
  s.reserve(rows.size());
  for (const auto& r : rows) s.push_back(r);
  return s;
}

SampleSet read_samples_csv_file(const std::string& path, std::size_t expected_dim) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open '" + path + "'");
  return read_samples_csv(f, expected_dim);
}

void write_samples_csv(std::ostream& out, const SampleSet& s, const std::vector<std::string>& header) {
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s[i];
    for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << format_double(p[j]);
    out << '\n';
  }
}

void write_weighted_csv(std::ostream& out, const WeightedEmpirical& we) {
  for (std::size_t j = 0; j < we.dim(); ++j) out << 'x' << (j + 1) << ',';
  out << "weight\n";
  for (std::size_t i = 0; i < we.size(); ++i) {
    for (double v : we.points()[i]) out << format_double(v) << ',';
    out << format_double(we.weights()[i]) << '\n';
  }
}

WeightedEmpirical read_weighted_csv(std::istream& in, double log_normalizer) {
  const auto rows = read_numeric_rows(in, 0);
  if (rows.empty()) throw IngestError("no data rows", 0);
  const std::size_t cols = rows.front().size();
  if (cols < 2) throw IngestError("need at least one point column and a weight column", 1);
  SampleSet pts(cols - 1);
  std::vector<double> w;
  for (const auto& r : rows) {
    pts.push_back(std::span(r.data(), cols - 1));
    w.push_back(r.back());
  }
  return WeightedEmpirical(std::move(pts), std::move(w), log_normalizer);
}

json weighted_to_json(const WeightedEmpirical& we) {
  json pts = json::array();
  for (std::size_t i = 0; i < we.size(); ++i) {
    const auto p = we.points()[i];
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"dim", we.dim()}, {"log_normalizer", we.log_normalizer()}, {"points", pts}, {"weights", we.weights()}};
}

WeightedEmpirical weighted_from_json(const json& j) {
  const auto d = j.at("dim").get<std::size_t>();
  SampleSet pts(d);
  for (const auto& p : j.at("points")) pts.push_back(p.get<std::vector<double>>());
  return WeightedEmpirical(std::move(pts), j.at("weights").get<std::vector<double>>(),
                           j.at("log_normalizer").get<double>());
}

json to_json(const AsymptoteCheck& c) {
  json rows = json::array();
  for (const auto& r : c.rows())
    rows.push_back({{"theta", r.theta}, {"ratio", r.ratio}, {"target", r.target}, {"abs_error", r.abs_error}});
  return {{"rows", rows}, {"limit_value", c.limit_value}, {"converged", c.converged}};
}

json to_json(const MvrvModel& m) {
  return {{"base", model_to_json(m.base())}, {"theta", m.theta()},   {"x_theta", m.x_theta()},
          {"point", m.point()},               {"exponents", m.exponents()}, {"rho", m.rho()},
          {"kappa", m.kappa()},               {"scale", m.scale()},   {"alpha", m.alpha()}};
}

json to_json(const LaplaceGeometry& g) {
  const std::vector<double> m(g.m_c.data(), g.m_c.data() + g.m_c.size());
  return {{"c", g.c}, {"m_c", m}, {"phi_max", g.phi_max}, {"det", g.det_neg_hessian}};
}

json to_json(const RegimeReport& r) {
  json ev = json::array();
  for (const auto& e : r.evidence) ev.push_back({{"n", e.n}, {"m_theta", e.m_theta}, {"ratio", e.ratio}});
  return {{"m_theta", r.m_theta},
          {"n", r.n},
          {"ratio", r.ratio},
          {"slope", r.slope},
          {"regime", to_string(r.regime)},
          {"admissible_rate_exponent", r.admissible_rate_exponent},
          {"evidence", ev}};
}

json to_json(const BandReport& r) {
  json rows = json::array();
  for (const auto& b : r.rows)
    rows.push_back({{"u", b.u}, {"bound", b.bound}, {"empirical", b.empirical}, {"pass", b.pass}});
  return {{"mean", r.mean}, {"m_theta", r.m_theta}, {"rows", rows}, {"pass", r.pass}};
}

std::vector<std::pair<double, double>> read_pairs_csv(std::istream& in) {
  const auto rows = read_numeric_rows(in, 2);
  std::vector<std::pair<double, double>> out;
  for (const auto& r : rows) out.emplace_back(r[0], r[1]);
  return out;
}

}  // namespace tiltlab::io
