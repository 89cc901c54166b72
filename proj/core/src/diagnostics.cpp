#include "tiltlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tiltlab/errors.hpp"
#include "tiltlab/rng.hpp"

namespace tiltlab {

namespace {

double ks_sorted(const std::vector<double>& x, const std::vector<double>& w, const std::function<double(double)>& cdf) {
  double cum = 0.0, best = 0.0;
  std::size_t i = 0;
  const std::size_t n = x.size();
  while (i < n) {
    const double at = x[i];
    const double before = cum;
    while (i < n && x[i] == at) cum += w[i++];
    const double f = cdf(at);
    if (std::isnan(f)) throw InvalidArgument("ks_1d: CDF returned NaN");
    best = std::max({best, std::abs(before - f), std::abs(std::min(cum, 1.0) - f)});
  }
  return std::min(best, 1.0);
}

}  // namespace

double ks_1d(const WeightedEmpirical& we, const std::function<double(double)>& cdf) {
  if (we.dim() != 1) throw InvalidArgument("ks_1d: one-dimensional weighted empirical required");
  const auto vals = we.points().values();
  std::vector<std::size_t> idx(vals.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  std::vector<double> x(idx.size()), w(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    x[k] = vals[idx[k]];
    w[k] = we.weights()[idx[k]];
    if (std::isnan(x[k]) || std::isnan(w[k])) throw InvalidArgument("ks_1d: NaN in atoms or weights");
  }
  return ks_sorted(x, w, cdf);
}

double ks_1d(std::span<const double> draws, const std::function<double(double)>& cdf) {
  if (draws.empty()) throw InvalidArgument("ks_1d: no draws");
  std::vector<double> x(draws.begin(), draws.end());
  for (double v : x)
    if (std::isnan(v)) throw InvalidArgument("ks_1d: NaN draw");
  std::sort(x.begin(), x.end());
  const std::vector<double> w(x.size(), 1.0 / static_cast<double>(x.size()));
  return ks_sorted(x, w, cdf);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample: both samples must be nonempty");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

RectKsResult ks_rect_hd(const WeightedEmpirical& we, const std::function<double(std::span<const double>)>& cdf_hd,
                        std::span<const double> box_lo, std::span<const double> box_hi, std::size_t grid_k) {
  const std::size_t d = we.dim();
  if (d < 2) throw InvalidArgument("ks_rect_hd: dimension must be at least 2");
  if (box_lo.size() != d || box_hi.size() != d) throw InvalidArgument("ks_rect_hd: box dimension mismatch");
  if (grid_k < 1) throw InvalidArgument("ks_rect_hd: grid_k must be at least 1");
  const double corners = std::pow(static_cast<double>(grid_k), static_cast<double>(d));
  if (corners > 1e7) throw InvalidArgument("ks_rect_hd: grid exceeds the 1e7 evaluation budget");
  for (std::size_t j = 0; j < d; ++j)
    if (!(box_hi[j] > box_lo[j])) throw InvalidArgument("ks_rect_hd: empty box");
  const auto total = static_cast<std::size_t>(corners);
  auto coord = [&](std::size_t j, std::size_t i) {
    return box_lo[j] + (box_hi[j] - box_lo[j]) * static_cast<double>(i + 1) / static_cast<double>(grid_k);
  };
  // Each point contributes to every corner that dominates it; bucket points
  // by their first dominating grid cell per axis, then take prefix sums.
  std::vector<double> mass(total, 0.0);
  for (std::size_t p = 0; p < we.size(); ++p) {
    const auto x = we.points()[p];
    std::size_t flat = 0;
    bool inside = true;
    for (std::size_t j = 0; j < d; ++j) {
      const double t = (x[j] - box_lo[j]) / (box_hi[j] - box_lo[j]) * static_cast<double>(grid_k);
      // smallest i with coord(j, i) >= x_j
      double fi = std::ceil(t) - 1.0;
      if (fi < 0.0) fi = 0.0;
      auto i = static_cast<std::size_t>(std::min(fi, static_cast<double>(grid_k)));
      while (i > 0 && coord(j, i - 1) >= x[j]) --i;
      while (i < grid_k && coord(j, i) < x[j]) ++i;
      if (i >= grid_k) {
        inside = false;
        break;
      }
      flat = flat * grid_k + i;
    }
    if (inside) mass[flat] += we.weights()[p];
  }
  // Prefix sums along each axis turn cell masses into orthant masses.
  std::size_t stride = 1;
  for (std::size_t j = d; j-- > 0;) {
    for (std::size_t f = 0; f < total; ++f)
      if ((f / stride) % grid_k != 0) mass[f] += mass[f - stride];
    stride *= grid_k;
  }
  RectKsResult out;
  out.grid_k = grid_k;
  out.evaluations = total;
  std::vector<double> best_per(total, 0.0);
  parallel_for(grid_k, [&](std::size_t slab) {
    std::vector<double> x(d);
    const std::size_t per = total / grid_k;
    for (std::size_t f = slab * per; f < (slab + 1) * per; ++f) {
      std::size_t rem = f;
      for (std::size_t j = d; j-- > 0;) {
        x[j] = coord(j, rem % grid_k);
        rem /= grid_k;
      }
      best_per[f] = std::abs(mass[f] - cdf_hd(x));
    }
  });
  const auto it = std::max_element(best_per.begin(), best_per.end());
  out.statistic = *it;
  std::size_t rem = static_cast<std::size_t>(it - best_per.begin());
  out.argmax.assign(d, 0.0);
  for (std::size_t j = d; j-- > 0;) {
    out.argmax[j] = coord(j, rem % grid_k);
    rem /= grid_k;
  }
  return out;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Accurate:
      return "accurate";
    case Regime::Critical:
      return "critical";
    case Regime::Undersampled:
      return "undersampled";
  }
  return "";
}

RegimeReport regime_classify(const std::vector<std::pair<double, double>>& m_schedule,
                             const RegimeThresholds& thresholds) {
  if (m_schedule.size() < 3) throw InvalidArgument("regime_classify: need at least three schedule rows");
  RegimeReport rep;
  for (std::size_t i = 0; i < m_schedule.size(); ++i) {
    const auto [n, m] = m_schedule[i];
    if (!(n > 0.0) || !(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("regime_classify: n and M must be positive");
    if (i > 0 && !(n > m_schedule[i - 1].first)) throw InvalidArgument("regime_classify: n must be strictly increasing");
    rep.evidence.push_back({n, m, m / n});
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(rep.evidence.size());
  for (const auto& e : rep.evidence) {
    const double x = std::log(e.n), y = std::log(e.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const auto& last = rep.evidence.back();
  rep.n = last.n;
  rep.m_theta = last.m_theta;
  rep.ratio = last.ratio;
  if (rep.ratio < thresholds.accurate_final_ratio && rep.slope < 0.0)
    rep.regime = Regime::Accurate;
  else if (std::abs(rep.slope) < thresholds.critical_abs_slope)
    rep.regime = Regime::Critical;
  else
    rep.regime = Regime::Undersampled;
  rep.admissible_rate_exponent = std::max(0.0, std::min(0.5, -rep.slope / 2.0));
  return rep;
}

}  // namespace tiltlab
