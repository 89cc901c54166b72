#include "tiltlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "tiltlab/errors.hpp"

namespace tiltlab::numerics {

namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

double gamma_series(double a, double x) {
  // P(a, x) = x^a e^-x / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k))
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_continued_fraction(double a, double x) {
  // Q(a, x) by modified Lentz on the Legendre continued fraction.
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Kronrod 15-point nodes/weights with embedded Gauss 7-point weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  resk *= half;
  resg *= half;
  return {a, b, resk, std::abs(resk - resg)};
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InvalidArgument("gamma_p: shape must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw InvalidArgument("gamma_q: shape must be positive");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double beta_inc(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("beta_inc: parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("normal_quantile: p must lie in (0,1)");
  // Acklam's rational approximation, then two Newton steps on erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  double x;
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - 0.02425) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double err = normal_cdf(x) - p;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (pdf <= 0.0) break;
    const double u = err / pdf;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(values.begin(), values.end());
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

double poisson_pmf(long k, double mean) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0));
}

double chi_square_sf(double x, double dof) { return gamma_q(0.5 * dof, 0.5 * x); }

double kronrod15(const std::function<double(double)>& f, double a, double b) { return gk15(f, a, b).value; }

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     double abs_tol, std::size_t max_intervals) {
  QuadResult out;
  if (a == b) return out;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  heap.push(first);
  double total = first.value;
  double err = first.error;
  out.evaluations = 15;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (heap.size() >= max_intervals) {
      out.converged = false;
      break;
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in floating point.
      heap.push(worst);
      out.converged = false;
      break;
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated rounding from the running updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sign * total;
  out.error = err;
  return out;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double x_tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NumericalFailure("find_root: no sign change on bracket");
  for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
    // Secant proposal, falling back to bisection if it leaves the middle
    // 90% of the bracket.
    double x = lo - flo * (hi - lo) / (fhi - flo);
    const double margin = 0.05 * (hi - lo);
    if (!(x > lo + margin && x < hi - margin) || it % 3 == 2) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  return 0.5 * (lo + hi);
}


ExpIntegralTable::ExpIntegralTable(std::function<double(double)> ell, double a, double b, double rel_tol)
    : ell_(std::move(ell)), a_(a), b_(b), rel_tol_(rel_tol) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b)) throw InvalidArgument("ExpIntegralTable: need finite a < b");
  const double w = b - a;
  std::vector<double> pts{a, b};
  for (int k = 1; k <= 52; ++k) {
    pts.push_back(a + w * std::ldexp(1.0, -k));
    pts.push_back(b - w * std::ldexp(1.0, -k));
  }
  for (int k = 1; k < 1024; ++k) pts.push_back(a + w * k / 1024.0);
  // Locate the peak on the candidate set plus a uniform scan.
  double best_x = a, best = -std::numeric_limits<double>::infinity();
  auto probe = [&](double x) {
    if (x <= a || x >= b) return;
    const double v = ell_(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  };
  for (double x : pts) probe(x);
  for (int k = 1; k < 1024; ++k) probe(a + w * k / 1024.0);
  if (!std::isfinite(best)) {
    if (best > 0) throw NumericalFailure("ExpIntegralTable: integrand exponent is +inf");
    shift_ = 0.0;
    log_total_ = -std::numeric_limits<double>::infinity();
    breaks_ = {a, b};
    cumulative_ = {0.0, 0.0};
    return;
  }
  shift_ = best;
  for (int k = 1; k <= 52; ++k) {
    const double h = w * std::ldexp(1.0, -k);
    if (best_x - h > a) pts.push_back(best_x - h);
    if (best_x + h < b) pts.push_back(best_x + h);
  }
  pts.push_back(best_x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  breaks_ = std::move(pts);
  cumulative_.assign(breaks_.size(), 0.0);
  const auto f = [this](double x) { return std::exp(ell_(x) - shift_); };
  for (std::size_t j = 1; j < breaks_.size(); ++j) {
    const auto r = integrate(f, breaks_[j - 1], breaks_[j], rel_tol_, 0.0, 400);
    cumulative_[j] = cumulative_[j - 1] + r.value;
  }
  const double total = cumulative_.back();
  log_total_ = total > 0.0 ? shift_ + std::log(total) : -std::numeric_limits<double>::infinity();
}

double ExpIntegralTable::fraction_below(double x) const {
  if (x <= a_) return 0.0;
  if (x >= b_) return 1.0;
  const double total = cumulative_.back();
  if (!(total > 0.0)) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  double part = cumulative_[j];
  if (x > breaks_[j]) {
    const auto f = [this](double t) { return std::exp(ell_(t) - shift_); };
    part += integrate(f, breaks_[j], x, rel_tol_, 0.0, 400).value;
  }
  return std::clamp(part / total, 0.0, 1.0);
}

double log_integrate_exp(const std::function<double(double)>& ell, double a, double b, double rel_tol) {
  return ExpIntegralTable(ell, a, b, rel_tol).log_total();
}

}  // namespace tiltlab::numerics
