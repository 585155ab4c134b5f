#pragma once

// Slow, direct implementations used as references by the tests. Nothing
// here shares code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

// Product-limit curve evaluated by brute force at t: product over event
// times s <= t of (1 - d(s) / r(s)).
inline double km_at(const std::vector<double>& time, const std::vector<int>& status, double t) {
  std::vector<double> ev;
  for (std::size_t i = 0; i < time.size(); ++i)
    if (status[i] == 1 && time[i] <= t) ev.push_back(time[i]);
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  double s = 1.0;
  for (double e : ev) {
    double d = 0, r = 0;
    for (std::size_t i = 0; i < time.size(); ++i) {
      if (time[i] >= e) r += 1;
      if (time[i] == e && status[i] == 1) d += 1;
    }
    s *= 1.0 - d / r;
  }
  return s;
}

// Integral of the step curve over [0, tau], summing rectangles between
// consecutive distinct times.
inline double rmst(const std::vector<double>& time, const std::vector<int>& status, double tau) {
  std::vector<double> knots{0.0};
  for (double t : time)
    if (t < tau) knots.push_back(t);
  knots.push_back(tau);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k)
    area += km_at(time, status, knots[k]) * (knots[k + 1] - knots[k]);
  return area;
}

struct Disc {
  double d1 = 0, d2 = 0;
};

// The stratified discrepancy evaluated term by term.
inline Disc discrepancy(const std::vector<double>& time, const std::vector<int>& status,
                        const std::vector<double>& x, std::size_t min_size) {
  const std::size_t n = time.size();
  Disc out;
  for (std::size_t i = 0; i < n; ++i) {
    for (int side = 0; side < 2; ++side) {
      std::vector<double> st;
      std::vector<int> ss;
      for (std::size_t k = 0; k < n; ++k) {
        const bool in = side == 0 ? x[k] >= x[i] : x[k] < x[i];
        if (in) {
          st.push_back(time[k]);
          ss.push_back(status[k]);
        }
      }
      double tau = -1;
      for (std::size_t k = 0; k < st.size(); ++k)
        if (ss[k] == 1) tau = std::max(tau, st[k]);
      if (st.size() < min_size || tau < 0) continue;
      const double term = std::abs(rmst(st, ss, tau) - rmst(time, status, tau));
      (side == 0 ? out.d1 : out.d2) += term;
    }
  }
  out.d1 /= static_cast<double>(n);
  out.d2 /= static_cast<double>(n);
  return out;
}

// Negative log partial likelihood with Breslow ties, O(n^2).
inline double neg_log_pl(const std::vector<double>& eta, const std::vector<double>& time,
                         const std::vector<int>& status) {
  double v = 0;
  for (std::size_t i = 0; i < time.size(); ++i) {
    if (status[i] != 1) continue;
    double s = 0;
    for (std::size_t k = 0; k < time.size(); ++k)
      if (time[k] >= time[i]) s += std::exp(eta[k]);
    v -= eta[i] - std::log(s);
  }
  return v;
}

// Unpenalized one-covariate Cox fit by Newton's method with O(n^2) sums.
inline double newton_cox_1d(const std::vector<double>& x, const std::vector<double>& time,
                            const std::vector<int>& status) {
  double b = 0;
  for (int it = 0; it < 200; ++it) {
    double g = 0, h = 0;
    for (std::size_t i = 0; i < time.size(); ++i) {
      if (status[i] != 1) continue;
      double s0 = 0, s1 = 0, s2 = 0;
      for (std::size_t k = 0; k < time.size(); ++k) {
        if (time[k] < time[i]) continue;
        const double w = std::exp(b * x[k]);
        s0 += w;
        s1 += w * x[k];
        s2 += w * x[k] * x[k];
      }
      g += x[i] - s1 / s0;
      h += s2 / s0 - (s1 / s0) * (s1 / s0);
    }
    const double step = g / h;
    b += step;
    if (std::abs(step) < 1e-14) break;
  }
  return b;
}

// Cox-de Boor recursion for basis function i of degree k on knots.
inline double cox_de_boor(const std::vector<double>& knots, int i, int k, double x) {
  if (k == 0) {
    const bool last = knots[i + 1] == knots.back() && x == knots.back() && knots[i] < knots[i + 1];
    return (knots[i] <= x && x < knots[i + 1]) || last ? 1.0 : 0.0;
  }
  double a = 0, b = 0;
  const double d1 = knots[i + k] - knots[i];
  const double d2 = knots[i + k + 1] - knots[i + 1];
  if (d1 > 0) a = (x - knots[i]) / d1 * cox_de_boor(knots, i, k - 1, x);
  if (d2 > 0) b = (knots[i + k + 1] - x) / d2 * cox_de_boor(knots, i + 1, k - 1, x);
  return a + b;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline double corr(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
