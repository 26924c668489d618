#include "pbc/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pbc/errors.hpp"

namespace pbc::classical {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// sum_i k_i log(x_i), with 0 * log 0 = 0.
double weighted_log(const std::vector<int>& k, const std::vector<double>& logs) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    if (logs[i] == kNegInf) return kNegInf;
    s += k[i] * logs[i];
  }
  return s;
}

struct LogSum {
  double max = kNegInf;
  double scaled = 0.0;
  void add(double l) {
    if (l == kNegInf) return;
    if (l > max) {
      scaled = scaled * std::exp(max - l) + 1.0;
      max = l;
    } else {
      scaled += std::exp(l - max);
    }
  }
  double log() const { return max == kNegInf ? kNegInf : max + std::log(scaled); }
};

struct Cell {
  double log_p;  // log p-mass of the cell
  double log_q;  // log q-mass of the cell
};

double np_over_cells(std::vector<Cell> cells, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("eps must lie in (0,1)");
  // Highest likelihood ratio first; cells with zero q come first, zero p last.
  auto ratio = [](const Cell& c) {
    if (c.log_p == kNegInf) return kNegInf;
    if (c.log_q == kNegInf) return std::numeric_limits<double>::infinity();
    return c.log_p - c.log_q;
  };
  std::stable_sort(cells.begin(), cells.end(), [&](const Cell& x, const Cell& y) { return ratio(x) > ratio(y); });
  const double target = 1.0 - eps;
  double mass = 0.0;
  LogSum beta;
  for (const Cell& c : cells) {
    if (c.log_p == kNegInf) break;
    const double pm = std::exp(c.log_p);
    if (mass + pm >= target) {
      const double t = (target - mass) / pm;
      if (t > 0.0) beta.add(c.log_q + std::log(t));
      return beta.log() / std::log(2.0);
    }
    mass += pm;
    beta.add(c.log_q);
  }
  throw PreconditionError("p carries less mass than 1 - eps");
}

}  // namespace

double log_multinomial(const std::vector<int>& counts) {
  int n = 0;
  double s = 0.0;
  for (int k : counts) {
    n += k;
    s -= std::lgamma(k + 1.0);
  }
  return s + std::lgamma(n + 1.0);
}

void for_each_type(int n, int d, const std::function<void(const std::vector<int>&)>& f) {
  if (d <= 0 || n < 0) throw PreconditionError("type enumeration needs n >= 0 and d >= 1");
  std::vector<int> k(d, 0);
  // Lexicographic walk over compositions with k[d-1] = remainder.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d - 1) {
      k[pos] = left;
      f(k);
      return;
    }
    for (int v = left; v >= 0; --v) {
      k[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, n);
}

long long type_count(int n, int d) {
  // C(n + d - 1, d - 1)
  long double c = 1.0;
  for (int i = 1; i < d; ++i) c = c * (n + i) / i;
  return static_cast<long long>(std::llround(c));
}

double log2_np_beta(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  if (p.size() != q.size()) throw PreconditionError("distributions of different length");
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < p.size(); ++i) cells.push_back({safe_log(p[i]), safe_log(q[i])});
  return np_over_cells(std::move(cells), eps);
}

double log2_np_beta_iid(const std::vector<double>& p, const std::vector<double>& q, int n, double eps) {
  if (p.size() != q.size()) throw PreconditionError("distributions of different length");
  std::vector<double> lp(p.size()), lq(q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    lp[i] = safe_log(p[i]);
    lq[i] = safe_log(q[i]);
  }
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(type_count(n, static_cast<int>(p.size()))));
  for_each_type(n, static_cast<int>(p.size()), [&](const std::vector<int>& k) {
    const double lc = log_multinomial(k);
    cells.push_back({lc + weighted_log(k, lp), lc + weighted_log(k, lq)});
  });
  return np_over_cells(std::move(cells), eps);
}

double log2_pe_star_iid(double k0, const std::vector<double>& a, const std::vector<double>& k,
                        const std::vector<std::vector<double>>& b, int n) {
  if (k.size() != b.size()) throw PreconditionError("weights and alternatives differ in length");
  const int d = static_cast<int>(a.size());
  std::vector<double> la(d);
  for (int x = 0; x < d; ++x) la[x] = safe_log(a[x]);
  std::vector<std::vector<double>> lb(b.size(), std::vector<double>(d));
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (static_cast<int>(b[i].size()) != d) throw PreconditionError("alternative of wrong length");
    for (int x = 0; x < d; ++x) lb[i][x] = safe_log(b[i][x]);
  }
  const double lk0 = safe_log(k0);
  LogSum total;
  for_each_type(n, d, [&](const std::vector<int>& t) {
    const double lc = log_multinomial(t);
    const double left = lk0 + weighted_log(t, la);
    LogSum right;
    for (std::size_t i = 0; i < b.size(); ++i) right.add(safe_log(k[i]) + weighted_log(t, lb[i]));
    total.add(lc + std::min(left, right.log()));
  });
  return total.log() / std::log(2.0);
}

}  // namespace pbc::classical
