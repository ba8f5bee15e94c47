#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "asrlab/text.hpp"

namespace asrlab::testing {

EditCounts edit_oracle(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const std::size_t m = ref.size(), n = hyp.size();
  std::vector<std::vector<EditCounts>> t(m + 1, std::vector<EditCounts>(n + 1));
  for (std::size_t i = 1; i <= m; ++i) t[i][0] = {i, 0, 0, i};
  for (std::size_t j = 1; j <= n; ++j) t[0][j] = {j, 0, j, 0};
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      EditCounts diag = t[i - 1][j - 1];
      if (ref[i - 1] != hyp[j - 1]) {
        ++diag.cost;
        ++diag.sub;
      }
      EditCounts ins = t[i][j - 1];
      ++ins.cost;
      ++ins.ins;
      EditCounts del = t[i - 1][j];
      ++del.cost;
      ++del.del;
      EditCounts best = diag;
      if (ins.cost < best.cost) best = ins;
      if (del.cost < best.cost) best = del;
      t[i][j] = best;
    }
  }
  return t[m][n];
}

std::vector<std::string> units(const std::string& s, bool chars) {
  if (!chars) return text::split_words(s);
  std::vector<std::string> out;
  for (char32_t c : text::to_u32(s)) out.push_back(text::to_utf8(std::u32string(1, c)));
  return out;
}

std::string random_words(Rng& rng, std::size_t max_words, std::size_t alphabet) {
  static const char* letters = "abcdefgh";
  const auto words = rng.below(max_words + 1);
  std::string s;
  for (std::size_t w = 0; w < words; ++w) {
    if (w) s += ' ';
    const auto len = 1 + rng.below(3);
    for (std::size_t k = 0; k < len; ++k) s += letters[rng.below(alphabet)];
  }
  return s;
}

EmissionMatrix random_emissions(Rng& rng, std::size_t frames, std::size_t vocab, double sharpness) {
  std::vector<std::string> v = {std::string(EmissionMatrix::kBlank), " "};
  for (std::size_t k = 2; k < vocab; ++k) v.push_back(std::string(1, static_cast<char>('a' + k - 2)));
  std::vector<std::vector<double>> probs(frames, std::vector<double>(vocab));
  for (auto& row : probs) {
    for (auto& p : row) p = std::exp(sharpness * rng.normal());
  }
  return emissions_from_probs("rand", v, probs);
}

double ishigami(std::span<const double> x, double a, double b) {
  const double pi = std::numbers::pi;
  const double x1 = -pi + 2 * pi * x[0], x2 = -pi + 2 * pi * x[1], x3 = -pi + 2 * pi * x[2];
  return std::sin(x1) + a * std::sin(x2) * std::sin(x2) + b * std::pow(x3, 4) * std::sin(x1);
}

double star_discrepancy_2d(std::span<const double> pts) {
  const std::size_t n = pts.size() / 2;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[2 * a] < pts[2 * b]; });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = pts[2 * i + 1];
  std::vector<double> ycand = ys;
  ycand.push_back(1.0);
  std::sort(ycand.begin(), ycand.end());
  ycand.erase(std::unique(ycand.begin(), ycand.end()), ycand.end());

  // Fenwick tree over y ranks.
  std::vector<int> fen(ycand.size() + 1, 0);
  auto add = [&](std::size_t r) {
    for (++r; r < fen.size(); r += r & (~r + 1)) ++fen[r];
  };
  auto prefix = [&](std::size_t r) {  // count of ranks < r
    int s = 0;
    for (; r > 0; r -= r & (~r + 1)) s += fen[r];
    return s;
  };
  auto rank = [&](double y) {
    return static_cast<std::size_t>(std::lower_bound(ycand.begin(), ycand.end(), y) - ycand.begin());
  };

  const double dn = static_cast<double>(n);
  double d = 0.0;
  // Open boxes [0,X) x [0,Y) before the points at X are inserted, closed
  // boxes [0,X] x [0,Y] after.
  auto open_boxes = [&](double X) {
    for (std::size_t r = 0; r < ycand.size(); ++r) d = std::max(d, X * ycand[r] - prefix(r) / dn);
  };
  std::size_t k = 0;
  while (k < n) {
    const double X = pts[2 * order[k]];
    open_boxes(X);
    while (k < n && pts[2 * order[k]] == X) add(rank(ys[order[k++]]));
    for (std::size_t r = 0; r < ycand.size(); ++r) d = std::max(d, prefix(r + 1) / dn - X * ycand[r]);
  }
  open_boxes(1.0);
  return d;
}

double dft_peak(std::span<const float> x, double rate, double lo, double hi, double step) {
  const std::size_t n = x.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = x[i] * (0.5 - 0.5 * std::cos(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
  }
  double best_f = lo, best = -1.0;
  for (double f = lo; f <= hi + 1e-9; f += step) {
    const double om = 2 * std::numbers::pi * f / rate;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      re += w[i] * std::cos(om * static_cast<double>(i));
      im -= w[i] * std::sin(om * static_cast<double>(i));
    }
    const double mag = re * re + im * im;
    if (mag > best) {
      best = mag;
      best_f = f;
    }
  }
  return best_f;
}

std::vector<float> sine(double freq, double rate, std::size_t n, double amp) {
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<float>(amp * std::sin(2 * std::numbers::pi * freq * static_cast<double>(i) / rate));
  }
  return out;
}

double rms(std::span<const float> x) {
  double s = 0.0;
  for (float v : x) s += static_cast<double>(v) * v;
  return x.empty() ? 0.0 : std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace asrlab::testing
