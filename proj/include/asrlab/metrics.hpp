#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace asrlab {

// Levenshtein alignment counts. `rate` is in percent and may exceed 100.
struct ErrorBreakdown {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_len = 0;
  double rate = 0.0;
  // Set when the reference was empty; the rate is then errors / 1.
  bool empty_reference = false;

  std::size_t errors() const { return substitutions + insertions + deletions; }
};

namespace detail {
ErrorBreakdown finish(std::size_t s, std::size_t i, std::size_t d, std::size_t ref_len);
}

// Minimum edit alignment of `hyp` against `ref`. The backtrace prefers
// substitution over insertion over deletion when several predecessors are
// optimal.
template <typename T>
ErrorBreakdown edit_distance(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t m = ref.size();
  const std::size_t n = hyp.size();
  const std::size_t w = n + 1;
  std::vector<std::size_t> cost((m + 1) * w);
  for (std::size_t j = 0; j <= n; ++j) cost[j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    cost[i * w] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t diag = cost[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::size_t ins = cost[i * w + j - 1] + 1;
      const std::size_t del = cost[(i - 1) * w + j] + 1;
      cost[i * w + j] = std::min(diag, std::min(ins, del));
    }
  }
  std::size_t s = 0, ins = 0, del = 0;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const std::size_t here = cost[i * w + j];
    if (i > 0 && j > 0) {
      const bool match = ref[i - 1] == hyp[j - 1];
      if (here == cost[(i - 1) * w + j - 1] + (match ? 0 : 1)) {
        if (!match) ++s;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && here == cost[i * w + j - 1] + 1) {
      ++ins;
      --j;
    } else {
      ++del;
      --i;
    }
  }
  return detail::finish(s, ins, del, m);
}

struct CerOptions {
  bool ignore_spaces = false;
};

// Word error rate over whitespace-separated tokens.
ErrorBreakdown wer(std::string_view ref, std::string_view hyp);

// Character error rate over Unicode scalar values. Leading and trailing
// whitespace is trimmed; interior spaces count as characters unless
// `ignore_spaces`.
ErrorBreakdown cer(std::string_view ref, std::string_view hyp, const CerOptions& opts = {});

enum class RateLevel { word, character };

struct RefHyp {
  std::string ref;
  std::string hyp;
};

// Pooled rate: 100 * sum(errors) / max(1, sum(ref_len)).
double corpus_rate(std::span<const RefHyp> pairs, RateLevel level, const CerOptions& opts = {});

// Pooled breakdown (counts summed), the building block for corpus_rate.
ErrorBreakdown corpus_breakdown(std::span<const RefHyp> pairs, RateLevel level,
                                const CerOptions& opts = {});

// Arithmetic mean of per-language rates.
double macro_average(std::span<const double> rates);

}  // namespace asrlab
