#include "asrlab/metrics.hpp"

#include <algorithm>

#include "asrlab/kernels.hpp"
#include "asrlab/text.hpp"

namespace asrlab {

namespace detail {
ErrorBreakdown finish(std::size_t s, std::size_t i, std::size_t d, std::size_t ref_len) {
  ErrorBreakdown b;
  b.substitutions = s;
  b.insertions = i;
  b.deletions = d;
  b.ref_len = ref_len;
  b.empty_reference = ref_len == 0;
  b.rate = 100.0 * static_cast<double>(s + i + d) / static_cast<double>(std::max<std::size_t>(1, ref_len));
  return b;
}
}  // namespace detail

ErrorBreakdown wer(std::string_view ref, std::string_view hyp) {
  const auto r = text::split_words(ref);
  const auto h = text::split_words(hyp);
  return edit_distance<std::string>(r, h);
}

namespace {
std::u32string char_tokens(std::string_view s, const CerOptions& opts) {
  auto cps = text::to_u32(text::trim(s));
  if (opts.ignore_spaces) std::erase(cps, U' ');
  return cps;
}
}  // namespace

ErrorBreakdown cer(std::string_view ref, std::string_view hyp, const CerOptions& opts) {
  const auto r = char_tokens(ref, opts);
  const auto h = char_tokens(hyp, opts);
  return edit_distance<char32_t>(std::span<const char32_t>(r), std::span<const char32_t>(h));
}

ErrorBreakdown corpus_breakdown(std::span<const RefHyp> pairs, RateLevel level,
                                const CerOptions& opts) {
  const auto each = kernels::score_pairs(pairs, level, opts);
  std::size_t s = 0, i = 0, d = 0, n = 0;
  for (const auto& b : each) {
    s += b.substitutions;
    i += b.insertions;
    d += b.deletions;
    n += b.ref_len;
  }
  return detail::finish(s, i, d, n);
}

double corpus_rate(std::span<const RefHyp> pairs, RateLevel level, const CerOptions& opts) {
  return corpus_breakdown(pairs, level, opts).rate;
}

double macro_average(std::span<const double> rates) {
  if (rates.empty()) return 0.0;
  double sum = 0.0;
  for (double r : rates) sum += r;
  return sum / static_cast<double>(rates.size());
}

}  // namespace asrlab
