#include <cstdio>
#include <iostream>

#include "asrlab/ngram.hpp"
#include "common.hpp"

namespace asrlab::cli {

namespace {

struct LmArgs {
  std::string text;
  std::string out;
  std::string lm;
  int order = 3;
  std::string level = "word";
  std::string discount = "modified";
  double fixed_discount = 0.75;
  bool normalize = false;
  std::string normalize_config;
};

LmLevel level_of(const LmArgs& a) { return a.level == "char" ? LmLevel::character : LmLevel::word; }

int run_train(const LmArgs& a) {
  const auto norm = normalization_from_flags(a.normalize, a.normalize_config);
  const auto lines = read_token_lines(a.text, level_of(a), norm);
  DiscountConfig disc;
  disc.mode = a.discount == "fixed" ? DiscountConfig::Mode::fixed : DiscountConfig::Mode::modified;
  disc.fixed_discount = a.fixed_discount;
  std::vector<OrderDiscounts> used;
  const auto lm = train(lines, a.order, disc, &used);
  for (std::size_t k = 0; k < used.size(); ++k) {
    if (used[k].fell_back) {
      log("order " + std::to_string(k + 1) + ": count-of-counts too sparse, using fixed discount " +
          std::to_string(disc.fixed_discount));
    }
  }
  write_arpa(lm, std::filesystem::path(a.out));
  std::cerr << "asrlab: " << lines.size() << " sentences, " << lm.vocab_size() << " words\n";
  return kOk;
}

int run_perplexity(const LmArgs& a) {
  const auto lm = read_arpa(std::filesystem::path(a.lm));
  const auto norm = normalization_from_flags(a.normalize, a.normalize_config);
  const auto lines = read_token_lines(a.text, level_of(a), norm);
  if (lines.empty()) throw Error("no sentences in " + a.text);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", perplexity(lm, lines));
  std::cout << buf << "\n";
  return kOk;
}

void common_options(CLI::App* sub, LmArgs& a) {
  sub->add_option("--text", a.text, "Text file, one sentence per line")->required()->check(CLI::ExistingFile);
  sub->add_option("--level", a.level, "word or char")->check(CLI::IsMember({"word", "char"}))->capture_default_str();
  sub->add_flag("--normalize", a.normalize, "Normalize each line before tokenizing");
  sub->add_option("--normalize-config", a.normalize_config, "Normalization config JSON")->check(CLI::ExistingFile);
}

}  // namespace

void setup_lm(CLI::App& app, Context& ctx) {
  auto a = std::make_shared<LmArgs>();
  auto* lm = app.add_subcommand("lm", "Train and evaluate Kneser-Ney n-gram language models");
  lm->require_subcommand(1);

  auto* tr = lm->add_subcommand("train", "Estimate an interpolated Kneser-Ney model and write ARPA");
  common_options(tr, *a);
  tr->add_option("--order", a->order, "N-gram order")->check(CLI::Range(1, kMaxLmOrder))->capture_default_str();
  tr->add_option("--discount", a->discount, "modified or fixed")
      ->check(CLI::IsMember({"modified", "fixed"}))
      ->capture_default_str();
  tr->add_option("--fixed-discount", a->fixed_discount, "Discount for fixed mode and sparse fallback")
      ->capture_default_str();
  tr->add_option("--out", a->out, "Output ARPA file")->required();
  tr->callback([a, &ctx] { ctx.action = [a] { return run_train(*a); }; });

  auto* pp = lm->add_subcommand("perplexity", "Perplexity of a model on a text file");
  common_options(pp, *a);
  pp->add_option("--lm", a->lm, "ARPA file")->required()->check(CLI::ExistingFile);
  pp->callback([a, &ctx] { ctx.action = [a] { return run_perplexity(*a); }; });
}

}  // namespace asrlab::cli
