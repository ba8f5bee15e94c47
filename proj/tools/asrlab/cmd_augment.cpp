#include <iostream>

#include "asrlab/augment.hpp"
#include "asrlab/corpus.hpp"
#include "common.hpp"

namespace asrlab::cli {

namespace {

struct AugmentArgs {
  std::vector<double> factors;
  std::string manifest;
  std::string split = "train";
  std::string source = "primary";
  std::string out_dir;
  std::string out_manifest;
  bool allow_non_primary = false;
};

int run(const AugmentArgs& a) {
  ManifestReadOptions ro;
  ro.source = parse_source(a.source);
  const auto m = read_manifest(a.manifest, parse_split(a.split), ro);
  AugmentOptions ao;
  ao.allow_non_primary = a.allow_non_primary;
  const std::filesystem::path out_dir = a.out_dir;
  const auto root = std::filesystem::path(a.manifest).parent_path();
  auto aug = augment_manifest(m, a.factors, root, out_dir, ao);
  const std::filesystem::path out_manifest = a.out_manifest.empty() ? out_dir / "manifest.tsv" : std::filesystem::path(a.out_manifest);
  std::filesystem::create_directories(out_dir);
  // Audio paths in a manifest are relative to the manifest's directory.
  const auto mdir = std::filesystem::absolute(out_manifest).parent_path();
  for (auto& u : aug.entries) {
    u.audio_path = std::filesystem::proximate(std::filesystem::absolute(out_dir / u.audio_path), mdir).string();
  }
  write_manifest(aug, out_manifest);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu utterances, %.4f h in, %.4f h added", m.entries.size(), m.total_hours(),
                aug.total_hours());
  log(buf);
  return kOk;
}

}  // namespace

void setup_augment(CLI::App& app, Context& ctx) {
  auto a = std::make_shared<AugmentArgs>();
  auto* aug = app.add_subcommand("augment", "Offline data augmentation");
  aug->require_subcommand(1);
  auto* sp = aug->add_subcommand("speed", "Speed perturbation by resampling");
  sp->add_option("--factor", a->factors, "Speed factor in [0.5, 2]; repeatable")
      ->required()
      ->check(CLI::Range(kMinSpeedFactor, kMaxSpeedFactor));
  sp->add_option("--manifest", a->manifest, "Input manifest TSV")->required()->check(CLI::ExistingFile);
  sp->add_option("--split", a->split, "Split of the input manifest")
      ->check(CLI::IsMember({"train", "dev", "test"}))
      ->capture_default_str();
  sp->add_option("--source", a->source, "Source of the input manifest")
      ->check(CLI::IsMember({"primary", "speed_augm", "external"}))
      ->capture_default_str();
  sp->add_option("--out-dir", a->out_dir, "Directory for perturbed audio")->required();
  sp->add_option("--out-manifest", a->out_manifest, "Manifest of the copies (default: OUT_DIR/manifest.tsv)");
  sp->add_flag("--allow-non-primary", a->allow_non_primary, "Accept non-primary input manifests");
  sp->callback([a, &ctx] { ctx.action = [a] { return run(*a); }; });
}

}  // namespace asrlab::cli
