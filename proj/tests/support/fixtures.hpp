#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "asrlab/ctc.hpp"

namespace asrlab::testing {

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag);
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

// One character position whose acoustics favour a wrong letter.
struct Confusion {
  std::size_t position;  // byte offset into the text
  char wrong;
};

// Two frames per character (symbol, then mostly blank). Confused positions
// give the wrong letter 0.5 and the right one 0.4. Letters are a-z.
EmissionMatrix spelled_emissions(const std::string& id, const std::string& text,
                                 const std::vector<Confusion>& confusions);

// Sentences for a small word LM in which every dev word is frequent.
std::vector<std::string> lm_dev_corpus();

// Dev set whose acoustics prefer out-of-vocabulary misspellings; an LM
// trained on lm_dev_corpus() recovers the references.
std::vector<DevUtterance> lm_dev_set();

// Copies the bundled pipeline text fixtures from `src` into `dst` and adds
// generated audio (for train_manifest.tsv) and dev emissions (for
// dev_refs.tsv, under dst/emissions).
void materialize_pipeline(const std::filesystem::path& src, const std::filesystem::path& dst);

}  // namespace asrlab::testing
