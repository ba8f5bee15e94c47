#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "asrlab/normalize.hpp"
#include "asrlab/text.hpp"
#include "asrlab/wav.hpp"

namespace asrlab::testing {

namespace {

std::vector<std::string> letter_vocab() {
  std::vector<std::string> v = {std::string(EmissionMatrix::kBlank), " "};
  for (char c = 'a'; c <= 'z'; ++c) v.emplace_back(1, c);
  return v;
}

std::size_t index_of(char c) { return c == ' ' ? 1 : static_cast<std::size_t>(c - 'a') + 2; }

}  // namespace

EmissionMatrix spelled_emissions(const std::string& id, const std::string& text,
                                 const std::vector<Confusion>& confusions) {
  const auto vocab = letter_vocab();
  std::vector<std::vector<double>> probs;
  for (std::size_t i = 0; i < text.size(); ++i) {
    std::vector<double> sym(vocab.size(), 0.0), gap(vocab.size(), 0.0);
    char wrong = 0;
    for (const auto& c : confusions) {
      if (c.position == i) wrong = c.wrong;
    }
    const std::size_t right = index_of(text[i]);
    sym[0] = 0.1;
    if (wrong) {
      sym[index_of(wrong)] = 0.5;
      sym[right] = 0.4;
    } else {
      sym[right] = 0.9;
    }
    gap[0] = 0.95;
    gap[right] = 0.05;
    probs.push_back(sym);
    probs.push_back(gap);
  }
  return emissions_from_probs(id, vocab, probs);
}

std::vector<std::string> lm_dev_corpus() {
  const std::vector<std::string> base = {
      "the cat sat on the mat",   "a dog ran to the park",    "the bird sang in the tree",
      "my fish swam in the pond", "the cow ate the grass",    "a fox hid in the den",
      "the cat ran to the mat",   "a dog sat in the park",    "the bird ate the grass",
      "my cow swam in the pond",  "the fox sang in the tree", "a fish hid in the den",
  };
  std::vector<std::string> out;
  for (int r = 0; r < 3; ++r) out.insert(out.end(), base.begin(), base.end());
  return out;
}

std::vector<DevUtterance> lm_dev_set() {
  struct Item {
    const char* text;
    std::vector<Confusion> conf;
  };
  const std::vector<Item> items = {
      {"the cat sat on the mat", {{5, 'e'}}},       // cet
      {"a dog ran to the park", {{7, 'o'}}},        // ron
      {"the bird sang in the tree", {{10, 'o'}}},   // song
      {"my fish swam in the pond", {{10, 'i'}}},    // swim
      {"the cow ate the grass", {{4, 'k'}}},        // kow
      {"a fox hid in the den", {{3, 'i'}}},         // fix
  };
  std::vector<DevUtterance> dev;
  for (std::size_t i = 0; i < items.size(); ++i) {
    dev.push_back({spelled_emissions("dev" + std::to_string(i), items[i].text, items[i].conf), items[i].text});
  }
  return dev;
}

void materialize_pipeline(const std::filesystem::path& src, const std::filesystem::path& dst) {
  namespace fs = std::filesystem;
  fs::create_directories(dst / "audio");
  fs::create_directories(dst / "emissions");
  for (const char* name : {"lm_corpus.txt", "dev_refs.tsv", "train_manifest.tsv", "dev_confusions.tsv"}) {
    fs::copy_file(src / name, dst / name, fs::copy_options::overwrite_existing);
  }

  // Audio: a short tone per manifest line, length from the line number.
  std::ifstream man(dst / "train_manifest.tsv");
  std::string line;
  std::size_t k = 0;
  while (std::getline(man, line)) {
    const auto fields = text::split_fields(line, '\t');
    if (fields.size() < 2) continue;
    AudioBuffer a;
    a.samples.resize(8000 + 1600 * k);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      a.samples[i] = static_cast<float>(0.3 * std::sin(2 * std::numbers::pi * (220.0 + 40.0 * k) * i / 16000.0));
    }
    write_wav(a, dst / std::string(fields[1]));
    ++k;
  }

  // Confusions: id<TAB>position<TAB>wrong letter.
  std::map<std::string, std::vector<Confusion>> conf;
  std::ifstream cf(dst / "dev_confusions.tsv");
  while (std::getline(cf, line)) {
    const auto f = text::split_fields(line, '\t');
    if (f.size() == 3) conf[std::string(f[0])].push_back({std::stoul(std::string(f[1])), f[2].at(0)});
  }
  std::ifstream refs(dst / "dev_refs.tsv");
  while (std::getline(refs, line)) {
    const auto f = text::split_fields(line, '\t');
    if (f.size() != 2) continue;
    const std::string id(f[0]);
    const std::string spoken = normalize(f[1]);
    write_emissions(spelled_emissions(id, spoken, conf[id]), dst / "emissions" / (id + ".emx"));
  }
}

ScratchDir::ScratchDir(const std::string& tag) {
  static int counter = 0;
  path_ = std::filesystem::temp_directory_path() /
          ("asrlab-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace asrlab::testing
