#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "asrlab/corpus.hpp"
#include "asrlab/rng.hpp"

namespace asrlab::testing {

struct EditCounts {
  std::size_t cost = 0, sub = 0, ins = 0, del = 0;
};

// Forward DP that carries operation counts along the preferred optimal
// predecessor (substitution, then insertion, then deletion).
EditCounts edit_oracle(const std::vector<std::string>& ref, const std::vector<std::string>& hyp);

// Splits into words, or into UTF-8 characters when `chars`.
std::vector<std::string> units(const std::string& s, bool chars);

std::string random_words(Rng& rng, std::size_t max_words, std::size_t alphabet);

// Random T x V lattice over {<blank>, " ", a, b, ...}; V >= 2.
EmissionMatrix random_emissions(Rng& rng, std::size_t frames, std::size_t vocab, double sharpness = 2.0);

double ishigami(std::span<const double> x, double a = 7.0, double b = 0.1);

// Exact L-infinity star discrepancy of points in [0,1)^2 (row-major pairs).
double star_discrepancy_2d(std::span<const double> pts);

// Frequency in [lo, hi] Hz with the largest Hann-windowed DFT magnitude.
double dft_peak(std::span<const float> x, double rate, double lo, double hi, double step);

std::vector<float> sine(double freq, double rate, std::size_t n, double amp = 0.5);

double rms(std::span<const float> x);

}  // namespace asrlab::testing
