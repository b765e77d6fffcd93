#pragma once

#include "towers/spectra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lieb {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kParseError = 2,
  kCapExceeded = 3,
  kLabelingFailed = 4,
  kHypothesisViolated = 5,
};

struct RunConfig {
  std::string command;
  std::string which;  // verify target
  std::string input;
  std::string output;
  std::optional<std::pair<int, int>> sector;
  std::optional<int> ne;
  std::uint64_t seed = 7;
  int cases = 50;
  int max_sites = 5;
  std::optional<int> nmax;
  double deg_tol = 1e-8;
  double label_tol = 1e-6;
  std::size_t dense_cap = 4096;
  std::size_t census_cap = 5000;
  std::vector<int> from;  // 1-based sites
  std::vector<int> to;

  towers::SpectrumOptions spectrum_options() const;
};

int cmd_spectrum(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_suite(const RunConfig& config);
int cmd_path(const RunConfig& config);
int cmd_pph(const RunConfig& config);

}  // namespace lieb
