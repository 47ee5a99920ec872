#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "table.hpp"

namespace lab {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kSchema = 3,
  kInvariant = 4,
  kMiss = 5,
};

struct Options {
  std::string model;
  int k = 0;
  std::optional<double> t_re;
  std::optional<double> t_im;
  std::string mode = "auto";
  std::optional<double> tol;
  std::uint64_t seed = 20240601;
  std::string out;
  Format format = Format::csv;
  std::string element;
  int order = 3;
  double floor = 1e-6;
  int depth = 1;
  std::string coeff;
  double period = 0.0;
};

/// Usage problems the parser cannot see (exit 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int run_validate(const Options& o);
int run_spectrum(const Options& o);
int run_imaginary(const Options& o);
int run_bands(const Options& o);
int run_weyl(const Options& o);
int run_floquet(const Options& o);
int run_oracle(const Options& o);
int run_states_check(const Options& o);
int run_quiver_hasse(const Options& o);

}  // namespace lab
