#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formlab/arith.hpp"

namespace formlab {

long double eta(int d);
long double kappa(int d);
long double theta(int d);
long double eta_prime(int d, bool pair_has_real_projective_zero);

// Exact values where the closed forms are rational (d a perfect square, or
// the constant branches).
std::optional<Rat> eta_exact(int d);
std::optional<Rat> kappa_exact(int d);
std::optional<Rat> theta_exact(int d);

struct ExponentRow {
  int d = 0;
  long double eta = 0, kappa = 0, theta = 0;
};

std::vector<ExponentRow> exponent_table(int dmax);

// Three decimals by truncation, e.g. 0.40625 -> "0.406".
std::string three_decimals(long double x);

struct ChainCheck {
  std::string name;
  bool pass = true;
  int checked = 0;
  int first_failure = 0;  // degree of the first violation, 0 if none
};

struct InequalityReport {
  bool pass = true;
  std::vector<ChainCheck> chains;
};

InequalityReport verify_inequalities(int dmax);

}  // namespace formlab
