#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "formlab/forms.hpp"

namespace formlab {

constexpr std::uint64_t kDefaultSeed = 0xF0EB;

struct CheckOutcome {
  std::string name;
  std::string parameters;
  long double observed = 0;
  long double bound = 0;
  bool pass = false;
  std::optional<std::string> witness;  // inputs and both sides of the first failure
};

// N^N e^-N sqrt(2 pi N) < N! < N^N e^-N sqrt(2 pi N) e^(1/12N) for 1 <= N <= n_max.
CheckOutcome stirling_check(int n_max);

// sum_{n >= B} n^-delta <= zeta(delta) B^(1 - delta).
CheckOutcome zeta_tail_check(long double delta, long long B, long long terms);

// Distinct reduced p/q with |xi - p/q| <= kappa / q^s for some denominator q in [q_lo, q_hi],
// against 2^(s+1) kappa / ((2^(s-2) - 1) q_lo^(s-2)) + ceil(log2(q_hi / q_lo)).
CheckOutcome hooley_count_check(long double xi, long double kappa, long double s, long long q_lo, long long q_hi);

// 100 random instances plus the sqrt(2) example.
CheckOutcome hooley_sweep(int instances, std::uint64_t seed = kDefaultSeed);

// (d/m - 1)^(d-m) >= e^(-m/e), n!(d-n)!/n^d >= e^(-(1+1/e)d) and the chain
// (n!(d-n)!)^(1/d) >= e^(-1-1/e) max(n, d-n) >= d / (2 e^(1+1/e)) >= d / (2 e^2).
CheckOutcome minoration_check(int d_max);

// (1*3*5*...*(2d-3))^(1/d) / (2d/e): within [0.9, 1.1] for d >= 50, closer to 1 as d grows,
// and the two-sided Stirling sandwich for the product.
CheckOutcome factorielles_check(const std::vector<int>& ds);

// Polynomial identity between the two quartics, and common values from Pythagorean triples.
CheckOutcome jb_identity_check(int triple_count);

// min_j |t - xi_j| <= c2 |f(t)| for random real t.
CheckOutcome root_proximity_check(const std::vector<BinaryForm>& forms, int samples,
                                  std::uint64_t seed = kDefaultSeed);

std::vector<std::string> check_names();
// Runs one named check, or every check for "all".
std::vector<CheckOutcome> run_checks(const std::string& name, std::uint64_t seed = kDefaultSeed);

}  // namespace formlab
