#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "formlab/families.hpp"
#include "formlab/forms.hpp"

namespace formlab {

enum class BoxSource { ConditionV, DefiniteMinimum, UserCap };

struct BoxBound {
  long long X = 0;
  bool rigorous = false;
  BoxSource source = BoxSource::UserCap;
  std::optional<Rat> c_F;  // certified lower bound for min |F| on max(|x|,|y|) = 1
  std::string form;
};

// Sorted, duplicate-free values m with |m| <= B.
class ValueSet {
 public:
  ValueSet() = default;
  explicit ValueSet(std::vector<std::int64_t> values);

  std::size_t size() const { return values_.size(); }
  bool contains(std::int64_t m) const;
  bool contains_zero() const { return contains(0); }
  const std::vector<std::int64_t>& values() const { return values_; }
  ValueSet intersect(const ValueSet& o) const;
  ValueSet unite(const ValueSet& o) const;

 private:
  std::vector<std::int64_t> values_;
};

struct CountReport {
  long long count = 0;
  long long B = 0;
  std::vector<BoxBound> boxes;
  bool rigorous = true;
  double elapsed = 0;  // seconds
  bool zero_included = false;
  std::string warning;  // e.g. "SmallPointUnbounded"
};

struct CountOptions {
  int threads = 1;
  long long box_cap = 0;  // half-width used when no certified box exists; 0 picks a default
  int degree_cap = 200;   // count_r: give up on the small-point scan past this degree
};

// Largest B the machine-integer scan accepts.
constexpr long long kMaxBound = (1LL << 61);

// Certified min |F| on the square boundary; nothing when F has a real projective root.
std::optional<Rat> definite_minimum(const BinaryForm& F);

BoxBound search_box(const BinaryForm& F, long long B, const std::optional<RegularityTuple>& reg,
                    long long box_cap = 0);

// All F(x,y) with |F(x,y)| <= B over max(|x|,|y|) <= box.X, restricted to
// points with max(|x|,|y|) >= min_max.
ValueSet represented_values(const BinaryForm& F, long long B, const BoxBound& box, long long min_max = 0,
                            int threads = 1);

CountReport count_nn(const BinaryForm& F, long long B, const CountOptions& opt = {});
// Values |m| <= N taken by both forms.
ValueSet common_values(const BinaryForm& F1, const BinaryForm& F2, long long N, const CountOptions& opt = {});
CountReport count_common(const BinaryForm& F1, const BinaryForm& F2, long long N, const CountOptions& opt = {});
CountReport count_m(const BinaryForm& F1, const BinaryForm& F2, long long B, bool star, const CountOptions& opt = {});
CountReport count_r(const FamilyId& fam, int d, long long B, long long A, const CountOptions& opt = {});

// Points with 0 < |F(x,y)| <= A and A^(1/d) * delta <= |y| <= y_cap.
CountReport count_large_y(const BinaryForm& F, long long A, long double delta, long long y_cap,
                          const CountOptions& opt = {});

struct FitRow {
  long long B = 0;
  long long count = 0;
  long double ratio = 0;
  bool rigorous = false;
};

std::vector<FitRow> fit_report(const std::function<CountReport(long long)>& counter, const std::vector<long long>& Bs,
                               const Rat& exponent);

std::string to_string(BoxSource s);

}  // namespace formlab
