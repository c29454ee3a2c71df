#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formlab/forms.hpp"

namespace formlab {

enum class SeqVariant { FullSquarefree, Shifted, Custom };

// mu_1 < mu_2 < ... squarefree, with mu_n <= lambda * n on the generated range.
struct SquarefreeSequence {
  std::vector<long long> values;
  Rat lambda;
  SeqVariant variant = SeqVariant::FullSquarefree;

  long long mu(int n) const;  // 1-based
  int size() const { return (int)values.size(); }
};

SquarefreeSequence squarefree_prefix(int N);
SquarefreeSequence shifted_squarefree_prefix(int N);
SquarefreeSequence custom_sequence(const std::vector<long long>& values);

// sup_n q_n / n for the squarefree integers q_n, attained at n = 230.
Rat qplus_lambda();

struct BinomialEntry {
  Int a;
  Int b;
  int d = 0;
};

enum class FamilyKind { Cyclotomic, Binomial, QPlus, QMinus, Lfamily };

struct FamilyId {
  FamilyKind kind = FamilyKind::QPlus;
  std::vector<BinomialEntry> catalog;
  SeqVariant seq_variant = SeqVariant::FullSquarefree;
  std::vector<long long> custom_mu;

  static FamilyId cyclotomic();
  static FamilyId qplus();
  static FamilyId qminus();
  static FamilyId lfamily();
  // Validates the pairwise non-isomorphism hypotheses unless told not to.
  static FamilyId binomial(std::vector<BinomialEntry> catalog, bool validate = true);

  SquarefreeSequence sequence(int N) const;
  std::string name() const;
};

// A real constant kept exactly when it is rational.
struct Kappa {
  std::optional<Rat> exact;
  long double value = 0;
  std::string text;
};

struct RegularityTuple {
  long A = 1;
  long A1 = 1;
  int d0 = 0;
  int d1 = 0;
  Kappa kappa;
};

BinaryForm cyclotomic_form(long n);
BinaryForm qplus(int d, int nu, const SquarefreeSequence& seq);
BinaryForm qminus(int d, int nu, const SquarefreeSequence& seq);
BinaryForm lform(int d, long p);
BinaryForm binomial_form(const Int& a, const Int& b, int d);

std::vector<BinaryForm> members(const FamilyId& fam, int d);
RegularityTuple regularity(const FamilyId& fam);
int degree_cutoff(const FamilyId& fam, long long B, long long A);

struct ConditionVReport {
  bool pass = true;
  long long points_checked = 0;
  int forms_checked = 0;
  bool has_counterexample = false;
  std::string form;
  long long x = 0, y = 0;
  Int value;
};

ConditionVReport check_condition_v(const FamilyId& fam, int dmax, long long box, int threads = 1);

// Is max(|x|,|y|) <= kappa * |F(x,y)|^(1/(deg - d0)) at this point?
bool condition_v_holds(const Int& value, long long max_coord, int exponent, const Kappa& kappa);

// Member specs such as "qplus:d=2,nu=3", "qminus:d=2,nu=3", "L:d=5,p=7",
// "cyclo:n=12", "binom:a=1,b=2,d=4".
BinaryForm parse_form_spec(const std::string& spec);

}  // namespace formlab
