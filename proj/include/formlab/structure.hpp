#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formlab/aut_class.hpp"
#include "formlab/forms.hpp"

namespace formlab {

// A point of the projective line over Q; infinite points ignore value.
struct ProjPoint {
  bool infinite = false;
  Rat value;

  static ProjPoint inf() { return {true, Rat(0)}; }
  static ProjPoint of(const Rat& q) { return {false, q}; }
  bool operator==(const ProjPoint& o) const { return infinite == o.infinite && (infinite || value == o.value); }
};

std::optional<Rat> rational_dth_root(const Rat& c, int d);

// The cross-ratio [x1,x2,x3,x4]; nullopt encodes the value infinity.
std::optional<Rat> cross_ratio(const ProjPoint& x1, const ProjPoint& x2, const ProjPoint& x3, const ProjPoint& x4);

std::vector<Rat> bir_set(const BinaryForm& F);
int vp(const Rat& t, long p);

// PGL(2,Q) element, canonicalized so that its first nonzero entry is 1.
class Homography {
 public:
  explicit Homography(const RationalMatrix& m);
  const RationalMatrix& matrix() const { return m_; }
  ProjPoint apply(const ProjPoint& z) const;
  bool operator==(const Homography& o) const { return m_ == o.m_; }
  std::string to_string() const { return m_.to_string(); }

 private:
  RationalMatrix m_;
};

Homography homography_from_triple(const ProjPoint src[3], const ProjPoint dst[3]);

struct AutGroup {
  std::vector<RationalMatrix> elements;
  AutClass classification = AutClass::Trivial;
  int other_order = 0;
  bool complete = true;
};

AutGroup automorphisms(const BinaryForm& F);

enum class IsoKind { Yes, No, Unknown };
enum class NoCertificate {
  None,
  DegreeMismatch,
  CrossRatioInvariant,
  ExhaustedCandidatesExact,
  BinomialCriterion,
  DiscriminantClass
};

struct IsoVerdict {
  IsoKind kind = IsoKind::Unknown;
  std::optional<RationalMatrix> gamma;  // F2 o gamma = F1 when kind == Yes
  NoCertificate certificate = NoCertificate::None;
  long prime = 0;  // for CrossRatioInvariant; 0 when only the sets differ
  std::string details;
};

struct IsoOptions {
  long long denominator_bound = 1000000;
};

IsoVerdict is_isomorphic(const BinaryForm& F1, const BinaryForm& F2, const IsoOptions& opts = {});

std::string to_string(IsoKind k);
std::string to_string(NoCertificate c);
std::string to_string(AutClass c);

}  // namespace formlab
