#pragma once

#include <optional>
#include <string>
#include <vector>

#include "incentives/numerics.hpp"

namespace incentives {

enum class Relation { Dominates, DominatedBy, Equivalent, Incomparable };

std::string to_string(Relation r);

/// Builds the relation from the two one-sided dominance tests.
Relation combine(bool forward, bool backward);

/// Evidence attached to an order verdict. Which fields are populated depends
/// on `kind`: "garbling" and "cone" carry maps, "rank" carries the rank
/// transcript, "likelihood" carries the binary likelihood-ratio summary.
struct OrderCertificate {
  std::string kind;
  /// e.kernel * forward == f.kernel when e dominates f.
  std::optional<Matrix> forward;
  /// f.kernel * backward == e.kernel when f dominates e.
  std::optional<Matrix> backward;

  int rank_e = -1;
  int rank_f = -1;
  int rank_joint = -1;

  /// l1, l2 of each experiment with l1 <= 1 <= l2.
  double l1_e = 0, l2_e = 0, l1_f = 0, l2_f = 0;
  /// l2 - l1 and 1/l1 - 1/l2 for each experiment.
  double spread_e = 0, reciprocal_spread_e = 0, spread_f = 0, reciprocal_spread_f = 0;
};

struct OrderVerdict {
  Relation relation = Relation::Incomparable;
  /// Dominance that is not an equivalence.
  bool strict = false;
  OrderCertificate certificate;

  bool dominates_or_equivalent() const {
    return relation == Relation::Dominates || relation == Relation::Equivalent;
  }

  /// Re-checks the certificate against the two kernels it was issued for.
  bool verify(const Matrix& e, const Matrix& f, double tol = 1e-9) const;
};

}  // namespace incentives
