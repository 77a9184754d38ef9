#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace stratalloc {

/// How n2 is derived from n1 and the budget inside variance formulas.
///
/// Parity keeps n2 = (C - c1 n1) / c2 real-valued and maximizes over
/// continuous θ, which is the convention that reproduces the published
/// reference computation. Oracle floors n2 to an integer and restricts θ to
/// the m/N lattice so results are comparable with exact enumeration.
enum class EvaluationMode { Parity, Oracle };

std::string_view to_string(EvaluationMode mode);
EvaluationMode parse_mode(std::string_view text);

/// A finite population of N units split into two strata of N1 and N2 units.
/// Weights are always derived from the integer counts.
class StratifiedPopulation {
 public:
  static StratifiedPopulation from_counts(std::int64_t size, std::int64_t stratum1);
  /// w1 * size must be an integer to within 1e-9.
  static StratifiedPopulation from_weight(std::int64_t size, double w1);

  std::int64_t size() const { return size_; }
  std::int64_t size1() const { return size1_; }
  std::int64_t size2() const { return size_ - size1_; }
  double w1() const { return static_cast<double>(size1_) / static_cast<double>(size_); }
  double w2() const { return static_cast<double>(size2()) / static_cast<double>(size_); }

  bool is_canonical() const { return size1_ <= size2(); }
  StratifiedPopulation swapped() const { return StratifiedPopulation(size_, size2()); }

  friend bool operator==(const StratifiedPopulation&, const StratifiedPopulation&) = default;

 private:
  StratifiedPopulation(std::int64_t size, std::int64_t size1) : size_(size), size1_(size1) {}

  std::int64_t size_;
  std::int64_t size1_;
};

/// Per-unit sampling costs and the total budget C.
struct CostBudget {
  double c1 = 0.0;
  double c2 = 0.0;
  double total = 0.0;

  double cost(double n1, double n2) const { return c1 * n1 + c2 * n2; }
  CostBudget swapped() const { return {c2, c1, total}; }

  friend bool operator==(const CostBudget&, const CostBudget&) = default;
};

/// Integer sample sizes drawn from each stratum.
struct Allocation {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;

  std::int64_t total() const { return n1 + n2; }
  double cost(const CostBudget& budget) const {
    return budget.cost(static_cast<double>(n1), static_cast<double>(n2));
  }
  Allocation swapped() const { return {n2, n1}; }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Real-valued sample sizes as they enter the variance formulas.
struct SampleSizes {
  double n1 = 0.0;
  double n2 = 0.0;
};

inline SampleSizes to_sizes(const Allocation& a) {
  return {static_cast<double>(a.n1), static_cast<double>(a.n2)};
}

struct CanonicalProblem {
  StratifiedPopulation population;
  CostBudget budget;
  bool swapped = false;
};

/// Relabels strata so that w1 <= w2. w1 == 1/2 is left alone.
CanonicalProblem canonicalize(const StratifiedPopulation& population, const CostBudget& budget);

/// Range of n1 for which n2 = (C - c1 n1) / c2 keeps every formula defined.
struct FeasibleRange {
  double lower = 1.0;
  double upper = 1.0;
  std::int64_t first = 1;  ///< smallest admissible integer n1
  std::int64_t last = 1;   ///< largest admissible integer n1

  std::int64_t count() const { return last - first + 1; }
};

/// Checks the cost invariants and returns the admissible n1 interval.
///
/// Throws InvalidInput for non-positive costs or a budget that already pays for
/// a census (c1 N1 + c2 N2 <= C), and InfeasibleBudget when one unit per
/// stratum is unaffordable or the interval is empty.
FeasibleRange validate_budget(const StratifiedPopulation& population, const CostBudget& budget);

/// n2 implied by spending the remainder of the budget on stratum 2.
/// Real-valued in parity mode, floored in oracle mode.
double implied_n2(const CostBudget& budget, double n1, EvaluationMode mode);

/// Largest affordable integer n2 for an integer n1.
std::int64_t affordable_n2(const CostBudget& budget, std::int64_t n1);

}  // namespace stratalloc
