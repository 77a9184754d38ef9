#pragma once

#include <array>
#include <cstdint>

namespace stratalloc::reference {

/// Published optimal-allocation table for N = 30000, c1 = 1, c2 = 3, C = 1200.
struct AllocationRow {
  double w1;
  std::int64_t n1_opt;
  std::int64_t n_w;
  std::int64_t n_c;
  double max_var_stratified;
  double max_var_classical;
  double reduction_percent;
};

inline constexpr std::int64_t kTablePopulation = 30000;
inline constexpr double kTableC1 = 1.0;
inline constexpr double kTableC2 = 3.0;
inline constexpr double kTableBudget = 1200.0;

inline constexpr std::array<AllocationRow, 10> kAllocationTable{{
    {0.05, 29, 419, 413, 0.0005837, 0.0005970, 2.23},
    {0.10, 59, 439, 428, 0.0005504, 0.0005757, 4.40},
    {0.15, 92, 461, 444, 0.0005169, 0.0005547, 6.82},
    {0.20, 127, 484, 461, 0.0004828, 0.0005339, 9.57},
    {0.25, 165, 510, 480, 0.0004488, 0.0005129, 12.54},
    {0.30, 207, 538, 500, 0.0004127, 0.0004916, 16.05},
    {0.35, 252, 568, 521, 0.0003767, 0.0004712, 20.23},
    {0.40, 327, 618, 545, 0.0003056, 0.0004503, 32.15},
    {0.45, 383, 655, 571, 0.0002984, 0.0004295, 30.53},
    {0.50, 439, 692, 600, 0.0002853, 0.0004083, 30.13},
}};

/// Printed resolution of the table's variance and reduction columns.
inline constexpr double kVarianceResolution = 1e-7;
inline constexpr double kReductionResolution = 0.01;

/// Published regime-switch weights w1* and N1 = floor(w1* N).
struct SwitchWeightRow {
  std::int64_t population;
  double w1_star;
  std::int64_t size1;
};

inline constexpr std::array<SwitchWeightRow, 6> kSwitchWeightTable{{
    {100, 0.463384, 46},
    {1000, 0.464030, 464},
    {10000, 0.464094, 4640},
    {100000, 0.464101, 46410},
    {1000000, 0.464102, 464101},
    {10000000, 0.464102, 4641016},
}};

/// Printed resolution of the w1* column.
inline constexpr double kSwitchWeightResolution = 1e-6;

/// Reference run printed with the allocation routine (w1 = 0.25 row).
inline constexpr std::int64_t kReferenceRunN1 = 165;
inline constexpr std::int64_t kReferenceRunN2 = 345;
inline constexpr std::int64_t kReferenceRunNc = 480;
inline constexpr double kReferenceRunStratified = 0.000448249;
inline constexpr double kReferenceRunClassical = 0.000512517;
inline constexpr double kReferenceRunReduction = 12.5397;

/// The w1 = 0.5 curve is drawn at n1 = 438, one below the table row.
inline constexpr double kCurveWeight = 0.5;
inline constexpr std::int64_t kCurveN1 = 438;

}  // namespace stratalloc::reference
