/**
 * @file bounds.hpp
 * @brief I/O lower bounds for C := AB + C in the two-level model.
 *
 * Split an execution into phases of M loads/stores each. During a phase at
 * most S + M operands are available as FMA inputs, and an FMA set using x
 * elements of A, y of B and z of C has at most sqrt(xyz) members. With
 * x + y + z <= S + M the most FMAs a phase can do is
 *
 *     F(S, M) = (S + M)^{3/2} / (3 sqrt 3)        at x = y = z = (S + M) / 3
 *
 * so any algorithm needs at least (mnk / F - 1) * M I/Os. M = S gives
 * (3 sqrt3 / 2 sqrt2) mnk / sqrt S - S; M = 2S maximizes the leading term and
 * gives 2mnk / sqrt S - 2S.
 *
 * All values are returned unrounded. Negative results mean the bound is
 * vacuous at that size and are reported as-is.
 */

#pragma once

#include <span>

#include "iomma/core.hpp"

namespace iomma {

struct XYZOptimum {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double f = 0.0;
};

struct BoundReport {
    ProblemDims dims;
    Count S = 0;
    Count M = 0;
    double f_max = 0.0;
    double general_bound = 0.0;
    double bound_M_eq_S = 0.0;
    double bound_M_eq_2S = 0.0;
    double hong_kung_reference = 0.0;  // 2mnk / sqrt(S), the leading term
    double bound_AB = 0.0;             // C := AB variant
};

double fmax(double S, double M);

/// Analytic maximizer of sqrt(xyz) subject to x + y + z = S + M.
XYZOptimum optimal_xyz(double S, double M);

inline constexpr double kMaxGridPoints = 1e7;

/// Exhaustive scan of the simplex x + y + z = S + M on a `step` lattice in
/// (x, y). Throws GridTooFine above kMaxGridPoints points.
XYZOptimum grid_search_xyz(double S, double M, double step);

double lower_bound_general(const ProblemDims& dims, double S, double M);
double lower_bound_MS(const ProblemDims& dims, double S);
double lower_bound_final(const ProblemDims& dims, double S);

/// Bound for C := AB: lower_bound_final minus the cost of a D + C pass,
/// taken as dc_passes * mn (read D, read C, write C).
double lower_bound_AB(const ProblemDims& dims, double S, double dc_passes = 3.0);

/// Large-mnk objective 3 sqrt3 * M / (S + M)^{3/2}; maximal at M = 2S.
double phase_objective(double S, double M);

/// The grid candidate maximizing phase_objective; first one wins ties.
/// Throws EmptyInput on an empty grid and InvalidArgument on M <= 0.
double optimal_M(double S, std::span<const double> grid);

BoundReport bound_report(const ProblemDims& dims, Count S, Count M);

} // namespace iomma
