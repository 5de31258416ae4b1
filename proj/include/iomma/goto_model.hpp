/**
 * @file goto_model.hpp
 * @brief Analytic read counts for the layered GEMM blocking (n_c, k_c, m_c,
 *        n_r, m_r) at the L3 and L2 levels, scored against 2mnk/sqrt(S).
 *
 * L3 holds a k_c x n_c panel of B:   reads = mnk/n_c + mnk/k_c + nk
 * L2 holds an m_c x k_c block of A:  reads = mnk/m_c + mnk/k_c + mk
 *
 * The L2 expression assumes n_c is very large. Packing copies are not
 * counted. n_r and m_r are carried through to reports but enter no formula.
 */

#pragma once

#include "iomma/core.hpp"

namespace iomma {

struct GotoParams {
    Count n_c = 1;
    Count k_c = 1;
    Count m_c = 1;
    Count n_r = 1;
    Count m_r = 1;
    Count S2 = 1;
    Count S3 = 1;

    /// Throws InvalidArgument on zero parameters, m_c*k_c > S2 or k_c*n_c > S3.
    void validate() const;
};

struct GotoReport {
    double l3_reads = 0.0;
    double l2_reads = 0.0;
    double l3_reference = 0.0;
    double l2_reference = 0.0;
    double l3_ratio = 0.0;
    double l2_ratio = 0.0;
    bool l3_suboptimal = false;
    bool l2_suboptimal = false;
};

inline constexpr double kDefaultSuboptimalThreshold = 1.25;

double l3_reads(const ProblemDims& dims, const GotoParams& params);
double l2_reads(const ProblemDims& dims, const GotoParams& params);

/// 2mnk / sqrt(capacity).
double io_reference(const ProblemDims& dims, Count capacity);

GotoReport goto_report(const ProblemDims& dims, const GotoParams& params,
                       double threshold = kDefaultSuboptimalThreshold);

} // namespace iomma
