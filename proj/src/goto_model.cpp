#include "iomma/goto_model.hpp"

#include <cmath>
#include <string>

namespace iomma {

namespace {

double mnk_of(const ProblemDims& d) { return double(d.m) * double(d.n) * double(d.k); }

} // namespace

void GotoParams::validate() const {
    if (!n_c || !k_c || !m_c || !n_r || !m_r || !S2 || !S3) {
        throw Error(ErrorCode::InvalidArgument, "blocking parameters and capacities must be positive");
    }
    if (m_c * k_c > S2) {
        throw Error(ErrorCode::InvalidArgument, "m_c*k_c = " + std::to_string(m_c * k_c) +
                                                    " does not fit in S2 = " + std::to_string(S2));
    }
    if (k_c * n_c > S3) {
        throw Error(ErrorCode::InvalidArgument, "k_c*n_c = " + std::to_string(k_c * n_c) +
                                                    " does not fit in S3 = " + std::to_string(S3));
    }
}

double l3_reads(const ProblemDims& dims, const GotoParams& p) {
    const double mnk = mnk_of(dims);
    return mnk / double(p.n_c) + mnk / double(p.k_c) + double(dims.n) * double(dims.k);
}

double l2_reads(const ProblemDims& dims, const GotoParams& p) {
    const double mnk = mnk_of(dims);
    return mnk / double(p.m_c) + mnk / double(p.k_c) + double(dims.m) * double(dims.k);
}

double io_reference(const ProblemDims& dims, Count capacity) {
    return 2.0 * mnk_of(dims) / std::sqrt(double(capacity));
}

GotoReport goto_report(const ProblemDims& dims, const GotoParams& params, double threshold) {
    params.validate();
    GotoReport r;
    r.l3_reads = l3_reads(dims, params);
    r.l2_reads = l2_reads(dims, params);
    r.l3_reference = io_reference(dims, params.S3);
    r.l2_reference = io_reference(dims, params.S2);
    r.l3_ratio = r.l3_reads / r.l3_reference;
    r.l2_ratio = r.l2_reads / r.l2_reference;
    r.l3_suboptimal = r.l3_ratio > threshold;
    r.l2_suboptimal = r.l2_ratio > threshold;
    return r;
}

} // namespace iomma
