#include "iomma/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iomma {

namespace {

const double kSqrt3 = std::sqrt(3.0);

double mnk_of(const ProblemDims& d) { return double(d.m) * double(d.n) * double(d.k); }

// bounds are evaluated in extended precision and rounded once
using Wide = long double;

Wide wide_mnk(const ProblemDims& d) { return Wide(d.m) * Wide(d.n) * Wide(d.k); }

} // namespace

double fmax(double S, double M) {
    const double t = S + M;
    return t * std::sqrt(t) / (3.0 * kSqrt3);
}

XYZOptimum optimal_xyz(double S, double M) {
    const double side = (S + M) / 3.0;
    return XYZOptimum{side, side, side, side * std::sqrt(side)};
}

XYZOptimum grid_search_xyz(double S, double M, double step) {
    const double total = S + M;
    if (!(step > 0.0) || !(total > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "grid_search_xyz needs step > 0 and S + M > 0");
    }
    const auto steps = static_cast<long long>(std::floor(total / step + 1e-9));
    const double points = 0.5 * double(steps + 1) * double(steps + 2);
    if (points > kMaxGridPoints) {
        throw Error(ErrorCode::GridTooFine, std::to_string(points) + " grid points exceed the limit");
    }

    XYZOptimum best;
    best.f = -1.0;
    for (long long ix = 0; ix <= steps; ++ix) {
        const double x = double(ix) * step;
        for (long long iy = 0; ix + iy <= steps; ++iy) {
            const double y = double(iy) * step;
            const double z = std::max(0.0, total - x - y);
            const double f = std::sqrt(x * y * z);
            if (f > best.f) best = XYZOptimum{x, y, z, f};
        }
    }
    return best;
}

double lower_bound_general(const ProblemDims& dims, double S, double M) {
    const Wide t = Wide(S) + Wide(M);
    return double((3 * std::sqrt(Wide(3)) * wide_mnk(dims) / (t * std::sqrt(t)) - 1) * Wide(M));
}

double lower_bound_MS(const ProblemDims& dims, double S) {
    return double(3 * std::sqrt(Wide(3)) / (2 * std::sqrt(Wide(2))) * wide_mnk(dims) / std::sqrt(Wide(S)) - Wide(S));
}

double lower_bound_final(const ProblemDims& dims, double S) {
    return double(2 * wide_mnk(dims) / std::sqrt(Wide(S)) - 2 * Wide(S));
}

double lower_bound_AB(const ProblemDims& dims, double S, double dc_passes) {
    return lower_bound_final(dims, S) - dc_passes * double(dims.m) * double(dims.n);
}

double phase_objective(double S, double M) {
    const double t = S + M;
    return 3.0 * kSqrt3 * M / (t * std::sqrt(t));
}

double optimal_M(double S, std::span<const double> grid) {
    if (grid.empty()) throw Error(ErrorCode::EmptyInput, "optimal_M needs at least one candidate");
    double best_m = 0.0;
    double best_g = -1.0;
    for (double M : grid) {
        if (!(M > 0.0)) throw Error(ErrorCode::InvalidArgument, "candidate M must be positive");
        const double g = phase_objective(S, M);
        if (g > best_g) {
            best_g = g;
            best_m = M;
        }
    }
    return best_m;
}

BoundReport bound_report(const ProblemDims& dims, Count S, Count M) {
    if (S < 1 || M < 1) throw Error(ErrorCode::InvalidArgument, "S and M must be >= 1");
    const double s = double(S);
    BoundReport r;
    r.dims = dims;
    r.S = S;
    r.M = M;
    r.f_max = fmax(s, double(M));
    r.general_bound = lower_bound_general(dims, s, double(M));
    r.bound_M_eq_S = lower_bound_MS(dims, s);
    r.bound_M_eq_2S = lower_bound_final(dims, s);
    r.hong_kung_reference = 2.0 * mnk_of(dims) / std::sqrt(s);
    r.bound_AB = lower_bound_AB(dims, s);
    return r;
}

} // namespace iomma
