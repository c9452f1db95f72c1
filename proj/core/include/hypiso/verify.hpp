#pragma once

#include <optional>
#include <string>

#include "hypiso/measure.hpp"

namespace hypiso {

enum class TheoremId {
    LinearIsop,
    ClassicalIsop,
    ReverseTG,
    Monotonicity,
    VolumeLowerBound,
    MobiusBoundary,
    MobiusDensity,
    MobiusIsop,
    LaplacianLemma,
};

const char* theorem_name(TheoremId id);

// slack is orientation-normalized: slack >= -tolerance means pass.
struct InequalityVerdict {
    TheoremId id;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool not_applicable = false;
    std::string notes;
};

InequalityVerdict make_verdict(TheoremId id, double lhs, double rhs, double slack,
                               double tolerance, std::string notes = {});

struct MobiusVolumeConfig {
    int restarts = 16;
    int max_evals = 200;       // per restart
    double tolerance = 1e-6;   // convergence tolerance on the volume
    unsigned seed = 7;
};

enum class MobiusTarget { Submanifold, IdealBoundary };

struct MobiusVolumeResult {
    double value = 0.0;
    MobiusMap maximizer;
    long evaluations = 0;
    int restarts_used = 0;
    bool converged = true;
    std::vector<std::pair<Vec, double>> history; // (translation, best volume so far)
};

// sup of Vol_R(g(target)) over Mobius maps g. Rotations leave the
// Euclidean volume unchanged, so the search runs over translation
// parameters only, unconstrained through a = tanh(|w|/2) w/|w|. The
// returned value is a certified lower bound for the supremum.
MobiusVolumeResult mobius_volume(const Submanifold& sigma, MobiusTarget target,
                                 const MobiusVolumeConfig& cfg = {});

// Vol_R(Sigma) <= Vol_R(boundary)/k
InequalityVerdict check_linear_isoperimetric(const Submanifold& sigma,
                                             const MeasureOptions& opts = {});

// k^k w_k Vol^{k-1} <= Vol_boundary^k, under Vol_boundary >= k w_k.
InequalityVerdict check_classical_isoperimetric(const Submanifold& sigma,
                                                const MeasureOptions& opts = {});

// Reverse comparison for totally geodesic caps.
InequalityVerdict check_reverse_totally_geodesic(const Submanifold& cap,
                                                 const MeasureOptions& opts = {});

// m(r) nondecreasing along the curve, slack floor 1e-8.
InequalityVerdict check_monotonicity(const MonotonicityCurve& curve);

// Vol_R(Sigma) >= w_k for submanifolds through the origin.
InequalityVerdict check_volume_lower_bound(const Submanifold& sigma,
                                           const MeasureOptions& opts = {});

// Discrete intrinsic Laplacian checks: the distance Laplacian identity
// coth(rho)(k - |grad rho|^2), the (1 + cosh rho)^{1-k} comparison, and
// its equality criterion |grad rho| = 1.
InequalityVerdict check_laplacian_lemma(const Submanifold& sigma,
                                        int sample_count = 100, unsigned seed = 2024);

// Vol_M(boundary) >= k w_k. A failing comparison escalates the optimizer
// (4x restarts) before reporting.
InequalityVerdict check_mobius_boundary_bound(
    const Submanifold& sigma, const MobiusVolumeConfig& cfg = {},
    const std::optional<MobiusVolumeResult>& precomputed = std::nullopt);

// Vol_M(boundary) >= k w_k * max density over the candidate points.
InequalityVerdict check_mobius_density_bound(
    const Submanifold& sigma, const MobiusVolumeConfig& cfg = {},
    const std::optional<MobiusVolumeResult>& precomputed = std::nullopt);

// k^k w_k Vol_M(Sigma)^{k-1} <= Vol_M(boundary)^k.
InequalityVerdict check_mobius_isoperimetric(
    const Submanifold& sigma, const MobiusVolumeConfig& cfg = {},
    const std::optional<MobiusVolumeResult>& bound_sigma = std::nullopt,
    const std::optional<MobiusVolumeResult>& bound_boundary = std::nullopt);

} // namespace hypiso
