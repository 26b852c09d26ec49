#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ulam/numeric.hpp"

namespace ulam {

enum class Orientation { increasing, decreasing };

/// Branch expression f(x) = shift + slope*x + scale*x^exponent.
/// Covers affine branches (scale == 0 or exponent == 1) and the
/// power-law branches x + C*x^(1+a) used near a neutral fixed point.
struct BranchExpr {
    double shift = 0.0;
    double slope = 0.0;
    double scale = 0.0;
    double exponent = 1.0;

    double operator()(double x) const;
    bool is_affine() const { return scale == 0.0 || exponent == 1.0; }
    double affine_slope() const { return slope + (exponent == 1.0 ? scale : 0.0); }
};

/// One monotone branch of a piecewise map: a domain interval, the forward
/// expression, its orientation and the precomputed image interval. The image
/// endpoints are exactly the forward values at the domain endpoints
/// (orientation-adjusted), which keeps preimage clipping watertight.
struct Branch {
    Interval domain;
    Orientation orientation = Orientation::increasing;
    BranchExpr forward;
    Interval image;

    /// Validates strict monotonicity by sampling and fills orientation/image.
    static Branch make(Interval domain, BranchExpr forward);
};

/// A piecewise-monotone self-map of [0,1]: ordered branches whose domains
/// tile the interval. Branch ownership of shared endpoints follows the
/// half-open convention [a,b), with the last branch closed.
struct IntervalMap {
    std::vector<Branch> branches;
    std::string name;
    std::map<std::string, double> params;

    std::size_t branch_of(double x) const;
};

/// Builds a map from ordered branches, snapping adjacent domain endpoints
/// (within 1e-12) so that the branches tile [0,1] exactly.
IntervalMap make_interval_map(std::vector<Branch> branches, std::string name,
                              std::map<std::string, double> params = {});

/// The two-branch neutral-fixed-point family x + x^(1+alpha) (mod 1).
/// The branch cut c_alpha solves c + c^(1+alpha) = 1 (bisection, 1e-15).
/// alpha == 0 gives the doubling map. Throws on alpha < 0.
IntervalMap mp_map(double alpha);

/// Three-branch contracting map whose unique invariant measure sits at the
/// fixed point 1/2, used to probe failure modes of the discretization:
///   x/4 + 1/2 on [0, 5/12),  -2x + 1 on [5/12, 1/2),  x/2 + 1/4 on [1/2, 1].
IntervalMap counterexample_map();

/// Forward value of the owning branch; clamped into [0,1].
/// Throws std::domain_error outside [0,1].
double eval(const IntervalMap& map, double x);

/// Unique x in the branch domain with forward(x) == y, or absent when y is
/// outside the branch image. Affine branches are solved in closed form,
/// power branches by bracketed bisection (1e-15 absolute, <= 200 steps).
std::optional<double> branch_preimage(const IntervalMap& map, std::size_t branch_index, double y);

/// {x in branch domain : forward(x) in target}. Endpoint order is swapped
/// for decreasing branches. Absent when target misses the branch image or
/// the intersection degenerates to a point.
std::optional<Interval> preimage_of_interval(const IntervalMap& map, std::size_t branch_index,
                                             Interval target);

struct ConditionWitness {
    std::string check;
    std::size_t branch = 0;
    double x = 0.0;
    double value = 0.0;
};

/// Verification report for the piecewise-convex family (every branch convex
/// with the origin in its image) and for the extra expanding-map conditions:
/// near-origin form T(x) = x + C*x^(1+alpha) + o(x^(1+alpha)), global
/// noncontraction, and a finite preimage-count bound.
struct FamilyReport {
    std::vector<bool> is_piecewise_convex;  // per branch
    std::vector<bool> origin_in_each_image; // per branch
    bool noncontracting = false;
    std::size_t branch_count_bound = 0;     // M: preimages per point <= branch count
    double fitted_scale = 0.0;              // C estimated from the near-origin form
    double fitted_exponent = 0.0;           // alpha estimated from the near-origin form
    bool local_form_ok = false;
    std::vector<ConditionWitness> violations;

    bool family_ok() const;
    bool expanding_ok() const { return family_ok() && noncontracting && local_form_ok; }
};

/// Checks per-branch convexity (second differences >= -1e-12 on an
/// equispaced grid) and origin-in-image (image lower endpoint <= 1e-15).
/// Every false flag carries at least one witness.
FamilyReport verify_family(const IntervalMap& map, std::size_t samples = 1025);

/// Family checks plus the expanding-map conditions. Noncontraction is
/// sampled via difference quotients >= 1 - 1e-10; the near-origin form is
/// probed on the geometric grid x = 2^-k, k = 10..40, requiring relative
/// deviation of (T(x)-x)/x^(1+alpha) from C below 1e-3 at the smallest
/// scales. (C, alpha) are also estimated by a log-log fit on the small-x
/// tail of the grid. Always returns the full report, including for maps
/// that fail the family checks.
FamilyReport verify_expanding_conditions(const IntervalMap& map, double alpha, double C,
                                         std::size_t samples = 1025);

} // namespace ulam
