#include "ulam/interval_maps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ulam {

namespace {

constexpr double kRootTol = 1e-15;
constexpr int kRootMaxIter = 200;

// Bracketed bisection for an increasing f on [lo, hi] with y inside
// [f(lo), f(hi)]. Values at or beyond the bracket ends return the ends
// exactly, so preimages of adjacent targets tile without gaps.
double bisect_increasing(const BranchExpr& f, double lo, double hi, double y) {
    if (y <= f(lo)) return lo;
    if (y >= f(hi)) return hi;
    for (int it = 0; it < kRootMaxIter && (hi - lo) > kRootTol; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = f(mid);
        if (v == y) return mid;
        if (v < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double bisect_decreasing(const BranchExpr& f, double lo, double hi, double y) {
    if (y >= f(lo)) return lo;
    if (y <= f(hi)) return hi;
    for (int it = 0; it < kRootMaxIter && (hi - lo) > kRootTol; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = f(mid);
        if (v == y) return mid;
        if (v > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double invert_on_branch(const Branch& b, double y) {
    if (b.forward.is_affine()) {
        double x = (y - b.forward.shift) / b.forward.affine_slope();
        return std::clamp(x, b.domain.lo, b.domain.hi);
    }
    return b.orientation == Orientation::increasing
               ? bisect_increasing(b.forward, b.domain.lo, b.domain.hi, y)
               : bisect_decreasing(b.forward, b.domain.lo, b.domain.hi, y);
}

} // namespace

double BranchExpr::operator()(double x) const {
    double v = shift + slope * x;
    if (scale != 0.0)
        v += (exponent == 1.0) ? scale * x : scale * std::pow(x, exponent);
    return v;
}

Branch Branch::make(Interval domain, BranchExpr forward) {
    if (!(domain.hi > domain.lo))
        throw std::invalid_argument("branch domain must have positive length");
    Branch b;
    b.domain = domain;
    b.forward = forward;
    const double fa = forward(domain.lo);
    const double fb = forward(domain.hi);
    if (fa == fb) throw std::invalid_argument("branch is not strictly monotone");
    b.orientation = fb > fa ? Orientation::increasing : Orientation::decreasing;
    b.image = b.orientation == Orientation::increasing ? Interval{fa, fb} : Interval{fb, fa};

    // sampled strict-monotonicity check; protects user-supplied branches
    const int probes = 33;
    double prev = fa;
    for (int i = 1; i <= probes; ++i) {
        double x = domain.lo + (domain.hi - domain.lo) * i / probes;
        double v = forward(x);
        bool ok = b.orientation == Orientation::increasing ? v > prev : v < prev;
        if (!ok) throw std::invalid_argument("branch is not strictly monotone");
        prev = v;
    }
    return b;
}

std::size_t IntervalMap::branch_of(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("branch_of: point outside [0,1]");
    // [a,b) ownership with the last branch closed
    for (std::size_t k = 0; k + 1 < branches.size(); ++k)
        if (x < branches[k].domain.hi) return k;
    return branches.size() - 1;
}

IntervalMap make_interval_map(std::vector<Branch> branches, std::string name,
                              std::map<std::string, double> params) {
    if (branches.empty()) throw std::invalid_argument("map needs at least one branch");
    constexpr double snap = 1e-12;
    if (std::fabs(branches.front().domain.lo) > snap ||
        std::fabs(branches.back().domain.hi - 1.0) > snap)
        throw std::invalid_argument("branch domains must cover [0,1]");
    branches.front().domain.lo = 0.0;
    branches.back().domain.hi = 1.0;
    for (std::size_t k = 0; k + 1 < branches.size(); ++k) {
        if (std::fabs(branches[k].domain.hi - branches[k + 1].domain.lo) > snap)
            throw std::invalid_argument("branch domains must tile [0,1] without gaps");
        branches[k + 1].domain.lo = branches[k].domain.hi;
    }
    for (const auto& b : branches)
        if (b.image.lo < -1e-9 || b.image.hi > 1.0 + 1e-9)
            throw std::invalid_argument("branch image leaves [0,1]: the map must be a self-map");
    IntervalMap m;
    m.branches = std::move(branches);
    m.name = std::move(name);
    m.params = std::move(params);
    return m;
}

IntervalMap mp_map(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("mp_map: alpha must be nonnegative");
    const BranchExpr first{0.0, 1.0, 1.0, 1.0 + alpha};   // x + x^(1+a)
    const BranchExpr second{-1.0, 1.0, 1.0, 1.0 + alpha}; // x + x^(1+a) - 1
    // c + c^(1+a) = 1  <=>  second(c) = 0
    const double c = bisect_increasing(second, 0.0, 1.0, 0.0);
    std::vector<Branch> branches;
    branches.push_back(Branch::make({0.0, c}, first));
    branches.push_back(Branch::make({c, 1.0}, second));
    return make_interval_map(std::move(branches), "mp",
                             {{"alpha", alpha}, {"c_alpha", c}});
}

IntervalMap counterexample_map() {
    std::vector<Branch> branches;
    branches.push_back(Branch::make({0.0, 5.0 / 12.0}, {0.5, 0.25, 0.0, 1.0}));
    branches.push_back(Branch::make({5.0 / 12.0, 0.5}, {1.0, -2.0, 0.0, 1.0}));
    branches.push_back(Branch::make({0.5, 1.0}, {0.25, 0.5, 0.0, 1.0}));
    return make_interval_map(std::move(branches), "counterexample");
}

double eval(const IntervalMap& map, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("eval: point outside [0,1]");
    double v = map.branches[map.branch_of(x)].forward(x);
    return std::clamp(v, 0.0, 1.0);
}

std::optional<double> branch_preimage(const IntervalMap& map, std::size_t branch_index, double y) {
    if (branch_index >= map.branches.size())
        throw std::out_of_range("branch_preimage: bad branch index");
    const Branch& b = map.branches[branch_index];
    // collar for image endpoints that carry root-finding rounding
    constexpr double collar = 1e-12;
    if (y < b.image.lo - collar || y > b.image.hi + collar) return std::nullopt;
    return invert_on_branch(b, std::clamp(y, b.image.lo, b.image.hi));
}

std::optional<Interval> preimage_of_interval(const IntervalMap& map, std::size_t branch_index,
                                             Interval target) {
    if (branch_index >= map.branches.size())
        throw std::out_of_range("preimage_of_interval: bad branch index");
    if (!(target.hi >= target.lo))
        throw std::invalid_argument("preimage_of_interval: empty target");
    const Branch& b = map.branches[branch_index];
    const double ylo = std::max(target.lo, b.image.lo);
    const double yhi = std::min(target.hi, b.image.hi);
    if (!(yhi > ylo)) return std::nullopt; // empty or a single point
    double a = invert_on_branch(b, ylo);
    double c = invert_on_branch(b, yhi);
    if (b.orientation == Orientation::decreasing) std::swap(a, c);
    return Interval{a, c};
}

bool FamilyReport::family_ok() const {
    for (bool v : is_piecewise_convex)
        if (!v) return false;
    for (bool v : origin_in_each_image)
        if (!v) return false;
    return !is_piecewise_convex.empty();
}

FamilyReport verify_family(const IntervalMap& map, std::size_t samples) {
    if (samples < 3) throw std::invalid_argument("verify_family: need samples >= 3");
    constexpr double convex_tol = -1e-12;
    constexpr double origin_tol = 1e-15;

    FamilyReport rep;
    rep.branch_count_bound = map.branches.size();
    for (std::size_t k = 0; k < map.branches.size(); ++k) {
        const Branch& b = map.branches[k];
        const double h = (b.domain.hi - b.domain.lo) / static_cast<double>(samples - 1);
        bool convex = true;
        for (std::size_t i = 1; i + 1 < samples; ++i) {
            double x = b.domain.lo + h * static_cast<double>(i);
            double d2 = b.forward(x - h) - 2.0 * b.forward(x) + b.forward(x + h);
            if (d2 < convex_tol) {
                convex = false;
                rep.violations.push_back({"convexity", k, x, d2});
                break;
            }
        }
        rep.is_piecewise_convex.push_back(convex);

        bool origin = b.image.lo <= origin_tol;
        if (!origin) {
            double arg = b.orientation == Orientation::increasing ? b.domain.lo : b.domain.hi;
            rep.violations.push_back({"origin_in_image", k, arg, b.image.lo});
        }
        rep.origin_in_each_image.push_back(origin);
    }
    return rep;
}

FamilyReport verify_expanding_conditions(const IntervalMap& map, double alpha, double C,
                                         std::size_t samples) {
    if (alpha < 0.0) throw std::invalid_argument("verify_expanding_conditions: alpha < 0");
    if (!(C > 0.0)) throw std::invalid_argument("verify_expanding_conditions: C must be positive");
    FamilyReport rep = verify_family(map, samples);

    // noncontraction: sampled difference quotients per branch
    constexpr double slope_tol = 1e-10;
    rep.noncontracting = true;
    for (std::size_t k = 0; k < map.branches.size(); ++k) {
        const Branch& b = map.branches[k];
        const double h = (b.domain.hi - b.domain.lo) / static_cast<double>(samples - 1);
        for (std::size_t i = 0; i + 1 < samples; ++i) {
            double x = b.domain.lo + h * static_cast<double>(i);
            double q = std::fabs(b.forward(x + h) - b.forward(x)) / h;
            if (q < 1.0 - slope_tol) {
                rep.noncontracting = false;
                rep.violations.push_back({"noncontracting", k, x, q});
                break;
            }
        }
    }

    // near-origin form (T(x) - x) / x^(1+alpha) -> C on x = 2^-k, k = 10..40.
    // The strict deviation test runs on the smallest scales only; coarser
    // scales may carry the o(x^(1+alpha)) remainder.
    constexpr int k_lo = 10, k_hi = 40, k_strict = 33, k_fit = 25;
    constexpr double form_tol = 1e-3;
    rep.local_form_ok = true;
    bool form_witnessed = false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int fit_count = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
        double x = std::ldexp(1.0, -k);
        if (x >= map.branches.front().domain.hi) continue;
        double gap = map.branches.front().forward(x) - x;
        if (!(gap > 0.0)) {
            rep.local_form_ok = false;
            if (!form_witnessed) rep.violations.push_back({"local_form", 0, x, gap});
            form_witnessed = true;
            break;
        }
        double ratio = gap / std::pow(x, 1.0 + alpha);
        if (k >= k_strict && std::fabs(ratio / C - 1.0) >= form_tol) {
            rep.local_form_ok = false;
            if (!form_witnessed) rep.violations.push_back({"local_form", 0, x, ratio});
            form_witnessed = true;
        }
        if (k >= k_fit) {
            double lx = std::log(x), ly = std::log(gap);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++fit_count;
        }
    }
    if (fit_count >= 2) {
        double denom = fit_count * sxx - sx * sx;
        double slope = (fit_count * sxy - sx * sy) / denom;
        double intercept = (sy - slope * sx) / fit_count;
        rep.fitted_exponent = slope - 1.0;
        rep.fitted_scale = std::exp(intercept);
    } else {
        rep.local_form_ok = false;
    }
    return rep;
}

} // namespace ulam
