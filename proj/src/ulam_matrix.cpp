#include "ulam/ulam_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ulam {

namespace {

// z + z^(1+alpha) = target, bracketed bisection on [0, target]
double solve_neutral_escape(double alpha, double target) {
    BranchExpr g{-target, 1.0, 1.0, 1.0 + alpha};
    double lo = 0.0, hi = std::min(target, 1.0);
    if (g(hi) < 0.0) hi = 1.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = g(mid);
        if (v == 0.0) return mid;
        if (v < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double UlamMatrix::entry(std::size_t i, std::size_t j) const {
    for (const auto& e : rows[i])
        if (e.col == j) return e.p;
    return 0.0;
}

UlamMatrix build_matrix(const IntervalMap& map, const Partition& p) {
    const std::size_t n = p.size();
    const auto& bps = p.breakpoints();
    std::vector<std::map<std::uint32_t, double>> acc(n);

    for (std::size_t j = 0; j < n; ++j) {
        const Interval target = p.cell(j);
        for (std::size_t b = 0; b < map.branches.size(); ++b) {
            auto pre = preimage_of_interval(map, b, target);
            if (!pre) continue;
            for (std::size_t i = p.locate(std::max(pre->lo, 0.0)); i < n && bps[i] < pre->hi; ++i) {
                double lo = std::max(bps[i], pre->lo);
                double hi = std::min(bps[i + 1], pre->hi);
                if (hi > lo)
                    acc[i][static_cast<std::uint32_t>(j)] += (hi - lo) / p.cell_length(i);
            }
        }
    }

    UlamMatrix m{n, {}, p, map.name, map.params, 0.0};
    m.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& [col, v] : acc[i]) sum += v;
        double residual = std::fabs(sum - 1.0);
        m.max_row_residual = std::max(m.max_row_residual, residual);
        if (residual > 1e-8) {
            std::ostringstream msg;
            msg << "build_matrix: row " << (i + 1) << " sums to " << sum
                << " before normalization (branch inversion bug?)";
            throw std::runtime_error(msg.str());
        }
        auto& row = m.rows[i];
        row.reserve(acc[i].size());
        for (const auto& [col, v] : acc[i]) row.push_back({col, v / sum});
        // pin the row sum to exactly 1 by absorbing the rounding leftover
        double scaled = 0.0;
        for (const auto& e : row) scaled += e.p;
        auto largest = std::max_element(row.begin(), row.end(),
                                        [](const auto& a, const auto& b) { return a.p < b.p; });
        largest->p += 1.0 - scaled;
    }
    return m;
}

std::vector<double> apply(const UlamMatrix& P, std::span<const double> w, ApplyDirection dir) {
    if (w.size() != P.n) throw std::invalid_argument("apply: vector length != matrix size");
    std::vector<double> out(P.n, 0.0);
    if (dir == ApplyDirection::left) {
        for (std::size_t i = 0; i < P.n; ++i) {
            const double wi = w[i];
            if (wi == 0.0) continue;
            for (const auto& e : P.rows[i]) out[e.col] += wi * e.p;
        }
    } else {
        for (std::size_t i = 0; i < P.n; ++i) {
            double s = 0.0;
            for (const auto& e : P.rows[i]) s += e.p * w[e.col];
            out[i] = s;
        }
    }
    return out;
}

FirstRowDiagnostics first_row_diagnostics(double alpha, const Partition& p) {
    if (alpha < 0.0) throw std::invalid_argument("first_row_diagnostics: alpha < 0");
    if (p.size() < 2)
        throw std::runtime_error("first_row_diagnostics: need at least two cells");
    FirstRowDiagnostics d;
    d.alpha = alpha;
    d.delta = p.delta();
    d.len1 = p.cell_length(0);
    d.len2 = p.cell_length(1);

    // non-strict: at alpha = 0 equal cells give |cell_1|^(1+alpha) == |cell_2|
    // and the first-row image still stops at the end of cell 2
    const double len1_pow = std::pow(d.len1, 1.0 + alpha);
    if (len1_pow > d.len2) {
        std::ostringstream msg;
        msg << "first_row_diagnostics: delta not small enough: |cell_1|^(1+alpha)=" << len1_pow
            << " must be < |cell_2|=" << d.len2;
        throw std::runtime_error(msg.str());
    }

    d.z1 = solve_neutral_escape(alpha, d.len1);
    d.z2 = solve_neutral_escape(alpha, std::min(d.len1 + len1_pow, d.len1 + d.len2));
    d.p11 = d.z1 / d.len1;
    d.p12 = 1.0 - d.p11;
    d.p12_lower = std::pow(2.0, -1.0 - alpha) * std::pow(d.len1, alpha);
    d.p12_upper = std::pow(d.len1, alpha);
    return d;
}

FirstRowCrossCheck cross_check_first_row(const FirstRowDiagnostics& d, const UlamMatrix& P) {
    FirstRowCrossCheck c;
    c.max_mismatch = std::max(std::fabs(d.p11 - P.entry(0, 0)), std::fabs(d.p12 - P.entry(0, 1)));
    for (const auto& e : P.rows[0])
        if (e.col > 1) c.support_first_two = false;
    return c;
}

} // namespace ulam
